"""Interaction graphs, elimination orderings, and induced width.

The moral graph connects each variable to its CPT family; the augmented
graph additionally clique-connects the variables of every clause.
Orderings are stored first-to-last; elimination processes them
last-to-first, which is also the direction induced width is measured
in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import BeliefNetwork, CnfFormula


class UndirectedGraph:
    """Simple undirected graph on vertices 0..n-1, no self-loops."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop on vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def add_clique(self, vertices: Iterable[int]) -> None:
        vs = list(vertices)
        for i, u in enumerate(vs):
            for v in vs[i + 1:]:
                if u != v:
                    self.add_edge(u, v)

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_set(self) -> set[tuple[int, int]]:
        return {(u, v) for u in range(self.n) for v in self.adj[u] if u < v}

    def copy(self) -> "UndirectedGraph":
        g = UndirectedGraph(self.n)
        g.adj = [set(s) for s in self.adj]
        return g


@dataclass(frozen=True)
class Ordering:
    """A permutation of 0..n-1, stored first-to-last."""

    order: tuple[int, ...]

    def __post_init__(self):
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {self.order}")

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def latest(self, variables: Iterable[int]) -> int:
        """The variable of ``variables`` appearing last in the order."""
        pos = self.position()
        return max(variables, key=pos.__getitem__)


def moral_graph(net: BeliefNetwork) -> UndirectedGraph:
    """Connect each variable with its parents and marry the parents."""
    g = UndirectedGraph(net.n)
    for v in net.variables():
        g.add_clique(net.family(v))
    return g


def augmented_graph(net: BeliefNetwork, phi: CnfFormula) -> UndirectedGraph:
    """Moral graph plus a clique over each clause's variables."""
    g = moral_graph(net)
    for clause in phi.clauses:
        vs = clause.variables()
        if any(not 0 <= v < net.n for v in vs):
            raise ValueError(f"clause variable out of range in {clause}")
        g.add_clique(vs)
    return g


def min_degree_order(graph: UndirectedGraph) -> Ordering:
    """Greedy min-degree elimination ordering.

    Vertices are selected last-to-first: each step picks the minimum
    degree vertex of the shrinking graph (smallest index on ties),
    connects its neighbors, and removes it.  The selected vertex goes
    to the latest unfilled slot, so eliminating the returned order
    last-to-first replays the greedy choices.
    """
    work = graph.copy()
    alive = set(range(graph.n))
    slots: list[int] = [0] * graph.n
    for slot in range(graph.n - 1, -1, -1):
        v = min(alive, key=lambda u: (len(work.adj[u]), u))
        slots[slot] = v
        neighbors = list(work.adj[v])
        for i, a in enumerate(neighbors):
            for b in neighbors[i + 1:]:
                work.adj[a].add(b)
                work.adj[b].add(a)
        for a in neighbors:
            work.adj[a].discard(v)
        work.adj[v].clear()
        alive.discard(v)
    return Ordering(tuple(slots))


def induced_width(graph: UndirectedGraph, ordering: Ordering) -> int:
    """Width of the graph induced by eliminating last-to-first.

    Eliminating a vertex connects its not-yet-eliminated neighbors; the
    width is the largest neighbor count seen at elimination time.
    """
    if len(ordering) != graph.n:
        raise ValueError("ordering does not cover the graph")
    work = graph.copy()
    width = 0
    for v in reversed(ordering.order):
        neighbors = list(work.adj[v])
        width = max(width, len(neighbors))
        for i, a in enumerate(neighbors):
            for b in neighbors[i + 1:]:
                work.adj[a].add(b)
                work.adj[b].add(a)
        for a in neighbors:
            work.adj[a].discard(v)
        work.adj[v].clear()
    return width


def adjusted_induced_width(
    graph: UndirectedGraph, ordering: Ordering, observed: Iterable[int]
) -> int:
    """Induced width that treats observed vertices as already assigned.

    An observed vertex contributes width 0 and adds no fill edges when
    eliminated, but it still counts as a neighbor of the unobserved
    vertices around it.
    """
    if len(ordering) != graph.n:
        raise ValueError("ordering does not cover the graph")
    obs = set(observed)
    work = graph.copy()
    width = 0
    for v in reversed(ordering.order):
        neighbors = list(work.adj[v])
        if v not in obs:
            width = max(width, len(neighbors))
            for i, a in enumerate(neighbors):
                for b in neighbors[i + 1:]:
                    work.adj[a].add(b)
                    work.adj[b].add(a)
        for a in neighbors:
            work.adj[a].discard(v)
        work.adj[v].clear()
    return width


def ordering_for(net: BeliefNetwork, phi: CnfFormula) -> Ordering:
    """Default ordering: min-degree on the augmented graph."""
    return min_degree_order(augmented_graph(net, phi))


def parse_order(text: str, n: int) -> Ordering:
    """Read a whitespace-separated variable order (first-to-last)."""
    try:
        values = tuple(int(tok) for tok in text.split())
    except ValueError as exc:
        raise ValueError(f"bad ordering token: {exc}") from None
    if len(values) != n or sorted(values) != list(range(n)):
        raise ValueError(f"ordering must list each of 0..{n - 1} exactly once")
    return Ordering(values)


def format_order(ordering: Ordering) -> str:
    return " ".join(str(v) for v in ordering.order)


def check_ordering(ordering: Sequence[int] | Ordering) -> Ordering:
    if isinstance(ordering, Ordering):
        return ordering
    return Ordering(tuple(ordering))
