import pytest

from cnfbelief import (
    BeliefNetwork,
    Cpt,
    Ordering,
    UndirectedGraph,
    adjusted_induced_width,
    augmented_graph,
    induced_width,
    min_degree_order,
    moral_graph,
    ordering_for,
)
from cnfbelief.graphs import check_ordering, format_order, parse_order

from conftest import clause, formula

POS_MORAL_EDGES = {
    (0, 1), (0, 2), (0, 3), (1, 2), (1, 3),
    (1, 4), (2, 4), (3, 4), (3, 5), (4, 5),
}


def star(n_leaves: int = 3) -> UndirectedGraph:
    return UndirectedGraph(n_leaves + 1, [(0, k) for k in range(1, n_leaves + 1)])


class TestUndirectedGraph:
    def test_edges_are_symmetric(self):
        g = UndirectedGraph(3, [(0, 2)])
        assert g.neighbors(0) == {2}
        assert g.neighbors(2) == {0}
        assert g.degree(1) == 0

    def test_self_loop_rejected(self):
        g = UndirectedGraph(2)
        with pytest.raises(ValueError):
            g.add_edge(1, 1)

    def test_out_of_range_rejected(self):
        g = UndirectedGraph(2)
        with pytest.raises(ValueError):
            g.add_edge(0, 2)

    def test_add_clique(self):
        g = UndirectedGraph(4)
        g.add_clique([0, 1, 3])
        assert g.edge_set() == {(0, 1), (0, 3), (1, 3)}

    def test_copy_is_independent(self):
        g = UndirectedGraph(3, [(0, 1)])
        h = g.copy()
        h.add_edge(1, 2)
        assert g.edge_set() == {(0, 1)}
        assert h.edge_set() == {(0, 1), (1, 2)}


class TestOrdering:
    def test_must_be_permutation(self):
        with pytest.raises(ValueError):
            Ordering((0, 0, 1))
        with pytest.raises(ValueError):
            Ordering((1, 2))

    def test_position(self):
        assert Ordering((2, 0, 1)).position() == {2: 0, 0: 1, 1: 2}

    def test_latest(self):
        o = Ordering((2, 0, 1))
        assert o.latest([0, 2]) == 0
        assert o.latest([2, 1]) == 1

    def test_check_ordering_accepts_sequences(self):
        assert check_ordering([1, 0]) == Ordering((1, 0))
        o = Ordering((0, 1))
        assert check_ordering(o) is o


class TestInteractionGraphs:
    def test_moral_graph_marries_parents(self, pos_net):
        assert moral_graph(pos_net).edge_set() == POS_MORAL_EDGES

    def test_moral_graph_two_nodes(self, net2):
        assert moral_graph(net2).edge_set() == {(0, 1)}

    def test_augmented_adds_clause_cliques(self):
        chain = BeliefNetwork(3, (
            Cpt(0, (), (0.5,)),
            Cpt(1, (0,), (0.3, 0.8)),
            Cpt(2, (1,), (0.3, 0.8)),
        ))
        phi = formula(clause(1, 3))
        g = augmented_graph(chain, phi)
        assert g.edge_set() == {(0, 1), (1, 2), (0, 2)}

    def test_augmented_no_new_edges_when_clauses_follow_families(self, pos_net, phi42):
        # every clause scope of phi42 is already married by some family
        assert augmented_graph(pos_net, phi42).edge_set() == POS_MORAL_EDGES

    def test_augmented_rejects_foreign_variables(self, net2):
        with pytest.raises(ValueError):
            augmented_graph(net2, formula(clause(5)))


class TestWidth:
    def test_cycle_has_width_two(self):
        g = UndirectedGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        assert induced_width(g, Ordering((0, 1, 2, 3))) == 2

    def test_star_width_depends_on_ordering(self):
        g = star()
        # center eliminated first: all leaves are neighbors
        assert induced_width(g, Ordering((1, 2, 3, 0))) == 3
        # leaves eliminated first: each sees only the center
        assert induced_width(g, Ordering((0, 3, 2, 1))) == 1

    def test_min_degree_finds_width_one_on_star(self):
        g = star()
        o = min_degree_order(g)
        # leaf 1 is eliminated first, then 2; the degree-1 tie between
        # the shrunken center and leaf 3 goes to the smaller index
        assert o == Ordering((3, 0, 2, 1))
        assert induced_width(g, o) == 1

    def test_example_ordering_width(self, pos_net, phi42, d1):
        g = augmented_graph(pos_net, phi42)
        assert induced_width(g, d1) == 3

    def test_min_degree_on_example(self, pos_net, phi42):
        g = augmented_graph(pos_net, phi42)
        o = min_degree_order(g)
        assert o == Ordering((4, 3, 2, 1, 0, 5))
        assert induced_width(g, o) == 3

    def test_ordering_for_uses_augmented_graph(self, pos_net, phi42):
        assert ordering_for(pos_net, phi42) == min_degree_order(
            augmented_graph(pos_net, phi42)
        )

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            induced_width(star(), Ordering((0, 1)))


class TestAdjustedWidth:
    def test_observed_center_eliminates_fill(self):
        g = star()
        o = Ordering((1, 2, 3, 0))
        assert induced_width(g, o) == 3
        assert adjusted_induced_width(g, o, {0}) == 0

    def test_observed_vertex_still_counts_as_neighbor(self):
        g = star()
        o = Ordering((0, 3, 2, 1))
        # each leaf still sees the observed center, so the width is 1, not 0
        assert adjusted_induced_width(g, o, {0}) == 1

    def test_observed_chain_middle(self):
        g = UndirectedGraph(3, [(0, 1), (1, 2)])
        o = Ordering((2, 0, 1))
        assert induced_width(g, o) == 2
        assert adjusted_induced_width(g, o, {1}) == 0

    def test_no_observations_matches_plain_width(self, pos_net, phi42, d1):
        g = augmented_graph(pos_net, phi42)
        assert adjusted_induced_width(g, d1, ()) == induced_width(g, d1)


class TestOrderParsing:
    def test_round_trip(self):
        o = Ordering((2, 0, 1))
        assert parse_order(format_order(o), 3) == o

    def test_rejects_bad_token(self):
        with pytest.raises(ValueError):
            parse_order("0 one 2", 3)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            parse_order("0 1 1", 3)
        with pytest.raises(ValueError):
            parse_order("0 1", 3)
