"""Clause-level inference: unit application and bounded resolution."""

from __future__ import annotations

from typing import Iterable, Optional

from .model import Clause, Literal, ModelError


def apply_unit(clause: Clause, unit: Literal) -> Optional[Clause]:
    """Reduce ``clause`` under the assignment that makes ``unit`` true.

    Returns None when the clause is satisfied, the clause unchanged
    when it does not mention the unit's variable, and otherwise the
    clause with the falsified literal removed.  The result may be the
    empty clause.
    """
    if unit in clause.literals:
        return None
    opposite = -unit
    if opposite in clause.literals:
        return Clause(clause.literals - {opposite})
    return clause


def resolve(c1: Clause, c2: Clause, var: int) -> Optional[Clause]:
    """Resolvent of c1 and c2 on ``var``, or None when it is a tautology.

    One clause must contain the positive literal and the other the
    negative one.
    """
    pos = Literal(var, True)
    neg = Literal(var, False)
    if pos in c1.literals and neg in c2.literals:
        rest = (c1.literals - {pos}) | (c2.literals - {neg})
    elif neg in c1.literals and pos in c2.literals:
        rest = (c1.literals - {neg}) | (c2.literals - {pos})
    else:
        raise ModelError(f"clauses do not clash on variable {var}")
    try:
        return Clause(rest)
    except ModelError:
        return None


def bdr_step(clauses: Iterable[Clause], pivot: int, bound: Optional[int]) -> list[Clause]:
    """Directional resolution over ``pivot`` with a width bound.

    Resolves every positive/negative pair on the pivot and keeps the
    non-tautological resolvents with at most ``bound`` literals (no
    limit when bound is None).  Resolvents equal to an input clause or
    to an earlier resolvent are dropped.  Pair order follows the input
    order, so the result is deterministic.
    """
    pool = list(clauses)
    pos_lit = Literal(pivot, True)
    neg_lit = Literal(pivot, False)
    with_pos = [c for c in pool if pos_lit in c.literals]
    with_neg = [c for c in pool if neg_lit in c.literals]
    known = {c.literals for c in pool}
    out: list[Clause] = []
    for cp in with_pos:
        for cn in with_neg:
            r = resolve(cp, cn, pivot)
            if r is None:
                continue
            if bound is not None and len(r) > bound:
                continue
            if r.literals in known:
                continue
            known.add(r.literals)
            out.append(r)
    return out
