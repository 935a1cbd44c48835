"""Text formats: the line-oriented network file and DIMACS CNF.

Network format (# starts a comment anywhere):

    vars <n>
    parents <child> <p1> ... <pk>     # omitted for roots
    cpt <child> <v1> ... <v_{2^k}>    # P(child=1|row), lexicographic rows,
                                      # first parent most significant

DIMACS: `p cnf <n> <m>` header, clauses as signed 1-based integers
terminated by 0, `c` comments.  A comment `c evidence` (or
`c extracted`) tags the next clause's provenance.  parse/serialize
round-trip exactly; serialized clause literals are ascending by
variable.
"""

from __future__ import annotations

import warnings

from .model import (
    EVIDENCE,
    EXTRACTED,
    QUERY,
    BeliefNetwork,
    Clause,
    CnfFormula,
    Cpt,
    Literal,
    ModelError,
    validate_network,
)


class ParseError(ValueError):
    """Malformed input file; the message carries the line number."""


def _fail(lineno: int, message: str) -> ParseError:
    return ParseError(f"line {lineno}: {message}")


def parse_network(text: str) -> BeliefNetwork:
    n = None
    parents: dict[int, tuple[int, ...]] = {}
    tables: dict[int, tuple[float, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        keyword = fields[0]
        if keyword == "vars":
            if n is not None:
                raise _fail(lineno, "duplicate vars line")
            if len(fields) != 2 or not fields[1].isdigit():
                raise _fail(lineno, "expected: vars <count>")
            n = int(fields[1])
            continue
        if n is None:
            raise _fail(lineno, "missing vars line before declarations")
        if keyword == "parents":
            try:
                child, *ps = (int(tok) for tok in fields[1:])
            except ValueError:
                raise _fail(lineno, "parents takes integers") from None
            if child in parents:
                raise _fail(lineno, f"duplicate parents line for variable {child}")
            parents[child] = tuple(ps)
        elif keyword == "cpt":
            if len(fields) < 3:
                raise _fail(lineno, "expected: cpt <child> <values...>")
            try:
                child = int(fields[1])
                values = tuple(float(tok) for tok in fields[2:])
            except ValueError:
                raise _fail(lineno, "cpt takes a child id and float values") from None
            if child in tables:
                raise _fail(lineno, f"duplicate cpt line for variable {child}")
            tables[child] = values
        else:
            raise _fail(lineno, f"unknown keyword {keyword!r}")
    if n is None:
        raise ParseError("missing vars line")
    cpts = []
    for child in range(n):
        if child not in tables:
            raise ParseError(f"variable {child} has no cpt line")
        cpts.append(Cpt(child, parents.get(child, ()), tables[child]))
    for child in parents:
        if not 0 <= child < n:
            raise ParseError(f"parents line for unknown variable {child}")
    for child in tables:
        if not 0 <= child < n:
            raise ParseError(f"cpt line for unknown variable {child}")
    try:
        net = BeliefNetwork(n, tuple(cpts))
        validate_network(net)
    except ModelError as exc:
        raise ParseError(str(exc)) from None
    return net


def serialize_network(net: BeliefNetwork, header: list[str] | None = None) -> str:
    lines = [f"# {h}" for h in header or []]
    lines.append(f"vars {net.n}")
    for cpt in net.cpts:
        if cpt.parents:
            lines.append(f"parents {cpt.child} " + " ".join(str(p) for p in cpt.parents))
        lines.append(f"cpt {cpt.child} " + " ".join(repr(v) for v in cpt.table))
    return "\n".join(lines) + "\n"


_TAG_COMMENTS = {"evidence": EVIDENCE, "extracted": EXTRACTED, "query": QUERY}


def parse_dimacs(text: str) -> CnfFormula:
    declared = None
    n_vars = 0
    clauses: list[Clause] = []
    tags: list[str] = []
    pending: list[Literal] = []
    pending_tag = QUERY
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            tag = line[1:].strip().lower()
            if tag in _TAG_COMMENTS:
                pending_tag = _TAG_COMMENTS[tag]
            continue
        if line.startswith("p"):
            fields = line.split()
            if declared is not None:
                raise _fail(lineno, "duplicate problem line")
            if len(fields) != 4 or fields[1] != "cnf":
                raise _fail(lineno, "expected: p cnf <vars> <clauses>")
            try:
                n_vars, declared = int(fields[2]), int(fields[3])
            except ValueError:
                raise _fail(lineno, "problem line counts must be integers") from None
            continue
        if declared is None:
            raise _fail(lineno, "clause before the problem line")
        for tok in line.split():
            try:
                code = int(tok)
            except ValueError:
                raise _fail(lineno, f"bad literal {tok!r}") from None
            if code == 0:
                try:
                    clauses.append(Clause(pending))
                except ModelError as exc:
                    raise _fail(lineno, str(exc)) from None
                tags.append(pending_tag)
                pending = []
                pending_tag = QUERY
                continue
            if abs(code) > n_vars:
                raise _fail(lineno, f"literal {code} exceeds declared {n_vars} variables")
            pending.append(Literal.from_signed(code))
    if pending:
        raise ParseError("unterminated clause at end of file")
    if declared is None:
        raise ParseError("missing problem line")
    if declared != len(clauses):
        warnings.warn(
            f"problem line declares {declared} clauses, file has {len(clauses)}",
            stacklevel=2,
        )
    return CnfFormula(clauses, tags)


def serialize_cnf(phi: CnfFormula, n_vars: int | None = None,
                  header: list[str] | None = None) -> str:
    if n_vars is None:
        n_vars = max((v for v in phi.variables()), default=-1) + 1
    lines = [f"c {h}" for h in header or []]
    lines.append(f"p cnf {n_vars} {len(phi.clauses)}")
    for clause, tag in phi.items():
        if tag != QUERY:
            lines.append(f"c {tag}")
        lines.append(" ".join(str(l.signed()) for l in clause.sorted_literals()) + " 0")
    return "\n".join(lines) + "\n"
