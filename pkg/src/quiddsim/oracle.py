"""Diagonal phase oracles compiled to diagrams.

An oracle is a +/-1 vector diagram: -1 on marked indices, +1 elsewhere.
Applying it is an elementwise product with the state, so no ancilla
qubits or controlled-gate networks are ever materialized.  The marked
count is recovered from the diagram itself by weighted path counting,
which stays exact for any k because it never enumerates indices.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .cnf import CnfFormula
from .quidd import QuiddError, QuiddManager


class OracleError(QuiddError):
    """Invalid oracle construction input."""


@dataclass(frozen=True)
class Predicate:
    """Search predicate: either an explicit marked set or a CNF formula."""

    k: int
    marked: frozenset[int] | None = None
    formula: CnfFormula | None = None

    def __post_init__(self):
        if (self.marked is None) == (self.formula is None):
            raise OracleError("exactly one of marked/formula must be given")

    @property
    def kind(self) -> str:
        return "marked_set" if self.marked is not None else "cnf"


@dataclass(frozen=True)
class Oracle:
    """Compiled phase oracle.  ``phase_vector`` is a ref into the manager
    that compiled it; ``marked_count`` was counted from the diagram."""

    phase_vector: int
    k: int
    marked_count: int
    provenance: Predicate


@dataclass(frozen=True)
class OracleSizeReport:
    k: int
    marked_count: int
    internal_nodes: int
    terminal_nodes: int


def _count_marked(m: QuiddManager, ref: int, k: int) -> int:
    """Number of -1 entries, by path counting weighted with 2^(skipped levels)."""
    memo: dict[int, int] = {}

    def qubit_of(n: int) -> int:
        return k if m.is_terminal(n) else m.var(n) // 2

    def count(n: int) -> int:
        c = memo.get(n)
        if c is not None:
            return c
        if m.is_terminal(n):
            c = 1 if m.value(n).real < 0 else 0
        else:
            q = m.var(n) // 2
            c = sum(count(child) << (qubit_of(child) - q - 1)
                    for child in (m.low(n), m.high(n)))
        memo[n] = c
        return c

    return count(ref) << qubit_of(ref)


def _checked_oracle(m: QuiddManager, ref: int, k: int, prov: Predicate) -> Oracle:
    seen = set()
    stack = [ref]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if m.is_terminal(n):
            if m.value(n) not in (1, -1):
                raise OracleError(
                    f"phase oracle terminal {m.value(n)!r} is not +/-1")
        else:
            stack.append(m.low(n))
            stack.append(m.high(n))
    return Oracle(ref, k, _count_marked(m, ref, k), prov)


def compile_marked_set(m: QuiddManager, k: int, indices) -> Oracle:
    """Compile an explicit marked set into a phase oracle.

    Cost is O(|indices| * k); a single marked index always compiles to a
    diagram with exactly k internal nodes, one per qubit on the path.
    """
    if k < 1:
        raise OracleError(f"oracles need at least one qubit, got {k}")
    idx = sorted(set(int(x) for x in indices))
    if idx and not (0 <= idx[0] and idx[-1] < (1 << k)):
        bad = idx[0] if idx[0] < 0 else idx[-1]
        raise OracleError(f"marked index {bad} out of range for {k} qubits")
    plus = m.terminal(1)
    minus = m.terminal(-1)

    def build(level: int, lo: int, hi: int, i0: int, i1: int) -> int:
        if i0 == i1:
            return plus
        if i1 - i0 == hi - lo:
            return minus
        mid = (lo + hi) >> 1
        split = bisect_left(idx, mid, i0, i1)
        return m.node(2 * level, build(level + 1, lo, mid, i0, split),
                      build(level + 1, mid, hi, split, i1))

    ref = build(0, 0, 1 << k, 0, len(idx))
    return _checked_oracle(m, ref, k, Predicate(k, marked=frozenset(idx)))


def _clause_indicator(m: QuiddManager, clause, num_vars: int) -> int:
    """0/1 diagram of one clause; at most one internal node per literal."""
    signs: dict[int, bool] = {}
    for lit in clause:
        v = abs(lit)
        pos = lit > 0
        if signs.get(v, pos) != pos:
            return m.terminal(1)        # v or not-v: tautological clause
        signs[v] = pos
    one = m.terminal(1)
    cur = m.terminal(0)
    for v in sorted(signs, reverse=True):
        var = 2 * (v - 1)
        cur = m.node(var, cur, one) if signs[v] else m.node(var, one, cur)
    return cur


def compile_cnf(m: QuiddManager, formula: CnfFormula) -> Oracle:
    """Compile a CNF formula into a phase oracle.

    Clause indicators are conjoined by elementwise product in input
    order, then the 0/1 indicator is mapped to +/-1 phases (1 -> -1).
    """
    acc = m.terminal(1)
    for clause in formula.clauses:
        acc = m.apply("mul", acc, _clause_indicator(m, clause, formula.num_vars))
    phase = m.apply("add", m.terminal(1), m.scalar_mul(-2.0, acc))
    return _checked_oracle(m, phase, formula.num_vars,
                           Predicate(formula.num_vars, formula=formula))


def model_count(m: QuiddManager, oracle: Oracle) -> int:
    """Recount the marked set size from the diagram (always exact)."""
    return _count_marked(m, oracle.phase_vector, oracle.k)


def apply_oracle(m: QuiddManager, oracle: Oracle, vec: int) -> int:
    """One oracle query: elementwise phase product with the state."""
    return m.apply("mul", oracle.phase_vector, vec)


def indicator_vector(m: QuiddManager, oracle: Oracle) -> int:
    """(1 - phase)/2: the 0/1 membership vector of the marked set."""
    return m.scalar_mul(0.5, m.apply("add", m.terminal(1),
                                     m.scalar_mul(-1.0, oracle.phase_vector)))


def oracle_size_report(m: QuiddManager, oracle: Oracle) -> OracleSizeReport:
    internal, terminal = m.count_nodes(oracle.phase_vector)
    return OracleSizeReport(oracle.k, oracle.marked_count, internal, terminal)


def _find_index(m: QuiddManager, ref: int, k: int, want_marked: bool) -> int | None:
    """Smallest-prefix index whose phase matches; skipped bits become 0."""

    def rec(n: int, level: int, prefix: int) -> int | None:
        if m.is_terminal(n):
            if (m.value(n).real < 0) == want_marked:
                return prefix << (k - level)
            return None
        if m.var(n) > 2 * level:
            return rec(n, level + 1, prefix << 1)
        hit = rec(m.low(n), level + 1, prefix << 1)
        if hit is not None:
            return hit
        return rec(m.high(n), level + 1, (prefix << 1) | 1)

    return rec(ref, 0, 0)


def any_marked_index(m: QuiddManager, oracle: Oracle) -> int | None:
    return _find_index(m, oracle.phase_vector, oracle.k, True)


def any_unmarked_index(m: QuiddManager, oracle: Oracle) -> int | None:
    return _find_index(m, oracle.phase_vector, oracle.k, False)
