"""Classical search baselines: linear scan, random probing, Schoening walk.

These give the query counts that Grover runs are compared against.  The
scan and the probing strategies work on abstract predicates over 0..N-1;
the walk needs 3-CNF structure.  Every routine is deterministic given
its seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .cnf import CnfFormula, FormulaError, evaluate_bits, evaluate_index, is_3cnf
from .grover import optimal_iterations

_SCAN_BLOCK = 4096

WITH_REPLACEMENT = "with_replacement"
WITHOUT_REPLACEMENT = "without_replacement"


@dataclass(frozen=True)
class QueryLedger:
    """Outcome of a predicate search: how many queries, and what was found."""

    queries: int
    found: bool
    index: int | None


class MarkedSetPredicate:
    """Membership test for an explicit marked set, with vectorized blocks."""

    def __init__(self, indices):
        self.indices = frozenset(int(x) for x in indices)
        self._sorted = np.array(sorted(self.indices), dtype=np.int64)

    def __call__(self, x: int) -> bool:
        return x in self.indices

    def eval_block(self, xs: np.ndarray) -> np.ndarray:
        if self._sorted.size == 0:
            return np.zeros(len(xs), dtype=bool)
        pos = np.searchsorted(self._sorted, xs)
        pos = np.clip(pos, 0, self._sorted.size - 1)
        return self._sorted[pos] == xs


class CnfPredicate:
    """Predicate view of a CNF formula over packed assignment indices."""

    def __init__(self, formula: CnfFormula):
        self.formula = formula
        self.k = formula.num_vars

    def __call__(self, x: int) -> bool:
        return evaluate_index(self.formula, x)


def deterministic_scan(predicate, n_items: int, order=None) -> QueryLedger:
    """Probe items in a fixed order until the first hit.

    The ledger's query count is the 1-based position of the first marked
    item in the order.  With the default order and a predicate exposing
    ``eval_block``, probing runs in vectorized blocks; the count is the
    same as for the one-at-a-time loop.
    """
    if n_items < 1:
        raise ValueError("n_items must be >= 1")
    if order is None and hasattr(predicate, "eval_block"):
        for start in range(0, n_items, _SCAN_BLOCK):
            stop = min(start + _SCAN_BLOCK, n_items)
            hits = predicate.eval_block(np.arange(start, stop, dtype=np.int64))
            if hits.any():
                j = int(np.argmax(hits))
                return QueryLedger(start + j + 1, True, start + j)
        return QueryLedger(n_items, False, None)
    seq = range(n_items) if order is None else order
    queries = 0
    for x in seq:
        queries += 1
        if predicate(x):
            return QueryLedger(queries, True, x)
    return QueryLedger(queries, False, None)


def _lazy_permutation(n: int, rng: random.Random):
    # Inside-out Fisher-Yates; only touched positions are materialized,
    # so huge N costs memory proportional to the queries actually made.
    pool: dict[int, int] = {}
    for i in range(n):
        j = rng.randrange(i, n)
        yield pool.get(j, j)
        pool[j] = pool.get(i, i)


def randomized_search(predicate, n_items: int, mode: str, seed: int = 0,
                      max_queries: int | None = None) -> QueryLedger:
    """Probe uniformly random items until the first hit.

    ``with_replacement`` draws independently (bounded by ``max_queries``
    if given); ``without_replacement`` walks a lazy random permutation
    and never exceeds N queries.
    """
    if n_items < 1:
        raise ValueError("n_items must be >= 1")
    if mode not in (WITH_REPLACEMENT, WITHOUT_REPLACEMENT):
        raise ValueError(f"unknown mode: {mode!r}")
    rng = random.Random(seed)
    queries = 0
    if mode == WITH_REPLACEMENT:
        while max_queries is None or queries < max_queries:
            x = rng.randrange(n_items)
            queries += 1
            if predicate(x):
                return QueryLedger(queries, True, x)
        return QueryLedger(queries, False, None)
    budget = n_items if max_queries is None else min(n_items, max_queries)
    for x in _lazy_permutation(n_items, rng):
        if queries >= budget:
            break
        queries += 1
        if predicate(x):
            return QueryLedger(queries, True, x)
    return QueryLedger(queries, False, None)


@dataclass(frozen=True)
class WalkConfig:
    """Schoening walk parameters.  ``flips_per_trial`` defaults to 3k."""

    formula: CnfFormula
    flips_per_trial: int | None = None
    max_restarts: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be >= 1")
        if self.flips_per_trial is not None and self.flips_per_trial < 0:
            raise ValueError("flips_per_trial must be >= 0")


@dataclass(frozen=True)
class WalkResult:
    assignment: tuple[bool, ...] | None
    satisfied: bool
    restarts_used: int
    total_flips: int


class _WalkInstance:
    """Incremental clause bookkeeping for the random walk."""

    def __init__(self, formula: CnfFormula):
        self.clauses = [tuple(c) for c in formula.clauses]
        self.num_vars = formula.num_vars
        self.occ_pos: list[list[int]] = [[] for _ in range(self.num_vars)]
        self.occ_neg: list[list[int]] = [[] for _ in range(self.num_vars)]
        for ci, clause in enumerate(self.clauses):
            for lit in clause:
                (self.occ_pos if lit > 0 else self.occ_neg)[abs(lit) - 1].append(ci)
        self.sat_count = [0] * len(self.clauses)
        self.unsat: list[int] = []
        self.unsat_pos = [-1] * len(self.clauses)
        self.bits: list[bool] = []

    def reset(self, bits: list[bool]) -> None:
        self.bits = bits
        self.unsat.clear()
        for ci, clause in enumerate(self.clauses):
            n = sum(1 for lit in clause if bits[abs(lit) - 1] == (lit > 0))
            self.sat_count[ci] = n
            if n == 0:
                self.unsat_pos[ci] = len(self.unsat)
                self.unsat.append(ci)
            else:
                self.unsat_pos[ci] = -1

    def _make_unsat(self, ci: int) -> None:
        self.unsat_pos[ci] = len(self.unsat)
        self.unsat.append(ci)

    def _make_sat(self, ci: int) -> None:
        p = self.unsat_pos[ci]
        last = self.unsat[-1]
        self.unsat[p] = last
        self.unsat_pos[last] = p
        self.unsat.pop()
        self.unsat_pos[ci] = -1

    def flip(self, v: int) -> None:
        new_bit = not self.bits[v]
        self.bits[v] = new_bit
        gains = self.occ_pos[v] if new_bit else self.occ_neg[v]
        loses = self.occ_neg[v] if new_bit else self.occ_pos[v]
        for ci in gains:
            self.sat_count[ci] += 1
            if self.sat_count[ci] == 1:
                self._make_sat(ci)
        for ci in loses:
            self.sat_count[ci] -= 1
            if self.sat_count[ci] == 0:
                self._make_unsat(ci)


def schoening_walk(config: WalkConfig) -> WalkResult:
    """Random walk for 3-SAT, restarted from fresh uniform assignments.

    Each restart walks up to 3k flips; every flip picks a uniformly
    random unsatisfied clause and flips a uniformly random variable in
    it.  A returned assignment is re-verified against the formula before
    it leaves this function.
    """
    formula = config.formula
    if not is_3cnf(formula):
        raise FormulaError("the walk requires clauses of at most 3 literals")
    flips_budget = (config.flips_per_trial if config.flips_per_trial is not None
                    else 3 * formula.num_vars)
    rng = random.Random(config.seed)
    inst = _WalkInstance(formula)
    total_flips = 0
    for restart in range(1, config.max_restarts + 1):
        bits = [bool(rng.getrandbits(1)) for _ in range(formula.num_vars)]
        inst.reset(bits)
        for _ in range(flips_budget):
            if not inst.unsat:
                break
            clause = inst.clauses[inst.unsat[rng.randrange(len(inst.unsat))]]
            lit = clause[rng.randrange(len(clause))]
            inst.flip(abs(lit) - 1)
            total_flips += 1
        if not inst.unsat and evaluate_bits(formula, inst.bits):
            return WalkResult(tuple(inst.bits), True, restart, total_flips)
    return WalkResult(None, False, config.max_restarts, total_flips)


@dataclass(frozen=True)
class CrossoverRow:
    """Analytic query counts of every strategy at one problem size."""

    k: int
    n_items: int
    marked_count: int
    grover_queries: int
    deterministic_mean_queries: float
    randomized_without_replacement_mean: float
    randomized_with_replacement_mean: float
    schoening_flips_estimate: float


def crossover_table(k_values, marked_count: int = 1) -> list[CrossoverRow]:
    """Expected query counts per strategy over a range of register sizes.

    The scan and the no-replacement probe average (N+1)/(M+1) over
    uniformly placed marked sets; replacement probing averages N/M; the
    walk column is the 3k * (4/3)^k restart-cost curve for k-variable
    3-SAT, listed for scale whenever the predicate has that form.
    """
    if marked_count < 1:
        raise ValueError("marked_count must be >= 1")
    rows = []
    for k in k_values:
        n = 1 << k
        if marked_count > n:
            raise ValueError(f"marked_count {marked_count} exceeds N=2^{k}")
        rows.append(CrossoverRow(
            k=k,
            n_items=n,
            marked_count=marked_count,
            grover_queries=optimal_iterations(n, marked_count),
            deterministic_mean_queries=(n + 1) / (marked_count + 1),
            randomized_without_replacement_mean=(n + 1) / (marked_count + 1),
            randomized_with_replacement_mean=n / marked_count,
            schoening_flips_estimate=3.0 * k * (4.0 / 3.0) ** k,
        ))
    return rows


def coupon_collector_mean(marked_count: int) -> float:
    """M * H_M: expected draws to see all M outcomes of a uniform sampler."""
    return marked_count * sum(1.0 / i for i in range(1, marked_count + 1))


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent per-trial stream derived from (seed, trial index)."""
    return random.Random((seed << 32) ^ (trial * 0x9E3779B1))
