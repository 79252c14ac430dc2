"""Grover search on diagram state vectors, with full per-iteration tracing.

One iteration is an oracle phase flip followed by the inversion about
the mean.  The engine counts exactly one oracle query per iteration,
records amplitudes, success probability, norm and live node footprint
after every iteration, and samples measurements from the final state
without mutating it.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

from . import gates
from .oracle import (Oracle, any_marked_index, any_unmarked_index,
                     apply_oracle, indicator_vector)
from .quidd import QuiddManager


class NoSolutionError(ValueError):
    """Iteration-count request for a predicate with no solutions."""


def ideal_success_probability(t: int, n_items: int, marked_count: int) -> float:
    """sin^2((2t+1) * asin(sqrt(M/N))): success probability after t iterations."""
    theta = math.asin(math.sqrt(marked_count / n_items))
    return math.sin((2 * t + 1) * theta) ** 2


def optimal_iterations(n_items: int, marked_count: int) -> int:
    """Iteration count maximizing the success probability.

    floor(pi / (4 * asin(sqrt(M/N)))), nudged to a neighbouring integer
    when that strictly improves the ideal success probability.  0 when
    every item is marked; raises when none is.
    """
    if n_items < 1:
        raise ValueError(f"n_items must be >= 1, got {n_items}")
    if marked_count < 0 or marked_count > n_items:
        raise ValueError(f"marked count {marked_count} out of range 0..{n_items}")
    if marked_count == 0:
        raise NoSolutionError("no marked items: iteration count is undefined")
    if marked_count == n_items:
        return 0
    theta = math.asin(math.sqrt(marked_count / n_items))
    base = math.floor(math.pi / (4.0 * theta))
    best = None
    best_p = -1.0
    for r in sorted({max(base - 1, 0), base, base + 1}):
        p = math.sin((2 * r + 1) * theta) ** 2
        if p > best_p:
            best, best_p = r, p
    return best


@dataclass(frozen=True)
class GroverParams:
    """Run parameters.  ``iterations`` of None means the ideal count for
    the oracle's own marked count (or the override, for sensitivity runs)."""

    k: int
    iterations: int | None = None
    seed: int = 0
    shots: int = 1
    marked_count_override: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.iterations is not None and self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.shots < 0:
            raise ValueError("shots must be >= 0")


@dataclass(frozen=True)
class IterationStats:
    """State snapshot after iteration t (t = 0 is the initial state)."""

    t: int
    marked_amp: complex | None
    unmarked_amp: complex | None
    success_prob: float
    norm_sq: float
    live_internal_nodes: int


@dataclass(frozen=True)
class GroverRun:
    """Complete record of one run.  Everything except the wall-clock
    fields is a pure function of (oracle, params)."""

    params: GroverParams
    k: int
    marked_count: int
    iterations: int
    queries: int
    no_solution: bool
    trace: tuple[IterationStats, ...]
    measurements: tuple[int, ...]
    peak_live_internal_nodes: int
    final_state: int
    loop_ns: int
    wall_ns: int

    def comparable(self) -> dict:
        """All fields that must be bit-identical across reruns."""
        return {
            "params": self.params,
            "k": self.k,
            "marked_count": self.marked_count,
            "iterations": self.iterations,
            "queries": self.queries,
            "no_solution": self.no_solution,
            "trace": self.trace,
            "measurements": self.measurements,
            "peak_live_internal_nodes": self.peak_live_internal_nodes,
        }


def initialize_state(m: QuiddManager, k: int) -> int:
    """H on every qubit of |0...0>: the uniform superposition.

    The result is a single terminal 2^(-k/2) regardless of k.
    """
    zero = m.terminal(0)
    cur = m.terminal(1)
    for i in range(k - 1, -1, -1):
        cur = m.node(2 * i, cur, zero)
    return m.matvec(gates.hadamard_all(m, k), cur, k)


def grover_iterate(m: QuiddManager, oracle: Oracle, state: int,
                   diffusion_ref: int | None = None) -> int:
    """One Grover iteration: oracle phases, then inversion about the mean."""
    if diffusion_ref is None:
        diffusion_ref = gates.diffusion(m, oracle.k)
    return m.matvec(diffusion_ref, apply_oracle(m, oracle, state), oracle.k)


def measure(m: QuiddManager, state: int, k: int, rng: random.Random) -> int:
    """Sample one basis index with probability |amplitude|^2.

    A single top-down pass over the diagram; subtree masses weight the
    branch choice, skipped variables contribute unbiased bits.  The
    state is not modified.
    """
    mass: dict[int, float] = {}

    def qubit_of(n: int) -> int:
        return k if m.is_terminal(n) else m.var(n) // 2

    def weight(n: int) -> float:
        w = mass.get(n)
        if w is not None:
            return w
        if m.is_terminal(n):
            w = abs(m.value(n)) ** 2
        else:
            q = m.var(n) // 2
            w = sum(weight(child) * (1 << (qubit_of(child) - q - 1))
                    for child in (m.low(n), m.high(n)))
        mass[n] = w
        return w

    if weight(state) <= 0.0:
        raise ValueError("cannot measure a zero state")
    index = 0
    cur = state
    for q in range(k):
        if m.is_terminal(cur) or m.var(cur) > 2 * q:
            bit = rng.getrandbits(1)
        else:
            lo, hi = m.low(cur), m.high(cur)
            wl = weight(lo) * (1 << (qubit_of(lo) - q - 1))
            wh = weight(hi) * (1 << (qubit_of(hi) - q - 1))
            bit = 0 if rng.random() * (wl + wh) < wl else 1
            cur = hi if bit else lo
        index = (index << 1) | bit
    return index


def _stats(m: QuiddManager, t: int, state: int, indicator: int,
           marked_idx: int | None, unmarked_idx: int | None,
           live_roots: tuple[int, ...], k: int) -> IterationStats:
    marked_amp = (m.entry_at(state, marked_idx, k)
                  if marked_idx is not None else None)
    unmarked_amp = (m.entry_at(state, unmarked_idx, k)
                    if unmarked_idx is not None else None)
    masked = m.apply("mul", indicator, state)
    p = m.inner_product(masked, masked, k).real
    p = min(max(p, 0.0), 1.0)
    norm_sq = m.inner_product(state, state, k).real
    live = m.count_nodes(state, *live_roots).internal
    return IterationStats(t, marked_amp, unmarked_amp, p, norm_sq, live)


def run(m: QuiddManager, oracle: Oracle, params: GroverParams) -> GroverRun:
    """Execute a full Grover run and return its record.

    With zero marked items the run still completes (the state stays
    uniform) and is flagged ``no_solution``; the default iteration count
    is then 0.
    """
    t_start = time.perf_counter_ns()
    if params.k != oracle.k:
        raise ValueError(f"params.k={params.k} but oracle has k={oracle.k}")
    k = oracle.k
    n_items = 1 << k
    marked_count = (params.marked_count_override
                    if params.marked_count_override is not None
                    else oracle.marked_count)
    no_solution = oracle.marked_count == 0
    if params.iterations is not None:
        iterations = params.iterations
    elif no_solution:
        iterations = 0
    else:
        iterations = optimal_iterations(n_items, marked_count)

    diffusion_ref = gates.diffusion(m, k)
    indicator = indicator_vector(m, oracle)
    marked_idx = any_marked_index(m, oracle)
    unmarked_idx = any_unmarked_index(m, oracle)
    live_roots = (oracle.phase_vector, indicator, diffusion_ref)

    state = initialize_state(m, k)
    trace = [_stats(m, 0, state, indicator, marked_idx, unmarked_idx,
                    live_roots, k)]
    queries = 0
    loop_start = time.perf_counter_ns()
    for t in range(1, iterations + 1):
        state = m.matvec(diffusion_ref, apply_oracle(m, oracle, state), k)
        queries += 1
        trace.append(_stats(m, t, state, indicator, marked_idx, unmarked_idx,
                            live_roots, k))
    loop_ns = time.perf_counter_ns() - loop_start

    rng = random.Random(params.seed)
    measurements = tuple(measure(m, state, k, rng)
                         for _ in range(params.shots))
    return GroverRun(
        params=params,
        k=k,
        marked_count=oracle.marked_count,
        iterations=iterations,
        queries=queries,
        no_solution=no_solution,
        trace=tuple(trace),
        measurements=measurements,
        peak_live_internal_nodes=max(s.live_internal_nodes for s in trace),
        final_state=state,
        loop_ns=loop_ns,
        wall_ns=time.perf_counter_ns() - t_start,
    )


@dataclass(frozen=True)
class TraceReport:
    """Success-probability profile of a run: the peaks and what follows."""

    success_probs: tuple[float, ...]
    local_maxima: tuple[int, ...]
    first_peak: int | None
    declines_after_first_peak: bool


def amplitude_trace_report(run_record: GroverRun) -> TraceReport:
    """Locate strict local maxima of the per-iteration success series.

    Endpoints count as maxima when they strictly beat their single
    neighbour.  ``declines_after_first_peak`` demands a strict drop at
    the iteration right after the first peak, the signature of running
    past the ideal stopping point.
    """
    p = tuple(s.success_prob for s in run_record.trace)
    maxima = []
    last = len(p) - 1
    for t in range(len(p)):
        left_ok = t == 0 or p[t] > p[t - 1]
        right_ok = t == last or p[t] > p[t + 1]
        if left_ok and right_ok and len(p) > 1:
            maxima.append(t)
    first = maxima[0] if maxima else None
    declines = first is not None and first < last and p[first + 1] < p[first]
    return TraceReport(p, tuple(maxima), first, declines)
