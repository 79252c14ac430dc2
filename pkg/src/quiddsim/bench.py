"""Experiment drivers emitting deterministic CSV tables.

Five experiments: ``scaling`` (wall time of the Grover loop against k),
``oracle_stats`` (diagram sizes of compiled oracles), ``crossover``
(analytic query counts per strategy), ``trace`` (per-iteration profile
of one run) and ``repeat_until_all_found`` (repetitions until every marked item has
been observed).  All CSV content is reproducible from the seed except
the wall-clock columns (``wall_ns``, ``compile_ns``).  Floats are
serialized with 12 significant digits.
"""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass

import numpy as np

from . import grover
from .baselines import coupon_collector_mean, crossover_table
from .cnf import parse_dimacs, parse_marked_file
from .oracle import Oracle, compile_cnf, compile_marked_set, oracle_size_report
from .quidd import QuiddManager

EXPERIMENTS = ("scaling", "oracle_stats", "crossover", "trace", "repeat_until_all_found")

SCALING_HEADER = "k,iterations,wall_ns,peak_internal_nodes,seed"
ORACLE_STATS_HEADER = "k,M,internal_nodes,terminal_nodes,compile_ns"
CROSSOVER_HEADER = ("k,n,m,grover_queries,deterministic_mean_queries,"
                    "randomized_without_replacement_mean,"
                    "randomized_with_replacement_mean,schoening_flips_estimate")
TRACE_HEADER = ("t,success_prob,marked_amp_re,marked_amp_im,"
                "unmarked_amp_re,unmarked_amp_im,live_internal_nodes,norm_sq")
REPEAT_ALL_HEADER = "experiment,repetitions"


@dataclass
class ExperimentConfig:
    """Shared knob set for every experiment kind."""

    kind: str
    k_min: int = 10
    k_max: int = 20
    marked_count: int | None = None
    marked_path: str | None = None
    cnf_path: str | None = None
    repetitions: int = 3
    seed: int = 0
    out: str | None = None
    iterations: int | None = None
    iteration_multiplier: float | None = None

    def __post_init__(self):
        if self.kind not in EXPERIMENTS:
            raise ValueError(f"unknown experiment kind: {self.kind!r}")
        if self.k_min < 1 or self.k_max < self.k_min:
            raise ValueError(f"bad k range {self.k_min}..{self.k_max}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.marked_count is not None and self.marked_count < 0:
            raise ValueError("marked count must be >= 0")


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _write_csv(path: str | None, header: str, rows) -> list[str]:
    lines = [header] + [",".join(_fmt(x) for x in row) for row in rows]
    if path is not None:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return lines


def _derive(*parts: int) -> int:
    # Order-sensitive integer mix; stable across processes, unlike hash().
    h = 0x243F6A88
    for p in parts:
        h = (h * 0x100000001B3 + p) % (1 << 61)
    return h


def _marked_for(seed: int, k: int, count: int) -> list[int]:
    rng = random.Random(_derive(seed, k, count))
    n = 1 << k
    if count > n:
        raise ValueError(f"marked count {count} exceeds N=2^{k}")
    if count > n // 2:
        return sorted(rng.sample(range(n), count))
    out: set[int] = set()
    while len(out) < count:
        out.add(rng.randrange(n))
    return sorted(out)


def _oracle_from_config(m: QuiddManager, cfg: ExperimentConfig, k: int) -> Oracle:
    if cfg.cnf_path is not None:
        with open(cfg.cnf_path) as fh:
            formula = parse_dimacs(fh.read())
        return compile_cnf(m, formula)
    if cfg.marked_path is not None:
        with open(cfg.marked_path) as fh:
            indices = parse_marked_file(fh.read())
        return compile_marked_set(m, k, indices)
    count = cfg.marked_count if cfg.marked_count is not None else 1
    return compile_marked_set(m, k, _marked_for(cfg.seed, k, count))


# ----------------------------------------------------------------------
# scaling

@dataclass(frozen=True)
class ScalingSample:
    k: int
    iterations: int
    wall_ns: tuple[int, ...]
    median_wall_ns: float
    peak_internal_nodes: int


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of log2(median loop time / k) against k.

    ``growth_base`` is the per-qubit multiplier (2**slope) and
    ``constant_ns`` the prefactor, so time ~= constant_ns * k *
    growth_base**k.  Requires at least 5 distinct k.
    """

    samples: tuple[ScalingSample, ...]
    growth_base: float
    constant_ns: float
    residuals: tuple[float, ...]
    peak_node_correlation: float


def fit_scaling(samples) -> ScalingFit:
    samples = tuple(samples)
    ks = np.array([s.k for s in samples], dtype=float)
    if len(set(s.k for s in samples)) < 5:
        raise ValueError("scaling fit needs at least 5 distinct k")
    ys = np.log2(np.array([s.median_wall_ns for s in samples]) / ks)
    slope, intercept = np.polyfit(ks, ys, 1)
    residuals = ys - (slope * ks + intercept)
    peaks = np.array([s.peak_internal_nodes for s in samples], dtype=float)
    corr = float(np.corrcoef(ks, peaks)[0, 1])
    return ScalingFit(samples, float(2.0 ** slope), float(2.0 ** intercept),
                      tuple(float(r) for r in residuals), corr)


def run_scaling(cfg: ExperimentConfig) -> ScalingFit:
    """Time the Grover loop for one single-marked oracle per k.

    ``wall_ns`` is the iteration loop only; oracle compilation and gate
    construction are excluded.  The median over repetitions feeds the
    fit.
    """
    rows = []
    samples = []
    count = cfg.marked_count if cfg.marked_count is not None else 1
    for k in range(cfg.k_min, cfg.k_max + 1):
        walls = []
        peak = 0
        iterations = 0
        for rep in range(cfg.repetitions):
            rep_seed = _derive(cfg.seed, k, rep)
            m = QuiddManager()
            oracle = compile_marked_set(m, k, _marked_for(rep_seed, k, count))
            record = grover.run(m, oracle,
                                grover.GroverParams(k=k, seed=rep_seed))
            walls.append(record.loop_ns)
            peak = max(peak, record.peak_live_internal_nodes)
            iterations = record.iterations
            rows.append((k, record.iterations, record.loop_ns,
                         record.peak_live_internal_nodes, rep_seed))
        samples.append(ScalingSample(k, iterations, tuple(walls),
                                     float(statistics.median(walls)), peak))
    _write_csv(cfg.out, SCALING_HEADER, rows)
    return fit_scaling(samples)


# ----------------------------------------------------------------------
# oracle stats

def run_oracle_stats(cfg: ExperimentConfig) -> list[tuple]:
    """Compile oracles across the k range and report diagram sizes."""
    rows = []
    if cfg.cnf_path is not None or cfg.marked_path is not None:
        ks = [cfg.k_min]
    else:
        ks = list(range(cfg.k_min, cfg.k_max + 1))
    for k in ks:
        m = QuiddManager()
        t0 = time.perf_counter_ns()
        oracle = _oracle_from_config(m, cfg, k)
        compile_ns = time.perf_counter_ns() - t0
        rep = oracle_size_report(m, oracle)
        rows.append((rep.k, rep.marked_count, rep.internal_nodes,
                     rep.terminal_nodes, compile_ns))
    _write_csv(cfg.out, ORACLE_STATS_HEADER, rows)
    return rows


# ----------------------------------------------------------------------
# crossover

def run_crossover(cfg: ExperimentConfig) -> list[tuple]:
    count = cfg.marked_count if cfg.marked_count is not None else 1
    rows = [(r.k, r.n_items, r.marked_count, r.grover_queries,
             r.deterministic_mean_queries,
             r.randomized_without_replacement_mean,
             r.randomized_with_replacement_mean,
             r.schoening_flips_estimate)
            for r in crossover_table(range(cfg.k_min, cfg.k_max + 1), count)]
    _write_csv(cfg.out, CROSSOVER_HEADER, rows)
    return rows


# ----------------------------------------------------------------------
# trace

def run_trace(cfg: ExperimentConfig) -> grover.GroverRun:
    """One fully traced run at k = k_min; iteration count may be forced
    or scaled (e.g. 3x the ideal) to expose the periodic success curve."""
    k = cfg.k_min
    m = QuiddManager()
    oracle = _oracle_from_config(m, cfg, k)
    iterations = cfg.iterations
    if iterations is None and cfg.iteration_multiplier is not None:
        if oracle.marked_count == 0:
            raise ValueError("iteration multiplier needs a solvable oracle")
        base = grover.optimal_iterations(1 << k, oracle.marked_count)
        iterations = round(base * cfg.iteration_multiplier)
    record = grover.run(m, oracle, grover.GroverParams(
        k=k, iterations=iterations, seed=cfg.seed))
    rows = []
    for s in record.trace:
        ma = s.marked_amp if s.marked_amp is not None else complex("nan")
        ua = s.unmarked_amp if s.unmarked_amp is not None else complex("nan")
        rows.append((s.t, s.success_prob, ma.real, ma.imag, ua.real, ua.imag,
                     s.live_internal_nodes, s.norm_sq))
    _write_csv(cfg.out, TRACE_HEADER, rows)
    return record


# ----------------------------------------------------------------------
# repeat until all marked items found

@dataclass(frozen=True)
class RepeatAllResult:
    repetition_counts: tuple[int, ...]
    mean_repetitions: float
    coupon_collector_expectation: float


_REPEAT_CAP = 100_000


def run_repeat_all(cfg: ExperimentConfig) -> RepeatAllResult:
    """Repeat full Grover runs, measuring once per run, until every
    marked item has been observed; ``repetitions`` is the experiment
    count.  Valid as a coupon-collector probe because a run at the ideal
    iteration count succeeds with probability near one and the final
    state weights all marked items equally."""
    k = cfg.k_min
    count = cfg.marked_count if cfg.marked_count is not None else 4
    if count < 1:
        raise ValueError("repeat_until_all_found needs at least one marked item")
    marked = _marked_for(cfg.seed, k, count)
    target = set(marked)
    rows = []
    counts = []
    for exp in range(cfg.repetitions):
        m = QuiddManager()
        oracle = compile_marked_set(m, k, marked)
        seen: set[int] = set()
        reps = 0
        while seen != target and reps < _REPEAT_CAP:
            record = grover.run(m, oracle, grover.GroverParams(
                k=k, seed=_derive(cfg.seed, exp, reps), shots=1))
            reps += 1
            outcome = record.measurements[0]
            if outcome in target:
                seen.add(outcome)
        counts.append(reps)
        rows.append((exp, reps))
    _write_csv(cfg.out, REPEAT_ALL_HEADER, rows)
    return RepeatAllResult(tuple(counts),
                           sum(counts) / len(counts),
                           coupon_collector_mean(count))
