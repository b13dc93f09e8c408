"""Channel sampling, repeated decode trials, and failure-rate sweeps.

Every trial draws its random stream from (seed, point index, trial
index), so results are a pure function of the configuration and do not
depend on worker count or scheduling; per-worker tallies merge by
addition.  Failure intervals are Wilson score intervals, which stay
sane at zero or few failures.
"""

from __future__ import annotations

import functools
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import decoder as dec
from .clusters import ClusterGraph, build_connectivity_graph
from .codes import CssCode, code_from_json, code_to_json
from .gf2 import BinaryVector, PauliVector

_WILSON_Z95 = 1.959963984540054


def wilson_interval(failures: int, trials: int, z: float = _WILSON_Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= failures <= trials:
        raise ValueError("failures out of range")
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
        / denom
    )
    lo = 0.0 if failures == 0 else max(0.0, center - half)
    hi = 1.0 if failures == trials else min(1.0, center + half)
    return (min(lo, phat), max(hi, phat))


# ── channel samplers ─────────────────────────────────────────────────


def sample_depolarizing(n: int, p: float, rng: np.random.Generator) -> PauliVector:
    """Each qubit independently untouched with probability 1-p, else a
    uniformly random X, Y, or Z."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    hit = np.flatnonzero(rng.random(n) < p)
    if hit.size == 0:
        return PauliVector.identity(n)
    picks = rng.integers(0, 3, size=hit.size)
    xs = [int(q) for q, c in zip(hit, picks) if c == 0]
    ys = [int(q) for q, c in zip(hit, picks) if c == 1]
    zs = [int(q) for q, c in zip(hit, picks) if c == 2]
    return PauliVector.from_ops(n, xs, ys, zs)


def sample_erasure(n: int, p: float, rng: np.random.Generator) -> dec.ErrorSample:
    """Erasure mask i.i.d. Bernoulli(p); each erased qubit suffers a
    uniformly random Pauli from {I, X, Y, Z}."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    mask = tuple(int(q) for q in np.flatnonzero(rng.random(n) < p))
    if not mask:
        return dec.ErrorSample(PauliVector.identity(n), erasure_mask=())
    picks = rng.integers(0, 4, size=len(mask))
    xs = [q for q, c in zip(mask, picks) if c == 1]
    ys = [q for q, c in zip(mask, picks) if c == 2]
    zs = [q for q, c in zip(mask, picks) if c == 3]
    return dec.ErrorSample(PauliVector.from_ops(n, xs, ys, zs), erasure_mask=mask)


# ── sweep configuration and results ──────────────────────────────────


@dataclass(frozen=True)
class SweepConfig:
    code: CssCode
    channel: str  # "erasure" or "depolarizing"
    p_values: tuple[float, ...]
    trials: int
    seed: int
    budget: dec.ClusterBudget | None = None
    spacetime_rounds: int | None = None
    distance_hint: int | None = None
    count_budget_as_failure: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.channel not in ("erasure", "depolarizing"):
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if any(not 0.0 <= p <= 1.0 for p in self.p_values):
            raise ValueError("p values must lie in [0, 1]")


@dataclass(frozen=True)
class SweepPoint:
    p: float
    trials: int
    failures: int
    budget_exceeded: int
    failure_rate: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class SweepResult:
    channel: str
    seed: int
    points: tuple[SweepPoint, ...]
    code_meta: dict = field(compare=False)
    config_echo: dict = field(compare=False)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("p,trials,failures,budget_exceeded,failure_rate,ci_low,ci_high\n")
        for pt in self.points:
            out.write(
                f"{pt.p!r},{pt.trials},{pt.failures},{pt.budget_exceeded},"
                f"{pt.failure_rate!r},{pt.ci_low!r},{pt.ci_high!r}\n"
            )
        return out.getvalue()

    def to_json_sidecar(self) -> str:
        return json.dumps(
            {"config": self.config_echo, "code": self.code_meta}, indent=2
        )


@functools.lru_cache(maxsize=8)
def _cached_code(code_json: str) -> CssCode:
    return code_from_json(code_json)


@functools.lru_cache(maxsize=8)
def _cached_graph(code_json: str) -> ClusterGraph:
    return build_connectivity_graph(_cached_code(code_json))


def run_trial(
    code: CssCode,
    graph: ClusterGraph,
    channel: str,
    p: float,
    rng: np.random.Generator,
    budget: dec.ClusterBudget,
) -> str:
    """Sample one error, decode it, and adjudicate the outcome."""
    if channel == "erasure":
        sample = sample_erasure(code.n, p, rng)
        synd = dec.syndrome(code, sample.error)
        outcome = dec.decode_erasure(
            code, graph, sample.erasure_mask, synd, true_error=sample.error
        )
    else:
        error = sample_depolarizing(code.n, p, rng)
        synd = dec.syndrome(code, error)
        outcome = dec.decode_depolarizing(
            code, graph, synd, budget=budget, true_error=error
        )
    return outcome.status


def _trial_block(args) -> tuple[int, int, int]:
    """Worker: trials [t0, t1) of one sweep point.

    Returns (logical or detected failures, budget exceeded, successes).
    Takes the code as JSON so the payload pickles cheaply.
    """
    code_json, channel, p, p_idx, seed, t0, t1, budget_tuple, distance_hint = args
    code = _cached_code(code_json)
    graph = _cached_graph(code_json)
    if budget_tuple is not None:
        budget = dec.ClusterBudget(*budget_tuple)
    else:
        budget = dec.default_cluster_budget(code, p, distance_hint)
    failures = budget_exceeded = successes = 0
    for t in range(t0, t1):
        rng = np.random.default_rng([seed, p_idx, t])
        status = run_trial(code, graph, channel, p, rng, budget)
        if status == dec.STATUS_SUCCESS:
            successes += 1
        elif status == dec.STATUS_BUDGET:
            budget_exceeded += 1
        else:
            failures += 1
    return failures, budget_exceeded, successes


def run_sweep(config: SweepConfig) -> SweepResult:
    """Failure-rate curve over the configured error rates.

    Bit-identical output for any thread count: trial substreams are
    derived from (seed, point, trial) and tallies merge by addition.
    """
    code_json = code_to_json(config.code)
    budget_tuple = (
        None
        if config.budget is None
        else (config.budget.max_cluster_size, config.budget.max_work)
    )
    points = []
    for p_idx, p in enumerate(config.p_values):
        blocks = _split_range(config.trials, max(1, config.threads))
        payloads = [
            (
                code_json,
                config.channel,
                p,
                p_idx,
                config.seed,
                t0,
                t1,
                budget_tuple,
                config.distance_hint,
            )
            for t0, t1 in blocks
        ]
        if config.threads > 1 and len(payloads) > 1:
            with ProcessPoolExecutor(max_workers=config.threads) as pool:
                parts = list(pool.map(_trial_block, payloads))
        else:
            parts = [_trial_block(pl) for pl in payloads]
        failures = sum(f for f, _, _ in parts)
        budget_exceeded = sum(b for _, b, _ in parts)
        counted = failures + (budget_exceeded if config.count_budget_as_failure else 0)
        rate = counted / config.trials
        lo, hi = wilson_interval(counted, config.trials)
        points.append(
            SweepPoint(p, config.trials, failures, budget_exceeded, rate, lo, hi)
        )
    code = config.code
    return SweepResult(
        channel=config.channel,
        seed=config.seed,
        points=tuple(points),
        code_meta={"n": code.n, "k": code.k, "j": code.j, "ell": code.ell},
        config_echo={
            "channel": config.channel,
            "p_values": list(config.p_values),
            "trials": config.trials,
            "seed": config.seed,
            "budget": budget_tuple,
            "spacetime_rounds": config.spacetime_rounds,
            "distance_hint": config.distance_hint,
            "count_budget_as_failure": config.count_budget_as_failure,
        },
    )


def _split_range(total: int, parts: int) -> list[tuple[int, int]]:
    parts = min(parts, total)
    step = total // parts
    extra = total % parts
    out = []
    start = 0
    for i in range(parts):
        size = step + (1 if i < extra else 0)
        out.append((start, start + size))
        start += size
    return out


def threshold_estimate(results: list[SweepResult]) -> tuple[float, float]:
    """Interval where failure-rate curves of growing blocklength cross.

    Compares the largest and smallest code in the family on a shared
    error-rate grid: below a threshold the bigger code fails less, above
    it more.  Returns the grid interval where the ordering flips, or a
    one-sided interval when no flip is seen.
    """
    if len(results) < 2:
        raise ValueError("need results for at least two family members")
    grids = [tuple(pt.p for pt in r.points) for r in results]
    if len(set(grids)) != 1:
        raise ValueError("results must share one p grid")
    ordered = sorted(results, key=lambda r: r.code_meta["n"])
    small, big = ordered[0], ordered[-1]
    if small.code_meta["n"] == big.code_meta["n"]:
        raise ValueError("family members must have distinct blocklengths")
    ps = grids[0]
    diffs = [
        b.failure_rate - s.failure_rate for s, b in zip(small.points, big.points)
    ]
    for i in range(len(ps) - 1):
        if diffs[i] < 0.0 <= diffs[i + 1]:
            return (ps[i], ps[i + 1])
    if all(d <= 0.0 for d in diffs) and any(d < 0.0 for d in diffs):
        return (ps[-1], 1.0)
    if all(d >= 0.0 for d in diffs) and any(d > 0.0 for d in diffs):
        return (0.0, ps[0])
    raise ValueError("curves are indistinguishable on this grid")
