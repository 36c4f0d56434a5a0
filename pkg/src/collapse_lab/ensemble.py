"""Phase sampling, outcome classification and Born-rule statistics.

Reproducibility
---------------
Trajectory ``i`` of a run with master seed ``s`` draws its random numbers
from its own SplitMix64 stream seeded with the ``(i+1)``-th SplitMix64
output of ``s``.  The stream of a trajectory therefore depends only on
``(s, i)``, and serial, batched and threaded runs produce identical results.

SplitMix64 (Steele, Lea & Flood 2014): ``z += 0x9E3779B97F4A7C15`` then
``z = (z ^ z>>30) * 0xBF58476D1CE4E5B9``, ``z = (z ^ z>>27) *
0x94D049BB133111EB``, ``z ^= z>>31``, all mod 2**64.  Uniform doubles use
the top 53 bits.
"""

from __future__ import annotations

import enum
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import IntegratorSettings, Trajectory, closed_form_trajectory, integrate
from .errors import DegeneratePhase, ResampleExhausted, ZeroVariance
from .model import TWO_PI, BranchSigns, SamplingMode, TwoStateConfig, branch_sign, shift_phase

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
MAX_RESAMPLE = 64
DEGENERATE_TOL = 1e-12
THREADS_ENV = "COLLAPSE_LAB_THREADS"


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def child_seed(master_seed: int, index: int) -> int:
    """Seed of trajectory ``index``: output ``index + 1`` of SplitMix64(master)."""
    return mix64(master_seed + GOLDEN_GAMMA * (index + 1))


class SplitMix64:
    """Minimal SplitMix64 stream with a ``random()`` method."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        return (self.next_uint64() >> 11) * 2.0**-53


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def child_seeds(master_seed: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start + 1, stop + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64_array(np.uint64(master_seed & MASK64) + np.uint64(GOLDEN_GAMMA) * idx)


def _uniform_at(seeds: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Draw number ``counters`` (0-based) from each stream."""
    with np.errstate(over="ignore"):
        z = seeds + np.uint64(GOLDEN_GAMMA) * (counters.astype(np.uint64) + np.uint64(1))
        return (_mix64_array(z) >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class SamplingSpec:
    mode: SamplingMode = SamplingMode.INDEPENDENT
    n_trajectories: int = 1
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", SamplingMode(self.mode))
        if self.n_trajectories < 1:
            raise ValueError(f"n_trajectories must be >= 1, got {self.n_trajectories}")
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")


class OutcomeClass(str, enum.Enum):
    COLLAPSE_TO_1 = "collapse_to_1"
    COLLAPSE_TO_2 = "collapse_to_2"
    BOTH_DECAY = "both_decay"
    BOTH_GROW = "both_grow"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeClass
    reduction_time: float | None = None

    def __post_init__(self):
        collapsed = self.kind in (OutcomeClass.COLLAPSE_TO_1, OutcomeClass.COLLAPSE_TO_2)
        if collapsed != (self.reduction_time is not None):
            raise ValueError("reduction_time is set exactly for collapse outcomes")


def sample_signs(x0, mode: SamplingMode, stream) -> BranchSigns:
    """Draw initial phases and register the branch signs.

    ``stream`` is anything with a ``random()`` method returning floats in
    [0, 1).  Independent mode draws one phase per component; common mode
    draws a single phase used by both components with their own shift.
    Degenerate phases are redrawn, at most 64 times per draw.
    """
    mode = SamplingMode(mode)
    if mode is SamplingMode.INDEPENDENT:
        return BranchSigns(tuple(_draw_sign(x, stream) for x in x0))
    for _ in range(MAX_RESAMPLE):
        theta = TWO_PI * stream.random()
        try:
            return BranchSigns(
                tuple(branch_sign(shift_phase(theta, x), DEGENERATE_TOL) for x in x0)
            )
        except DegeneratePhase:
            continue
    raise ResampleExhausted(f"{MAX_RESAMPLE} consecutive degenerate phases")


def _draw_sign(x0_n, stream) -> int:
    for _ in range(MAX_RESAMPLE):
        try:
            return branch_sign(shift_phase(TWO_PI * stream.random(), x0_n), DEGENERATE_TOL)
        except DegeneratePhase:
            continue
    raise ResampleExhausted(f"{MAX_RESAMPLE} consecutive degenerate phases")


def sample_signs_batch(x0, mode: SamplingMode, seeds: np.ndarray) -> np.ndarray:
    """Vectorized :func:`sample_signs`, one SplitMix64 stream per seed.

    Consumes each stream in exactly the order the scalar version does, so
    ``sample_signs_batch(x0, mode, s)[i]`` equals
    ``sample_signs(x0, mode, SplitMix64(s[i])).alpha``.

    Returns:
        int8 array of shape ``(len(seeds), 2)``.
    """
    mode = SamplingMode(mode)
    seeds = np.asarray(seeds, dtype=np.uint64)
    n = len(seeds)
    counters = np.zeros(n, dtype=np.int64)
    out = np.zeros((n, 2), dtype=np.int8)
    betas = [math.pi * (x - 0.5) for x in x0]

    def signs_for(theta, beta):
        c = np.cos(theta / 2.0 - beta)
        return np.where(c > 0, 1, -1).astype(np.int8), np.abs(c) < DEGENERATE_TOL

    if mode is SamplingMode.INDEPENDENT:
        for k, beta in enumerate(betas):
            pending = np.arange(n)
            for _ in range(MAX_RESAMPLE):
                theta = TWO_PI * _uniform_at(seeds[pending], counters[pending])
                counters[pending] += 1
                s, bad = signs_for(theta, beta)
                out[pending, k] = s
                pending = pending[bad]
                if len(pending) == 0:
                    break
            else:
                raise ResampleExhausted(f"{MAX_RESAMPLE} consecutive degenerate phases")
        return out

    pending = np.arange(n)
    for _ in range(MAX_RESAMPLE):
        theta = TWO_PI * _uniform_at(seeds[pending], counters[pending])
        counters[pending] += 1
        bad = np.zeros(len(pending), dtype=bool)
        for k, beta in enumerate(betas):
            s, b = signs_for(theta, beta)
            out[pending, k] = s
            bad |= b
        pending = pending[bad]
        if len(pending) == 0:
            return out
    raise ResampleExhausted(f"{MAX_RESAMPLE} consecutive degenerate phases")


def classify(trajectory: Trajectory, delta: float = 1e-3) -> Outcome:
    """Classify the end state of a trajectory.

    Collapse to state 1 means ``x_1 >= 1 - delta`` and ``x_2 <= delta`` at
    the final sample (mirrored for state 2); both-decay/both-grow are the
    two degenerate endings.  The reduction time is the first sample with
    ``|q| >= 1 - delta``, or, if ``|q|`` never gets that far, the first
    sample meeting the collapse condition.
    """
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 0.5), got {delta!r}")
    x1, x2 = trajectory.x[-1]
    lo, hi = delta, 1.0 - delta
    if x1 >= hi and x2 <= lo:
        kind, win = OutcomeClass.COLLAPSE_TO_1, 0
    elif x2 >= hi and x1 <= lo:
        kind, win = OutcomeClass.COLLAPSE_TO_2, 1
    elif x1 <= lo and x2 <= lo:
        return Outcome(OutcomeClass.BOTH_DECAY)
    elif x1 >= hi and x2 >= hi:
        return Outcome(OutcomeClass.BOTH_GROW)
    else:
        return Outcome(OutcomeClass.UNRESOLVED)
    hit = np.flatnonzero(np.abs(trajectory.q_series) >= hi)
    if len(hit) == 0:
        xw, xl = trajectory.x[:, win], trajectory.x[:, 1 - win]
        hit = np.flatnonzero((xw >= hi) & (xl <= lo))
    return Outcome(kind, float(trajectory.t[hit[0]]))


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit argument, else ``COLLAPSE_LAB_THREADS``, else 1.

    Zero means one worker per CPU.
    """
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    if threads < 0:
        raise ValueError(f"thread count must be >= 0, got {threads}")
    return threads or (os.cpu_count() or 1)


@dataclass(frozen=True)
class OutcomeStats:
    """Counts per outcome class for one ensemble run.

    ``sign_counts`` keeps the joint distribution of the registered branch
    signs, keyed by strings such as ``"+-"``.
    """

    counts: dict
    sign_counts: dict
    n_trajectories: int
    master_seed: int
    mode: SamplingMode
    reduction_times: dict = field(default_factory=dict)

    def frequency(self, kind) -> float:
        return self.counts.get(OutcomeClass(kind), 0) / self.n_trajectories

    def stderr(self, kind) -> float:
        p = self.frequency(kind)
        return math.sqrt(p * (1.0 - p) / self.n_trajectories)

    def grow_count(self, component: int) -> int:
        """Trajectories in which ``component`` (0 or 1) ends near 1."""
        own = OutcomeClass.COLLAPSE_TO_1 if component == 0 else OutcomeClass.COLLAPSE_TO_2
        return self.counts.get(own, 0) + self.counts.get(OutcomeClass.BOTH_GROW, 0)

    def grow_frequency(self, component: int) -> float:
        return self.grow_count(component) / self.n_trajectories

    def rows(self):
        """One row per outcome class, in enum order."""
        for kind in OutcomeClass:
            yield kind, self.counts.get(kind, 0), self.frequency(kind), self.stderr(kind)


def _count_chunk(x0, mode, master_seed, start, stop):
    signs = sample_signs_batch(x0, mode, child_seeds(master_seed, start, stop))
    code = (signs[:, 0] > 0).astype(np.int64) * 2 + (signs[:, 1] > 0)
    return np.bincount(code, minlength=4)


_CODE_TO_SIGNS = {0: "--", 1: "-+", 2: "+-", 3: "++"}


def run_ensemble(config: TwoStateConfig, sampling: SamplingSpec,
                 settings: IntegratorSettings | None = None, delta: float = 1e-3,
                 engine: str = "closed-form", threads: int | None = None,
                 chunk_size: int = 65536) -> OutcomeStats:
    """Sample ``n_trajectories`` onsets, evolve and classify each one.

    The weight dynamics depend on nothing but the registered signs, so each
    of the four sign pairs is evolved once (by the closed form or by RK4,
    per ``engine``) and its outcome applied to every trajectory sharing it.
    The result depends only on the seed, mode, count and config.
    """
    if engine not in ("closed-form", "rk4"):
        raise ValueError(f"engine must be 'closed-form' or 'rk4', got {engine!r}")
    settings = settings or IntegratorSettings.in_tau_units(config.tau_r)
    n = sampling.n_trajectories
    bounds = [(a, min(a + chunk_size, n)) for a in range(0, n, chunk_size)]
    workers = min(resolve_threads(threads), len(bounds))

    def work(b):
        return _count_chunk(config.x0, sampling.mode, sampling.master_seed, *b)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    totals = np.sum(parts, axis=0)

    counts: Counter = Counter()
    sign_counts = {}
    reduction_times = {}
    for code, label in _CODE_TO_SIGNS.items():
        c = int(totals[code])
        sign_counts[label] = c
        if c == 0:
            continue
        signs = BranchSigns.parse(label)
        if engine == "rk4":
            traj = integrate(config, signs, None, settings)
        else:
            traj = closed_form_trajectory(config, signs, settings)
        outcome = classify(traj, delta)
        counts[outcome.kind] += c
        if outcome.reduction_time is not None:
            reduction_times[label] = outcome.reduction_time
    return OutcomeStats(
        counts={k: counts.get(k, 0) for k in OutcomeClass},
        sign_counts=sign_counts,
        n_trajectories=n,
        master_seed=sampling.master_seed,
        mode=sampling.mode,
        reduction_times=reduction_times,
    )


@dataclass(frozen=True)
class BornRow:
    component: int
    expected: float
    frequency: float
    stderr: float
    z: float
    flagged: bool


def born_report(stats: OutcomeStats, x0, threshold: float = 3.0) -> list[BornRow]:
    """z-scores of the marginal grow frequencies against the Born weights.

    ``z = (freq - x0_n) / stderr`` with the empirical binomial standard
    error.  Rows with ``|z| > threshold`` are flagged.

    Raises:
        ZeroVariance: the empirical frequency is 0 or 1 but differs from
            the expected weight, so no finite z exists.
    """
    rows = []
    for k in range(2):
        freq = stats.grow_frequency(k)
        se = math.sqrt(freq * (1.0 - freq) / stats.n_trajectories)
        diff = freq - x0[k]
        if se == 0.0:
            if diff != 0.0:
                raise ZeroVariance(
                    f"component {k + 1}: frequency {freq} has zero variance "
                    f"(N = {stats.n_trajectories}) but expected {x0[k]}"
                )
            z = 0.0
        else:
            z = diff / se
        rows.append(BornRow(k + 1, float(x0[k]), freq, se, z, abs(z) > threshold))
    return rows
