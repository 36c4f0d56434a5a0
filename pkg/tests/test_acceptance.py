"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line (visible with
``pytest -v`` and when this file is run as a script) before asserting.
"""

import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from collapse_lab.dynamics import (
    IntegratorSettings,
    PhaseModel,
    closed_form_trajectory,
    integrate,
    rhs,
)
from collapse_lab.ensemble import SamplingSpec, run_ensemble
from collapse_lab.experiments import (
    TSIRELSON,
    ChshSetting,
    InterferenceSpec,
    chsh_lhv_max,
    chsh_value,
    fringe_period,
    interference_pattern,
    interference_pattern_exact,
    malus_expectation,
    malus_monte_carlo,
    malus_ratio,
    random_setting,
)
from collapse_lab.model import BranchSigns, SamplingMode, SystemState, TwoStateConfig, q_of_t

TAU = 1e-14
DEG = math.pi / 180
ANGLES = (20, 30, 45)
ALL_SIGNS = [BranchSigns.parse(s) for s in ("+-", "-+", "++", "--")]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        with capsys.disabled():
            print("\n" + line)
        return ok

    return emit


def test_criterion_1_born_marginals(report):
    x0 = (0.7, 0.3)
    n = 10**5
    start = time.perf_counter()
    stats = run_ensemble(
        TwoStateConfig(x0, TAU), SamplingSpec(SamplingMode.INDEPENDENT, n, 20240601),
        engine="rk4",
    )
    elapsed = time.perf_counter() - start
    freq = stats.grow_frequency(0)
    band = 3 * math.sqrt(x0[0] * x0[1] / n)
    ok = abs(freq - x0[0]) <= band and elapsed < 10.0
    report(1, ok, f"freq(x1 grows) = {freq:.5f}, |diff| = {abs(freq - x0[0]):.5f} "
                  f"<= {band:.5f}; runtime {elapsed:.2f} s < 10 s")
    assert ok


def test_criterion_2_rk4_matches_closed_form(report):
    rng = np.random.default_rng(7)
    configs = []
    for _ in range(100):
        x1 = rng.uniform(0.01, 0.99)
        signs = BranchSigns(tuple(int(s) for s in rng.choice((-1, 1), 2)))
        configs.append((TwoStateConfig((x1, 1.0 - x1), TAU), signs))

    def max_err(cfg, signs, step, t_end=10.0):
        st = IntegratorSettings.in_tau_units(TAU, step, t_end)
        num = integrate(cfg, signs, None, st)
        return float(np.max(np.abs(num.x - closed_form_trajectory(cfg, signs, st).x)))

    worst = max(max_err(cfg, s, 1e-3) for cfg, s in configs)
    # the order check runs where truncation error dominates; at tau/1000 the
    # error already sits at the rounding floor
    ratios = [max_err(cfg, s, 0.1) / max_err(cfg, s, 0.05) for cfg, s in configs]
    ok = worst <= 1e-8 and min(ratios) >= 8.0
    report(2, ok, f"max error at tau/1000 = {worst:.2e} <= 1e-8; "
                  f"error ratio tau/10 -> tau/20 in [{min(ratios):.2f}, {max(ratios):.2f}] >= 8")
    assert ok


def test_criterion_3_malus_curve(report):
    onset = []
    late = []
    for deg in ANGLES:
        eps = deg * DEG
        s, c = math.sin(eps), math.cos(eps)
        onset.append(abs(malus_ratio(eps, 0.0, TAU) - (s**3 + c**3) / s**2))
        late.append(abs(malus_ratio(eps, 50 * TAU, TAU) - 1.0))
    values = ", ".join(f"{malus_ratio(d * DEG, 0.0, TAU):.6f}" for d in ANGLES)
    ok = max(onset) <= 1e-12 and max(late) <= 1e-6
    report(3, ok, f"t=0 ratios [{values}], max dev {max(onset):.1e} <= 1e-12; "
                  f"max |ratio-1| at 50 tau = {max(late):.1e} <= 1e-6")
    assert ok


def test_criterion_4_monte_carlo(report):
    seed = 100
    within = []
    worst_z = 0.0
    for deg in ANGLES:
        for t in (0, 1, 2, 5):
            seed += 1
            est = malus_monte_carlo(deg * DEG, t * TAU, TAU, 10**6, seed=seed)
            diff = abs(est.mean - malus_expectation(deg * DEG, t * TAU, TAU))
            # at 45 deg and t = 0 every draw is sin 45 or cos 45, one ulp apart:
            # the standard error collapses to ~1e-19 and summation rounding
            # (~1e-15) is all that separates the two numbers
            tol = max(4 * est.stderr, 1e-12)
            within.append(diff <= tol)
            if tol > 1e-12:
                worst_z = max(worst_z, diff / est.stderr)
    ok = all(within)
    report(4, ok, f"{sum(within)}/12 points within max(4 se, 1e-12); worst "
                  f"|MC - closed form| = {worst_z:.2f} se over points with non-degenerate se")
    assert ok


def test_criterion_5_chsh(report):
    rotated = chsh_value(ChshSetting.rotated_45()).value
    lhv = chsh_lhv_max()
    rng = np.random.default_rng(5)
    best_random = max(chsh_value(random_setting(rng)).value for _ in range(10**4))
    ok = abs(rotated - 2 * math.sqrt(2)) <= 1e-12 and lhv == 2.0 and best_random <= TSIRELSON + 1e-9
    report(5, ok, f"rotated setting F = {rotated!r}; LHV max = {lhv!r}; "
                  f"max over 1e4 random settings = {best_random:.6f} <= 2 sqrt 2 + 1e-9")
    assert ok


def test_criterion_6_interference(report):
    d, lam = 1e-4, 500e-9
    dist = 1e4 * d
    period = lam * dist / d
    screen = np.linspace(-5 * period, 5 * period, 20001)
    spec = InterferenceSpec.two_slit(d, dist, lam, screen)
    far = interference_pattern(spec)
    measured = fringe_period(screen, far)
    rel_period = abs(measured - period) / period

    a = interference_pattern(InterferenceSpec.two_slit(d, dist, lam, screen, (0.4, 1.3)))
    b = interference_pattern(InterferenceSpec.two_slit(d, dist, lam, screen, (0.4 + 2.2, 1.3 + 2.2)))
    offset = float(np.max(np.abs(a - b)))

    exact = interference_pattern_exact(spec)
    rel_far = float(np.max(np.abs(far - exact)) / np.max(exact))
    ok = rel_period <= 5e-3 and offset <= 1e-12 and rel_far <= 5e-3
    report(6, ok, f"period error {rel_period:.1e} <= 5e-3; phase-offset change {offset:.1e} <= 1e-12; "
                  f"far-field vs exact {rel_far:.1e} <= 5e-3")
    assert ok


def test_criterion_7_critical_points_and_normalization(report):
    worst_rate = 0.0
    for signs in ALL_SIGNS:
        for x in ((0.0, 1.0), (1.0, 0.0), (0.0, 0.0), (1.0, 1.0)):
            xdot, _ = rhs(SystemState(0.0, x, (0.0, 0.0)), signs, PhaseModel(), TAU)
            worst_rate = max(worst_rate, max(abs(v) for v in xdot))

    late = 0.0
    transient = math.inf
    t = np.linspace(0.0, 5.0, 501)[1:] * TAU
    for x1 in (0.01, 0.2, 0.5, 0.7, 0.99):
        cfg = TwoStateConfig((x1, 1.0 - x1), TAU)
        for signs in (BranchSigns((1, -1)), BranchSigns((-1, 1))):
            traj = closed_form_trajectory(cfg, signs, IntegratorSettings(TAU, 50 * TAU))
            late = max(late, abs(traj.x[-1].sum() - 1.0))
            transient = min(transient, float(np.max(np.abs(traj.x[1:51].sum(axis=1) - 1.0))))
        assert np.all(np.abs(q_of_t(cfg, BranchSigns((1, -1)), t)) <= 1.0)
    ok = worst_rate < 1e-15 and late < 1e-6 and transient > 0.0
    report(7, ok, f"max |xdot| at critical points = {worst_rate:.1e} < 1e-15; "
                  f"|x1+x2-1| at 50 tau <= {late:.1e} < 1e-6; smallest peak transient "
                  f"deviation {transient:.3f} > 0")
    assert ok


def test_criterion_8_determinism_across_threads(report, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("x0_1 = 0.7\nx0_2 = 0.3\ntau_r = 1e-14\nn_trajectories = 300000\n"
                   "master_seed = 987654321\n", encoding="utf-8")
    digests = {}
    for mode in ("independent", "common-chaotic"):
        for threads in ("1", "4", "16"):
            out = tmp_path / f"{mode}-{threads}.csv"
            res = subprocess.run(
                [sys.executable, "-m", "collapse_lab", "ensemble", "--config", str(cfg),
                 "--mode", mode, "--out", str(out)],
                env={**os.environ, "COLLAPSE_LAB_THREADS": threads},
                capture_output=True, text=True,
            )
            assert res.returncode == 0, res.stderr
            digests[(mode, threads)] = out.read_bytes()
    same = all(
        digests[(m, "1")] == digests[(m, t)]
        for m in ("independent", "common-chaotic") for t in ("4", "16")
    )
    report(8, same, "ensemble CSVs byte-identical at 1, 4 and 16 threads (both sampling modes)")
    assert same


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-q"]))
