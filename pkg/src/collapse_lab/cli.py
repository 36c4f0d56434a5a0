"""Command-line entry point: ``collapse-lab <subcommand> ...``.

Every subcommand writes a CSV table to ``--out`` (stdout by default) and,
with ``--svg PATH``, a line plot.  Exit status is 0 on success, 1 for
invalid input and 2 for failures while running.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .config import REQUIRED, RunConfig, parse_config
from .csvio import CsvTable, write_csv
from .dynamics import IntegratorSettings, closed_form_trajectory, integrate
from .ensemble import SplitMix64, born_report, child_seed, run_ensemble, sample_signs
from .errors import CollapseLabError, ConfigErrors
from .experiments.bell import ChshSetting, chsh_lhv_max, chsh_value
from .experiments.interference import (
    InterferenceSpec,
    interference_pattern,
    interference_pattern_exact,
)
from .experiments.malus import MalusSpec, malus_deviation_curve
from .experiments.timescale import estimate_tau
from .model import BranchSigns
from .svg import write_svg

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


class UsageError(CollapseLabError, ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit(table, args, plot):
    write_csv(table, args.out)
    if args.svg:
        series, labels = plot()
        write_svg(args.svg, series, **labels)


def cmd_collapse(args):
    cfg = parse_config(args.config, REQUIRED["collapse"])
    config = cfg.two_state()
    tau = config.tau_r
    t_end = cfg["t_end_over_tau"] if args.t_end is None else args.t_end
    step = cfg["step_over_tau"] if args.step is None else args.step
    settings = IntegratorSettings.in_tau_units(tau, step, t_end, cfg["clamp"])
    if args.signs:
        signs = BranchSigns.parse(args.signs)
    else:
        stream = SplitMix64(child_seed(cfg["master_seed"], 0))
        signs = sample_signs(config.x0, config.sampling_mode, stream)
    if args.engine == "rk4":
        traj = integrate(config, signs, cfg.phase_model(), settings, cfg.theta0)
    else:
        traj = closed_form_trajectory(config, signs, settings, cfg.phase_model(), cfg.theta0)
    scale = 1.0 if args.seconds else 1.0 / tau
    sel = slice(None, None, args.every)
    idx = np.arange(len(traj))[sel]
    if idx[-1] != len(traj) - 1:
        idx = np.append(idx, len(traj) - 1)
    table = CsvTable(["t", "x1", "x2", "q"])
    for i in idx:
        table.append([float(traj.t[i] * scale), float(traj.x[i, 0]), float(traj.x[i, 1]),
                      float(traj.q_series[i])])

    def plot():
        ts = (traj.t[idx] * scale).tolist()
        return (
            {"x1": (ts, traj.x[idx, 0].tolist()), "x2": (ts, traj.x[idx, 1].tolist()),
             "q": (ts, traj.q_series[idx].tolist())},
            dict(xlabel="t [s]" if args.seconds else "t / tau_r", ylabel="weight",
                 title=f"collapse, signs {signs}"),
        )

    _emit(table, args, plot)


def cmd_ensemble(args):
    base = RunConfig({}, "<flags>") if args.config is None else parse_config(args.config)
    cfg = base.updated(REQUIRED["ensemble"], n_trajectories=args.n, master_seed=args.seed,
                       sampling_mode=args.mode)
    config = cfg.two_state()
    sampling = cfg.sampling()
    settings = cfg.integrator()
    stats = run_ensemble(config, sampling, settings, cfg["delta"], args.engine, args.threads)
    if args.born:
        table = CsvTable(["component", "expected", "frequency", "stderr", "z", "flagged"])
        for row in born_report(stats, config.x0):
            table.append([row.component, row.expected, row.frequency, row.stderr, row.z,
                          row.flagged])
    else:
        table = CsvTable(["mode", "master_seed", "n_trajectories", "outcome", "count",
                          "frequency", "stderr"])
        for kind, count, freq, se in stats.rows():
            table.append([sampling.mode.value, sampling.master_seed, sampling.n_trajectories,
                          kind.value, count, freq, se])

    def plot():
        series = {}
        for label, count in stats.sign_counts.items():
            if count:
                traj = closed_form_trajectory(config, BranchSigns.parse(label), settings)
                every = max(1, len(traj) // 500)
                series[f"signs {label} ({count})"] = (
                    (traj.t[::every] / config.tau_r).tolist(), traj.q_series[::every].tolist()
                )
        return series, dict(xlabel="t / tau_r", ylabel="q", title="q(t) per sign class")

    _emit(table, args, plot)


def cmd_malus(args):
    tau = args.tau_r
    t_units = np.linspace(0.0, args.t_max, args.steps + 1)
    spec = MalusSpec(tuple(math.radians(a) for a in args.angles), tuple(t_units * tau), tau)
    rows = malus_deviation_curve(spec)
    time_col = "t_seconds" if args.seconds else "t_over_tau"
    table = CsvTable(["eps_deg", time_col, "expectation", "ratio_to_malus"])
    for (eps, t, ex, ratio), deg in zip(rows, np.repeat(args.angles, len(t_units))):
        table.append([float(deg), t if args.seconds else t / tau, ex, ratio])

    def plot():
        series = {}
        n = len(t_units)
        for j, deg in enumerate(args.angles):
            block = table.rows[j * n:(j + 1) * n]
            series[f"{deg:g} deg"] = ([r[1] for r in block], [r[3] for r in block])
        return series, dict(xlabel=time_col.replace("_", " "), ylabel="<x> / sin^2(eps)",
                            title="Deviation from Malus's law")

    _emit(table, args, plot)


def cmd_chsh(args):
    if args.lhv:
        value = chsh_lhv_max(args.strategies, args.seed, exhaustive=not args.no_exhaustive)
        table = CsvTable(["strategies", "seed", "exhaustive", "F_max"])
        table.append([args.strategies, -1 if args.seed is None else args.seed,
                      not args.no_exhaustive, value])
    else:
        if args.angles:
            if len(args.angles) != 4:
                raise UsageError("--angles needs four values: a, a', b, b' in degrees")
            setting = ChshSetting.from_angles(*(math.radians(a) for a in args.angles))
        else:
            setting = ChshSetting.rotated_45()
        result = chsh_value(setting)
        table = CsvTable(["c_ab", "c_ab_prime", "c_a_prime_b", "c_a_prime_b_prime", "F"])
        table.append([*result.correlations, result.value])

    def plot():
        # rotate Bob's pair of directions rigidly, starting from the 45 degree setting
        phis = np.linspace(0.0, 180.0, 181)
        fs = [
            chsh_value(ChshSetting.from_angles(0.0, math.pi / 2, math.radians(225 + p),
                                               math.radians(135 + p))).value
            for p in phis
        ]
        return ({"F": (phis.tolist(), fs), "local bound": ([0, 180], [2, 2])},
                dict(xlabel="extra rotation of B [deg]", ylabel="F", title="CHSH value"))

    _emit(table, args, plot)


def cmd_interfere(args):
    if args.sources:
        sources = []
        for item in args.sources.split(","):
            y, _, th = item.partition(":")
            sources.append((float(y), float(th or 0.0)))
    else:
        half = 0.5 * args.separation
        sources = [(-half, args.phases[0]), (half, args.phases[1])]
    screen = np.linspace(-args.half_width, args.half_width, args.points)
    spec = InterferenceSpec(tuple(sources), args.distance, 2.0 * math.pi / args.wavelength,
                            screen)
    far = interference_pattern(spec)
    header = ["y", "intensity"]
    cols = [screen, far]
    if args.exact:
        header.append("intensity_exact")
        cols.append(interference_pattern_exact(spec))
    table = CsvTable(header)
    for row in zip(*(c.tolist() for c in cols)):
        table.append(list(row))

    def plot():
        series = {"far field": (screen.tolist(), far.tolist())}
        if args.exact:
            series["exact path"] = (screen.tolist(), cols[2].tolist())
        return series, dict(xlabel="y' [m]", ylabel="intensity", title="Two-source interference")

    _emit(table, args, plot)


def cmd_estimate_tau(args):
    est = estimate_tau(args.wavelength)
    table = CsvTable(["wavelength_m", "energy_j", "tau_s", "quoted_tau_s", "upper_bound_s"])
    table.append([est.wavelength, est.energy, est.tau, est.quoted_tau, est.upper_bound])

    def plot():
        lams = np.linspace(0.25 * args.wavelength, 4 * args.wavelength, 100)
        return ({"hbar/E": ((lams * 1e9).tolist(), [estimate_tau(x).tau for x in lams])},
                dict(xlabel="wavelength [nm]", ylabel="tau [s]", title="hbar / E"))

    _emit(table, args, plot)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="collapse-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", default=None, help="CSV destination (default stdout)")
        p.add_argument("--svg", default=None, help="also write an SVG line plot here")
        return p

    p = common(sub.add_parser("collapse", help="one collapse trajectory"))
    p.add_argument("--config", required=True)
    p.add_argument("--signs", help="registered signs, e.g. +- or --signs=-+ (sampled if omitted)")
    p.add_argument("--t-end", type=float, help="end time in units of tau_r")
    p.add_argument("--step", type=float, help="RK4 step in units of tau_r")
    p.add_argument("--engine", choices=("rk4", "closed-form"), default="rk4")
    p.add_argument("--every", type=int, default=1, help="write every n-th sample")
    p.add_argument("--seconds", action="store_true", help="time column in seconds")
    p.set_defaults(func=cmd_collapse)

    p = common(sub.add_parser("ensemble", help="Born statistics over many trajectories"))
    p.add_argument("--config")
    p.add_argument("--n", type=int, help="number of trajectories")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--mode", choices=("independent", "common-chaotic"))
    p.add_argument("--engine", choices=("closed-form", "rk4"), default="closed-form")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (0 = all CPUs; default $COLLAPSE_LAB_THREADS or 1)")
    p.add_argument("--born", action="store_true", help="write the Born z-score report")
    p.set_defaults(func=cmd_ensemble)

    p = common(sub.add_parser("malus", help="deviation from Malus's law"))
    p.add_argument("--angles", type=_floats, default=[20.0, 30.0, 45.0], help="degrees")
    p.add_argument("--t-max", type=float, default=10.0, help="in units of tau_r")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--tau-r", type=float, default=1e-14, help="seconds")
    p.add_argument("--seconds", action="store_true")
    p.set_defaults(func=cmd_malus)

    p = common(sub.add_parser("chsh", help="CHSH value for the singlet or LHV models"))
    p.add_argument("--paper-setting", action="store_true",
                   help="A = S_z, S_x; B rotated by 45 degrees (the default)")
    p.add_argument("--angles", type=_floats, help="a,a',b,b' in the x-z plane, degrees")
    p.add_argument("--lhv", action="store_true", help="maximize over local strategies")
    p.add_argument("--strategies", type=int, default=0, help="random LHV strategies")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--no-exhaustive", action="store_true")
    p.set_defaults(func=cmd_chsh)

    p = common(sub.add_parser("interfere", help="far-field two-source interference"))
    p.add_argument("--separation", type=float, default=1e-3, help="source spacing [m]")
    p.add_argument("--phases", type=_floats, default=[0.0, 0.0])
    p.add_argument("--sources", help="explicit list 'y:theta,y:theta,...' (overrides)")
    p.add_argument("--distance", type=float, default=10.0, help="screen distance D [m]")
    p.add_argument("--wavelength", type=float, default=500e-9, help="[m]")
    p.add_argument("--half-width", type=float, default=0.02, help="screen half-width [m]")
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--exact", action="store_true", help="add exact-path intensity column")
    p.set_defaults(func=cmd_interfere)

    p = common(sub.add_parser("estimate-tau", help="hbar/E reduction time estimate"))
    p.add_argument("--wavelength", type=float, default=400e-9, help="[m]")
    p.set_defaults(func=cmd_estimate_tau)
    return parser


def dispatch(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except ConfigErrors as exc:
        print(f"collapse-lab: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, FileNotFoundError) as exc:
        print(f"collapse-lab: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CollapseLabError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"collapse-lab: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main():
    sys.exit(dispatch())
