"""Transient deviation from Malus's law.

Light polarized at angle ``eps`` to a polarizer has amplitudes ``sin eps``
(transmitted) and ``cos eps`` (blocked).  With finite reduction time the
expected transmission is

    <x>(t) = sin^2 e / sqrt(1 + cot^2 e * exp(-t/tau))
           + cos^2 e / sqrt(1 + tan^2 e * exp(+t/tau))

which relaxes to ``sin^2 eps`` as t grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EndpointAngle
from ..model import TWO_PI, closed_form_x


@dataclass(frozen=True)
class MalusSpec:
    """Angles in radians; ``t_grid`` in seconds."""

    epsilon_list: tuple[float, ...]
    t_grid: tuple[float, ...]
    tau_r: float

    def __post_init__(self):
        for e in self.epsilon_list:
            if not 0.0 < e < math.pi / 2:
                raise EndpointAngle(f"angle must lie strictly inside (0, pi/2), got {e!r}")
        t = np.asarray(self.t_grid, dtype=float)
        if np.any(t < 0) or np.any(np.diff(t) <= 0):
            raise ValueError("t_grid must be nonnegative and strictly increasing")
        if not self.tau_r > 0:
            raise ValueError("tau_r must be positive")


def _check_angle(eps, allow_endpoints):
    if 0.0 < eps < math.pi / 2:
        return None
    if allow_endpoints and eps in (0.0, math.pi / 2):
        return 0.0 if eps == 0.0 else 1.0
    raise EndpointAngle(
        f"eps = {eps!r}: tan/cot diverge at the endpoints; pass allow_endpoints=True "
        "for the physical limits"
    )


def malus_expectation(eps: float, t, tau_r: float, allow_endpoints: bool = False):
    """Expected transmission at angle ``eps`` (radians) and time ``t``.

    ``t`` may be an array.  At ``eps`` of 0 or pi/2 the formula is singular;
    with ``allow_endpoints`` the limits 0 and 1 are returned instead.
    """
    limit = _check_angle(eps, allow_endpoints)
    t = np.asarray(t, dtype=float)
    if limit is not None:
        out = np.full_like(t, limit)
        return float(out) if out.ndim == 0 else out
    s2, c2 = math.sin(eps) ** 2, math.cos(eps) ** 2
    tan2 = math.tan(eps) ** 2
    s = t / tau_r
    # exp(s) overflows long after the second term is negligible
    with np.errstate(over="ignore"):
        out = s2 / np.sqrt(1.0 + np.exp(-s) / tan2) + c2 / np.sqrt(1.0 + tan2 * np.exp(s))
    return float(out) if out.ndim == 0 else out


def malus_ratio(eps: float, t, tau_r: float):
    """Expected transmission normalized by ``sin^2 eps``."""
    return malus_expectation(eps, t, tau_r) / math.sin(eps) ** 2


def malus_deviation_curve(spec: MalusSpec) -> list[tuple[float, float, float, float]]:
    """Rows ``(eps, t, <x>, <x>/sin^2 eps)`` for every angle and time."""
    rows = []
    t = np.asarray(spec.t_grid, dtype=float)
    for eps in spec.epsilon_list:
        if len(t) == 0:
            continue
        ex = np.atleast_1d(malus_expectation(eps, t, spec.tau_r))
        ratio = ex / math.sin(eps) ** 2
        rows.extend(zip([eps] * len(t), t.tolist(), ex.tolist(), ratio.tolist()))
    return rows


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    n: int


def malus_monte_carlo(eps: float, t: float, tau_r: float, n: int,
                      seed: int | None = None) -> MonteCarloEstimate:
    """Average the transmitted weight over uniformly drawn onset phases.

    Each draw takes a phase on [0, 2*pi), shifts it for the Born weight
    ``sin^2 eps`` and reads the branch sign.  A positive sign means the
    transmitted component grows from amplitude ``sin eps``; a negative sign
    means the blocked component (amplitude ``cos eps``) decays.  Each draw
    contributes the corresponding closed-form weight.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_angle(eps, False)
    rng = np.random.default_rng(seed)
    a, b = math.sin(eps), math.cos(eps)
    theta = TWO_PI * rng.random(n)
    grows = np.cos(theta / 2.0 - math.pi * (a * a - 0.5)) > 0
    values = np.where(grows, closed_form_x(a, +1, t, tau_r), closed_form_x(b, -1, t, tau_r))
    se = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return MonteCarloEstimate(mean=float(values.mean()), stderr=se, n=n)
