"""Algebra of the phase-driven collapse model.

A two-state superposition is written with coefficients ``c_n = sqrt(x_n)
exp(i theta_n)``.  At measurement onset each component registers the sign of
the cosine of its (shifted) phase, the signs are coupled across components,
and the weights then follow

    dx_n/dt = rate_n * x_n * (1 - x_n**2) / (2 tau_r)

whose solution is :func:`closed_form_x`.  ``q = x_1 - x_2`` tracks the
collapse towards +1 (state 1) or -1 (state 2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegeneratePhase, InvalidInitialWeight

TWO_PI = 2.0 * math.pi
NORMALIZATION_TOL = 1e-12
WEIGHT_TOL = 1e-9


class SamplingMode(str, enum.Enum):
    INDEPENDENT = "independent"
    COMMON_CHAOTIC = "common-chaotic"


class AmplitudeConvention(str, enum.Enum):
    """How a Born weight is turned into the initial value of the dynamics.

    ``PROBABILITY`` starts the dynamical variable at the weight ``|c_n|**2``;
    ``AMPLITUDE`` starts it at ``|c_n|`` (the reading under which the
    polarizer transmission curve is algebraically consistent).
    """

    PROBABILITY = "probability"
    AMPLITUDE = "amplitude"


@dataclass(frozen=True)
class TwoStateConfig:
    """Initial Born weights, reduction time and sampling choices.

    Attributes:
        x0: Born weights ``(x_1(0), x_2(0))``, summing to one.
        tau_r: reduction time in seconds.
        sampling_mode: joint law of the two initial phases.
        amplitude_convention: see :class:`AmplitudeConvention`.
    """

    x0: tuple[float, float]
    tau_r: float
    sampling_mode: SamplingMode = SamplingMode.INDEPENDENT
    amplitude_convention: AmplitudeConvention = AmplitudeConvention.PROBABILITY

    def __post_init__(self):
        x0 = tuple(float(v) for v in self.x0)
        if len(x0) != 2:
            raise ValueError(f"x0 must have two components, got {len(x0)}")
        for v in x0:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"initial weights must lie in [0, 1], got {x0}")
        if abs(x0[0] + x0[1] - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"initial weights must sum to 1, got {x0[0] + x0[1]!r}")
        if not (math.isfinite(self.tau_r) and self.tau_r > 0):
            raise ValueError(f"tau_r must be positive and finite, got {self.tau_r!r}")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "sampling_mode", SamplingMode(self.sampling_mode))
        object.__setattr__(
            self, "amplitude_convention", AmplitudeConvention(self.amplitude_convention)
        )

    def initial_values(self) -> tuple[float, float]:
        """Starting point of the weight dynamics under the chosen convention."""
        if self.amplitude_convention is AmplitudeConvention.AMPLITUDE:
            return (math.sqrt(self.x0[0]), math.sqrt(self.x0[1]))
        return self.x0


@dataclass(frozen=True)
class BranchSigns:
    """Signs ``(alpha_1, alpha_2)`` frozen at measurement onset."""

    alpha: tuple[int, int]

    def __post_init__(self):
        alpha = tuple(self.alpha)
        if len(alpha) != 2 or any(a not in (-1, 1) for a in alpha):
            raise ValueError(f"branch signs must be a pair of +1/-1, got {self.alpha!r}")
        object.__setattr__(self, "alpha", tuple(int(a) for a in alpha))

    @classmethod
    def parse(cls, text: str) -> BranchSigns:
        """Build from a two-character string such as ``"+-"``."""
        table = {"+": 1, "-": -1}
        if len(text) != 2 or any(ch not in table for ch in text):
            raise ValueError(f"signs must be two characters from '+-', got {text!r}")
        return cls((table[text[0]], table[text[1]]))

    @property
    def anticorrelated(self) -> bool:
        return self.alpha[0] != self.alpha[1]

    def __str__(self):
        return "".join("+" if a > 0 else "-" for a in self.alpha)


@dataclass(frozen=True)
class CouplingResult:
    f: tuple[int, ...]
    rate: tuple[int, ...]


@dataclass(frozen=True)
class SystemState:
    """Instantaneous weights and phases.

    ``theta`` is kept in ``[0, 2*pi)``; ``alpha`` is set once the signs have
    been registered.
    """

    t: float
    x: tuple[float, float]
    theta: tuple[float, float]
    alpha: BranchSigns | None = None

    def __post_init__(self):
        for v in self.x:
            if not -WEIGHT_TOL <= v <= 1.0 + WEIGHT_TOL:
                raise ValueError(f"weights must lie in [0, 1], got {self.x}")
        object.__setattr__(self, "x", (float(self.x[0]), float(self.x[1])))
        object.__setattr__(self, "theta", tuple(wrap_phase(th) for th in self.theta))

    @property
    def q(self) -> float:
        return self.x[0] - self.x[1]


def wrap_phase(theta: float) -> float:
    """Reduce an angle to ``[0, 2*pi)``."""
    wrapped = math.fmod(theta, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative number lands on 2*pi after the shift
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


def heaviside(v: float) -> int:
    """Step function with the convention ``H(0) = 0``."""
    return 1 if v > 0 else 0


def branch_sign(theta: float, tol: float = 1e-12) -> int:
    """Return ``cos(theta)/|cos(theta)|``.

    Raises:
        DegeneratePhase: if ``|cos(theta)| < tol``; callers resample.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = math.cos(theta)
    if abs(c) < tol:
        raise DegeneratePhase(f"cos({theta!r}) = {c!r} is below {tol!r}")
    return 1 if c > 0 else -1


def shift_phase(theta_raw: float, x0_n: float) -> float:
    """Halve a raw phase and shift it by ``pi*(x0_n - 1/2)``.

    With ``theta_raw`` uniform on ``[0, 2*pi)`` the cosine of the result is
    positive on a fraction ``x0_n`` of the circle.  Not reduced mod 2*pi.
    """
    beta = math.pi * (x0_n - 0.5)
    return theta_raw / 2.0 - beta


def coupling_rates(alpha: Sequence[int]) -> CouplingResult:
    """Cross-component coupling ``f_n`` for any number of components.

    For component ``n`` with ``S = sum_{k!=n} H(alpha_k)`` and
    ``T = sum_{k!=n} (1 - H(-alpha_k))``::

        f_n = (1 - 2S) alpha_n + (1 - S) H(T) (1 - alpha_n)

    and the growth rate is ``f_n * alpha_n``.
    """
    alpha = [int(a) for a in alpha]
    f = []
    for n, a_n in enumerate(alpha):
        others = [a for k, a in enumerate(alpha) if k != n]
        s = sum(heaviside(a) for a in others)
        t = sum(1 - heaviside(-a) for a in others)
        f.append((1 - 2 * s) * a_n + (1 - s) * heaviside(t) * (1 - a_n))
    rate = tuple(fn * a for fn, a in zip(f, alpha))
    return CouplingResult(f=tuple(f), rate=rate)


def coupling(signs: BranchSigns) -> CouplingResult:
    return coupling_rates(signs.alpha)


def closed_form_x(x0_n, rate, t, tau_r):
    """Weight of one component at time ``t`` after onset.

    ``1 / sqrt(1 + (1 - x0**2)/x0**2 * exp(-rate * t / tau_r))``, evaluated
    in log space so that large ``t`` neither overflows nor produces NaN.
    ``t`` may be an array.

    Raises:
        InvalidInitialWeight: ``x0_n`` outside ``[0, 1]``, or ``x0_n == 0``
            with a growing rate (the formula divides by zero).
    """
    if not 0.0 <= x0_n <= 1.0:
        raise InvalidInitialWeight(f"initial weight must lie in [0, 1], got {x0_n!r}")
    if tau_r <= 0:
        raise ValueError(f"tau_r must be positive, got {tau_r!r}")
    t_arr = np.asarray(t, dtype=float)
    if x0_n == 0.0:
        if rate > 0:
            raise InvalidInitialWeight("x0 = 0 cannot grow: the closed form is singular")
        out = np.zeros_like(t_arr)
        return float(out) if out.ndim == 0 else out
    if x0_n == 1.0:
        out = np.ones_like(t_arr)
        return float(out) if out.ndim == 0 else out
    log_c = math.log1p(-x0_n * x0_n) - 2.0 * math.log(x0_n)
    out = np.exp(-0.5 * np.logaddexp(0.0, log_c - rate * t_arr / tau_r))
    return float(out) if out.ndim == 0 else out


def q_of_t(config: TwoStateConfig, signs: BranchSigns, t):
    """Collapse observable ``x_1(t) - x_2(t)`` from the closed form."""
    rate = coupling(signs).rate
    x1, x2 = config.initial_values()
    return closed_form_x(x1, rate[0], t, config.tau_r) - closed_form_x(
        x2, rate[1], t, config.tau_r
    )
