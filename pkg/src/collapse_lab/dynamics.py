"""Time integration of the coupled weight/phase system.

After onset the weights evolve independently of the phases, so the phase
equation only carries the free rotation ``-omega_n`` plus an optional
chaotic diagonal term.  The chaotic term is a logistic map at r = 4, held
piecewise constant over windows of length ``step_period``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DegenerateSeed, NonFiniteState, SingularDenominator
from .model import (
    TWO_PI,
    BranchSigns,
    SystemState,
    TwoStateConfig,
    closed_form_x,
    coupling,
    wrap_phase,
)

# 0.25 and 0.5 are not fixed points but land on one (0.75) or on the
# absorbing pair 1 -> 0 after a single step.
_FORBIDDEN_SEEDS = (0.25, 0.5, 0.75)
_NUDGE = 2.0**-40


def logistic_step(u):
    """One step of ``u <- 4u(1-u)``, kept strictly inside (0, 1).

    Rounding can send an iterate onto 1.0 (then 0 forever) or onto the fixed
    point 0.75; such iterates are nudged by 2**-40.  Works on scalars and
    arrays.
    """
    nxt = 4.0 * u * (1.0 - u)
    if np.ndim(nxt) == 0:
        if nxt >= 1.0:
            return 1.0 - _NUDGE
        if nxt <= 0.0:
            return _NUDGE
        if nxt == 0.75:
            return 0.75 + _NUDGE
        return float(nxt)
    bad = (nxt >= 1.0) | (nxt <= 0.0) | (nxt == 0.75)
    if bad.any():
        nxt = np.where(nxt >= 1.0, 1.0 - _NUDGE, nxt)
        nxt = np.where(nxt <= 0.0, _NUDGE, nxt)
        nxt = np.where(nxt == 0.75, 0.75 + _NUDGE, nxt)
    return nxt


def validate_seed(u: float) -> float:
    u = float(u)
    if not 0.0 < u < 1.0 or u in _FORBIDDEN_SEEDS:
        raise DegenerateSeed(
            f"logistic seed must lie in (0, 1) and avoid {_FORBIDDEN_SEEDS}, got {u!r}"
        )
    return u


def chaotic_phase_next(u: float, amplitude: float = 1.0) -> tuple[float, float]:
    """Advance the logistic generator and emit ``amplitude * 2*pi * u_next``.

    Returns:
        ``(phase, u_next)``.
    """
    validate_seed(u)
    u_next = logistic_step(u)
    return amplitude * TWO_PI * u_next, u_next


@dataclass(frozen=True)
class CommonLogistic:
    """One chaotic sequence shared by both components."""

    seed: float
    amplitude: float = 1.0
    step_period: float = 1.0

    def __post_init__(self):
        validate_seed(self.seed)
        _check_chaos_params(self.amplitude, self.step_period)

    @property
    def seeds(self) -> tuple[float, float]:
        return (self.seed, self.seed)


@dataclass(frozen=True)
class IndependentLogistic:
    """A separate chaotic sequence per component."""

    seeds: tuple[float, float]
    amplitude: float = 1.0
    step_period: float = 1.0

    def __post_init__(self):
        for s in self.seeds:
            validate_seed(s)
        _check_chaos_params(self.amplitude, self.step_period)


ChaosModel = Union[CommonLogistic, IndependentLogistic, None]


def _check_chaos_params(amplitude, step_period):
    if amplitude < 0:
        raise ValueError(f"chaos amplitude must be >= 0, got {amplitude!r}")
    if not step_period > 0:
        raise ValueError(f"step_period must be > 0, got {step_period!r}")


@dataclass(frozen=True)
class PhaseModel:
    """Free angular frequencies plus an optional chaotic diagonal term.

    The chaotic term contributes ``phase_k / step_period`` (rad/s) to
    ``dtheta_n/dt`` during window ``k``, so that each window accumulates the
    emitted phase ``phase_k``.
    """

    omega: tuple[float, float] = (0.0, 0.0)
    chaos: ChaosModel = None

    def diagonal_schedule(self, n_windows: int) -> np.ndarray:
        """Per-window diagonal rates, shape ``(n_windows, 2)``."""
        out = np.zeros((max(n_windows, 0), 2))
        if self.chaos is None or n_windows <= 0:
            return out
        u = np.array(self.chaos.seeds, dtype=float)
        scale = self.chaos.amplitude * TWO_PI / self.chaos.step_period
        for k in range(n_windows):
            u = logistic_step(u)
            out[k] = scale * u
        return out

    def diagonal_at(self, t: float) -> tuple[float, float]:
        if self.chaos is None:
            return (0.0, 0.0)
        k = int(math.floor(t / self.chaos.step_period))
        row = self.diagonal_schedule(k + 1)[k]
        return (float(row[0]), float(row[1]))


@dataclass(frozen=True)
class IntegratorSettings:
    """Fixed-step RK4 settings; ``step`` and ``t_end`` are in seconds."""

    step: float
    t_end: float
    clamp: bool = True

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be > 0, got {self.step!r}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end!r}")
        if self.t_end > 0 and self.step > self.t_end:
            raise ValueError("step must not exceed t_end")

    @classmethod
    def in_tau_units(cls, tau_r: float, step: float = 1e-3, t_end: float = 30.0,
                     clamp: bool = True) -> IntegratorSettings:
        return cls(step=step * tau_r, t_end=t_end * tau_r, clamp=clamp)

    def grid(self) -> np.ndarray:
        """Sample times ``0, h, 2h, ...`` ending exactly at ``t_end``."""
        if self.t_end == 0:
            return np.zeros(1)
        n = int(math.ceil(self.t_end / self.step - 1e-9))
        t = np.arange(n + 1) * self.step
        t[-1] = self.t_end
        return t


@dataclass(frozen=True)
class Trajectory:
    """Time series of weights and phases.

    Attributes:
        t: sample times, strictly increasing, shape ``(n,)``.
        x: weights, shape ``(n, 2)``.
        theta: phases in ``[0, 2*pi)``, shape ``(n, 2)``.
        alpha: signs registered at onset.
    """

    t: np.ndarray
    x: np.ndarray
    theta: np.ndarray
    alpha: BranchSigns
    q_series: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "q_series", self.x[:, 0] - self.x[:, 1])

    def __len__(self):
        return len(self.t)

    @property
    def samples(self) -> list[SystemState]:
        return [
            SystemState(float(t), tuple(x), tuple(th), self.alpha)
            for t, x, th in zip(self.t, self.x, self.theta)
        ]

    @property
    def final(self) -> SystemState:
        return SystemState(
            float(self.t[-1]), tuple(self.x[-1]), tuple(self.theta[-1]), self.alpha
        )


def _xdot(x: float, rate: int, tau_r: float) -> float:
    return 0.5 * rate * x * (1.0 - x * x) / tau_r


def rhs(state: SystemState, signs: BranchSigns, phase_model: PhaseModel, tau_r: float,
        diagonal: tuple[float, float] | None = None):
    """Time derivatives ``(xdot, thetadot)`` of the two-state system.

    ``xdot_n = rate_n * x_n (1 - x_n**2) / (2 tau_r)`` reads only the frozen
    signs, never the evolving phases.  ``thetadot_n = -omega_n + d_n`` where
    ``d_n`` is the chaotic diagonal rate (looked up from ``phase_model`` at
    ``state.t`` unless given).
    """
    rate = coupling(signs).rate
    if diagonal is None:
        diagonal = phase_model.diagonal_at(state.t)
    xdot = (_xdot(state.x[0], rate[0], tau_r), _xdot(state.x[1], rate[1], tau_r))
    thdot = (
        -phase_model.omega[0] + diagonal[0],
        -phase_model.omega[1] + diagonal[1],
    )
    return xdot, thdot


def _rk4_scalar(x: float, rate: int, tau_r: float, h: float) -> float:
    k1 = _xdot(x, rate, tau_r)
    k2 = _xdot(x + 0.5 * h * k1, rate, tau_r)
    k3 = _xdot(x + 0.5 * h * k2, rate, tau_r)
    k4 = _xdot(x + h * k3, rate, tau_r)
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _advance(x, theta, rate, thdot, tau_r, h, clamp):
    # theta's right-hand side is constant over the step, so RK4 reduces to
    # a single Euler increment for it.
    out_x = []
    for xn, rn in zip(x, rate):
        v = _rk4_scalar(xn, rn, tau_r, h)
        if clamp:
            v = min(max(v, 0.0), 1.0)
        out_x.append(v)
    out_th = [th + h * w for th, w in zip(theta, thdot)]
    if not all(math.isfinite(v) for v in (*out_x, *out_th)):
        raise NonFiniteState(f"non-finite state after step: x={out_x}, theta={out_th}")
    return out_x, [wrap_phase(th) for th in out_th]


def step_rk4(state: SystemState, signs: BranchSigns, phase_model: PhaseModel, tau_r: float,
             h: float, clamp: bool = True,
             diagonal: tuple[float, float] | None = None) -> SystemState:
    """One classical fourth-order Runge-Kutta step of :func:`rhs`.

    Raises:
        ValueError: if ``h <= 0``.
        NonFiniteState: if the step produced inf or NaN.
    """
    if not h > 0:
        raise ValueError(f"step size must be > 0, got {h!r}")
    rate = coupling(signs).rate
    _, thdot = rhs(state, signs, phase_model, tau_r, diagonal)
    x, theta = _advance(state.x, state.theta, rate, thdot, tau_r, h, clamp)
    return SystemState(state.t + h, tuple(x), tuple(theta), signs)


def integrate(config: TwoStateConfig, signs: BranchSigns, phase_model: PhaseModel | None,
              settings: IntegratorSettings,
              theta0: tuple[float, float] = (0.0, 0.0)) -> Trajectory:
    """Integrate from onset (t = 0) to ``settings.t_end`` with fixed-step RK4."""
    phase_model = phase_model or PhaseModel()
    tau_r = config.tau_r
    t = settings.grid()
    n = len(t)
    rate = coupling(signs).rate

    if phase_model.chaos is not None:
        period = phase_model.chaos.step_period
        window = np.floor(t[:-1] / period).astype(np.int64)
        n_windows = int(window[-1]) + 1 if n > 1 else 0
        schedule = phase_model.diagonal_schedule(n_windows)
    else:
        window = None
        schedule = None

    xs = np.empty((n, 2))
    ths = np.empty((n, 2))
    x = list(config.initial_values())
    theta = [wrap_phase(th) for th in theta0]
    xs[0], ths[0] = x, theta
    om1, om2 = phase_model.omega
    for i in range(1, n):
        h = t[i] - t[i - 1]
        if schedule is not None:
            d = schedule[window[i - 1]]
            thdot = (-om1 + d[0], -om2 + d[1])
        else:
            thdot = (-om1, -om2)
        x, theta = _advance(x, theta, rate, thdot, tau_r, h, settings.clamp)
        xs[i], ths[i] = x, theta
    return Trajectory(t=t, x=xs, theta=ths, alpha=signs)


def closed_form_trajectory(config: TwoStateConfig, signs: BranchSigns,
                           settings: IntegratorSettings,
                           phase_model: PhaseModel | None = None,
                           theta0: tuple[float, float] = (0.0, 0.0)) -> Trajectory:
    """Same sample grid as :func:`integrate`, weights from the closed form.

    Phases carry the free rotation only; the chaotic term is ignored since
    it cannot influence the weights.
    """
    phase_model = phase_model or PhaseModel()
    t = settings.grid()
    rate = coupling(signs).rate
    x0 = config.initial_values()
    xs = np.column_stack(
        [closed_form_x(x0[k], rate[k], t, config.tau_r) for k in range(2)]
    )
    omega = np.asarray(phase_model.omega, dtype=float)
    ths = np.mod(np.asarray(theta0, dtype=float)[None, :] - t[:, None] * omega[None, :], TWO_PI)
    ths = np.where(ths >= TWO_PI, 0.0, ths)
    return Trajectory(t=t, x=xs, theta=ths, alpha=signs)


def offdiag_element(state: SystemState, n: int, m: int, tau_r: float,
                    tol: float = 1e-12) -> float:
    """Off-diagonal interaction element ``H_nm`` for the registered signs.

    ``f_n alpha_n x_n (1 - x_n**2) / (sqrt(x_n x_m) sin(theta_n - theta_m))``
    divided by ``tau_r``.  Diagnostic only: substituted back into the
    general weight equation it gives ``-2 f_n alpha_n x_n (1 - x_n**2)``,
    which is not the weight equation used by :func:`rhs`.

    Raises:
        SingularDenominator: when the sine or ``sqrt(x_n x_m)`` vanishes.
    """
    if n == m:
        raise ValueError("n and m must differ")
    if state.alpha is None:
        raise ValueError("state has no registered branch signs")
    s = math.sin(state.theta[n] - state.theta[m])
    root = math.sqrt(max(state.x[n], 0.0) * max(state.x[m], 0.0))
    if abs(s) < tol or root < tol:
        raise SingularDenominator(
            f"sin(dtheta) = {s!r}, sqrt(x_n x_m) = {root!r}: element is singular"
        )
    res = coupling(state.alpha)
    fa = res.f[n] * state.alpha.alpha[n]
    xn = state.x[n]
    return fa * xn * (1.0 - xn * xn) / (root * s) / tau_r
