"""CHSH correlations for the spin singlet and for local deterministic models."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import NonHermitian

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

# (|01> - |10>)/sqrt(2); rotation invariant, so the basis of the kets is immaterial.
SINGLET = np.array([0, 1, -1, 0], dtype=complex) * math.sqrt(0.5)
# |phi><phi| has entries 0 and +-1/2, all exact in binary
SINGLET_DENSITY = 0.5 * np.array(
    [[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]], dtype=complex
)

TSIRELSON = 2.0 * math.sqrt(2.0)
HERMITIAN_TOL = 1e-12


def check_observable(op, name="operator") -> np.ndarray:
    """Validate a 2x2 Hermitian observable with spectrum inside [-1, 1]."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError(f"{name} must be 2x2, got shape {op.shape}")
    if np.max(np.abs(op - op.conj().T)) > HERMITIAN_TOL:
        raise NonHermitian(f"{name} is not Hermitian")
    radius = np.max(np.abs(np.linalg.eigvalsh(op)))
    if radius > 1.0 + HERMITIAN_TOL:
        raise ValueError(f"{name} has spectral radius {radius!r} > 1")
    return op


def spin_along(angle: float) -> np.ndarray:
    """``cos(angle) S_z + sin(angle) S_x``: spin along a direction in the x-z plane."""
    return math.cos(angle) * SZ + math.sin(angle) * SX


@dataclass(frozen=True)
class ChshSetting:
    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            object.__setattr__(self, name, check_observable(getattr(self, name), name))

    @classmethod
    def rotated_45(cls) -> ChshSetting:
        """S_z and S_x for A; B rotated by 45 degrees."""
        r = math.sqrt(0.5)
        return cls(a=SZ, a_prime=SX, b=-r * (SZ + SX), b_prime=r * (SZ - SX))

    @classmethod
    def from_angles(cls, a, a_prime, b, b_prime) -> ChshSetting:
        return cls(*(spin_along(x) for x in (a, a_prime, b, b_prime)))


def singlet_correlation(op_a, op_b) -> float:
    """``<phi| A (x) B |phi>`` for the singlet state, as ``Tr(rho A (x) B)``."""
    op_a = check_observable(op_a, "A")
    op_b = check_observable(op_b, "B")
    value = np.trace(SINGLET_DENSITY @ np.kron(op_a, op_b))
    return float(value.real)


@dataclass(frozen=True)
class ChshResult:
    correlations: tuple[float, float, float, float]  # ab, ab', a'b, a'b'
    value: float


def chsh_functional(c_ab, c_abp, c_apb, c_apbp) -> float:
    """``max(|C_ab + C_ab'| + |C_a'b - C_a'b'|, |C_ab - C_ab'| + |C_a'b + C_a'b'|)``."""
    return max(abs(c_ab + c_abp) + abs(c_apb - c_apbp), abs(c_ab - c_abp) + abs(c_apb + c_apbp))


def chsh_value(setting: ChshSetting) -> ChshResult:
    corr = (
        singlet_correlation(setting.a, setting.b),
        singlet_correlation(setting.a, setting.b_prime),
        singlet_correlation(setting.a_prime, setting.b),
        singlet_correlation(setting.a_prime, setting.b_prime),
    )
    return ChshResult(correlations=corr, value=chsh_functional(*corr))


def random_observable(rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian 2x2 matrix scaled to spectral radius in (0, 1]."""
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    h = 0.5 * (m + m.conj().T)
    radius = np.max(np.abs(np.linalg.eigvalsh(h)))
    # eigvalsh rounding can push the radius a hair past 1 without the margin
    return h * (rng.uniform(0.0, 1.0) ** 0.25 / radius) * (1.0 - 1e-15)


def random_setting(rng: np.random.Generator) -> ChshSetting:
    return ChshSetting(*(random_observable(rng) for _ in range(4)))


def deterministic_strategies():
    """All 16 assignments ``(A(a), A(a'), B(b), B(b'))`` of +-1."""
    return itertools.product((-1, 1), repeat=4)


def strategy_value(strategy) -> float:
    a, ap, b, bp = strategy
    return chsh_functional(a * b, a * bp, ap * b, ap * bp)


def chsh_lhv_max(n_strategies: int = 0, seed: int | None = None,
                 exhaustive: bool = True) -> float:
    """Largest CHSH value over local deterministic strategies.

    Enumerates the 16 deterministic strategies when ``exhaustive`` and adds
    ``n_strategies`` random ones drawn with ``seed``.
    """
    if n_strategies < 0:
        raise ValueError("n_strategies must be >= 0")
    if n_strategies == 0 and not exhaustive:
        raise ValueError("nothing to evaluate: n_strategies = 0 and exhaustive is off")
    best = -math.inf
    if exhaustive:
        best = max(strategy_value(s) for s in deterministic_strategies())
    if n_strategies:
        rng = np.random.default_rng(seed)
        draws = rng.choice((-1, 1), size=(n_strategies, 4))
        best = max(best, max(strategy_value(row) for row in draws.tolist()))
    return float(best)
