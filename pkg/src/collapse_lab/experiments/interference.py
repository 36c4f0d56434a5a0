"""Far-field interference of independent point sources.

Each source ``n`` sits at transverse position ``y_n`` with its own phase
``theta_n``; a screen at distance ``D`` records

    I(y') = |sum_n exp(i (theta_n + k (y_n - y')^2 / (2 D)))|^2

A phase common to every source drops out of ``I``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import EmptySources


@dataclass(frozen=True)
class InterferenceSpec:
    """Geometry in meters, ``k`` in rad/m, ``sources`` as ``(y_n, theta_n)`` pairs."""

    sources: tuple[tuple[float, float], ...]
    distance: float
    k: float
    screen: np.ndarray

    def __post_init__(self):
        if len(self.sources) == 0:
            raise EmptySources("at least one source is required")
        if not self.distance > 0:
            raise ValueError(f"screen distance must be > 0, got {self.distance!r}")
        object.__setattr__(self, "screen", np.asarray(self.screen, dtype=float))
        span = max(abs(y) for y, _ in self.sources)
        if self.distance < 100.0 * span:
            warnings.warn(
                f"D = {self.distance} is not much larger than the source offsets "
                f"({span}); the far-field form may be inaccurate",
                stacklevel=2,
            )

    @classmethod
    def two_slit(cls, separation: float, distance: float, wavelength: float, screen,
                 phases=(0.0, 0.0)) -> InterferenceSpec:
        half = 0.5 * separation
        return cls(
            sources=((-half, phases[0]), (half, phases[1])),
            distance=distance,
            k=2.0 * math.pi / wavelength,
            screen=screen,
        )

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k


def _intensity(spec: InterferenceSpec, path_excess) -> np.ndarray:
    # |sum_n e^{i phi_n}|^2 = N + 2 sum_{n<m} cos(phi_n - phi_m).  Differencing
    # the source phases first lets a common offset cancel before it meets the
    # (large) path phases, so the pattern is offset invariant to rounding.
    path = [spec.k * path_excess(y_n - spec.screen) for y_n, _ in spec.sources]
    theta = [theta_n for _, theta_n in spec.sources]
    out = np.full(spec.screen.shape, float(len(spec.sources)))
    for n in range(len(path)):
        for m in range(n + 1, len(path)):
            out += 2.0 * np.cos((theta[n] - theta[m]) + (path[n] - path[m]))
    return out


def interference_pattern(spec: InterferenceSpec) -> np.ndarray:
    """Far-field intensity on ``spec.screen``; a single source gives 1."""
    return _intensity(spec, lambda dy: dy * dy / (2.0 * spec.distance))


def interference_pattern_exact(spec: InterferenceSpec) -> np.ndarray:
    """Intensity from the exact path lengths ``sqrt(D^2 + (y_n - y')^2)``.

    The common ``k D`` is subtracted before exponentiating (it cancels in the
    intensity) using ``d - D = dy^2 / (d + D)``, which keeps the phase
    accurate when ``k D`` is huge.
    """
    dist = spec.distance
    return _intensity(spec, lambda dy: dy * dy / (np.sqrt(dist * dist + dy * dy) + dist))


def fringe_period(screen: np.ndarray, intensity: np.ndarray) -> float:
    """Mean spacing of interior local maxima, refined by parabolic interpolation."""
    y = np.asarray(screen, dtype=float)
    i = np.asarray(intensity, dtype=float)
    idx = np.flatnonzero((i[1:-1] > i[:-2]) & (i[1:-1] >= i[2:])) + 1
    if len(idx) < 2:
        raise ValueError("need at least two maxima on the screen to measure a period")
    step = y[1] - y[0]
    left, mid, right = i[idx - 1], i[idx], i[idx + 1]
    denom = left - 2.0 * mid + right
    offset = np.where(denom != 0, 0.5 * (left - right) / np.where(denom == 0, 1, denom), 0.0)
    peaks = y[idx] + offset * step
    return float((peaks[-1] - peaks[0]) / (len(peaks) - 1))
