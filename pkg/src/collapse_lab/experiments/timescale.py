"""Order-of-magnitude reduction time from a photon energy."""

from __future__ import annotations

from dataclasses import dataclass

from ..constants import HBAR, PLANCK, QUOTED_TAU_400NM, SPEED_OF_LIGHT, TAU_UPPER_BOUND


@dataclass(frozen=True)
class TauEstimate:
    wavelength: float
    energy: float
    tau: float
    quoted_tau: float = QUOTED_TAU_400NM
    upper_bound: float = TAU_UPPER_BOUND


def estimate_tau(wavelength: float) -> TauEstimate:
    """``hbar / E`` with ``E = h c / wavelength`` (equal to ``wavelength / (2 pi c)``).

    The quoted 1e-14 s for 400 nm is carried along for comparison; it is
    about 50 times larger than this estimate.
    """
    if not wavelength > 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength!r}")
    energy = PLANCK * SPEED_OF_LIGHT / wavelength
    return TauEstimate(wavelength=wavelength, energy=energy, tau=HBAR / energy)
