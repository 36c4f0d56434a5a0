"""Physical constants (SI, CODATA 2018 exact values)."""

import math

PLANCK = 6.62607015e-34  # J s
SPEED_OF_LIGHT = 299792458.0  # m / s
HBAR = PLANCK / (2.0 * math.pi)  # J s

# Order of magnitude quoted for a 400 nm photon, and a published upper bound
# on the reduction time; both seconds.
QUOTED_TAU_400NM = 1e-14
TAU_UPPER_BOUND = 1e-14

# Measured CHSH values (value, one-sigma uncertainty).
CHSH_MEASURED = {
    "aspect": (2.697, 0.015),
    "rowe": (2.25, 0.03),
    "weihs": (2.92, 0.18),
}
