"""
Interference of two point sources
=================================

The far-field pattern has period lambda D / d, does not care about a phase
shared by both sources, and agrees with exact path lengths when the screen
is far away.
"""

import numpy as np

from collapse_lab.experiments import (
    InterferenceSpec,
    fringe_period,
    interference_pattern,
    interference_pattern_exact,
)

d, lam = 1e-4, 500e-9
D = 1e4 * d
screen = np.linspace(-0.025, 0.025, 20001)

spec = InterferenceSpec.two_slit(d, D, lam, screen)
far = interference_pattern(spec)
print("central intensity:", far[len(far) // 2])
print("fringe period:", fringe_period(screen, far), "expected:", lam * D / d)

# shift both phases together: nothing changes
shifted = interference_pattern(InterferenceSpec.two_slit(d, D, lam, screen, (1.0, 1.0)))
print("max change under a common phase:", np.max(np.abs(shifted - far)))

# a relative phase moves the fringes instead
moved = interference_pattern(InterferenceSpec.two_slit(d, D, lam, screen, (0.0, np.pi)))
print("intensity at centre with relative phase pi:", moved[len(moved) // 2])

exact = interference_pattern_exact(spec)
print("far field vs exact, relative:", np.max(np.abs(far - exact)) / exact.max())
