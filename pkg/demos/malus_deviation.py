"""
Transient deviation from Malus's law
====================================

At onset the expected transmission exceeds sin^2(eps); the excess relaxes
over a few reduction times.  A Monte Carlo over onset phases reproduces
the closed form.
"""

import math

import numpy as np

from collapse_lab.experiments import malus_expectation, malus_monte_carlo, malus_ratio

tau = 1e-14
t = np.array([0.0, 1.0, 2.0, 5.0, 10.0, 50.0]) * tau

for deg in (20, 30, 45):
    eps = math.radians(deg)
    ratios = malus_ratio(eps, t, tau)
    print(f"{deg:2d} deg  ratio to sin^2:", np.array2string(ratios, precision=4))

# Monte Carlo at 30 degrees, two reduction times
eps, t2 = math.radians(30), 2 * tau
est = malus_monte_carlo(eps, t2, tau, n=10**6, seed=1)
exact = malus_expectation(eps, t2, tau)
print(f"\nMC {est.mean:.5f} +- {est.stderr:.5f}  vs closed form {exact:.5f}")
