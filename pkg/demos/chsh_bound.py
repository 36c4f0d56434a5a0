"""
CHSH values for the singlet
===========================

The rotated measurement setting reaches 2 sqrt 2; local deterministic
strategies never exceed 2, and random observables stay below 2 sqrt 2.
"""

import numpy as np

from collapse_lab.constants import CHSH_MEASURED
from collapse_lab.experiments import ChshSetting, chsh_lhv_max, chsh_value, random_setting

res = chsh_value(ChshSetting.rotated_45())
print("correlations:", res.correlations)
print("F =", res.value)

print("local deterministic maximum:", chsh_lhv_max())

rng = np.random.default_rng(0)
values = [chsh_value(random_setting(rng)).value for _ in range(2000)]
print(f"random settings: max F = {max(values):.4f}, mean F = {np.mean(values):.4f}")

for name, (value, err) in CHSH_MEASURED.items():
    print(f"measured ({name}): {value} +- {err}")
