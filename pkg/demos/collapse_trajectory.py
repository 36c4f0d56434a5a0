"""
A single collapse trajectory
============================

Two components start at equal weight.  Once the branch signs are fixed at
onset, the weights follow a sigmoid-like path and the one with the growing
sign takes over.  The result is written to ``collapse.svg``.
"""

import numpy as np

from collapse_lab import BranchSigns, IntegratorSettings, TwoStateConfig
from collapse_lab.dynamics import closed_form_trajectory, integrate
from collapse_lab.svg import write_svg

tau = 1e-14
config = TwoStateConfig(x0=(0.5, 0.5), tau_r=tau)
settings = IntegratorSettings.in_tau_units(tau, step=1e-2, t_end=20.0)

# signs (+, -): component 1 grows, component 2 decays
signs = BranchSigns.parse("+-")
traj = integrate(config, signs, None, settings)

# the same run from the closed form, for comparison
exact = closed_form_trajectory(config, signs, settings)
print("max |RK4 - closed form|:", np.max(np.abs(traj.x - exact.x)))

# the weights only sum to one asymptotically
total = traj.x.sum(axis=1)
print("largest transient |x1 + x2 - 1|:", np.max(np.abs(total - 1.0)))
print("final q:", traj.final.q)

t = (traj.t / tau).tolist()
write_svg(
    "collapse.svg",
    {"x1": (t, traj.x[:, 0].tolist()), "x2": (t, traj.x[:, 1].tolist()),
     "q": (t, traj.q_series.tolist())},
    xlabel="t / tau_r", ylabel="weight", title="collapse with signs (+, -)",
)
