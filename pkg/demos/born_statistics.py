"""
Born statistics from random onset phases
========================================

Each trajectory draws its onset phases uniformly, registers branch signs,
and evolves.  The marginal frequency with which component n grows should
match its initial weight.  The degenerate endings (both grow, both decay)
are reported too; they are part of the model.
"""

from collapse_lab import SamplingMode, SamplingSpec, TwoStateConfig
from collapse_lab.ensemble import born_report, run_ensemble

config = TwoStateConfig(x0=(0.7, 0.3), tau_r=1e-14)

for mode in (SamplingMode.INDEPENDENT, SamplingMode.COMMON_CHAOTIC):
    stats = run_ensemble(config, SamplingSpec(mode, n_trajectories=100_000, master_seed=42))
    print(f"\n{mode.value}")
    for kind, count, freq, se in stats.rows():
        print(f"  {kind.value:14s} {count:7d}  {freq:.4f} +- {se:.4f}")
    for row in born_report(stats, config.x0):
        print(f"  component {row.component}: grows {row.frequency:.4f}, "
              f"weight {row.expected}, z = {row.z:+.2f}")
    print("  sign pairs:", stats.sign_counts)

# Conditioning on opposite signs does not reproduce the weights: with
# independent phases P(+-) = x1**2 and P(-+) = x2**2.
