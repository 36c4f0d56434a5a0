"""Simulation of a nonlinear, phase-driven collapse model for two-state systems.

The pieces:

- :mod:`collapse_lab.model`: branch signs, coupling, closed-form weights, ``q``
- :mod:`collapse_lab.dynamics`: RK4 integration with a chaotic phase term
- :mod:`collapse_lab.ensemble`: reproducible phase sampling and Born statistics
- :mod:`collapse_lab.experiments`: Malus deviation, CHSH, interference, tau estimate
- :mod:`collapse_lab.cli`: the ``collapse-lab`` command
"""

__version__ = "0.1.0"

from .dynamics import (
    CommonLogistic,
    IndependentLogistic,
    IntegratorSettings,
    PhaseModel,
    Trajectory,
    chaotic_phase_next,
    closed_form_trajectory,
    integrate,
    offdiag_element,
    rhs,
    step_rk4,
)
from .ensemble import (
    Outcome,
    OutcomeClass,
    OutcomeStats,
    SamplingSpec,
    SplitMix64,
    born_report,
    classify,
    run_ensemble,
    sample_signs,
)
from .model import (
    AmplitudeConvention,
    BranchSigns,
    CouplingResult,
    SamplingMode,
    SystemState,
    TwoStateConfig,
    branch_sign,
    closed_form_x,
    coupling,
    q_of_t,
    shift_phase,
)
