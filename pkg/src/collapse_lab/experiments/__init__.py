from .bell import (
    SINGLET,
    SX,
    SZ,
    TSIRELSON,
    ChshResult,
    ChshSetting,
    chsh_lhv_max,
    chsh_value,
    random_setting,
    singlet_correlation,
)
from .interference import (
    InterferenceSpec,
    fringe_period,
    interference_pattern,
    interference_pattern_exact,
)
from .malus import (
    MalusSpec,
    MonteCarloEstimate,
    malus_deviation_curve,
    malus_expectation,
    malus_monte_carlo,
    malus_ratio,
)
from .timescale import TauEstimate, estimate_tau
