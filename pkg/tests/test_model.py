import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from collapse_lab.errors import DegeneratePhase, InvalidInitialWeight
from collapse_lab.model import (
    BranchSigns,
    SystemState,
    TwoStateConfig,
    branch_sign,
    closed_form_x,
    coupling,
    coupling_rates,
    heaviside,
    q_of_t,
    shift_phase,
    wrap_phase,
)

TAU = 1e-14

# Closed-form values from a 40-digit mpmath evaluation of
# 1/sqrt(1 + (1-x0^2)/x0^2 exp(-r t)), cross-checked against mpmath.odefun
# integration of dx/dt = x(1-x^2)/2.
CF_06_GROW_2TAU = 0.8978107504719887037
CF_06_DECAY_2TAU = 0.2659715595064699069
Q_EQUAL_10TAU = 0.9960417809823832943


def test_branch_sign_examples():
    assert branch_sign(0.0) == 1
    assert branch_sign(math.pi) == -1
    with pytest.raises(DegeneratePhase):
        branch_sign(math.pi / 2)
    with pytest.raises(DegeneratePhase):
        branch_sign(-math.pi / 2)


def test_branch_sign_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        branch_sign(0.0, tol=0.0)


@pytest.mark.parametrize(
    "theta_raw, x0, expected",
    [(0.0, 0.5, 0.0), (math.pi, 0.5, math.pi / 2), (math.pi, 0.75, math.pi / 4)],
)
def test_shift_phase(theta_raw, x0, expected):
    assert shift_phase(theta_raw, x0) == pytest.approx(expected, abs=1e-15)


def test_heaviside_zero_is_zero():
    assert heaviside(0) == 0
    assert heaviside(0.0) == 0
    assert heaviside(1e-300) == 1
    assert heaviside(-1) == 0


def _f_literal(alpha, n):
    # term-by-term transcription, kept separate from the implementation;
    # for two components the inner sums have a single term
    k = 1 - n
    H = lambda v: 1 if v > 0 else 0  # noqa: E731
    first = (1 - 2 * H(alpha[k])) * alpha[n]
    second = (1 - H(alpha[k])) * H(1 - H(-alpha[k])) * (1 - alpha[n])
    return first + second


@pytest.mark.parametrize(
    "alpha, rate",
    [((1, -1), (1, -1)), ((-1, 1), (-1, 1)), ((1, 1), (-1, -1)), ((-1, -1), (1, 1))],
)
def test_coupling_truth_table(alpha, rate):
    res = coupling(BranchSigns(alpha))
    assert res.rate == rate
    assert res.f == tuple(_f_literal(alpha, n) for n in range(2))
    assert all(r in (-1, 1) for r in res.rate)


def test_coupling_general_n_matches_two_state():
    for alpha in itertools.product((-1, 1), repeat=2):
        assert coupling_rates(alpha) == coupling(BranchSigns(alpha))


def test_coupling_three_states_single_survivor():
    # exactly one positive sign: that component grows, the others decay
    res = coupling_rates((1, -1, -1))
    assert res.rate[0] > 0
    assert all(r < 0 for r in res.rate[1:])


def test_branch_signs_validation():
    with pytest.raises(ValueError):
        BranchSigns((1, 0))
    with pytest.raises(ValueError):
        BranchSigns.parse("+x")
    assert BranchSigns.parse("-+").alpha == (-1, 1)
    assert str(BranchSigns((1, -1))) == "+-"


def test_closed_form_examples():
    assert closed_form_x(1.0, 1, 5 * TAU, TAU) == 1.0
    assert closed_form_x(1.0, -1, 5 * TAU, TAU) == 1.0
    assert closed_form_x(0.6, 1, 2 * TAU, TAU) == pytest.approx(CF_06_GROW_2TAU, rel=1e-14)
    assert closed_form_x(0.6, -1, 2 * TAU, TAU) == pytest.approx(CF_06_DECAY_2TAU, rel=1e-14)


def test_closed_form_zero_weight():
    assert closed_form_x(0.0, -1, 3 * TAU, TAU) == 0.0
    with pytest.raises(InvalidInitialWeight):
        closed_form_x(0.0, 1, 3 * TAU, TAU)


def test_closed_form_far_future_is_finite():
    t = np.array([0.0, 1e3, 1e6]) * TAU
    for r in (-1, 1):
        v = closed_form_x(0.3, r, t, TAU)
        assert np.all(np.isfinite(v))
    assert closed_form_x(0.3, -1, 1e6 * TAU, TAU) == 0.0
    assert closed_form_x(0.3, 1, 1e6 * TAU, TAU) == 1.0


@given(x0=st.floats(1e-6, 1.0), rate=st.sampled_from([-1, 1]))
def test_closed_form_identity_at_zero(x0, rate):
    assert abs(closed_form_x(x0, rate, 0.0, TAU) - x0) <= 1e-14


@given(x0=st.floats(0.01, 0.99), rate=st.sampled_from([-1, 1]))
def test_closed_form_strictly_monotone(x0, rate):
    t = np.linspace(0.0, 5.0, 200) * TAU
    d = np.diff(closed_form_x(x0, rate, t, TAU))
    assert np.all(d * rate > 0)


@given(x0=st.floats(0.05, 0.95), rate=st.sampled_from([-1, 1]), t=st.floats(1e-3, 20.0))
def test_closed_form_solves_half_rate_ode(x0, rate, t):
    # central difference of the closed form vs. rate * x (1 - x^2) / (2 tau)
    h = 1e-5
    x = closed_form_x(x0, rate, t, 1.0)
    slope = (closed_form_x(x0, rate, t + h, 1.0) - closed_form_x(x0, rate, t - h, 1.0)) / (2 * h)
    assert slope == pytest.approx(0.5 * rate * x * (1 - x * x), abs=1e-8)


def test_q_examples():
    cfg = TwoStateConfig((0.5, 0.5), TAU)
    assert q_of_t(cfg, BranchSigns((1, -1)), 0.0) == 0.0
    assert q_of_t(cfg, BranchSigns((1, -1)), 10 * TAU) == pytest.approx(Q_EQUAL_10TAU, rel=1e-14)
    assert q_of_t(cfg, BranchSigns((-1, 1)), 200 * TAU) == pytest.approx(-1.0, abs=1e-15)


def test_normalization_only_asymptotic():
    cfg = TwoStateConfig((0.5, 0.5), TAU)
    signs = BranchSigns((1, -1))
    rate = coupling(signs).rate
    total = lambda t: (  # noqa: E731
        closed_form_x(0.5, rate[0], t, TAU) + closed_form_x(0.5, rate[1], t, TAU)
    )
    assert abs(total(50 * TAU) - 1.0) < 1e-6
    t = np.linspace(0.0, 5.0, 501)[1:-1] * TAU
    assert np.max(np.abs(total(t) - 1.0)) > 0.0
    # argmax sits on the growing component for every t > 0
    x1 = closed_form_x(0.5, rate[0], t, TAU)
    x2 = closed_form_x(0.5, rate[1], t, TAU)
    assert np.all(x1 > x2)
    assert q_of_t(cfg, signs, t).min() > 0


def test_two_state_config_validation():
    with pytest.raises(ValueError):
        TwoStateConfig((0.6, 0.6), TAU)
    with pytest.raises(ValueError):
        TwoStateConfig((0.5, 0.5), 0.0)
    with pytest.raises(ValueError):
        TwoStateConfig((1.2, -0.2), TAU)
    cfg = TwoStateConfig((0.36, 0.64), TAU, amplitude_convention="amplitude")
    assert cfg.initial_values() == pytest.approx((0.6, 0.8))


@given(st.floats(-100.0, 100.0))
def test_wrap_phase_range(theta):
    w = wrap_phase(theta)
    assert 0.0 <= w < 2 * math.pi
    assert math.isclose(math.cos(w), math.cos(theta), abs_tol=1e-9)


def test_wrap_phase_tiny_negative():
    assert wrap_phase(-1e-18) == 0.0


def test_system_state_invariants():
    s = SystemState(0.0, (0.25, 0.75), (7.0, -1.0))
    assert all(0 <= th < 2 * math.pi for th in s.theta)
    assert s.q == -0.5
    with pytest.raises(ValueError):
        SystemState(0.0, (1.1, 0.0), (0.0, 0.0))
