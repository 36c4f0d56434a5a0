"""Recompute the frozen reference values from independent high-precision oracles.

The other test modules hard-code these numbers; this module shows where
they come from, using mpmath at 40 digits and never touching the package.
"""

import pytest

from test_experiments import RATIO_T0, TAU_400NM
from test_model import CF_06_DECAY_2TAU, CF_06_GROW_2TAU, Q_EQUAL_10TAU

mp = pytest.importorskip("mpmath")
mp.mp.dps = 40


def _closed_form(x0, rate, t):
    x0 = mp.mpf(x0)
    return 1 / mp.sqrt(1 + (1 - x0**2) / x0**2 * mp.exp(-rate * t))


def _ode(x0, rate, t):
    # dx/dt = rate * x (1 - x^2) / 2, in units of tau
    f = mp.odefun(lambda s, x: rate * x * (1 - x**2) / 2, 0, mp.mpf(x0))
    return f(t)


def test_closed_form_reference_values():
    assert float(_closed_form("0.6", 1, 2)) == CF_06_GROW_2TAU
    assert float(_closed_form("0.6", -1, 2)) == CF_06_DECAY_2TAU
    q = _closed_form("0.5", 1, 10) - _closed_form("0.5", -1, 10)
    assert float(q) == Q_EQUAL_10TAU


@pytest.mark.parametrize("rate", [1, -1])
def test_closed_form_solves_the_weight_equation(rate):
    for t in (mp.mpf("0.5"), mp.mpf(2)):
        assert abs(_ode("0.6", rate, t) - _closed_form("0.6", rate, t)) < mp.mpf(10) ** -25


def test_malus_onset_ratios():
    for deg, frozen in RATIO_T0.items():
        e = mp.radians(deg)
        assert float((mp.sin(e) ** 3 + mp.cos(e) ** 3) / mp.sin(e) ** 2) == frozen


def test_malus_closed_form_at_onset_from_its_printed_form():
    # the printed expectation at t = 0 collapses to sin^3 + cos^3
    for deg in RATIO_T0:
        e = mp.radians(deg)
        printed = (mp.sin(e) ** 2 / mp.sqrt(1 + mp.cot(e) ** 2)
                   + mp.cos(e) ** 2 / mp.sqrt(1 + mp.tan(e) ** 2))
        assert abs(printed - (mp.sin(e) ** 3 + mp.cos(e) ** 3)) < mp.mpf(10) ** -35


def test_grow_probability_arc_length():
    # theta uniform on [0, 2 pi), beta = pi (x0 - 1/2): cos(theta/2 - beta) is
    # positive on [0, cut) and negative on (cut, 2 pi), so P(+) = cut / (2 pi)
    for x0 in ("0.25", "0.5", "0.75", "0.9"):
        beta = mp.pi * (mp.mpf(x0) - mp.mpf("0.5"))
        cut = 2 * (beta + mp.pi / 2)
        assert abs(mp.cos(cut / 2 - beta)) < mp.mpf(10) ** -35
        assert mp.cos(-beta) > 0 and mp.cos(mp.pi - beta) < 0
        assert abs(cut / (2 * mp.pi) - mp.mpf(x0)) < mp.mpf(10) ** -35


def test_tau_estimate():
    lam = mp.mpf("400e-9")
    c = mp.mpf(299792458)
    assert float(lam / (2 * mp.pi * c)) == TAU_400NM
