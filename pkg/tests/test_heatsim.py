import math
import random

import pytest

from xiflow.heatsim import (
    Mixture,
    adaptive_simpson,
    density,
    derivative_signs,
    entropy,
    entropy_series,
    gaussian_entropy_closed_form,
    total_mass,
    weighted_integral,
    xi_values,
)
from xiflow.ibp import generators

GAUSS = Mixture(((1.0, 0.0, 1.0),))
BIMODAL = Mixture(((0.5, -2.0, 0.5), (0.5, 2.0, 1.0)))


def test_mixture_validation():
    with pytest.raises(ValueError):
        Mixture(((0.5, 0.0, 1.0),))  # weights must sum to 1
    with pytest.raises(ValueError):
        Mixture(((1.0, 0.0, -1.0),))
    assert Mixture.parse("0.5:-2:0.5,0.5:2:1").components == BIMODAL.components
    with pytest.raises(ValueError):
        Mixture.parse("1:0")


def test_density_examples():
    assert density(GAUSS, 0.0, 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi))
    sym = Mixture(((0.5, -1.0, 1.0), (0.5, 1.0, 1.0)))
    for x in (0.3, 1.7):
        assert density(sym, x, 0.5) == pytest.approx(density(sym, -x, 0.5))
    t = 1e6
    assert density(GAUSS, 0.0, t) * math.sqrt(t) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-5)


def test_entropy_closed_forms():
    v = 1.5
    assert entropy(GAUSS, 1.0, 0.5) == pytest.approx(0.5 * math.log(2 * math.pi * math.e * v), abs=1e-11)
    h2 = entropy(GAUSS, 2.0, 0.5)
    assert abs(h2 - gaussian_entropy_closed_form(v, 2.0)) < 1e-9
    assert abs(h2 - (1 - 1 / (2 * math.sqrt(math.pi * v)))) < 1e-9


def test_entropy_increasing_in_time():
    hs = [entropy(BIMODAL, 1.5, t) for t in (0.2, 0.5, 1.0, 2.0)]
    assert all(a < b for a, b in zip(hs, hs[1:]))


def test_mass_conservation():
    for t in (0.0, 0.5, 3.0):
        assert abs(total_mass(BIMODAL, t) - 1.0) < 1e-10


def test_derivative_signs_bimodal():
    rep = derivative_signs(BIMODAL, 1.5, 0.5, 5)
    assert rep.signs() == ["+", "-", "+", "-", "+"]
    for e in rep.entries:
        assert abs(e.value) > 10 * e.error


def test_derivative_signs_alpha_above():
    rep = derivative_signs(BIMODAL, 2.5, 0.5, 2)
    assert rep.signs() == ["+", "-"]


def test_derivative_signs_single_gaussian_analytic():
    # closed form H_a(t) in (s + t) gives analytic derivative signs
    rep = derivative_signs(GAUSS, 1.5, 0.5, 4)
    assert rep.signs() == ["+", "-", "+", "-"]
    v = 1.5
    h = 1e-5
    analytic = (gaussian_entropy_closed_form(v + h, 1.5)
                - gaussian_entropy_closed_form(v - h, 1.5)) / (2 * h)
    assert rep.entries[0].value == pytest.approx(analytic, rel=1e-5)


def test_richardson_consistency_under_halving():
    r1 = derivative_signs(BIMODAL, 1.5, 0.5, 3, h=0.005)
    r2 = derivative_signs(BIMODAL, 1.5, 0.5, 3, h=0.0025)
    for e1, e2 in zip(r1.entries, r2.entries):
        assert abs(e1.value - e2.value) <= 10 * (e1.error + e2.error)


def test_stencil_domain_guard():
    with pytest.raises(ValueError):
        derivative_signs(GAUSS, 1.5, 0.01, 5, h=0.01)
    with pytest.raises(ValueError):
        derivative_signs(GAUSS, 1.5, 1.0, 6)


def test_numeric_ibp_vanishing():
    # int u^a T_j dx = 0 along the flow, checked by quadrature
    rng = random.Random(9)
    for _ in range(3):
        w = rng.uniform(0.3, 0.7)
        mix = Mixture(((w, rng.uniform(-1, 0), rng.uniform(0.5, 1.5)),
                       (1 - w, rng.uniform(0, 1), rng.uniform(0.5, 1.5))))
        for g in generators(2):
            val = weighted_integral(mix, g.poly, 1.7, 0.6)
            assert abs(val) < 1e-8, g.partition.render()


def test_xi_values_match_gaussian_derivatives():
    xs = xi_values(GAUSS, 0.7, 0.5, 2)
    v = 1.5
    assert xs[0] == pytest.approx(-0.7 / v)
    assert xs[1] == pytest.approx((0.7 / v) ** 2 - 1 / v)


def test_entropy_series_and_report_json():
    series = entropy_series(GAUSS, 2.0, [0.1, 0.2])
    assert len(series) == 2 and series[0][1] < series[1][1]
    rep = derivative_signs(GAUSS, 1.5, 0.5, 2)
    from xiflow.heatsim import SimReport
    assert SimReport.from_json_dict(rep.to_json_dict()).to_json_dict() == rep.to_json_dict()


def test_adaptive_simpson_known_integral():
    assert adaptive_simpson(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-12)
