from fractions import Fraction

import pytest

from xiflow.flow import (
    DerivativeTarget,
    Regime,
    derive_s0,
    faadibruno_s0,
    sign_convention,
)
from xiflow.ratcore import ALPHA, AlphaPoly
from xiflow.xicalc import XiPoly, xi

F = Fraction


def test_s0_small_orders():
    assert derive_s0(1) == XiPoly({xi((2, 1)): AlphaPoly.const(1)})
    assert derive_s0(2) == XiPoly({xi((4, 1)): AlphaPoly.const(1), xi((2, 2)): ALPHA - 1})
    assert derive_s0(3) == XiPoly({
        xi((6, 1)): AlphaPoly.const(1),
        xi((2, 1), (4, 1)): 3 * (ALPHA - 1),
        xi((2, 3)): (ALPHA - 1) * (ALPHA - 2),
    })


def test_oracle_equivalence():
    for n in range(1, 7):
        assert derive_s0(n) == faadibruno_s0(n), n


def test_faadibruno_x2_power_coefficient():
    c = faadibruno_s0(4).coefficient(xi((2, 4)))
    assert c == (ALPHA - 1) * (ALPHA - 2) * (ALPHA - 3)


def test_s0_structure():
    for n in range(1, 7):
        s0 = derive_s0(n)
        assert s0.is_homogeneous(2 * n)
        for m in s0.terms:
            assert all(i % 2 == 0 for i, _ in m.exps), "only even indices appear"
        # a = 1 specialization collapses to the single monomial x_{2n}
        at_one = {m: c(F(1)) for m, c in s0.terms.items()}
        at_one = {m: v for m, v in at_one.items() if v}
        assert at_one == {xi((2 * n, 1)): F(1)}


def test_order_range():
    with pytest.raises(ValueError):
        derive_s0(0)
    with pytest.raises(ValueError):
        derive_s0(9)


def test_sign_convention_examples():
    assert sign_convention(2, Regime.ABOVE_ONE) == 1
    assert sign_convention(3, Regime.ABOVE_ONE) == -1
    assert sign_convention(1, Regime.BELOW_ONE) == 1
    assert sign_convention(4, Regime.BELOW_ONE) == -1


def test_derivative_target():
    t = DerivativeTarget(3, Regime.ABOVE_ONE)
    assert t.required_sign == 1
    assert t.certified_sign == -1
    assert DerivativeTarget(2, Regime.ABOVE_ONE).required_sign == -1


def test_regime_of():
    assert Regime.of(F(3, 2)) is Regime.ABOVE_ONE
    assert Regime.of(F(1, 2)) is Regime.BELOW_ONE
    with pytest.raises(ValueError):
        Regime.of(F(1))
