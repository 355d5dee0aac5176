import math
import random
from fractions import Fraction

import pytest

from xiflow.ratcore import ALPHA, AlphaPoly
from xiflow.xicalc import XiMonomial, XiPoly, dt, dx, weighted_degree, xi

F = Fraction


def test_weighted_degree_examples():
    assert weighted_degree(xi((1, 1), (2, 1), (3, 1))) == 6
    assert weighted_degree(xi((1, 8))) == 8
    assert weighted_degree(XiMonomial.ONE) == 0


def test_monomial_canonical_equality():
    assert xi((2, 1), (1, 2)) == xi((1, 2), (2, 1))
    assert hash(xi((1, 1))) == hash(xi((1, 1)))


def test_dx_reproduces_shift_table():
    assert dx(XiPoly.of(xi((3, 1)))) == XiPoly(
        {xi((1, 1), (3, 1)): ALPHA - 1, xi((4, 1)): AlphaPoly.const(1)}
    )
    assert dx(XiPoly.of(xi((1, 1), (2, 1)))) == XiPoly({
        xi((1, 2), (2, 1)): ALPHA - 2,
        xi((1, 1), (3, 1)): AlphaPoly.const(1),
        xi((2, 2)): AlphaPoly.const(1),
    })
    assert dx(XiPoly.of(xi((1, 3)))) == XiPoly(
        {xi((1, 4)): ALPHA - 3, xi((1, 2), (2, 1)): AlphaPoly.const(3)}
    )


def test_dt_examples():
    assert dt(XiPoly.one()) == XiPoly({xi((2, 1)): ALPHA})
    assert dt(XiPoly({xi((2, 1)): ALPHA})) == XiPoly({
        xi((4, 1)): ALPHA,
        xi((2, 2)): ALPHA * (ALPHA - 1),
    })
    assert dt(XiPoly.of(xi((1, 2)))) == XiPoly({
        xi((1, 2), (2, 1)): ALPHA - 2,
        xi((1, 1), (3, 1)): AlphaPoly.const(2),
    })


def test_derivations_raise_weight():
    rng = random.Random(5)
    for _ in range(30):
        w = rng.randint(1, 6)
        m = XiMonomial({rng.randint(1, 4): 1, **({w: 1} if rng.random() < 0.5 else {})})
        p = XiPoly.of(m)
        wm = m.weight
        assert dx(p).is_homogeneous(wm + 1)
        assert dt(p).is_homogeneous(wm + 2)


def test_leibniz_identity():
    rng = random.Random(6)
    for _ in range(20):
        p = XiPoly.of(XiMonomial({rng.randint(1, 3): rng.randint(1, 2)}), F(rng.randint(1, 4)))
        q = XiPoly.of(XiMonomial({rng.randint(1, 4): 1}), F(rng.randint(1, 4)))
        for der in (dx, dt):
            lhs = der(p * q, 2 * ALPHA)
            rhs = p * der(q, ALPHA) + q * der(p, ALPHA)
            assert lhs == rhs, der


def test_eval_at_examples():
    p = XiPoly({xi((1, 2)): F(1), xi((2, 1)): F(-1)})
    assert p.eval_at(F(1), [1.0, 1.0]) == 0.0
    q = XiPoly({xi((1, 4)): ALPHA - 3})
    assert q.eval_at(F(3), [2.0]) == 0.0
    r = XiPoly({xi((4, 1)): F(1), xi((2, 2)): ALPHA - 1})
    assert r.eval_at(F(2), [0.0, 1.0, 0.0, 2.0]) == pytest.approx(3.0)
    with pytest.raises(IndexError):
        p.eval_at(F(1), [1.0])


def _gaussian_xis(x: float, var: float, order: int) -> list[float]:
    # d^m N = N * q_m with q_{m+1} = q_m' - q_m * x / var
    q = [1.0]
    out = []
    for _ in range(order):
        dq = [q[j] * j for j in range(1, len(q))]
        prod_lo = [0.0] + [-c / var for c in q]
        n = max(len(dq), len(prod_lo))
        q = [(dq[i] if i < len(dq) else 0.0) + (prod_lo[i] if i < len(prod_lo) else 0.0)
             for i in range(n)]
        acc = 0.0
        for c in reversed(q):
            acc = acc * x + c
        out.append(acc)
    return out


def test_dx_matches_finite_difference_on_gaussian():
    # (1/u^a) d/dx (u^a p) against central differences on an explicit Gaussian
    a = F(3, 2)
    var = 0.8
    x0 = 0.37
    p = XiPoly({xi((1, 1), (2, 1)): F(2), xi((3, 1)): F(-1), xi((1, 3)): F(1, 3)})
    dxp = dx(p)

    def u_pow_a(x):
        return (math.exp(-x * x / (2 * var)) / math.sqrt(2 * math.pi * var)) ** float(a)

    def p_at(x):
        return p.eval_at(a, _gaussian_xis(x, var, 4))

    h = 1e-6
    fd = (u_pow_a(x0 + h) * p_at(x0 + h) - u_pow_a(x0 - h) * p_at(x0 - h)) / (2 * h * u_pow_a(x0))
    sym = dxp.eval_at(a, _gaussian_xis(x0, var, 5))
    assert abs(fd - sym) / max(1.0, abs(sym)) < 1e-6


def test_render_canonical():
    p = XiPoly({xi((1, 4)): ALPHA - 3, xi((2, 2)): F(2), xi((1, 2), (2, 1)): F(-1)})
    assert p.render() == "2*x2^2 - x1^2*x2 + (a-3)*x1^4"
