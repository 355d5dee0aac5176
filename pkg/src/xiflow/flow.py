"""Heat-flow derivatives of the entropy integrand in x-variables.

``derive_s0`` applies the flow derivation n times; ``faadibruno_s0`` rebuilds
the same polynomial from the chain-rule-for-powers formula as an independent
oracle.  ``sign_convention`` fixes the sign bookkeeping connecting these
polynomials to the alternating-sign monotonicity claim.

Bookkeeping, rebuilt from first principles: with H = (1 - int u^a)/(a-1) and
the rescaled flow, (a-1) d^n H / dt^n = -a * int u^a S0.  Certifying

    sigma * (S0 + sum_j c_j T_j) >= 0   pointwise

therefore implies (-1)^(n+1) d^n H / dt^n >= 0, with sigma = (-1)^n above
a = 1 and sigma = (-1)^(n+1) below.  The published per-section displays carry
an extra (a-1) on one side; that inconsistency is reported by the verification
suite rather than silently adopted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ibp import enumerate_partitions
from .ratcore import ALPHA, AlphaPoly
from .xicalc import XiMonomial, XiPoly, dt

MAX_ORDER = 8  # beyond desk scale the partition counts explode


class Regime(enum.Enum):
    """Which side of a = 1 the entropy parameter lies on."""

    ABOVE_ONE = "above"
    BELOW_ONE = "below"

    @staticmethod
    def of(alpha: Fraction) -> "Regime":
        if alpha == 1:
            raise ValueError("a = 1 is the Shannon limit and is excluded")
        return Regime.ABOVE_ONE if alpha > 1 else Regime.BELOW_ONE


@dataclass(frozen=True)
class DerivativeTarget:
    """Derivative order, parameter regime, and the sign to be certified."""

    order: int
    regime: Regime

    @property
    def required_sign(self) -> int:
        """Sign of d^n H / dt^n asserted by the monotonicity claim."""
        return (-1) ** (self.order + 1)

    @property
    def certified_sign(self) -> int:
        return sign_convention(self.order, self.regime)


def _check_order(n: int) -> None:
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"order {n} outside supported range 1..{MAX_ORDER}")


@lru_cache(maxsize=None)
def derive_s0(n: int) -> XiPoly:
    """S0 for order n: apply the flow derivation n times to 1, divide by a.

    The result satisfies d^n/dt^n (u^a) = a * u^a * S0 along u_t = u_xx; it is
    weighted homogeneous of degree 2n and involves only even-indexed x's.
    """
    _check_order(n)
    p = XiPoly.one()
    for _ in range(n):
        p = dt(p, ALPHA)

    def div_alpha(c: AlphaPoly) -> AlphaPoly:
        q, r = c.div_linear(Fraction(0))
        if r != 0:
            raise ArithmeticError("flow derivative not divisible by the carrier")
        return q

    return p.map_coefficients(div_alpha)


@lru_cache(maxsize=None)
def faadibruno_s0(n: int) -> XiPoly:
    """Independent construction of S0 from the power chain rule.

    Sum over multisets b with sum(j * b_j) = n of

        n! / prod(b_j! * (j!)^b_j) * prod_{i=1}^{k-1}(a - i) * prod x_{2j}^{b_j}

    where k = sum b_j; time derivatives of u become x_{2j} under the flow.
    """
    _check_order(n)
    total: dict[XiMonomial, AlphaPoly] = {}
    for part in enumerate_partitions(n):
        k = part.total_degree
        num = math.factorial(n)
        den = 1
        mono = {}
        for j, b in part.exps:
            den *= math.factorial(b) * math.factorial(j) ** b
            mono[2 * j] = b
        coef = AlphaPoly.const(Fraction(num, den))
        for i in range(1, k):
            coef = coef * (ALPHA - i)
        m = XiMonomial(mono)
        total[m] = total.get(m, AlphaPoly()) + coef
    return XiPoly(total)


def sign_convention(n: int, regime: Regime) -> int:
    """Sign sigma with: sigma*(S0 + sum c_j T_j) >= 0 pointwise certifies
    (-1)^(n+1) d^n H / dt^n >= 0 in the given regime."""
    return (-1) ** n if regime is Regime.ABOVE_ONE else (-1) ** (n + 1)
