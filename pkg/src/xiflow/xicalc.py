"""Calculus of the log-derivative variables x_i = (d^i u / dx^i) / u.

Monomials carry a weighted grading w = sum(i * p_i).  The two derivations are
induced by the space derivative and by the rescaled heat flow u_t = u_xx:

    d_x x_i = x_{i+1} - x_1 x_i          d_t x_i = x_{i+2} - x_2 x_i

together with the carrier rule (1/u^a) d(u^a) = a * x_1 (resp. a * x_2).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .ratcore import ALPHA, AffineForm, AlphaPoly, rat_str

MAX_INDEX = 24  # index cap: derivative orders up to n = 8 plus partition tables


class XiMonomial:
    """Product of x_i^{p_i}; exponents stored sparsely, indices ascending."""

    __slots__ = ("exps",)

    def __init__(self, exps: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = dict(exps)
        for i, e in items.items():
            if i < 1 or i > MAX_INDEX:
                raise ValueError(f"variable index {i} out of range 1..{MAX_INDEX}")
            if e < 0:
                raise ValueError("negative exponent")
        self.exps: tuple[tuple[int, int], ...] = tuple(
            sorted((i, e) for i, e in items.items() if e > 0)
        )

    ONE: "XiMonomial"

    @property
    def weight(self) -> int:
        return sum(i * e for i, e in self.exps)

    @property
    def total_degree(self) -> int:
        return sum(e for _, e in self.exps)

    def exponent(self, i: int) -> int:
        for j, e in self.exps:
            if j == i:
                return e
        return 0

    def vector(self, length: int | None = None) -> tuple[int, ...]:
        n = length if length is not None else (self.exps[-1][0] if self.exps else 0)
        v = [0] * n
        for i, e in self.exps:
            v[i - 1] = e
        return tuple(v)

    def sort_key(self) -> tuple:
        """Graded key: weight first, then ascending-lex on the exponent vector."""
        w = self.weight
        return (w, self.vector(w))

    def __mul__(self, other: "XiMonomial") -> "XiMonomial":
        out = dict(self.exps)
        for i, e in other.exps:
            out[i] = out.get(i, 0) + e
        return XiMonomial(out)

    def divide_by_var(self, i: int) -> "XiMonomial":
        out = dict(self.exps)
        if out.get(i, 0) < 1:
            raise ValueError(f"x{i} does not divide {self}")
        out[i] -= 1
        return XiMonomial(out)

    def times_var(self, i: int, k: int = 1) -> "XiMonomial":
        out = dict(self.exps)
        out[i] = out.get(i, 0) + k
        return XiMonomial(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, XiMonomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return hash(self.exps)

    def render(self) -> str:
        if not self.exps:
            return "1"
        return "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in self.exps)

    def __repr__(self) -> str:
        return f"XiMonomial({self.render()})"


XiMonomial.ONE = XiMonomial()


def xi(*pairs: tuple[int, int]) -> XiMonomial:
    return XiMonomial(pairs)


def weighted_degree(m: XiMonomial) -> int:
    return m.weight


class XiPoly:
    """Sparse polynomial in the x_i with exact coefficients.

    Coefficients may be Fraction, AlphaPoly, or AffineForm; zero coefficients
    are never stored.  Serialization order is graded lexicographic.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[XiMonomial, object] = ()):
        self.terms = {m: c for m, c in dict(terms).items() if c}

    @classmethod
    def zero(cls) -> "XiPoly":
        return cls()

    @classmethod
    def one(cls) -> "XiPoly":
        return cls({XiMonomial.ONE: Fraction(1)})

    @classmethod
    def of(cls, m: XiMonomial, coeff=Fraction(1)) -> "XiPoly":
        return cls({m: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, XiPoly):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(_ceq(self.terms[m], other.terms[m]) for m in self.terms)

    def __add__(self, other: "XiPoly") -> "XiPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            cur = out.get(m)
            out[m] = c if cur is None else cur + c
        return XiPoly(out)

    def __neg__(self) -> "XiPoly":
        return XiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "XiPoly") -> "XiPoly":
        return self + (-other)

    def __mul__(self, other) -> "XiPoly":
        if isinstance(other, XiPoly):
            out: dict[XiMonomial, object] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = m1 * m2
                    c = c1 * c2
                    cur = out.get(m)
                    out[m] = c if cur is None else cur + c
            return XiPoly(out)
        return self.scaled(other)

    __rmul__ = __mul__

    def scaled(self, c) -> "XiPoly":
        return XiPoly({m: coeff * c for m, coeff in self.terms.items()})

    def map_coefficients(self, fn: Callable) -> "XiPoly":
        return XiPoly({m: fn(c) for m, c in self.terms.items()})

    def coefficient(self, m: XiMonomial):
        return self.terms.get(m, Fraction(0))

    def monomials(self) -> list[XiMonomial]:
        return sorted(self.terms, key=XiMonomial.sort_key)

    def sorted_terms(self) -> list[tuple[XiMonomial, object]]:
        return [(m, self.terms[m]) for m in self.monomials()]

    def weights(self) -> set[int]:
        return {m.weight for m in self.terms}

    def is_homogeneous(self, w: int) -> bool:
        return self.weights() <= {w}

    def max_index(self) -> int:
        return max((m.exps[-1][0] for m in self.terms if m.exps), default=0)

    def eval_at(self, a: Fraction, xs: Sequence[float]) -> float:
        """Numeric value with the parameter set to a and x_i = xs[i-1]."""
        total = 0.0
        for m, c in self.terms.items():
            if isinstance(c, AffineForm):
                raise TypeError("cannot numerically evaluate with free parameters")
            cv = c(a) if isinstance(c, AlphaPoly) else c
            v = float(cv)
            for i, e in m.exps:
                if i > len(xs):
                    raise IndexError(f"missing value for x{i}")
                v *= xs[i - 1] ** e
            total += v
        return total

    def render(self, var: str = "a") -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            cs = c.render(var) if isinstance(c, (AlphaPoly, AffineForm)) else rat_str(c)
            neg = cs.startswith("-") and "+" not in cs[1:] and "-" not in cs[1:]
            if neg:
                cs = cs[1:]
            if "+" in cs[1:] or "-" in cs[1:]:
                cs = f"({cs})"
            if m is XiMonomial.ONE or not m.exps:
                body = cs
            elif cs == "1":
                body = m.render()
            else:
                body = f"{cs}*{m.render()}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"XiPoly({self.render()})"


def coeff_value(c, a: Fraction) -> Fraction:
    """Exact value of a Fraction or AlphaPoly coefficient at parameter a."""
    if isinstance(c, AlphaPoly):
        return c(a)
    if isinstance(c, Fraction):
        return c
    raise TypeError(f"coefficient {c!r} has free parameters")


def _ceq(a, b) -> bool:
    if type(a) is type(b):
        return a == b
    # mixed Fraction/AlphaPoly comparisons come up when building expected values
    if isinstance(a, AffineForm) or isinstance(b, AffineForm):
        return a == b
    pa = a if isinstance(a, AlphaPoly) else AlphaPoly.const(a)
    pb = b if isinstance(b, AlphaPoly) else AlphaPoly.const(b)
    return pa == pb


def _derivation(p: XiPoly, carrier, shift: int) -> XiPoly:
    """(1/u^a) D (u^a p) for D with D x_i = x_{i+shift} - x_shift * x_i."""
    out: dict[XiMonomial, object] = {}

    def add(m: XiMonomial, c) -> None:
        cur = out.get(m)
        out[m] = c if cur is None else cur + c

    for m, c in p.terms.items():
        # carrier rule and the -x_shift * x_i parts collapse to (a - deg) x_shift m
        add(m.times_var(shift), (carrier - m.total_degree) * c)
        for i, e in m.exps:
            add(m.divide_by_var(i).times_var(i + shift), e * c)
    return XiPoly(out)


def dx(p: XiPoly, carrier=ALPHA) -> XiPoly:
    """Space derivation; raises weighted degree by 1 on homogeneous input."""
    return _derivation(p, carrier, 1)


def dt(p: XiPoly, carrier=ALPHA) -> XiPoly:
    """Heat-flow derivation; raises weighted degree by 2 on homogeneous input."""
    return _derivation(p, carrier, 2)
