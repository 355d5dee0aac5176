"""Exact arithmetic substrate.

Univariate polynomials in the entropy parameter (written ``a`` in rendered
output), rational functions of those, affine forms in named parameters, and
Sturm-sequence real-root isolation.  Everything here is immutable and pure;
the numeric side of the toolkit never feeds floats back into these types.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def rat(x: int | str | Fraction) -> Fraction:
    """Exact rational from an int, a Fraction, or a 'p/q' / decimal string.

    Floats are rejected: they must never enter the exact pipeline.
    """
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}; pass an int, Fraction or string")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)  # handles both "p/q" and decimal strings exactly
    raise TypeError(f"cannot convert {x!r} to a rational")


def rat_str(q: Fraction) -> str:
    """Canonical 'p/q' (or integer) string form."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        return None
    ns = math.isqrt(q.numerator)
    ds = math.isqrt(q.denominator)
    if ns * ns == q.numerator and ds * ds == q.denominator:
        return Fraction(ns, ds)
    return None


class AlphaPoly:
    """Dense univariate polynomial over Fraction in the entropy parameter.

    Coefficients are indexed by degree; trailing zeros are trimmed and the
    zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c: Fraction | int) -> "AlphaPoly":
        return cls((Fraction(c),))

    @property
    def degree(self) -> int:
        """Degree, with the convention degree(0) = -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeffs[0] if self.coeffs else _ZERO

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "AlphaPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return AlphaPoly(
            (self.coeffs[i] if i < len(self.coeffs) else _ZERO)
            + (other.coeffs[i] if i < len(other.coeffs) else _ZERO)
            for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "AlphaPoly":
        return AlphaPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce_poly(other) + (-self)

    def __mul__(self, other) -> "AlphaPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return AlphaPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return AlphaPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "AlphaPoly":
        if k < 0:
            raise ValueError("negative power")
        out = AlphaPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, a: Fraction) -> Fraction:
        """Exact Horner evaluation."""
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def deriv(self) -> "AlphaPoly":
        return AlphaPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def div_linear(self, r: Fraction) -> tuple["AlphaPoly", Fraction]:
        """Synthetic division: self = (a - r) * quotient + remainder, exactly."""
        q: list[Fraction] = []
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * r + c
            q.append(acc)
        if not q:
            return AlphaPoly(), _ZERO
        rem = q.pop()
        q.reverse()
        return AlphaPoly(q), rem

    def divmod(self, other: "AlphaPoly") -> tuple["AlphaPoly", "AlphaPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dlead = other.coeffs[-1]
        dd = other.degree
        q = [_ZERO] * max(0, len(rem) - dd)
        while len(rem) - 1 >= dd and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < dd:
                break
            f = rem[-1] / dlead
            shift = len(rem) - 1 - dd
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
        return AlphaPoly(q), AlphaPoly(rem)

    def gcd(self, other: "AlphaPoly") -> "AlphaPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a * AlphaPoly.const(1 / a.coeffs[-1])  # monic

    def render(self, var: str = "a") -> str:
        """Canonical text form, highest degree first, e.g. 'a^2-3*a+2'."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = rat_str(mag)
            else:
                v = var if i == 1 else f"{var}^{i}"
                body = v if mag == 1 else f"{rat_str(mag)}*{v}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+{body}" if c > 0 else f"-{body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"AlphaPoly({self.render()})"


def _coerce_poly(x) -> AlphaPoly:
    if isinstance(x, AlphaPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return AlphaPoly.const(x)
    return NotImplemented


ALPHA = AlphaPoly((Fraction(0), Fraction(1)))


def parse_alphapoly(text: str, var: str = "a") -> AlphaPoly:
    """Inverse of AlphaPoly.render for plain polynomial strings."""
    s = text.replace(" ", "")
    if not s or s == "0":
        return AlphaPoly()
    s = s.replace("-", "+-")
    coeffs: dict[int, Fraction] = {}
    for term in s.split("+"):
        if not term:
            continue
        sign = Fraction(1)
        if term.startswith("-"):
            sign = Fraction(-1)
            term = term[1:]
        if var in term:
            head, _, tail = term.partition(var)
            coef = Fraction(head.rstrip("*")) if head.rstrip("*") else Fraction(1)
            deg = int(tail[1:]) if tail.startswith("^") else 1
        else:
            coef, deg = Fraction(term), 0
        coeffs[deg] = coeffs.get(deg, Fraction(0)) + sign * coef
    out = [Fraction(0)] * (max(coeffs) + 1)
    for d, c in coeffs.items():
        out[d] = c
    return AlphaPoly(out)


def poly(*coeffs: Fraction | int | str) -> AlphaPoly:
    """Polynomial from ascending-degree coefficients given as exact values."""
    return AlphaPoly(rat(c) for c in coeffs)


class AlphaFrac:
    """Rational function num/den over AlphaPoly; den is monic, gcd removed."""

    __slots__ = ("num", "den")

    def __init__(self, num: AlphaPoly, den: AlphaPoly | None = None):
        if den is None:
            den = AlphaPoly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = AlphaPoly.const(1)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead = den.coeffs[-1]
            if lead != 1:
                inv = AlphaPoly.const(1 / lead)
                num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def of(cls, x) -> "AlphaFrac":
        if isinstance(x, AlphaFrac):
            return x
        return cls(_coerce_poly(x))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        other = AlphaFrac.of(other)
        return self.num == other.num and self.den == other.den

    def __add__(self, other):
        other = AlphaFrac.of(other)
        return AlphaFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return AlphaFrac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-AlphaFrac.of(other))

    def __rsub__(self, other):
        return AlphaFrac.of(other) + (-self)

    def __mul__(self, other):
        other = AlphaFrac.of(other)
        return AlphaFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = AlphaFrac.of(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return AlphaFrac(self.num * other.den, self.den * other.num)

    def as_poly(self) -> AlphaPoly:
        """Convert back to a polynomial; requires a constant denominator."""
        if self.den.degree > 0:
            raise ValueError(f"non-polynomial rational function (den={self.den.render()})")
        return self.num * AlphaPoly.const(1 / self.den.coeffs[0])

    def __repr__(self) -> str:
        if self.den == AlphaPoly.const(1):
            return f"AlphaFrac({self.num.render()})"
        return f"AlphaFrac(({self.num.render()})/({self.den.render()}))"


class ParamRegistry:
    """Ordered registry of parameter names; affine forms only accept these."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self._index = {n: i for i, n in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise ValueError("duplicate parameter names")

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown parameter {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def extended(self, extra: Sequence[str]) -> "ParamRegistry":
        return ParamRegistry(self.names + tuple(extra))

    def __repr__(self) -> str:
        return f"ParamRegistry({list(self.names)})"


class AffineForm:
    """Affine combination  constant + sum_i coeff_i * param_i  over AlphaPoly.

    Strictly affine: products of two non-constant forms are a type error.
    """

    __slots__ = ("registry", "constant", "terms")

    def __init__(self, registry: ParamRegistry, constant=0, terms: Mapping[str, AlphaPoly] | None = None):
        self.registry = registry
        self.constant = _as_alphapoly(constant)
        tclean: dict[str, AlphaPoly] = {}
        for name, coef in (terms or {}).items():
            registry.index(name)
            coef = _as_alphapoly(coef)
            if not coef.is_zero():
                tclean[name] = coef
        self.terms = tclean

    @classmethod
    def param(cls, registry: ParamRegistry, name: str) -> "AffineForm":
        return cls(registry, 0, {name: AlphaPoly.const(1)})

    def is_zero(self) -> bool:
        return self.constant.is_zero() and not self.terms

    def is_constant(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, AlphaPoly)):
            other = AffineForm(self.registry, other)
        if not isinstance(other, AffineForm):
            return NotImplemented
        return self.constant == other.constant and self.terms == other.terms

    def __add__(self, other) -> "AffineForm":
        if isinstance(other, (int, Fraction, AlphaPoly)):
            return AffineForm(self.registry, self.constant + other, self.terms)
        if not isinstance(other, AffineForm):
            return NotImplemented
        terms = dict(self.terms)
        for n, c in other.terms.items():
            terms[n] = terms.get(n, AlphaPoly()) + c
        return AffineForm(self.registry, self.constant + other.constant, terms)

    __radd__ = __add__

    def __neg__(self) -> "AffineForm":
        return AffineForm(self.registry, -self.constant, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, AlphaPoly, AffineForm)):
            return self + (-other if isinstance(other, AffineForm) else AffineForm(self.registry, other).__neg__())
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "AffineForm":
        if isinstance(other, AffineForm):
            if other.is_constant():
                other = other.constant
            elif self.is_constant():
                self, other = other, self.constant
            else:
                raise TypeError("product of two non-constant affine forms")
        scal = _as_alphapoly(other)
        return AffineForm(
            self.registry,
            self.constant * scal,
            {n: c * scal for n, c in self.terms.items()},
        )

    __rmul__ = __mul__

    def substitute(self, images: Mapping[str, "AffineForm"]) -> "AffineForm":
        """Replace parameters by affine images (missing names stay in place)."""
        out = AffineForm(self.registry if not images else next(iter(images.values())).registry, self.constant)
        reg = out.registry
        for n, c in self.terms.items():
            if n in images:
                out = out + images[n] * c
            else:
                out = out + AffineForm(reg, 0, {n: c})
        return out

    def eval_params(self, values: Mapping[str, Fraction]) -> AlphaPoly:
        """Collapse to an AlphaPoly given exact values for every parameter used."""
        acc = self.constant
        for n, c in self.terms.items():
            acc = acc + c * Fraction(values[n])
        return acc

    def __call__(self, alpha: Fraction, values: Mapping[str, Fraction]) -> Fraction:
        return self.eval_params(values)(alpha)

    def map_poly(self, fn) -> "AffineForm":
        return AffineForm(self.registry, fn(self.constant), {n: fn(c) for n, c in self.terms.items()})

    def sorted_terms(self) -> list[tuple[str, AlphaPoly]]:
        return sorted(self.terms.items(), key=lambda kv: self.registry.index(kv[0]))

    def render(self, var: str = "a") -> str:
        parts: list[str] = []
        if not self.constant.is_zero() or not self.terms:
            parts.append(_wrap(self.constant.render(var)))
        for n, c in self.sorted_terms():
            if c == AlphaPoly.const(1):
                body = n
            elif c == AlphaPoly.const(-1):
                body = f"-{n}"
            else:
                body = f"{_wrap(c.render(var))}*{n}"
            if parts and not body.startswith("-"):
                parts.append(f"+{body}")
            else:
                parts.append(body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"AffineForm({self.render()})"


def _as_alphapoly(x) -> AlphaPoly:
    p = _coerce_poly(x)
    if p is NotImplemented:
        raise TypeError(f"cannot use {x!r} as AlphaPoly scalar")
    return p


def _wrap(s: str) -> str:
    return f"({s})" if ("+" in s[1:] or "-" in s[1:]) else s


# ---------------------------------------------------------------------------
# Sturm sequences and real-root isolation
# ---------------------------------------------------------------------------

def square_free(p: AlphaPoly) -> AlphaPoly:
    g = p.gcd(p.deriv())
    if g.degree <= 0:
        return p
    return p.divmod(g)[0]


def sturm_sequence(p: AlphaPoly) -> list[AlphaPoly]:
    seq = [p, p.deriv()]
    while not seq[-1].is_zero():
        rem = seq[-2].divmod(seq[-1])[1]
        seq.append(-rem)
    seq.pop()
    return seq


def _sign_changes(seq: Sequence[AlphaPoly], x: Fraction) -> int:
    signs = []
    for q in seq:
        v = q(x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: AlphaPoly, lo: Fraction, hi: Fraction, seq: Sequence[AlphaPoly] | None = None) -> int:
    """Distinct real roots of the square-free part of p in (lo, hi]."""
    if seq is None:
        seq = sturm_sequence(square_free(p))
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def sturm_isolate(
    p: AlphaPoly, lo: Fraction, hi: Fraction, width: Fraction
) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals of width <= width, each holding exactly one real root.

    The polynomial is square-freed internally; every returned interval has a
    strict sign change of the square-free part at its endpoints, and the union
    covers all roots of p in [lo, hi].
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if lo >= hi:
        raise ValueError(f"degenerate range [{lo}, {hi}]")
    q = square_free(p)
    # Nudge endpoints off exact roots so (lo, hi] counting covers [lo, hi].
    step = width / 4
    while q(lo) == 0:
        lo -= step
    while q(hi) == 0:
        hi += step
    seq = sturm_sequence(q)
    out: list[tuple[Fraction, Fraction]] = []

    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots(q, a, b, seq)
        if n == 0:
            continue
        if n == 1 and b - a <= width and q(a) * q(b) < 0:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if q(m) == 0:
            m += min(width, b - a) / 8  # avoid landing exactly on a root
        stack.append((a, m))
        stack.append((m, b))
    out.sort()
    return out


def rational_roots(p: AlphaPoly) -> list[Fraction]:
    """All rational roots of p (exact), via the rational-root theorem."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    # strip powers of the variable
    coeffs = list(p.coeffs)
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    roots = [Fraction(0)] if shift else []
    if len(coeffs) <= 1:
        return roots
    den = math.lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    g = math.gcd(*ints)
    ints = [i // g for i in ints]
    a0, an = abs(ints[0]), abs(ints[-1])
    ps = _divisors(a0)
    qs = _divisors(an)
    q = AlphaPoly(ints)
    seen = set()
    for pp in ps:
        for qq in qs:
            for cand in (Fraction(pp, qq), Fraction(-pp, qq)):
                if cand not in seen:
                    seen.add(cand)
                    if q(cand) == 0:
                        roots.append(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


class QuadSurd:
    """Number u + v*sqrt(R) for a fixed nonnegative rational radicand R.

    Just enough arithmetic for exact sign decisions at quadratic critical
    points (add, multiply, compare with zero).
    """

    __slots__ = ("u", "v", "R")

    def __init__(self, u: Fraction, v: Fraction, R: Fraction):
        if R < 0:
            raise ValueError("negative radicand")
        self.u, self.v, self.R = Fraction(u), Fraction(v), Fraction(R)

    def __add__(self, other: "QuadSurd | Fraction | int") -> "QuadSurd":
        if isinstance(other, (int, Fraction)):
            return QuadSurd(self.u + other, self.v, self.R)
        assert self.R == other.R
        return QuadSurd(self.u + other.u, self.v + other.v, self.R)

    __radd__ = __add__

    def __mul__(self, other: "QuadSurd | Fraction | int") -> "QuadSurd":
        if isinstance(other, (int, Fraction)):
            return QuadSurd(self.u * other, self.v * other, self.R)
        assert self.R == other.R
        return QuadSurd(
            self.u * other.u + self.v * other.v * self.R,
            self.u * other.v + self.v * other.u,
            self.R,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        su = (self.u > 0) - (self.u < 0)
        if self.v == 0:
            return su
        sv = (self.v > 0) - (self.v < 0)
        if self.R == 0 or su == sv:
            return su if su else sv
        if su == 0:
            return sv
        # opposite signs: compare u^2 with v^2 R
        lhs, rhs = self.u * self.u, self.v * self.v * self.R
        if lhs == rhs:
            return 0
        return su if lhs > rhs else sv

    def __repr__(self) -> str:
        return f"QuadSurd({self.u} + {self.v}*sqrt({self.R}))"
