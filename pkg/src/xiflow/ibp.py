"""Integer-partition-indexed machinery.

Partitions of 2n-1 index the integration-by-parts shift polynomials, weight-2n
monomials span the target polynomial, and weight-n monomials form the Gram
basis.  A weight-2n monomial is *representable* when it factors as a product
of two weight-n monomials; all remaining monomials must have vanishing
coefficients for pointwise nonnegativity to be possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ratcore import ALPHA
from .xicalc import XiMonomial, XiPoly, dx

Partition = XiMonomial  # multiplicity map i -> p_i with weight sum(i * p_i)


@dataclass(frozen=True)
class Generator:
    """IBP shift polynomial together with its defining partition of 2n-1."""

    partition: Partition
    poly: XiPoly


@lru_cache(maxsize=None)
def enumerate_partitions(m: int) -> tuple[Partition, ...]:
    """All partitions of m as multiplicity maps, ascending-lex in (p_1, p_2, ...).

    This order matches the published generator tables: the pure x_m partition
    comes first, the pure x_1^m partition last.
    """
    if m < 0:
        raise ValueError("negative weight")

    def gen(i: int, remaining: int):
        if remaining == 0:
            yield {}
            return
        if i > remaining:
            return
        for p in range(remaining // i + 1):
            for rest in gen(i + 1, remaining - i * p):
                if p:
                    yield {i: p, **rest}
                else:
                    yield rest

    return tuple(XiMonomial(d) for d in gen(1, m))


@lru_cache(maxsize=None)
def generators(n: int) -> tuple[Generator, ...]:
    """One generator per partition of 2n-1, built by the space derivation.

    Each polynomial is (1/u^a) d/dx (u^a * monomial) and is weighted
    homogeneous of degree 2n; its u^a-weighted integral vanishes along the
    flow, so these are the affine moves available when rewriting the target.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    out = []
    for part in enumerate_partitions(2 * n - 1):
        out.append(Generator(part, dx(XiPoly.of(part), ALPHA)))
    return tuple(out)


@lru_cache(maxsize=None)
def gram_basis(n: int) -> tuple[XiMonomial, ...]:
    """Weight-n monomials ordered descending-lex (x_1-heavy first).

    For n=4 this is exactly [x1^4, x1^2*x2, x1*x3, x2^2, x4].
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    ms = list(enumerate_partitions(n))
    ms.sort(key=lambda m: m.vector(n), reverse=True)
    return tuple(ms)


@lru_cache(maxsize=None)
def classify_monomials(n: int) -> tuple[tuple[XiMonomial, ...], tuple[XiMonomial, ...]]:
    """Split weight-2n monomials into (representable, must_vanish).

    Representable = expressible as a product of two weight-n monomials.  A
    polynomial supported off that set is affine in some direction of the
    x-space and therefore sign-indefinite unless the stray coefficients
    vanish identically.
    """
    basis = gram_basis(n)
    products = set()
    for i, b1 in enumerate(basis):
        for b2 in basis[i:]:
            products.add(b1 * b2)
    rep, mv = [], []
    for m in enumerate_partitions(2 * n):
        (rep if m in products else mv).append(m)
    return tuple(rep), tuple(mv)


def factorizations(n: int, m: XiMonomial) -> list[tuple[int, int]]:
    """Index pairs (i <= j) into gram_basis(n) with basis[i]*basis[j] == m."""
    basis = gram_basis(n)
    out = []
    for i, b1 in enumerate(basis):
        for j in range(i, len(basis)):
            if b1 * basis[j] == m:
                out.append((i, j))
    return out


# partition function values p(0), p(1), ... for sanity checks
PARTITION_COUNTS = (1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627)
