"""Empirical spot checks on closed-form Gaussian-mixture heat flow.

Mixtures evolve exactly under u_t = (1/2) u_xx (each component's variance
grows linearly in t), so finite-difference sign checks of high-order entropy
derivatives see quadrature error only, never PDE discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .xicalc import XiPoly

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# central-difference coefficients, order k, accuracy 2, offsets -m..m
_STENCILS: dict[int, list[float]] = {
    1: [-0.5, 0.0, 0.5],
    2: [1.0, -2.0, 1.0],
    3: [-0.5, 1.0, 0.0, -1.0, 0.5],
    4: [1.0, -4.0, 6.0, -4.0, 1.0],
    5: [-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5],
}
MAX_SIGN_ORDER = 5  # above this, h^-n noise amplification swamps the signal


@dataclass(frozen=True)
class Mixture:
    """Gaussian mixture (weight, mean, variance) with weights summing to 1."""

    components: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("empty mixture")
        for w, _, s in self.components:
            if w <= 0:
                raise ValueError("weights must be positive")
            if s <= 0:
                raise ValueError("variances must be positive")
        total = math.fsum(w for w, _, _ in self.components)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, expected 1")

    @staticmethod
    def parse(spec: str) -> "Mixture":
        """Parse 'w:mu:s,w:mu:s,...' triples."""
        comps = []
        for part in spec.split(","):
            fields = part.split(":")
            if len(fields) != 3:
                raise ValueError(f"bad mixture component {part!r}")
            comps.append(tuple(float(f) for f in fields))
        return Mixture(tuple(comps))

    def domain(self, t_max: float, sigmas: float = 12.0) -> tuple[float, float]:
        """Integration window covering every component to `sigmas` deviations."""
        lo = min(mu - sigmas * math.sqrt(s + t_max) for _, mu, s in self.components)
        hi = max(mu + sigmas * math.sqrt(s + t_max) for _, mu, s in self.components)
        return lo, hi


def density(m: Mixture, x: float, t: float) -> float:
    """Exact mixture density at time t under u_t = (1/2) u_xx."""
    if t < 0:
        raise ValueError("t must be >= 0")
    total = 0.0
    for w, mu, s in m.components:
        v = s + t
        total += w * math.exp(-((x - mu) ** 2) / (2.0 * v)) / (SQRT_TWO_PI * math.sqrt(v))
    return total


def xi_values(m: Mixture, x: float, t: float, order: int) -> list[float]:
    """x_i = (d^i u/dx^i)/u for i = 1..order, from exact component derivatives.

    Per component, d^m N = N * q_m with q_0 = 1 and
    q_{m+1} = q_m' - q_m (x - mu)/v; polynomials are kept as coefficient
    lists in x.
    """
    u = 0.0
    dsum = [0.0] * order
    for w, mu, s in m.components:
        v = s + t
        nk = w * math.exp(-((x - mu) ** 2) / (2.0 * v)) / (SQRT_TWO_PI * math.sqrt(v))
        u += nk
        q = [1.0]
        for i in range(order):
            dq = [q[j] * j for j in range(1, len(q))]
            shifted = [0.0, 0.0]
            shifted[0] = mu / v
            shifted[1] = -1.0 / v
            prod = _poly_mul(q, shifted)
            q = _poly_add(dq, prod)
            dsum[i] += nk * _poly_eval(q, x)
    return [d / u for d in dsum]


def _poly_mul(a: list[float], b: list[float]) -> list[float]:
    out = [0.0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_add(a: list[float], b: list[float]) -> list[float]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0.0) + (b[i] if i < len(b) else 0.0) for i in range(n)]


def _poly_eval(a: list[float], x: float) -> float:
    acc = 0.0
    for c in reversed(a):
        acc = acc * x + c
    return acc


class QuadratureError(Exception):
    """Adaptive quadrature failed to reach the requested tolerance."""


def adaptive_simpson(f, a: float, b: float, rel_tol: float = 1e-12, base_panels: int = 64,
                     max_depth: int = 36) -> float:
    """Adaptive Simpson quadrature with an initial uniform panel split."""
    if b <= a:
        raise ValueError("empty interval")
    panels = []
    width = (b - a) / base_panels
    rough = 0.0
    for i in range(base_panels):
        x0 = a + i * width
        x1 = x0 + width
        s = _simpson(f, x0, x1)
        panels.append((x0, x1, s))
        rough += abs(s)
    tol = max(rel_tol * max(rough, 1e-300), 1e-300)

    total_parts: list[float] = []
    for x0, x1, s in panels:
        total_parts.append(_adapt(f, x0, x1, s, tol * (x1 - x0) / (b - a), max_depth))
    return math.fsum(total_parts)


def _simpson(f, a: float, b: float) -> float:
    c = 0.5 * (a + b)
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b))


def _adapt(f, a: float, b: float, whole: float, tol: float, depth: int) -> float:
    c = 0.5 * (a + b)
    left = _simpson(f, a, c)
    right = _simpson(f, c, b)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol or (b - a) < 1e-14:
        if depth <= 0 and abs(delta) > 15.0 * tol:
            raise QuadratureError("adaptive refinement exhausted")
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError("adaptive refinement exhausted")
    return _adapt(f, a, c, left, tol / 2, depth - 1) + _adapt(f, c, b, right, tol / 2, depth - 1)


def entropy(m: Mixture, alpha: float, t: float, rel_tol: float = 1e-12,
            domain: tuple[float, float] | None = None) -> float:
    """Entropy of the evolved density: (1 - int u^alpha)/(alpha - 1).

    alpha = 1 computes the Shannon form -int u log u.  The integration window
    defaults to 12 deviations around the component means at this time.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lo, hi = domain if domain is not None else m.domain(t)
    if alpha == 1:
        def f(x: float) -> float:
            u = density(m, x, t)
            return -u * math.log(u) if u > 0 else 0.0
        return adaptive_simpson(f, lo, hi, rel_tol)
    integral = adaptive_simpson(lambda x: density(m, x, t) ** alpha, lo, hi, rel_tol)
    return (1.0 - integral) / (alpha - 1.0)


def total_mass(m: Mixture, t: float, rel_tol: float = 1e-12) -> float:
    lo, hi = m.domain(t)
    return adaptive_simpson(lambda x: density(m, x, t), lo, hi, rel_tol)


def weighted_integral(m: Mixture, poly: XiPoly, alpha: float, t: float,
                      rel_tol: float = 1e-10) -> float:
    """int u^alpha * poly(x_1, x_2, ...) dx at time t (numeric)."""
    order = poly.max_index()
    lo, hi = m.domain(t)
    from fractions import Fraction
    a = Fraction(alpha).limit_denominator(10**12)

    def f(x: float) -> float:
        u = density(m, x, t)
        xs = xi_values(m, x, t, order) if order else []
        return u**alpha * poly.eval_at(a, xs)

    return adaptive_simpson(f, lo, hi, rel_tol)


@dataclass
class DerivativeEstimate:
    order: int
    value: float
    error: float
    verdict: str  # '+', '-', or 'inconclusive'


@dataclass
class SimReport:
    alpha: float
    t0: float
    h: float
    entries: list[DerivativeEstimate] = field(default_factory=list)

    def signs(self) -> list[str]:
        return [e.verdict for e in self.entries]

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "t0": self.t0,
            "h": self.h,
            "entries": [
                {"order": e.order, "value": e.value, "error": e.error, "verdict": e.verdict}
                for e in self.entries
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SimReport":
        return cls(
            alpha=d["alpha"], t0=d["t0"], h=d["h"],
            entries=[DerivativeEstimate(e["order"], e["value"], e["error"], e["verdict"])
                     for e in d["entries"]],
        )


def derivative_signs(m: Mixture, alpha: float, t0: float, n_max: int = 5,
                     h: float | None = None, rel_tol: float = 1e-13) -> SimReport:
    """Richardson-extrapolated central differences of H(t) at t0, orders 1..n_max.

    The sign verdict is committed only when |value| exceeds 10x the
    extrapolation-delta error estimate.  A single integration window (taken at
    the largest stencil time) keeps H smooth in t across the stencil.
    """
    if n_max < 1 or n_max > MAX_SIGN_ORDER:
        raise ValueError(f"n_max must be 1..{MAX_SIGN_ORDER}")
    if h is None:
        h = 0.01 * t0
    if t0 - n_max * h <= 0:
        raise ValueError("stencil would cross t = 0; reduce h or increase t0")

    m_off = max(len(_STENCILS[k]) // 2 for k in range(1, n_max + 1))
    domain = m.domain(t0 + m_off * h)
    cache: dict[float, float] = {}

    def H(t: float) -> float:
        if t not in cache:
            cache[t] = entropy(m, alpha, t, rel_tol=rel_tol, domain=domain)
        return cache[t]

    report = SimReport(alpha=alpha, t0=t0, h=h)
    for k in range(1, n_max + 1):
        coeffs = _STENCILS[k]
        mo = len(coeffs) // 2

        def diff(step: float) -> float:
            vals = [coeffs[j + mo] * H(t0 + j * step) for j in range(-mo, mo + 1) if coeffs[j + mo]]
            return math.fsum(vals) / step**k

        d1 = diff(h)
        d2 = diff(h / 2)
        value = (4.0 * d2 - d1) / 3.0
        error = abs(d2 - d1) / 3.0 + 1e-15
        if abs(value) > 10.0 * error:
            verdict = "+" if value > 0 else "-"
        else:
            verdict = "inconclusive"
        report.entries.append(DerivativeEstimate(k, value, error, verdict))
    return report


def entropy_series(m: Mixture, alpha: float, times: list[float]) -> list[tuple[float, float]]:
    """(t, H_alpha(t)) pairs, e.g. for CSV output."""
    return [(t, entropy(m, alpha, t)) for t in times]


def write_entropy_csv(m: Mixture, alpha: float, times: list[float], path: str) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "entropy"])
        for t, h in entropy_series(m, alpha, times):
            w.writerow([repr(t), repr(h)])


def gaussian_entropy_closed_form(variance: float, alpha: float) -> float:
    """Closed form for a single Gaussian: known for alpha = 1 and general alpha.

    int N^alpha = (2 pi v)^((1-alpha)/2) / sqrt(alpha), so
    H_alpha = (1 - (2 pi v)^((1-alpha)/2)/sqrt(alpha)) / (alpha - 1);
    the Shannon limit is log(2 pi e v)/2.
    """
    if alpha == 1:
        return 0.5 * math.log(2.0 * math.pi * math.e * variance)
    integral = (2.0 * math.pi * variance) ** ((1.0 - alpha) / 2.0) / math.sqrt(alpha)
    return (1.0 - integral) / (alpha - 1.0)
