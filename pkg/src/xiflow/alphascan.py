"""Mapping the feasible parameter set: grid scan, boundary bisection, and
exact endpoint identification for the low orders.

Every grid point reported feasible carries an exact certificate; boundary
positions between grid points are refined by bisection on the certify
outcome.  The value 1 is excluded everywhere (Shannon limit).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .certify import CertStatus, Certificate, certify, closed_form_quartic
from .ratcore import AlphaPoly, parse_alphapoly as _parse_poly, poly, rat, rat_str, sturm_isolate


class EndpointKind(enum.Enum):
    EXACT_VALUE = "exact_value"
    EXACT_ROOT = "exact_root"
    NUMERIC = "numeric"
    UNBOUNDED = "unbounded"


@dataclass
class Endpoint:
    kind: EndpointKind
    value: Fraction | float | None = None          # midpoint/representative
    inclusive: bool = False
    defining_poly: AlphaPoly | None = None          # EXACT_ROOT only
    bracket: tuple[Fraction, Fraction] | None = None
    tol: float | None = None                        # NUMERIC only

    def to_json_dict(self) -> dict:
        d: dict = {"kind": self.kind.value, "inclusive": self.inclusive}
        if self.value is not None:
            d["value"] = rat_str(self.value) if isinstance(self.value, Fraction) else self.value
        if self.defining_poly is not None:
            d["poly"] = self.defining_poly.render()
        if self.bracket is not None:
            d["bracket"] = [rat_str(self.bracket[0]), rat_str(self.bracket[1])]
        if self.tol is not None:
            d["tol"] = self.tol
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "Endpoint":
        value = d.get("value")
        if isinstance(value, str):
            value = rat(value)
        bracket = d.get("bracket")
        if bracket is not None:
            bracket = (rat(bracket[0]), rat(bracket[1]))
        poly_s = d.get("poly")
        return cls(
            kind=EndpointKind(d["kind"]), value=value, inclusive=d["inclusive"],
            defining_poly=_parse_poly(poly_s) if poly_s else None,
            bracket=bracket, tol=d.get("tol"),
        )


@dataclass
class AlphaInterval:
    lo: Endpoint
    hi: Endpoint

    def to_json_dict(self) -> dict:
        return {"lo": self.lo.to_json_dict(), "hi": self.hi.to_json_dict()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "AlphaInterval":
        return cls(Endpoint.from_json_dict(d["lo"]), Endpoint.from_json_dict(d["hi"]))


@dataclass
class GridPoint:
    alpha: Fraction
    status: CertStatus
    lambda_min: float | None

    def to_json_dict(self) -> dict:
        return {
            "alpha": rat_str(self.alpha),
            "status": self.status.value,
            "lambda_min": self.lambda_min,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GridPoint":
        return cls(rat(d["alpha"]), CertStatus(d["status"]), d["lambda_min"])


@dataclass
class ScanReport:
    n: int
    grid: list[GridPoint] = field(default_factory=list)
    intervals: list[AlphaInterval] = field(default_factory=list)

    def feasible_alphas(self) -> list[Fraction]:
        return [g.alpha for g in self.grid if g.status is CertStatus.EXACT_SOS]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "grid": [g.to_json_dict() for g in self.grid],
            "intervals": [iv.to_json_dict() for iv in self.intervals],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScanReport":
        return cls(
            n=d["n"],
            grid=[GridPoint.from_json_dict(g) for g in d["grid"]],
            intervals=[AlphaInterval.from_json_dict(iv) for iv in d["intervals"]],
        )


class SameStatus(Exception):
    """Bisection endpoints do not straddle a feasibility boundary."""


def scan(
    n: int,
    lo: Fraction | str,
    hi: Fraction | str,
    step: Fraction | str,
    *,
    refine: bool = True,
    refine_tol: float | None = None,
    seed: int = 0,
    restarts: int = 32,
    threads: int = 1,
    certify_fn: Callable[..., Certificate] | None = None,
) -> ScanReport:
    """Certify along a grid and merge feasible runs into intervals.

    Grid points within step/2 of 1 are skipped.  Interval boundaries falling
    between a feasible and an infeasible neighbour are refined by bisection
    when `refine` is set.  Grid points are independent; with threads > 1 they
    are evaluated concurrently and the report is assembled in sorted order.
    """
    lo, hi, step = rat(lo), rat(hi), rat(step)
    if step <= 0:
        raise ValueError("step must be positive")
    do_certify = certify_fn or certify

    grid_alphas = []
    a = lo
    while a <= hi:
        if abs(a - 1) >= step / 2 and a > 0:
            grid_alphas.append(a)
        a += step

    report = ScanReport(n=n)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            certs = list(pool.map(
                lambda g: do_certify(n, g, seed=seed, restarts=restarts), grid_alphas
            ))
    else:
        certs = [do_certify(n, g, seed=seed, restarts=restarts) for g in grid_alphas]
    for g, cert in zip(grid_alphas, certs):
        report.grid.append(GridPoint(g, cert.status, cert.best_lambda_min))

    # merge consecutive feasible grid points (the skipped point 1 splits runs)
    runs: list[list[GridPoint]] = []
    prev = None
    for g in report.grid:
        ok = g.status is CertStatus.EXACT_SOS
        if ok and prev is not None and prev.status is CertStatus.EXACT_SOS \
                and g.alpha - prev.alpha <= step and not (prev.alpha < 1 < g.alpha):
            runs[-1].append(g)
        elif ok:
            runs.append([g])
        prev = g

    tol = refine_tol if refine_tol is not None else float(step) / 4
    by_alpha = {g.alpha: g for g in report.grid}
    for run in runs:
        lo_pt, hi_pt = run[0], run[-1]
        lo_ep = Endpoint(EndpointKind.EXACT_VALUE, lo_pt.alpha, inclusive=True)
        hi_ep = Endpoint(EndpointKind.EXACT_VALUE, hi_pt.alpha, inclusive=True)
        left_neigh = by_alpha.get(lo_pt.alpha - step)
        if refine and left_neigh is not None and left_neigh.status is not CertStatus.EXACT_SOS:
            mid, bracket = bisect_boundary(n, lo_pt.alpha, left_neigh.alpha, tol,
                                           seed=seed, restarts=restarts, certify_fn=do_certify)
            lo_ep = Endpoint(EndpointKind.NUMERIC, mid, inclusive=False, bracket=bracket, tol=tol)
        right_neigh = by_alpha.get(hi_pt.alpha + step)
        if refine and right_neigh is not None and right_neigh.status is not CertStatus.EXACT_SOS:
            mid, bracket = bisect_boundary(n, hi_pt.alpha, right_neigh.alpha, tol,
                                           seed=seed, restarts=restarts, certify_fn=do_certify)
            hi_ep = Endpoint(EndpointKind.NUMERIC, mid, inclusive=False, bracket=bracket, tol=tol)
        report.intervals.append(AlphaInterval(lo_ep, hi_ep))
    return report


def bisect_boundary(
    n: int,
    feasible_alpha: Fraction | str,
    infeasible_alpha: Fraction | str,
    tol: float | Fraction,
    *,
    seed: int = 0,
    restarts: int = 32,
    certify_fn: Callable[..., Certificate] | None = None,
) -> tuple[Fraction, tuple[Fraction, Fraction]]:
    """Bisect on the certify outcome; returns (midpoint, final bracket).

    The two inputs must have different statuses; the bracket shrinks
    monotonically and its endpoints retain their statuses.  Near the boundary
    the search effort is increased (the smallest eigenvalue flattens to 0
    there, which makes the ascent slow).
    """
    good = rat(feasible_alpha)
    bad = rat(infeasible_alpha)
    tol = Fraction(tol).limit_denominator(10**9) if not isinstance(tol, Fraction) else tol
    do_certify = certify_fn or certify

    c_good = do_certify(n, good, seed=seed, restarts=restarts)
    c_bad = do_certify(n, bad, seed=seed, restarts=restarts)
    if c_good.status == c_bad.status:
        raise SameStatus(
            f"both endpoints have status {c_good.status.value}; nothing to bisect"
        )
    if c_good.status is not CertStatus.EXACT_SOS:
        good, bad = bad, good

    while abs(good - bad) > tol:
        mid = ((good + bad) / 2).limit_denominator(10**6)
        if mid in (good, bad) or mid == 1:
            break
        # quadruple the restart budget close to the boundary: lambda* -> 0
        near = abs(good - bad) <= 10 * tol
        cert = do_certify(n, mid, seed=seed, restarts=restarts * (4 if near else 1))
        if cert.status is CertStatus.EXACT_SOS:
            good = mid
        else:
            bad = mid
    lo, hi = (good, bad) if good < bad else (bad, good)
    return (lo + hi) / 2, (lo, hi)


CUBIC_BOUNDARY_N3 = poly(-10, 29, -12, 9)  # 9 a^3 - 12 a^2 + 29 a - 10


def exact_endpoints(n: int, root_width: Fraction = Fraction(1, 10**9)) -> list[AlphaInterval]:
    """Exact feasible intervals for n in {1, 2, 3}.

    n=1: (0,1) and (1,inf).  n=2: (0,1) and (1,3], right endpoint from the
    quartic closed form.  n=3: (a0,1) and (1,2] with a0 the isolated real root
    of 9a^3 - 12a^2 + 29a - 10.
    """
    one_ex = Endpoint(EndpointKind.EXACT_VALUE, Fraction(1), inclusive=False)
    zero_ex = Endpoint(EndpointKind.EXACT_VALUE, Fraction(0), inclusive=False)
    if n == 1:
        return [
            AlphaInterval(zero_ex, one_ex),
            AlphaInterval(one_ex, Endpoint(EndpointKind.UNBOUNDED)),
        ]
    if n == 2:
        q = closed_form_quartic()
        roots = [r for r in q.boundary if r > 1]
        if len(roots) != 1:
            raise AssertionError("quartic boundary should have one root above 1")
        hi = Endpoint(
            EndpointKind.EXACT_VALUE, roots[0],
            inclusive=q.max_discriminant(roots[0]) >= 0,
        )
        return [AlphaInterval(zero_ex, one_ex), AlphaInterval(one_ex, hi)]
    if n == 3:
        brackets = sturm_isolate(CUBIC_BOUNDARY_N3, Fraction(0), Fraction(1), root_width)
        if len(brackets) != 1:
            raise AssertionError("the cubic should have exactly one root in (0,1)")
        lo_b, hi_b = brackets[0]
        lo = Endpoint(
            EndpointKind.EXACT_ROOT, (lo_b + hi_b) / 2, inclusive=False,
            defining_poly=CUBIC_BOUNDARY_N3, bracket=(lo_b, hi_b),
        )
        hi = Endpoint(EndpointKind.EXACT_VALUE, Fraction(2), inclusive=True)
        return [AlphaInterval(lo, one_ex), AlphaInterval(one_ex, hi)]
    raise ValueError(f"exact endpoints are only known for n <= 3 (got {n})")
