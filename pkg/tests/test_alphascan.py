from fractions import Fraction

import pytest

from xiflow.alphascan import (
    CUBIC_BOUNDARY_N3,
    EndpointKind,
    SameStatus,
    ScanReport,
    bisect_boundary,
    exact_endpoints,
    scan,
)
from xiflow.certify import CertStatus

F = Fraction


def test_scan_order_one_all_feasible():
    rep = scan(1, "1/5", 5, "1/2", refine=False)
    assert rep.grid, "grid should not be empty"
    assert all(g.status is CertStatus.EXACT_SOS for g in rep.grid)
    assert all(abs(g.alpha - 1) >= F(1, 4) for g in rep.grid)


def test_scan_quartic_boundary():
    rep = scan(2, "5/2", "7/2", "1/4", refine=True, refine_tol=F(1, 16))
    st = {g.alpha: g.status for g in rep.grid}
    assert st[F(5, 2)] is CertStatus.EXACT_SOS
    assert st[F(3)] is CertStatus.EXACT_SOS
    assert st[F(13, 4)] is CertStatus.HEURISTIC_INFEASIBLE
    assert len(rep.intervals) == 1
    hi = rep.intervals[0].hi
    assert hi.kind is EndpointKind.NUMERIC
    assert 3 <= hi.value <= F(13, 4)


def test_scan_quartic_full_grid():
    # grid 0.1..4.0 step 0.1: feasible on {0.1..0.9} and {1.1..3.0}, infeasible beyond
    rep = scan(2, "1/10", 4, "1/10", refine=False)
    by = {g.alpha: g.status for g in rep.grid}
    for k in range(1, 10):
        assert by[F(k, 10)] is CertStatus.EXACT_SOS, k
    for k in range(11, 31):
        assert by[F(k, 10)] is CertStatus.EXACT_SOS, k
    for k in range(31, 41):
        assert by[F(k, 10)] is CertStatus.HEURISTIC_INFEASIBLE, k
    assert len(rep.intervals) == 2


def test_scan_skips_one():
    rep = scan(2, "9/10", "11/10", "1/10", refine=False)
    assert all(g.alpha != 1 for g in rep.grid)


def test_scan_feasible_points_carry_certificates():
    # every EXACT_SOS grid point must re-certify (no float-only feasibility)
    from xiflow.certify import certify
    rep = scan(2, "1/2", "3/2", "1/2", refine=False)
    for g in rep.grid:
        if g.status is CertStatus.EXACT_SOS:
            assert certify(2, g.alpha).feasible


def test_scan_threads_deterministic():
    seq = scan(2, "1/2", "3", "1/2", refine=False)
    par = scan(2, "1/2", "3", "1/2", refine=False, threads=4)
    assert [g.to_json_dict() for g in seq.grid] == [g.to_json_dict() for g in par.grid]


def test_bisect_quartic_boundary():
    mid, (lo, hi) = bisect_boundary(2, "5/2", "7/2", F(1, 10**4))
    assert hi - lo <= F(1, 10**4)
    assert abs(mid - 3) < F(1, 5000)
    # the final bracket's endpoints retain differing statuses
    from xiflow.certify import certify
    assert certify(2, lo).feasible
    assert not certify(2, hi).feasible


def test_bisect_cubic_boundary():
    mid, (lo, hi) = bisect_boundary(3, "1/2", "3/10", F(1, 10**6))
    assert abs(float(mid) - 0.389214) < 2e-6
    # endpoints retain their statuses
    from xiflow.certify import certify
    assert certify(3, max(lo, hi) if lo < hi else lo).feasible or certify(3, hi).feasible


def test_bisect_same_status_error():
    with pytest.raises(SameStatus):
        bisect_boundary(2, "3/2", "5/2", F(1, 100))


def test_exact_endpoints_n1():
    ivs = exact_endpoints(1)
    assert len(ivs) == 2
    assert ivs[1].hi.kind is EndpointKind.UNBOUNDED


def test_exact_endpoints_n2():
    ivs = exact_endpoints(2)
    hi = ivs[1].hi
    assert hi.value == 3 and hi.inclusive


def test_exact_endpoints_n3():
    ivs = exact_endpoints(3)
    lo = ivs[0].lo
    assert lo.kind is EndpointKind.EXACT_ROOT
    assert lo.defining_poly == CUBIC_BOUNDARY_N3
    assert not lo.inclusive
    blo, bhi = lo.bracket
    assert bhi - blo <= F(1, 10**9)
    assert round(float(lo.value), 6) == 0.389214
    hi = ivs[1].hi
    assert hi.value == 2 and hi.inclusive


def test_exact_endpoints_unsupported():
    with pytest.raises(ValueError):
        exact_endpoints(4)


def test_exact_endpoints_agree_with_scan():
    # both boundaries of the order-2 set agree with a scan to within the step
    rep = scan(2, "1/4", "7/2", "1/4", refine=False)
    feas = [g.alpha for g in rep.grid if g.status is CertStatus.EXACT_SOS]
    assert min(feas) <= F(1, 4) + F(1, 4)
    assert max(feas) == 3


def test_scan_report_json_roundtrip():
    rep = scan(2, "5/2", "13/4", "1/4", refine=True, refine_tol=F(1, 16))
    back = ScanReport.from_json_dict(rep.to_json_dict())
    assert back.to_json_dict() == rep.to_json_dict()


def test_exact_endpoint_json_roundtrip():
    for n in (1, 2, 3):
        for iv in exact_endpoints(n):
            d = iv.to_json_dict()
            from xiflow.alphascan import AlphaInterval
            assert AlphaInterval.from_json_dict(d).to_json_dict() == d
