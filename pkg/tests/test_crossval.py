"""Dual-route cross-validation: the numeric certify pipeline against the
exact closed-form feasibility analyses, across parameter grids."""

from fractions import Fraction

from xiflow.certify import (
    certify,
    closed_form_quartic,
    closed_form_sextic,
    exact_psd,
    eliminate_assembled,
    build_gram,
)

F = Fraction


def test_certify_matches_quartic_closed_form_on_grid():
    q = closed_form_quartic()
    a = F(1, 10)
    while a <= F(7, 2):
        if a != 1:
            expected = q.feasible_at(a)
            got = certify(2, a).feasible
            assert got == expected, f"a={a}: certify {got}, closed form {expected}"
        a += F(17, 100)  # irregular step to avoid hitting only round points


def test_certify_matches_sextic_closed_form_on_grid():
    a = F(7, 20)
    while a <= F(21, 10):
        if a != 1:
            expected = closed_form_sextic(a)
            got = certify(3, a).feasible
            assert got == expected, f"a={a}: certify {got}, closed form {expected}"
        a += F(7, 60)


def test_certify_small_alpha():
    assert certify(2, "1/100").feasible
    assert certify(1, "1/1000").feasible


def test_tampered_certificate_is_rejected():
    # flipping one Gram entry of a valid certificate must break PSD or identity
    a = F(3, 2)
    cert = certify(2, a)
    e = eliminate_assembled(2, 1, a)
    gram = build_gram(2, e)
    full = {nm: cert.params[nm] for nm in gram.param_names}
    m = gram.instantiate(a, full)
    assert exact_psd(m).ok
    m[0][1] -= 1
    m[1][0] -= 1
    res = exact_psd(m)
    if res.ok:
        # still PSD is conceivable; but then the re-expansion no longer matches
        from xiflow.certify import sos_from_ldl
        from xiflow.xicalc import XiPoly
        squares = sos_from_ldl(res.lower, res.diag, gram.basis)
        total = XiPoly()
        for w, p in squares:
            total = total + (p * p).scaled(w)
        assert total != e.reduced_at(a, {k: full[k] for k in e.free})


def test_negative_definite_direction_rejected():
    m = [[F(-1, 10**9), F(0)], [F(0), F(1)]]
    res = exact_psd(m)
    assert not res.ok
    from xiflow.certify import quadratic_value
    assert quadratic_value(m, res.witness) < 0
