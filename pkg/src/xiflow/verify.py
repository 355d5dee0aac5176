"""Regression suite binding every displayed identity to an exact check.

Each check either re-derives a displayed object from the pipeline and compares
coefficient-for-coefficient, or expands a displayed sum of squares in exact
arithmetic and matches it against the corresponding family instantiation.
Three documented inconsistencies in the source are expected to come out
Discrepant; anything else Discrepant is a failure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from . import reference as ref
from .certify import assemble, normalized_family
from .flow import derive_s0
from .ibp import enumerate_partitions, generators
from .ratcore import ALPHA, AffineForm, AlphaFrac, AlphaPoly, ParamRegistry, rat_str, rational_sqrt
from .xicalc import XiMonomial, XiPoly, coeff_value, xi


class CheckStatus(enum.Enum):
    VERIFIED = "verified"
    DISCREPANT = "discrepant"
    SKIPPED = "skipped"


@dataclass
class PaperCheck:
    id: str
    status: CheckStatus
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {"id": self.id, "status": self.status.value, "detail": self.detail}

    @classmethod
    def from_json_dict(cls, d: dict) -> "PaperCheck":
        return cls(d["id"], CheckStatus(d["status"]), d.get("detail", ""))


EXPECTED_DISCREPANT = frozenset({"S4.k-table", "S5.c-values", "S5.sign-display"})


def expand_sos(groups, remainder) -> XiPoly:
    """Exact expansion of sum_g (sum_i q_i sqrt(r_i) m_i)^2 + remainder."""
    total: dict[XiMonomial, Fraction] = {}

    def add(m: XiMonomial, q: Fraction) -> None:
        total[m] = total.get(m, Fraction(0)) + q

    for group in groups:
        entries = []
        for pairs, coeff in group:
            if isinstance(coeff, tuple):
                q, r = coeff
            else:
                q, r = coeff, Fraction(1)
            entries.append((XiMonomial(pairs), Fraction(q), Fraction(r)))
        for i, (mi, qi, ri) in enumerate(entries):
            for mj, qj, rj in entries[i:]:
                s = rational_sqrt(ri * rj)
                if s is None:
                    raise ArithmeticError(
                        f"irrational cross term sqrt({ri * rj}) inside one squared group"
                    )
                factor = 1 if (mi, qi, ri) == (mj, qj, rj) else 2
                add(mi * mj, factor * qi * qj * s)
    for pairs, q in remainder:
        add(XiMonomial(pairs), Fraction(q))
    return XiPoly(total)


def implied_reduced_s0(n: int) -> XiPoly:
    """(S0 - T1)/(a - 1): the silent reduction behind some displayed tables."""
    t1 = generators(n)[0].poly
    diff = derive_s0(n) - t1

    def div(p: AlphaPoly) -> AlphaPoly:
        q, r = p.div_linear(Fraction(1))
        if r != 0:
            raise ArithmeticError("S0 - T1 not divisible by (a-1)")
        return q

    return diff.map_coefficients(div)


def span_combination(n: int, target: XiPoly) -> dict[int, AlphaFrac] | None:
    """Solve target = sum_j a_j(alpha) T_j over rational functions, if possible."""
    gens = generators(n)
    monos = sorted({m for g in gens for m in g.poly.terms} | set(target.terms),
                   key=XiMonomial.sort_key)
    rows = [[AlphaFrac.of(g.poly.coefficient(m) if m in g.poly.terms else AlphaPoly())
             for g in gens] for m in monos]
    rhs = [AlphaFrac.of(target.coefficient(m) if m in target.terms else AlphaPoly()) for m in monos]
    ncols = len(gens)
    piv_rows: list[tuple[int, list[AlphaFrac], AlphaFrac]] = []
    used: set[int] = set()
    for row, b in zip(rows, rhs):
        row, b = list(row), b
        for cj, prow, pb in piv_rows:
            if row[cj]:
                f = row[cj]
                row = [e - f * p for e, p in zip(row, prow)]
                b = b - f * pb
        piv = next((j for j in range(ncols) if j not in used and row[j]), None)
        if piv is None:
            if b:
                return None
            continue
        inv = row[piv]
        row = [e / inv for e in row]
        b = b / inv
        used.add(piv)
        piv_rows.append((piv, row, b))
    sol = {j: AlphaFrac.of(AlphaPoly()) for j in range(ncols)}
    # free coordinates stay 0; back-substitute pivots in reverse
    for piv, row, b in reversed(piv_rows):
        acc = b
        for j in range(ncols):
            if j != piv and row[j]:
                acc = acc - row[j] * sol[j]
        sol[piv] = acc
    check = XiPoly()
    for j, g in enumerate(gens):
        if sol[j]:
            coef = sol[j].as_poly()
            check = check + g.poly.map_coefficients(lambda p, c=coef: p * c)
    return sol if check == target else None


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------

def _check_first_derivative() -> PaperCheck:
    fam = normalized_family(1)
    expected = XiPoly({xi((1, 2)): AffineForm(fam.registry, 1)})
    if fam.family == expected and not fam.free:
        return PaperCheck(
            "S2.first-derivative", CheckStatus.VERIFIED,
            "reduced family is x1^2; original-scale relation dH/dt = (a/2) int u^(a-2) u_x^2",
        )
    return PaperCheck("S2.first-derivative", CheckStatus.DISCREPANT,
                      f"got {fam.family.render()}")


def _check_t_tables() -> list[PaperCheck]:
    out = []
    for n, table in ref.T_TABLE.items():
        gens = generators(n)
        for j, displayed in enumerate(table):
            cid = f"S{n + 2}.T{j + 1}"
            if gens[j].poly == displayed:
                out.append(PaperCheck(cid, CheckStatus.VERIFIED,
                                      f"partition {gens[j].partition.render()}"))
            else:
                out.append(PaperCheck(
                    cid, CheckStatus.DISCREPANT,
                    f"derived {gens[j].poly.render()} != displayed {displayed.render()}",
                ))
    return out


def _check_k_table_2() -> PaperCheck:
    direct = assemble(2, 1)
    displayed_matches_direct = all(
        direct.coefficient(m) == af for m, af in ref.K_TABLE_2
    )
    if displayed_matches_direct:
        return PaperCheck("S4.k-table", CheckStatus.VERIFIED, "matches the raw S0 convention")
    # show the table matches the reduced-and-rescaled S0 instead
    hat = implied_reduced_s0(2)
    reg = ParamRegistry([f"c{j + 1}" for j in range(3)])
    ok_hat = True
    for m, af in ref.K_TABLE_2:
        expect = AffineForm(reg, hat.coefficient(m) if m in hat.terms else AlphaPoly())
        for j, g in enumerate(generators(2)):
            coef = g.poly.coefficient(m)
            if m in g.poly.terms:
                expect = expect + AffineForm(reg, 0, {f"c{j + 1}": coef})
        ok_hat = ok_hat and expect == af
    combo = span_combination(2, implied_reduced_s0(2).map_coefficients(lambda p: p * (ALPHA - 1))
                             - derive_s0(2))
    detail = (
        "displayed coefficients use the unstated substitution S0 -> (S0 - T1)/(a-1); "
        f"{'exactly consistent under that convention' if ok_hat else 'inconsistent either way'}; "
        f"span-equivalence of the two S0 forms {'verified' if combo is not None else 'FAILED'}"
    )
    return PaperCheck("S4.k-table", CheckStatus.DISCREPANT, detail)


def _check_k_table_3() -> PaperCheck:
    direct = assemble(3, 1)
    bad = [m.render() for m, af in ref.K_TABLE_3 if direct.coefficient(m) != af]
    if not bad:
        return PaperCheck(
            "S5.k-table", CheckStatus.VERIFIED,
            "matches the raw S0 convention (un-negated sum; see S5.sign-display)",
        )
    return PaperCheck("S5.k-table", CheckStatus.DISCREPANT, f"mismatch at {', '.join(bad)}")


def _check_c_solution(n: int) -> PaperCheck:
    cid = f"S{n + 2}.c-solution"
    fam = normalized_family(n)
    displayed = ref.C_SOLUTION[n]
    bad = [k for k, v in displayed.items() if fam.solved_normalized.get(k) != v]
    if not bad:
        return PaperCheck(cid, CheckStatus.VERIFIED,
                          "displayed solved parameters match the normalized solution")
    return PaperCheck(cid, CheckStatus.DISCREPANT, f"mismatch at {', '.join(sorted(bad))}")


def _check_c_values_5() -> PaperCheck:
    # displayed (c1..c5) against the displayed k-table's own vanishing constraints
    displayed = ref.C_SOLUTION[3]
    reg3 = ParamRegistry([f"c{i}" for i in range(1, 8)])
    free_reg = ParamRegistry(["c6", "c7"])
    images = {k: AffineForm(free_reg, v.constant) for k, v in displayed.items()}
    violations = []
    for m, af in ref.K_TABLE_3[6:]:  # k7..k11 are the must-vanish block
        value = AffineForm(reg3, af.constant, dict(af.terms)).substitute(images)
        if not value.is_zero():
            violations.append(f"{m.render()}: {value.render()}")
    fam = normalized_family(3)
    match_norm = all(fam.solved_normalized.get(k) == v for k, v in displayed.items())
    if violations:
        detail = (
            "displayed values violate the displayed vanishing constraints "
            f"({'; '.join(violations[:2])}; ...); they are the normalized-parametrization "
            f"values instead ({'confirmed' if match_norm else 'unconfirmed'} by re-derivation)"
        )
        return PaperCheck("S5.c-values", CheckStatus.DISCREPANT, detail)
    return PaperCheck("S5.c-values", CheckStatus.VERIFIED, "")


def _check_family(n: int) -> PaperCheck:
    cid = f"S{n + 2}.family"
    fam = normalized_family(n)
    if fam.family == ref.FAMILY[n]:
        return PaperCheck(cid, CheckStatus.VERIFIED,
                          f"surviving parameters {', '.join(fam.free)}")
    diff = [m.render() for m in set(fam.family.terms) | set(ref.FAMILY[n].terms)
            if fam.family.coefficient(m) != ref.FAMILY[n].coefficient(m)]
    return PaperCheck(cid, CheckStatus.DISCREPANT, f"mismatch at {', '.join(sorted(diff))}")


def _check_sign_display(n: int) -> PaperCheck:
    cid = f"S{n + 2}.sign-display"
    derived = (-1) ** (n + 1)
    shown = ref.DISPLAYED_RELATION_SIGN[n]
    if derived == shown:
        return PaperCheck(cid, CheckStatus.VERIFIED,
                          f"relation sign {shown:+d} matches (-1)^(n+1)")
    return PaperCheck(
        cid, CheckStatus.DISCREPANT,
        f"relation displayed with sign {shown:+d} but the general formula gives "
        f"{derived:+d}; the surrounding results use the corrected sign",
    )


def _check_sos_item(cid: str) -> PaperCheck:
    data = ref.SOS_ITEMS[cid]
    n = data["n"]
    expanded = expand_sos(data["groups"], data["remainder"])
    fam = normalized_family(n)
    value = fam.at(Fraction(1), data["params"])
    derived_pref = Fraction((-1) ** (n + 1), 2**n)
    scale = data["displayed_prefactor"] / derived_pref
    if value == expanded.scaled(scale):
        return PaperCheck(cid, CheckStatus.VERIFIED,
                          f"exact expansion matches family at a->1, scale {rat_str(scale)}")
    return PaperCheck(cid, CheckStatus.DISCREPANT, "expansion does not match family")


def _check_example_5th() -> PaperCheck:
    data = ref.SOS_ITEMS["S7.example"]
    a = data["alpha"]
    expanded = expand_sos(data["groups"], data["remainder"])
    # the displayed relation d^5 H/dt^5 = (a/32) int u^a S matches the derived
    # prefactor, so S must equal the family: S0 + sum c T = sigma (a-1) S
    sigma = -1
    target = expanded.scaled(Fraction(sigma) * (a - 1)) - derive_s0(5).map_coefficients(
        lambda p: AlphaPoly.const(p(a))
    )
    gens = generators(5)
    monos = sorted({m for g in gens for m in g.poly.terms} | set(target.terms),
                   key=XiMonomial.sort_key)
    rows = []
    rhs = []
    for m in monos:
        rows.append([coeff_value(g.poly.coefficient(m), a) if m in g.poly.terms else Fraction(0)
                     for g in gens])
        rhs.append(coeff_value(target.coefficient(m), a))
    sol = _solve_rational(rows, rhs)
    if sol is None:
        return PaperCheck("S7.example", CheckStatus.DISCREPANT,
                          "displayed squares are not in the generator span at a=9/5")
    return PaperCheck(
        "S7.example", CheckStatus.VERIFIED,
        "expanded squares match the assembled polynomial at a=9/5 (exact rational solve)",
    )


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    ncols = len(rows[0]) if rows else 0
    piv: list[tuple[int, list[Fraction], Fraction]] = []
    used: set[int] = set()
    for row, b in zip(rows, rhs):
        row = list(row)
        for cj, prow, pb in piv:
            if row[cj]:
                f = row[cj]
                row = [e - f * p for e, p in zip(row, prow)]
                b = b - f * pb
        j = next((j for j in range(ncols) if j not in used and row[j]), None)
        if j is None:
            if b:
                return None
            continue
        inv = row[j]
        row = [e / inv for e in row]
        b = b / inv
        used.add(j)
        piv.append((j, row, b))
    sol = [Fraction(0)] * ncols
    for j, row, b in reversed(piv):
        acc = b
        for k in range(ncols):
            if k != j and row[k]:
                acc -= row[k] * sol[k]
        sol[j] = acc
    return sol


def _check_counts_5th() -> PaperCheck:
    r = len(generators(5))
    ell = len(enumerate_partitions(10))
    if (r, ell) == (30, 42):
        return PaperCheck("S7.counts", CheckStatus.VERIFIED, "r=30 shift polynomials, l=42 monomials")
    return PaperCheck("S7.counts", CheckStatus.DISCREPANT, f"got r={r}, l={ell}")


def run_all_checks() -> list[PaperCheck]:
    checks: list[PaperCheck] = [_check_first_derivative()]
    t_checks = _check_t_tables()
    checks += [c for c in t_checks if c.id.startswith("S4")]
    checks += [
        _check_k_table_2(),
        _check_c_solution(2),
        _check_family(2),
        _check_sign_display(2),
        _check_sos_item("S4.item-a"),
        _check_sos_item("S4.item-b"),
        _check_sos_item("S4.item-c"),
    ]
    checks += [c for c in t_checks if c.id.startswith("S5")]
    checks += [
        _check_k_table_3(),
        _check_c_values_5(),
        _check_sign_display(3),
        _check_family(3),
        _check_sos_item("S5.item-a"),
        _check_sos_item("S5.item-b"),
    ]
    checks += [c for c in t_checks if c.id.startswith("S6")]
    checks += [
        _check_c_solution(4),
        _check_family(4),
        _check_sign_display(4),
        _check_sos_item("S6.item-a"),
        _check_sos_item("S6.item-b"),
    ]
    checks += [_check_counts_5th(), _check_example_5th()]
    return checks


def verdict(checks: list[PaperCheck]) -> bool:
    """True when exactly the documented discrepancies are Discrepant."""
    discrepant = {c.id for c in checks if c.status is CheckStatus.DISCREPANT}
    skipped = [c for c in checks if c.status is CheckStatus.SKIPPED]
    return discrepant == set(EXPECTED_DISCREPANT) and not skipped
