"""Sum-of-squares certification of the reduced entropy-derivative polynomial.

Pipeline: assemble sigma * (S0 + sum c_j T_j) with one free parameter per
generator, impose the must-vanish linear constraints by exact elimination,
spread the surviving coefficients over a parametrized Gram matrix on the
weight-n monomial basis, maximize the smallest eigenvalue numerically, round
the parameters to rationals, and let an exact LDL^T factorization be the sole
arbiter.  Everything emitted as a certificate re-expands exactly.

Feasibility is one-sided: a certificate proves pointwise nonnegativity, but a
failed search proves nothing, so the negative outcome is only ever reported
as "no certificate found".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .flow import Regime, derive_s0, sign_convention
from .ibp import classify_monomials, factorizations, generators, gram_basis
from .ratcore import (
    AffineForm,
    AlphaFrac,
    AlphaPoly,
    ParamRegistry,
    QuadSurd,
    rat,
    rat_str,
    rational_roots,
)
from .xicalc import XiMonomial, XiPoly, xi


class InconsistentSystem(Exception):
    """The must-vanish linear system has no solution (pipeline bug)."""


class ConstraintViolation(Exception):
    """A residual constraint is nonzero at the requested parameter value."""


def c_names(n: int) -> list[str]:
    return [f"c{j + 1}" for j in range(len(generators(n)))]


def assemble(n: int, sigma: int, alpha: Fraction | None = None) -> XiPoly:
    """sigma * (S0 + sum_j c_j T_j) with affine-form coefficients.

    With alpha given, every polynomial coefficient is collapsed to a constant
    first, so later elimination runs over plain rationals.
    """
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    reg = ParamRegistry(c_names(n))
    terms: dict[XiMonomial, AffineForm] = {}

    def add(m: XiMonomial, const, pname: str | None) -> None:
        af = terms.get(m, AffineForm(reg))
        if pname is None:
            af = af + AffineForm(reg, sigma * const)
        else:
            af = af + AffineForm(reg, 0, {pname: sigma * const})
        terms[m] = af

    for m, coef in derive_s0(n).terms.items():
        add(m, coef, None)
    for j, gen in enumerate(generators(n)):
        for m, coef in gen.poly.terms.items():
            add(m, coef, f"c{j + 1}")
    poly = XiPoly(terms)
    if alpha is not None:
        a = rat(alpha)
        poly = poly.map_coefficients(lambda af: af.map_poly(lambda p: AlphaPoly.const(p(a))))
    return poly


@dataclass
class Elimination:
    """Outcome of solving the must-vanish system for a subset of the c's."""

    n: int
    sigma: int
    alpha: Fraction | None
    registry: ParamRegistry          # all c's
    free_registry: ParamRegistry     # surviving c's
    free: tuple[str, ...]
    solved: dict[str, AffineForm]    # pivot c -> affine form in the free c's
    reduced: XiPoly                  # supported on representable monomials
    residuals: list[AffineForm]      # leftover constraints (normally empty)

    def reduced_at(self, alpha: Fraction, params: Mapping[str, Fraction]) -> XiPoly:
        """Reduced polynomial with exact rational coefficients."""
        a = rat(alpha)
        return self.reduced.map_coefficients(lambda af: af.eval_params(params)(a))


def eliminate(n: int, assembled: XiPoly, alpha: Fraction | None = None, sigma: int = 1) -> Elimination:
    """Zero every must-vanish coefficient by exact Gaussian elimination.

    Works over rational functions of the entropy parameter; pivots prefer
    entries with constant coefficient (highest generator index first), which
    keeps every solved value polynomial and reproduces the published choice
    of surviving parameters.
    """
    reg = ParamRegistry(c_names(n))
    names = list(reg.names)
    _, must_vanish = classify_monomials(n)

    rows: list[list[AlphaFrac]] = []
    rhs: list[AlphaFrac] = []
    for m in must_vanish:
        af = assembled.coefficient(m)
        if isinstance(af, Fraction):  # absent coefficient
            af = AffineForm(reg, af)
        rows.append([AlphaFrac.of(af.terms.get(nm, AlphaPoly())) for nm in names])
        rhs.append(AlphaFrac.of(-af.constant))

    pivot_of_row: list[int | None] = [None] * len(rows)
    used: set[int] = set()
    for ri, row in enumerate(rows):
        cands = [ci for ci in range(len(names)) if ci not in used and row[ci]]
        if not cands:
            if rhs[ri]:
                raise InconsistentSystem(f"unsatisfiable constraint for {must_vanish[ri].render()}")
            continue
        constant = [ci for ci in cands if row[ci].num.degree == 0 and row[ci].den.degree == 0]
        ci = max(constant) if constant else max(cands)
        used.add(ci)
        pivot_of_row[ri] = ci
        inv = row[ci]
        rows[ri] = [e / inv for e in row]
        rhs[ri] = rhs[ri] / inv
        for rj in range(len(rows)):
            if rj != ri and rows[rj][ci]:
                f = rows[rj][ci]
                rows[rj] = [e - f * p for e, p in zip(rows[rj], rows[ri])]
                rhs[rj] = rhs[rj] - f * rhs[ri]

    free = tuple(nm for ci, nm in enumerate(names) if ci not in used)
    free_reg = ParamRegistry(free)

    solved: dict[str, AffineForm] = {}
    for ri, ci in enumerate(pivot_of_row):
        if ci is None:
            continue
        expr = AffineForm(free_reg, rhs[ri].as_poly())
        for cj, nm in enumerate(names):
            if cj != ci and rows[ri][cj]:
                expr = expr - AffineForm(free_reg, 0, {nm: rows[ri][cj].as_poly()})
        solved[names[ci]] = expr

    images = {
        nm: (solved[nm] if nm in solved else AffineForm.param(free_reg, nm)) for nm in names
    }
    reduced = assembled.map_coefficients(lambda af: af.substitute(images))
    for m in must_vanish:
        c = reduced.coefficient(m)
        if isinstance(c, AffineForm) and not c.is_zero():
            raise InconsistentSystem(f"must-vanish coefficient survived at {m.render()}")
    reduced = XiPoly({m: c for m, c in reduced.terms.items() if m not in set(must_vanish)})

    return Elimination(
        n=n, sigma=sigma, alpha=alpha, registry=reg, free_registry=free_reg,
        free=free, solved=solved, reduced=reduced, residuals=[],
    )


def eliminate_assembled(n: int, sigma: int, alpha: Fraction | None = None) -> Elimination:
    return eliminate(n, assemble(n, sigma, alpha), alpha=alpha, sigma=sigma)


# ---------------------------------------------------------------------------
# Published normalization
# ---------------------------------------------------------------------------

@dataclass
class NormalizedFamily:
    """The reduced family in the published parametrization.

    Substituting c_1 = sigma*(a-1)*h_1 - 1 and c_j = sigma*(a-1)*h_j into
    sigma*(S0 + sum c_j T_j) and dividing by (a-1) exactly reproduces the
    families displayed in the source derivation (written there in the same
    letters; the surviving parameters keep their names here).  Pointwise
    nonnegativity of this family at any parameter value certifies the
    alternating-sign claim in both regimes, since it differs from the
    regime-correct assembled polynomial by the positive factor |a-1|.
    """

    n: int
    alpha: Fraction | None
    family: XiPoly                   # AffineForm coefficients over free params
    free: tuple[str, ...]
    registry: ParamRegistry
    solved_normalized: dict[str, AffineForm]  # published values of pivot c's

    def at(self, alpha: Fraction, params: Mapping[str, Fraction]) -> XiPoly:
        a = rat(alpha)
        return self.family.map_coefficients(lambda af: af.eval_params(params)(a))


def normalized_family(n: int, alpha: Fraction | None = None) -> NormalizedFamily:
    sigma = (-1) ** n
    elim = eliminate_assembled(n, sigma, alpha)
    free_reg = elim.free_registry

    if alpha is None:
        factor = AlphaPoly((Fraction(-sigma), Fraction(sigma)))  # sigma*(a-1)

        def div(p: AlphaPoly) -> AlphaPoly:
            q, r = p.div_linear(Fraction(1))
            if r != 0:
                raise ArithmeticError("family not divisible by (a-1)")
            return q
    else:
        a = rat(alpha)
        factor = AlphaPoly.const(sigma * (a - 1))
        inv = 1 / (a - 1)

        def div(p: AlphaPoly) -> AlphaPoly:
            return p * AlphaPoly.const(inv)

    images = {f: AffineForm(free_reg, 0, {f: factor}) for f in elim.free}

    def normalize(af: AffineForm) -> AffineForm:
        # reduced already carries sigma; only reparametrize and divide
        return af.substitute(images).map_poly(div)

    fam = elim.reduced.map_coefficients(normalize)

    solved_norm: dict[str, AffineForm] = {}
    for name, expr in elim.solved.items():
        shift = Fraction(1) if name == "c1" else Fraction(0)
        solved_norm[name] = ((expr + shift).substitute(images) * sigma).map_poly(div)

    return NormalizedFamily(
        n=n, alpha=alpha, family=fam, free=elim.free,
        registry=free_reg, solved_normalized=solved_norm,
    )


# ---------------------------------------------------------------------------
# Gram problem
# ---------------------------------------------------------------------------

@dataclass
class GramProblem:
    """Affine-parametrized symmetric matrix over the weight-n monomial basis."""

    n: int
    alpha: Fraction | None
    basis: tuple[XiMonomial, ...]
    registry: ParamRegistry          # free c's plus slack parameters
    matrix: list[list[AffineForm]]
    residual_constraints: list[AffineForm]
    param_names: tuple[str, ...]

    def instantiate(self, alpha: Fraction, params: Mapping[str, Fraction]) -> list[list[Fraction]]:
        a = rat(alpha)
        return [[e.eval_params(params)(a) for e in row] for row in self.matrix]

    def expand(self) -> XiPoly:
        """v^T M v as a polynomial with affine coefficients (exact)."""
        out: dict[XiMonomial, AffineForm] = {}
        N = len(self.basis)
        for i in range(N):
            for j in range(N):
                m = self.basis[i] * self.basis[j]
                cur = out.get(m)
                out[m] = self.matrix[i][j] if cur is None else cur + self.matrix[i][j]
        return XiPoly(out)

    def numeric_parts(self, alpha: Fraction) -> tuple[np.ndarray, list[np.ndarray]]:
        a = rat(alpha)
        N = len(self.basis)
        m0 = np.zeros((N, N))
        dirs = [np.zeros((N, N)) for _ in self.param_names]
        idx = {nm: k for k, nm in enumerate(self.param_names)}
        for i in range(N):
            for j in range(N):
                af = self.matrix[i][j]
                m0[i, j] = float(af.constant(a))
                for nm, coef in af.terms.items():
                    dirs[idx[nm]][i, j] = float(coef(a))
        return m0, dirs


def build_gram(n: int, elim: Elimination) -> GramProblem:
    """Distribute each representable coefficient over its Gram positions.

    A monomial with k distinct basis factorizations gets k-1 slack parameters;
    the first position absorbs the coefficient minus the slacks.
    """
    basis = gram_basis(n)
    representable, _ = classify_monomials(n)
    rep_set = set(representable)

    slack_names: list[str] = []
    per_monomial: list[tuple[XiMonomial, list[tuple[int, int]], list[str]]] = []
    for m in representable:
        pairs = factorizations(n, m)
        extra = [f"lam{len(slack_names) + k + 1}" for k in range(len(pairs) - 1)]
        slack_names.extend(extra)
        per_monomial.append((m, pairs, extra))

    reg = elim.free_registry.extended(slack_names)
    N = len(basis)
    zero = AffineForm(reg)
    mat: list[list[AffineForm]] = [[zero for _ in range(N)] for _ in range(N)]

    residuals: list[AffineForm] = []
    for m, coeff in elim.reduced.terms.items():
        if m not in rep_set and not coeff.is_zero():
            residuals.append(coeff)

    def lift(af) -> AffineForm:
        if isinstance(af, Fraction):
            return AffineForm(reg, af)
        return AffineForm(reg, af.constant, dict(af.terms))

    for m, pairs, extra in per_monomial:
        total = lift(elim.reduced.coefficient(m))
        # contribution t_p of position p to the coefficient: t = M_ii or 2*M_ij
        contributions = [AffineForm.param(reg, nm) for nm in extra]
        first = total
        for c in contributions:
            first = first - c
        contributions.insert(0, first)
        for (i, j), t in zip(pairs, contributions):
            if i == j:
                mat[i][j] = mat[i][j] + t
            else:
                half = t * Fraction(1, 2)
                mat[i][j] = mat[i][j] + half
                mat[j][i] = mat[j][i] + half

    return GramProblem(
        n=n, alpha=elim.alpha, basis=basis, registry=reg, matrix=mat,
        residual_constraints=residuals,
        param_names=tuple(elim.free) + tuple(slack_names),
    )


# ---------------------------------------------------------------------------
# Numeric feasibility search
# ---------------------------------------------------------------------------

def lambda_min(m: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    return float(np.linalg.eigvalsh(m)[0])


def maximize_lambda_min(
    problem: GramProblem,
    alpha: Fraction,
    restarts: int = 32,
    tol: float = 1e-12,
    seed: int = 0,
    iterations: int = 150,
) -> tuple[dict[str, Fraction | float], float]:
    """Maximize the concave map params -> lambda_min(M(params)).

    Primary engine: the equivalent semidefinite program max t s.t.
    M(params) - t I >= 0, solved with a conic solver.  Fallback (no solver
    installed): subgradient ascent from the bottom eigenvector with seeded
    restarts plus an LP cutting-plane loop.  The optimum often has a multiple
    bottom eigenvalue, where plain first-order steps stall; both engines are
    built around that.
    """
    a = rat(alpha)
    for res in problem.residual_constraints:
        if not res.is_zero():
            raise ConstraintViolation(
                f"residual constraint {res.render()} does not vanish at a={rat_str(a)}"
            )
    names = problem.param_names
    m0, dirs = problem.numeric_parts(alpha)
    if not names:
        return {}, lambda_min(m0)

    P = len(names)
    d_stack = np.stack(dirs)

    sdp = _solve_sdp(m0, dirs, seed=seed)
    if sdp is not None:
        theta = sdp
        val = float(np.linalg.eigvalsh(m0 + np.tensordot(theta, d_stack, axes=1))[0])
        return {nm: theta[i] for i, nm in enumerate(names)}, val

    def matrix_at(theta: np.ndarray) -> np.ndarray:
        return m0 + np.tensordot(theta, d_stack, axes=1)

    def value(theta: np.ndarray) -> float:
        return float(np.linalg.eigvalsh(matrix_at(theta))[0])

    cuts: list[np.ndarray] = []
    cut_keys: set[tuple] = set()

    def eval_and_cut(theta: np.ndarray) -> float:
        w, vecs = np.linalg.eigh(matrix_at(theta))
        # keep cuts for the bottom few eigenvectors: richer cuts converge much
        # faster when the optimum has a multiple bottom eigenvalue
        keep = min(len(w), 4)
        thresh = w[0] + max(1e-9, 1e-6 * abs(w[0]))
        for i in range(len(w)):
            if i >= keep and w[i] > thresh:
                break
            v = vecs[:, i]
            key = tuple(np.round(v * np.sign(v[np.argmax(np.abs(v))] or 1.0), 6))
            if key not in cut_keys:
                cut_keys.add(key)
                cuts.append(v.copy())
        return float(w[0])

    def ascend(theta: np.ndarray) -> tuple[np.ndarray, float]:
        best_t, best_v = theta.copy(), value(theta)
        step = 0.5
        stall = 0
        t = theta.copy()
        for _ in range(iterations):
            _, vecs = np.linalg.eigh(matrix_at(t))
            v = vecs[:, 0]
            g = np.array([v @ d @ v for d in d_stack])
            gn = np.linalg.norm(g)
            if gn < 1e-16:
                break
            t = t + step * g / gn
            cand = value(t)
            if cand > best_v + tol:
                best_v, best_t = cand, t.copy()
                stall = 0
            else:
                stall += 1
                if stall >= 6:
                    step *= 0.5
                    stall = 0
                    t = best_t.copy()
                    if step < 1e-9:
                        break
        return best_t, best_v

    best_theta = np.zeros(P)
    best = eval_and_cut(best_theta)
    for k in range(min(restarts, 3)):
        if k == 0:
            theta0 = np.zeros(P)
        else:
            rng = np.random.default_rng(1_000_003 * seed + k)
            theta0 = rng.normal(scale=float(1 + 2 * k), size=P)
        t1, _ = ascend(theta0)
        v1 = eval_and_cut(t1)
        if v1 > best:
            best, best_theta = v1, t1

    from scipy.optimize import linprog

    # Kelley cutting planes with a stabilizing trust region around the
    # incumbent: plain Kelley oscillates badly on flat ridges.
    box = 64.0
    expansions = 0
    center = best_theta.copy()
    radius = 8.0
    for _ in range(1200):
        z = len(cuts)
        a_ub = np.zeros((z, P + 1))
        b_ub = np.zeros(z)
        for i, v in enumerate(cuts):
            a_ub[i, :P] = -np.array([v @ d @ v for d in d_stack])
            a_ub[i, P] = 1.0
            b_ub[i] = float(v @ m0 @ v)
        lo_b = np.maximum(center - radius, -box)
        hi_b = np.minimum(center + radius, box)
        res = linprog(
            c=[0.0] * P + [-1.0], A_ub=a_ub, b_ub=b_ub,
            bounds=[(lo_b[p], hi_b[p]) for p in range(P)] + [(None, None)],
            method="highs",
        )
        if not res.success:
            break
        theta = res.x[:P]
        upper = res.x[P]
        val = eval_and_cut(theta)
        if val > best:
            best, best_theta = val, theta.copy()
            center = best_theta.copy()
        at_trust = float(np.max(np.abs(theta - center))) > 0.95 * radius
        at_box = float(np.max(np.abs(theta))) > 0.95 * box
        gap = upper - best
        if gap <= max(tol, 1e-10 * max(1.0, abs(best))):
            if at_trust and radius < box:
                radius = min(radius * 4.0, box)
                continue
            if at_box and expansions < 8:
                box *= 8.0
                expansions += 1
                continue
            break
        if at_trust and val >= upper - 2.0 * gap:
            radius = min(radius * 2.0, box)
        if at_box and expansions < 8:
            box *= 8.0
            expansions += 1
    return {nm: best_theta[i] for i, nm in enumerate(names)}, best


# ---------------------------------------------------------------------------
# Exact PSD check and SOS extraction
# ---------------------------------------------------------------------------

def _solve_sdp(m0: np.ndarray, dirs: list[np.ndarray], seed: int = 0) -> np.ndarray | None:
    """max t with m0 + sum theta_p dirs[p] - t I PSD, via a conic solver.

    Returns the parameter vector, or None when no usable solver is installed
    (callers then fall back to the first-order search).
    """
    try:
        import cvxpy as cp
    except ImportError:
        return None
    n = m0.shape[0]
    theta = cp.Variable(len(dirs))
    t = cp.Variable()
    m_expr = m0 + sum(theta[p] * dirs[p] for p in range(len(dirs)))
    prob = cp.Problem(cp.Maximize(t), [m_expr - t * np.eye(n) >> 0])
    for solver in ("CLARABEL", "SCS"):
        if solver not in cp.installed_solvers():
            continue
        try:
            prob.solve(solver=solver)
        except cp.SolverError:
            continue
        if theta.value is not None and prob.status in ("optimal", "optimal_inaccurate"):
            return np.asarray(theta.value, dtype=float)
    return None


@dataclass
class PSDResult:
    ok: bool
    lower: list[list[Fraction]] | None = None
    diag: list[Fraction] | None = None
    witness: list[Fraction] | None = None


def exact_psd(m: Sequence[Sequence[Fraction]]) -> PSDResult:
    """PSD-safe LDL^T over the rationals.

    Zero pivots require the whole pivot row to vanish; any negative pivot or
    indefinite 2x2 block yields an exact witness vector v with v^T M v < 0.
    """
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    lower = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    diag = [Fraction(0)] * n

    def lift(w: list[Fraction]) -> list[Fraction]:
        # solve L^T v = w by back substitution (unit upper triangular)
        v = list(w)
        for i in range(n - 1, -1, -1):
            s = w[i]
            for j in range(i + 1, n):
                s -= lower[j][i] * v[j]
            v[i] = s
        return v

    for k in range(n):
        d = a[k][k]
        if d < 0:
            w = [Fraction(0)] * n
            w[k] = Fraction(1)
            return PSDResult(False, witness=lift(w))
        if d == 0:
            bad = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
            if bad is not None:
                b, c = a[k][bad], a[bad][bad]
                t = -(c + 1) / (2 * b)
                w = [Fraction(0)] * n
                w[k], w[bad] = t, Fraction(1)
                return PSDResult(False, witness=lift(w))
            continue
        diag[k] = d
        for i in range(k + 1, n):
            lower[i][k] = a[i][k] / d
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / d
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
            a[i][k] = Fraction(0)
    return PSDResult(True, lower=lower, diag=diag)


def quadratic_value(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Fraction:
    n = len(v)
    return sum(m[i][j] * v[i] * v[j] for i in range(n) for j in range(n))


def sos_from_ldl(
    lower: list[list[Fraction]], diag: list[Fraction], basis: Sequence[XiMonomial]
) -> list[tuple[Fraction, XiPoly]]:
    """One weighted square per positive pivot: weight D_kk, poly = column k of L."""
    out = []
    for k, d in enumerate(diag):
        if d == 0:
            continue
        poly = XiPoly({basis[i]: lower[i][k] for i in range(len(basis)) if lower[i][k]})
        out.append((d, poly))
    return out


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------

class CertStatus(enum.Enum):
    EXACT_SOS = "exact_sos"
    HEURISTIC_INFEASIBLE = "heuristic_infeasible"


@dataclass
class Certificate:
    n: int
    alpha: Fraction
    sigma: int
    regime: Regime
    status: CertStatus
    params: dict[str, Fraction] = field(default_factory=dict)
    squares: list[tuple[Fraction, XiPoly]] = field(default_factory=list)
    best_lambda_min: float | None = None

    @property
    def feasible(self) -> bool:
        return self.status is CertStatus.EXACT_SOS

    def relation(self) -> str:
        """The certified integral relation on the original time scale."""
        sgn = "+" if (-1) ** (self.n + 1) > 0 else "-"
        return (f"d^{self.n}H/dt^{self.n} = {sgn}(a/2^{self.n}) * int u^a * F dx, "
                f"F = sigma*(S0 + sum c_j T_j)/(a-1) certified nonnegative")

    def to_json_dict(self) -> dict:
        d = {
            "n": self.n,
            "alpha": rat_str(self.alpha),
            "sigma": self.sigma,
            "regime": self.regime.value,
            "status": self.status.value,
            "params": {k: rat_str(v) for k, v in sorted(self.params.items())},
            "squares": [
                {"weight": rat_str(w), "poly": p.render()} for w, p in self.squares
            ],
            "original_scale": f"derivative reported for u_t = u_xx/2; factor 1/2^{self.n} vs unit diffusion",
        }
        if self.best_lambda_min is not None:
            d["best_lambda_min"] = self.best_lambda_min
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "Certificate":
        return cls(
            n=d["n"],
            alpha=rat(d["alpha"]),
            sigma=d["sigma"],
            regime=Regime(d["regime"]),
            status=CertStatus(d["status"]),
            params={k: rat(v) for k, v in d["params"].items()},
            squares=[(rat(s["weight"]), parse_rational_xipoly(s["poly"])) for s in d["squares"]],
            best_lambda_min=d.get("best_lambda_min"),
        )


def parse_rational_xipoly(text: str) -> XiPoly:
    """Parse the canonical rendering of a rational-coefficient polynomial."""
    text = text.strip()
    if text == "0":
        return XiPoly()
    text = text.replace(" - ", " +-").replace(" + ", " +")
    out: dict[XiMonomial, Fraction] = {}
    for chunk in text.split(" +"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coeff = Fraction(1)
        if chunk.startswith("-"):
            coeff = -coeff
            chunk = chunk[1:]
        factors = chunk.split("*") if chunk else []
        exps: dict[int, int] = {}
        for f in factors:
            if f.startswith("x"):
                if "^" in f:
                    v, e = f[1:].split("^")
                    exps[int(v)] = exps.get(int(v), 0) + int(e)
                else:
                    exps[int(f[1:])] = exps.get(int(f[1:]), 0) + 1
            else:
                coeff *= Fraction(f)
        m = XiMonomial(exps)
        out[m] = out.get(m, Fraction(0)) + coeff
    return XiPoly(out)


def _round_candidates(values: Mapping[str, float], ladders=(10**3, 10**6, 10**9)):
    for d in ladders:
        yield {nm: Fraction(v).limit_denominator(d) for nm, v in values.items()}


def _exact_seed_candidates(n: int, alpha: Fraction, free: Sequence[str]) -> list[dict[str, Fraction]]:
    """Closed-form parameter points worth trying before/alongside rounding."""
    out: list[dict[str, Fraction]] = [{nm: Fraction(0) for nm in free}]
    a = rat(alpha)
    sigma = (-1) ** n
    scale = sigma * (a - 1)  # published h -> internal c conversion
    if n == 2 and "c3" in free:
        out.append({"c3": scale * (a - 6) / 9})
    if n == 3 and "c6" in free and "c7" in free:
        # boundary branch of the sextic criterion (degenerate top-left block)
        c6h = (a - 2) * (4 * (a - 2) - (a - 3)) / 3
        k3 = (a - 2) * (a - 3) + c6h
        c7h = ((a - 2) * k3 - (a - 4) * c6h) / 5
        out.append({"c6": scale * c6h, "c7": scale * c7h})
    return out


def certify(
    n: int,
    alpha: Fraction | int | str,
    regime: Regime | None = None,
    *,
    restarts: int = 32,
    seed: int = 0,
    numeric_tol: float = 1e-9,
    iterations: int = 250,
) -> Certificate:
    """Full pipeline at a fixed rational parameter value.

    Tries exact closed-form seeds and continued-fraction roundings of the
    numeric optimum; the exact LDL^T factorization decides.  When nothing
    verifies, reports the best smallest-eigenvalue value found (heuristic:
    absence of a certificate is not a proof of sign failure).
    """
    a = rat(alpha)
    if a == 1:
        raise ValueError("a = 1 is excluded; the Shannon limit is checked symbolically")
    if a <= 0:
        raise ValueError("the entropy parameter must be positive")
    actual = Regime.of(a)
    if regime is not None and regime is not actual:
        raise ValueError(f"regime {regime} inconsistent with a = {rat_str(a)}")
    sigma = sign_convention(n, actual)

    elim = eliminate_assembled(n, sigma, a)
    gram = build_gram(n, elim)
    opt, best = maximize_lambda_min(gram, a, restarts=restarts, seed=seed, iterations=iterations)

    slack_names = [nm for nm in gram.param_names if nm not in elim.free]
    candidates: list[dict[str, Fraction]] = []
    for seedpt in _exact_seed_candidates(n, a, elim.free):
        candidates.append({**seedpt, **{nm: Fraction(0) for nm in slack_names}})
    if best >= -numeric_tol:
        for cand in _round_candidates(opt):
            candidates.append(cand)
        # slacks and frees rounded at different resolutions can also help
        for cand in _round_candidates(opt, ladders=(24, 360, 10**4)):
            candidates.append(cand)

    for params in candidates:
        full = {nm: params.get(nm, Fraction(0)) for nm in gram.param_names}
        matrix = gram.instantiate(a, full)
        res = exact_psd(matrix)
        if not res.ok:
            continue
        squares = sos_from_ldl(res.lower, res.diag, gram.basis)
        expansion = XiPoly()
        for w, p in squares:
            expansion = expansion + (p * p).scaled(w)
        target = elim.reduced_at(a, {nm: full[nm] for nm in elim.free})
        if expansion != target:
            raise AssertionError("certificate re-expansion mismatch (pipeline bug)")
        return Certificate(
            n=n, alpha=a, sigma=sigma, regime=actual, status=CertStatus.EXACT_SOS,
            params={nm: full[nm] for nm in gram.param_names}, squares=squares,
            best_lambda_min=best,
        )

    return Certificate(
        n=n, alpha=a, sigma=sigma, regime=actual,
        status=CertStatus.HEURISTIC_INFEASIBLE, best_lambda_min=best,
    )


# ---------------------------------------------------------------------------
# Closed forms for the quartic (n=2) and sextic (n=3) cases
# ---------------------------------------------------------------------------

@dataclass
class QuarticClosedForm:
    """Exact feasibility data for the order-2 family.

    The family is k1 x1^4 + k2 x1^2 x2 + k4 x2^2 with one surviving parameter;
    the discriminant 4 k1 k4 - k2^2 is a concave quadratic in it, maximized in
    closed form.
    """

    optimal_c: AlphaPoly          # argmax of the discriminant, per alpha
    max_discriminant: AlphaPoly   # value at the optimum
    boundary: list[Fraction]      # rational roots of the max discriminant

    def feasible_at(self, alpha: Fraction) -> bool:
        a = rat(alpha)
        return a > 0 and a != 1 and self.max_discriminant(a) >= 0


def closed_form_quartic() -> QuarticClosedForm:
    fam = normalized_family(2)
    k1 = fam.family.coefficient(xi((1, 4)))
    k2 = fam.family.coefficient(xi((1, 2), (2, 1)))
    k4 = fam.family.coefficient(xi((2, 2)))
    (name,) = fam.free
    if not k4.is_constant():
        raise AssertionError("x2^2 coefficient should not involve the free parameter")
    k40 = k4.constant
    k10, k11 = k1.constant, k1.terms.get(name, AlphaPoly())
    k20, k21 = k2.constant, k2.terms.get(name, AlphaPoly())
    # D(c) = A c^2 + B c + C
    A = -(k21 * k21)
    B = 4 * k11 * k40 - 2 * k20 * k21
    C = 4 * k10 * k40 - k20 * k20
    if not A.is_constant() or A.constant_value() >= 0:
        raise AssertionError("discriminant must be concave with constant leading term")
    a_val = A.constant_value()
    copt = B * AlphaPoly.const(Fraction(-1) / (2 * a_val))
    dmax = C - B * B * AlphaPoly.const(Fraction(1) / (4 * a_val))
    return QuarticClosedForm(optimal_c=copt, max_discriminant=dmax, boundary=rational_roots(dmax))


class _BiPoly:
    """Tiny dense bivariate helper for the sextic criterion (fixed alpha)."""

    def __init__(self, terms: Mapping[tuple[int, int], Fraction] = ()):
        self.terms = {k: Fraction(v) for k, v in dict(terms).items() if v}

    @classmethod
    def of_affine(cls, af: AffineForm, alpha: Fraction, names: Sequence[str]) -> "_BiPoly":
        t = {(0, 0): af.constant(alpha)}
        for k, nm in enumerate(names):
            if nm in af.terms:
                key = (1, 0) if k == 0 else (0, 1)
                t[key] = af.terms[nm](alpha)
        return cls(t)

    def __add__(self, o):
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, Fraction(0)) + v
        return _BiPoly(t)

    def __sub__(self, o):
        return self + o.scaled(-1)

    def scaled(self, s):
        return _BiPoly({k: v * s for k, v in self.terms.items()})

    def __mul__(self, o):
        t: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in self.terms.items():
            for (k, l), w in o.terms.items():
                key = (i + k, j + l)
                t[key] = t.get(key, Fraction(0)) + v * w
        return _BiPoly(t)

    def coeff(self, i, j):
        return self.terms.get((i, j), Fraction(0))


def closed_form_sextic(alpha: Fraction | int | str) -> bool:
    """Exact feasibility of the order-3 family at a fixed rational parameter.

    Decides whether real values of the two surviving parameters satisfy the
    sextic positivity criterion: either the strict block condition with the
    3x3 determinant inequality, or its degenerate boundary branch.
    """
    a = rat(alpha)
    if a <= 0 or a == 1:
        return False
    fam = normalized_family(3, a)
    names = list(fam.free)  # [c6, c7]
    mono = {
        "k1": xi((1, 6)), "k2": xi((1, 4), (2, 1)), "k3": xi((1, 3), (3, 1)),
        "k4": xi((1, 2), (2, 2)), "k5": xi((1, 1), (2, 1), (3, 1)), "k6": xi((3, 2)),
    }
    k = {nm: _BiPoly.of_affine(_lift_coeff(fam.family.coefficient(mono[nm]), fam.registry), a, names)
         for nm in mono}

    # (2a): 4 k4 k6 - k5^2 > 0 and det condition >= 0
    P = k["k4"] * k["k6"]
    P = P.scaled(4) - k["k5"] * k["k5"]
    # P is linear in c6 only
    if P.coeff(0, 1) or P.coeff(1, 1):
        raise AssertionError("block condition should not involve the second parameter")
    slope, p0 = P.coeff(1, 0), P.coeff(0, 0)
    G = (k["k1"] * k["k4"] * k["k6"]).scaled(4) - k["k1"] * k["k5"] * k["k5"] \
        - k["k2"] * k["k2"] * k["k6"] - k["k3"] * k["k3"] * k["k4"] \
        + k["k2"] * k["k3"] * k["k5"]

    q2 = G.coeff(0, 2)
    if any(G.coeff(i, 2) for i in (1, 2, 3)) or q2 >= 0:
        raise AssertionError("determinant condition should be concave quadratic in c7")
    # maximize over c7: f(c6) = C(c6) - L(c6)^2 / (4 q2)
    L = [G.coeff(0, 1), G.coeff(1, 1)]
    C = [G.coeff(i, 0) for i in range(4)]
    f = list(C)
    # subtract L^2/(4 q2); L is linear
    f[0] -= L[0] * L[0] / (4 * q2)
    f[1] -= 2 * L[0] * L[1] / (4 * q2)
    f[2] -= L[1] * L[1] / (4 * q2)

    def f_at(x: Fraction) -> Fraction:
        return ((f[3] * x + f[2]) * x + f[1]) * x + f[0]

    if slope <= 0:
        raise AssertionError("block condition should be increasing in c6")
    edge = -p0 / slope  # feasible region of (2a) in c6 is (edge, +inf)

    if f[3] >= 0:
        raise AssertionError("optimized determinant condition should be a downward cubic")

    feasible_2a = False
    if f_at(edge) > 0:
        feasible_2a = True
    else:
        # local max of the cubic: root x = (-f2 - sqrt(disc))/(3 f3) of f',
        # which for f3 < 0 is the larger critical point
        lead, f2, f1 = f[3], f[2], f[1]
        disc = f2 * f2 - 3 * lead * f1
        if disc >= 0:
            x_max = QuadSurd(-f2 / (3 * lead), Fraction(-1) / (3 * lead), disc)
            if (x_max + (-edge)).sign() > 0:
                val = QuadSurd(f[3], 0, disc)
                for coeff in (f[2], f[1], f[0]):
                    val = val * x_max + coeff
                if val.sign() >= 0:
                    feasible_2a = True
    if feasible_2a:
        return True

    # (2b): 4 k4 k6 - k5^2 = 0, 2 k2 k6 - k3 k5 = 0, 4 k1 k6 - k3^2 >= 0
    c6b = -p0 / slope
    k3b = k["k3"].coeff(0, 0) + k["k3"].coeff(1, 0) * c6b
    k5b = k["k5"].coeff(0, 0)
    k6b = k["k6"].coeff(0, 0)
    k2_const = k["k2"].coeff(0, 0) + k["k2"].coeff(1, 0) * c6b
    k2_c7 = k["k2"].coeff(0, 1)
    if k2_c7 == 0:
        return False
    c7b = (k3b * k5b / (2 * k6b) - k2_const) / k2_c7
    k1b = k["k1"].coeff(0, 0) + k["k1"].coeff(0, 1) * c7b
    return 4 * k1b * k6b - k3b * k3b >= 0


def _lift_coeff(c, registry: ParamRegistry) -> AffineForm:
    if isinstance(c, AffineForm):
        return c
    return AffineForm(registry, c)
