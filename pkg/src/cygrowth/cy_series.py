"""The matrix polynomial q(t) of a twisted Calabi-Yau datum and its spectral criteria.

h_A(t) = q(t)^{-1}, where

* dimension 1: q = I - N(t)
* dimension 2: q = I - N(t) + P t^L
* dimension 3: q = I - N(t) + P t^L N(1/t)^T - P t^L
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .errors import CompatibilityError, InvalidCYDatum, InvalidDimOneQuiver, InvalidQuiver, NonUnimodular
from .growth import GrowthClass, classify_algebra
from .polyalg import MatPoly, det, render_poly
from .quiver import CYDatum, WeightedQuiver, incidence, is_connected, validate_quiver

TOL = 1e-8


@dataclass(frozen=True)
class CYSeriesModel:
    quiver: WeightedQuiver
    cy: CYDatum
    q: MatPoly

    @property
    def d(self):
        return self.cy.dimension

    @property
    def N(self):
        return incidence(self.quiver).N

    @property
    def M(self):
        return [list(r) for r in incidence(self.quiver).M]

    def with_datum(self, cy: CYDatum) -> "CYSeriesModel":
        """Same q(t) paired with another datum (used to probe the identities)."""
        return CYSeriesModel(self.quiver, cy, self.q)


def assemble_q(N: MatPoly, cy: CYDatum) -> MatPoly:
    """q(t) from the formulas above, without any validation."""
    n = N.n
    I = MatPoly.identity(n)
    PtL = cy.nakayama_monomial()
    if cy.dimension == 1:
        return I - N
    if cy.dimension == 2:
        return I - N + PtL
    if cy.dimension == 3:
        return I - N + PtL * N.substitute_inverse_t().T - PtL
    raise InvalidCYDatum(f"dimension must be 1, 2 or 3, got {cy.dimension}")


def _first_mismatch(a: MatPoly, b: MatPoly):
    for i in range(a.n):
        for j in range(a.n):
            if a[i, j] != b[i, j]:
                return (i + 1, j + 1, render_poly(a[i, j]), render_poly(b[i, j]))
    return None


def _dim_one_check(quiver: WeightedQuiver):
    """A disjoint union of directed cycles, each with a positive-weight arrow."""
    for v in quiver.vertices:
        outs, ins = len(quiver.arrows_from(v)), len(quiver.arrows_to(v))
        if outs != 1 or ins != 1:
            raise InvalidDimOneQuiver(
                f"vertex {v} has {outs} outgoing and {ins} incoming arrows; "
                "a dimension-1 quiver must be a disjoint union of directed cycles")
    seen = set()
    for v in quiver.vertices:
        if v in seen:
            continue
        cycle, w = [], v
        while w not in seen:
            seen.add(w)
            a = quiver.arrows_from(w)[0]
            cycle.append(a)
            w = a.target
        if all(a.weight == 0 for a in cycle):
            raise InvalidDimOneQuiver(
                f"the cycle through vertex {v} has no arrow of positive weight")


def dim_one_datum(quiver: WeightedQuiver) -> CYDatum:
    """The datum forced on a union of directed cycles: mu follows the arrows, ell is the incoming weight."""
    _dim_one_check(quiver)
    mu = [0] * quiver.n_vertices
    ell = [0] * quiver.n_vertices
    for a in quiver.arrows:
        mu[a.source - 1] = a.target
        ell[a.target - 1] = a.weight
    return CYDatum(tuple(mu), tuple(ell), 1)


def build_q(quiver: WeightedQuiver, cy: CYDatum) -> CYSeriesModel:
    """Validate (quiver, datum) and assemble q(t).

    Raises InvalidQuiver / InvalidCYDatum (with subclasses for the
    dimension-1 shape and for incidence data that is incompatible with the
    datum) and NonUnimodular when det q(0) is not +-1.
    """
    diag = validate_quiver(quiver)
    if diag:
        raise InvalidQuiver("; ".join(diag))
    diag = cy.diagnostics(quiver)
    if diag:
        raise InvalidCYDatum("; ".join(diag))
    N = incidence(quiver).N
    PtL = cy.nakayama_monomial()
    if cy.dimension == 1:
        _dim_one_check(quiver)
        w = _first_mismatch(N, PtL)
        if w:
            raise CompatibilityError(
                f"dimension 1 needs N(t) = P t^L; entry ({w[0]},{w[1]}) is {w[2]} vs {w[3]}", w)
    else:
        zero = [a.id for a in quiver.arrows if a.weight == 0]
        if zero:
            raise InvalidCYDatum(
                f"arrows of weight 0 are not supported in dimension {cy.dimension}: {zero}")
        if cy.dimension == 2:
            rhs = PtL * N.substitute_inverse_t().T
            w = _first_mismatch(N, rhs)
            if w:
                raise CompatibilityError(
                    f"dimension 2 needs N(t) = P t^L N(1/t)^T; entry ({w[0]},{w[1]}) is {w[2]} vs {w[3]}", w)
        else:
            w = _first_mismatch(N * PtL, PtL * N)
            if w:
                raise CompatibilityError(
                    f"dimension 3 needs N(t) to commute with P t^L; entry ({w[0]},{w[1]}) "
                    f"of N P t^L is {w[2]} but of P t^L N is {w[3]}", w)
    q = assemble_q(N, cy)
    if not q.is_polynomial():
        raise InvalidCYDatum("q(t) has negative powers of t: some arrow weight exceeds ell")
    d0 = det(q).coeff(0)
    if abs(d0) != 1:
        raise NonUnimodular(f"det q(0) = {d0}, expected +-1")
    return CYSeriesModel(quiver, cy, q)


@dataclass
class IdentityCheck:
    functional_equation: bool
    commutes: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.functional_equation and self.commutes


def functional_equation_holds(q: MatPoly, cy: CYDatum) -> IdentityCheck:
    """q(t) = (-1)^d P t^L q(1/t)^T and q P t^L = P t^L q, exactly."""
    PtL = cy.nakayama_monomial()
    rhs = PtL * q.substitute_inverse_t().T
    if cy.dimension % 2:
        rhs = -rhs
    w = _first_mismatch(q, rhs)
    fe = w is None
    wc = _first_mismatch(q * PtL, PtL * q)
    witness = None
    if w:
        witness = ("functional_equation",) + w
    elif wc:
        witness = ("commutation",) + wc
    return IdentityCheck(fe, wc is None, witness)


def verify_functional_equation(model: CYSeriesModel) -> IdentityCheck:
    return functional_equation_holds(model.q, model.cy)


# -- verdicts ----------------------------------------------------------------
class VerdictKind(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INAPPLICABLE = "Inapplicable"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    reason: str = ""

    def __str__(self):
        if self.kind is VerdictKind.INAPPLICABLE:
            return f"Inapplicable({self.reason})"
        return self.kind.value

    @classmethod
    def passed(cls, reason=""):
        return cls(VerdictKind.PASS, reason)

    @classmethod
    def failed(cls, reason=""):
        return cls(VerdictKind.FAIL, reason)

    @classmethod
    def inapplicable(cls, reason):
        return cls(VerdictKind.INAPPLICABLE, reason)


@dataclass
class SpectralReport:
    spectral_radius: float | None
    eigenvalues: list
    is_normal: bool
    perron_vector: list | None
    criterion_verdict: Verdict
    tolerance: float = TOL
    pairs: list = field(default_factory=list)  # (delta, zeta, inside)
    expected_rho: int | None = None
    expected_gk: int | None = None
    exact_class: GrowthClass | None = None
    exact_gk: int | None = None
    caveats: list = field(default_factory=list)

    def to_json(self):
        c = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        return {
            "spectral_radius": self.spectral_radius,
            "eigenvalues": [c(z) for z in self.eigenvalues],
            "is_normal": self.is_normal,
            "perron_vector": self.perron_vector,
            "verdict": str(self.criterion_verdict),
            "tolerance": self.tolerance,
            "pairs": [{"delta": c(d), "zeta": c(z), "inside": ok} for d, z, ok in self.pairs],
            "expected_rho": self.expected_rho,
            "expected_gk": self.expected_gk,
            "exact_class": str(self.exact_class) if self.exact_class else None,
            "exact_gk": self.exact_gk,
            "caveats": self.caveats,
        }


def is_normal(M) -> bool:
    Mt = [list(r) for r in zip(*M)]
    return exact.matmul(M, Mt) == exact.matmul(Mt, M)


def _eigs(M):
    return [complex(z) for z in np.linalg.eigvals(np.array(M, dtype=float))]


def _positive_kernel_vector(M, lam):
    n = len(M)
    A = [[M[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    basis = exact.nullspace(A, n)
    if len(basis) != 1:
        return None
    v = exact.primitive_integer_vector(basis[0])
    if all(x < 0 for x in v):
        v = [-x for x in v]
    return v if all(x > 0 for x in v) else None


def dim2_spectral_criterion(model: CYSeriesModel, tol: float = TOL) -> SpectralReport:
    """Finite growth of a dimension-2 algebra with weight-1 arrows iff rho(M) = 2."""
    M = model.M
    normal = is_normal(M)
    reason = None
    if model.d != 2:
        reason = f"needs dimension 2, got {model.d}"
    elif not model.quiver.all_weight_one():
        reason = "needs all arrow weights equal to 1"
    elif not is_connected(model.quiver):
        reason = "needs a connected quiver"
    if reason:
        return SpectralReport(None, [], normal, None, Verdict.inapplicable(reason), tol)
    eig = _eigs(M)
    rho = max(abs(z) for z in eig)
    perron = _positive_kernel_vector(M, 2)
    rep = classify_algebra(model.q)
    if perron is not None and rho <= 2 + tol:
        verdict = Verdict.passed("rho(M) = 2 with a positive eigenvector")
    elif rho > 2 + tol:
        verdict = Verdict.failed(f"rho(M) = {rho:.6g} > 2, exponential growth expected")
    else:
        verdict = Verdict.failed(f"rho(M) = {rho:.6g} but 2 has no positive eigenvector")
    out = SpectralReport(rho, eig, normal, perron, verdict, tol, expected_gk=2 if perron else None,
                         exact_class=rep.growth_class, exact_gk=rep.gk_dimension)
    if (verdict.kind is VerdictKind.PASS) != (rep.growth_class is GrowthClass.FINITE_GK):
        out.caveats.append("spectral verdict disagrees with the exact det q classification")
    return out


# -- hypocycloids ------------------------------------------------------------
def hypocycloid_point(k: int, theta: float, scale: float = 1.0) -> complex:
    return scale * ((k - 1) * cmath.exp(1j * theta) + cmath.exp(-1j * (k - 1) * theta))


def hypocycloid_boundary(k: int, samples: int, scale: float = 1.0):
    """``samples`` points of (k-1)e^{i theta} + e^{-i(k-1) theta}, theta uniform on [0, 2 pi)."""
    if k not in (3, 4):
        raise ValueError("k must be 3 or 4")
    if samples < 3:
        raise ValueError("samples must be at least 3")
    return [hypocycloid_point(k, 2 * math.pi * s / samples, scale) for s in range(samples)]


def _deltoid_value(a: complex) -> float:
    # <= 0 exactly on the closed deltoid bounded by 2e^{i t} + e^{-2i t}
    r2 = abs(a) ** 2
    return r2 * r2 + 18 * r2 - 8 * (a ** 3).real - 27


def _half_astroid_value(a: complex) -> float:
    # <= 0 exactly on the closed astroid with cusps at +-2, +-2i
    return abs(a.real) ** (2 / 3) + abs(a.imag) ** (2 / 3) - 2 ** (2 / 3)


def hypocycloid_contains(a: complex, k: int, zeta: complex = 1, tol: float = TOL) -> bool:
    """Is ``a`` in the region of the dimension-3 criterion for AS-index k?

    k = 3: a in (cube root of zeta) * deltoid; k = 4: a in (fourth root of
    zeta)/2 * astroid. Equivalently every root of 1 - a'x + conj(a')x^(k-1) - x^k
    with a' = a * conj(root of zeta) lies on the unit circle. Decided with the
    implicit equations of the curves, so the cusps and tangencies where roots
    collide are handled without root finding. Boundary points count as inside.
    """
    if abs(abs(zeta) - 1) > 1e-12:
        raise ValueError(f"zeta must lie on the unit circle, |zeta| = {abs(zeta)}")
    if k not in (3, 4):
        raise ValueError("k must be 3 or 4")
    root = cmath.exp(1j * cmath.phase(zeta) / k)
    b = complex(a) * root.conjugate()
    if k == 3:
        return _deltoid_value(b) <= tol * (1 + abs(b) ** 4)
    return _half_astroid_value(b) <= tol * 10


def criterion_polynomial(a: complex, k: int, zeta: complex = 1):
    """Coefficients (ascending) of 1 - a'x + conj(a')x^(k-1) - x^k."""
    b = complex(a) * cmath.exp(1j * cmath.phase(zeta) / k).conjugate()
    c = [0j] * (k + 1)
    c[0], c[1], c[k - 1], c[k] = 1, -b, b.conjugate(), -1
    return c


def roots_on_unit_circle(coeffs, tol: float = TOL) -> bool:
    """Numeric companion-matrix test (no multiplicity handling)."""
    roots = np.roots(list(coeffs)[::-1])
    return bool(np.all(np.abs(np.abs(roots) - 1) <= tol))


# -- dimension 3 -------------------------------------------------------------
def _mu_cycles(mu):
    seen, out = set(), []
    for s in range(1, len(mu) + 1):
        if s in seen:
            continue
        cyc, v = [], s
        while v not in seen:
            seen.add(v)
            cyc.append(v)
            v = mu[v - 1]
        out.append(cyc)
    return out


def permutation_eigenbasis(mu):
    """Orthonormal eigenvectors of P (P_ij = [mu(i) = j]) grouped by eigenvalue.

    Returns ``{Fraction(k, m): columns}`` where the eigenvalue is
    exp(2 pi i k/m); grouping is exact.
    """
    n = len(mu)
    groups = {}
    for cyc in _mu_cycles(mu):
        c = len(cyc)
        for k in range(c):
            key = Fraction(k, c)
            w = cmath.exp(2j * math.pi * key)
            v = np.zeros(n, dtype=complex)
            for idx, vert in enumerate(cyc):
                v[vert - 1] = w ** idx / math.sqrt(c)
            groups.setdefault(key, []).append(v)
    return {key: np.column_stack(vs) for key, vs in sorted(groups.items())}


def joint_eigenpairs(M, mu, tol: float = TOL):
    """Simultaneous eigenpairs (delta, zeta) of commuting M and P."""
    Mf = np.array(M, dtype=complex)
    n = len(mu)
    P = np.array(CYDatum(mu, [0] * n, 3).permutation_matrix(), dtype=complex)
    pairs = []
    for key, B in permutation_eigenbasis(mu).items():
        zeta = cmath.exp(2j * math.pi * key)
        small = B.conj().T @ Mf @ B
        vals, vecs = np.linalg.eig(small)
        for lam, v in zip(vals, vecs.T):
            x = B @ v
            x = x / np.linalg.norm(x)
            res = max(np.linalg.norm(Mf @ x - lam * x), np.linalg.norm(P @ x - zeta * x))
            if res > tol:
                raise ArithmeticError(f"joint eigenpair residual {res:.3g} exceeds {tol}")
            pairs.append((complex(lam), zeta))
    return pairs


def dim3_normal_criterion(model: CYSeriesModel, tol: float = TOL) -> SpectralReport:
    """Eigenvalue criterion for dimension 3 with weight-1 arrows and normal M."""
    M = model.M
    normal = is_normal(M)
    reason = None
    ell = set(model.cy.ell)
    P = model.cy.permutation_matrix()
    if model.d != 3:
        reason = f"needs dimension 3, got {model.d}"
    elif not model.quiver.all_weight_one():
        reason = "needs all arrow weights equal to 1"
    elif len(ell) != 1:
        reason = "needs a uniform ell"
    elif not normal:
        reason = "NotNormal: M does not commute with its transpose"
    elif exact.matmul(P, M) != exact.matmul(M, P):
        reason = "NonCommuting: P does not commute with M"
    if reason:
        return SpectralReport(None, [], normal, None, Verdict.inapplicable(reason), tol)
    (l,) = ell
    rep = classify_algebra(model.q)
    eig = _eigs(M)
    rho = max((abs(z) for z in eig), default=0.0)
    caveats = ["the eigenvalue criterion presumes GK-dimension at least 3"]
    pairs = []
    if l >= 5:
        if rep.growth_class is GrowthClass.EXPONENTIAL:
            verdict = Verdict.failed("ell >= 5 forces infinite GK-dimension")
        else:
            verdict = Verdict.inapplicable(
                f"ell >= 5 rule needs GK-dimension >= 3 but det q gives GK-dimension {rep.gk_dimension}")
    elif l in (3, 4):
        pairs = [(dl, z, hypocycloid_contains(dl, l, z, tol)) for dl, z in joint_eigenpairs(M, model.cy.mu, tol)]
        bad = [p for p in pairs if not p[2]]
        if bad:
            dl = bad[0][0]
            verdict = Verdict.failed(f"eigenvalue {dl.real:.6g}{dl.imag:+.6g}i lies outside the region")
        else:
            verdict = Verdict.passed("every joint eigenvalue lies in the hypocycloid region")
    else:
        verdict = Verdict.inapplicable(f"ell = {l} < 3")
    out = SpectralReport(rho, eig, normal, None, verdict, tol, pairs=pairs,
                         exact_class=rep.growth_class, exact_gk=rep.gk_dimension, caveats=caveats)
    if verdict.kind is VerdictKind.PASS:
        out.expected_rho = 6 - l
        out.expected_gk = 3
        if rep.gk_dimension != 3:
            caveats.append(f"GK-dimension is {rep.gk_dimension}, so rho = 6 - ell need not hold")
    agree = {VerdictKind.PASS: GrowthClass.FINITE_GK, VerdictKind.FAIL: GrowthClass.EXPONENTIAL}
    want = agree.get(verdict.kind)
    if want is not None and want is not rep.growth_class:
        caveats.append("criterion verdict disagrees with the exact det q classification (exact side wins)")
    return out
