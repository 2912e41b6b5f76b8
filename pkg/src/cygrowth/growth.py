"""Growth classification of rational matrix Hilbert series.

The finite-GK decision is exact: an integer polynomial has every root a
root of unity iff it is +-(t^k) times a product of cyclotomic polynomials.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, NonUnimodularConstantTerm, ZeroPolynomial
from .polyalg import (LaurentPoly, MatPoly, RatFun, adjugate, det, multiplicity_eps,
                      poly, poly_gcd, render_poly, split_one_minus_t, valuation_at_one)


class GrowthClass(enum.Enum):
    FINITE_GK = "FiniteGK"
    EXPONENTIAL = "Exponential"

    def __str__(self):
        return self.value


# -- cyclotomic machinery (integer coefficient lists, ascending) -------------
def _divmod_monic(p, d):
    """Divide integer list p by monic integer list d."""
    p = list(p)
    dd = len(d) - 1
    if len(p) - 1 < dd:
        return [], p
    q = [0] * (len(p) - dd)
    for k in range(len(p) - 1, dd - 1, -1):
        c = p[k]
        if c:
            q[k - dd] = c
            for i, di in enumerate(d):
                p[k - dd + i] -= c * di
    rem = p[:dd]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple:
    """Coefficients of Phi_n, ascending, via Phi_n = (t^n - 1) / prod_{d|n, d<n} Phi_d."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _divmod_monic(num, cyclotomic(d))
            assert not rem
    return tuple(num)


def cyclotomic_poly(n: int) -> LaurentPoly:
    return poly(cyclotomic(n))


@dataclass
class CyclotomicFactorization:
    factors: list  # [(n, multiplicity)], ascending n
    remainder: LaurentPoly
    t_power: int = 0

    @property
    def is_cyclotomic(self):
        return self.remainder.degree == 0 and abs(self.remainder.coeff(0)) == 1

    def multiplicity(self, n):
        return dict(self.factors).get(n, 0)

    def render(self):
        parts = []
        if self.t_power:
            parts.append("t" if self.t_power == 1 else f"t^{self.t_power}")
        for n, m in self.factors:
            parts.append(f"Phi_{n}" + (f"^{m}" if m > 1 else ""))
        rem = self.remainder
        if rem.degree == 0 and rem.coeff(0) == 1:
            pass
        elif rem.degree == 0 and rem.coeff(0) == -1:
            parts.insert(0, "-1")
        else:
            parts.append(f"({render_poly(rem)})")
        return " * ".join(parts) if parts else "1"


def cyclotomic_factorization(p: LaurentPoly) -> CyclotomicFactorization:
    """Divide out every cyclotomic factor of an integer (Laurent) polynomial."""
    if p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if not p.is_integral():
        raise ValueError("cyclotomic factorization needs integer coefficients")
    low = p.low_degree
    coeffs = p.shift(-low).coefficient_list()
    deg = len(coeffs) - 1
    factors = []
    bound = 2 * deg * deg
    for n in range(1, bound + 1):
        if len(coeffs) - 1 <= 0:
            break
        if euler_phi(n) > len(coeffs) - 1:
            continue
        phi = cyclotomic(n)
        m = 0
        while len(coeffs) - 1 >= len(phi) - 1:
            q, rem = _divmod_monic(coeffs, phi)
            if rem:
                break
            coeffs = q
            m += 1
        if m:
            factors.append((n, m))
    return CyclotomicFactorization(factors, poly(coeffs), t_power=low)


def all_roots_are_roots_of_unity(p: LaurentPoly):
    """Exact test that every nonzero root of p is a root of unity.

    Returns ``(verdict, factorization)``. A non-unit leading or constant
    coefficient already rules it out (Kronecker), but the factorization is
    still computed as evidence.
    """
    fac = cyclotomic_factorization(p)
    return fac.is_cyclotomic, fac


# -- numeric cross-check -----------------------------------------------------
def squarefree_part(p: LaurentPoly) -> LaurentPoly:
    low = p.low_degree
    q = p.shift(-low)
    g = poly_gcd(q, q.derivative())
    if g.degree:
        q, _ = q.divmod(g)
    return q


def numeric_roots_on_unit_circle(p: LaurentPoly, tol: float = 1e-8):
    """Floating-point oracle: companion-matrix roots of the squarefree part.

    Multiple roots are removed first (exactly) because clustered eigenvalues
    of a multiplicity-m root scatter by ~eps^(1/m), far beyond ``tol``.
    Returns ``(verdict, max_deviation)``.
    """
    q = squarefree_part(p)
    c = [float(x) for x in q.coefficient_list()]
    while c and c[0] == 0:
        c.pop(0)
    if len(c) <= 1:
        return True, 0.0
    roots = np.roots(c[::-1])
    dev = float(np.max(np.abs(np.abs(roots) - 1.0)))
    return dev <= tol, dev


# -- reports -----------------------------------------------------------------
@dataclass
class GrowthReport:
    growth_class: GrowthClass
    gk_dimension: int | None
    det_q: LaurentPoly
    factorization: CyclotomicFactorization
    eps_det: Fraction | int
    per_entry_pole_orders: list
    entries: list = field(default_factory=list, repr=False)

    @property
    def cyclotomic_factorization(self):
        return self.factorization.factors

    def to_json(self):
        return {
            "growth_class": str(self.growth_class),
            "gk_dimension": self.gk_dimension,
            "det_q": render_poly(self.det_q),
            "cyclotomic_factors": [[n, m] for n, m in self.factorization.factors],
            "remainder": render_poly(self.factorization.remainder),
            "eps_det": str(self.eps_det),
            "per_entry_pole_orders": self.per_entry_pole_orders,
        }


def _check_unimodular(d: LaurentPoly):
    if d.is_zero() or d.low_degree != 0 or abs(d.coeff(0)) != 1:
        raise NonUnimodularConstantTerm(
            f"det q(0) must be +-1, got det q = {render_poly(d)}")


def classify_algebra(q: MatPoly) -> GrowthReport:
    """Growth class and GK-dimension of the algebra with matrix Hilbert series q^{-1}.

    GK-dimension is the largest pole order at t = 1 over the reduced entries
    of adj(q)/det(q); it can be smaller than the order of vanishing of det q.
    """
    d = det(q)
    _check_unimodular(d)
    ok, fac = all_roots_are_roots_of_unity(d)
    adj = adjugate(q)
    entries = [[RatFun(adj[i, j], d) for j in range(q.n)] for i in range(q.n)]
    orders = [[valuation_at_one(r) for r in row] for row in entries]
    gk = None
    if ok:
        gk = max((o for row, er in zip(orders, entries) for o, r in zip(row, er) if not r.is_zero()),
                 default=0)
    return GrowthReport(
        growth_class=GrowthClass.FINITE_GK if ok else GrowthClass.EXPONENTIAL,
        gk_dimension=gk,
        det_q=d,
        factorization=fac,
        eps_det=multiplicity_eps(d),
        per_entry_pole_orders=orders,
        entries=entries,
    )


def total_series(q: MatPoly) -> RatFun:
    """Sum of all entries of q^{-1}, reduced."""
    d = det(q)
    adj = adjugate(q)
    s = LaurentPoly()
    for row in adj.entries:
        for a in row:
            s = s + a
    return RatFun(s, d)


@dataclass(frozen=True)
class ModuleSeriesSpec:
    """Vector Hilbert series q(t)^{-1} v(t)."""

    q: MatPoly
    v: tuple

    def __post_init__(self):
        if len(self.v) != self.q.n:
            raise DimensionMismatch(f"v has length {len(self.v)}, q is {self.q.n}x{self.q.n}")
        object.__setattr__(self, "v", tuple(LaurentPoly.const(x) if not isinstance(x, LaurentPoly) else x
                                            for x in self.v))

    def coordinates(self):
        d = det(self.q)
        adj = adjugate(self.q)
        out = []
        for i in range(self.q.n):
            s = LaurentPoly()
            for j in range(self.q.n):
                s = s + adj[i, j] * self.v[j]
            out.append(RatFun(s, d))
        return out


def module_growth(spec: ModuleSeriesSpec):
    """``(gk, eps)`` of a module with vector series q^{-1} v; gk is None when exponential."""
    d = det(spec.q)
    _check_unimodular(d)
    coords = [r for r in spec.coordinates() if not r.is_zero()]
    if not coords:
        raise ValueError("module series is zero")
    finite = all(all_roots_are_roots_of_unity(r.denominator)[0] for r in coords)
    gk = max(valuation_at_one(r) for r in coords) if finite else None
    total = RatFun(0)
    for r in coords:
        total = total + r
    return gk, multiplicity_eps(total)


def eps_additivity_check(a: RatFun, b: RatFun) -> bool:
    """eps(a + b) == eps(a) + eps(b) for finite-GK series of equal GK-dimension."""
    da, db = valuation_at_one(a), valuation_at_one(b)
    if da != db:
        raise DimensionMismatch(f"pole orders differ: {da} vs {db}")
    return multiplicity_eps(a + b) == multiplicity_eps(a) + multiplicity_eps(b)


def order_of_vanishing_at_one(p: LaurentPoly) -> int:
    return split_one_minus_t(p)[0]


__all__ = [
    "GrowthClass", "GrowthReport", "ModuleSeriesSpec", "CyclotomicFactorization",
    "all_roots_are_roots_of_unity", "classify_algebra", "cyclotomic", "cyclotomic_poly",
    "cyclotomic_factorization", "euler_phi", "eps_additivity_check", "module_growth",
    "numeric_roots_on_unit_circle", "order_of_vanishing_at_one", "squarefree_part", "total_series",
]

