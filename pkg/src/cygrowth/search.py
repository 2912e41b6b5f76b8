"""Enumerate small weight-1 quivers whose twisted CY series has finite growth.

For every strongly connected quiver (up to isomorphism), every Nakayama
permutation compatible with the incidence matrix, and every uniform
AS-index in range, det q(t) is computed in bulk, screened by a cheap
necessary condition and then decided exactly.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import _kernels
from .errors import BoundsTooLarge
from .growth import all_roots_are_roots_of_unity, classify_algebra
from .polyalg import MatPoly, invert_as_series, poly, render_poly

MAX_VERTICES = 4
MAX_MULT = 6
MAX_RAW = 20_000_000


@dataclass(frozen=True)
class SearchHit:
    M: tuple
    mu: tuple
    ell: int
    dimension: int
    det: str
    factorization: str
    gk: int | None

    def to_json(self):
        return {"M": [list(r) for r in self.M], "mu": list(self.mu), "ell": self.ell,
                "dimension": self.dimension, "det_q": self.det,
                "factorization": self.factorization, "gk_dimension": self.gk}


def _encode(mats, base):
    B, n, _ = mats.shape
    flat = mats.reshape(B, n * n).astype(np.int64)
    weights = base ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    return flat @ weights


def all_matrices(n, max_mult):
    """Every n x n matrix with entries 0..max_mult, shape (B, n, n)."""
    raw = (max_mult + 1) ** (n * n)
    if raw > MAX_RAW:
        raise BoundsTooLarge(f"{raw} raw {n}x{n} matrices exceed the cap of {MAX_RAW}")
    idx = np.arange(raw, dtype=np.int64)
    digits = np.empty((raw, n * n), dtype=np.int64)
    for k in range(n * n - 1, -1, -1):
        digits[:, k] = idx % (max_mult + 1)
        idx //= max_mult + 1
    return digits.reshape(raw, n, n)


def canonical_representatives(mats, max_mult):
    """Keep the matrices whose base-(m+1) code is minimal over simultaneous row/column relabelings."""
    n = mats.shape[1]
    base = max_mult + 1
    own = _encode(mats, base)
    best = own.copy()
    for p in permutations(range(n)):
        p = list(p)
        best = np.minimum(best, _encode(mats[:, p][:, :, p], base))
    return mats[own == best]


def strongly_connected_mask(mats):
    B, n, _ = mats.shape
    A = (mats > 0).astype(np.int64)
    R = A | np.eye(n, dtype=np.int64)[None]
    for _ in range(n):
        R = ((R @ R) > 0).astype(np.int64)
    return R.reshape(B, -1).all(axis=1) & A.reshape(B, -1).any(axis=1)


def _perm_matrix(mu):
    n = len(mu)
    P = np.zeros((n, n), dtype=np.int64)
    for i, m in enumerate(mu):
        P[i, m - 1] = 1
    return P


def compatible(M, P, dimension):
    if dimension == 1:
        return np.array_equal(M, P)
    if dimension == 2:
        return np.array_equal(M, P @ M.T)
    return np.array_equal(P @ M, M @ P)


def automorphisms(M):
    n = len(M)
    return [p for p in permutations(range(n)) if np.array_equal(M[list(p)][:, list(p)], M)]


def _orbit_minimal(mu, autos):
    """Is mu the smallest of its conjugates under the automorphisms of the quiver?"""
    for g in autos:
        inv = [0] * len(g)
        for i, x in enumerate(g):
            inv[x] = i
        # relabel vertex i as old vertex g[i]: mu'(i) = g^{-1}(mu(g(i)))
        conj = tuple(inv[mu[g[i]] - 1] + 1 for i in range(len(g)))
        if conj < mu:
            return False
    return True


def q_coefficients(M, P, ell, dimension):
    """Integer coefficient stack of q(t) for weight-1 arrows and uniform ell, shape (K, n, n)."""
    n = len(M)
    K = max(ell, 1) + 1
    c = np.zeros((K, n, n), dtype=np.int64)
    c[0] += np.eye(n, dtype=np.int64)
    if dimension == 1:
        c[ell] -= P
        return c
    c[1] -= M
    if dimension == 2:
        c[ell] += P
    else:
        c[ell - 1] += P @ M.T
        c[ell] -= P
    return c


def _candidates(n, max_mult, dimension, ells):
    mats = all_matrices(n, max_mult)
    mats = mats[strongly_connected_mask(mats)]
    mats = canonical_representatives(mats, max_mult)
    perms = [tuple(p + 1 for p in perm) for perm in permutations(range(n))]
    out = []
    for M in mats:
        autos = automorphisms(M)
        for mu in perms:
            P = _perm_matrix(mu)
            if compatible(M, P, dimension) and _orbit_minimal(mu, autos):
                for ell in ells:
                    out.append((M, mu, ell))
    return out


def series_nonnegative(q: MatPoly, D: int) -> bool:
    """No negative coefficient in q^{-1} up to t^D (a Hilbert series cannot have one)."""
    s = invert_as_series(q, D)
    return all(x >= 0 for H in s.coeffs for row in H for x in row)


def _classify(task):
    n, max_mult, dimension, ells, backend, require_positive = task
    cands = _candidates(n, max_mult, dimension, ells)
    hits = []
    for ell in ells:
        group = [(M, mu) for M, mu, e in cands if e == ell]
        if not group:
            continue
        coeffs = np.stack([q_coefficients(M, _perm_matrix(mu), ell, dimension) for M, mu in group])
        dets = _kernels.batch_det_poly(coeffs, backend)
        keep = _kernels.unit_circle_prefilter(dets, backend)
        for k in np.nonzero(keep)[0]:
            M, mu = group[k]
            d = poly([int(x) for x in dets[k]])
            ok, fac = all_roots_are_roots_of_unity(d)
            if not ok:
                continue
            q = MatPoly.from_coefficients([c.tolist() for c in q_coefficients(M, _perm_matrix(mu), ell, dimension)])
            if require_positive and not series_nonnegative(q, 4 * d.degree + 8):
                continue
            rep = classify_algebra(q)
            hits.append(SearchHit(tuple(tuple(int(x) for x in r) for r in M), mu, ell, dimension,
                                  render_poly(d), fac.render(), rep.gk_dimension))
    return hits


def _workers():
    env = os.environ.get("CYGROWTH_THREADS")
    if env:
        return max(1, int(env))
    return 1


def search(dimension, max_vertices, max_mult, ell_min, ell_max, workers=None, backend=None,
           require_positive=True):
    """Quivers (M, mu, ell) with det q(0) = +-1 and cyclotomic det q, sorted canonically.

    With ``require_positive`` a candidate is also dropped when q^{-1} shows a
    negative coefficient within a few multiples of deg det q.
    """
    if dimension not in (1, 2, 3):
        raise ValueError("dimension must be 1, 2 or 3")
    if min(max_vertices, max_mult, ell_min, ell_max) < 1 or ell_min > ell_max:
        raise ValueError("bounds must be at least 1 and ell_min <= ell_max")
    if max_vertices > MAX_VERTICES or max_mult > MAX_MULT:
        raise BoundsTooLarge(f"search is limited to {MAX_VERTICES} vertices and multiplicity {MAX_MULT}")
    for n in range(1, max_vertices + 1):
        raw = (max_mult + 1) ** (n * n)
        if raw > MAX_RAW:
            raise BoundsTooLarge(f"{raw} raw {n}x{n} matrices exceed the cap of {MAX_RAW}")
    ells = list(range(ell_min, ell_max + 1))
    tasks = [(n, max_mult, dimension, ells, backend, require_positive) for n in range(1, max_vertices + 1)]
    workers = workers or _workers()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as ex:
            results = list(ex.map(_classify, tasks))
    else:
        results = [_classify(t) for t in tasks]
    hits = [h for r in results for h in r]
    hits.sort(key=lambda h: (len(h.M), h.M, h.mu, h.ell))
    return hits
