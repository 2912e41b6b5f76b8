"""Hot loops: batched determinants of integer matrix polynomials, a cheap
necessary test for cyclotomic determinants, and echelon form mod p.

Each kernel has a numba version and a pure numpy version. Setting
``CYGROWTH_DISABLE_NUMBA=1`` selects numpy (as does a missing numba).
"""
import os
from itertools import permutations
from math import comb

import numpy as np

_DISABLED = os.environ.get("CYGROWTH_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _perm_table(n):
    perms = list(permutations(range(n)))
    signs = []
    for p in perms:
        s, seen = 1, [False] * n
        for i in range(n):
            if not seen[i]:
                j, c = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = p[j]
                    c += 1
                if c % 2 == 0:
                    s = -s
        signs.append(s)
    return np.array(perms, dtype=np.int64), np.array(signs, dtype=np.int64)


def _binom_row(deg):
    return np.array([comb(deg, k) for k in range(deg + 1)], dtype=np.int64)


# -- numpy -------------------------------------------------------------------
def batch_det_poly_numpy(coeffs):
    """coeffs[b, k, i, j] = coefficient of t^k in entry (i, j); returns det coefficients."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    B, K, n, _ = coeffs.shape
    L = n * (K - 1) + 1
    out = np.zeros((B, L), dtype=np.int64)
    perms, signs = _perm_table(n)
    for p, s in zip(perms, signs):
        acc = np.zeros((B, L), dtype=np.int64)
        acc[:, 0] = s
        deg = 0
        for i in range(n):
            e = coeffs[:, :, i, p[i]]
            nxt = np.zeros((B, L), dtype=np.int64)
            for a in range(deg + 1):
                nxt[:, a:a + K] += acc[:, a:a + 1] * e
            acc = nxt
            deg += K - 1
        out += acc
    return out


def unit_circle_prefilter_numpy(dets):
    """Necessary conditions for +-(cyclotomic product): unit end coefficients, binomial bounds."""
    dets = np.asarray(dets, dtype=np.int64)
    B, L = dets.shape
    ok = np.zeros(B, dtype=np.bool_)
    nz = dets != 0
    has = nz.any(axis=1)
    top = np.where(has, L - 1 - np.argmax(nz[:, ::-1], axis=1), -1)
    for deg in np.unique(top):
        if deg < 0:
            continue
        rows = np.nonzero(top == deg)[0]
        d = dets[rows, : deg + 1]
        good = (np.abs(d[:, 0]) == 1) & (np.abs(d[:, deg]) == 1)
        good &= np.all(np.abs(d) <= _binom_row(int(deg)), axis=1)
        ok[rows] = good
    return ok


def echelon_mod_p_numpy(A, p):
    """Reduced row echelon form of an integer matrix over GF(p); returns (R, rank)."""
    R = np.mod(np.array(A, dtype=np.int64), p)
    rows, cols = R.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nzr = np.nonzero(R[r:, c])[0]
        if nzr.size == 0:
            continue
        piv = r + nzr[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), p - 2, p)
        R[r] = (R[r] * inv) % p
        f = R[:, c].copy()
        f[r] = 0
        mask = f != 0
        if mask.any():
            R[mask] = (R[mask] - np.outer(f[mask], R[r])) % p
        r += 1
    return R, r


# -- numba -------------------------------------------------------------------
if HAVE_NUMBA:

    @njit(cache=True)
    def _batch_det_poly_nb(coeffs, perms, signs):
        B, K, n, _ = coeffs.shape
        L = n * (K - 1) + 1
        out = np.zeros((B, L), dtype=np.int64)
        acc = np.zeros(L, dtype=np.int64)
        nxt = np.zeros(L, dtype=np.int64)
        for b in range(B):
            for pi in range(perms.shape[0]):
                acc[:] = 0
                acc[0] = signs[pi]
                deg = 0
                for i in range(n):
                    j = perms[pi, i]
                    nxt[:] = 0
                    for a in range(deg + 1):
                        x = acc[a]
                        if x == 0:
                            continue
                        for k in range(K):
                            nxt[a + k] += x * coeffs[b, k, i, j]
                    acc[:] = nxt
                    deg += K - 1
                for k in range(L):
                    out[b, k] += acc[k]
        return out

    @njit(cache=True)
    def _prefilter_nb(dets, binoms):
        B, L = dets.shape
        ok = np.zeros(B, dtype=np.bool_)
        for b in range(B):
            deg = -1
            for k in range(L - 1, -1, -1):
                if dets[b, k] != 0:
                    deg = k
                    break
            if deg < 0 or abs(dets[b, 0]) != 1 or abs(dets[b, deg]) != 1:
                continue
            good = True
            for k in range(deg + 1):
                if abs(dets[b, k]) > binoms[deg, k]:
                    good = False
                    break
            ok[b] = good
        return ok

    @njit(cache=True)
    def _echelon_nb(R, p):
        rows, cols = R.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if R[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = R[r, j]
                    R[r, j] = R[piv, j]
                    R[piv, j] = tmp
            # modular inverse by Fermat
            inv, base, e = 1, R[r, c], p - 2
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for j in range(cols):
                R[r, j] = (R[r, j] * inv) % p
            for i in range(rows):
                if i != r and R[i, c] != 0:
                    f = R[i, c]
                    for j in range(cols):
                        R[i, j] = (R[i, j] - f * R[r, j]) % p
            r += 1
        return r


def _binom_table(L):
    t = np.zeros((L, L), dtype=np.int64)
    for d in range(L):
        t[d, : d + 1] = _binom_row(d)
    return t


def batch_det_poly(coeffs, backend=None):
    backend = backend or BACKEND
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    if backend == "numba":
        perms, signs = _perm_table(coeffs.shape[2])
        return _batch_det_poly_nb(coeffs, perms, signs)
    return batch_det_poly_numpy(coeffs)


def unit_circle_prefilter(dets, backend=None):
    backend = backend or BACKEND
    dets = np.ascontiguousarray(dets, dtype=np.int64)
    if backend == "numba":
        return _prefilter_nb(dets, _binom_table(dets.shape[1]))
    return unit_circle_prefilter_numpy(dets)


def echelon_mod_p(A, p, backend=None):
    """Reduced echelon form over GF(p) for a prime p < 2^31; returns (R, rank)."""
    if not 2 <= p < 2 ** 31:
        raise ValueError("modulus must be a prime below 2^31")
    backend = backend or BACKEND
    if backend == "numba":
        R = np.mod(np.array(A, dtype=np.int64), p)
        if R.ndim != 2 or R.size == 0:
            return R, 0
        r = _echelon_nb(R, p)
        return R, r
    return echelon_mod_p_numpy(A, p)
