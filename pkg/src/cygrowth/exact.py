"""Dense exact linear algebra over the rationals.

Small helpers shared by the series and oracle code. Matrices are lists of
lists of ``int`` / ``Fraction``; nothing here touches floating point.
"""
from fractions import Fraction


def as_number(x):
    """Collapse an integral Fraction to int."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def matmul(a, b):
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = [0] * cols
        for k in range(inner):
            x = row[k]
            if x == 0:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j] != 0:
                    new[j] += x * bk[j]
        out.append(new)
    return out


def rref(mat):
    """Reduced row echelon form over Q.

    Returns ``(rows, pivots)`` where ``rows`` holds only the nonzero rows.
    Pivoting picks the lowest-index column, so output is deterministic.
    """
    m = [[Fraction(x) for x in row] for row in mat]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(mat):
    return len(rref(mat)[1])


def nullspace(mat, ncols=None):
    """Basis of the right kernel ``{v : mat v = 0}`` as lists of Fractions."""
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    rows, pivots = rref(mat) if mat else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def inverse(mat):
    """Exact inverse, or ``None`` when singular."""
    n = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        return None
    return [[as_number(x) for x in row[n:]] for row in rows]


def integer_det(mat):
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def primitive_integer_vector(v):
    """Scale a rational vector to a primitive integer vector (sign preserved)."""
    from math import gcd, lcm

    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]
