"""Exact Laurent polynomials, rational functions and matrix polynomials in t.

All coefficients are Python ints or ``fractions.Fraction``; integral
Fractions are collapsed to ints so that equality is structural.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .errors import SingularConstantTerm, ZeroDenominator
from .exact import as_number, identity, inverse, matmul


def _perm_sign(p):
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class LaurentPoly:
    """Finite-support map exponent -> coefficient. No stored zeros."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | Sequence | None = None):
        c = {}
        if coeffs is None:
            pass
        elif isinstance(coeffs, Mapping):
            for k, v in coeffs.items():
                if v != 0:
                    c[int(k)] = as_number(v)
        else:
            for k, v in enumerate(coeffs):
                if v != 0:
                    c[k] = as_number(v)
        self._c = c

    @classmethod
    def _raw(cls, c):
        obj = cls.__new__(cls)
        obj._c = c
        return obj

    @classmethod
    def monomial(cls, coeff=1, exp=0):
        return cls({exp: coeff})

    @classmethod
    def const(cls, c):
        return cls({0: c})

    # -- inspection --------------------------------------------------------
    def items(self):
        return sorted(self._c.items())

    def coeff(self, k):
        return self._c.get(k, 0)

    def is_zero(self):
        return not self._c

    @property
    def degree(self):
        return max(self._c) if self._c else None

    @property
    def low_degree(self):
        return min(self._c) if self._c else None

    def leading_coeff(self):
        return self._c[max(self._c)] if self._c else 0

    def is_polynomial(self):
        return not self._c or min(self._c) >= 0

    def is_integral(self):
        return all(isinstance(v, int) for v in self._c.values())

    def coefficient_list(self):
        """Ascending coefficients c0..cd (polynomials only)."""
        if not self._c:
            return []
        if min(self._c) < 0:
            raise ValueError("negative exponents present; not a polynomial")
        return [self._c.get(k, 0) for k in range(max(self._c) + 1)]

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s == 0:
                c.pop(k, None)
            else:
                c[k] = as_number(s)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly._raw({k: as_number(v * other) for k, v in self._c.items()})
        c = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return LaurentPoly({k: v for k, v in c.items()})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self._c) == 1:
                (k, v), = self._c.items()
                return LaurentPoly({k * e: Fraction(1) / Fraction(v) ** (-e)})
            raise ValueError("negative power of a non-monomial")
        out = LaurentPoly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: other} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __call__(self, x):
        if isinstance(x, int):
            x = Fraction(x)
        total = sum((v * x ** k for k, v in self._c.items()), 0)
        return as_number(total) if isinstance(total, Fraction) else total

    def shift(self, k):
        """Multiply by t^k."""
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def substitute_inverse_t(self):
        return LaurentPoly._raw({-k: v for k, v in self._c.items()})

    def derivative(self):
        return LaurentPoly({k - 1: k * v for k, v in self._c.items() if k != 0})

    def content(self):
        """Positive gcd of integer coefficients (rational: gcd of numerators / lcm of dens)."""
        from math import gcd, lcm

        num, den = 0, 1
        for v in self._c.values():
            f = Fraction(v)
            num = gcd(num, f.numerator)
            den = lcm(den, f.denominator)
        return Fraction(num, den) if self._c else Fraction(0)

    # -- division (polynomials over Q) -------------------------------------
    def divmod(self, other: "LaurentPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not (self.is_polynomial() and other.is_polynomial()):
            raise ValueError("divmod requires polynomials")
        rem = dict(self._c)
        dd = other.degree
        lc = Fraction(other.leading_coeff())
        quot = {}
        ocoef = other._c
        while rem and max(rem) >= dd:
            top = max(rem)
            f = as_number(Fraction(rem[top]) / lc)
            quot[top - dd] = f
            for k, v in ocoef.items():
                e = k + top - dd
                s = rem.get(e, 0) - f * v
                if s == 0:
                    rem.pop(e, None)
                else:
                    rem[e] = as_number(s)
        return LaurentPoly(quot), LaurentPoly(rem)

    def exact_div(self, other: "LaurentPoly"):
        """Exact division of Laurent polynomials; raises if not divisible."""
        a_low = self.low_degree or 0
        b_low = other.low_degree or 0
        q, r = self.shift(-a_low).divmod(other.shift(-b_low))
        if not r.is_zero():
            raise ArithmeticError("inexact Laurent polynomial division")
        return q.shift(a_low - b_low)

    def __repr__(self):
        return f"LaurentPoly({render_poly(self)!r})"

    def __str__(self):
        return render_poly(self)


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.const(x)


T = LaurentPoly.monomial(1, 1)
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()


def poly(coeffs: Iterable) -> LaurentPoly:
    """Polynomial from ascending coefficients."""
    return LaurentPoly(list(coeffs))


def _fmt_coeff(v):
    return str(v)


def render_poly(p: LaurentPoly, var: str = "t") -> str:
    """Render ascending as ``c0 + c1*t + c2*t^2 ...``."""
    if p.is_zero():
        return "0"
    parts = []
    for k, v in p.items():
        neg = v < 0
        a = -v if neg else v
        if k == 0:
            body = _fmt_coeff(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd over Q of two polynomials."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    if a.is_zero():
        return a
    return a * (Fraction(1) / Fraction(a.leading_coeff()))


ONE_MINUS_T = poly([1, -1])


def split_one_minus_t(p: LaurentPoly):
    """Write ``p = (1-t)^k * r`` with ``r(1) != 0``; returns ``(k, r)``."""
    if p.is_zero():
        raise ValueError("zero has infinite order at t=1")
    k = 0
    low = p.low_degree
    r = p.shift(-low)
    while r(1) == 0:
        r, rem = r.divmod(ONE_MINUS_T)
        assert rem.is_zero()
        k += 1
    return k, r.shift(low)


# ---------------------------------------------------------------------------
class RatFun:
    """Reduced rational function ``numerator / denominator``.

    The denominator is a polynomial with constant term 1; every power of t
    is carried by the (Laurent) numerator. Equality is structural.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=None):
        num = _coerce(numerator)
        den = ONE if denominator is None else _coerce(denominator)
        if den.is_zero():
            raise ZeroDenominator("denominator is zero")
        if num.is_zero():
            self.numerator, self.denominator = ZERO, ONE
            return
        # move t-powers of the denominator into the numerator
        low = den.low_degree
        num, den = num.shift(-low), den.shift(-low)
        nlow = num.low_degree
        g = poly_gcd(num.shift(-nlow), den)
        if g.degree:
            num = num.shift(-nlow).exact_div(g).shift(nlow)
            den = den.exact_div(g)
        c0 = Fraction(den.coeff(0))
        self.numerator = num * (1 / c0)
        self.denominator = den * (1 / c0)

    # arithmetic
    def __add__(self, other):
        other = other if isinstance(other, RatFun) else RatFun(other)
        return RatFun(self.numerator * other.denominator + other.numerator * self.denominator,
                      self.denominator * other.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-(other if isinstance(other, RatFun) else RatFun(other)))

    def __mul__(self, other):
        other = other if isinstance(other, RatFun) else RatFun(other)
        return RatFun(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = other if isinstance(other, RatFun) else RatFun(other)
        if other.is_zero():
            raise ZeroDenominator("division by zero rational function")
        return RatFun(self.numerator * other.denominator, self.denominator * other.numerator)

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            try:
                other = RatFun(other)
            except Exception:
                return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def is_zero(self):
        return self.numerator.is_zero()

    def series(self, D):
        """Coefficients a_n for n = low..D of the expansion at t = 0, as dict."""
        if self.is_zero():
            return {}
        den = self.denominator.coefficient_list()
        num = self.numerator
        low = min(num.low_degree, 0)
        # expand numerator/(denominator) with den[0] == 1
        out = {}
        for n in range(low, D + 1):
            s = num.coeff(n)
            for k in range(1, len(den)):
                s -= den[k] * out.get(n - k, 0)
            out[n] = as_number(s)
        return out

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        if self.denominator == ONE:
            return render_poly(self.numerator)
        num, den = render_poly(self.numerator), render_poly(self.denominator)
        if len(self.numerator.items()) > 1:
            num = f"({num})"
        return f"{num}/({den})"


def reduce(numer, denom) -> RatFun:
    return RatFun(numer, denom)


def valuation_at_one(r: RatFun) -> int:
    """Pole order at t = 1 (negative for a zero). Zero function gives 0."""
    if r.is_zero():
        return 0
    a, _ = split_one_minus_t(r.numerator)
    b, _ = split_one_minus_t(r.denominator)
    return b - a


def multiplicity_eps(r) -> Fraction | int:
    """Leading coefficient of the expansion of r in powers of (1 - t)."""
    if not isinstance(r, RatFun):
        r = RatFun(r)
    if r.is_zero():
        return 0
    _, n = split_one_minus_t(r.numerator)
    _, d = split_one_minus_t(r.denominator)
    return as_number(Fraction(n(1)) / Fraction(d(1)))


# ---------------------------------------------------------------------------
class MatPoly:
    """Square matrix of Laurent polynomials."""

    __slots__ = ("entries", "n")

    def __init__(self, entries):
        rows = tuple(tuple(_coerce(x) for x in row) for row in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix polynomial must be square")
        self.entries = rows
        self.n = n

    @classmethod
    def identity(cls, n):
        return cls(identity(n))

    @classmethod
    def zero(cls, n):
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def from_coefficients(cls, mats: Sequence, low: int = 0):
        """Build sum_k mats[k] t^(low+k) from numeric matrices."""
        n = len(mats[0])
        ent = [[{} for _ in range(n)] for _ in range(n)]
        for k, m in enumerate(mats):
            for i in range(n):
                for j in range(n):
                    if m[i][j] != 0:
                        ent[i][j][low + k] = m[i][j]
        return cls([[LaurentPoly(e) for e in row] for row in ent])

    @classmethod
    def scalar(cls, mat, exp=0):
        return cls([[LaurentPoly.monomial(x, exp) for x in row] for row in mat])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other):
        return MatPoly([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return MatPoly([[-a for a in r] for r in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MatPoly):
            n = self.n
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    s = ZERO
                    for k in range(n):
                        a = self.entries[i][k]
                        if a.is_zero():
                            continue
                        b = other.entries[k][j]
                        if not b.is_zero():
                            s = s + a * b
                    row.append(s)
                out.append(row)
            return MatPoly(out)
        return MatPoly([[a * other for a in r] for r in self.entries])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MatPoly) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def transpose(self):
        return MatPoly([list(col) for col in zip(*self.entries)])

    @property
    def T(self):
        return self.transpose()

    def substitute_inverse_t(self):
        return MatPoly([[a.substitute_inverse_t() for a in r] for r in self.entries])

    def shift(self, k):
        return MatPoly([[a.shift(k) for a in r] for r in self.entries])

    def map(self, f):
        return MatPoly([[f(a) for a in r] for r in self.entries])

    @property
    def degree(self):
        ds = [a.degree for r in self.entries for a in r if not a.is_zero()]
        return max(ds) if ds else None

    @property
    def low_degree(self):
        ds = [a.low_degree for r in self.entries for a in r if not a.is_zero()]
        return min(ds) if ds else None

    def coefficient(self, k):
        return [[a.coeff(k) for a in r] for r in self.entries]

    def at(self, x):
        return [[a(x) for a in r] for r in self.entries]

    def is_polynomial(self):
        return all(a.is_polynomial() for r in self.entries for a in r)

    def det(self) -> LaurentPoly:
        return det(self)

    def adjugate(self) -> "MatPoly":
        return adjugate(self)

    def __repr__(self):
        return f"MatPoly({[[str(a) for a in r] for r in self.entries]})"

    def render(self):
        return [[render_poly(a) for a in r] for r in self.entries]


def _det_leibniz(rows):
    n = len(rows)
    total = ZERO
    for p in permutations(range(n)):
        term = ONE
        for i in range(n):
            a = rows[i][p[i]]
            if a.is_zero():
                term = ZERO
                break
            term = term * a
        if not term.is_zero():
            total = total + term * _perm_sign(p)
    return total


def _det_bareiss(rows):
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def det(m: MatPoly) -> LaurentPoly:
    """Determinant: Leibniz expansion for n <= 3, fraction-free Bareiss above."""
    if m.n == 0:
        return ONE
    if m.n <= 3:
        return _det_leibniz(m.entries)
    return _det_bareiss(m.entries)


def adjugate(m: MatPoly) -> MatPoly:
    n = m.n
    if n == 1:
        return MatPoly([[ONE]])
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m.entries[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            d = det(MatPoly(minor))
            out[i][j] = d if (i + j) % 2 == 0 else -d
    return MatPoly(out)


def substitute_inverse_t(m: MatPoly) -> MatPoly:
    return m.substitute_inverse_t()


def transpose(m: MatPoly) -> MatPoly:
    return m.transpose()


def entrywise_rational(m: MatPoly):
    """``m^{-1}`` as an n x n matrix of reduced rational functions (adjugate / det)."""
    d = det(m)
    if d.is_zero():
        raise ZeroDenominator("matrix polynomial is singular")
    adj = adjugate(m)
    return [[RatFun(adj.entries[i][j], d) for j in range(m.n)] for i in range(m.n)]


# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MatSeries:
    """Truncated matrix power series H_0 + H_1 t + ... + H_D t^D."""

    n: int
    D: int
    coeffs: tuple  # tuple of n x n tuples, index = degree

    def entry(self, i, j):
        return [H[i][j] for H in self.coeffs]

    def total(self):
        return [sum(sum(r) for r in H) for H in self.coeffs]

    def __getitem__(self, k):
        return self.coeffs[k]

    def rows(self):
        """(i, j, n, coeff) with 1-based vertex labels."""
        for k, H in enumerate(self.coeffs):
            for i in range(self.n):
                for j in range(self.n):
                    yield i + 1, j + 1, k, H[i][j]


def invert_as_series(m: MatPoly, D: int) -> MatSeries:
    """Exact power-series inverse of m modulo t^(D+1)."""
    if not m.is_polynomial():
        raise ValueError("invert_as_series needs a matrix polynomial (no negative powers)")
    n = m.n
    q0 = m.coefficient(0)
    inv0 = inverse(q0)
    if inv0 is None:
        raise SingularConstantTerm("constant term of the matrix polynomial is not invertible")
    deg = m.degree or 0
    qk = [m.coefficient(k) for k in range(deg + 1)]
    H = [inv0]
    for s in range(1, D + 1):
        acc = [[0] * n for _ in range(n)]
        for k in range(1, min(s, deg) + 1):
            prod = matmul(qk[k], H[s - k])
            for i in range(n):
                for j in range(n):
                    acc[i][j] += prod[i][j]
        hs = matmul(inv0, acc)
        H.append([[as_number(-x) for x in row] for row in hs])
    return MatSeries(n, D, tuple(tuple(tuple(as_number(x) for x in row) for row in h) for h in H))


def series_product_check(m: MatPoly, s: MatSeries) -> bool:
    """True when m * s == I modulo t^(D+1)."""
    n = m.n
    deg = m.degree or 0
    for k in range(s.D + 1):
        acc = [[0] * n for _ in range(n)]
        for a in range(0, min(k, deg) + 1):
            prod = matmul(m.coefficient(a), [list(r) for r in s.coeffs[k - a]])
            for i in range(n):
                for j in range(n):
                    acc[i][j] += prod[i][j]
        want = identity(n) if k == 0 else [[0] * n for _ in range(n)]
        if acc != want:
            return False
    return True


def nakayama_monomial(mu: Sequence[int], ell: Sequence[int]) -> MatPoly:
    """P t^L with P_ij = [mu(i) == j] (1-based mu) and t^L = diag(t^ell_i)."""
    n = len(mu)
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        j = mu[i] - 1
        rows[i][j] = LaurentPoly.monomial(1, ell[j])
    return MatPoly(rows)


def matpoly_to_json(m: MatPoly):
    """Row-major nested lists; each entry is the ascending coefficient strings.

    Entries with negative exponents are emitted as ``{"low": k, "coeffs": [...]}``.
    """
    out = []
    for r in m.entries:
        row = []
        for a in r:
            if a.is_zero():
                row.append(["0"])
            elif a.low_degree < 0:
                lo = a.low_degree
                row.append({"low": lo, "coeffs": [str(a.coeff(k)) for k in range(lo, a.degree + 1)]})
            else:
                row.append([str(x) for x in a.coefficient_list()])
        out.append(row)
    return out
