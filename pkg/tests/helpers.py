"""Independent reference computations (sympy) and small builders for tests."""
import sympy as sp

from cygrowth.polyalg import LaurentPoly, MatPoly
from cygrowth.quiver import Arrow, WeightedQuiver

t = sp.Symbol("t")


def to_sympy(p: LaurentPoly):
    return sum(sp.Rational(v) * t ** k for k, v in p.items()) if not p.is_zero() else sp.Integer(0)


def from_sympy(expr) -> LaurentPoly:
    expr = sp.expand(expr)
    if expr == 0:
        return LaurentPoly()
    poly = sp.Poly(expr * t ** 50, t)
    return LaurentPoly({k[0] - 50: int(c) if c.is_integer else sp.Rational(c) for k, c in poly.terms()})


def matpoly_to_sympy(m: MatPoly):
    return sp.Matrix([[to_sympy(m[i, j]) for j in range(m.n)] for i in range(m.n)])


def skew_group_quiver():
    return WeightedQuiver(2, [Arrow("a1", 1, 1), Arrow("a2", 2, 2), Arrow("b", 1, 2), Arrow("c", 2, 1)])


def loops(*weights):
    names = "xyzuvw"
    return WeightedQuiver(1, [Arrow(names[k], 1, 1, w) for k, w in enumerate(weights)])


def _orbit_closed(seeds, step):
    out = []
    for s in seeds:
        orbit, cur = [], s
        while cur not in orbit:
            orbit.append(cur)
            cur = step(cur)
        out.extend(orbit)
    return out


def random_cy_data(rng, dimension=None):
    """A random (quiver, CYDatum) pair that satisfies the incidence compatibility rule.

    Seeds arrows at random and closes them under the symmetry the dimension
    demands, with uniform ell so the closure stays finite.
    """
    from cygrowth.quiver import CYDatum

    d = dimension or rng.choice((1, 2, 3))
    n = rng.randint(1, 3)
    mu = list(range(1, n + 1))
    rng.shuffle(mu)
    if d == 1:
        ell = [rng.randint(1, 3) for _ in range(n)]
        arrows = [Arrow(f"x{i}", i, mu[i - 1], ell[mu[i - 1] - 1]) for i in range(1, n + 1)]
        return WeightedQuiver(n, arrows), CYDatum(tuple(mu), tuple(ell), 1)
    ell = rng.randint(2, 4)
    seeds = [(rng.randint(1, n), rng.randint(1, n), rng.randint(1, ell - 1)) for _ in range(rng.randint(1, 3))]
    if d == 2:
        step = lambda a: (a[1], mu[a[0] - 1], ell - a[2])  # noqa: E731
    else:
        step = lambda a: (mu[a[0] - 1], mu[a[1] - 1], a[2])  # noqa: E731
    triples = _orbit_closed(seeds, step)
    arrows = [Arrow(f"x{k}", s, t, w) for k, (s, t, w) in enumerate(triples)]
    return WeightedQuiver(n, arrows), CYDatum(tuple(mu), (ell,) * n, d)
