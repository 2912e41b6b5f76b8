"""Brute-force graded dimensions of kQ/I.

Degree by degree, the ideal slice I_n is spanned by

    x * I_{n - w(x)}    for arrows x, and
    r * b               for relations r and paths b,

which is the same space as the span of all a*r*b but far smaller. Ranks
are exact (fraction-free integer rows) unless a prime modulus is given.
"""
from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from . import _kernels, exact
from .errors import (DegreeMismatch, InvalidRelation, NotWeakPotential, TauImageNotArrowSpace,
                     TauNotInjective, TruncationTooLarge)
from .polyalg import MatPoly, invert_as_series
from .quiver import CYDatum, WeightedQuiver

MAX_PATHS = 2_000_000


@dataclass(frozen=True)
class Relation:
    """Rational combination of paths; a path is a tuple of arrow ids read left to right."""

    source: int
    target: int
    weight: int
    terms: tuple  # ((Fraction, (arrow ids...)), ...)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((Fraction(c), tuple(p)) for c, p in self.terms))

    def render(self):
        out = []
        for c, p in self.terms:
            word = "*".join(p)
            if c == 1:
                out.append(f"+ {word}")
            elif c == -1:
                out.append(f"- {word}")
            else:
                out.append(f"{'-' if c < 0 else '+'} {abs(c)}*{word}")
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _path_ends(quiver, path):
    arrows = [quiver.arrow(a) for a in path]
    for a, b in zip(arrows, arrows[1:]):
        if a.target != b.source:
            raise InvalidRelation(f"path {'*'.join(path)} is not composable at {a.id}*{b.id}")
    return arrows[0].source, arrows[-1].target, sum(a.weight for a in arrows)


def relation_from_terms(quiver: WeightedQuiver, terms) -> Relation:
    """Combine like terms and infer source, target and weight."""
    acc = {}
    for c, p in terms:
        p = tuple(p)
        acc[p] = acc.get(p, 0) + Fraction(c)
    acc = {p: c for p, c in acc.items() if c != 0}
    if not acc:
        raise InvalidRelation("relation is zero")
    ends = {_path_ends(quiver, p) for p in acc}
    if len(ends) != 1:
        raise InvalidRelation(f"terms do not share source, target and weight: {sorted(ends)}")
    (s, t, w), = ends
    return Relation(s, t, w, tuple((c, p) for p, c in sorted(acc.items())))


@dataclass
class GradedPresentation:
    quiver: WeightedQuiver
    relations: list

    def __post_init__(self):
        self.relations = list(self.relations)
        for k, r in enumerate(self.relations):
            self._check(k, r)

    def _check(self, k, r: Relation):
        if not r.terms:
            raise InvalidRelation(f"relation {k} has no terms")
        for c, p in r.terms:
            if len(p) < 2:
                raise InvalidRelation(f"relation {k}: path {'*'.join(p) or '()'} has length < 2")
            try:
                s, t, w = _path_ends(self.quiver, p)
            except KeyError as e:
                raise InvalidRelation(f"relation {k}: unknown arrow {e.args[0]!r}") from None
            if (s, t) != (r.source, r.target):
                raise InvalidRelation(f"relation {k}: path {'*'.join(p)} runs {s}->{t}, "
                                      f"relation is declared {r.source}->{r.target}")
            if w != r.weight:
                raise InvalidRelation(f"relation {k}: path {'*'.join(p)} has weight {w}, "
                                      f"relation is declared weight {r.weight}")


@dataclass
class DimTable:
    D: int
    n_vertices: int
    dims: dict  # (i, j, n) -> int, 1-based vertices

    def entry(self, i, j):
        return [self.dims[(i, j, n)] for n in range(self.D + 1)]

    def total(self):
        return [sum(self.dims[(i, j, n)] for i in range(1, self.n_vertices + 1)
                    for j in range(1, self.n_vertices + 1)) for n in range(self.D + 1)]

    def rows(self):
        for n in range(self.D + 1):
            for i in range(1, self.n_vertices + 1):
                for j in range(1, self.n_vertices + 1):
                    yield i, j, n, self.dims[(i, j, n)]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "n", "dim"])
        w.writerows(self.rows())
        return buf.getvalue()


# -- paths -------------------------------------------------------------------
class PathSpace:
    """Paths of each total weight, as tuples of arrow indices, grouped by (source, target)."""

    def __init__(self, quiver: WeightedQuiver, max_paths: int = MAX_PATHS):
        self.quiver = quiver
        self.max_paths = max_paths
        self.ids = [a.id for a in quiver.arrows]
        self.index = {a.id: k for k, a in enumerate(quiver.arrows)}
        self.src = [a.source for a in quiver.arrows]
        self.tgt = [a.target for a in quiver.arrows]
        self.w = [a.weight for a in quiver.arrows]
        self.out = {v: [k for k in range(len(self.ids)) if self.src[k] == v] for v in quiver.vertices}
        self._by_n = []  # list of dict (i, j) -> sorted list of paths

    def encode(self, path_ids):
        return tuple(self.index[a] for a in path_ids)

    def decode(self, path):
        return tuple(self.ids[k] for k in path)

    def paths(self, n):
        while len(self._by_n) <= n:
            self._by_n.append(self._build(len(self._by_n)))
        return self._by_n[n]

    def _build(self, n):
        found = []
        if n == 0:
            found = [(v, (), v) for v in self.quiver.vertices]
        for k in range(len(self.ids)):
            w = self.w[k]
            if 0 < w <= n:
                for (s, t), ps in self.paths(n - w).items():
                    if t == self.src[k]:
                        found.extend((s, p + (k,), self.tgt[k]) for p in ps)
        todo = list(found)
        while todo:
            s, p, t = todo.pop()
            for k in self.out[t]:
                if self.w[k] == 0:
                    item = (s, p + (k,), self.tgt[k])
                    found.append(item)
                    todo.append(item)
            if len(found) > self.max_paths:
                break
        if len(found) > self.max_paths:
            raise TruncationTooLarge(
                f"{len(found)}+ paths of weight {n} exceed the cap of {self.max_paths}")
        blocks = {(i, j): [] for i in self.quiver.vertices for j in self.quiver.vertices}
        for s, p, t in found:
            blocks[(s, t)].append(p)
        for v in blocks.values():
            v.sort()
        return blocks

    def count(self, n, i, j):
        return len(self.paths(n)[(i, j)])


# -- row reduction -----------------------------------------------------------
def _normalize(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    c = min(row)
    if row[c] < 0:
        g = -g
    if g not in (0, 1):
        return {k: v // g for k, v in row.items()}
    return row


class _Echelon:
    """Integer rows keyed by path; each stored row's smallest key is its pivot."""

    def __init__(self):
        self.piv = {}

    def insert(self, row):
        row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            p = self.piv.get(c)
            if p is None:
                self.piv[c] = _normalize(row)
                return True
            a, b = p[c], row[c]
            new = {k: v * a for k, v in row.items()}
            for k, v in p.items():
                x = new.get(k, 0) - b * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            row = _normalize(new) if new else new
        return False

    def rows(self):
        return list(self.piv.values())

    def rank(self):
        return len(self.piv)

    def reduce(self, vec):
        """Normal form of a Fraction-valued vector: no pivot key survives."""
        v = {k: Fraction(x) for k, x in vec.items() if x}
        heap = [k for k in v if k in self.piv]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            x = v.get(c)
            if not x or c not in self.piv:
                continue
            p = self.piv[c]
            f = x / p[c]
            for k, y in p.items():
                z = v.get(k, 0) - f * y
                if z:
                    if k not in v and k in self.piv:
                        heapq.heappush(heap, k)
                    v[k] = z
                else:
                    v.pop(k, None)
        return v


class _ModEchelon:
    """Same interface over GF(p); rows are reduced in batches by the compiled kernel."""

    def __init__(self, p):
        self.p = p
        self.piv = {}

    def insert_many(self, rows, cols):
        if not rows:
            return False
        before = len(self.piv)
        col_index = {c: k for k, c in enumerate(cols)}
        allrows = list(self.piv.values()) + rows
        A = np.zeros((len(allrows), len(cols)), dtype=np.int64)
        for r, row in enumerate(allrows):
            for k, v in row.items():
                A[r, col_index[k]] = v % self.p
        R, rank = _kernels.echelon_mod_p(A, self.p)
        self.piv = {}
        for r in range(rank):
            nz = np.nonzero(R[r])[0]
            self.piv[cols[nz[0]]] = {cols[k]: int(R[r, k]) for k in nz}
        return len(self.piv) > before

    def rows(self):
        return list(self.piv.values())

    def rank(self):
        return len(self.piv)


class IdealSlices:
    """Echelon bases of I_n for each (source, target) block, n = 0, 1, ..."""

    def __init__(self, pres: GradedPresentation, modulus=None, max_paths=MAX_PATHS, paths=None):
        self.pres = pres
        self.P = paths or PathSpace(pres.quiver, max_paths)
        self.modulus = modulus
        self.rels = []
        for r in pres.relations:
            row = {}
            for c, p in r.terms:
                key = self.P.encode(p)
                row[key] = row.get(key, 0) + c
            den = 1
            for c in row.values():
                den = den * c.denominator // gcd(den, c.denominator)
            self.rels.append((r.source, r.target, r.weight, {k: int(c * den) for k, c in row.items() if c}))
        self._slices = []

    def slice(self, n):
        while len(self._slices) <= n:
            self._slices.append(self._build(len(self._slices)))
        return self._slices[n]

    def _new(self):
        return _ModEchelon(self.modulus) if self.modulus else _Echelon()

    def _build(self, n):
        P = self.P
        verts = list(self.pres.quiver.vertices)
        blocks = {(i, j): self._new() for i in verts for j in verts}
        pending = {key: [] for key in blocks}
        for k in range(len(P.ids)):
            w = P.w[k]
            if 0 < w <= n:
                lower = self.slice(n - w)
                for (i2, j), E in lower.items():
                    if i2 == P.tgt[k]:
                        pending[(P.src[k], j)].extend({(k,) + p: v for p, v in row.items()} for row in E.rows())
        for s, t, w, row in self.rels:
            if w <= n:
                for j in verts:
                    for b in P.paths(n - w)[(t, j)]:
                        pending[(s, j)].append({p + b: v for p, v in row.items()})
        for key, rows in pending.items():
            self._insert(blocks[key], rows, n, key)
        zero = [k for k in range(len(P.ids)) if P.w[k] == 0]
        changed = bool(zero)
        while changed:
            changed = False
            for k in zero:
                for j in verts:
                    rows = [{(k,) + p: v for p, v in row.items()} for row in blocks[(P.tgt[k], j)].rows()]
                    if self._insert(blocks[(P.src[k], j)], rows, n, (P.src[k], j)):
                        changed = True
        return blocks

    def _insert(self, E, rows, n, key):
        if self.modulus:
            return E.insert_many(rows, self.P.paths(n)[key])
        added = False
        for row in rows:
            added |= E.insert(row)
        return added

    def dim(self, n, i, j):
        return self.P.count(n, i, j) - self.slice(n)[(i, j)].rank()


def graded_dims(pres: GradedPresentation, D: int, modulus=None, max_paths=MAX_PATHS) -> DimTable:
    """dim e_i A_n e_j for 0 <= n <= D (exact over Q unless ``modulus`` is a prime)."""
    if D < 0:
        raise ValueError("D must be nonnegative")
    ideal = IdealSlices(pres, modulus, max_paths)
    dims = {}
    verts = list(pres.quiver.vertices)
    for n in range(D + 1):
        for i in verts:
            for j in verts:
                dims[(i, j, n)] = ideal.dim(n, i, j)
    return DimTable(D, pres.quiver.n_vertices, dims)


def free_dims(quiver: WeightedQuiver, D: int) -> DimTable:
    return graded_dims(GradedPresentation(quiver, []), D)


def check_against_series(table: DimTable, q: MatPoly):
    """Compare with the power series of q^{-1}; returns (match, first (i, j, n) that differs)."""
    if q.n != table.n_vertices:
        raise ValueError(f"q is {q.n}x{q.n} but the table has {table.n_vertices} vertices")
    s = invert_as_series(q, table.D)
    for i, j, n, d in table.rows():
        if s[n][i - 1][j - 1] != d:
            return False, (i, j, n)
    return True, None


# -- socle -------------------------------------------------------------------
@dataclass
class SocleReport:
    side: str
    D: int
    checked_through: int
    trivial: bool
    witnesses: list = field(default_factory=list)  # (i, j, n, {path ids: coeff})
    caveat: str = ""


def truncated_socle_trivial(pres: GradedPresentation, side: str, D: int, max_paths=MAX_PATHS) -> SocleReport:
    """Look for nonzero z with z*J = 0 (side='right') or J*z = 0 (side='left') in degrees <= D - max weight."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if D < 1:
        raise ValueError("D must be at least 1")
    q = pres.quiver
    ideal = IdealSlices(pres, None, max_paths)
    P = ideal.P
    top = D - max(q.max_weight, 1)
    witnesses = []
    for n in range(top + 1):
        slice_n = ideal.slice(n)
        for i in q.vertices:
            for j in q.vertices:
                E = slice_n[(i, j)]
                basis = [p for p in P.paths(n)[(i, j)] if p not in E.piv]
                if not basis:
                    continue
                if side == "right":
                    acts = [k for k in range(len(P.ids)) if P.src[k] == j]
                else:
                    acts = [k for k in range(len(P.ids)) if P.tgt[k] == i]
                images = []
                for p in basis:
                    col = {}
                    for k in acts:
                        m = n + P.w[k]
                        if side == "right":
                            blk, path = (i, P.tgt[k]), p + (k,)
                        else:
                            blk, path = (P.src[k], j), (k,) + p
                        nf = ideal.slice(m)[blk].reduce({path: 1})
                        for c, v in nf.items():
                            col[(k, c)] = v
                    images.append(col)
                keys = sorted({key for col in images for key in col})
                mat = [[col.get(key, 0) for col in images] for key in keys]
                kernel = exact.nullspace(mat, len(basis)) if keys else \
                    [[Fraction(int(a == b)) for a in range(len(basis))] for b in range(len(basis))]
                for v in kernel:
                    z = {"*".join(P.decode(p)) or f"e{i}": exact.as_number(c) for p, c in zip(basis, v) if c}
                    witnesses.append((i, j, n, z))
    return SocleReport(side, D, top, not witnesses, witnesses,
                       caveat=f"checked degrees 0..{top} only; a witness is conclusive, its absence is not")


# -- relation families -------------------------------------------------------
@dataclass
class MeshData:
    """tau(x) for each arrow id x, as a list of (coeff, path) terms; arrows are length-1 paths."""

    tau: dict

    def __post_init__(self):
        self.tau = {x: [(Fraction(c), tuple(p) if not isinstance(p, str) else (p,)) for c, p in terms]
                    for x, terms in self.tau.items()}


def _rank_over(vectors):
    keys = sorted({k for v in vectors for k in v})
    mat = [[v.get(k, 0) for k in keys] for v in vectors]
    return exact.rank(mat) if keys else 0


def build_mesh_relations(quiver: WeightedQuiver, cy: CYDatum, mesh: MeshData) -> GradedPresentation:
    """One relation h_r = sum over arrows x into r of tau(x)*x for each vertex r."""
    mu_inv = cy.mu_inverse()
    ids = [a.id for a in quiver.arrows]
    missing = [x for x in ids if x not in mesh.tau]
    extra = [x for x in mesh.tau if x not in ids]
    if missing or extra:
        raise InvalidRelation(f"tau must be given on every arrow; missing {missing}, unknown {extra}")
    full, linear = [], []
    for x in ids:
        a = quiver.arrow(x)
        want = (mu_inv[a.target - 1], a.source, cy.ell[a.target - 1] - a.weight)
        vec, lin = {}, {}
        for c, p in mesh.tau[x]:
            try:
                ends = _path_ends(quiver, p) if p else None
            except KeyError as e:
                raise InvalidRelation(f"tau({x}) uses unknown arrow {e.args[0]!r}") from None
            if ends != want:
                raise DegreeMismatch(
                    f"tau({x}) term {'*'.join(p)} runs {ends[0]}->{ends[1]} in weight {ends[2]}; "
                    f"expected {want[0]}->{want[1]} in weight {want[2]}" if ends else
                    f"tau({x}) has an empty path")
            vec[p] = vec.get(p, 0) + c
            if len(p) == 1:
                lin[p] = lin.get(p, 0) + c
        full.append(vec)
        linear.append(lin)
    if _rank_over(full) < len(ids):
        raise TauNotInjective("tau is not injective on the arrow space")
    if _rank_over(linear) < len(ids):
        raise TauImageNotArrowSpace("the image of tau does not span an arrow space modulo paths of length >= 2")
    rels = []
    for r in quiver.vertices:
        terms = []
        for x in ids:
            if quiver.arrow(x).target == r:
                terms.extend((c, p + (x,)) for c, p in mesh.tau[x])
        try:
            rels.append(relation_from_terms(quiver, terms))
        except InvalidRelation:
            if terms:
                raise
    return GradedPresentation(quiver, rels)


@dataclass
class Semipotential:
    """omega = sum of coeff * y * g * x over terms (coeff, y, middle path, x)."""

    terms: list

    def __post_init__(self):
        self.terms = [(Fraction(c), y, tuple(g), x) for c, y, g, x in self.terms]

    @classmethod
    def from_words(cls, words):
        """Split each (coeff, path) into first arrow, middle and last arrow."""
        out = []
        for c, p in words:
            p = tuple(p)
            if len(p) < 2:
                raise InvalidRelation("semipotential terms need paths of length >= 2")
            out.append((c, p[0], p[1:-1], p[-1]))
        return cls(out)


def build_semipotential_relations(quiver: WeightedQuiver, cy: CYDatum, sp: Semipotential):
    """Row relations sum_j g_ij x_j (one per y_i) and column relations sum_i y_i g_ij (one per x_j)."""
    mu_inv = cy.mu_inverse()
    for c, y, g, x in sp.terms:
        try:
            s, t, w = _path_ends(quiver, (y,) + g + (x,))
        except KeyError as e:
            raise InvalidRelation(f"semipotential uses unknown arrow {e.args[0]!r}") from None
        if s != mu_inv[t - 1]:
            raise NotWeakPotential(
                f"term {'*'.join((y,) + g + (x,))} runs {s}->{t}, but omega e_{t} must start at {mu_inv[t - 1]}")
        if w != cy.ell[t - 1]:
            raise DegreeMismatch(f"term {'*'.join((y,) + g + (x,))} has weight {w}, expected {cy.ell[t - 1]}")
    rows, cols = {}, {}
    for c, y, g, x in sp.terms:
        rows.setdefault(y, []).append((c, g + (x,)))
        cols.setdefault(x, []).append((c, (y,) + g))
    row_rel = [relation_from_terms(quiver, rows[y]) for y in sorted(rows, key=_arrow_order(quiver))
               if any(c for c, _ in rows[y])]
    col_rel = [relation_from_terms(quiver, cols[x]) for x in sorted(cols, key=_arrow_order(quiver))
               if any(c for c, _ in cols[x])]
    return row_rel, col_rel


def _arrow_order(quiver):
    idx = quiver.arrow_index()
    return lambda a: idx[a]


def redundant_relations(pres: GradedPresentation, max_paths=MAX_PATHS):
    """Indices of relations lying in the ideal generated by the others (checked in their own degree)."""
    out = []
    for k, r in enumerate(pres.relations):
        others = GradedPresentation(pres.quiver, pres.relations[:k] + pres.relations[k + 1:])
        ideal = IdealSlices(others, None, max_paths)
        E = ideal.slice(r.weight)[(r.source, r.target)]
        vec = {ideal.P.encode(p): c for c, p in r.terms}
        if not E.reduce(vec):
            out.append(k)
    return out
