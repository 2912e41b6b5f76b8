"""Weighted quivers, Calabi-Yau data and incidence matrices.

Vertices are 1-based. Arrow ids are user strings so relations and mesh
maps can refer to individual arrows.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .polyalg import LaurentPoly, MatPoly, nakayama_monomial


@dataclass(frozen=True)
class Arrow:
    id: str
    source: int
    target: int
    weight: int = 1


@dataclass(frozen=True)
class WeightedQuiver:
    n_vertices: int
    arrows: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(self.arrows))

    @classmethod
    def from_matrix(cls, M: Sequence[Sequence[int]], weight: int = 1):
        """Quiver with M[i][j] arrows i -> j, all of the given weight.

        Arrow ids are ``a{i}_{j}_{k}`` (1-based vertices, k-th parallel arrow).
        """
        arrows = []
        for i, row in enumerate(M):
            for j, m in enumerate(row):
                for k in range(m):
                    arrows.append(Arrow(f"a{i + 1}_{j + 1}_{k + 1}", i + 1, j + 1, weight))
        return cls(len(M), tuple(arrows))

    @property
    def vertices(self):
        return range(1, self.n_vertices + 1)

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise KeyError(arrow_id)

    def arrow_index(self):
        return {a.id: k for k, a in enumerate(self.arrows)}

    def arrows_from(self, i):
        return [a for a in self.arrows if a.source == i]

    def arrows_to(self, j):
        return [a for a in self.arrows if a.target == j]

    @property
    def max_weight(self):
        return max((a.weight for a in self.arrows), default=0)

    def all_weight_one(self):
        return all(a.weight == 1 for a in self.arrows)

    def incidence_matrix(self):
        M = [[0] * self.n_vertices for _ in range(self.n_vertices)]
        for a in self.arrows:
            M[a.source - 1][a.target - 1] += 1
        return M

    def is_locally_finite(self):
        return not _has_cycle(self.n_vertices, [(a.source, a.target) for a in self.arrows if a.weight == 0])

    def disjoint_union(self, other: "WeightedQuiver", prefix: str = "r_"):
        off = self.n_vertices
        extra = tuple(Arrow(prefix + a.id, a.source + off, a.target + off, a.weight) for a in other.arrows)
        return WeightedQuiver(self.n_vertices + other.n_vertices, self.arrows + extra)


@dataclass(frozen=True)
class CYDatum:
    """Nakayama vertex permutation ``mu`` (mu[i-1] = mu(i)), AS-index and dimension."""

    mu: tuple
    ell: tuple
    dimension: int

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(x) for x in self.mu))
        object.__setattr__(self, "ell", tuple(int(x) for x in self.ell))

    @property
    def n(self):
        return len(self.mu)

    def mu_inverse(self):
        inv = [0] * len(self.mu)
        for i, m in enumerate(self.mu):
            inv[m - 1] = i + 1
        return tuple(inv)

    def permutation_matrix(self):
        n = len(self.mu)
        return [[1 if self.mu[i] == j + 1 else 0 for j in range(n)] for i in range(n)]

    def nakayama_monomial(self) -> MatPoly:
        return nakayama_monomial(self.mu, self.ell)

    def diagnostics(self, quiver: WeightedQuiver | None = None):
        out = []
        n = len(self.mu)
        if sorted(self.mu) != list(range(1, n + 1)):
            out.append(f"mu is not a permutation of 1..{n}: {list(self.mu)}")
        if len(self.ell) != n:
            out.append(f"ell has length {len(self.ell)}, expected {n}")
        if self.dimension not in (1, 2, 3):
            out.append(f"dimension must be 1, 2 or 3, got {self.dimension}")
        if quiver is not None:
            if quiver.n_vertices != n:
                out.append(f"datum has {n} vertices but quiver has {quiver.n_vertices}")
            elif (self.dimension in (2, 3) and quiver.arrows and quiver.all_weight_one()
                  and is_connected(quiver) and len(set(self.ell)) > 1):
                out.append("ell must be uniform for a connected quiver with all arrow weights 1")
        return out


@dataclass(frozen=True)
class IncidenceData:
    N: MatPoly
    M: tuple = field(default=())


def _has_cycle(n, edges):
    adj = {v: [] for v in range(1, n + 1)}
    for s, t in edges:
        adj[s].append(t)
    color = dict.fromkeys(adj, 0)
    for root in adj:
        if color[root]:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
            elif color[nxt] == 1:
                return True
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(adj[nxt])))
    return False


def validate_quiver(q: WeightedQuiver) -> list[str]:
    """Diagnostics for a quiver; empty iff well formed and locally finite."""
    out = []
    if not isinstance(q.n_vertices, int) or q.n_vertices < 1:
        out.append(f"vertex count must be a positive integer, got {q.n_vertices!r}")
        return out
    seen = set()
    for a in q.arrows:
        if a.id in seen:
            out.append(f"duplicate arrow id {a.id!r}")
        seen.add(a.id)
        for end, v in (("source", a.source), ("target", a.target)):
            if not (1 <= v <= q.n_vertices):
                out.append(f"arrow {a.id!r}: {end} {v} out of range 1..{q.n_vertices}")
        if not isinstance(a.weight, int) or a.weight < 0:
            out.append(f"arrow {a.id!r}: weight must be a nonnegative integer, got {a.weight!r}")
    if out:
        return out
    if not q.is_locally_finite():
        out.append("Q0 has a cycle: the weight-0 subquiver is not acyclic, so kQ is not locally finite")
    return out


def incidence(q: WeightedQuiver) -> IncidenceData:
    """Weighted incidence matrix N(t) (coefficient of t^m in N_ij counts weight-m arrows i->j)."""
    n = q.n_vertices
    ent = [[{} for _ in range(n)] for _ in range(n)]
    for a in q.arrows:
        d = ent[a.source - 1][a.target - 1]
        d[a.weight] = d.get(a.weight, 0) + 1
    N = MatPoly([[LaurentPoly(e) for e in row] for row in ent])
    return IncidenceData(N, tuple(tuple(r) for r in q.incidence_matrix()))


def is_connected(q: WeightedQuiver) -> bool:
    """Connectivity of the underlying undirected graph. Isolated vertices break it."""
    n = q.n_vertices
    if n == 1:
        return True
    adj = {v: set() for v in q.vertices}
    for a in q.arrows:
        adj[a.source].add(a.target)
        adj[a.target].add(a.source)
    return len(_reach(adj, 1)) == n


def is_strongly_connected(q: WeightedQuiver) -> bool:
    n = q.n_vertices
    if n == 1:
        return True
    fwd = {v: set() for v in q.vertices}
    bwd = {v: set() for v in q.vertices}
    for a in q.arrows:
        fwd[a.source].add(a.target)
        bwd[a.target].add(a.source)
    return len(_reach(fwd, 1)) == n and len(_reach(bwd, 1)) == n


def _reach(adj, start):
    seen = {start}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def weighted_tensor(q: WeightedQuiver):
    """T[i][j] = sorted tuple of weights of arrows i -> j."""
    n = q.n_vertices
    T = [[[] for _ in range(n)] for _ in range(n)]
    for a in q.arrows:
        T[a.source - 1][a.target - 1].append(a.weight)
    return [[tuple(sorted(c)) for c in row] for row in T]


def canonical_form(q: WeightedQuiver):
    """Lexicographically minimal weighted adjacency tensor over vertex relabelings.

    Returns ``(key, perm)`` where ``perm[new] = old`` (0-based). Brute force
    over all n! relabelings; intended for n <= 4.
    """
    T = weighted_tensor(q)
    n = q.n_vertices
    best = None
    best_p = None
    for p in permutations(range(n)):
        key = tuple(T[p[i]][p[j]] for i in range(n) for j in range(n))
        if best is None or key < best:
            best, best_p = key, p
    return best, best_p


def is_isomorphic(q1: WeightedQuiver, q2: WeightedQuiver) -> bool:
    return q1.n_vertices == q2.n_vertices and canonical_form(q1)[0] == canonical_form(q2)[0]
