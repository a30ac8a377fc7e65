"""Dynkin and extended Dynkin quivers.

Dimension vectors stand in for modules over the path algebra. The Euler
matrix is E = I - (arrow counts), so that chi(d, e) = d^T E e, and the
Coxeter matrix is Phi = -E^{-1} E^T. On the Grothendieck lattice the Serre
functor acts by E^{-1} E^T = -Phi.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import AdmissibilityError, InputError, UnsupportedError
from .exact_linalg import IntMatrix, unimodular_inverse


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        arrows = tuple((int(s), int(t)) for s, t in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        for s, t in arrows:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise InputError(f"arrow {s}->{t} leaves the vertex range")

    def is_acyclic(self) -> bool:
        indeg = Counter(t for _, t in self.arrows)
        ready = [v for v in range(self.vertex_count) if indeg[v] == 0]
        seen = 0
        out = {}
        for s, t in self.arrows:
            out.setdefault(s, []).append(t)
        while ready:
            v = ready.pop()
            seen += 1
            for t in out.get(v, ()):
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
        return seen == self.vertex_count


@lru_cache(maxsize=None)
def euler_matrix(q: Quiver) -> IntMatrix:
    """E_ij = delta_ij - #(arrows i -> j)."""
    if not q.is_acyclic():
        raise UnsupportedError("quiver has an oriented cycle; path algebra is not finite dimensional")
    n = q.vertex_count
    e = [[int(i == j) for j in range(n)] for i in range(n)]
    for s, t in q.arrows:
        e[s][t] -= 1
    return IntMatrix(e)


@lru_cache(maxsize=None)
def coxeter_matrix(q: Quiver) -> IntMatrix:
    e = euler_matrix(q)
    return -(unimodular_inverse(e) @ e.T)


def serre_matrix(q: Quiver) -> IntMatrix:
    """K-theoretic action of the Serre functor, E^{-1} E^T."""
    e = euler_matrix(q)
    return unimodular_inverse(e) @ e.T


@lru_cache(maxsize=None)
def path_counts(q: Quiver) -> IntMatrix:
    """Entry (i, j) is the number of paths from i to j (including the trivial path)."""
    return unimodular_inverse(euler_matrix(q))


def projective_dims(q: Quiver) -> list[tuple[int, ...]]:
    return list(path_counts(q).entries)


def injective_dims(q: Quiver) -> list[tuple[int, ...]]:
    return path_counts(q).columns()


# ---------------------------------------------------------------------------
# Dynkin diagrams


def _star_edges(arms: Sequence[int]) -> tuple[int, list[tuple[int, int]]]:
    """Tree with a central vertex 0 and arms of the given lengths."""
    edges = []
    nxt = 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return nxt, edges


def _path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


_RANK_OK = {"A": lambda n: n >= 1, "D": lambda n: n >= 4, "E": lambda n: n in (6, 7, 8)}
_COXETER_NUMBER = {"E": {6: 12, 7: 18, 8: 30}}


@dataclass(frozen=True)
class DynkinType:
    """A simply-laced Dynkin diagram with an orientation.

    ``orientation`` lists arrows over the diagram's edges; by default every
    edge points from the smaller to the larger vertex index.
    """

    family: str
    rank: int
    orientation: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.family not in _RANK_OK or not _RANK_OK[self.family](self.rank):
            raise InputError(f"no Dynkin diagram {self.family}{self.rank}")
        if self.orientation is not None:
            arrows = tuple((int(s), int(t)) for s, t in self.orientation)
            got = sorted(tuple(sorted(a)) for a in arrows)
            if got != sorted(self.edges()):
                raise InputError(f"orientation does not match the edges of {self.name}")
            object.__setattr__(self, "orientation", arrows)

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    def edges(self) -> list[tuple[int, int]]:
        n = self.rank
        if self.family == "A":
            return _path_edges(n)
        if self.family == "D":
            return _path_edges(n - 1) + [(n - 3, n - 1)]
        return _path_edges(n - 1) + [(2, n - 1)]

    @cached_property
    def quiver(self) -> Quiver:
        arrows = self.orientation if self.orientation is not None else tuple(self.edges())
        return Quiver(self.rank, arrows)


def parse_dynkin(name: str) -> DynkinType:
    m = re.fullmatch(r"\s*([ADE])\s*_?(\d+)\s*", name)
    if not m:
        raise InputError(f"cannot parse Dynkin type {name!r}")
    return DynkinType(m.group(1), int(m.group(2)))


def extended_dynkin_quiver(family: str, *params: int) -> Quiver:
    """Acyclic orientations of the extended Dynkin diagrams.

    ``("A", p, q)`` gives A~_{p,q}: two paths of p and q arrows from a source to
    a sink. ``("D", n)`` gives D~_n on n+1 vertices; ``("E", n)`` gives E~_n.
    """
    if family == "A":
        p, q = params
        if p < 1 or q < 1:
            raise InputError("A~_{p,q} needs p, q >= 1")
        sink = p
        arrows = [(i, i + 1) for i in range(p)]
        chain = [0] + list(range(p + 1, p + q)) + [sink]
        arrows += [(chain[i], chain[i + 1]) for i in range(q)]
        return Quiver(p + q, tuple(arrows))
    if family == "D":
        (n,) = params
        if n < 4:
            raise InputError("D~_n needs n >= 4")
        edges = _path_edges(n - 1) + [(1, n - 1), (n - 3, n)]
        return Quiver(n + 1, tuple(edges))
    if family == "E":
        (n,) = params
        arms = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}.get(n)
        if arms is None:
            raise InputError(f"no extended diagram E~{n}")
        count, edges = _star_edges(arms)
        return Quiver(count, tuple(edges))
    raise InputError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# roots and the Serre functor on indecomposables


@dataclass(frozen=True, order=True)
class Root:
    dim_vector: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return sum(self.dim_vector)


def _symmetric_cartan(q: Quiver) -> IntMatrix:
    e = euler_matrix(q)
    return e + e.T


def positive_roots(d: DynkinType) -> list[Root]:
    """All positive roots, by closure of the simple roots under simple reflections."""
    c = _symmetric_cartan(d.quiver)
    n = d.rank
    simple = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for v in frontier:
            cv = c @ v
            for i in range(n):
                w = list(v)
                w[i] -= cv[i]
                w = tuple(w)
                if w != v and all(x >= 0 for x in w) and any(w) and w not in found:
                    found.add(w)
                    new.append(w)
        frontier = new
    return sorted((Root(v) for v in found), key=lambda r: (r.dimension, r.dim_vector))


def coxeter_number(d: DynkinType) -> int:
    if d.family == "A":
        return d.rank + 1
    if d.family == "D":
        return 2 * d.rank - 2
    return _COXETER_NUMBER["E"][d.rank]


def ar_translate(d: DynkinType, obj: tuple[Root, int]) -> tuple[Root, int]:
    """Serre functor on an indecomposable M[s]: P_i -> I_i, otherwise tau(M)[s + 1]."""
    root, shift = obj
    q = d.quiver
    proj = projective_dims(q)
    if root.dim_vector in proj:
        i = proj.index(root.dim_vector)
        return Root(injective_dims(q)[i]), shift
    image = coxeter_matrix(q) @ root.dim_vector
    if not all(x >= 0 for x in image) or not any(image):
        raise AssertionError(f"tau of non-projective {root.dim_vector} is not a positive root")
    return Root(image), shift + 1


def diagram_automorphism_matrix(q: Quiver, perm: Sequence[int]) -> IntMatrix:
    """Permutation matrix sending e_i to e_perm[i]; perm must preserve the arrows."""
    perm = tuple(perm)
    if sorted(perm) != list(range(q.vertex_count)):
        raise InputError(f"{perm} is not a permutation of the vertices")
    if Counter((perm[s], perm[t]) for s, t in q.arrows) != Counter(q.arrows):
        raise AdmissibilityError(f"{perm} does not preserve the arrows of the quiver")
    n = q.vertex_count
    return IntMatrix([[int(perm[j] == i) for j in range(n)] for i in range(n)])
