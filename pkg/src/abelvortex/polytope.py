"""Rational convex polytopes with integer facet normals.

Coordinates are stored in pi-normalised units: the physical moment value is
``pi`` times the stored coordinate, which keeps every polytope built from an
integer matrix exactly rational.

A polytope is kept in both representations. Facets are ``(normal, offset)``
pairs describing ``normal . x <= offset`` with primitive integer normals, and
vertices are enumerated once at construction by brute force over facet
n-subsets. That is only sensible for small ``n`` and ``d``, which is the
regime of interest (n <= 4, d <= 24).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _exact as ex
from .errors import DegenerateError, InvalidInputError, UnboundedError

DEFAULT_EPS = 1e-9


def primitive_vector(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries.

    >>> primitive_vector((2, 4, -6))
    (1, 2, -3)
    """
    ints = []
    for x in v:
        if isinstance(x, bool) or int(x) != x:
            raise InvalidInputError(f"non-integer entry {x!r} in {v!r}")
        ints.append(int(x))
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g == 0:
        raise InvalidInputError("the zero vector has no primitive form")
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class FaceLocation:
    """Where a point sits relative to a polytope.

    ``tight_set`` lists the facets within ``eps`` of equality. For an exterior
    point it lists the violated facets instead and ``face_dim`` is -1.
    """

    status: str
    tight_set: tuple[int, ...]
    face_dim: int

    @property
    def is_interior(self) -> bool:
        return self.status == "interior"

    def to_json(self) -> dict:
        return {"status": self.status, "tight_set": list(self.tight_set),
                "face_dim": self.face_dim}


@dataclass(frozen=True)
class LatticePolytope:
    dim: int
    normals: tuple[tuple[int, ...], ...]
    offsets: tuple[Fraction, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    # facets tight at each vertex, aligned with ``vertices``
    vertex_facets: tuple[frozenset, ...] = field(repr=False)

    # ------------------------------------------------------------------ build
    @classmethod
    def from_halfspaces(cls, normals: Sequence[Sequence[int]],
                        offsets: Sequence) -> "LatticePolytope":
        """Build ``{x : normals[j] . x <= offsets[j]}``.

        Normals are reduced to primitive form (offsets rescaled with them) and
        redundant inequalities are dropped. When two inequalities share a
        normal the tighter one survives; on an exact tie the first occurrence
        is kept, so facet order is the order of first appearance.
        """
        if len(normals) == 0 or len(normals) != len(offsets):
            raise InvalidInputError("need equally many normals and offsets, at least one")
        n = len(normals[0])
        if n < 1 or any(len(u) != n for u in normals):
            raise InvalidInputError("normals must share one positive dimension")

        prim, offs = [], []
        for u, lam in zip(normals, offsets):
            p = primitive_vector(u)
            scale = next(a // b for a, b in zip(u, p) if b != 0)
            prim.append(p)
            offs.append(ex.to_fraction(lam) / scale)

        rk = ex.rank(prim)
        if rk < n:
            # the region, if nonempty, contains a line
            if _feasible_reduced(prim, offs):
                raise UnboundedError("half-spaces do not bound a region (it contains a line)")
            raise DegenerateError("half-spaces have empty intersection")

        verts = _enumerate_vertices(prim, offs, n)
        if not verts:
            raise DegenerateError("half-spaces have empty intersection")
        if _has_recession_ray(prim, n):
            raise UnboundedError("half-spaces describe an unbounded region")
        if _affine_rank(verts) < n:
            raise DegenerateError("region is not full-dimensional")

        keep = []
        for j, (u, lam) in enumerate(zip(prim, offs)):
            on = [v for v in verts if _dot(u, v) == lam]
            if len(on) < n or _affine_rank(on) < n - 1:
                continue
            if any(prim[k] == u and offs[k] == lam for k in keep):
                continue
            keep.append(j)

        normals_k = tuple(prim[j] for j in keep)
        offsets_k = tuple(offs[j] for j in keep)
        verts = sorted(verts)
        vf = tuple(frozenset(i for i, (u, lam) in enumerate(zip(normals_k, offsets_k))
                             if _dot(u, v) == lam) for v in verts)
        return cls(n, normals_k, offsets_k, tuple(verts), vf)

    @classmethod
    def from_json(cls, obj: dict) -> "LatticePolytope":
        try:
            normals = [[int(x) for x in row] for row in obj["normals"]]
            offsets = [ex.to_fraction(x) for x in obj["offsets"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed polytope object: {exc}") from exc
        return cls.from_halfspaces(normals, offsets)

    def to_json(self) -> dict:
        return {"normals": [list(u) for u in self.normals],
                "offsets": [ex.fraction_str(x) for x in self.offsets]}

    # ------------------------------------------------------------- accessors
    @property
    def n_facets(self) -> int:
        return len(self.normals)

    def vertices_array(self) -> np.ndarray:
        return np.array([[float(x) for x in v] for v in self.vertices])

    def normals_array(self) -> np.ndarray:
        return np.array(self.normals, dtype=float)

    def offsets_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.offsets])

    def facet_vertices(self, j: int) -> list[int]:
        return [i for i, fs in enumerate(self.vertex_facets) if j in fs]

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        """Exact membership for rational points."""
        xs = [ex.to_fraction(v) for v in x]
        if strict:
            return all(_dot(u, xs) < lam for u, lam in zip(self.normals, self.offsets))
        return all(_dot(u, xs) <= lam for u, lam in zip(self.normals, self.offsets))


def from_halfspaces(normals, offsets) -> LatticePolytope:
    return LatticePolytope.from_halfspaces(normals, offsets)


# ---------------------------------------------------------------- queries

def locate(P: LatticePolytope, c: Sequence, eps: float = DEFAULT_EPS) -> FaceLocation:
    """Classify ``c`` as interior, boundary or exterior of ``P``.

    Rational input is handled exactly (``eps=0`` gives a sharp answer); float
    input is compared against ``eps`` in the raw ``normal . c - offset`` gap.
    """
    if len(c) != P.dim:
        raise InvalidInputError(f"point has dimension {len(c)}, polytope {P.dim}")
    if eps < 0:
        raise InvalidInputError("eps must be non-negative")
    exact = all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in c)
    if exact:
        tol = ex.to_fraction(eps)
        gaps = [_dot(u, c) - lam for u, lam in zip(P.normals, P.offsets)]
    else:
        tol = eps
        cf = np.asarray(c, dtype=float)
        gaps = list(P.normals_array() @ cf - P.offsets_array())
    violated = tuple(j for j, g in enumerate(gaps) if g > tol)
    if violated:
        return FaceLocation("exterior", violated, -1)
    tight = tuple(j for j, g in enumerate(gaps) if abs(g) <= tol)
    if not tight:
        return FaceLocation("interior", (), P.dim)
    face_dim = P.dim - ex.rank([P.normals[j] for j in tight])
    return FaceLocation("boundary", tight, face_dim)


def nonempty_facet_intersections(P: LatticePolytope) -> frozenset:
    """All facet subsets with a common point, the empty set included."""
    out = {frozenset()}
    for fs in P.vertex_facets:
        items = sorted(fs)
        for k in range(1, len(items) + 1):
            out.update(frozenset(s) for s in combinations(items, k))
    return frozenset(out)


@dataclass(frozen=True)
class DelzantCertificate:
    is_delzant: bool
    # per vertex: determinant of the primitive edge directions, None if the
    # vertex is not simple
    determinants: tuple

    def failing_vertices(self) -> list[int]:
        return [i for i, d in enumerate(self.determinants) if d is None or abs(d) != 1]


def edge_directions(P: LatticePolytope, vertex: int) -> list[tuple[int, ...]] | None:
    """Primitive integer edge directions at a simple vertex, else ``None``."""
    tight = sorted(P.vertex_facets[vertex])
    if len(tight) != P.dim:
        return None
    inv = ex.inverse([P.normals[j] for j in tight])
    # column i of -inv moves off facet tight[i] and stays on the others
    return [ex.primitive_int([-inv[r][i] for r in range(P.dim)]) for i in range(P.dim)]


def is_delzant(P: LatticePolytope) -> DelzantCertificate:
    dets = []
    for i in range(len(P.vertices)):
        dirs = edge_directions(P, i)
        dets.append(None if dirs is None else ex.int_det(dirs))
    ok = all(d is not None and abs(d) == 1 for d in dets)
    return DelzantCertificate(ok, tuple(dets))


def triangulate(P: LatticePolytope) -> list[tuple[int, ...]]:
    """Pulling triangulation into simplices given as vertex-index tuples."""
    all_v = frozenset(range(len(P.vertices)))
    return _pull(P, all_v, frozenset(), P.dim)


def _pull(P, verts: frozenset, facets: frozenset, k: int) -> list[tuple[int, ...]]:
    if k == 0:
        return [(min(verts),)]
    apex = min(verts)
    seen = set()
    out = []
    for j in range(P.n_facets):
        if j in facets:
            continue
        sub = frozenset(i for i in verts if j in P.vertex_facets[i])
        if apex in sub or sub in seen:
            continue
        if _affine_rank([P.vertices[i] for i in sub]) != k - 1:
            continue
        seen.add(sub)
        for simplex in _pull(P, sub, facets | {j}, k - 1):
            out.append((apex,) + simplex)
    return out


def _simplex_volume(points: Sequence[Sequence[Fraction]]) -> Fraction:
    p0 = points[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return abs(ex.det(rows)) / math.factorial(len(rows))


def volume(P: LatticePolytope) -> Fraction:
    """Exact Lebesgue volume in pi-units."""
    return sum((_simplex_volume([P.vertices[i] for i in s]) for s in triangulate(P)),
               Fraction(0))


def barycentre(P: LatticePolytope) -> tuple[Fraction, ...]:
    """Volume centroid, exact."""
    total = Fraction(0)
    acc = [Fraction(0)] * P.dim
    for s in triangulate(P):
        pts = [P.vertices[i] for i in s]
        vol = _simplex_volume(pts)
        total += vol
        for k in range(P.dim):
            acc[k] += vol * sum(p[k] for p in pts) / len(pts)
    return tuple(a / total for a in acc)


def support_value(P: LatticePolytope, v: Sequence):
    """``max_{u in P} v . u``; exact for rational ``v``."""
    if len(v) != P.dim:
        raise InvalidInputError("direction has the wrong dimension")
    if all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in v):
        return max(_dot(v, p) for p in P.vertices)
    return float(np.max(P.vertices_array() @ np.asarray(v, dtype=float)))


def translate(P: LatticePolytope, s: Sequence) -> LatticePolytope:
    if len(s) != P.dim:
        raise InvalidInputError("shift has the wrong dimension")
    sf = [ex.to_fraction(x) for x in s]
    offsets = tuple(lam + _dot(u, sf) for u, lam in zip(P.normals, P.offsets))
    verts = tuple(tuple(a + b for a, b in zip(v, sf)) for v in P.vertices)
    return LatticePolytope(P.dim, P.normals, offsets, verts, P.vertex_facets)


def unimodular_image(P: LatticePolytope, U: Sequence[Sequence[int]]) -> LatticePolytope:
    """Image of ``P`` under ``x -> U x`` for ``U`` in GL(n, Z).

    Normals transform by the inverse transpose and offsets are unchanged.
    """
    if abs(ex.int_det(U)) != 1:
        raise InvalidInputError("matrix is not unimodular")
    uinv = ex.inverse(U)
    normals = [[int(x) for x in ex.matvec(ex.transpose(uinv), u)] for u in P.normals]
    return LatticePolytope.from_halfspaces(normals, list(P.offsets))


# ---------------------------------------------------------------- helpers

def _dot(u: Iterable, v: Iterable):
    return sum(a * b for a, b in zip(u, v))


def _affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return ex.rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def _enumerate_vertices(normals, offsets, n) -> list[tuple[Fraction, ...]]:
    found = set()
    for idx in combinations(range(len(normals)), n):
        x = ex.solve([normals[j] for j in idx], [offsets[j] for j in idx])
        if x is None:
            continue
        if all(_dot(u, x) <= lam for u, lam in zip(normals, offsets)):
            found.add(tuple(x))
    return list(found)


def _has_recession_ray(normals, n) -> bool:
    """True when ``{y : normals . y <= 0}`` is more than the origin.

    Assumes the normals have full rank, so the cone is pointed and any
    nonzero cone has an extreme ray cut out by n-1 of the inequalities.
    """
    for idx in combinations(range(len(normals)), n - 1):
        rows = [normals[j] for j in idx]
        ns = ex.nullspace(rows, n)
        if len(ns) != 1:
            continue
        d = ns[0]
        for sign in (1, -1):
            if all(sign * _dot(u, d) <= 0 for u in normals):
                return True
    return False


def _feasible_reduced(normals, offsets) -> bool:
    """Feasibility of a rank-deficient system, via its row space."""
    _, pivots = ex.rref(ex.transpose(normals))
    # columns of normals^T at the pivots span the row space of ``normals``
    basis = [normals[j] for j in pivots]
    reduced = [[_dot(u, b) for b in basis] for u in normals]
    return bool(_enumerate_vertices(reduced, offsets, len(basis)))
