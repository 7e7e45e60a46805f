"""Rational polyhedral cones with exact dual representations.

A :class:`Cone` simultaneously stores a canonical V-representation (extreme
rays plus a lineality basis) and a canonical H-representation (facet normals
plus span equations).  Conversions run through a double description pass in
exact integer arithmetic; because both sides are kept canonical, dualizing a
cone is a pure swap of the two representations and is an exact involution.

Canonical form:

* rays are primitive integer vectors, reduced modulo the lineality span
  (zero entries at the pivot columns of the lineality basis) and sorted
  lexicographically;
* the lineality basis is the lower-echelon HNF basis of the saturated
  lattice ``span(lineality) ∩ Z^n``;
* facet normals and span equations are the rays/lineality of the dual cone,
  canonicalized the same way.

Two equal cones therefore have identical serialized forms.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DimensionMismatch, RankLimitExceeded
from .linalg import (
    dot,
    mat,
    mat_vec,
    primitive,
    rank as mat_rank,
    reduce_mod_subspace,
    saturation_of_rowspan,
    vec_add,
)

RANK_LIMIT = 8

IntVec = tuple


def _check_rank(rank: int) -> None:
    if rank < 0:
        raise ValueError("ambient rank must be nonnegative")
    if rank > RANK_LIMIT:
        raise RankLimitExceeded(f"ambient rank {rank} exceeds supported limit {RANK_LIMIT}")


def _check_dim(v: Sequence, rank: int) -> None:
    if len(v) != rank:
        raise DimensionMismatch(f"vector of length {len(v)} in ambient rank {rank}")


# ---------------------------------------------------------------------------
# Double description: V-representation of {x : a·x >= 0 for a in ineqs,
#                                               e·x  = 0 for e in eqns}.

def _dd(ineqs: Sequence[IntVec], eqns: Sequence[IntVec], rank: int):
    """Returns (lineality vectors, extreme rays) of the solution cone.

    Rays carry no canonical form here; callers canonicalize.  Uses the
    classic incremental algorithm with the combinatorial adjacency test,
    tracking active constraint sets as bitmasks.
    """
    lin: list[IntVec] = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    rays: list[IntVec] = []
    active: list[int] = []  # bitmask over processed constraints, parallel to rays

    constraints: list[IntVec] = []
    for e in eqns:
        constraints.append(tuple(e))
        constraints.append(tuple(-x for x in e))
    constraints.extend(tuple(a) for a in ineqs)

    for idx, a in enumerate(constraints):
        _check_dim(a, rank)
        if all(x == 0 for x in a):
            active = [mask | (1 << idx) for mask in active]
            continue
        lvals = [dot(a, l) for l in lin]
        j0 = next((j for j, v in enumerate(lvals) if v != 0), None)
        if j0 is not None:
            l0 = lin[j0]
            v0 = lvals[j0]
            if v0 < 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            new_lin = []
            for j, l in enumerate(lin):
                if j == j0:
                    continue
                new_lin.append(primitive(tuple(v0 * x - lvals[j] * y for x, y in zip(l, l0))))
            new_rays = []
            for r in rays:
                rv = dot(a, r)
                new_rays.append(primitive(tuple(v0 * x - rv * y for x, y in zip(r, l0))))
            all_prev = (1 << idx) - 1
            lin = new_lin
            rays = new_rays + [l0]
            active = [mask | (1 << idx) for mask in active] + [all_prev]
            continue
        # all lineality orthogonal to a: partition the rays
        vals = [dot(a, r) for r in rays]
        plus = [k for k, v in enumerate(vals) if v > 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        minus = [k for k, v in enumerate(vals) if v < 0]
        if not minus:
            active = [
                mask | (1 << idx) if vals[k] == 0 else mask
                for k, mask in enumerate(active)
            ]
            continue
        new_rays = [rays[k] for k in plus] + [rays[k] for k in zero]
        new_active = [active[k] for k in plus] + [active[k] | (1 << idx) for k in zero]
        for kp in plus:
            for km in minus:
                meet = active[kp] & active[km]
                adjacent = True
                for ko in range(len(rays)):
                    if ko in (kp, km):
                        continue
                    if meet & active[ko] == meet:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = tuple(
                    vals[kp] * x - vals[km] * y for x, y in zip(rays[km], rays[kp])
                )
                new_rays.append(primitive(comb))
                new_active.append(meet | (1 << idx))
        rays = new_rays
        active = new_active
    return lin, rays


def _canonical_v(lin: Iterable[IntVec], rays: Iterable[IntVec], rank: int):
    """Canonicalize a raw V-representation: HNF lineality basis, rays
    primitive / reduced / sorted / deduplicated."""
    lin_basis = saturation_of_rowspan(mat(lin), rank)
    out = set()
    for r in rays:
        red = primitive(reduce_mod_subspace(r, lin_basis))
        if any(x != 0 for x in red):
            out.add(red)
    return lin_basis, tuple(sorted(out))


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone in canonical dual-pair form."""

    rank: int
    rays: tuple[IntVec, ...]
    lineality: tuple[IntVec, ...]
    facets: tuple[IntVec, ...] = field(compare=False)
    equations: tuple[IntVec, ...] = field(compare=False)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_v(ray_gens: Sequence[IntVec], lin_gens: Sequence[IntVec], rank: int) -> "Cone":
        _check_rank(rank)
        for g in list(ray_gens) + list(lin_gens):
            _check_dim(g, rank)
        dual_lin, dual_rays = _dd(list(ray_gens), list(lin_gens), rank)
        equations, facets = _canonical_v(dual_lin, dual_rays, rank)
        prim_lin, prim_rays = _dd(list(facets), list(equations), rank)
        lineality, rays = _canonical_v(prim_lin, prim_rays, rank)
        return Cone(rank, rays, lineality, facets, equations)

    @staticmethod
    def from_generators(generators: Sequence[IntVec], rank: int) -> "Cone":
        return Cone.from_v(generators, [], rank)

    @staticmethod
    def from_halfspaces(
        normals: Sequence[IntVec], equations: Sequence[IntVec], rank: int
    ) -> "Cone":
        _check_rank(rank)
        for a in list(normals) + list(equations):
            _check_dim(a, rank)
        prim_lin, prim_rays = _dd(list(normals), list(equations), rank)
        lineality, rays = _canonical_v(prim_lin, prim_rays, rank)
        dual_lin, dual_rays = _dd(list(rays), list(lineality), rank)
        eqs, facets = _canonical_v(dual_lin, dual_rays, rank)
        return Cone(rank, rays, lineality, facets, eqs)

    @staticmethod
    def zero(rank: int) -> "Cone":
        return Cone.from_generators([], rank)

    @staticmethod
    def full(rank: int) -> "Cone":
        return Cone.from_halfspaces([], [], rank)

    # -- basic queries -------------------------------------------------------

    def dim(self) -> int:
        gens = self.rays + self.lineality
        if not gens:
            return 0
        return mat_rank(mat(gens))

    def is_pointed(self) -> bool:
        return not self.lineality

    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, point: Sequence) -> bool:
        _check_dim(point, self.rank)
        return all(dot(f, point) >= 0 for f in self.facets) and all(
            dot(e, point) == 0 for e in self.equations
        )

    def contains_cone(self, other: "Cone") -> bool:
        if other.rank != self.rank:
            raise DimensionMismatch("cones in different ambient ranks")
        gens = list(other.rays) + list(other.lineality) + [
            tuple(-x for x in l) for l in other.lineality
        ]
        return all(self.contains(g) for g in gens)

    def relative_interior_point(self) -> IntVec:
        """Sum of the extreme rays; lies in the relative interior."""
        point = (0,) * self.rank
        for r in self.rays:
            point = vec_add(point, r)
        return point

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "facets": [list(f) for f in self.facets],
            "lineality": [list(l) for l in self.lineality],
        }

    @staticmethod
    def from_dict(data: dict) -> "Cone":
        cone = Cone.from_v(
            [tuple(r) for r in data["rays"]],
            [tuple(l) for l in data["lineality"]],
            int(data["rank"]),
        )
        if [list(f) for f in cone.facets] != [list(f) for f in data["facets"]]:
            raise ValueError("serialized cone is not in canonical form")
        return cone

    def __repr__(self) -> str:
        parts = [f"rank={self.rank}", f"rays={list(self.rays)}"]
        if self.lineality:
            parts.append(f"lineality={list(self.lineality)}")
        return "Cone(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class Face:
    """A face of a cone together with a supporting vector from the dual:
    face = cone ∩ {x : <supporting_vector, x> = 0}."""

    cone: Cone
    supporting_vector: IntVec


# ---------------------------------------------------------------------------
# Operations.

def double_description(generators: Sequence[IntVec], rank: int) -> Cone:
    """Cone spanned by the generators, with both representations canonical."""
    return Cone.from_generators(generators, rank)


def dualize(c: Cone) -> Cone:
    """The dual cone {u : <u, v> >= 0 for all v in c}.  Exact involution."""
    return Cone(c.rank, c.facets, c.equations, c.rays, c.lineality)


def intersect(a: Cone, b: Cone) -> Cone:
    """Intersection: H-representations concatenated, then re-canonicalized."""
    if a.rank != b.rank:
        raise DimensionMismatch(f"ranks {a.rank} and {b.rank} differ")
    return Cone.from_halfspaces(a.facets + b.facets, a.equations + b.equations, a.rank)


def image(m, c: Cone) -> Cone:
    """Image of the cone under an integer matrix (rows map to target rank)."""
    if not m:
        return Cone.zero(0)
    if len(m[0]) != c.rank:
        raise DimensionMismatch(
            f"matrix has {len(m[0])} columns, cone lives in rank {c.rank}"
        )
    target = len(m)
    ray_images = [mat_vec(m, r) for r in c.rays]
    lin_images = [mat_vec(m, l) for l in c.lineality]
    return Cone.from_v(ray_images, lin_images, target)


def contains(c: Cone, point: Sequence) -> bool:
    return c.contains(point)


def relative_interior_point(c: Cone) -> IntVec:
    return c.relative_interior_point()


def faces(c: Cone) -> tuple[Face, ...]:
    """All faces of the cone, each certified by a supporting vector.

    Faces are the intersections of facet subsets; they are enumerated by
    closing the facet incidence sets under intersection, which visits every
    subset intersection once.  The supporting vector of a face is the sum of
    all facet normals vanishing on it (zero for the cone itself).  Sorted by
    (dimension, rays).  Memoized; the lock makes the lattice compute once
    even under concurrent readers.
    """
    with _faces_lock:
        return _faces_uncached(c)


_faces_lock = threading.Lock()


@lru_cache(maxsize=None)
def _faces_uncached(c: Cone) -> tuple[Face, ...]:
    ray_sets = []
    for f in c.facets:
        ray_sets.append(frozenset(i for i, r in enumerate(c.rays) if dot(f, r) == 0))
    full = frozenset(range(len(c.rays)))
    keys = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for key in frontier:
            for rs in ray_sets:
                meet = key & rs
                if meet not in keys:
                    keys.add(meet)
                    nxt.append(meet)
        frontier = nxt
    out = []
    for key in keys:
        gens = [c.rays[i] for i in sorted(key)]
        sub = Cone.from_v(gens, c.lineality, c.rank)
        support = (0,) * c.rank
        for f, rs in zip(c.facets, ray_sets):
            if key <= rs:
                support = vec_add(support, f)
        out.append(Face(sub, support))
    out.sort(key=lambda fa: (fa.cone.dim(), fa.cone.rays))
    return tuple(out)


def is_face_of(sub: Cone, c: Cone) -> bool:
    """Exact test: is `sub` a face of `c`?"""
    return any(f.cone == sub for f in faces(c))


def serialize(c: Cone) -> dict:
    return c.to_dict()


def parse(data: dict) -> Cone:
    return Cone.from_dict(data)
