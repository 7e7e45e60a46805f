"""Hilbert bases of cone semigroups and saturation of graded pieces.

The Hilbert basis of a pointed cone is computed by triangulating the cone
over its extreme rays, enumerating the lattice points of each simplex's
half-open fundamental parallelepiped (via the Smith normal form of the ray
matrix, so the work is proportional to the index, not to a bounding box),
and then discarding reducible candidates.  A candidate h is reducible
exactly when h - g lies in the cone for some other nonzero candidate g.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cones import Cone, faces, image
from .errors import NotPointedError, SaturationBoundExhausted
from .linalg import (
    cokernel_projection,
    fraction_inverse,
    mat,
    mat_vec,
    saturation_of_rowspan,
    snf,
    solve,
    solve_integer,
    transpose,
    unimodular_inverse,
    vec_add,
    vec_sub,
)


@dataclass(frozen=True)
class HilbertBasis:
    """Canonical generating set of cone ∩ Z^rank.

    For a pointed cone this is the unique minimal (irreducible) generating
    set.  For a non-pointed cone the semigroup is a group along the
    lineality; ``monoid_generators`` then returns plus/minus a lattice basis
    of the lineality together with lifted generators of the pointed
    quotient, and ``irreducible`` is False.
    """

    cone: Cone
    elements: tuple[tuple, ...]
    irreducible: bool = True


def _express_in_basis(v, basis_rows):
    """Integer coordinates of v in a basis (rows) of a saturated lattice."""
    x = solve(transpose(mat(basis_rows)), tuple(v))
    assert x is not None
    out = tuple(int(c) for c in x)
    assert all(Fraction(c) == xc for c, xc in zip(out, x))
    return out


def _parallelepiped_points(ray_cols):
    """Lattice points of {V·t : t in [0,1)^d} for a nonsingular integer
    matrix V (columns are the simplex rays), via Z^d / V·Z^d coset reps."""
    d = len(ray_cols)
    v_mat = transpose(mat(ray_cols))  # columns are the rays
    s, u, _ = snf(v_mat)
    u_inv = unimodular_inverse(u)
    v_inv = fraction_inverse(v_mat)
    diag = [s[i][i] for i in range(d)]
    points = set()
    for y in itertools.product(*(range(di) for di in diag)):
        x = mat_vec(u_inv, y)
        t = mat_vec(v_inv, x)
        frac = tuple(ti - (ti.numerator // ti.denominator) for ti in t)
        p = mat_vec(v_mat, frac)
        assert all(c.denominator == 1 for c in p)
        points.add(tuple(int(c) for c in p))
    return points


def _triangulate(cone: Cone) -> list[tuple]:
    """Simplicial subdivision of a pointed cone into tuples of rays,
    each tuple linearly independent of size dim(cone)."""
    d = cone.dim()
    if len(cone.rays) == d:
        return [cone.rays]
    anchor = cone.rays[0]
    simplices = []
    for f in faces(cone):
        if f.cone.dim() != d - 1:
            continue
        if f.cone.contains(anchor):
            continue
        for simplex in _triangulate(f.cone):
            simplices.append((anchor,) + simplex)
    return simplices


def hilbert_basis(cone: Cone, lattice_rank: int | None = None) -> HilbertBasis:
    """Unique minimal generating set of cone ∩ Z^rank for a pointed cone."""
    if lattice_rank is not None and lattice_rank != cone.rank:
        raise ValueError(f"lattice rank {lattice_rank} != ambient rank {cone.rank}")
    if not cone.is_pointed():
        raise NotPointedError("cone has lineality: no finite Hilbert basis")
    if not cone.rays:
        return HilbertBasis(cone, ())

    d = cone.dim()
    if d < cone.rank:
        # work in coordinates of the saturated span lattice
        span_rows = saturation_of_rowspan(mat(cone.rays), cone.rank)
        coords = [_express_in_basis(r, span_rows) for r in cone.rays]
        sub = Cone.from_generators(coords, d)
        inner = hilbert_basis(sub)
        lifted = [
            tuple(
                sum(c * span_rows[i][j] for i, c in enumerate(e))
                for j in range(cone.rank)
            )
            for e in inner.elements
        ]
        return HilbertBasis(cone, tuple(sorted(lifted)))

    candidates = set(cone.rays)
    for simplex in _triangulate(cone):
        for p in _parallelepiped_points(simplex):
            if any(x != 0 for x in p):
                candidates.add(p)

    def reducible(h):
        for g in candidates:
            if g == h:
                continue
            diff = vec_sub(h, g)
            if cone.contains(diff):
                return True
        return False

    elements = tuple(sorted(h for h in candidates if not reducible(h)))
    return HilbertBasis(cone, elements)


def monoid_generators(cone: Cone) -> HilbertBasis:
    """Canonical finite generating set of cone ∩ Z^rank for any cone.

    Pointed cones get their Hilbert basis.  Otherwise the generators are
    plus/minus an HNF basis of the lineality lattice together with lifts of
    the Hilbert basis of the pointed quotient; this set generates but is not
    irreducible (no minimal set exists along the lineality).
    """
    if cone.is_pointed():
        return hilbert_basis(cone)
    lin = cone.lineality
    proj = cokernel_projection(transpose(mat(lin)))
    quotient = image(proj, cone)
    qbasis = hilbert_basis(quotient)
    # integral right inverse of proj: proj has saturated full row rank
    section_cols = []
    for i in range(len(proj)):
        e = tuple(1 if j == i else 0 for j in range(len(proj)))
        x = solve_integer(proj, e)
        assert x is not None
        section_cols.append(x)
    lifts = []
    for e in qbasis.elements:
        lift = (0,) * cone.rank
        for c, col in zip(e, section_cols):
            lift = vec_add(lift, tuple(c * x for x in col))
        assert cone.contains(lift)
        lifts.append(lift)
    gens = set(lifts)
    for l in lin:
        gens.add(tuple(l))
        gens.add(tuple(-x for x in l))
    return HilbertBasis(cone, tuple(sorted(gens)), irreducible=False)


# ---------------------------------------------------------------------------
# Saturation factors.

def _fiber_cone(dual_cone: Cone, grading, weight, k: int) -> Cone:
    """Cone {(u, t) : u in dual_cone, grading·u = t·k·weight, t >= 0}."""
    n = dual_cone.rank
    ineqs = [tuple(f) + (0,) for f in dual_cone.facets]
    ineqs.append((0,) * n + (1,))
    eqns = [tuple(e) + (0,) for e in dual_cone.equations]
    for row, w in zip(grading, weight):
        eqns.append(tuple(row) + (-k * w,))
    return Cone.from_halfspaces(ineqs, eqns, n + 1)


def _fiber_vertex_denominators(dual_cone: Cone, grading, weight) -> set[int]:
    """Denominators of the vertex coordinates of {u in dual_cone : i(u) = weight}."""
    homog = _fiber_cone(dual_cone, grading, weight, 1)
    denoms = set()
    for r in homog.rays:
        t = r[-1]
        if t == 0:
            continue
        for c in r[:-1]:
            f = Fraction(c, t)
            if f.denominator > 1:
                denoms.add(f.denominator)
    return denoms


def saturation_factor(weight, grading, toric) -> int:
    """Least k such that the degree-k·weight Veronese piece of the fiber
    monoid {u in sigma_dual ∩ M : grading·u in Z>=0 · k·weight} is generated
    by its degree-one slab.

    Decided exactly: the fiber monoid of k·weight is generated in degree one
    iff every Hilbert basis element of the homogenized fiber cone has degree
    component 0 or 1.  The search is capped by the product of the distinct
    denominators of the fiber polyhedron's vertex coordinates, scaled by the
    fiber dimension minus one (degree-one generation can fail at integral
    fibers up to that dilation, e.g. at a Reeve simplex); beyond the cap a
    SaturationBoundExhausted diagnosis is raised rather than guessing.
    """
    dual_cone = toric.sigma_dual
    if not dual_cone.is_pointed():
        raise NotPointedError("saturation factors need a pointed weight cone")
    weight = tuple(weight)
    omega_down = image(grading, dual_cone)
    if not omega_down.contains(weight):
        raise ValueError(f"weight {weight} lies outside the downgraded weight cone")
    if all(w == 0 for w in weight):
        return 1
    bound = 1
    for d in _fiber_vertex_denominators(dual_cone, grading, weight):
        bound *= d
    fiber_dim = _fiber_cone(dual_cone, grading, weight, 1).dim() - 1
    bound *= max(1, fiber_dim - 1)
    checked = []
    for k in range(1, bound + 1):
        fiber = _fiber_cone(dual_cone, grading, weight, k)
        hb = hilbert_basis(fiber)
        worst = max((e[-1] for e in hb.elements), default=0)
        checked.append(worst)
        if worst <= 1:
            return k
    raise SaturationBoundExhausted(weight, bound, checked)


@lru_cache(maxsize=None)
def cached_hilbert_basis(cone: Cone) -> HilbertBasis:
    return hilbert_basis(cone)
