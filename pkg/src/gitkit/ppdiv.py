"""Polyhedral divisors: tailed polyhedra, evaluation, the toric quotient
base, the downgrade construction, and the graded-dimension verifier.

The downgrade of a toric variety along a subtorus produces a divisor on the
toric base Y' whose fan is the coarsest common refinement of the projected
faces of sigma; the coefficient over a ray with primitive generator v is
the slice of sigma over v, pushed into N' along a chosen integral section
of the quotient projection.  ``verify_reconstruction`` counts graded
dimensions on both sides of the construction and reports every fiber.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .cones import Cone, dualize, faces, image, intersect
from .downgrade import (
    SubtorusData,
    check_effective_quotient_action,
    downgraded_weight_cone,
)
from .errors import DimensionMismatch, UnboundedEvaluation
from .gitfan import AffineToricData
from .hilbert import saturation_factor
from .linalg import (
    dot,
    hnf_upper_rows,
    mat,
    mat_vec,
    primitive,
    reduce_mod_lattice,
    sign_normalized,
    solve,
    solve_integer,
    transpose,
    vec_add,
)
from .parallel import parallel_map


# ---------------------------------------------------------------------------
# Tailed polyhedra.

def _homogenization(vertices, tail: Cone) -> Cone:
    """Cone over the polyhedron: generated by (v, 1) and (tail, 0)."""
    n = tail.rank
    gens = [_int_row(tuple(v) + (1,)) for v in vertices]
    for r in tail.rays:
        gens.append(tuple(r) + (0,))
    lins = [tuple(l) + (0,) for l in tail.lineality]
    return Cone.from_v(gens, lins, n + 1)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _int_row(row):
    """Clear denominators of a halfspace/equation row (scale-invariant)."""
    denom = 1
    for x in row:
        if isinstance(x, Fraction):
            denom = denom * x.denominator // _gcd(denom, x.denominator)
    return tuple(int(x * denom) for x in row)


def _dehomogenize(cone: Cone):
    """Split rays of a homogenization cone back into vertices (last
    coordinate positive, scaled to 1) and tail generators (last coordinate
    zero)."""
    vertices = []
    tail_rays = []
    for r in cone.rays:
        t = r[-1]
        if t > 0:
            vertices.append(tuple(Fraction(x, t) for x in r[:-1]))
        else:
            tail_rays.append(r[:-1])
    tail_lin = [l[:-1] for l in cone.lineality]
    return vertices, tail_rays, tail_lin


@dataclass(frozen=True)
class TailedPolyhedron:
    """conv(vertices) + tail, with an irredundant sorted vertex list."""

    vertices: tuple[tuple, ...]
    tail: Cone

    @staticmethod
    def from_data(vertices, tail: Cone) -> "TailedPolyhedron":
        if not vertices:
            raise ValueError("a tailed polyhedron needs at least one vertex")
        pts = sorted({tuple(Fraction(x) for x in v) for v in vertices})
        for v in pts:
            if len(v) != tail.rank:
                raise DimensionMismatch("vertex length does not match tail rank")
        # prune points inside the hull of the others plus the tail
        keep = list(pts)
        changed = True
        while changed and len(keep) > 1:
            changed = False
            for v in list(keep):
                others = [w for w in keep if w != v]
                homog = _homogenization(others, tail)
                if homog.contains(_int_row(tuple(v) + (1,))):
                    keep = others
                    changed = True
                    break
        return TailedPolyhedron(tuple(keep), tail)

    @staticmethod
    def from_halfspaces(normals, offsets, rank: int) -> "TailedPolyhedron":
        """{y : <normal, y> >= offset}; raises on empty or vertex-free sets."""
        rows = [_int_row(tuple(a) + (-b,)) for a, b in zip(normals, offsets)]
        homog = Cone.from_halfspaces(rows + [(0,) * rank + (1,)], [], rank + 1)
        vertices, tail_rays, tail_lin = _dehomogenize(homog)
        if not vertices:
            raise ValueError("polyhedron has no vertices (empty or not pointed)")
        return TailedPolyhedron(
            tuple(sorted(vertices)), Cone.from_v(tail_rays, tail_lin, rank)
        )

    @property
    def rank(self) -> int:
        return self.tail.rank

    def recomputed_tail(self) -> Cone:
        """{w : w + P ⊆ P}, from the recession of the H-representation."""
        homog = _homogenization(self.vertices, self.tail)
        slice_rows = homog.equations + ((0,) * self.rank + (1,),)
        rec = Cone.from_halfspaces(homog.facets, slice_rows, self.rank + 1)
        return Cone.from_v(
            [r[:-1] for r in rec.rays], [l[:-1] for l in rec.lineality], self.rank
        )

    def support_value(self, u) -> Fraction:
        """min over the polyhedron of <u, .>; requires u in dual(tail)."""
        if len(u) != self.rank:
            raise DimensionMismatch("weight length does not match polyhedron rank")
        if not dualize(self.tail).contains(u):
            raise UnboundedEvaluation(
                f"<{tuple(u)}, .> is unbounded below on a coefficient"
            )
        return min(Fraction(dot(u, v)) for v in self.vertices)

    def translate(self, w) -> "TailedPolyhedron":
        return TailedPolyhedron(
            tuple(sorted(tuple(x + y for x, y in zip(v, w)) for v in self.vertices)),
            self.tail,
        )

    def to_dict(self) -> dict:
        return {
            "vertices": [[_frac_repr(x) for x in v] for v in self.vertices],
            "tail": self.tail.to_dict(),
        }


def _frac_repr(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def minkowski_sum(a: TailedPolyhedron, b: TailedPolyhedron) -> TailedPolyhedron:
    """Minkowski sum within the semigroup of polyhedra with a common tail."""
    if a.tail != b.tail:
        raise ValueError("tail cones differ: not in the same semigroup")
    sums = [
        tuple(x + y for x, y in zip(v, w))
        for v in a.vertices
        for w in b.vertices
    ]
    return TailedPolyhedron.from_data(sums, a.tail)


# ---------------------------------------------------------------------------
# Toric base and divisors.

@dataclass(frozen=True)
class ToricBase:
    """A fan with labeled rays (the torus-invariant prime divisors)."""

    rank: int
    fan: tuple[Cone, ...]
    rays: tuple[tuple[str, tuple], ...]  # (label, primitive generator)

    @staticmethod
    def from_cones(cones, rank: int) -> "ToricBase":
        closed: list[Cone] = []
        for c in cones:
            for f in faces(c):
                if f.cone not in closed:
                    closed.append(f.cone)
        fan = tuple(sorted(closed, key=lambda c: (c.dim(), c.rays)))
        for a, b in itertools.combinations(fan, 2):
            meet = intersect(a, b)
            if not any(f.cone == meet for f in faces(a)) or not any(
                f.cone == meet for f in faces(b)
            ):
                raise ValueError(f"not a fan: {a} and {b} do not meet in a face")
        gens = sorted(
            {c.rays[0] for c in fan if c.dim() == 1 and c.is_pointed()}
        )
        rays = tuple((f"rho_{i}", g) for i, g in enumerate(gens))
        return ToricBase(rank, fan, rays)

    def maximal_cones(self) -> tuple[Cone, ...]:
        out = []
        for c in self.fan:
            if not any(d is not c and d.contains_cone(c) for d in self.fan):
                out.append(c)
        return tuple(out)

    def is_complete(self) -> bool:
        if self.rank == 0:
            return True
        maxc = self.maximal_cones()
        if not maxc or any(c.dim() != self.rank for c in maxc):
            return False
        for c in maxc:
            for f in faces(c):
                if f.cone.dim() != self.rank - 1:
                    continue
                if sum(1 for d in maxc if d.contains_cone(f.cone)) < 2:
                    return False
        return True

    def generator_of(self, label: str) -> tuple:
        for lab, g in self.rays:
            if lab == label:
                return g
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [{"label": lab, "generator": list(g)} for lab, g in self.rays],
        }


@dataclass(frozen=True)
class RationalDivisor:
    """Exact rational coefficients on the labeled rays of the base."""

    coefficients: tuple[tuple[str, Fraction], ...]

    def __getitem__(self, label: str) -> Fraction:
        for lab, c in self.coefficients:
            if lab == label:
                return c
        raise KeyError(label)

    def as_dict(self) -> dict:
        return {lab: c for lab, c in self.coefficients}

    def scale(self, factor: Fraction) -> "RationalDivisor":
        return RationalDivisor(
            tuple((lab, c * factor) for lab, c in self.coefficients)
        )

    def to_dict(self) -> dict:
        return {lab: _frac_repr(c) for lab, c in self.coefficients}


@dataclass(frozen=True)
class PolyhedralDivisor:
    """Formal sum of tailed polyhedra over the rays of a toric base."""

    base: ToricBase
    coefficient_rank: int
    tail: Cone
    coefficients: tuple[tuple[str, TailedPolyhedron], ...]

    def __post_init__(self):
        labels = [lab for lab, _ in self.base.rays]
        if [lab for lab, _ in self.coefficients] != labels:
            raise ValueError("coefficients must cover exactly the base rays, in order")
        for _, poly in self.coefficients:
            if poly.tail != self.tail:
                raise ValueError("all coefficients must share the declared tail cone")

    def coefficient(self, label: str) -> TailedPolyhedron:
        for lab, poly in self.coefficients:
            if lab == label:
                return poly
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "tail": self.tail.to_dict(),
            "coefficients": {lab: poly.to_dict() for lab, poly in self.coefficients},
        }


def evaluate(div: PolyhedralDivisor, u) -> RationalDivisor:
    """Per-ray minima of <u, .> over the coefficients (exact)."""
    u = tuple(u)
    return RationalDivisor(
        tuple((lab, poly.support_value(u)) for lab, poly in div.coefficients)
    )


# ---------------------------------------------------------------------------
# The quotient fan of sigma along a subtorus.

def quotient_fan(sigma: Cone, sub: SubtorusData) -> ToricBase:
    """Coarsest common refinement, inside p(sigma), of the projections of
    the faces of sigma: the fan of the toric base Y'."""
    m = sub.quotient_rank
    if m == 0:
        return ToricBase(0, (Cone.zero(0),), ())
    proj = sub.projection
    projected = []
    for f in faces(sigma):
        img = image(proj, f.cone)
        if img not in projected:
            projected.append(img)
    support = image(proj, sigma)

    normals = []
    for c in projected:
        for h in c.facets + c.equations:
            h = sign_normalized(primitive(h))
            if any(x != 0 for x in h) and h not in normals:
                normals.append(h)

    chambers = [support]
    for h in normals:
        plus = Cone.from_halfspaces([h], [], m)
        minus = Cone.from_halfspaces([tuple(-x for x in h)], [], m)
        nxt = []
        for cell in chambers:
            hi = intersect(cell, plus)
            lo = intersect(cell, minus)
            pieces = [p for p in (hi, lo) if p.dim() == cell.dim()]
            if len(pieces) == 2:
                nxt.extend(pieces)
            else:
                nxt.append(cell)
        chambers = nxt

    cells = []
    for cell in chambers:
        sample = cell.relative_interior_point()
        k = support
        for c in projected:
            if c.contains(sample):
                k = intersect(k, c)
        if k not in cells:
            cells.append(k)
    return ToricBase.from_cones(cells, m)


# ---------------------------------------------------------------------------
# Section choice and the downgrade construction.

def choose_section(sub: SubtorusData):
    """Deterministic integral right inverse of the quotient projection,
    reduced to the canonical representative modulo the embedded lattice N'."""
    n = sub.rank
    m = sub.quotient_rank
    if m == 0:
        return tuple(() for _ in range(n))
    cols = []
    if sub.subtorus_rank:
        emb_rows = [
            tuple(sub.embedding[i][j] for i in range(n))
            for j in range(sub.subtorus_rank)
        ]
        lattice_rows = hnf_upper_rows(mat(emb_rows))
    else:
        lattice_rows = ()
    for i in range(m):
        e = tuple(1 if j == i else 0 for j in range(m))
        x = solve_integer(sub.projection, e)
        assert x is not None, "projection is surjective by construction"
        if lattice_rows:
            x = reduce_mod_lattice(x, lattice_rows)
        cols.append(x)
    section = transpose(mat(cols))
    for i in range(m):
        col = tuple(section[r][i] for r in range(n))
        img = mat_vec(sub.projection, col)
        assert img == tuple(1 if j == i else 0 for j in range(m))
    return section


def downgrade_ppdivisor(
    toric: AffineToricData, sub: SubtorusData, section=None
) -> PolyhedralDivisor:
    """The divisor on the quotient base presenting the subtorus action.

    The coefficient over a base ray with primitive generator v is the slice
    of sigma over v, written in N' coordinates via a section of the quotient
    projection (the canonical one unless another integral right inverse is
    supplied); the tail is sigma ∩ N', whose dual is the downgraded weight
    cone.
    """
    effective, cert = check_effective_quotient_action(toric, sub)
    if not effective:
        raise ValueError(f"quotient torus action is not effective: {cert}")
    sigma = toric.sigma
    n = toric.rank
    k = sub.subtorus_rank
    base = quotient_fan(sigma, sub)
    if section is None:
        section = choose_section(sub)
    emb_cols = [
        tuple(sub.embedding[i][j] for i in range(n)) for j in range(k)
    ]

    def pullback_row(f):
        return tuple(dot(f, col) for col in emb_cols)

    tail = Cone.from_halfspaces(
        [pullback_row(f) for f in sigma.facets],
        [pullback_row(e) for e in sigma.equations],
        k,
    )
    omega_down = downgraded_weight_cone(toric, sub)
    if dualize(tail) != omega_down:
        raise AssertionError(
            "dual of the coefficient tail does not match the downgraded weight cone"
        )
    coefficients = []
    for label, gen in base.rays:
        # slice {y : B y + section(gen) in sigma}, homogenized over (y, t)
        shift = mat_vec(section, gen) if section else (0,) * n
        homog = Cone.from_halfspaces(
            [pullback_row(f) + (dot(f, shift),) for f in sigma.facets]
            + [(0,) * k + (1,)],
            [pullback_row(e) + (dot(e, shift),) for e in sigma.equations],
            k + 1,
        )
        vertices, tail_rays, tail_lin = _dehomogenize(homog)
        if not vertices:
            raise AssertionError(f"slice over base ray {label} has no vertices")
        poly = TailedPolyhedron(
            tuple(sorted(vertices)), Cone.from_v(tail_rays, tail_lin, k)
        )
        if poly.tail != tail:
            raise AssertionError(f"slice over {label} has tail {poly.tail}, not {tail}")
        coefficients.append((label, poly))
    return PolyhedralDivisor(base, k, tail, tuple(coefficients))


# ---------------------------------------------------------------------------
# Reconstruction verification: graded dimensions on both sides.

@dataclass(frozen=True)
class FiberCheck:
    weight: tuple
    fiber_count: int
    section_count: int
    truncated: bool

    @property
    def equal(self) -> bool:
        return self.fiber_count == self.section_count


@dataclass(frozen=True)
class ReconstructionReport:
    box: int
    entries: tuple[FiberCheck, ...]

    @property
    def all_equal(self) -> bool:
        return all(e.equal for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "box": self.box,
            "fibers": [
                {
                    "weight": list(e.weight),
                    "fiber_count": e.fiber_count,
                    "section_count": e.section_count,
                    "equal": e.equal,
                    "truncated": e.truncated,
                }
                for e in self.entries
            ],
            "all_equal": self.all_equal,
        }


def _lattice_points_of_polyhedron(normals, offsets, rank, member=None):
    """Integer points of {z : <normal, z> >= offset} (must be bounded).

    Enumerates the integer bounding box of the vertex hull and filters
    exactly; `member` overrides the membership test."""
    if rank == 0:
        ok = all(0 >= b for b in offsets)
        return [()] if ok else []
    rows = [_int_row(tuple(a) + (-b,)) for a, b in zip(normals, offsets)]
    homog = Cone.from_halfspaces(rows + [(0,) * rank + (1,)], [], rank + 1)
    vertices, tail_rays, tail_lin = _dehomogenize(homog)
    if tail_rays or tail_lin:
        raise ValueError("polyhedron is unbounded")
    if not vertices:
        return []
    lo = [min(v[i] for v in vertices) for i in range(rank)]
    hi = [max(v[i] for v in vertices) for i in range(rank)]
    rng = [range(math.ceil(l), math.floor(h) + 1) for l, h in zip(lo, hi)]
    if member is None:
        member = lambda z: all(dot(a, z) >= b for a, b in zip(normals, offsets))
    return [z for z in itertools.product(*rng) if member(z)]


def verify_reconstruction(
    toric: AffineToricData,
    sub: SubtorusData,
    div: PolyhedralDivisor,
    box: int = 6,
    section=None,
) -> ReconstructionReport:
    """Compare graded dimensions: for every weight v of the subtorus inside
    the box, the number of degree-v lattice points of the weight monoid
    upstairs must equal the number of lattice points of the section
    polyhedron of the evaluated divisor downstairs.

    Unbounded fibers are truncated symmetrically at the box bound on both
    sides, through the splitting defined by the section (pass the section
    the divisor was built with when it is not the canonical one).
    """
    n = toric.rank
    k = sub.subtorus_rank
    m = sub.quotient_rank
    omega_down = downgraded_weight_cone(toric, sub)
    weights = [
        v
        for v in itertools.product(range(-box, box + 1), repeat=k)
        if omega_down.contains(v)
    ]
    if section is None:
        section = choose_section(sub)
    sect_t = transpose(section) if m else ()
    dual = toric.sigma_dual
    # recession of every fiber: {z : p^T z in sigma_dual}
    rec_rows = [mat_vec(sub.projection, f) for f in dual.facets]
    recession = Cone.from_halfspaces(rec_rows, [], m)
    bounded = recession == Cone.zero(m)

    def fiber_count(v):
        u0 = solve_integer(sub.char_map, v) if k else (0,) * n
        if u0 is None:
            return 0, False
        def u_of(z):
            u = u0
            for a, za in enumerate(z):
                if za:
                    col = tuple(sub.projection[a][j] for j in range(n))
                    u = vec_add(u, tuple(za * x for x in col))
            return u
        if bounded:
            normals = rec_rows
            offsets = [-dot(f, u0) for f in dual.facets]
            pts = _lattice_points_of_polyhedron(
                normals, offsets, m, member=lambda z: dual.contains(u_of(z))
            )
            return len(pts), False
        w0 = mat_vec(sect_t, u0) if m else ()
        count = 0
        ranges = [range(-box - w0[i], box - w0[i] + 1) for i in range(m)]
        for z in itertools.product(*ranges):
            if dual.contains(u_of(z)):
                count += 1
        return count, True

    def section_count(v):
        coeffs = evaluate(div, v)
        normals = [gen for _, gen in div.base.rays]
        offsets = [-coeffs[lab] for lab, _ in div.base.rays]
        sec_rec = Cone.from_halfspaces(normals, [], m)
        if sec_rec == Cone.zero(m):
            pts = _lattice_points_of_polyhedron(normals, offsets, m)
            return len(pts), False
        count = 0
        for w in itertools.product(range(-box, box + 1), repeat=m):
            if all(dot(a, w) >= b for a, b in zip(normals, offsets)):
                count += 1
        return count, True

    def check(v):
        fc, tr1 = fiber_count(v)
        sc, tr2 = section_count(v)
        return FiberCheck(tuple(v), fc, sc, tr1 or tr2)

    entries = parallel_map(check, weights)
    return ReconstructionReport(box, tuple(entries))


def homogenized_evaluate(
    div: PolyhedralDivisor, v, toric: AffineToricData, sub: SubtorusData
) -> RationalDivisor:
    """Evaluation through the saturation degree: evaluate at k·v and scale
    by 1/k, where k is the least saturated multiple of v."""
    v = tuple(v)
    k = saturation_factor(v, sub.char_map, toric)
    scaled = evaluate(div, tuple(k * x for x in v))
    return scaled.scale(Fraction(1, k))


# ---------------------------------------------------------------------------
# Properness verdicts.

@dataclass(frozen=True)
class PropernessSample:
    weight: tuple
    cartier: bool
    semiample: bool
    big_checked: bool
    big: bool


@dataclass(frozen=True)
class PropernessReport:
    verdict: str  # "proper" | "not proper" | "undecided"
    samples: tuple[PropernessSample, ...]
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "note": self.note,
            "samples": [
                {
                    "weight": list(s.weight),
                    "cartier": s.cartier,
                    "semiample": s.semiample,
                    **({"big": s.big} if s.big_checked else {}),
                }
                for s in self.samples
            ],
        }


def check_proper(div: PolyhedralDivisor) -> PropernessReport:
    """Verdict report: every evaluation must be rationally Cartier and
    semiample on the base, and big for weights interior to the dual of the
    tail.  Complete base fans are checked fully; a point base is proper
    vacuously; anything else is reported undecided."""
    base = div.base
    if base.rank == 0:
        return PropernessReport("proper", (), "point base: conditions are vacuous")
    if not base.is_complete():
        return PropernessReport(
            "undecided", (), "base fan is not complete; semiampleness not decided"
        )
    dual_tail = dualize(div.tail)
    samples = []
    verdict = "proper"
    top_dim = dual_tail.dim()
    for f in faces(dual_tail):
        u = f.cone.relative_interior_point()
        coeffs = evaluate(div, u)
        cartier = True
        functionals = {}
        for cmax in base.maximal_cones():
            rays_in = [gen for lab, gen in base.rays if cmax.contains(gen)]
            labels_in = [lab for lab, gen in base.rays if cmax.contains(gen)]
            rhs = tuple(-coeffs[lab] for lab in labels_in)
            sol = solve(mat(rays_in), rhs)
            if sol is None:
                cartier = False
                break
            functionals[cmax] = sol
        semiample = cartier
        if cartier:
            for cmax, m_c in functionals.items():
                for lab, gen in base.rays:
                    if dot(m_c, gen) < -coeffs[lab]:
                        semiample = False
                        break
                if not semiample:
                    break
        big_checked = f.cone.dim() == top_dim
        big = False
        if big_checked and cartier:
            normals = [gen for _, gen in base.rays]
            offsets = [-coeffs[lab] for lab, _ in base.rays]
            homog = Cone.from_halfspaces(
                [tuple(a) + (-b,) for a, b in zip(normals, offsets)]
                + [(0,) * base.rank + (1,)],
                [],
                base.rank + 1,
            )
            big = homog.dim() == base.rank + 1
        samples.append(PropernessSample(tuple(u), cartier, semiample, big_checked, big))
        if not (cartier and semiample) or (big_checked and not big):
            verdict = "not proper"
    return PropernessReport(verdict, tuple(samples))
