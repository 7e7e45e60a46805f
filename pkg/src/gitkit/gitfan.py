"""GIT data of an affine toric variety under its big torus.

For Spec of the semigroup algebra of sigma_dual ∩ M, the orbit cones are
exactly the faces of sigma_dual: each face is the cone of degrees whose
monomials are nonzero at the distinguished point of the corresponding
orbit.  Semistable loci are therefore represented as upward-closed sets of
faces, never as point sets; the representation is exact and the
order-reversing bijection between loci and GIT cones becomes a finite
check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cones import Cone, Face, dualize, faces, intersect
from .errors import DimensionMismatch, EmptyGitClass
from .hilbert import HilbertBasis, monoid_generators
from .linalg import hnf, mat

POSET_LIMIT = 16


@lru_cache(maxsize=None)
def _cached_generators(sigma_dual: Cone) -> HilbertBasis:
    return monoid_generators(sigma_dual)


@dataclass(frozen=True)
class AffineToricData:
    """A pointed cone sigma in N, its dual in M, and generators of the
    degree semigroup sigma_dual ∩ M (computed once, on first use)."""

    rank: int
    sigma: Cone
    sigma_dual: Cone

    @staticmethod
    def from_cone(sigma: Cone) -> "AffineToricData":
        if not sigma.is_pointed():
            raise ValueError(
                "sigma must be pointed (equivalently the weight cone must be "
                "full dimensional, i.e. the torus action effective)"
            )
        return AffineToricData(sigma.rank, sigma, dualize(sigma))

    @property
    def hilbert(self) -> HilbertBasis:
        return _cached_generators(self.sigma_dual)

    @property
    def weights(self) -> tuple:
        return self.hilbert.elements


@dataclass(frozen=True)
class OrbitCone:
    """A face of the weight cone tagged with the degree generators on it."""

    index: int
    face: Face
    generator_indices: frozenset[int]

    @property
    def cone(self) -> Cone:
        return self.face.cone


@dataclass(frozen=True)
class SemistableLocus:
    """A semistable set, recorded as the orbit cones of its points."""

    members: frozenset[int]

    def __len__(self) -> int:
        return len(self.members)

    def issubset(self, other: "SemistableLocus") -> bool:
        return self.members <= other.members


@dataclass(frozen=True)
class GITData:
    """Orbit cones, orbit lattices, the GIT fan and the order-reversing
    correspondence between GIT cones and semistable loci."""

    toric: AffineToricData
    orbit_cones: tuple[OrbitCone, ...]
    orbit_lattices: tuple[tuple, ...]
    git_cones: tuple[Cone, ...]
    semistable_table: tuple[SemistableLocus, ...]  # parallel to git_cones

    def locus_of(self, cone_index: int) -> SemistableLocus:
        return self.semistable_table[cone_index]


@lru_cache(maxsize=None)
def orbit_cones(toric: AffineToricData) -> tuple[OrbitCone, ...]:
    """The faces of sigma_dual, each tagged with its generator subset.

    Consistency: every face must be spanned by exactly the degree
    generators lying on it (together with any lineality); violations would
    mean the generating set is not face-compatible, so they raise.
    """
    out = []
    for idx, f in enumerate(faces(toric.sigma_dual)):
        on_face = frozenset(
            i for i, u in enumerate(toric.weights) if f.cone.contains(u)
        )
        spanned = Cone.from_v(
            [toric.weights[i] for i in sorted(on_face)],
            toric.sigma_dual.lineality,
            toric.rank,
        )
        if spanned != f.cone:
            raise RuntimeError(
                f"face {f.cone} is not spanned by its degree generators"
            )
        out.append(OrbitCone(idx, f, on_face))
    return tuple(out)


def orbit_monoid(toric: AffineToricData, o: OrbitCone) -> tuple:
    """Generators of the monoid of degrees not vanishing on the orbit."""
    return tuple(toric.weights[i] for i in sorted(o.generator_indices))


def orbit_lattice(toric: AffineToricData, o: OrbitCone) -> tuple:
    """HNF basis (rows) of the sublattice generated by the orbit monoid."""
    gens = orbit_monoid(toric, o)
    lin = o.cone.lineality
    rows = [list(g) for g in gens] + [list(l) for l in lin]
    if not rows:
        return ()
    h, _ = hnf(mat(rows))
    return tuple(r for r in h if any(x != 0 for x in r))


def weight_cone(toric: AffineToricData) -> Cone:
    """The cone of degrees with nonzero graded piece; sigma_dual here."""
    return toric.sigma_dual


def semistable_locus(toric: AffineToricData, u) -> SemistableLocus:
    """Orbit cones containing u; empty for u outside the weight cone."""
    u = tuple(u)
    if len(u) != toric.rank:
        raise DimensionMismatch(f"weight of length {len(u)} in rank {toric.rank}")
    if not toric.sigma_dual.contains(u):
        return SemistableLocus(frozenset())
    return SemistableLocus(
        frozenset(o.index for o in orbit_cones(toric) if o.cone.contains(u))
    )


def git_cone(toric: AffineToricData, u) -> Cone:
    """Intersection of all orbit cones containing u."""
    u = tuple(u)
    if not toric.sigma_dual.contains(u):
        raise EmptyGitClass(f"weight {u} lies outside the weight cone: empty GIT class")
    result = toric.sigma_dual
    for o in orbit_cones(toric):
        if o.cone.contains(u):
            result = intersect(result, o.cone)
    return result


@lru_cache(maxsize=None)
def git_fan(toric: AffineToricData) -> GITData:
    """All GIT cones with their semistable loci.

    Every face is a GIT cone (witnessed by a relative interior sample), and
    the table face -> upward closure is the order-reversing bijection.
    """
    ocs = orbit_cones(toric)
    cones = []
    table = []
    for o in ocs:
        sample = o.cone.relative_interior_point()
        lam = git_cone(toric, sample)
        if lam != o.cone:
            raise RuntimeError(
                f"face sample {sample} does not recover its face as GIT cone"
            )
        cones.append(lam)
        table.append(semistable_locus(toric, sample))
    lattices = tuple(orbit_lattice(toric, o) for o in ocs)
    return GITData(toric, ocs, lattices, tuple(cones), tuple(table))


# ---------------------------------------------------------------------------
# The subset-sum poset and the generators-of-GIT-cones comparison.

@dataclass(frozen=True)
class SubsetSumPoset:
    """All 0/1 combinations of the degree generators, ordered by reverse
    inclusion of their semistable loci.

    Subsets are kept as formal index sets (distinct subsets may share a sum
    vector); ``sums`` and ``loci`` are parallel to ``subsets``.
    """

    toric: AffineToricData
    subsets: tuple[frozenset[int], ...]
    sums: tuple[tuple, ...]
    loci: tuple[SemistableLocus, ...]

    def ge(self, a: int, b: int) -> bool:
        """subset a >= subset b  iff  locus(sum_a) ⊆ locus(sum_b)."""
        return self.loci[a].issubset(self.loci[b])

    def relation_matrix(self) -> tuple[tuple[bool, ...], ...]:
        n = len(self.subsets)
        return tuple(tuple(self.ge(a, b) for b in range(n)) for a in range(n))

    def index_of(self, subset) -> int:
        return self.subsets.index(frozenset(subset))


def subset_sum_poset(toric: AffineToricData) -> SubsetSumPoset:
    k = len(toric.weights)
    if k > POSET_LIMIT:
        raise ValueError(f"poset too large: 2^{k} subsets exceeds 2^{POSET_LIMIT}")
    subsets = []
    sums = []
    loci = []
    for mask in range(1 << k):
        idx = frozenset(i for i in range(k) if mask >> i & 1)
        total = tuple(
            sum(toric.weights[i][j] for i in idx) for j in range(toric.rank)
        )
        subsets.append(idx)
        sums.append(total)
        loci.append(semistable_locus(toric, total))
    return SubsetSumPoset(toric, tuple(subsets), tuple(sums), tuple(loci))


def git_cone_via_poset(toric: AffineToricData, subset, poset: SubsetSumPoset | None = None) -> Cone:
    """GIT cone of a subset sum, built from the poset order: the cone
    spanned by the generators u_i with sum >= u_i."""
    if poset is None:
        poset = subset_sum_poset(toric)
    a = poset.index_of(subset)
    gens = []
    for i in range(len(toric.weights)):
        b = poset.index_of({i})
        if poset.ge(a, b):
            gens.append(toric.weights[i])
    return Cone.from_v(gens, toric.sigma_dual.lineality, toric.rank)


def git_equivalence_report(toric: AffineToricData) -> dict:
    """Compare the order-generated GIT cones against the definitional ones
    on every subset; the definitional value is authoritative."""
    poset = subset_sum_poset(toric)
    rows = []
    mismatches = 0
    for a, (idx, total) in enumerate(zip(poset.subsets, poset.sums)):
        definitional = git_cone(toric, total)
        via_poset = git_cone_via_poset(toric, idx, poset)
        agree = definitional == via_poset
        if not agree:
            mismatches += 1
        rows.append(
            {
                "subset": sorted(idx),
                "sum": list(total),
                "definitional_rays": [list(r) for r in definitional.rays],
                "order_generated_rays": [list(r) for r in via_poset.rays],
                "agree": agree,
            }
        )
    return {"rows": rows, "subsets": len(rows), "mismatches": mismatches}
