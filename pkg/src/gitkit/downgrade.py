"""Transport of GIT data along a subtorus inclusion.

A subtorus is given by an integer embedding matrix whose columns are the
images in N of a basis of N'.  The induced character map M -> M' is the
transpose; its kernel M'' and the quotient projection N -> N'' are derived
through integer normal forms.  Downgraded semistable sets and GIT cones are
computed in closed form through images of orbit cones, with the finite
union/intersection formulas over 0/1 generator sums kept as cross-checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cones import Cone, faces, image, intersect
from .errors import EmptyGitClass, NonSaturatedEmbedding
from .gitfan import (
    AffineToricData,
    SemistableLocus,
    SubsetSumPoset,
    git_cone,
    orbit_cones,
    semistable_locus,
    subset_sum_poset,
)
from .linalg import (
    column_count,
    dot,
    identity,
    kernel_basis,
    mat,
    mat_vec,
    rank as mat_rank,
    shape,
    snf,
    transpose,
    vec_sub,
    zeros,
)


@dataclass(frozen=True)
class SubtorusData:
    """Derived lattice maps of a saturated subtorus embedding N' -> N."""

    embedding: tuple  # n x n', columns are images of a basis of N'
    char_map: tuple  # i : M -> M', the transpose, n' x n
    kernel: tuple  # n x n'' matrix, columns a basis of M'' = ker(i)
    projection: tuple  # p : N -> N'', n'' x n, cokernel of the embedding

    @property
    def rank(self) -> int:
        return shape(self.embedding)[0]

    @property
    def subtorus_rank(self) -> int:
        return shape(self.embedding)[1]

    @property
    def quotient_rank(self) -> int:
        return self.rank - self.subtorus_rank


def analyze_subtorus(embedding) -> SubtorusData:
    """Validate an embedding and derive the exact-sequence data.

    Rejects embeddings that are not injective or whose image lattice is not
    saturated (the certificate is the offending invariant factor).
    """
    embedding = mat(embedding)
    n, k = shape(embedding)
    if k > n:
        raise ValueError(f"embedding has more columns ({k}) than rows ({n})")
    if k > 0 and mat_rank(embedding) != k:
        raise ValueError("embedding is not injective (columns are dependent)")
    char_map = transpose(embedding)
    if k > 0:
        s, u, _ = snf(embedding)
        for t in range(k):
            if s[t][t] != 1:
                raise NonSaturatedEmbedding(s[t][t])
        projection = mat(u[k:]) if k < n else zeros(0, n)
        kernel = kernel_basis(char_map)
    else:
        projection = identity(n)
        kernel = identity(n)  # the character map is the zero map M -> 0
    data = SubtorusData(embedding, char_map, kernel, projection)
    if k and any(
        any(x != 0 for x in mat_vec(projection, col))
        for col in transpose(embedding)
    ):
        raise AssertionError("projection does not annihilate the embedding")
    if column_count(kernel) != n - k:
        raise AssertionError("kernel rank does not match the exact sequence")
    return data


def downgraded_weight_cone(toric: AffineToricData, sub: SubtorusData) -> Cone:
    """Image of the weight cone under the character map."""
    return image(sub.char_map, toric.sigma_dual)


@lru_cache(maxsize=None)
def downgraded_orbit_cones(
    toric: AffineToricData, sub: SubtorusData
) -> tuple[tuple[int, Cone], ...]:
    """Images of the orbit cones under the character map, per orbit cone."""
    return tuple(
        (o.index, image(sub.char_map, o.cone)) for o in orbit_cones(toric)
    )


def downgraded_semistable(toric: AffineToricData, sub: SubtorusData, v) -> SemistableLocus:
    """Semistable locus for the subtorus action at v, in closed form:
    the orbit cones whose image contains v."""
    v = tuple(v)
    members = frozenset(
        idx for idx, img in downgraded_orbit_cones(toric, sub) if img.contains(v)
    )
    return SemistableLocus(members)


def fiber_representatives(
    toric: AffineToricData, sub: SubtorusData, v
) -> list[tuple[int, tuple]]:
    """Finite representatives for the union formula at v.

    The semistable set downstairs is the union of the big-torus semistable
    sets of all u with character image a positive multiple of v.  The
    distinct terms correspond to the orbit cones whose relative interior
    meets that fiber; for each such orbit cone one integral representative u
    (with image an integer positive multiple of v) is returned.
    """
    v = tuple(v)
    i_rows = [tuple(row) for row in sub.char_map]
    n = toric.rank
    zero_v = all(x == 0 for x in v)
    reps = []
    for o in orbit_cones(toric):
        face = o.cone
        if zero_v:
            fiber = Cone.from_halfspaces(face.facets, face.equations + tuple(i_rows), n)
        else:
            # proportionality of the image with v, plus forward direction
            prop = []
            for a in range(len(v)):
                for b in range(a + 1, len(v)):
                    prop.append(
                        tuple(v[b] * i_rows[a][j] - v[a] * i_rows[b][j] for j in range(n))
                    )
            forward = tuple(
                sum(v[a] * i_rows[a][j] for a in range(len(v))) for j in range(n)
            )
            fiber = Cone.from_halfspaces(
                face.facets + (forward,), face.equations + tuple(prop), n
            )
        c = fiber.relative_interior_point()
        if not zero_v:
            img = mat_vec(sub.char_map, c)
            if all(x == 0 for x in img):
                continue  # fiber meets the face only where the image vanishes
        # the representative must sit in the relative interior of the face
        if any(dot(f, c) <= 0 for f in face.facets) or any(
            dot(e, c) != 0 for e in face.equations
        ):
            continue
        if not zero_v:
            # scale so the image is an integer positive multiple of v
            img = mat_vec(sub.char_map, c)
            a = next(k for k in range(len(v)) if v[k] != 0)
            ratio = Fraction(img[a], v[a])
            c = tuple(ratio.denominator * x for x in c)
        reps.append((o.index, c))
    return reps


def downgraded_semistable_via_union(
    toric: AffineToricData, sub: SubtorusData, v
) -> SemistableLocus:
    """The finite union form: X^ss for the subtorus at v as the union of
    big-torus semistable sets over fiber representatives."""
    members: set[int] = set()
    for _, u in fiber_representatives(toric, sub, v):
        members |= semistable_locus(toric, u).members
    return SemistableLocus(frozenset(members))


def poset_decomposition(
    toric: AffineToricData, sub: SubtorusData, v, poset: SubsetSumPoset | None = None
) -> list[frozenset[int]]:
    """Generator subsets whose big-torus loci union to the downgraded locus.

    For each orbit cone realized by the fiber of v, the subset of all degree
    generators on that cone is a 0/1 sum with the same semistable set, so
    the returned subsets decompose the downgraded locus inside the poset.
    """
    if poset is None:
        poset = subset_sum_poset(toric)
    ocs = orbit_cones(toric)
    return [frozenset(ocs[idx].generator_indices) for idx, _ in fiber_representatives(toric, sub, v)]


def downgraded_git_cone(toric: AffineToricData, sub: SubtorusData, v) -> Cone:
    """Intersection of all downgraded orbit cones containing v."""
    v = tuple(v)
    omega = downgraded_weight_cone(toric, sub)
    if not omega.contains(v):
        raise EmptyGitClass(
            f"weight {v} lies outside the downgraded weight cone: empty GIT class"
        )
    result = omega
    for _, img in downgraded_orbit_cones(toric, sub):
        if img.contains(v):
            result = intersect(result, img)
    return result


def downgraded_git_cone_via_representatives(
    toric: AffineToricData, sub: SubtorusData, v
) -> Cone:
    """Cross-check form: intersection of the images of the big-torus GIT
    cones over fiber representatives of v."""
    result = downgraded_weight_cone(toric, sub)
    for _, u in fiber_representatives(toric, sub, v):
        result = intersect(result, image(sub.char_map, git_cone(toric, u)))
    return result


@dataclass(frozen=True)
class DowngradedGITData:
    """GIT data of the subtorus action."""

    toric: AffineToricData
    subtorus: SubtorusData
    weight_cone: Cone
    orbit_cone_images: tuple[tuple[int, Cone], ...]
    git_cones: tuple[Cone, ...]
    semistable_table: tuple[SemistableLocus, ...]
    quasi_fan_pairs: tuple[tuple[int, int], ...]  # cone pairs violating fan axioms


def _intersection_closure(cones: list[Cone]) -> list[Cone]:
    family = list(dict.fromkeys(cones))
    frontier = list(family)
    while frontier:
        nxt = []
        for a in frontier:
            for b in family:
                meet = intersect(a, b)
                if meet not in family:
                    family.append(meet)
                    nxt.append(meet)
        frontier = nxt
    return family


@lru_cache(maxsize=None)
def downgraded_git_fan(toric: AffineToricData, sub: SubtorusData) -> DowngradedGITData:
    """Assemble all downgraded GIT cones.

    Candidate cones are the intersection closure of the orbit-cone images;
    sampling the relative interior of each candidate and taking the
    definitional GIT cone there collects every class (the map v -> GIT cone
    is constant on relative interiors of GIT cones).
    """
    images = [img for _, img in downgraded_orbit_cones(toric, sub)]
    family = _intersection_closure(images)
    found: dict[Cone, SemistableLocus] = {}
    for member in family:
        sample = member.relative_interior_point()
        lam = downgraded_git_cone(toric, sub, sample)
        if lam not in found:
            found[lam] = downgraded_semistable(toric, sub, sample)
    order = sorted(found, key=lambda c: (c.dim(), c.rays))
    cones = tuple(order)
    table = tuple(found[c] for c in cones)
    bad = []
    for i, a in enumerate(cones):
        for j in range(i + 1, len(cones)):
            b = cones[j]
            meet = intersect(a, b)
            if not any(f.cone == meet for f in faces(a)) or not any(
                f.cone == meet for f in faces(b)
            ):
                bad.append((i, j))
    return DowngradedGITData(
        toric,
        sub,
        downgraded_weight_cone(toric, sub),
        downgraded_orbit_cones(toric, sub),
        cones,
        table,
        tuple(bad),
    )


def check_effective_quotient_action(
    toric: AffineToricData, sub: SubtorusData
) -> tuple[bool, dict]:
    """Does the quotient torus act effectively on the GIT quotients?

    True iff the differences u - u' over bounded generator sums with equal
    character image span the kernel M'' rationally.  The certificate lists
    spanning differences with their witnesses; if small sums do not suffice,
    witnesses are built by translating kernel basis vectors deep into the
    weight cone.
    """
    n = toric.rank
    kernel_cols = [
        tuple(sub.kernel[i][j] for i in range(n))
        for j in range(column_count(sub.kernel))
    ]
    target_rank = len(kernel_cols)
    if target_rank == 0:
        return True, {"differences": [], "note": "kernel is trivial"}
    weights = toric.weights
    sums = []
    for size in (1, 2):
        for idx in itertools.combinations(range(len(weights)), size):
            total = tuple(sum(weights[i][j] for i in idx) for j in range(n))
            sums.append(total)
    certificate = []
    chosen: list[tuple] = []
    for a in sums:
        for b in sums:
            if a == b:
                continue
            if mat_vec(sub.char_map, a) != mat_vec(sub.char_map, b):
                continue
            d = vec_sub(a, b)
            if mat_rank(mat(chosen + [d])) > len(chosen):
                chosen.append(d)
                certificate.append({"difference": list(d), "from": list(a), "to": list(b)})
                if len(chosen) == target_rank:
                    return True, {"differences": certificate}
    # translate kernel vectors into the weight cone from a deep interior point
    base = toric.sigma_dual.relative_interior_point()
    for col in kernel_cols:
        if mat_rank(mat(chosen + [col])) == len(chosen):
            continue
        for scale in range(1, 64):
            q = tuple(scale * x for x in base)
            shifted = tuple(x + y for x, y in zip(q, col))
            if toric.sigma_dual.contains(shifted):
                chosen.append(col)
                certificate.append(
                    {"difference": list(col), "from": list(shifted), "to": list(q)}
                )
                break
        else:
            unspanned = target_rank - len(chosen)
            return False, {
                "differences": certificate,
                "unspanned_rank": unspanned,
            }
    return True, {"differences": certificate}
