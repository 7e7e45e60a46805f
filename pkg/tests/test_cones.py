import json
import random

import pytest

from gitkit.cones import (
    Cone,
    double_description,
    dualize,
    faces,
    image,
    intersect,
    relative_interior_point,
)
from gitkit.errors import DimensionMismatch, RankLimitExceeded
from gitkit.linalg import dot, mat

from oracles import brute_face_subsets

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
W = (1, 1, -1)
SIGMA_GENS = [(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)]  # e1, e2, e1+e3, e2+e3


@pytest.fixture(scope="module")
def sigma():
    return Cone.from_generators(SIGMA_GENS, 3)


@pytest.fixture(scope="module")
def sigma_dual(sigma):
    return dualize(sigma)


def random_cone(rng, rank, max_gens=6, bound=4):
    n = rng.randint(0, max_gens)
    gens = [
        tuple(rng.randint(-bound, bound) for _ in range(rank)) for _ in range(n)
    ]
    return Cone.from_generators(gens, rank)


def test_quadrant_self_dual():
    q = double_description([(1, 0), (0, 1)], 2)
    assert q.rays == ((0, 1), (1, 0))
    assert q.facets == ((0, 1), (1, 0))
    assert dualize(q) == q


def test_sigma_canonical(sigma):
    assert sigma.rays == ((0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1))
    assert sigma.is_pointed()
    assert sigma.dim() == 3


def test_sigma_dual_matches_published_generators(sigma_dual):
    expected = Cone.from_generators([E1, E2, E3, W], 3)
    assert sigma_dual == expected
    assert sorted(sigma_dual.rays) == sorted([E1, E2, E3, W])


def test_zero_cone_and_full_space():
    z = double_description([], 3)
    assert z.rays == () and z.lineality == ()
    assert dualize(z) == Cone.full(3)
    assert dualize(Cone.full(3)) == z


def test_dualize_involution_random():
    rng = random.Random(23)
    for _ in range(200):
        rank = rng.randint(1, 4)
        c = random_cone(rng, rank)
        assert dualize(dualize(c)) == c


def test_faces_of_quadrant():
    q = double_description([(1, 0), (0, 1)], 2)
    fs = faces(q)
    assert len(fs) == 4
    dims = sorted(f.cone.dim() for f in fs)
    assert dims == [0, 1, 1, 2]


def test_faces_of_sigma_dual_against_fm_oracle(sigma_dual):
    fs = faces(sigma_dual)
    assert len(fs) == 10
    # independent Fourier-Motzkin oracle over the extreme rays
    expected_keys = set(brute_face_subsets([list(r) for r in sigma_dual.rays]))
    got_keys = {
        frozenset(
            i for i, r in enumerate(sigma_dual.rays) if f.cone.contains(r)
        )
        for f in fs
    }
    assert got_keys == expected_keys
    by_dim = {}
    for f in fs:
        by_dim.setdefault(f.cone.dim(), []).append(f)
    assert {d: len(v) for d, v in by_dim.items()} == {0: 1, 1: 4, 2: 4, 3: 1}
    # the four facets
    facet_ray_sets = {tuple(sorted(f.cone.rays)) for f in by_dim[2]}
    assert facet_ray_sets == {
        tuple(sorted((E1, E3))),
        tuple(sorted((E2, E3))),
        tuple(sorted((E1, W))),
        tuple(sorted((E2, W))),
    }


def test_face_certificates_and_closure(sigma_dual):
    fs = faces(sigma_dual)
    face_cones = [f.cone for f in fs]
    sigma = dualize(sigma_dual)
    for f in fs:
        # supporting vector certifies the face and lies in the dual cone
        assert sigma.contains(f.supporting_vector)
        cut = Cone.from_halfspaces(
            sigma_dual.facets,
            sigma_dual.equations + (f.supporting_vector,),
            3,
        )
        assert cut == f.cone
        assert all(sigma_dual.contains(r) for r in f.cone.rays)
    for a in face_cones:
        for b in face_cones:
            assert intersect(a, b) in face_cones


def test_faces_of_full_space():
    full = Cone.full(2)
    fs = faces(full)
    assert len(fs) == 1
    assert fs[0].cone == full


def test_intersect(sigma_dual):
    c13 = Cone.from_generators([E1, E3], 3)
    c1w = Cone.from_generators([E1, W], 3)
    assert intersect(c13, c1w) == Cone.from_generators([E1], 3)
    assert intersect(sigma_dual, sigma_dual) == sigma_dual
    q = double_description([(1, 0), (0, 1)], 2)
    mq = double_description([(-1, 0), (0, -1)], 2)
    assert intersect(q, mq) == Cone.zero(2)
    with pytest.raises(DimensionMismatch):
        intersect(q, sigma_dual)


def test_image(sigma_dual):
    i = mat([[1, 0, 1], [0, 1, 0]])
    img = image(i, sigma_dual)
    assert img == double_description([(1, 0), (0, 1)], 2)
    assert image(mat([[1, 0], [0, 1]]), img) == img
    assert image(i, Cone.zero(3)) == Cone.zero(2)


def test_image_monotone_random():
    rng = random.Random(5)
    for _ in range(30):
        rank = rng.randint(1, 3)
        target = rng.randint(1, 3)
        m = mat(
            [rng.randint(-3, 3) for _ in range(rank)] for _ in range(target)
        )
        big = random_cone(rng, rank, max_gens=5, bound=3)
        if not big.rays:
            continue
        sub_gens = [r for r in big.rays if rng.random() < 0.6]
        small = Cone.from_generators(sub_gens, rank)
        assert image(m, big).contains_cone(image(m, small))


def test_contains_and_relint(sigma, sigma_dual):
    assert sigma_dual.contains((1, 1, 0))  # e1 + e2
    assert not sigma.contains((0, 0, 1))
    ray = Cone.from_generators([E1], 3)
    p = relative_interior_point(ray)
    assert p[0] > 0 and p[1] == 0 and p[2] == 0
    # relint point of sigma_dual pairs strictly positively with sigma's rays
    q = relative_interior_point(sigma_dual)
    assert all(dot(q, r) > 0 for r in sigma.rays)
    with pytest.raises(DimensionMismatch):
        sigma.contains((1, 0))


def test_lineality_cone():
    c = Cone.from_v([(1, 0)], [(0, 1)], 2)
    assert c.lineality == ((0, 1),)
    assert c.rays == ((1, 0),)
    assert not c.is_pointed()
    d = dualize(c)
    assert d.rays == ((1, 0),) and d.lineality == ()
    assert d.equations == ((0, 1),)


def test_serialization_roundtrip_bit_exact():
    rng = random.Random(31)
    for _ in range(50):
        c = random_cone(rng, rng.randint(1, 3))
        blob = json.dumps(c.to_dict(), sort_keys=True)
        c2 = Cone.from_dict(json.loads(blob))
        assert c2 == c
        assert json.dumps(c2.to_dict(), sort_keys=True) == blob


def test_rank_limit():
    with pytest.raises(RankLimitExceeded):
        Cone.from_generators([], 9)


def test_idempotent_renormalization(sigma_dual):
    again = Cone.from_generators(list(sigma_dual.rays), 3)
    assert again == sigma_dual
    assert again.facets == sigma_dual.facets


def test_halfspace_conversion_against_subset_oracle():
    """Fuzz the double description against the brute-force oracle that
    derives extreme rays from kernel vectors of facet-row subsets."""
    from oracles import brute_extreme_rays

    rng = random.Random(57)
    checked = 0
    while checked < 60:
        n = rng.randint(2, 3)
        rows = [
            tuple(rng.randint(-3, 3) for _ in range(n))
            for _ in range(rng.randint(n, n + 3))
        ]
        c = Cone.from_halfspaces(rows, [], n)
        if not c.is_pointed() or c.dim() != n:
            continue
        assert set(c.rays) == brute_extreme_rays([list(r) for r in rows], n)
        checked += 1


def test_git_pipeline_unimodular_equivariance():
    """Transforming sigma by a unimodular map relabels the GIT data but
    preserves all counts and containments."""
    from gitkit.gitfan import AffineToricData, git_fan
    from gitkit.linalg import mat, mat_vec, unimodular_inverse

    rng = random.Random(59)
    sigma = Cone.from_generators([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)], 3)
    base = git_fan(AffineToricData.from_cone(sigma))
    base_sizes = sorted(len(l.members) for l in base.semistable_table)
    for _ in range(5):
        u = [list(row) for row in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        for _ in range(6):
            i, j = rng.sample(range(3), 2)
            f = rng.randint(-2, 2)
            for k in range(3):
                u[i][k] += f * u[j][k]
        u = mat(u)
        unimodular_inverse(u)  # raises unless unimodular
        moved = Cone.from_generators([mat_vec(u, r) for r in sigma.rays], 3)
        data = git_fan(AffineToricData.from_cone(moved))
        assert len(data.git_cones) == len(base.git_cones)
        assert sorted(len(l.members) for l in data.semistable_table) == base_sizes
