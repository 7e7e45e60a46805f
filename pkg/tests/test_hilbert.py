import itertools
import random
import time

import pytest

from gitkit.cones import Cone, double_description, dualize
from gitkit.errors import NotPointedError
from gitkit.hilbert import hilbert_basis, monoid_generators
from gitkit.linalg import mat, mat_vec, unimodular_inverse

from oracles import decomposes_over

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
W = (1, 1, -1)
SIGMA_GENS = [(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)]


def test_quadrant_basis():
    q = double_description([(1, 0), (0, 1)], 2)
    assert hilbert_basis(q).elements == ((0, 1), (1, 0))


def test_sigma_dual_basis_is_the_four_ring_generators():
    sigma = Cone.from_generators(SIGMA_GENS, 3)
    start = time.monotonic()
    hb = hilbert_basis(dualize(sigma))
    elapsed = time.monotonic() - start
    assert sorted(hb.elements) == sorted([E1, E2, E3, W])
    assert elapsed < 1.0


def test_singular_quadratic_cone_basis():
    c = double_description([(1, 0), (1, 2)], 2)
    hb = hilbert_basis(c)
    # oracle: irreducible lattice points with small coordinates
    pts = [
        p
        for p in itertools.product(range(0, 4), repeat=2)
        if c.contains(p) and any(p)
    ]
    def member(q):
        return all(x >= 0 for x in q) and c.contains(q)
    irreducible = [
        p
        for p in pts
        if not any(
            member(tuple(a - b for a, b in zip(p, g))) and any(a - b for a, b in zip(p, g))
            for g in pts
            if g != p
        )
    ]
    assert sorted(hb.elements) == sorted(irreducible) == [(1, 0), (1, 1), (1, 2)]


def test_non_pointed_rejected():
    half = Cone.from_halfspaces([(1, 0)], [], 2)
    with pytest.raises(NotPointedError, match="no finite Hilbert basis"):
        hilbert_basis(half)


def test_pairwise_irreducibility():
    sigma = Cone.from_generators(SIGMA_GENS, 3)
    hb = hilbert_basis(dualize(sigma))
    elems = set(hb.elements)
    for a in elems:
        for b in elems:
            s = tuple(x + y for x, y in zip(a, b))
            assert s not in elems


def test_generation_in_bounded_box():
    sigma = Cone.from_generators(SIGMA_GENS, 3)
    c = dualize(sigma)
    hb = hilbert_basis(c)
    bound = 5 * max(abs(x) for e in hb.elements for x in e)
    for p in itertools.product(range(-bound, bound + 1), repeat=3):
        if not c.contains(p):
            continue
        assert decomposes_over(p, hb.elements, c.contains), p


def test_generation_random_cones():
    rng = random.Random(41)
    for _ in range(10):
        gens = [
            tuple(rng.randint(0, 3) for _ in range(2)) for _ in range(rng.randint(1, 4))
        ]
        c = Cone.from_generators(gens, 2)
        if not c.is_pointed() or not c.rays:
            continue
        hb = hilbert_basis(c)
        bound = 5 * max(abs(x) for e in hb.elements for x in e)
        for p in itertools.product(range(0, bound + 1), repeat=2):
            if c.contains(p):
                assert decomposes_over(p, hb.elements, c.contains)


def test_unimodular_invariance():
    rng = random.Random(43)
    sigma = Cone.from_generators(SIGMA_GENS, 3)
    c = dualize(sigma)
    hb = set(hilbert_basis(c).elements)
    for _ in range(5):
        # random unimodular transform from elementary operations
        u = [list(row) for row in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        for _ in range(6):
            i, j = rng.sample(range(3), 2)
            f = rng.randint(-2, 2)
            for k in range(3):
                u[i][k] += f * u[j][k]
        u = mat(u)
        unimodular_inverse(u)  # raises if not unimodular
        tc = Cone.from_generators([mat_vec(u, r) for r in c.rays], 3)
        thb = set(hilbert_basis(tc).elements)
        assert thb == {mat_vec(u, e) for e in hb}


def test_monoid_generators_full_space():
    full = Cone.full(2)
    gens = monoid_generators(full)
    assert not gens.irreducible
    assert set(gens.elements) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_monoid_generators_halfplane():
    half = Cone.from_halfspaces([(1, 0)], [], 2)
    gens = monoid_generators(half).elements
    # bounded search: the DP oracle would diverge along the lineality
    def decomposes(target):
        for coeffs in itertools.product(range(7), repeat=len(gens)):
            s = (0, 0)
            for c, g in zip(coeffs, gens):
                s = (s[0] + c * g[0], s[1] + c * g[1])
            if s == target:
                return True
        return False

    for target in [(0, -5), (2, 3), (1, -1)]:
        assert decomposes(target)
