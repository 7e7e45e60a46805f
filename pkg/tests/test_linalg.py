import random

import pytest

from gitkit.linalg import (
    cokernel_projection,
    det,
    hnf,
    identity,
    invariant_factors,
    kernel_basis,
    mat,
    mat_mul,
    mat_vec,
    rank,
    saturation_of_rowspan,
    snf,
    solve,
    solve_integer,
    transpose,
    column_count,
)

from oracles import snf_diagonal_via_minors


def random_matrix(rng, rows, cols, bound=10):
    return mat(
        [rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)
    )


def test_hnf_identity():
    h, u = hnf(identity(3))
    assert h == identity(3)
    assert u == identity(3)


def test_hnf_permutation_normalizes_to_identity():
    h, u = hnf(mat([[0, 1], [1, 0]]))
    assert h == identity(2)
    assert abs(det(u)) == 1


def test_hnf_preserves_absolute_determinant():
    m = mat([[2, 4], [1, 3]])
    h, u = hnf(m)
    assert abs(det(u)) == 1
    assert abs(det(h)) == abs(det(m)) == 2
    assert mat_mul(u, m) == h


def test_hnf_shape_properties_random():
    rng = random.Random(7)
    for _ in range(60):
        r = rng.randint(1, 4)
        c = rng.randint(1, 4)
        m = random_matrix(rng, r, c)
        h, u = hnf(m)
        assert abs(det(u)) == 1
        assert mat_mul(u, m) == h
        # pivots: last nonzero entry of each nonzero row; columns increase
        pivcols = []
        seen_zero = False
        for row in h:
            nz = [j for j, x in enumerate(row) if x != 0]
            if not nz:
                seen_zero = True
                continue
            assert not seen_zero, "zero rows must come last"
            pivcols.append(nz[-1])
        assert pivcols == sorted(pivcols) and len(set(pivcols)) == len(pivcols)
        for i, cpiv in enumerate(pivcols):
            p = h[i][cpiv]
            assert p > 0
            for j in range(i + 1, len(h)):
                assert 0 <= h[j][cpiv] < p


def test_snf_identity_and_zero():
    s, u, v = snf(identity(3))
    assert s == identity(3)
    z = mat([[0, 0], [0, 0]])
    s, u, v = snf(z)
    assert s == z


def test_snf_example():
    m = mat([[2, 4], [1, 3]])
    s, u, v = snf(m)
    assert mat_mul(mat_mul(u, m), v) == s
    assert (s[0][0], s[1][1]) == (1, 2)
    assert abs(det(u)) == 1 and abs(det(v)) == 1


def test_snf_matches_minor_gcd_oracle():
    rng = random.Random(11)
    for _ in range(40):
        r = rng.randint(1, 4)
        c = rng.randint(1, 4)
        m = random_matrix(rng, r, c, bound=10)
        s, u, v = snf(m)
        assert mat_mul(mat_mul(u, m), v) == s
        assert abs(det(u)) == 1 and abs(det(v)) == 1
        diag = [s[i][i] for i in range(min(r, c)) if s[i][i] != 0]
        assert diag == snf_diagonal_via_minors([list(row) for row in m])
        for i in range(len(diag) - 1):
            assert diag[i + 1] % diag[i] == 0


def test_kernel_basis_of_downgrade_map():
    i = mat([[1, 0, 1], [0, 1, 0]])
    k = kernel_basis(i)
    assert column_count(k) == 1
    col = tuple(k[r][0] for r in range(3))
    assert col in ((1, 0, -1), (-1, 0, 1))


def test_kernel_basis_trivial_and_full():
    assert column_count(kernel_basis(identity(3))) == 0
    k = kernel_basis(mat([[0, 0], [0, 0]]))
    assert column_count(k) == 2
    assert abs(det(k)) == 1


def test_kernel_basis_is_saturated_random():
    rng = random.Random(13)
    for _ in range(40):
        r = rng.randint(1, 3)
        c = rng.randint(1, 4)
        m = random_matrix(rng, r, c, bound=6)
        k = kernel_basis(m)
        ncols = column_count(k)
        for j in range(ncols):
            col = tuple(k[i][j] for i in range(c))
            assert all(x == 0 for x in mat_vec(m, col))
        assert ncols == c - rank(m)
        if ncols:
            assert set(invariant_factors(k)) <= {1}


def test_solve_and_solve_integer():
    a = mat([[2, 0], [0, 3]])
    assert solve(a, (4, 9)) == (2, 3)
    assert solve_integer(a, (4, 9)) == (2, 3)
    assert solve_integer(a, (1, 0)) is None
    assert solve(mat([[1, 1]]), (5,)) is not None


def test_cokernel_projection():
    emb = transpose(mat([[1, 0, 1], [0, 1, 0]]))  # columns (1,0,1), (0,1,0)
    p = cokernel_projection(emb)
    assert len(p) == 1
    assert mat_vec(p, (1, 0, 1)) == (0,)
    assert mat_vec(p, (0, 1, 0)) == (0,)
    # (a, b, c) -> +-(c - a)
    assert p[0] in ((-1, 0, 1), (1, 0, -1))


def test_cokernel_projection_rejects_unsaturated():
    emb = transpose(mat([[2, 0, 0]]))
    with pytest.raises(ValueError, match="invariant factor 2"):
        cokernel_projection(emb)


def test_saturation_of_rowspan():
    sat = saturation_of_rowspan(mat([[2, 0, 0], [0, 0, 3]]), 3)
    assert set(sat) == {(1, 0, 0), (0, 0, 1)}
    assert saturation_of_rowspan((), 3) == ()
