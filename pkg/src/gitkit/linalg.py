"""Exact integer and rational linear algebra.

Everything in this module works on plain Python integers and
``fractions.Fraction``; there is no floating point anywhere.  Vectors are
tuples, matrices are tuples of row tuples.  All functions are pure and all
returned values are immutable, so they can be shared freely between threads.

The integer normal forms follow fixed conventions so that serialized output
is stable:

* ``hnf`` produces a *lower echelon* row Hermite form: the pivot of each
  nonzero row is its last nonzero entry, pivot columns strictly increase
  down the rows, pivots are positive, and the entries below a pivot (in the
  pivot's column) are reduced into ``[0, pivot)``.
* ``snf`` produces a diagonal with nonnegative invariant factors, each
  dividing the next.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vec = tuple
Mat = tuple


def vec(entries) -> Vec:
    return tuple(entries)


def mat(rows) -> Mat:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Mat:
    return tuple((0,) * c for _ in range(r))


def shape(m: Mat) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def transpose(m: Mat) -> Mat:
    r, c = shape(m)
    return tuple(tuple(m[i][j] for i in range(r)) for j in range(c))


def mat_mul(a: Mat, b: Mat) -> Mat:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m: Mat, v: Vec) -> Vec:
    if m and len(m[0]) != len(v):
        raise ValueError(f"matrix has {len(m[0])} columns, vector has {len(v)}")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def dot(u: Vec, v: Vec) -> int | Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(x * y for x, y in zip(u, v))


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v: Vec) -> Vec:
    return tuple(c * x for x in v)


def is_zero_vec(v: Vec) -> bool:
    return all(x == 0 for x in v)


def gcd_vec(v: Vec) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive(v: Sequence) -> Vec:
    """Scale a rational vector by a positive factor to a primitive integer
    vector (gcd of entries 1).  The zero vector is returned unchanged.
    The direction of the vector is preserved."""
    denom = 1
    for x in v:
        if isinstance(x, Fraction):
            denom = denom * x.denominator // gcd(denom, x.denominator)
    w = [int(x * denom) for x in v]
    g = gcd_vec(w)
    if g == 0:
        return tuple(0 for _ in w)
    return tuple(x // g for x in w)


def sign_normalized(v: Vec) -> Vec:
    """Flip the sign so the first nonzero entry is positive (line canonical form)."""
    for x in v:
        if x != 0:
            return v if x > 0 else tuple(-y for y in v)
    return v


# ---------------------------------------------------------------------------
# Fraction row reduction: the workhorse for solving and rank computations.

def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Returns (reduced rows, pivot column indices).  Zero rows are dropped.
    """
    work = [[Fraction(x) for x in row] for row in rows]
    ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        pv = work[r][c]
        work[r] = [x / pv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank(m: Mat) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def det(m: Mat) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n, c = shape(m)
    if n != c:
        raise ValueError("determinant of non-square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve(a: Mat, b: Vec) -> tuple[Fraction, ...] | None:
    """One rational solution x of a·x = b, or None if inconsistent."""
    r, c = shape(a)
    if r == 0:
        return (Fraction(0),) * c
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    if pivots and pivots[-1] == c:  # pivot in the augmented column
        return None
    x = [Fraction(0)] * c
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return tuple(x)


# ---------------------------------------------------------------------------
# Hermite normal form (row style, lower echelon).

def hnf(m: Mat) -> tuple[Mat, Mat]:
    """Lower-echelon row Hermite normal form.

    Returns (h, u) with u unimodular and h = u·m.  Pivots (last nonzero
    entry of each nonzero row) are positive, pivot columns strictly increase
    down the rows, zero rows sit at the bottom, and within a pivot column the
    entries below the pivot lie in [0, pivot).
    """
    nrows, ncols = shape(m)
    if nrows == 0:
        raise ValueError("hnf of empty matrix")
    h = [list(row) for row in m]
    u = [list(row) for row in identity(nrows)]

    def rowop(i: int, j: int, s: int, t: int, x: int, y: int) -> None:
        # rows (i, j) <- (s*i + t*j, x*i + y*j); the 2x2 block is unimodular
        h[i], h[j] = (
            [s * a + t * b for a, b in zip(h[i], h[j])],
            [x * a + y * b for a, b in zip(h[i], h[j])],
        )
        u[i], u[j] = (
            [s * a + t * b for a, b in zip(u[i], u[j])],
            [x * a + y * b for a, b in zip(u[i], u[j])],
        )

    unassigned = list(range(nrows))
    pivots: list[tuple[int, int]] = []  # (row, col), found right-to-left
    for col in range(ncols - 1, -1, -1):
        nz = [i for i in unassigned if h[i][col] != 0]
        if not nz:
            continue
        acc = nz[0]
        for i in nz[1:]:
            a, b = h[acc][col], h[i][col]
            g, s, t = _xgcd(a, b)
            rowop(acc, i, s, t, -(b // g), a // g)
        if h[acc][col] < 0:
            h[acc] = [-x for x in h[acc]]
            u[acc] = [-x for x in u[acc]]
        unassigned.remove(acc)
        pivots.append((acc, col))

    # Order rows: pivot columns increasing, zero rows at the bottom.
    order = [i for i, _ in sorted(pivots, key=lambda rc: rc[1])] + unassigned
    h = [h[i] for i in order]
    u = [u[i] for i in order]
    pivot_cols = sorted(c for _, c in pivots)

    # Reduce below-pivot entries, working through pivot columns right to left
    # so later reductions cannot disturb earlier ones.
    for i in range(len(pivot_cols) - 1, -1, -1):
        c = pivot_cols[i]
        p = h[i][c]
        for j in range(i + 1, nrows):
            q = h[j][c] // p
            if q != 0:
                h[j] = [a - q * b for a, b in zip(h[j], h[i])]
                u[j] = [a - q * b for a, b in zip(u[j], u[i])]
    return mat(h), mat(u)


def hnf_upper_rows(m: Mat) -> Mat:
    """Canonical upper-echelon Hermite basis of the row lattice of m.

    Pivots are the first nonzero entries, positive, with the entries above
    each pivot reduced into [0, pivot).  Zero rows are dropped.  Used for
    canonical coset representatives modulo a lattice.
    """
    nrows, ncols = shape(m)
    if nrows == 0:
        return ()
    h = [list(row) for row in m]
    unassigned = list(range(nrows))
    pivots: list[tuple[int, int]] = []
    for col in range(ncols):
        nz = [i for i in unassigned if h[i][col] != 0]
        if not nz:
            continue
        acc = nz[0]
        for i in nz[1:]:
            a, b = h[acc][col], h[i][col]
            g, s, t = _xgcd(a, b)
            h[acc], h[i] = (
                [s * x + t * y for x, y in zip(h[acc], h[i])],
                [-(b // g) * x + (a // g) * y for x, y in zip(h[acc], h[i])],
            )
        if h[acc][col] < 0:
            h[acc] = [-x for x in h[acc]]
        unassigned.remove(acc)
        pivots.append((acc, col))
    rows = [h[i] for i, _ in pivots]
    # reduce entries above each pivot, right-to-left
    for i in range(len(rows) - 1, -1, -1):
        c = pivots[i][1]
        p = rows[i][c]
        for j in range(i):
            q = rows[j][c] // p
            if q:
                rows[j] = [a - q * b for a, b in zip(rows[j], rows[i])]
    return mat(rows)


def reduce_mod_lattice(v: Vec, upper_rows: Mat) -> Vec:
    """Canonical representative of v modulo the lattice spanned by
    upper-echelon Hermite rows: pivot coordinates land in [0, pivot)."""
    w = list(v)
    for row in upper_rows:
        piv = next(j for j, x in enumerate(row) if x != 0)
        q = w[piv] // row[piv]
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return tuple(w)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, s, t with s*a + t*b = g = gcd(a, b) > 0 (a, b not both zero)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# Smith normal form.

def snf(m: Mat) -> tuple[Mat, Mat, Mat]:
    """Smith normal form: (s, u, v) with s = u·m·v diagonal, u, v unimodular
    and each diagonal entry nonnegative and dividing the next."""
    nrows, ncols = shape(m)
    if nrows == 0:
        raise ValueError("snf of empty matrix")
    a = [list(row) for row in m]
    u = [list(row) for row in identity(nrows)]
    v = [list(row) for row in identity(ncols)]

    def rowop(i, j, s, t, x, y):
        a[i], a[j] = (
            [s * p + t * q for p, q in zip(a[i], a[j])],
            [x * p + y * q for p, q in zip(a[i], a[j])],
        )
        u[i], u[j] = (
            [s * p + t * q for p, q in zip(u[i], u[j])],
            [x * p + y * q for p, q in zip(u[i], u[j])],
        )

    def colop(i, j, s, t, x, y):
        for row in a:
            row[i], row[j] = s * row[i] + t * row[j], x * row[i] + y * row[j]
        for row in v:
            row[i], row[j] = s * row[i] + t * row[j], x * row[i] + y * row[j]

    def clear_at(t0: int) -> None:
        # A general gcd step strictly shrinks |pivot|; when the pivot already
        # divides the target a plain elimination leaves the pivot row/column
        # untouched, so the loop terminates.
        while True:
            for i in range(t0 + 1, nrows):
                if a[i][t0] != 0:
                    p, q = a[t0][t0], a[i][t0]
                    if p != 0 and q % p == 0:
                        rowop(t0, i, 1, 0, -(q // p), 1)
                    else:
                        g, s, t = _xgcd(p, q)
                        rowop(t0, i, s, t, -(q // g), p // g)
            for j in range(t0 + 1, ncols):
                if a[t0][j] != 0:
                    p, q = a[t0][t0], a[t0][j]
                    if p != 0 and q % p == 0:
                        colop(t0, j, 1, 0, -(q // p), 1)
                    else:
                        g, s, t = _xgcd(p, q)
                        colop(t0, j, s, t, -(q // g), p // g)
            if all(a[i][t0] == 0 for i in range(t0 + 1, nrows)) and all(
                a[t0][j] == 0 for j in range(t0 + 1, ncols)
            ):
                return

    for t0 in range(min(nrows, ncols)):
        piv = next(
            (
                (i, j)
                for i in range(t0, nrows)
                for j in range(t0, ncols)
                if a[i][j] != 0
            ),
            None,
        )
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t0:
            a[t0], a[i0] = a[i0], a[t0]
            u[t0], u[i0] = u[i0], u[t0]
        if j0 != t0:
            colop(t0, j0, 0, 1, 1, 0)
        clear_at(t0)
        # enforce divisibility of the remaining block by the pivot
        while True:
            bad = next(
                (
                    (i, j)
                    for i in range(t0 + 1, nrows)
                    for j in range(t0 + 1, ncols)
                    if a[i][j] % a[t0][t0] != 0
                ),
                None,
            )
            if bad is None:
                break
            i, j = bad
            a[t0] = [p + q for p, q in zip(a[t0], a[i])]
            u[t0] = [p + q for p, q in zip(u[t0], u[i])]
            clear_at(t0)
        if a[t0][t0] < 0:
            a[t0] = [-x for x in a[t0]]
            u[t0] = [-x for x in u[t0]]
    return mat(a), mat(u), mat(v)


def invariant_factors(m: Mat) -> tuple[int, ...]:
    s, _, _ = snf(m)
    return tuple(s[i][i] for i in range(min(shape(s))) if s[i][i] != 0)


def kernel_basis(m: Mat) -> Mat:
    """Basis of the saturated integer kernel lattice {x : m·x = 0}.

    Returned as a matrix whose *columns* are the basis vectors; the matrix
    has zero columns count when the kernel is trivial.  The basis is
    canonical (lower-echelon HNF of the row form).
    """
    nrows, ncols = shape(m)
    if nrows == 0 or ncols == 0:
        return identity(ncols)
    s, _, v = snf(m)
    diag = [s[i][i] for i in range(min(nrows, ncols))]
    free = [j for j in range(ncols) if j >= len(diag) or diag[j] == 0]
    if not free:
        return tuple(() for _ in range(ncols))
    cols = [tuple(v[i][j] for i in range(ncols)) for j in free]
    h, _ = hnf(mat(cols))
    basis_rows = [row for row in h if any(x != 0 for x in row)]
    return transpose(mat(basis_rows))


def column_count(m: Mat) -> int:
    return len(m[0]) if m else 0


def unimodular_inverse(m: Mat) -> Mat:
    """Exact inverse of a unimodular integer matrix."""
    n, c = shape(m)
    if n != c:
        raise ValueError("inverse of non-square matrix")
    d = det(m)
    if abs(d) != 1:
        raise ValueError(f"matrix is not unimodular (det {d})")
    cols = []
    e = identity(n)
    for j in range(n):
        x = solve(m, e[j])
        cols.append(tuple(int(xi) for xi in x))
    return transpose(mat(cols))


def fraction_inverse(m: Mat) -> tuple[tuple[Fraction, ...], ...]:
    """Exact rational inverse of a nonsingular square integer matrix."""
    n, c = shape(m)
    if n != c:
        raise ValueError("inverse of non-square matrix")
    cols = []
    e = identity(n)
    for j in range(n):
        x = solve(m, e[j])
        if x is None:
            raise ValueError("matrix is singular")
        cols.append(x)
    return transpose(mat(cols))


def solve_integer(a: Mat, b: Vec) -> Vec | None:
    """One integer solution x of a·x = b, or None if none exists."""
    nrows, ncols = shape(a)
    if nrows == 0:
        return (0,) * ncols
    s, u, v = snf(a)
    c = mat_vec(u, b)
    y = [0] * ncols
    diag = [s[i][i] for i in range(min(nrows, ncols))]
    for i in range(nrows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
    return mat_vec(v, tuple(y))


def saturation_of_rowspan(rows: Mat, ambient: int) -> Mat:
    """Canonical HNF basis (as rows) of the saturated lattice
    span_Q(rows) ∩ Z^ambient.  Empty input yields an empty basis."""
    nonzero = [r for r in rows if any(x != 0 for x in r)]
    if not nonzero:
        return ()
    orth = kernel_basis(mat(nonzero))  # columns orthogonal to the span
    if column_count(orth) == 0:
        return identity(ambient)
    sat = kernel_basis(transpose(orth))
    cols = [tuple(sat[i][j] for i in range(ambient)) for j in range(column_count(sat))]
    h, _ = hnf(mat(cols))
    return mat(row for row in h if any(x != 0 for x in row))


def reduce_mod_subspace(v: Sequence, basis_rows: Mat) -> tuple[Fraction, ...]:
    """Canonical representative of v modulo the rational span of basis_rows:
    the unique coset member with zeros in the pivot columns of the span."""
    if not basis_rows:
        return tuple(Fraction(x) for x in v)
    red, pivots = rref(basis_rows)
    w = [Fraction(x) for x in v]
    for row, p in zip(red, pivots):
        f = w[p]
        if f != 0:
            w = [x - f * y for x, y in zip(w, row)]
    return tuple(w)


def cokernel_projection(cols: Mat) -> Mat:
    """Projection matrix p with p·cols = 0 presenting Z^n / (column span).

    Requires the column span to be saturated (all invariant factors 1);
    raises ValueError with the offending factor otherwise.  The result has
    n - rank(cols) rows and is surjective onto Z^(n-rank).
    """
    n, k = shape(cols)
    if k == 0:
        return identity(n)
    if rank(cols) != k:
        raise ValueError("columns are not linearly independent")
    s, u, _ = snf(cols)
    for i in range(k):
        if s[i][i] != 1:
            raise ValueError(f"column span is not saturated (invariant factor {s[i][i]})")
    return mat(u[k:])
