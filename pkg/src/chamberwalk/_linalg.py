"""Exact linear algebra over Q and Z.

Internal plumbing shared by the public modules: inertia of symmetric
matrices, Smith and Hermite normal forms, rational/integer linear solvers,
and floor/ceil helpers for quadratic irrationalities.  Everything works on
Python ints and fractions.Fraction; nothing goes through floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Optional, Sequence

Q = Fraction

Vec = tuple
Mat = tuple


# ---------------------------------------------------------------------------
# vectors

def vec_add(v, w):
    return tuple(a + b for a, b in zip(v, w))


def vec_sub(v, w):
    return tuple(a - b for a, b in zip(v, w))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_neg(v):
    return tuple(-a for a in v)


def vec_is_zero(v):
    return all(a == 0 for a in v)


def as_fraction(x) -> Q:
    if isinstance(x, Q):
        return x
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, str):
        return Q(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def normalize_number(x):
    """Exact rational, stored as int when integral."""
    f = as_fraction(x)
    return f.numerator if f.denominator == 1 else f


def vec_normalize(v):
    return tuple(normalize_number(a) for a in v)


def vec_int(v):
    """Coerce to an int tuple, raising if any entry is non-integral."""
    out = []
    for a in v:
        f = as_fraction(a)
        if f.denominator != 1:
            raise ValueError(f"non-integral coordinate {a!r}")
        out.append(f.numerator)
    return tuple(out)


def vec_is_integral(v):
    try:
        vec_int(v)
    except (ValueError, TypeError):
        return False
    return True


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for a in values:
        g = gcd(g, a)
    return g


def vec_primitive(v):
    """Divide an integer vector by the gcd of its entries; keeps direction."""
    v = vec_int(v)
    g = gcd_all(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(a // g for a in v)


def vec_clear_denominators(v):
    """Primitive integer vector on the same ray as the rational vector v."""
    d = 1
    for a in v:
        d = lcm(d, as_fraction(a).denominator)
    return vec_primitive(tuple(as_fraction(a) * d for a in v))


# ---------------------------------------------------------------------------
# symmetric forms

def gram_product(gram, v, w):
    """v^T * gram * w, exact."""
    total = 0
    for i, vi in enumerate(v):
        if vi:
            row = gram[i]
            s = 0
            for j, wj in enumerate(w):
                if wj:
                    s += row[j] * wj
            total += vi * s
    return normalize_number(Q(total))


def inertia(gram) -> tuple[int, int, int]:
    """Exact Sylvester inertia (p, q, z) of a symmetric rational matrix."""
    n = len(gram)
    a = [[as_fraction(x) for x in row] for row in gram]
    active = list(range(n))
    p = q = z = 0
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            # look for an off-diagonal entry; none means the rest is zero
            pair = None
            for i in active:
                for j in active:
                    if i != j and a[i][j] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                z += len(active)
                break
            i, j = pair
            # basis change e_i <- e_i + e_j makes a[i][i] = 2*a[i][j] != 0
            row_j = {k: a[j][k] for k in active}
            for k in active:
                a[i][k] += row_j[k]
            for k in active:
                a[k][i] += row_j[k]
            # (e_i + e_j)^2 = a_ii + 2 a_ij + a_jj; the two loops added 2 a_ij
            a[i][i] += row_j[j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            p += 1
        else:
            q += 1
        active.remove(piv)
        for i in active:
            if a[i][piv]:
                f = a[i][piv] / d
                for j in active:
                    a[i][j] -= f * a[piv][j]
        for i in active:
            a[piv][i] = Q(0)
            a[i][piv] = Q(0)
    return (p, q, z)


# ---------------------------------------------------------------------------
# integer normal forms

def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qty = old_r // r
        old_r, r = r, old_r - qty * r
        old_s, s = s, old_s - qty * s
        old_t, t = t, old_t - qty * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(mat) -> tuple[tuple[int, ...], Mat, Mat]:
    """Diagonalize an integer matrix: U * A * V = diag(d), d_i | d_{i+1}.

    Returns (d, U, V) with U, V unimodular, d_i >= 0.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [[int(as_fraction(x)) if as_fraction(x).denominator == 1 else None for x in row] for row in mat]
    for row in A:
        if None in row:
            raise ValueError("Smith normal form needs an integer matrix")
    U = identity_matrix(m)
    V = identity_matrix(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in A:
            r[i] -= q * r[j]
        for r in V:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    size = min(m, n)
    while t < size:
        # smallest-abs nonzero pivot in the trailing submatrix
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        if A[t][t] < 0:
            negate_row(t)
        restart = False
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, A[i][t] // A[t][t])
            leftover = next((i for i in range(t + 1, m) if A[i][t]), None)
            if leftover is not None:
                swap_rows(t, leftover)
                if A[t][t] < 0:
                    negate_row(t)
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, A[t][j] // A[t][t])
            leftover = next((j for j in range(t + 1, n) if A[t][j]), None)
            if leftover is not None:
                swap_cols(t, leftover)
                if A[t][t] < 0:
                    negate_row(t)
                continue
            break
        piv = A[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % piv:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # pull the offending row in; shrinks the pivot
            restart = True
        if not restart:
            t += 1
    d = tuple(A[i][i] for i in range(size))
    return d, tuple(tuple(r) for r in U), tuple(tuple(r) for r in V)


def hnf_columns(vectors: Sequence[Sequence[int]]) -> tuple[Vec, ...]:
    """Canonical column Hermite form of the integer column span.

    Pivot rows strictly increase, pivots are positive, entries of earlier
    columns at a pivot row lie in [0, pivot).
    """
    cols = [list(vec_int(v)) for v in vectors if not vec_is_zero(v)]
    if not cols:
        return ()
    n = len(cols[0])
    c = 0
    for row in range(n):
        j0 = next((j for j in range(c, len(cols)) if cols[j][row]), None)
        if j0 is None:
            continue
        cols[c], cols[j0] = cols[j0], cols[c]
        for j in range(c + 1, len(cols)):
            if cols[j][row]:
                a, b = cols[c][row], cols[j][row]
                g, x, y = xgcd(a, b)
                pc, pj = cols[c], cols[j]
                cols[c] = [x * p + y * r for p, r in zip(pc, pj)]
                cols[j] = [(-b // g) * p + (a // g) * r for p, r in zip(pc, pj)]
        if cols[c][row] < 0:
            cols[c] = [-p for p in cols[c]]
        piv = cols[c][row]
        for l in range(c):
            qd = cols[l][row] // piv
            if qd:
                cols[l] = [p - qd * r for p, r in zip(cols[l], cols[c])]
        c += 1
        if c == len(cols):
            break
    return tuple(tuple(col) for col in cols[:c])


def lattice_canonical_basis(vectors) -> tuple[Vec, ...]:
    """Canonical basis of the Z-span of rational vectors (column Hermite form
    of the lattice, scaled by its exact denominator)."""
    vecs = [tuple(as_fraction(a) for a in v) for v in vectors]
    vecs = [v for v in vecs if not vec_is_zero(v)]
    if not vecs:
        return ()
    d0 = 1
    for v in vecs:
        for a in v:
            d0 = lcm(d0, a.denominator)
    h0 = hnf_columns([vec_int(vec_scale(d0, v)) for v in vecs])
    b1 = [vec_scale(Q(1, d0), col) for col in h0]
    d = 1
    for v in b1:
        for a in v:
            d = lcm(d, as_fraction(a).denominator)
    h = hnf_columns([vec_int(vec_scale(d, v)) for v in b1])
    return tuple(vec_normalize(vec_scale(Q(1, d), col)) for col in h)


# ---------------------------------------------------------------------------
# rational linear solving

def rref(rows) -> tuple[list[list[Q]], list[int]]:
    """Reduced row echelon form; returns (R, pivot column indices)."""
    a = [[as_fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def solve_rational(a, b) -> Optional[Vec]:
    """One exact solution x of A x = b, or None if inconsistent."""
    m = len(a)
    if m == 0:
        return ()
    n = len(a[0])
    aug = [list(a[i]) + [b[i]] for i in range(m)]
    r, pivots = rref(aug)
    for row in r:
        if all(x == 0 for x in row[:n]) and row[n] != 0:
            return None
    x = [Q(0)] * n
    for i, c in enumerate(pivots):
        if c == n:
            return None
        x[c] = r[i][n]
    return vec_normalize(x)


def nullspace_rational(a) -> list[Vec]:
    """Basis of the rational kernel of A."""
    m = len(a)
    if m == 0:
        raise ValueError("nullspace of an empty matrix is ambiguous")
    n = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        x = [Q(0)] * n
        x[fc] = Q(1)
        for i, pc in enumerate(pivots):
            x[pc] = -r[i][fc]
        basis.append(vec_normalize(x))
    return basis


def solve_integer(a, b) -> Optional[tuple[Vec, list[Vec]]]:
    """Integer solutions of A x = b: (particular, kernel basis) or None."""
    m = len(a)
    n = len(a[0]) if m else 0
    d, u, v = smith_normal_form(a)
    ub = [sum(u[i][j] * b[j] for j in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        di = d[i] if i < len(d) else 0
        if di:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
        elif ub[i]:
            return None
    x0 = tuple(sum(v[i][j] * y[j] for j in range(n)) for i in range(n))
    kernel = []
    for j in range(n):
        dj = d[j] if j < len(d) else 0
        if dj == 0:
            kernel.append(tuple(v[i][j] for i in range(n)))
    return x0, kernel


# ---------------------------------------------------------------------------
# integer square-root helpers

def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def rational_sqrt(q) -> Optional[Q]:
    """Exact square root of a rational, or None if irrational."""
    q = as_fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Q(ra, rb)
    return None


def floor_sqrt_frac(q) -> int:
    """floor(sqrt(q)) for a rational q >= 0."""
    q = as_fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    n = q.numerator // q.denominator
    c = isqrt(n)
    while (c + 1) * (c + 1) * q.denominator <= q.numerator:
        c += 1
    return c


def floor_affine_sqrt(p: int, disc: int, q: int) -> int:
    """floor((p + sqrt(disc)) / q) with q > 0, disc >= 0, everything exact."""
    if q <= 0 or disc < 0:
        raise ValueError("need q > 0 and disc >= 0")
    c = (p + isqrt(disc)) // q
    while True:
        t = (c + 1) * q - p
        if t <= 0 or t * t <= disc:
            c += 1
        else:
            break
    while True:
        t = c * q - p
        if t > 0 and t * t > disc:
            c -= 1
        else:
            break
    return c


def ceil_affine_sqrt(p: int, disc: int, q: int) -> int:
    """ceil((p - sqrt(disc)) / q) with q > 0, disc >= 0."""
    return -floor_affine_sqrt(-p, disc, q)


def floor_affine_msqrt(p: int, disc: int, q: int) -> int:
    """floor((p - sqrt(disc)) / q) with q > 0, disc >= 0."""
    if q <= 0 or disc < 0:
        raise ValueError("need q > 0 and disc >= 0")

    def ok(n):  # n <= (p - sqrt(disc))/q
        t = p - n * q
        return t >= 0 and t * t >= disc

    c = (p - isqrt(disc) - 1) // q
    while ok(c + 1):
        c += 1
    while not ok(c):
        c -= 1
    return c


def ceil_affine_psqrt(p: int, disc: int, q: int) -> int:
    """ceil((p + sqrt(disc)) / q) with q > 0, disc >= 0."""
    if q <= 0 or disc < 0:
        raise ValueError("need q > 0 and disc >= 0")

    def ok(n):  # n >= (p + sqrt(disc))/q
        t = n * q - p
        return t >= 0 and t * t >= disc

    c = (p + isqrt(disc) + 1) // q
    while ok(c - 1):
        c -= 1
    while not ok(c):
        c += 1
    return c


def ceil_div(a: int, b: int) -> int:
    if b <= 0:
        raise ValueError("need positive divisor")
    return -((-a) // b)


# ---------------------------------------------------------------------------
# integer solution sets of one-variable quadratics (for run-length jumps)

def quad_nonpos_pieces(a: int, b: int, c: int) -> list[tuple[Optional[int], Optional[int]]]:
    """The set {i in Z : a i^2 + b i + c <= 0} as a list of intervals.

    Intervals are (lo, hi) with None meaning unbounded on that side.
    """
    if a > 0:
        disc = b * b - 4 * a * c
        if disc < 0:
            return []
        lo = ceil_affine_sqrt(-b, disc, 2 * a)
        hi = floor_affine_sqrt(-b, disc, 2 * a)
        return [(lo, hi)] if lo <= hi else []
    if a == 0:
        if b > 0:
            return [(None, (-c) // b)]
        if b < 0:
            return [(ceil_div(c, -b), None)]
        return [(None, None)] if c <= 0 else []
    # a < 0: nonpositive outside the open root interval
    disc = b * b - 4 * a * c
    if disc < 0:
        return [(None, None)]
    hi1 = floor_affine_msqrt(b, disc, -2 * a)   # floor of the smaller root
    lo2 = ceil_affine_psqrt(b, disc, -2 * a)    # ceil of the larger root
    return [(None, hi1), (lo2, None)]


def _contains(piece, j):
    lo, hi = piece
    return (lo is None or lo <= j) and (hi is None or j <= hi)


def min_missing_from(pieces, start: int) -> Optional[int]:
    """Smallest integer >= start not covered by any piece (None if covered
    out to +infinity)."""
    j = start
    for _ in range(len(pieces) + 2):
        moved = False
        for piece in pieces:
            if _contains(piece, j):
                if piece[1] is None:
                    return None
                j = piece[1] + 1
                moved = True
        if not moved:
            return j
    return j


def min_covered_from(pieces, start: int) -> Optional[int]:
    """Smallest integer >= start covered by some piece (None if none)."""
    best = None
    for lo, hi in pieces:
        c = start if lo is None else max(start, lo)
        if hi is not None and c > hi:
            continue
        if best is None or c < best:
            best = c
    return best
