"""Lattices with exact rational bilinear forms.

Vectors are plain tuples of ints / Fractions in the coordinates of the
lattice basis; a :class:`Lattice` holds the Gram matrix and answers inner
products, norms, signatures, root predicates and short-vector enumeration
in positive-definite sublattices.  All arithmetic is exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Optional, Sequence

from ._linalg import (
    Q,
    as_fraction,
    ceil_affine_sqrt,
    floor_affine_sqrt,
    gram_product,
    hnf_columns,
    inertia,
    lattice_canonical_basis,
    normalize_number,
    nullspace_rational,
    rational_sqrt,
    rref,
    smith_normal_form,
    solve_rational,
    vec_int,
    vec_is_integral,
    vec_is_zero,
    vec_normalize,
    vec_primitive,
    vec_scale,
    vec_sub,
)

__all__ = [
    "Lattice",
    "CosetLattice",
    "DefiniteEnumerator",
    "signature",
    "discriminant_exponent",
    "root_norm_menu",
    "constraint_lattice",
    "is_almost_root",
    "is_root",
    "primitive_part",
    "definite_enumerate",
    "isqrt_floor",
    "lattice_from_json",
    "lattice_to_json",
]


def isqrt_floor(n: int) -> int:
    """Largest t with t*t <= n."""
    if n < 0:
        raise ValueError("isqrt_floor needs a non-negative integer")
    return isqrt(n)


class Lattice:
    """Free module with an exact symmetric rational bilinear form."""

    def __init__(self, gram):
        rows = [tuple(normalize_number(x) for x in row) for row in gram]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"Gram matrix not symmetric at ({i},{j})")
        self.gram = tuple(rows)
        self.rank = n
        self._signature: Optional[tuple[int, int, int]] = None

    def inner(self, v, w):
        if len(v) != self.rank or len(w) != self.rank:
            raise ValueError("vector length does not match lattice rank")
        return gram_product(self.gram, v, w)

    def norm(self, v):
        return self.inner(v, v)

    def signature(self) -> tuple[int, int, int]:
        if self._signature is None:
            self._signature = inertia(self.gram)
        return self._signature

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self.gram for x in row)

    def is_nondegenerate(self) -> bool:
        return self.signature()[2] == 0

    def is_lorentzian(self) -> bool:
        return self.signature() == (self.rank - 1, 1, 0)

    def basis_vectors(self):
        return tuple(
            tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank)
        )

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"Lattice({[list(r) for r in self.gram]!r})"


def signature(lattice: Lattice) -> tuple[int, int, int]:
    return lattice.signature()


def _require_integral_nondegenerate(lattice: Lattice):
    if not lattice.is_integral:
        raise ValueError("operation needs an integral lattice")
    if not lattice.is_nondegenerate():
        raise ValueError("operation needs a nondegenerate lattice")


def discriminant_exponent(lattice: Lattice) -> int:
    """Exponent of the dual quotient group: the largest elementary divisor
    of the Gram matrix."""
    _require_integral_nondegenerate(lattice)
    d, _, _ = smith_normal_form(lattice.gram)
    return max(abs(x) for x in d)


def divisors(n: int) -> tuple[int, ...]:
    n = abs(n)
    out = set()
    f = 1
    while f * f <= n:
        if n % f == 0:
            out.add(f)
            out.add(n // f)
        f += 1
    return tuple(sorted(out))


def root_norm_menu(lattice: Lattice) -> tuple[int, ...]:
    """All positive divisors of twice the discriminant exponent; contains the
    norm of every root of the lattice."""
    return divisors(2 * discriminant_exponent(lattice))


class CosetLattice:
    """offset + Z-span(basis) inside an ambient lattice.

    The basis is kept in canonical column Hermite form (scaled exactly for
    rational entries) and the offset is reduced modulo the span, so two
    cosets are equal iff their stored data are equal.
    """

    def __init__(self, ambient: Lattice, basis, offset=None):
        self.ambient = ambient
        cb = lattice_canonical_basis(basis)
        for v in cb:
            if len(v) != ambient.rank:
                raise ValueError("basis vector length does not match ambient rank")
        self.basis = cb
        self.rank = len(cb)
        # pivot data for offset reduction: first nonzero row of each column
        self._pivots = []
        for col in cb:
            p = next(i for i, x in enumerate(col) if x != 0)
            self._pivots.append((p, col[p]))
        off = tuple(as_fraction(x) for x in (offset or (0,) * ambient.rank))
        if len(off) != ambient.rank:
            raise ValueError("offset length does not match ambient rank")
        self.offset = self._reduce(off)
        # echelon data for membership tests: solve basis * x = v
        self._solve_rows = [[cb[j][i] for j in range(self.rank)] for i in range(ambient.rank)]

    def _reduce(self, off):
        off = list(as_fraction(x) for x in off)
        for j, (p, piv) in enumerate(self._pivots):
            q = off[p] // piv
            if q:
                for i in range(len(off)):
                    off[i] -= q * self.basis[j][i]
        return vec_normalize(off)

    def coords(self, v) -> Optional[tuple]:
        """Integer coordinates of v - offset in the basis, or None."""
        diff = vec_sub(tuple(as_fraction(x) for x in v), self.offset)
        if self.rank == 0:
            return () if vec_is_zero(diff) else None
        x = solve_rational(self._solve_rows, diff)
        if x is None:
            return None
        if not vec_is_integral(x):
            return None
        # solve_rational gives one solution; basis columns are independent
        return vec_int(x)

    def __contains__(self, v):
        return self.coords(v) is not None

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def element(self, coords):
        v = list(self.offset)
        for c, col in zip(coords, self.basis):
            for i in range(len(v)):
                v[i] += c * col[i]
        return vec_normalize(v)

    def basis_gram(self):
        return tuple(
            tuple(self.ambient.inner(b, c) for c in self.basis) for b in self.basis
        )

    def __eq__(self, other):
        return (
            isinstance(other, CosetLattice)
            and self.ambient == other.ambient
            and self.basis == other.basis
            and self.offset == other.offset
        )

    def __hash__(self):
        return hash((self.ambient, self.basis, self.offset))

    def __repr__(self):
        return f"CosetLattice(rank={self.rank}, offset={self.offset})"


def constraint_lattice(lattice: Lattice, n: int) -> CosetLattice:
    """Sublattice of vectors whose doubled inner products with the whole
    lattice are divisible by n; its norm-n vectors are exactly the norm-n
    almost-roots."""
    _require_integral_nondegenerate(lattice)
    if n <= 0:
        raise ValueError("need a positive norm")
    a = [[2 * x for x in row] for row in lattice.gram]
    d, _, v = smith_normal_form(a)
    cols = []
    for j in range(lattice.rank):
        m = n // gcd(n, d[j])
        cols.append(tuple(m * v[i][j] for i in range(lattice.rank)))
    return CosetLattice(lattice, cols)


def is_almost_root(lattice: Lattice, v) -> bool:
    """Positive norm and reflection-integrality: 2 (v . x) / v^2 is an integer
    for every lattice x."""
    _require_integral_root_input(lattice, v)
    vv = lattice.norm(v)
    if vv <= 0:
        return False
    for i in range(lattice.rank):
        s = 2 * sum(lattice.gram[i][j] * v[j] for j in range(lattice.rank))
        if s % vv:
            return False
    return True


def _require_integral_root_input(lattice: Lattice, v):
    if not lattice.is_integral:
        raise ValueError("root predicates need an integral lattice")
    if not vec_is_integral(v):
        raise ValueError("root predicates need integer coordinates")
    if vec_is_zero(v):
        raise ValueError("zero vector")


def is_root(lattice: Lattice, v) -> bool:
    if not is_almost_root(lattice, v):
        return False
    return gcd(*vec_int(v)) == 1


def primitive_part(v):
    """v divided by the gcd of its (integer) coordinates."""
    return vec_primitive(v)


class DefiniteEnumerator:
    """Fixed positive-definite basis inside an ambient lattice; enumerates
    coset vectors of given norm (or bounded norm) for varying offsets.

    The LDL^T data of the basis Gram is computed once, so repeated calls
    with different offsets are cheap.
    """

    def __init__(self, ambient: Lattice, basis):
        self.ambient = ambient
        self.basis = tuple(tuple(normalize_number(x) for x in b) for b in basis)
        r = len(self.basis)
        self.rank = r
        a = [[as_fraction(ambient.inner(b, c)) for c in self.basis] for b in self.basis]
        self._gram = a
        # A = L D L^T with unit lower-triangular L
        low = [[Q(0)] * r for _ in range(r)]
        diag = [Q(0)] * r
        for i in range(r):
            s = a[i][i] - sum(low[i][k] * low[i][k] * diag[k] for k in range(i))
            if s <= 0:
                raise ValueError("Gram of the basis is not positive definite")
            diag[i] = s
            low[i][i] = Q(1)
            for j in range(i + 1, r):
                t = a[j][i] - sum(low[j][k] * low[i][k] * diag[k] for k in range(i))
                low[j][i] = t / s
        self._low = low
        self._diag = diag

    def enumerate(self, offset=None, *, norm=None, max_norm=None):
        """All vectors offset + sum x_i b_i with the requested norm (or with
        norm <= max_norm), sorted by coordinates."""
        if (norm is None) == (max_norm is None):
            raise ValueError("pass exactly one of norm / max_norm")
        off = tuple(as_fraction(x) for x in (offset or (0,) * self.ambient.rank))
        r = self.rank
        if r == 0:
            value = self.ambient.norm(off)
            hit = (norm is not None and value == as_fraction(norm)) or (
                max_norm is not None and value <= as_fraction(max_norm)
            )
            return (vec_normalize(off),) if hit else ()
        b = [as_fraction(self.ambient.inner(off, c)) for c in self.basis]
        mu = solve_rational(self._gram, b)
        rho = self.ambient.norm(off) - sum(bi * mi for bi, mi in zip(b, mu))
        bound = as_fraction(norm if norm is not None else max_norm) - rho
        results = []
        if bound < 0:
            return ()
        shifts = [as_fraction(m) for m in mu]
        low, diag = self._low, self._diag
        x = [0] * r

        def emit():
            vec = list(off)
            for k in range(r):
                if x[k]:
                    for t in range(len(vec)):
                        vec[t] += x[k] * self.basis[k][t]
            results.append(vec_normalize(vec))

        def descend(i, remaining):
            c = shifts[i] + sum(low[j][i] * (x[j] + shifts[j]) for j in range(i + 1, r))
            if i == 0 and norm is not None:
                # last level with an exact target: solve d0 (x + c)^2 = remaining
                root = rational_sqrt(remaining / diag[0])
                if root is None:
                    return
                for z in {-c - root, -c + root}:
                    if z.denominator == 1:
                        x[0] = int(z)
                        emit()
                return
            rad = remaining / diag[i]
            lo = _ceil_minus_sqrt(-c, rad)
            hi = _floor_plus_sqrt(-c, rad)
            for xi in range(lo, hi + 1):
                x[i] = xi
                used = diag[i] * (xi + c) ** 2
                if i == 0:
                    emit()
                else:
                    descend(i - 1, remaining - used)

        descend(r - 1, bound)
        results.sort(key=_coord_key)
        return tuple(results)


def _coord_key(v):
    return tuple(as_fraction(x) for x in v)


def _floor_plus_sqrt(c0, rad):
    """floor(c0 + sqrt(rad)) for rationals, rad >= 0."""
    c0 = as_fraction(c0)
    rad = as_fraction(rad)
    d = lcm(c0.denominator, rad.denominator)
    disc = rad * d * d
    return floor_affine_sqrt(int(c0 * d), int(disc), d)


def _ceil_minus_sqrt(c0, rad):
    """ceil(c0 - sqrt(rad)) for rationals, rad >= 0."""
    c0 = as_fraction(c0)
    rad = as_fraction(rad)
    d = lcm(c0.denominator, rad.denominator)
    disc = rad * d * d
    return ceil_affine_sqrt(int(c0 * d), int(disc), d)


def definite_enumerate(coset, *, norm=None, max_norm=None):
    """Vectors of exact norm (or norm <= max_norm) in a coset of a
    positive-definite lattice, complete and in coordinate order."""
    if isinstance(coset, Lattice):
        coset = CosetLattice(coset, coset.basis_vectors())
    enum = DefiniteEnumerator(coset.ambient, coset.basis)
    return enum.enumerate(coset.offset, norm=norm, max_norm=max_norm)


# ---------------------------------------------------------------------------
# JSON interface

def lattice_from_json(data) -> Lattice:
    """Build a lattice from {"gram": [[...]]}; entries are ints or "p/q"."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict) or "gram" not in data:
        raise ValueError('lattice JSON must be an object with a "gram" key')
    raw = data["gram"]
    rows = []
    for i, row in enumerate(raw):
        out = []
        for j, x in enumerate(row):
            try:
                out.append(normalize_number(x))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"bad entry gram[{i}][{j}] = {x!r}") from exc
        rows.append(out)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("gram must be a square matrix")
    for i in range(n):
        for j in range(n):
            if rows[i][j] != rows[j][i]:
                raise ValueError(f"gram is not symmetric at gram[{i}][{j}]")
    return Lattice(rows)


def _num_str(x):
    f = as_fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def lattice_to_json(lattice: Lattice) -> dict:
    return {
        "gram": [
            [x if isinstance(x, int) else _num_str(x) for x in row] for row in lattice.gram
        ]
    }
