"""Ordered search for small-positive-norm vectors in 2D Lorentzian lattices.

The frame fixes a rank-2 Lorentzian lattice, a timelike-or-lightlike point
k, and an open half-plane bounded by the line through k.  The sector S of
nonnegative-norm vectors on that side is totally ordered ray by ray (and
by length along a ray); the algorithms walk this order producing primitive
vectors of norm <= M one at a time, together with companion vectors
("supplements") that certify the walk never skips anything.

Everything is exact integer/rational arithmetic.  Vectors are integer
coordinate pairs; k and the half-plane witness may be rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterator, Optional

from ._linalg import (
    Q,
    as_fraction,
    is_square_int,
    floor_affine_sqrt,
    min_covered_from,
    min_missing_from,
    quad_nonpos_pieces,
    xgcd,
)
from .lattice import Lattice

__all__ = [
    "PlaneFrame",
    "PlaneIsometry",
    "in_half_plane",
    "in_sector",
    "in_omega",
    "sector_compare",
    "is_M_supplement",
    "make_supplement",
    "canonical_supplement",
    "promised",
    "shorter",
    "not_promised",
    "anisotropic_period",
    "ascending_short_vectors",
]


def _det2(v, w):
    return v[0] * w[1] - v[1] * w[0]


def _ivec(v):
    if len(v) != 2 or not all(isinstance(x, int) for x in v):
        raise TypeError(f"expected an integer coordinate pair, got {v!r}")
    return (v[0], v[1])


class PlaneFrame:
    """Rank-2 Lorentzian lattice with a marked boundary point and side."""

    def __init__(self, lattice: Lattice, k, half_witness):
        if lattice.rank != 2:
            raise ValueError("plane frame needs a rank-2 lattice")
        if lattice.signature() != (1, 1, 0):
            raise ValueError("plane frame needs signature (1,1)")
        self.lattice = lattice
        self.k = tuple(as_fraction(x) for x in k)
        if self.k == (0, 0):
            raise ValueError("k must be nonzero")
        kk = lattice.norm(self.k)
        if kk > 0:
            raise ValueError("k must be timelike or lightlike")
        self.k_norm = kk
        w = tuple(as_fraction(x) for x in half_witness)
        if _det2(w, self.k) == 0:
            raise ValueError("half-plane witness must lie off the line through k")
        self.witness = w
        if kk == 0 and lattice.inner(self.k, w) >= 0:
            raise ValueError(
                "for lightlike k the half-plane must contain timelike vectors near k"
            )
        d = _det2(w, self.k)
        self.eps = 1 if d > 0 else -1
        # integer-scaled Gram for fast exact arithmetic on integer vectors
        scale = 1
        for row in lattice.gram:
            for x in row:
                scale = lcm(scale, as_fraction(x).denominator)
        self.scale = scale
        g = lattice.gram
        self._g00 = int(as_fraction(g[0][0]) * scale)
        self._g01 = int(as_fraction(g[0][1]) * scale)
        self._g11 = int(as_fraction(g[1][1]) * scale)
        self.is_anisotropic = not is_square_int(self._g01 * self._g01 - self._g00 * self._g11)

    # scaled integer inner products (values are scale * true value)
    def dot_i(self, v, w) -> int:
        return (
            self._g00 * v[0] * w[0]
            + self._g01 * (v[0] * w[1] + v[1] * w[0])
            + self._g11 * v[1] * w[1]
        )

    def norm_i(self, v) -> int:
        return self.dot_i(v, v)

    def inner(self, v, w):
        num = (
            self._g00 * v[0] * w[0]
            + self._g01 * (v[0] * w[1] + v[1] * w[0])
            + self._g11 * v[1] * w[1]
        )
        return Q(num, self.scale)

    def norm(self, v):
        return self.inner(v, v)

    def inner_k(self, v):
        return self.inner(self.k, v)

    def scaled_bound(self, M) -> Fraction:
        """M in the scaled-norm units used by dot_i / norm_i."""
        return as_fraction(M) * self.scale

    def oriented_basis(self, r, l) -> bool:
        return _det2(r, l) == self.eps

    def is_primitive(self, v) -> bool:
        v = _ivec(v)
        return gcd(v[0], v[1]) == 1


def in_half_plane(frame: PlaneFrame, v) -> bool:
    d = _det2(v, frame.k)
    return d != 0 and (1 if d > 0 else -1) == frame.eps


def _on_ray_opposite_k(frame: PlaneFrame, v) -> bool:
    if _det2(v, frame.k) != 0:
        return False
    i = 0 if frame.k[0] != 0 else 1
    return as_fraction(v[i]) / frame.k[i] < 0


def in_sector(frame: PlaneFrame, v) -> bool:
    """Nonnegative norm, on the chosen side (the past-pointing boundary ray
    of the line through k counts as the bottom of the sector)."""
    if v == (0, 0) or v == (Q(0), Q(0)):
        return False
    if frame.norm(v) < 0:
        return False
    return in_half_plane(frame, v) or _on_ray_opposite_k(frame, v)


def in_omega(frame: PlaneFrame, v) -> bool:
    """Lightlike and at the top of the sector (future-directed)."""
    return in_sector(frame, v) and frame.norm(v) == 0 and frame.inner_k(v) < 0


def sector_compare(frame: PlaneFrame, v, w) -> int:
    """-1/0/1 ordering on the sector: by ray, then by length along a ray."""
    for x in (v, w):
        if not in_sector(frame, x):
            raise ValueError(f"{x!r} is not in the sector")
    d = _det2(v, w) * frame.eps
    if d > 0:
        return -1
    if d < 0:
        return 1
    i = 0 if w[0] != 0 else 1
    t = as_fraction(v[i]) / as_fraction(w[i])
    if t <= 0:
        raise ValueError("proportional sector vectors must lie on the same ray")
    return -1 if t < 1 else (0 if t == 1 else 1)


def is_M_supplement(frame: PlaneFrame, M, r, l) -> bool:
    """Oriented basis (r, l) with l outside the open convex hull of the
    norm-M branch in the sector (that hull is exactly: norm > M and on the
    sector side)."""
    r, l = _ivec(r), _ivec(l)
    if not frame.oriented_basis(r, l):
        return False
    Ms = frame.scaled_bound(M)
    return not (frame.norm_i(l) > Ms and in_half_plane(frame, l))


def make_supplement(frame: PlaneFrame, M, r, l=None):
    """Some M-supplement of the primitive sector vector r: complete r to an
    oriented basis, then shift by the least multiple of r that leaves the
    hull interior."""
    r = _ivec(r)
    if not frame.is_primitive(r):
        raise ValueError("r must be primitive")
    if not in_sector(frame, r):
        raise ValueError("r must lie in the sector")
    if l is None:
        g, x, y = xgcd(r[0], r[1])
        l = (-y * frame.eps, x * frame.eps)
    else:
        l = _ivec(l)
    if not frame.oriented_basis(r, l):
        raise ValueError("(r, l) is not an oriented basis")
    Ms = frame.scaled_bound(M)
    den = Ms.denominator
    a, b, c = frame.norm_i(r), frame.dot_i(r, l), frame.norm_i(l)
    # condition A(t): norm(l - t r) <= M
    pieces = quad_nonpos_pieces(a * den, -2 * b * den, c * den - Ms.numerator)
    # condition B(t): l - t r off the open half-plane side
    alpha = _det2(l, frame.k) * frame.eps   # rational
    beta = _det2(r, frame.k) * frame.eps    # >= 0 for r in the sector
    da = as_fraction(alpha)
    db = as_fraction(beta)
    dd = lcm(da.denominator, db.denominator)
    ai, bi = int(da * dd), int(db * dd)
    # need alpha - t*beta <= 0, i.e. -bi*t + ai <= 0
    pieces += quad_nonpos_pieces(0, -bi, ai)
    t = min_covered_from(pieces, 0)
    if t is None:
        raise ValueError("no supplement reachable by subtracting multiples of r")
    return (l[0] - t * r[0], l[1] - t * r[1])


def canonical_supplement(frame: PlaneFrame, M, r, l):
    """The unique M-supplement l + K r such that adding one more r stops it
    being an M-supplement.  Needs an anisotropic plane; K comes from an
    exact floor/sqrt formula."""
    if not frame.is_anisotropic:
        raise ValueError("canonical supplements need an anisotropic plane")
    r, l = _ivec(r), _ivec(l)
    if not frame.oriented_basis(r, l):
        raise ValueError("(r, l) is not an oriented basis")
    if not in_sector(frame, r):
        raise ValueError("r must lie in the sector")
    M = as_fraction(M)
    if M <= 0:
        raise ValueError("M must be positive")
    rr, rl, ll = frame.norm_i(r), frame.dot_i(r, l), frame.norm_i(l)
    Ms = frame.scaled_bound(M)
    disc = Q(rl * rl - rr * ll) + rr * Ms
    if disc < 0:
        raise ValueError("discriminant is negative: the line misses the norm-M region")
    t = disc.denominator
    K = floor_affine_sqrt(-rl * t, int(disc * t * t), rr * t)
    return (l[0] + K * r[0], l[1] + K * r[1])


# ---------------------------------------------------------------------------
# the walk


def _right_run_length(frame, Ms, r, l) -> int:
    """Number of consecutive 'replace l by r+l' steps the walk would take."""
    a, b, c = frame.norm_i(r), frame.dot_i(r, l), frame.norm_i(l)
    den, num = Ms.denominator, Ms.numerator
    # (l + (i+1) r)^2 <= M
    f = quad_nonpos_pieces(a * den, (2 * a + 2 * b) * den, (a + 2 * b + c) * den - num)
    # (l + (i+1) r) . r < 0
    g = quad_nonpos_pieces(0, a, a + b + 1)
    j = min_missing_from(f + g, 0)
    if j is None:
        raise RuntimeError("walk does not terminate: no qualifying vector after r")
    return j


def _left_run_length(frame, Ms, r, l) -> int:
    """Number of consecutive 'replace r by r+l' steps the walk would take."""
    a, b, c = frame.norm_i(l), frame.dot_i(r, l), frame.norm_i(r)
    den, num = Ms.denominator, Ms.numerator
    pieces = []
    # (r + (i+1) l)^2 <= M
    pieces += quad_nonpos_pieces(a * den, (2 * a + 2 * b) * den, (a + 2 * b + c) * den - num)
    # (r + (i+1) l) . (r + i l) < 0
    pieces += quad_nonpos_pieces(a, a + 2 * b, b + c + 1)
    # done-test: l^2 >= 0 and (r + i l) . l > 0
    if a >= 0:
        if a > 0:
            pieces += quad_nonpos_pieces(0, -a, 1 - b)  # b + i a >= 1
        elif b >= 1:
            pieces.append((None, None))
    j = min_covered_from(pieces, 1)
    if j is None:
        raise RuntimeError("walk does not terminate: left run never ends")
    return j


def _promised(frame: PlaneFrame, M, r, l, grouped: bool):
    """Core walk; returns (r', l', steps).

    The go-right test compares the middle vector against r: a negative
    product throws the middle past the top of the sector, so the answer
    sits in the right subsector.  (Testing against l instead admits
    states where the middle is inside the norm-M hull and the walk would
    overshoot; see the regression in the tests.)
    """
    Ms = frame.scaled_bound(M)
    steps = 0
    while True:
        if grouped:
            j = _right_run_length(frame, Ms, r, l)
            if j:
                l = (l[0] + j * r[0], l[1] + j * r[1])
                steps += j
        else:
            m = (r[0] + l[0], r[1] + l[1])
            if frame.norm_i(m) <= Ms or frame.dot_i(m, r) < 0:
                l = m
                steps += 1
                continue
        if frame.norm_i(l) >= 0 and frame.dot_i(r, l) > 0:
            return l, (-r[0], -r[1]), steps
        if grouped:
            j = _left_run_length(frame, Ms, r, l)
            r = (r[0] + j * l[0], r[1] + j * l[1])
            steps += j
        else:
            r = (r[0] + l[0], r[1] + l[1])
            steps += 1


def promised(frame: PlaneFrame, M, r, l, *, grouped: bool = False):
    """First primitive sector vector of norm <= M strictly after r, plus an
    M-supplement of it.

    r must be primitive, in the sector but not at its top, and l an
    M-supplement of r.  The caller must guarantee that such a vector
    exists (it always does if the plane is isotropic, or if it is
    anisotropic and r itself has norm <= M); otherwise the walk does not
    terminate.
    """
    r = _ivec(r)
    if not frame.is_primitive(r):
        raise ValueError("r must be primitive")
    if not in_sector(frame, r) or in_omega(frame, r):
        raise ValueError("r must lie in the sector, below its top ray")
    if not is_M_supplement(frame, M, r, _ivec(l)):
        raise ValueError("l is not an M-supplement of r")
    r2, l2, _ = _promised(frame, M, r, _ivec(l), grouped)
    return r2, l2


def shorter(frame: PlaneFrame, r, l):
    """First primitive sector vector after r of norm strictly below r's, with
    its canonical supplement; None if the plane has no spacelike vectors
    that short.  Anisotropic planes only."""
    if not frame.is_anisotropic:
        raise ValueError("anisotropic planes only")
    r, l = _ivec(r), _ivec(l)
    M = frame.norm(r)
    if M <= 0:
        raise ValueError("r must be spacelike")
    if not (
        is_M_supplement(frame, M, r, l)
        and not is_M_supplement(frame, M, r, (l[0] + r[0], l[1] + r[1]))
    ):
        raise ValueError("l must be the canonical supplement of r at r's norm")
    Ms = frame.scaled_bound(M)
    snapshot = (frame.norm_i(r), frame.dot_i(r, l), frame.norm_i(l))
    while True:
        r, l, _ = _promised(frame, frame.norm(r), r, l, False)
        l = canonical_supplement(frame, frame.norm(r), r, l)
        if frame.norm_i(r) < Ms:
            return r, l
        if (frame.norm_i(r), frame.dot_i(r, l), frame.norm_i(l)) == snapshot:
            return None


def not_promised(frame: PlaneFrame, M, r, l):
    """First primitive sector vector after r of norm <= M with its canonical
    M-supplement, or None if no spacelike vector is that short.  Unlike
    :func:`promised` this never hangs; anisotropic planes only."""
    if not frame.is_anisotropic:
        raise ValueError("anisotropic planes only")
    r, l = _ivec(r), _ivec(l)
    M = as_fraction(M)
    if M <= 0:
        raise ValueError("M must be positive")
    if frame.norm(r) <= M:
        r, l, _ = _promised(frame, M, r, l, False)
        return r, canonical_supplement(frame, M, r, l)
    while True:
        step = shorter(frame, r, l)
        if step is None:
            return None
        r, l = step
        if frame.norm(r) <= M:
            return r, canonical_supplement(frame, M, r, l)


@dataclass(frozen=True)
class PlaneIsometry:
    """2x2 integer matrix acting on coordinates; determinant +1 and
    Gram-preserving by construction."""

    rows: tuple

    def apply(self, v):
        (a, b), (c, d) = self.rows
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def compose(self, other: "PlaneIsometry") -> "PlaneIsometry":
        (a, b), (c, d) = self.rows
        (e, f), (g, h) = other.rows
        return PlaneIsometry(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)))

    def det(self) -> int:
        (a, b), (c, d) = self.rows
        return a * d - b * c


def anisotropic_period(frame: PlaneFrame, M, r0, l0):
    """Either None (no spacelike vectors of norm <= M) or (g, R): a
    generator g of the positive isometry group and the list R of primitive
    norm-<=M sector vectors forming one fundamental period after r0.  The
    full ascending list is R, g(R), g^2(R), ...

    l0 must be the canonical supplement of r0 at r0's own norm.
    """
    if not frame.is_anisotropic:
        raise ValueError("anisotropic planes only")
    r0, l0 = _ivec(r0), _ivec(l0)
    first = not_promised(frame, M, r0, l0)
    if first is None:
        return None
    r1, l1 = first
    period = [r1]
    r, l = r1, l1
    snapshot = (frame.norm_i(r1), frame.dot_i(r1, l1), frame.norm_i(l1))
    while True:
        r, l, _ = _promised(frame, M, r, l, False)
        l = canonical_supplement(frame, M, r, l)
        if (frame.norm_i(r), frame.dot_i(r, l), frame.norm_i(l)) == snapshot:
            g = _transform(r1, l1, r, l)
            iso = PlaneIsometry(g)
            if iso.det() != 1:
                raise RuntimeError("period transform is not orientation preserving")
            if not in_sector(frame, iso.apply(r1)):
                raise RuntimeError("period transform does not preserve the sector")
            return iso, tuple(period)
        period.append(r)


def _transform(r1, l1, r2, l2):
    """Integer matrix sending the basis (r1, l1) to (r2, l2)."""
    det = _det2(r1, l1)
    if abs(det) != 1:
        raise ValueError("(r1, l1) is not a basis")
    # inverse of [r1 l1] as columns, times det
    inv = ((l1[1], -l1[0]), (-r1[1], r1[0]))
    m = ((r2[0], l2[0]), (r2[1], l2[1]))
    rows = tuple(
        tuple(det * sum(m[i][k] * inv[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )
    return rows


def ascending_short_vectors(frame: PlaneFrame, M, r0) -> Iterator[tuple]:
    """Primitive sector vectors of norm <= M strictly after r0, ascending.

    Isotropic planes: finite (ends at the top lightlike ray).  Anisotropic
    planes: infinite (one fundamental period repeated by the generator);
    the caller decides where to stop.
    """
    r0 = _ivec(r0)
    M = as_fraction(M)
    if not frame.is_anisotropic:
        if in_omega(frame, r0):
            return
        l = make_supplement(frame, M, r0)
        r = r0
        while True:
            r, l, _ = _promised(frame, M, r, l, False)
            yield r
            if in_omega(frame, r):
                return
    else:
        l0 = canonical_supplement(frame, frame.norm(r0), r0, make_supplement(frame, frame.norm(r0), r0))
        res = anisotropic_period(frame, M, r0, l0)
        if res is None:
            return
        g, period = res
        vecs = list(period)
        while True:
            for v in vecs:
                yield v
            vecs = [g.apply(v) for v in vecs]
