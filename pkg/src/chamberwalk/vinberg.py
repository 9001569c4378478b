"""Vinberg's algorithm with exact priority ordering, plus the rank-2
real-quadratic machinery (Pell equation, fundamental units) that pins down
how slowly the batch enumeration can converge.

Roots are examined in increasing priority, an exact stand-in for the
hyperbolic distance from the control vector to the mirror.  Priorities are
compared by cross-multiplied squares, so no square root is ever taken.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

from ._linalg import Q, as_fraction, floor_affine_sqrt, vec_int, xgcd
from .lattice import (
    CosetLattice,
    DefiniteEnumerator,
    Lattice,
    constraint_lattice,
    is_root,
    root_norm_menu,
)

__all__ = [
    "priority_sq",
    "compare_priority",
    "approval_filter",
    "VinbergResult",
    "vinberg_run",
    "pell_fundamental",
    "RealQuadraticData",
    "fundamental_unit",
    "SecondRoot",
    "rank2_second_root",
    "DEFAULT_TABLE_ROWS",
]


# ---------------------------------------------------------------------------
# priorities

def priority_sq(lattice: Lattice, k, alpha) -> Fraction:
    """Square of the priority (k.alpha)^2 / alpha^2; requires k.alpha < 0."""
    ka = lattice.inner(k, alpha)
    if ka >= 0:
        raise ValueError("priority needs a negative inner product with the control vector")
    return as_fraction(ka) ** 2 / as_fraction(lattice.norm(alpha))


def compare_priority(lattice: Lattice, k, alpha, beta) -> int:
    """-1/0/1: priority order, ties broken by smaller norm first."""
    pa = priority_sq(lattice, k, alpha)
    pb = priority_sq(lattice, k, beta)
    if pa != pb:
        return -1 if pa < pb else 1
    na, nb = lattice.norm(alpha), lattice.norm(beta)
    if na != nb:
        return -1 if na < nb else 1
    return 0


def approval_filter(lattice: Lattice, k, b0, candidates, *, require_sorted: bool = True):
    """Scan almost-root candidates in (priority, norm) order, approving each
    one that has nonpositive inner products with every approved
    predecessor.  Under the standard hypotheses the approved vectors are
    exactly the new simple roots."""
    b0 = [tuple(v) for v in b0]
    cands = [tuple(v) for v in candidates]
    keys = []
    for v in cands:
        ka = lattice.inner(k, v)
        if ka >= 0:
            raise ValueError(f"candidate {v} has nonnegative inner product with the control")
        for b in b0:
            if lattice.inner(v, b) > 0:
                raise ValueError(f"candidate {v} has positive inner product with batch 0")
        keys.append((priority_sq(lattice, k, v), lattice.norm(v)))
    if require_sorted:
        for a, b in zip(keys, keys[1:]):
            if b < a:
                raise ValueError("candidates are not sorted by (priority, norm)")
    approved = []
    for v in cands:
        if all(lattice.inner(v, w) <= 0 for w in approved):
            approved.append(v)
    return tuple(approved)


# ---------------------------------------------------------------------------
# the batch machine

@dataclass
class VinbergResult:
    roots: tuple
    batches_examined: int
    exhausted: bool


class _NormStream:
    """Batches of one root norm: candidate cosets at each admissible value
    of the inner product with the control vector."""

    def __init__(self, lattice: Lattice, k, norm: int):
        self.norm = norm
        ln = constraint_lattice(lattice, norm)
        basis = ln.basis
        row = [int(lattice.inner(k, b)) for b in basis]
        n = len(row)
        # unimodular column sweep: row . cols = (g, 0, ..., 0)
        cols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
        acc = row[0]
        for i in range(1, n):
            b = sum(row[t] * cols[i][t] for t in range(n))
            if b == 0:
                continue
            g2, s, t = xgcd(acc, b)
            c0, ci = cols[0], cols[i]
            cols[0] = [s * p + t * q for p, q in zip(c0, ci)]
            cols[i] = [-(b // g2) * p + (acc // g2) * q for p, q in zip(c0, ci)]
            acc = g2
        if acc == 0:
            raise ValueError("control vector is orthogonal to the constraint lattice")
        if acc < 0:
            cols[0] = [-p for p in cols[0]]
            acc = -acc
        self.step = acc

        def to_ambient(coords):
            v = [0] * lattice.rank
            for c, b in zip(coords, basis):
                for t in range(lattice.rank):
                    v[t] += c * b[t]
            return tuple(v)

        self.basis = basis
        dirs = [to_ambient(cols[i]) for i in range(1, n)]
        self.enumerator = DefiniteEnumerator(lattice, dirs)
        self.unit_ambient = to_ambient(cols[0])  # inner product with k is +step
        self.lattice = lattice
        self.k = tuple(k)

    def priority_sq(self, t: int) -> Fraction:
        return Q(self.step * self.step * t * t, self.norm)

    def batch(self, t: int):
        """Almost-roots of this norm with k-inner-product -step*t."""
        offset = tuple(-t * x for x in self.unit_ambient)
        return self.enumerator.enumerate(offset, norm=self.norm)


def vinberg_run(
    lattice: Lattice,
    k,
    b0,
    *,
    max_batches: Optional[int] = None,
    max_priority_sq=None,
    norms: Optional[Iterable[int]] = None,
) -> VinbergResult:
    """Accepted simple roots beyond batch 0, in priority order.

    Batches are the admissible (norm, control-inner-product) classes merged
    across norms in exact priority order; a batch is "examined" when its
    candidate vectors are enumerated and scanned.  The run stops when
    max_batches have been examined (exhausted=True) or when the next batch
    priority exceeds max_priority_sq (exhausted=False).
    """
    if not lattice.is_integral:
        raise ValueError("integral lattices only")
    if not lattice.is_lorentzian():
        raise ValueError("Lorentzian lattices only")
    k = vec_int(k)
    if lattice.norm(k) >= 0:
        raise ValueError("control vector must be timelike")
    if gcd(*k) != 1:
        raise ValueError("control vector must be primitive")
    b0 = [vec_int(v) for v in b0]
    for v in b0:
        if lattice.inner(k, v) != 0:
            raise ValueError(f"batch-0 root {v} is not orthogonal to the control vector")
        if not is_root(lattice, v):
            raise ValueError(f"batch-0 vector {v} is not a root")
    if max_batches is None and max_priority_sq is None:
        raise ValueError("need max_batches and/or max_priority_sq")
    menu = root_norm_menu(lattice)
    if norms is not None:
        norms = sorted(set(int(n) for n in norms))
        for n in norms:
            if n not in menu:
                raise ValueError(f"norm {n} cannot be a root norm of this lattice")
        menu = tuple(norms)
    streams = {n: _NormStream(lattice, k, n) for n in menu}
    heap = []
    for n, s in streams.items():
        heapq.heappush(heap, (s.priority_sq(1), n, 1))
    bound = None if max_priority_sq is None else as_fraction(max_priority_sq)
    accepted: list = []
    batches = 0
    exhausted = False
    while heap:
        p = heap[0][0]
        if bound is not None and p > bound:
            break
        if max_batches is not None and batches >= max_batches:
            exhausted = True
            break
        group = []
        while heap and heap[0][0] == p:
            _, n, t = heapq.heappop(heap)
            group.append((n, t))
            heapq.heappush(heap, (streams[n].priority_sq(t + 1), n, t + 1))
        batches += 1
        batch_vectors = []
        for n, t in group:
            for v in streams[n].batch(t):
                batch_vectors.append((lattice.norm(v), v))
        batch_vectors.sort(key=lambda nv: (nv[0], nv[1]))
        for _, v in batch_vectors:
            if any(lattice.inner(v, b) > 0 for b in b0):
                continue
            if any(lattice.inner(v, w) > 0 for w in accepted):
                continue
            if not is_root(lattice, v):
                raise RuntimeError(f"accepted vector {v} is not a root; input is inconsistent")
            accepted.append(v)
    return VinbergResult(tuple(accepted), batches, exhausted)


# ---------------------------------------------------------------------------
# Pell / real quadratic fields

def _require_nonsquare(n: int):
    if n < 2 or isqrt(n) ** 2 == n:
        raise ValueError("need a non-square integer > 1")


def _require_squarefree(n: int):
    _require_nonsquare(n)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            raise ValueError("need a square-free integer")
        f += 1


def pell_fundamental(n: int) -> tuple[int, int]:
    """Least positive solution of x^2 - n y^2 = 1, by continued fractions."""
    _require_nonsquare(n)
    a0 = isqrt(n)
    m, d, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while h * h - n * k * k != 1:
        m = d * a - m
        d = (n - m * m) // d
        a = (a0 + m) // d
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
    return h, k


@dataclass(frozen=True)
class RealQuadraticData:
    """Fundamental unit data of the real quadratic order for square-free n:
    u is the fundamental unit (> 1, coordinates in the basis (1, sqrt n)),
    v is u or u^2, whichever has norm +1, and pell is the least integer
    solution of x^2 - n y^2 = 1."""

    n: int
    has_half_integers: bool
    u: tuple
    v: tuple
    pell: tuple


def _field_norm(n, x):
    return x[0] * x[0] - n * x[1] * x[1]


def _field_mul(n, x, y):
    return (x[0] * y[0] + n * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def fundamental_unit(n: int) -> RealQuadraticData:
    """Fundamental unit of the full ring of integers of Q(sqrt n), computed
    from the periodic continued fraction of the standard generator."""
    _require_squarefree(n)
    half = n % 4 == 1
    p, q = (1, 2) if half else (0, 1)
    seen: dict[tuple[int, int], int] = {}
    quots: list[int] = []
    while (p, q) not in seen:
        seen[(p, q)] = len(quots)
        a = floor_affine_sqrt(p, n, q)
        quots.append(a)
        p = a * q - p
        q = (n - p * p) // q
    j = seen[(p, q)]
    # unit from one traversal of the cycle: if theta is the repeating
    # complete quotient and [[h, h'], [kq, kq']] the cycle's convergent
    # matrix, then kq * theta + kq' is the fundamental unit
    kq, kq2 = 0, 1
    for a in quots[j:]:
        kq, kq2 = a * kq + kq2, kq
    x = Q(kq * p + kq2 * q, q)
    y = Q(kq, q)
    norm = _field_norm(n, (x, y))
    if norm not in (1, -1):
        raise RuntimeError("continued fraction cycle did not produce a unit")
    if x <= 0 or y <= 0:
        raise RuntimeError("unit normalization failed")
    if half:
        if (2 * x).denominator != 1 or (2 * y).denominator != 1 or int(2 * x - 2 * y) % 2:
            raise RuntimeError("unit does not lie in the ring of integers")
    elif x.denominator != 1 or y.denominator != 1:
        raise RuntimeError("unit does not lie in the ring of integers")
    u = (x, y)
    v = u if norm == 1 else _field_mul(n, u, u)
    return RealQuadraticData(n, half, u, v, pell_fundamental(n))


@dataclass(frozen=True)
class SecondRoot:
    """The second simple root of the rank-2 lattice of the ring of integers
    of Q(sqrt n), with sqrt(n) as control vector and -1 as batch 0, and the
    index of the batch (of roots of that norm) in which the batch
    enumeration first meets it."""

    n: int
    alpha: tuple
    alpha_norm: Fraction
    batch_number: int


def _min_positive_multiple_generator(t: Fraction) -> Fraction:
    """Generator of {c in Q : c*t in Z}, for t != 0."""
    return Q(t.denominator, abs(t.numerator))


def _frac_lcm(a: Fraction, b: Fraction) -> Fraction:
    from math import lcm as _lcm

    return Q(_lcm(a.numerator, b.numerator), gcd(a.denominator, b.denominator))


def rank2_second_root(n: int) -> SecondRoot:
    """Scale 1 + v (v the norm-one fundamental unit power, positive trace,
    positive sqrt-part) by the least positive rational putting it in the
    ring of integers; that is the second simple root."""
    data = fundamental_unit(n)
    v = data.v
    if v[0] <= 0 or v[1] <= 0:
        raise RuntimeError("norm-one unit is not normalized")
    t1, t2 = 1 + as_fraction(v[0]), as_fraction(v[1])
    if data.has_half_integers:
        h1, h2 = 2 * t1, 2 * t2
        c0 = _frac_lcm(_min_positive_multiple_generator(h1), _min_positive_multiple_generator(h2))
        a1, a2 = c0 * h1, c0 * h2
        c = c0 if int(a1 - a2) % 2 == 0 else 2 * c0
    else:
        c = _frac_lcm(_min_positive_multiple_generator(t1), _min_positive_multiple_generator(t2))
    alpha = (c * t1, c * t2)
    norm = _field_norm(n, alpha)
    batch = alpha[1] * (2 if data.has_half_integers else 1)
    if batch.denominator != 1:
        raise RuntimeError("batch index should be an integer")
    return SecondRoot(n, alpha, norm, int(batch))


DEFAULT_TABLE_ROWS = (2, 3, 5, 6, 7, 19, 67, 73, 97, 193, 241, 337, 409, 601, 769)
