"""Shared test helpers: independent brute-force oracles and random data.

The oracles deliberately avoid the library's own search routines: box
enumeration bounded by exact eigenvalue estimates, window enumeration
bounded by an independently computed Pell automorph, and interval
arithmetic for priority comparisons.
"""

from __future__ import annotations

import random
from fractions import Fraction as Q
from math import gcd, isqrt, lcm

import pytest

from chamberwalk._linalg import as_fraction, inertia, quad_nonpos_pieces
from chamberwalk.lattice import Lattice
from chamberwalk.shortvec import PlaneFrame, in_sector, sector_compare
from chamberwalk.vinberg import pell_fundamental


def frac_floor_sqrt(q: Q) -> int:
    q = as_fraction(q)
    n = q.numerator // q.denominator
    c = isqrt(n)
    while (c + 1) * (c + 1) * q.denominator <= q.numerator:
        c += 1
    return c


def random_symmetric(rng: random.Random, rank: int, bound: int):
    m = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i, rank):
            m[i][j] = m[j][i] = rng.randint(-bound, bound)
    return m


def random_lattice(rng, rank, bound, signature=None, tries=200):
    for _ in range(tries):
        m = random_symmetric(rng, rank, bound)
        lat = Lattice(m)
        if signature is None or lat.signature() == signature:
            return lat
    raise RuntimeError("could not sample a lattice with the requested signature")


def brute_force_coset(lattice: Lattice, basis, offset, bound, *, exact=None):
    """All coset vectors with norm <= bound (or == exact) via a box search
    bounded by an exact rational eigenvalue lower estimate."""
    r = len(basis)
    offset = tuple(as_fraction(x) for x in offset)
    if r == 0:
        nn = lattice.norm(offset)
        ok = nn == exact if exact is not None else nn <= bound
        return [offset] if ok else []
    a = [[as_fraction(lattice.inner(x, y)) for y in basis] for x in basis]
    assert inertia(a) == (r, 0, 0)
    # lambda_min >= max(Gershgorin, det / trace^(r-1)), both exact
    gersh = min(a[i][i] - sum(abs(a[i][j]) for j in range(r) if j != i) for i in range(r))
    det = _det(a)
    trace = sum(a[i][i] for i in range(r))
    lam = max(gersh, det / trace ** (r - 1) if r > 1 else det)
    assert lam > 0
    # norm(o + Bx) = quad(x + mu) + rho with quad >= lam |x + mu|^2
    b = [as_fraction(lattice.inner(offset, v)) for v in basis]
    mu = _solve(a, b)
    rho = lattice.norm(offset) - sum(x * y for x, y in zip(b, mu))
    top = as_fraction(exact if exact is not None else bound) - rho
    if top < 0:
        return []
    rad = frac_floor_sqrt(top / lam) + 1
    out = []
    ranges = [range(-rad - 1 - frac_floor_sqrt(abs(mu[i])), rad + 2 + frac_floor_sqrt(abs(mu[i]))) for i in range(r)]
    import itertools

    for xs in itertools.product(*ranges):
        v = list(offset)
        for c, col in zip(xs, basis):
            for t in range(len(v)):
                v[t] += c * col[t]
        nn = lattice.norm(v)
        if (exact is not None and nn == exact) or (exact is None and nn <= bound):
            out.append(tuple(v))
    return out


def _det(a):
    n = len(a)
    m = [row[:] for row in a]
    det = Q(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Q(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def _solve(a, b):
    from chamberwalk._linalg import solve_rational

    out = solve_rational(a, b)
    assert out is not None
    return out


def plane_automorph(frame: PlaneFrame):
    """Generator of the positive isometries of an anisotropic plane frame,
    oriented to move forward in the sector order; computed independently
    via the Pell equation."""
    a, b, c = frame._g00, frame._g01, frame._g11
    d = b * b - a * c
    s, u = pell_fundamental(d)
    g = ((s - b * u, -c * u), (a * u, s + b * u))

    def apply(m, v):
        return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])

    def inverse(m):
        (p, q), (r, t) = m
        return ((t, -q), (-r, p))

    return g, apply, inverse


def plane_window_vectors(frame: PlaneFrame, M, r0, count):
    """First `count` primitive sector vectors of norm <= M after r0, by
    brute force: enumerate one automorph window at a time.  An empty first
    window means no such vectors exist at all (the windows tile the sector
    under the automorph), so the result is empty."""
    g, apply, inverse = plane_automorph(frame)
    fwd = g
    if not in_sector(frame, apply(fwd, r0)) or sector_compare(frame, r0, apply(fwd, r0)) >= 0:
        fwd = inverse(g)
    assert in_sector(frame, apply(fwd, r0))
    assert sector_compare(frame, r0, apply(fwd, r0)) < 0
    hi = apply(fwd, r0)
    base = _window_scan(frame, M, r0, hi)
    if not base:
        # one window per automorph orbit: empty here means empty everywhere
        return []
    base.sort(key=_SectorKey(frame))
    out = list(base)
    block = base
    while len(out) < count:
        block = [apply(fwd, v) for v in block]
        out.extend(block)
    return out[:count]


class _SectorKey:
    def __init__(self, frame):
        self.frame = frame

    def __call__(self, v):
        return _SectorItem(self.frame, v)


class _SectorItem:
    def __init__(self, frame, v):
        self.frame = frame
        self.v = v

    def __lt__(self, other):
        return sector_compare(self.frame, self.v, other.v) < 0


def _window_scan(frame: PlaneFrame, M, lo, hi):
    """Primitive norm-(0, M] vectors strictly inside the ray window (lo, hi]."""
    a, b, c = frame._g00, frame._g01, frame._g11
    m_scaled = as_fraction(M) * frame.scale
    lam1 = frac_floor_sqrt(m_scaled / frame.norm_i(lo)) + 1
    lam2 = frac_floor_sqrt(m_scaled / frame.norm_i(hi)) + 1
    ymax = lam1 * abs(lo[1]) + lam2 * abs(hi[1]) + 1
    xmax = lam1 * abs(lo[0]) + lam2 * abs(hi[0]) + 1
    den = m_scaled.denominator
    num = m_scaled.numerator
    out = []
    for y in range(-ymax, ymax + 1):
        pieces = quad_nonpos_pieces(a * den, 2 * b * y * den, c * y * y * den - num)
        for piece in pieces:
            plo = -xmax if piece[0] is None else max(piece[0], -xmax)
            phi = xmax if piece[1] is None else min(piece[1], xmax)
            for x in range(plo, phi + 1):
                v = (x, y)
                if v == (0, 0) or gcd(x, y) != 1:
                    continue
                if frame.norm_i(v) <= 0 or frame.norm_i(v) > m_scaled:
                    continue
                if not in_sector(frame, v):
                    continue
                if sector_compare(frame, lo, v) < 0 and sector_compare(frame, v, hi) <= 0:
                    out.append(v)
    return out


def priority_interval_compare(lattice, k, alpha, beta):
    """Order the real priorities by interval arithmetic, widening the
    precision until the intervals separate (or exact equality shows)."""
    ka = -as_fraction(lattice.inner(k, alpha))
    kb = -as_fraction(lattice.inner(k, beta))
    na = as_fraction(lattice.norm(alpha))
    nb = as_fraction(lattice.norm(beta))
    assert ka > 0 and kb > 0
    if ka * ka * nb == kb * kb * na:
        return 0
    digits = 10
    while True:
        ia = _sqrt_interval(na, digits)
        ib = _sqrt_interval(nb, digits)
        # priority = ka / sqrt(na)
        a_lo, a_hi = ka / ia[1], ka / ia[0]
        b_lo, b_hi = kb / ib[1], kb / ib[0]
        if a_hi < b_lo:
            return -1
        if b_hi < a_lo:
            return 1
        digits *= 2


def _sqrt_interval(q: Q, digits: int):
    scale = 10**digits
    t = isqrt((q.numerator * scale * scale) // q.denominator)
    lo = Q(t, scale)
    hi = Q(t + 2, scale)
    return lo, hi


def reflection_orbit(lattice, generators, seeds, cap=100000):
    """Closure of the seed set under reflections in the generators."""

    def reflect(s, v):
        factor = Q(2) * lattice.inner(v, s) / lattice.norm(s)
        return tuple(x - factor * y for x, y in zip(v, s))

    seen = set(tuple(v) for v in seeds)
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for s in generators:
                w = tuple(as_fraction(x) for x in reflect(s, v))
                w = tuple(int(x) if x.denominator == 1 else x for x in w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if len(seen) > cap:
            raise RuntimeError("orbit closure exploded")
    return seen
