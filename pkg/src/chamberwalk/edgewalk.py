"""Walking the edges of a Weyl chamber corner to corner.

Given a corner (a chamber point whose orthogonal root system has full
rank, or a cusp) and an edge at it, the walk finds the corner at the far
end together with the full simple system there: candidate roots are built
from one-node diagram extensions of the edge's root set, realized inside
constraint lattices projected to the 2D plane orthogonal to the edge, and
searched in ascending sector order with the 2D short-vector algorithms.
Repeating over a queue of rays explores the whole chamber; the queue
emptying certifies finite volume.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd, isqrt
from typing import Optional

from ._linalg import (
    Q,
    as_fraction,
    inertia,
    is_square_int,
    lattice_canonical_basis,
    nullspace_rational,
    rref,
    solve_integer,
    solve_rational,
    vec_add,
    vec_clear_denominators,
    vec_int,
    vec_is_integral,
    vec_is_zero,
    vec_normalize,
    vec_primitive,
    vec_scale,
    vec_sub,
)
from .batch0 import cuspidal_batch0, lift_solutions, spherical_batch0
from .dynkin import DiagramClass, diagram_from_roots, spherical_extensions
from .lattice import (
    CosetLattice,
    DefiniteEnumerator,
    Lattice,
    constraint_lattice,
    is_root,
    root_norm_menu,
)
from .shortvec import (
    PlaneFrame,
    anisotropic_period,
    ascending_short_vectors,
    canonical_supplement,
    make_supplement,
)

__all__ = [
    "Corner",
    "Ray",
    "Candidate",
    "Chamber",
    "EdgewalkError",
    "InfiniteVolumeEdge",
    "project_U",
    "project_P",
    "candidates_for_norm",
    "CosetPeriod",
    "anisotropic_period_for_cosets",
    "walk",
    "explore",
    "corner_equivalent_local",
    "initial_corner",
    "corner_rays",
]


class EdgewalkError(RuntimeError):
    pass


class InfiniteVolumeEdge(EdgewalkError):
    """An edge runs to an irrational ideal point: the chamber cannot be the
    convex hull of finitely many rational vertices, so its volume is
    infinite."""


@dataclass(frozen=True)
class Corner:
    """Chamber corner: ordinary (timelike vertex, full-rank local system)
    or ideal (lightlike cusp)."""

    kind: str
    k: tuple
    local_roots: tuple

    def __post_init__(self):
        if self.kind not in ("ordinary", "ideal"):
            raise ValueError("corner kind must be 'ordinary' or 'ideal'")


@dataclass(frozen=True)
class Ray:
    corner: Corner
    edge_roots: tuple

    def key(self):
        return (self.corner.k, tuple(sorted(self.edge_roots)))


@dataclass(frozen=True)
class Candidate:
    """A possible far-end root along an edge: norm, diagram extension, its
    edge-span projection u, residual data in the orthogonal plane, and the
    assembled vector alpha = u + residue."""

    norm: int
    extension: object
    u: tuple
    residual_norm: Fraction
    residual_coset: CosetLattice
    residue: tuple
    alpha: tuple


@dataclass(frozen=True)
class Chamber:
    corners: tuple
    simple_roots: tuple
    finite_volume: object  # True | False | "unknown"
    walks: int
    notes: tuple = ()
    unexplored: tuple = ()


def _validate_corner(lattice: Lattice, corner: Corner):
    n = lattice.rank - 1
    kk = lattice.norm(corner.k)
    for v in corner.local_roots:
        if lattice.inner(corner.k, v) != 0:
            raise EdgewalkError(f"local root {v} is not orthogonal to the corner {corner.k}")
        if not is_root(lattice, v):
            raise EdgewalkError(f"local vector {v} is not a root")
    gram = [[lattice.inner(a, b) for b in corner.local_roots] for a in corner.local_roots]
    if corner.kind == "ordinary":
        if kk >= 0:
            raise EdgewalkError("ordinary corner needs a timelike vertex")
        if inertia(gram) != (n, 0, 0):
            raise EdgewalkError("ordinary corner needs a rank-n positive-definite local system")
    else:
        if kk != 0:
            raise EdgewalkError("ideal corner needs a lightlike vertex")
        if n >= 2 and diagram_from_roots(lattice, corner.local_roots).classify() is not DiagramClass.CUSPIDAL:
            raise EdgewalkError("ideal corner needs a cuspidal local system")


def project_U(lattice: Lattice, u_basis, v):
    """Orthogonal projection onto the (positive definite) span of u_basis."""
    u_basis = [tuple(b) for b in u_basis]
    if not u_basis:
        return tuple(0 for _ in range(lattice.rank))
    gram = [[as_fraction(lattice.inner(a, b)) for b in u_basis] for a in u_basis]
    if inertia(gram) != (len(u_basis), 0, 0):
        raise ValueError("projection needs a positive-definite independent basis")
    coeffs = solve_rational(gram, [lattice.inner(b, v) for b in u_basis])
    out = [Q(0)] * lattice.rank
    for c, b in zip(coeffs, u_basis):
        for t in range(lattice.rank):
            out[t] += c * b[t]
    return vec_normalize(out)


def project_P(lattice: Lattice, u_basis, v):
    return vec_normalize(
        vec_sub(tuple(as_fraction(x) for x in v), project_U(lattice, u_basis, v))
    )


def _sign(x):
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# ray geometry

class _RayGeometry:
    """The plane orthogonal to an edge's root span, with side and start ray."""

    def __init__(self, lattice: Lattice, ray: Ray):
        corner = ray.corner
        self.lattice = lattice
        self.ray = ray
        self.edge_roots = tuple(vec_int(v) for v in ray.edge_roots)
        for v in self.edge_roots:
            if v not in corner.local_roots:
                raise EdgewalkError("edge roots must be local roots of the corner")
        n = lattice.rank - 1
        if len(self.edge_roots) != n - 1:
            raise EdgewalkError("an edge is orthogonal to exactly rank-2 local roots")
        if self.edge_roots and inertia(
            [[lattice.inner(a, b) for b in self.edge_roots] for a in self.edge_roots]
        ) != (n - 1, 0, 0):
            raise EdgewalkError("edge roots must span a positive-definite space")
        if self.edge_roots:
            rows = [
                [lattice.inner(u, e) for e in lattice.basis_vectors()]
                for u in self.edge_roots
            ]
            p_basis = nullspace_rational(rows)
        else:
            p_basis = [
                tuple(Q(1) if i == j else Q(0) for j in range(lattice.rank))
                for i in range(lattice.rank)
            ]
        if len(p_basis) != 2:
            raise EdgewalkError("edge plane is degenerate")
        self.p_basis = [vec_normalize(b) for b in p_basis]
        self.gram_p = [
            [as_fraction(lattice.inner(a, b)) for b in self.p_basis] for a in self.p_basis
        ]
        if inertia(self.gram_p) != (1, 1, 0):
            raise EdgewalkError("edge plane must have signature (1,1)")
        self._p_rows = [[self.p_basis[j][i] for j in range(2)] for i in range(lattice.rank)]
        self.k = tuple(corner.k)
        self.k_p = self.to_plane(self.k)
        # edge side: the complement local roots all point away from it; at an
        # ideal corner the side is forced (only one side holds timelike
        # vectors near a lightlike vertex)
        others = [v for v in corner.local_roots if v not in self.edge_roots]
        d0 = (Q(1), Q(0)) if self._det_k((1, 0)) != 0 else (Q(0), Q(1))
        d0_amb = self.from_plane(d0)
        if corner.kind == "ideal":
            if lattice.inner(self.k, d0_amb) > 0:
                d0 = (-d0[0], -d0[1])
                d0_amb = self.from_plane(d0)
            if any(lattice.inner(d0_amb, b) >= 0 for b in others):
                raise EdgewalkError("corner roots do not agree on the edge side at a cusp")
            self.witness = d0
        else:
            if not others:
                raise EdgewalkError("corner has no root transverse to the edge")
            signs = {_sign(lattice.inner(d0_amb, b)) for b in others}
            if 0 in signs or len(signs) != 1:
                raise EdgewalkError("corner roots do not agree on an edge side")
            self.witness = d0 if signs == {-1} else (-d0[0], -d0[1])
        self._side_ref = _sign(self._det_k(self.witness))
        # start of the sector: orthogonal to k within the plane, on the edge
        # side (ordinary corner) or opposite the lightlike vertex (cusp)
        if corner.kind == "ordinary":
            direction = self._perp_k_direction()
            if self.det_side(direction) <= 0:
                direction = (-direction[0], -direction[1])
        else:
            direction = (-self.k_p[0], -self.k_p[1])
        self.r0_dir = direction  # plane coordinates; only the ray matters

    def _det_k(self, v):
        return as_fraction(v[0]) * self.k_p[1] - as_fraction(v[1]) * self.k_p[0]

    def det_side(self, v) -> int:
        """+1 on the edge side of the line through k, -1 opposite, 0 on it."""
        return _sign(self._det_k(v)) * self._side_ref

    def _perp_k_direction(self):
        g = self.gram_p
        a = g[0][0] * self.k_p[0] + g[0][1] * self.k_p[1]
        b = g[1][0] * self.k_p[0] + g[1][1] * self.k_p[1]
        return (-b, a)

    def to_plane(self, v):
        c = solve_rational(self._p_rows, tuple(as_fraction(x) for x in v))
        if c is None:
            raise EdgewalkError("vector does not lie in the edge plane")
        return c

    def from_plane(self, c):
        out = [Q(0)] * self.lattice.rank
        for x, b in zip(c, self.p_basis):
            for t in range(self.lattice.rank):
                out[t] += as_fraction(x) * b[t]
        return vec_normalize(out)

    def lattice_in_plane(self) -> list:
        """Integer basis of the lattice vectors lying in the plane."""
        if not self.edge_roots:
            return [vec_int(e) for e in self.lattice.basis_vectors()]
        rows = [
            [int(self.lattice.inner(u, e)) for e in self.lattice.basis_vectors()]
            for u in self.edge_roots
        ]
        sol = solve_integer(rows, [0] * len(rows))
        assert sol is not None
        return [vec_int(v) for v in sol[1]]


class _PlaneData:
    """Plane image of one constraint lattice, with its search frame."""

    def __init__(self, geom: _RayGeometry, norm: int):
        lattice = geom.lattice
        self.norm = norm
        self.geom = geom
        self.ln = constraint_lattice(lattice, norm)
        proj = [geom.to_plane(project_P(lattice, geom.edge_roots, b)) for b in self.ln.basis]
        w = lattice_canonical_basis(proj)
        if len(w) != 2:
            raise EdgewalkError("projected constraint lattice is not planar")
        self.w_basis = w
        gram = [
            [
                sum(
                    as_fraction(w[i][s]) * geom.gram_p[s][t] * as_fraction(w[j][t])
                    for s in range(2)
                    for t in range(2)
                )
                for j in range(2)
            ]
            for i in range(2)
        ]
        self.plane_lattice = Lattice(gram)
        self._w_rows = [[w[j][i] for j in range(2)] for i in range(2)]
        self.frame = PlaneFrame(
            self.plane_lattice, self.to_w(geom.k_p), self.to_w(geom.witness)
        )
        self.r0 = vec_clear_denominators(self.to_w(geom.r0_dir))
        # constraint vectors lying in the plane, as a sublattice in w-coords
        nb = len(self.ln.basis)
        rows = [[int(lattice.inner(u, b)) for b in self.ln.basis] for u in geom.edge_roots]
        if rows:
            sol = solve_integer(rows, [0] * len(rows))
            assert sol is not None
            kernel = sol[1]
        else:
            kernel = [tuple(1 if i == j else 0 for i in range(nb)) for j in range(nb)]
        sub = []
        for coords in kernel:
            v = [0] * lattice.rank
            for c, b in zip(coords, self.ln.basis):
                for t in range(lattice.rank):
                    v[t] += c * b[t]
            sub.append(vec_int(self.to_w(geom.to_plane(tuple(v)))))
        self.sub_basis = lattice_canonical_basis(sub)
        if len(self.sub_basis) != 2:
            raise EdgewalkError("in-plane constraint sublattice is not planar")
        self.sub_basis = [vec_int(v) for v in self.sub_basis]

    def to_w(self, c):
        out = solve_rational(self._w_rows, tuple(as_fraction(x) for x in c))
        if out is None:
            raise EdgewalkError("vector is not in the plane-lattice span")
        return out

    def from_w(self, v):
        c0 = as_fraction(v[0]) * as_fraction(self.w_basis[0][0]) + as_fraction(v[1]) * as_fraction(self.w_basis[1][0])
        c1 = as_fraction(v[0]) * as_fraction(self.w_basis[0][1]) + as_fraction(v[1]) * as_fraction(self.w_basis[1][1])
        return self.geom.from_plane((c0, c1))

    def extension_data(self, ext):
        """(u, residual norm, residual coset) for a diagram extension, or
        None when no constraint vector projects onto its edge-span part."""
        geom = self.geom
        lattice = geom.lattice
        targets = ext.inner_products()
        m = len(geom.edge_roots)
        if m:
            gram = [
                [as_fraction(lattice.inner(a, b)) for b in geom.edge_roots]
                for a in geom.edge_roots
            ]
            coeffs = solve_rational(gram, [targets[i] for i in range(m)])
            u = [Q(0)] * lattice.rank
            for c, b in zip(coeffs, geom.edge_roots):
                for t in range(lattice.rank):
                    u[t] += c * b[t]
            u = vec_normalize(u)
        else:
            u = tuple(0 for _ in range(lattice.rank))
        residual = as_fraction(self.norm) - as_fraction(lattice.norm(u))
        if residual <= 0:
            raise EdgewalkError("spherical extension must leave positive residual norm")
        rows = [[int(lattice.inner(a, b)) for b in self.ln.basis] for a in geom.edge_roots]
        rhs = []
        for a in geom.edge_roots:
            val = as_fraction(lattice.inner(a, u))
            if val.denominator != 1:
                return None
            rhs.append(int(val))
        if rows:
            sol = solve_integer(rows, rhs)
            if sol is None:
                return None
            x0 = sol[0]
        else:
            x0 = ()
        v = [Q(0)] * lattice.rank
        for c, b in zip(x0, self.ln.basis):
            for t in range(lattice.rank):
                v[t] += c * b[t]
        offset = self.to_w(geom.to_plane(vec_sub(vec_normalize(v), u)))
        coset = CosetLattice(self.plane_lattice, self.sub_basis, offset)
        return u, residual, coset

    def canonical_start(self):
        """r0 with the canonical supplement at its own norm (anisotropic)."""
        r0 = self.r0
        l0 = make_supplement(self.frame, self.frame.norm(r0), r0)
        return r0, canonical_supplement(self.frame, self.frame.norm(r0), r0, l0)


@dataclass(frozen=True)
class CosetPeriod:
    """Ascending-stream prefix that provably suffices for coset matching:
    m periods of the fundamental period under the plane's generator."""

    m: int
    generator: object
    vectors: tuple


def _coset_period_multiplier(plane: _PlaneData, iso) -> int:
    """Least m >= 1 with iso^m preserving the in-plane sublattice and acting
    trivially on the quotient of the projected lattice by it."""
    sub = CosetLattice(plane.plane_lattice, plane.sub_basis)
    index = abs(
        plane.sub_basis[0][0] * plane.sub_basis[1][1]
        - plane.sub_basis[0][1] * plane.sub_basis[1][0]
    )
    power = iso
    m = 1
    cap = max(8, index**6 + 1)
    while m <= cap:
        ok = all(power.apply(b) in sub for b in plane.sub_basis) and all(
            vec_sub(power.apply(e), e) in sub for e in ((1, 0), (0, 1))
        )
        if ok:
            return m
        power = power.compose(iso)
        m += 1
    raise EdgewalkError("coset period multiplier not found")


def _period_stream(plane: _PlaneData, bound) -> Optional[CosetPeriod]:
    r0, l0 = plane.canonical_start()
    res = anisotropic_period(plane.frame, bound, r0, l0)
    if res is None:
        return None
    iso, base = res
    m = _coset_period_multiplier(plane, iso)
    vectors = list(base)
    cur = list(base)
    for _ in range(m - 1):
        cur = [iso.apply(v) for v in cur]
        vectors.extend(cur)
    return CosetPeriod(m, iso, tuple(vectors))


def _edge_diagram(lattice, ray):
    return diagram_from_roots(lattice, ray.edge_roots)


def anisotropic_period_for_cosets(lattice: Lattice, ray: Ray, norm: int) -> Optional[CosetPeriod]:
    """Period data (in plane-lattice coordinates) for one norm's sweep;
    None when the plane holds no vectors up to the residual bound."""
    geom = _RayGeometry(lattice, ray)
    plane = _PlaneData(geom, norm)
    if not plane.frame.is_anisotropic:
        raise EdgewalkError("plane is isotropic; period data is an anisotropic notion")
    data = [plane.extension_data(e) for e in spherical_extensions(_edge_diagram(lattice, ray), norm)]
    bound = max((d[1] for d in data if d is not None), default=None)
    if bound is None:
        return None
    return _period_stream(plane, bound)


def candidates_for_norm(lattice: Lattice, ray: Ray, norm: int, *, _geom=None) -> tuple:
    """Candidates of one root norm along the ray: a single batched ascending
    sweep over the projected constraint lattice, stopped at the first ray
    position yielding any candidate (later positions lose the nearest-
    mirror comparison)."""
    geom = _geom or _RayGeometry(lattice, ray)
    plane = _PlaneData(geom, norm)
    ext_data = []
    for ext in spherical_extensions(_edge_diagram(lattice, ray), norm):
        got = plane.extension_data(ext)
        if got is not None:
            ext_data.append((ext,) + got)
    if not ext_data:
        return ()
    bound = max(e[2] for e in ext_data)
    frame = plane.frame
    if frame.is_anisotropic:
        period = _period_stream(plane, bound)
        stream = period.vectors if period else ()
    else:
        stream = ascending_short_vectors(frame, bound, plane.r0)
    found: list[Candidate] = []
    for r in stream:
        rr = frame.norm(r)
        if rr > 0:
            j = 1
            while j * j * rr <= bound:
                s = (j * r[0], j * r[1])
                s_norm = j * j * rr
                for ext, u, residual, coset in ext_data:
                    if s_norm == residual and s in coset:
                        found.append(_assemble(plane, norm, ext, u, residual, coset, s))
                j += 1
        if found:
            break
    return tuple(found)


def _assemble(plane, norm, ext, u, residual, coset, s) -> Candidate:
    residue_amb = vec_normalize(plane.from_w(s))
    alpha = vec_normalize(vec_add(u, residue_amb))
    if not vec_is_integral(alpha):
        raise EdgewalkError("candidate has fractional coordinates")
    return Candidate(
        norm=norm,
        extension=ext,
        u=u,
        residual_norm=residual,
        residual_coset=coset,
        residue=residue_amb,
        alpha=vec_int(alpha),
    )


def _candidates_for_norm_naive(lattice: Lattice, ray: Ray, norm: int) -> tuple:
    """Reference construction: every extension runs its own full sweep and
    keeps its own first matching residue.  Cross-checks the batched
    early-stopped search."""
    geom = _RayGeometry(lattice, ray)
    plane = _PlaneData(geom, norm)
    out = []
    for ext in spherical_extensions(_edge_diagram(lattice, ray), norm):
        got = plane.extension_data(ext)
        if got is None:
            continue
        u, residual, coset = got
        if plane.frame.is_anisotropic:
            period = _period_stream(plane, residual)
            stream = period.vectors if period else ()
        else:
            stream = ascending_short_vectors(plane.frame, residual, plane.r0)
        hit = None
        for r in stream:
            rr = plane.frame.norm(r)
            if rr <= 0:
                continue
            j = 1
            while j * j * rr <= residual and hit is None:
                if j * j * rr == residual and (j * r[0], j * r[1]) in coset:
                    hit = (j * r[0], j * r[1])
                j += 1
            if hit:
                break
        if hit:
            out.append(_assemble(plane, norm, ext, u, residual, coset, hit))
    return tuple(out)


def _select_candidate(lattice: Lattice, k, candidates):
    """Nearest mirror along the edge, then smallest priority, then smallest
    norm; the winner must be unique."""

    def keys(c: Candidate):
        kr = as_fraction(lattice.inner(k, c.residue))
        if kr >= 0:
            raise EdgewalkError("residue should point away from the corner")
        return (kr * kr / c.residual_norm, kr * kr / c.norm, as_fraction(c.norm))

    best = min(keys(c) for c in candidates)
    winners = [c for c in candidates if keys(c) == best]
    if len(winners) != 1:
        raise EdgewalkError(f"walk winner is not unique: {[c.alpha for c in winners]}")
    return winners[0]


def _omega_lattice_vector(lattice: Lattice, geom: _RayGeometry):
    """Primitive lattice vector on the future lightlike ray of the edge
    plane, or None when that direction is irrational."""
    basis = geom.lattice_in_plane()
    g00 = int(lattice.inner(basis[0], basis[0]))
    g01 = int(lattice.inner(basis[0], basis[1]))
    g11 = int(lattice.inner(basis[1], basis[1]))
    disc = g01 * g01 - g00 * g11
    if not is_square_int(disc):
        return None
    e = isqrt(disc)
    if g00 != 0:
        dirs = [(-g01 + e, g00), (-g01 - e, g00)]
    elif g01 != 0:
        dirs = [(1, 0), (-g11, 2 * g01)]
    else:
        dirs = [(1, 0), (0, 1)]
    for d in dirs:
        if d == (0, 0):
            continue
        for sign in (1, -1):
            v = vec_add(vec_scale(sign * d[0], basis[0]), vec_scale(sign * d[1], basis[1]))
            if vec_is_zero(v):
                continue
            v = vec_primitive(v)
            if lattice.norm(v) != 0 or lattice.inner(geom.k, v) >= 0:
                continue
            if geom.det_side(geom.to_plane(v)) > 0:
                return vec_int(v)
    return None


def walk(lattice: Lattice, ray: Ray, *, threads: int = 1) -> Corner:
    """Corner at the far end of the ray, with the full simple system of the
    chamber there."""
    _validate_corner(lattice, ray.corner)
    geom = _RayGeometry(lattice, ray)
    menu = root_norm_menu(lattice)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda n: candidates_for_norm(lattice, ray, n), menu))
    else:
        results = [candidates_for_norm(lattice, ray, n, _geom=geom) for n in menu]
    candidates = [c for group in results for c in group]
    if not candidates:
        k2 = _omega_lattice_vector(lattice, geom)
        if k2 is None:
            raise InfiniteVolumeEdge(
                f"edge at corner {ray.corner.k} with roots {ray.edge_roots} ends at an "
                "irrational ideal point; the chamber has infinite volume"
            )
        more = cuspidal_batch0(lattice, k2, ray.edge_roots, control=ray.corner.k, validate=False)
        corner = Corner("ideal", k2, tuple(ray.edge_roots) + tuple(more))
        _validate_corner(lattice, corner)
        return corner
    chosen = _select_candidate(lattice, geom.k, candidates)
    alpha = chosen.alpha
    if not is_root(lattice, alpha):
        raise EdgewalkError(f"selected candidate {alpha} is not a root")
    local = tuple(ray.edge_roots) + (alpha,)
    if diagram_from_roots(lattice, local).classify() is not DiagramClass.SPHERICAL:
        raise EdgewalkError("far-end local system is not spherical")
    # far vertex: primitive future generator of alpha-perp within the plane
    gp = geom.gram_p
    a_p = geom.to_plane(chosen.residue)
    row0 = gp[0][0] * a_p[0] + gp[0][1] * a_p[1]
    row1 = gp[1][0] * a_p[0] + gp[1][1] * a_p[1]
    k2 = vec_clear_denominators(geom.from_plane((-row1, row0)))
    if lattice.norm(k2) >= 0:
        raise EdgewalkError("far corner is not timelike; the walk is inconsistent")
    if lattice.inner(k2, geom.k) > 0:
        k2 = tuple(-x for x in k2)
    corner = Corner("ordinary", k2, local)
    _validate_corner(lattice, corner)
    return corner


def corner_rays(lattice: Lattice, corner: Corner):
    """One ray per corank-one subset of the local roots whose span is
    positive definite (the orthogonal plane then has signature (1,1))."""
    n = lattice.rank - 1
    out = []
    for subset in combinations(corner.local_roots, n - 1):
        gram = [[lattice.inner(a, b) for b in subset] for a in subset]
        if inertia(gram) == (n - 1, 0, 0):
            out.append(Ray(corner, tuple(subset)))
    return tuple(out)


def explore(
    lattice: Lattice,
    corner: Corner,
    *,
    max_walks: int = 200,
    max_corners: Optional[int] = None,
    threads: int = 1,
) -> Chamber:
    """Breadth-first edge walking from an initial corner.

    finite_volume is True when the ray queue emptied, "unknown" when a
    budget ran out, and False when an edge provably runs off to infinity.
    """
    _validate_corner(lattice, corner)
    corners = [corner]
    roots: list = list(corner.local_roots)
    queue = list(corner_rays(lattice, corner))
    seen_rays = set()
    notes: list[str] = []
    walks = 0
    finite: object = True
    while queue:
        if queue[0].key() in seen_rays:
            queue.pop(0)
            continue
        if walks >= max_walks or (max_corners is not None and len(corners) >= max_corners):
            finite = "unknown"
            notes.append("budget exhausted before the ray queue emptied")
            break
        ray = queue.pop(0)
        seen_rays.add(ray.key())
        try:
            far = walk(lattice, ray, threads=threads)
        except InfiniteVolumeEdge as exc:
            notes.append(str(exc))
            finite = False
            break
        walks += 1
        seen_rays.add((far.k, tuple(sorted(ray.edge_roots))))
        known = next((c for c in corners if c.k == far.k), None)
        if known is None:
            corners.append(far)
            for v in far.local_roots:
                if v not in roots:
                    roots.append(v)
            queue.extend(corner_rays(lattice, far))
        elif set(known.local_roots) != set(far.local_roots):
            raise EdgewalkError(
                f"walks disagree about the local system at {far.k}; input is inconsistent"
            )
    if finite is True and lattice.rank == 2 and any(c.kind == "ideal" for c in corners):
        notes.append(
            "rank-2 lattice with an ideal endpoint: exploration terminated but the "
            "chamber is a hyperbolic segment of infinite length"
        )
    unexplored = tuple(r for r in queue if r.key() not in seen_rays)
    return Chamber(
        corners=tuple(corners),
        simple_roots=tuple(roots),
        finite_volume=finite,
        walks=walks,
        notes=tuple(notes),
        unexplored=unexplored,
    )


def corner_equivalent_local(lattice: Lattice, a: Corner, b: Corner) -> bool:
    """Necessary condition for two corners to be isometry-related: same
    kind and vertex norm, and a bijection of local roots matching all
    pairwise inner products."""
    if a.kind != b.kind or lattice.norm(a.k) != lattice.norm(b.k):
        return False
    if len(a.local_roots) != len(b.local_roots):
        return False
    va, vb = list(a.local_roots), list(b.local_roots)
    if sorted(lattice.norm(v) for v in va) != sorted(lattice.norm(v) for v in vb):
        return False
    ga = [[lattice.inner(x, y) for y in va] for x in va]
    for perm in permutations(range(len(vb))):
        if any(lattice.norm(vb[perm[i]]) != lattice.norm(va[i]) for i in range(len(va))):
            continue
        gb = [
            [lattice.inner(vb[perm[i]], vb[perm[j]]) for j in range(len(va))]
            for i in range(len(va))
        ]
        if gb == ga:
            return True
    return False


# ---------------------------------------------------------------------------
# building the first corner

def _roots_orthogonal_to_timelike(lattice: Lattice, k):
    row = [int(lattice.inner(k, e)) for e in lattice.basis_vectors()]
    sol = solve_integer([row], [0])
    assert sol is not None
    enum = DefiniteEnumerator(lattice, sol[1])
    roots = []
    for n in root_norm_menu(lattice):
        for v in enum.enumerate(norm=n):
            v = vec_int(v)
            if is_root(lattice, v):
                roots.append(v)
    return sorted(roots)


def initial_corner(lattice: Lattice, k) -> Corner:
    """Corner data at a given vertex: local roots found by enumeration and
    reduced to a simple system, deterministically."""
    if not lattice.is_integral or not lattice.is_lorentzian():
        raise ValueError("integral Lorentzian lattices only")
    k = vec_int(k)
    kk = lattice.norm(k)
    if gcd(*k) != 1:
        raise ValueError("vertex vector must be primitive")
    if kk < 0:
        roots = _roots_orthogonal_to_timelike(lattice, k)
        if not roots:
            raise ValueError("no roots orthogonal to the vertex: not a corner")
        res = spherical_batch0(lattice, roots)
        if len(res.roots) != lattice.rank - 1:
            raise ValueError("the vertex is not a corner: local roots have deficient rank")
        return Corner("ordinary", k, res.roots)
    if kk > 0:
        raise ValueError("vertex must be timelike or lightlike")
    return _initial_cusp(lattice, k)


def _initial_cusp(lattice: Lattice, k) -> Corner:
    n = lattice.rank - 1
    row = [int(lattice.inner(k, e)) for e in lattice.basis_vectors()]
    sol = solve_integer([row], [0])
    assert sol is not None
    v_basis = sol[1]  # basis of the degenerate hyperplane lattice; contains k
    coords = vec_int(
        solve_rational([[b[i] for b in v_basis] for i in range(lattice.rank)], k)
    )
    cols = _complete_primitive(coords)
    new_basis = []
    for col in cols:
        v = [0] * lattice.rank
        for c, b in zip(col, v_basis):
            for t in range(lattice.rank):
                v[t] += c * b[t]
        new_basis.append(tuple(v))
    if new_basis[0] not in (tuple(k), tuple(-x for x in k)):
        raise RuntimeError("basis completion failed")
    quot = new_basis[1:]
    quot_lattice = Lattice([[lattice.inner(a, b) for b in quot] for a in quot])
    if quot_lattice.signature() != (n - 1, 0, 0):
        raise ValueError("the quotient at the lightlike vertex is not positive definite")
    roots: list = []
    enum = DefiniteEnumerator(quot_lattice, quot_lattice.basis_vectors())
    for norm in root_norm_menu(lattice):
        ln = constraint_lattice(lattice, norm)
        for q in enum.enumerate(norm=norm):
            lift0 = [0] * lattice.rank
            for c, b in zip(vec_int(q), quot):
                for t in range(lattice.rank):
                    lift0[t] += c * b[t]
            got = lift_solutions(lattice, ln, tuple(lift0), k)
            if got is None:
                continue
            c0, step = got
            for cc in (c0, c0 + step):  # two in a row decide primitivity
                v = vec_normalize(vec_add(tuple(lift0), vec_scale(cc, k)))
                if vec_is_integral(v) and is_root(lattice, vec_int(v)):
                    if vec_int(v) not in roots:
                        roots.append(vec_int(v))
                    break
    roots.sort()
    kept: list = []
    rows_mod: list = []
    solve_cols = [[b[i] for b in quot] + [k[i]] for i in range(lattice.rank)]
    for v in roots:
        qc = solve_rational(solve_cols, v)
        if qc is None:
            continue
        cand_rows = rows_mod + [[as_fraction(x) for x in qc[: n - 1]]]
        _, pivots = rref(cand_rows)
        if len(pivots) == len(cand_rows):
            rows_mod = cand_rows
            kept.append(v)
        if len(kept) == n - 1:
            break
    if len(kept) != n - 1:
        raise ValueError("the lightlike vertex is not a cusp of the chamber")
    u_roots = spherical_batch0(lattice, kept).roots if kept else ()
    more = cuspidal_batch0(lattice, k, u_roots)
    corner = Corner("ideal", tuple(k), tuple(u_roots) + tuple(more))
    _validate_corner(lattice, corner)
    return corner


def _complete_primitive(coords):
    """Columns of a unimodular matrix whose first column is the given
    primitive integer vector (up to sign)."""
    from ._linalg import smith_normal_form

    n = len(coords)
    _, u, _ = smith_normal_form([[c] for c in coords])
    inv = _matrix_inverse_int(u)
    return [tuple(inv[i][j] for i in range(n)) for j in range(n)]


def _matrix_inverse_int(m):
    n = len(m)
    rows = [
        [as_fraction(x) for x in row] + [Q(1) if i == j else Q(0) for j in range(n)]
        for i, row in enumerate(m)
    ]
    r, _ = rref(rows)
    return [[int(r[i][n + j]) for j in range(n)] for i in range(n)]
