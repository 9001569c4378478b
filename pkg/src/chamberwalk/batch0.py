"""Simple systems at a corner: the batch the priority ordering starts from.

Two cases.  At an ordinary point one extends a partial simple system one
root at a time inside a positive-definite span (``spherical_step`` /
``spherical_batch0``).  At an ideal point the local root system lives in a
degenerate hyperplane; candidates are built from cuspidal diagram
extensions, lifted into the constraint lattice along the lightlike
direction, and filtered by the approval scan (``cuspidal_batch0``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from ._linalg import (
    Q,
    as_fraction,
    inertia,
    rational_sqrt,
    solve_integer,
    solve_rational,
    vec_add,
    vec_clear_denominators,
    vec_int,
    vec_is_integral,
    vec_normalize,
    vec_scale,
    vec_sub,
)
from .dynkin import DiagramClass, cuspidal_extensions, diagram_from_roots, spherical_extensions
from .lattice import CosetLattice, Lattice, constraint_lattice, is_root, root_norm_menu
from .vinberg import approval_filter, priority_sq

__all__ = [
    "spherical_step",
    "Batch0Result",
    "spherical_batch0",
    "cuspidal_batch0",
    "lift_solutions",
    "minimal_positive_lift",
    "default_cusp_control",
]


def _gram(lattice, vectors):
    return [[as_fraction(lattice.inner(a, b)) for b in vectors] for a in vectors]


def spherical_step(lattice: Lattice, simple_so_far: Sequence, new_root):
    """Given a simple system for the roots in its span and one more
    independent root, the unique root completing the system on the larger
    span, chosen on the side of the new root."""
    simple = [vec_int(v) for v in simple_so_far]
    alpha_m = vec_int(new_root)
    if not is_root(lattice, alpha_m):
        raise ValueError(f"{alpha_m} is not a root")
    for v in simple:
        if not is_root(lattice, v):
            raise ValueError(f"{v} is not a root")
    for i, a in enumerate(simple):
        for b in simple[i + 1 :]:
            if lattice.inner(a, b) > 0:
                raise ValueError("partial system has a positive inner product")
    span = simple + [alpha_m]
    if inertia(_gram(lattice, span)) != (len(span), 0, 0):
        raise ValueError("roots must be independent with positive-definite span")
    if not simple:
        return alpha_m
    m = len(simple)
    gram = _gram(lattice, simple)
    # component of the new root orthogonal to the old span, on its side
    coeffs = solve_rational(gram, [lattice.inner(v, alpha_m) for v in simple])
    w = list(alpha_m)
    for c, v in zip(coeffs, simple):
        for t in range(lattice.rank):
            w[t] -= c * v[t]
    side_k = vec_scale(-1, vec_clear_denominators(w))
    kk = lattice.norm(side_k)
    base = diagram_from_roots(lattice, simple)
    candidates = []
    seen = set()
    for n in root_norm_menu(lattice):
        ln = constraint_lattice(lattice, n)
        for ext in spherical_extensions(base, n):
            targets = ext.inner_products()
            coeffs = solve_rational(gram, [targets[i] for i in range(m)])
            beta = [Q(0)] * lattice.rank
            for c, v in zip(coeffs, simple):
                for t in range(lattice.rank):
                    beta[t] += c * v[t]
            c_sq = as_fraction(n - lattice.norm(beta)) / as_fraction(kk)
            if c_sq <= 0:
                raise RuntimeError("definite extension should leave positive residue")
            c_root = rational_sqrt(c_sq)
            if c_root is None:
                continue
            alpha = vec_normalize(vec_sub(beta, vec_scale(c_root, side_k)))
            if not vec_is_integral(alpha):
                continue
            alpha = vec_int(alpha)
            if alpha in seen or alpha not in ln:
                continue
            seen.add(alpha)
            candidates.append((priority_sq(lattice, side_k, alpha), Q(n), alpha))
    if not candidates:
        raise ValueError("no completing root exists; the input is inconsistent")
    best = min(c[:2] for c in candidates)
    winners = [c[2] for c in candidates if c[:2] == best]
    if len(winners) != 1:
        raise RuntimeError(f"completing root is not unique: {winners}")
    return winners[0]


@dataclass(frozen=True)
class Batch0Result:
    roots: tuple
    already_simple: bool


def spherical_batch0(lattice: Lattice, roots) -> Batch0Result:
    """Simple system for all roots of the lattice in the span of the given
    roots; also reports whether the input already was one."""
    given = [vec_int(v) for v in roots]
    independent = []
    rows: list = []
    discarded = False
    for v in given:
        cand = rows + [[as_fraction(x) for x in v]]
        from ._linalg import rref

        _, pivots = rref(cand)
        if len(pivots) == len(cand):
            rows = cand
            independent.append(v)
        else:
            discarded = True
    if not independent:
        raise ValueError("need at least one root")
    if inertia(_gram(lattice, independent)) != (len(independent), 0, 0):
        raise ValueError("span of the given roots is not positive definite")
    simple: list = []
    already = not discarded
    for v in independent:
        nxt = spherical_step(lattice, simple, v)
        if nxt != v:
            already = False
        simple.append(nxt)
    return Batch0Result(tuple(simple), already)


def lift_solutions(lattice: Lattice, ln: CosetLattice, u, k):
    """The rationals c with u + c k in the given constraint lattice form a
    coset c0 + step Z; returns (c0, step) with c0 the smallest positive
    solution, or None when there is no solution at all.

    u is a rational vector, k a primitive integer vector off the span
    being quotiented away.
    """
    k = vec_int(k)
    basis = ln.basis
    nb = len(basis)
    j = next(i for i in range(lattice.rank) if k[i] != 0)
    rows = []
    rhs = []
    u = [as_fraction(x) for x in u]
    for i in range(lattice.rank):
        if i == j:
            continue
        rows.append([k[j] * basis[col][i] - k[i] * basis[col][j] for col in range(nb)])
        rhs.append(k[j] * u[i] - k[i] * u[j])
    scaled_rhs = []
    for x in rhs:
        if x.denominator != 1:
            return None  # integer-valued left side cannot match
        scaled_rhs.append(int(x))
    sol = solve_integer(rows, scaled_rhs)
    if sol is None:
        return None
    x0, kernel = sol
    if len(kernel) != 1:
        raise RuntimeError("expected a one-dimensional lift ambiguity")

    def bx_j(coords):
        return sum(c * basis[col][j] for col, c in enumerate(coords))

    c_star = (bx_j(x0) - u[j]) / k[j]
    s = as_fraction(bx_j(kernel[0])) / k[j]
    if s == 0:
        raise RuntimeError("lift step degenerated")
    s = abs(s)
    c0 = c_star - s * (c_star / s).__floor__()
    if c0 == 0:
        c0 = s
    return c0, s


def minimal_positive_lift(lattice: Lattice, ln: CosetLattice, u, k):
    """Smallest c > 0 with u + c k in the given constraint lattice, or None."""
    got = lift_solutions(lattice, ln, u, k)
    return got[0] if got is not None else None


def default_cusp_control(lattice: Lattice, k, u_roots):
    """Deterministic future-directed control vector in the plane orthogonal
    to the local roots, off the lightlike line through k."""
    k = vec_int(k)
    rows = [[as_fraction(lattice.inner(u, e)) for e in lattice.basis_vectors()] for u in u_roots]
    if rows:
        from ._linalg import nullspace_rational

        plane = nullspace_rational(rows)
    else:
        plane = [tuple(as_fraction(x) for x in e) for e in lattice.basis_vectors()]
    w = None
    for v in plane:
        if lattice.inner(k, v) != 0:
            w = v
            break
        # v may be parallel to k; combinations handled below
    if w is None:
        for i in range(len(plane)):
            for j in range(i + 1, len(plane)):
                v = vec_add(plane[i], plane[j])
                if lattice.inner(k, v) != 0:
                    w = v
                    break
            if w:
                break
    if w is None:
        raise ValueError("no transversal direction in the orthogonal plane")
    if lattice.inner(k, w) > 0:
        w = vec_scale(-1, w)
    ww = lattice.norm(w)
    kw = lattice.inner(k, w)
    t = Q(1) if ww <= 0 else min(Q(1), as_fraction(-kw) / as_fraction(ww))
    return vec_clear_denominators(vec_add(tuple(as_fraction(x) for x in k), vec_scale(t, w)))


def cuspidal_batch0(
    lattice: Lattice,
    k,
    u_roots,
    control=None,
    *,
    validate: bool = True,
):
    """Remaining simple roots of the chamber at a lightlike corner, beyond
    the given simple system of roots orthogonal to both k and the chamber
    edge the control vector points along."""
    if not lattice.is_integral or not lattice.is_lorentzian():
        raise ValueError("integral Lorentzian lattices only")
    k = vec_int(k)
    if lattice.norm(k) != 0 or gcd(*k) != 1:
        raise ValueError("k must be a primitive lightlike vector")
    u_roots = [vec_int(v) for v in u_roots]
    for v in u_roots:
        if lattice.inner(k, v) != 0:
            raise ValueError(f"{v} is not orthogonal to k")
    if u_roots and inertia(_gram(lattice, u_roots)) != (len(u_roots), 0, 0):
        raise ValueError("local roots must have positive-definite span")
    if validate and u_roots:
        res = spherical_batch0(lattice, u_roots)
        if not res.already_simple:
            raise ValueError("the given roots are not a simple system for their span")
    if control is None:
        control = default_cusp_control(lattice, k, u_roots)
    else:
        control = vec_normalize(control)
        for v in u_roots:
            if lattice.inner(control, v) != 0:
                raise ValueError("control vector must be orthogonal to the local roots")
        if lattice.inner(control, k) >= 0:
            raise ValueError("control vector must be future-directed (negative product with k)")
    base = diagram_from_roots(lattice, u_roots)
    gram = _gram(lattice, u_roots)
    candidates = []
    for n in root_norm_menu(lattice):
        ln = constraint_lattice(lattice, n)
        for ext in cuspidal_extensions(base, n):
            targets = ext.inner_products()
            coeffs = solve_rational(gram, [targets[i] for i in range(len(u_roots))]) if u_roots else ()
            u = [Q(0)] * lattice.rank
            for c, v in zip(coeffs, u_roots):
                for t in range(lattice.rank):
                    u[t] += c * v[t]
            if lattice.norm(u) != n:
                raise RuntimeError("cuspidal extension has inconsistent projected norm")
            c0 = minimal_positive_lift(lattice, ln, u, k)
            if c0 is None:
                continue
            vec = vec_normalize(vec_add(u, vec_scale(c0, k)))
            if not vec_is_integral(vec):
                raise RuntimeError("constraint-lattice member has fractional coordinates")
            candidates.append(vec_int(vec))
    candidates.sort(key=lambda v: (priority_sq(lattice, control, v), lattice.norm(v), v))
    return approval_filter(lattice, control, u_roots, candidates)
