"""Normed Dynkin diagrams: construction from roots, classification, and
enumeration of one-node extensions.

A diagram is a set of nodes with positive rational norms and bonds of four
kinds (single, double, triple, heavy).  Double, triple and oriented heavy
bonds point from the longer root to the shorter one, with norm ratios 2, 3
and 4; single and unoriented heavy bonds join equal norms.  The node norms
and bonds determine a unique symmetric bilinear form, and the diagram is
classified by its exact inertia: positive definite (spherical), positive
semidefinite but degenerate (cuspidal), or neither.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from ._linalg import Q, as_fraction, inertia, normalize_number

__all__ = [
    "DiagramClass",
    "Bond",
    "NormedDynkinDiagram",
    "Extension",
    "diagram_from_roots",
    "gram_from_diagram",
    "classify",
    "spherical_extensions",
    "cuspidal_extensions",
]

_KINDS = ("single", "double", "triple", "heavy")
_RATIO = {"double": 2, "triple": 3, "heavy": 4}


class DiagramClass(Enum):
    SPHERICAL = "spherical"
    CUSPIDAL = "cuspidal"
    NEITHER = "neither"


@dataclass(frozen=True)
class Bond:
    """A bond between two nodes; tail/tip are node indices for oriented
    bonds (arrow from the longer root to the shorter), None otherwise."""

    kind: str
    tail: Optional[int] = None
    tip: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown bond kind {self.kind!r}")
        oriented = self.tail is not None
        if oriented != (self.tip is not None):
            raise ValueError("tail and tip must be given together")
        if self.kind in ("double", "triple") and not oriented:
            raise ValueError(f"{self.kind} bonds are oriented")
        if self.kind == "single" and oriented:
            raise ValueError("single bonds are unoriented")


def _bond_inner(bond: Bond, norm_i, norm_j, i, j):
    """Inner product of nodes i, j joined by the bond; raises if the norms
    are incompatible with the bond type."""
    if bond.kind == "single" or (bond.kind == "heavy" and bond.tail is None):
        if norm_i != norm_j:
            raise ValueError("equal norms required for this bond")
        return -norm_i / 2 if bond.kind == "single" else -norm_i
    ratio = _RATIO[bond.kind]
    tail_norm = norm_i if bond.tail == i else norm_j
    tip_norm = norm_j if bond.tail == i else norm_i
    if tail_norm != ratio * tip_norm:
        raise ValueError(f"{bond.kind} bond needs norm ratio {ratio}")
    if bond.kind == "double":
        return -tip_norm
    if bond.kind == "triple":
        return -Fraction(3, 2) * tip_norm
    return -2 * tip_norm  # oriented heavy


class NormedDynkinDiagram:
    """Nodes with positive norms and a symmetric bond table."""

    def __init__(self, norms, bonds=None):
        self.norms = tuple(as_fraction(x) for x in norms)
        if any(x <= 0 for x in self.norms):
            raise ValueError("node norms must be positive")
        table: dict[tuple[int, int], Bond] = {}
        for key, bond in dict(bonds or {}).items():
            i, j = key
            if i == j or not (0 <= i < len(self.norms)) or not (0 <= j < len(self.norms)):
                raise ValueError(f"bad bond key {key!r}")
            i, j = min(i, j), max(i, j)
            if bond.tail is not None and {bond.tail, bond.tip} != {i, j}:
                raise ValueError(f"bond orientation {bond} does not match key {key}")
            if (i, j) in table:
                raise ValueError(f"duplicate bond {key}")
            _bond_inner(bond, self.norms[i], self.norms[j], i, j)  # validates norms
            table[(i, j)] = bond
        self.bonds = dict(sorted(table.items()))
        self._key = (self.norms, tuple(sorted(self.bonds.items(), key=lambda kv: kv[0])))

    def __len__(self):
        return len(self.norms)

    def bond(self, i, j) -> Optional[Bond]:
        return self.bonds.get((min(i, j), max(i, j)))

    def gram(self):
        n = len(self.norms)
        g = [[Q(0)] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = self.norms[i]
        for (i, j), bond in self.bonds.items():
            g[i][j] = g[j][i] = _bond_inner(bond, self.norms[i], self.norms[j], i, j)
        return tuple(tuple(normalize_number(x) for x in row) for row in g)

    def classify(self) -> DiagramClass:
        p, q, z = inertia(self.gram())
        if q == 0 and z == 0:
            return DiagramClass.SPHERICAL
        if q == 0:
            return DiagramClass.CUSPIDAL
        return DiagramClass.NEITHER

    def with_node(self, norm, attachments) -> "NormedDynkinDiagram":
        """New diagram with one extra node (appended last) joined per the
        attachments: (index, kind, tail_is_new)."""
        n = len(self.norms)
        bonds = dict(self.bonds)
        for index, kind, tail_is_new in attachments:
            if kind in ("double", "triple") or (kind == "heavy" and tail_is_new is not None):
                tail, tip = (n, index) if tail_is_new else (index, n)
                bonds[(index, n)] = Bond(kind, tail, tip)
            else:
                bonds[(index, n)] = Bond(kind)
        return NormedDynkinDiagram(self.norms + (as_fraction(norm),), bonds)

    def __eq__(self, other):
        return isinstance(other, NormedDynkinDiagram) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        desc = ", ".join(
            f"{i}-{j}:{b.kind}" + (f"({b.tail}>{b.tip})" if b.tail is not None else "")
            for (i, j), b in self.bonds.items()
        )
        return f"NormedDynkinDiagram(norms={list(self.norms)}, bonds=[{desc}])"


def gram_from_diagram(diagram: NormedDynkinDiagram):
    return diagram.gram()


def classify(diagram: NormedDynkinDiagram) -> DiagramClass:
    return diagram.classify()


def diagram_from_roots(lattice, roots) -> NormedDynkinDiagram:
    """Diagram of a set of roots with pairwise nonpositive inner products.

    Each pair must be orthogonal or have the Gram of one of the admissible
    bond shapes (ratio 1 with angle 2pi/3, ratio 2/3/4 oriented, or the
    parallel equal-norm pair); anything else is reported as an error.
    """
    roots = [tuple(v) for v in roots]
    norms = [lattice.norm(v) for v in roots]
    if any(x <= 0 for x in norms):
        raise ValueError("all roots must have positive norm")
    bonds = {}
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            c = lattice.inner(roots[i], roots[j])
            if c > 0:
                raise ValueError(f"roots {i} and {j} have positive inner product")
            if c == 0:
                continue
            a, b = norms[i], norms[j]
            if a == b and 2 * c == -a:
                bonds[(i, j)] = Bond("single")
            elif a == b and c == -a:
                bonds[(i, j)] = Bond("heavy")
            elif a == 2 * b and c == -b:
                bonds[(i, j)] = Bond("double", i, j)
            elif b == 2 * a and c == -a:
                bonds[(i, j)] = Bond("double", j, i)
            elif a == 3 * b and 2 * c == -3 * b:
                bonds[(i, j)] = Bond("triple", i, j)
            elif b == 3 * a and 2 * c == -3 * a:
                bonds[(i, j)] = Bond("triple", j, i)
            elif a == 4 * b and c == -2 * b:
                bonds[(i, j)] = Bond("heavy", i, j)
            elif b == 4 * a and c == -2 * a:
                bonds[(i, j)] = Bond("heavy", j, i)
            else:
                raise ValueError(
                    f"roots {i} and {j} (norms {a}, {b}, product {c}) "
                    "do not span an admissible bond shape"
                )
    return NormedDynkinDiagram(norms, bonds)


@dataclass(frozen=True)
class Extension:
    """One-node extension of a diagram: the new node's norm and its bonds
    to the base, each given as (base index, kind, tail_is_new)."""

    base: NormedDynkinDiagram
    new_norm: Fraction
    bonds: tuple

    def extended(self) -> NormedDynkinDiagram:
        return self.base.with_node(self.new_norm, self.bonds)

    def inner_products(self) -> dict[int, Fraction]:
        """Inner products of the new node with each base node (0 if absent)."""
        diag = self.extended()
        n = len(self.base)
        g = diag.gram()
        return {i: g[n][i] for i in range(n)}

    def sort_key(self):
        return (len(self.bonds), self.bonds, self.new_norm)


def _norm_indices(diagram, value):
    return [i for i, x in enumerate(diagram.norms) if x == value]


def _doubles(diagram, n_new):
    """(index, tail_is_new) choices for a double bond at the new node."""
    out = []
    for i, x in enumerate(diagram.norms):
        if 2 * x == n_new:
            out.append((i, True))   # new node is the longer root
        if x == 2 * n_new:
            out.append((i, False))
    return out


def _make(base, n_new, bonds):
    return Extension(base, as_fraction(n_new), tuple(sorted(bonds)))


def spherical_extensions(diagram: NormedDynkinDiagram, n_new) -> tuple[Extension, ...]:
    """All ways to add one node of the given norm keeping the diagram
    positive definite.  Exhausts the possible bond patterns:

      - no bond at all;
      - singly joined to 1..3 equal-norm nodes;
      - one double bond (norm ratio 2) plus at most one single bond;
      - one triple bond (norm ratio 3).

    The constructions are then filtered by exact inertia.
    """
    if diagram.classify() is not DiagramClass.SPHERICAL:
        raise ValueError("base diagram must be spherical")
    n_new = as_fraction(n_new)
    if n_new <= 0:
        raise ValueError("extension norm must be positive")
    raw = [_make(diagram, n_new, ())]
    singles = _norm_indices(diagram, n_new)
    for size in (1, 2, 3):
        for combo in combinations(singles, size):
            raw.append(_make(diagram, n_new, [(i, "single", None) for i in combo]))
    for j, tail_new in _doubles(diagram, n_new):
        raw.append(_make(diagram, n_new, [(j, "double", tail_new)]))
        for i in singles:
            if i != j:
                raw.append(_make(diagram, n_new, [(j, "double", tail_new), (i, "single", None)]))
    for i, x in enumerate(diagram.norms):
        if 3 * x == n_new:
            raw.append(_make(diagram, n_new, [(i, "triple", True)]))
        if x == 3 * n_new:
            raw.append(_make(diagram, n_new, [(i, "triple", False)]))
    return _filter_extensions(raw, DiagramClass.SPHERICAL)


def cuspidal_extensions(diagram: NormedDynkinDiagram, n_new) -> tuple[Extension, ...]:
    """All ways to add one node of the given norm making the diagram
    positive semidefinite but degenerate.  Bond patterns exhausted:

      - singly joined to 1..4 equal-norm nodes;
      - two double bonds;
      - one double bond plus 0..2 single bonds;
      - one triple bond plus 0..1 single bonds;
      - one unoriented heavy bond (equal norms);
      - one oriented heavy bond (norm ratio 4).

    Filtered by exact inertia.
    """
    if diagram.classify() is not DiagramClass.SPHERICAL:
        raise ValueError("base diagram must be spherical")
    n_new = as_fraction(n_new)
    if n_new <= 0:
        raise ValueError("extension norm must be positive")
    raw = []
    singles = _norm_indices(diagram, n_new)
    for size in (1, 2, 3, 4):
        for combo in combinations(singles, size):
            raw.append(_make(diagram, n_new, [(i, "single", None) for i in combo]))
    doubles = _doubles(diagram, n_new)
    for (j1, t1), (j2, t2) in combinations(doubles, 2):
        if j1 != j2:
            raw.append(_make(diagram, n_new, [(j1, "double", t1), (j2, "double", t2)]))
    for j, tail_new in doubles:
        raw.append(_make(diagram, n_new, [(j, "double", tail_new)]))
        for size in (1, 2):
            for combo in combinations([i for i in singles if i != j], size):
                raw.append(
                    _make(
                        diagram,
                        n_new,
                        [(j, "double", tail_new)] + [(i, "single", None) for i in combo],
                    )
                )
    for i, x in enumerate(diagram.norms):
        triples = []
        if 3 * x == n_new:
            triples.append((i, True))
        if x == 3 * n_new:
            triples.append((i, False))
        for j, tail_new in triples:
            raw.append(_make(diagram, n_new, [(j, "triple", tail_new)]))
            for s in singles:
                if s != j:
                    raw.append(
                        _make(diagram, n_new, [(j, "triple", tail_new), (s, "single", None)])
                    )
    for i in singles:
        raw.append(_make(diagram, n_new, [(i, "heavy", None)]))
    for i, x in enumerate(diagram.norms):
        if 4 * x == n_new:
            raw.append(_make(diagram, n_new, [(i, "heavy", True)]))
        if x == 4 * n_new:
            raw.append(_make(diagram, n_new, [(i, "heavy", False)]))
    return _filter_extensions(raw, DiagramClass.CUSPIDAL)


def _filter_extensions(raw, wanted: DiagramClass) -> tuple[Extension, ...]:
    seen = set()
    out = []
    for ext in raw:
        if ext.bonds in seen:
            continue
        seen.add(ext.bonds)
        if ext.extended().classify() is wanted:
            out.append(ext)
    out.sort(key=Extension.sort_key)
    return tuple(out)
