"""Exact-arithmetic Weyl chambers of Lorentzian lattices.

Two routes to the same answer: classical batch enumeration ordered by
mirror distance (vinberg), and corner-to-corner edge walking driven by 2D
short-vector searches (edgewalk).  Everything is exact integer/rational
arithmetic; no floating point touches any decision.
"""

__version__ = "0.1.0"

from .lattice import (
    CosetLattice,
    Lattice,
    constraint_lattice,
    definite_enumerate,
    discriminant_exponent,
    is_almost_root,
    is_root,
    isqrt_floor,
    lattice_from_json,
    lattice_to_json,
    primitive_part,
    root_norm_menu,
    signature,
)
from .dynkin import (
    Bond,
    DiagramClass,
    Extension,
    NormedDynkinDiagram,
    classify,
    cuspidal_extensions,
    diagram_from_roots,
    gram_from_diagram,
    spherical_extensions,
)
from .shortvec import (
    PlaneFrame,
    PlaneIsometry,
    anisotropic_period,
    canonical_supplement,
    is_M_supplement,
    not_promised,
    promised,
    sector_compare,
    shorter,
)
from .vinberg import (
    approval_filter,
    compare_priority,
    fundamental_unit,
    pell_fundamental,
    rank2_second_root,
    vinberg_run,
)
from .batch0 import cuspidal_batch0, spherical_batch0, spherical_step
from .edgewalk import (
    Chamber,
    Corner,
    Ray,
    candidates_for_norm,
    corner_equivalent_local,
    explore,
    initial_corner,
    walk,
)

__all__ = [name for name in dir() if not name.startswith("_")]
