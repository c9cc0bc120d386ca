"""Exact equivariant index computations on good moment cones."""

from .cone_model import (
    ConeError,
    EdgeFrame,
    GoodnessReport,
    MomentCone,
    cone_over_polytope,
    cross_section,
    edges,
    example_N,
    faces,
    is_good,
    is_reeb_admissible,
    orthant,
    rays,
    strictly_convex,
    suggest_reeb,
    unit_simplex_cone,
    unit_square_cone,
)
from .index_engine import (
    IndexComparison,
    IndexTerm,
    PolarizingError,
    expand_term,
    index_window,
    localization_terms,
    multiplicity_lattice,
    multiplicity_localized,
    render_term,
)
from .lv_engine import IndexSeries, LatticeWindow, WindowTooLarge, cone_S, cone_S_dual, lv_dual_sum, lv_sum
from .polarization import Mode, PolarizedCone, PolytopeModel, find_polarizing, is_polarizing

__version__ = "0.1.0"
