from .decomposition import (
    JohnDecomposition,
    LiftedDecomposition,
    RestrictedDecomposition,
    fit_john_decomposition,
    lift_decomposition,
    lifted_subspace,
    restrict_decomposition,
)
from .ellipsoids import max_inscribed_ellipsoid, min_enclosing_ellipsoid, solve_enclosing, solve_inscribed
from .john import AffineMap, apply_affine, contact_points, lowner_from_john, to_john_position, to_lowner_position
from .minsurf import TraceRecord, isotropy_residual, min_surface_area_position

__all__ = [
    "JohnDecomposition", "LiftedDecomposition", "RestrictedDecomposition",
    "fit_john_decomposition", "lift_decomposition", "lifted_subspace",
    "restrict_decomposition", "max_inscribed_ellipsoid", "min_enclosing_ellipsoid",
    "solve_enclosing", "solve_inscribed", "AffineMap", "apply_affine",
    "contact_points", "lowner_from_john", "to_john_position", "to_lowner_position",
    "TraceRecord", "isotropy_residual", "min_surface_area_position",
]
