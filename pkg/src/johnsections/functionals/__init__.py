from .constants import (
    gaussian_width_constant,
    quermass_conversion,
    simplex_constants,
    unit_ball_volume,
)
from .distance import Projection, distances, project_onto_polytope
from .montecarlo import (
    McEstimate,
    gauge_body_volume_mc,
    gaussian_measure_mc,
    mean_width_mc,
    polar_wills_integral_mc,
    wills_mc,
)

__all__ = [
    "gaussian_width_constant", "quermass_conversion", "simplex_constants",
    "unit_ball_volume", "Projection", "distances", "project_onto_polytope",
    "McEstimate", "gauge_body_volume_mc", "gaussian_measure_mc", "mean_width_mc",
    "polar_wills_integral_mc", "wills_mc",
]
