from .bodies import Ellipsoid, HPolytope, Subspace, VPolytope, Zonotope
from .enumeration import facet_enumerate, vertex_enumerate
from .faces import SurfaceMeasure, surface_measure, uniform_points, volume
from .io import body_from_dict, body_to_dict, load_body, load_subspace, save_body, subspace_from_dict, subspace_to_dict
from .ops import gauge, polar, project, projection_body, section, support, zonotope_volume

__all__ = [
    "Ellipsoid", "HPolytope", "Subspace", "VPolytope", "Zonotope",
    "facet_enumerate", "vertex_enumerate", "SurfaceMeasure", "surface_measure",
    "uniform_points", "volume", "body_from_dict", "body_to_dict", "load_body",
    "load_subspace", "save_body", "subspace_from_dict", "subspace_to_dict",
    "gauge", "polar", "project", "projection_body", "section", "support",
    "zonotope_volume",
]
