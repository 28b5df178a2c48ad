"""Exact verification toolkit for coarse dynamics on metric spaces.

The building blocks are exact points and distances (:mod:`metric_core`), the
example dynamical systems (:mod:`constructions`), checks of closeness,
control and coarse inverses (:mod:`coarse_maps`) and scenario runners that
turn these into PASS/FAIL reports (:mod:`verifier`).
"""

from .errors import CoarseDynError, DomainError, PrecisionError, WindowError
from .exact import ExactReal, precision
from .metric_core import (
    GRID_X,
    GRID_Y,
    CoarseMapSpec,
    Grid3,
    Halfline,
    Space,
    Strip,
    Window,
    density_witness,
    dist,
    neighborhood_cover_check,
    samples,
    squares_halfline,
    strip_space,
    unit_chain,
    xk_lattice,
)
from .constructions import get_map, grid_map, label_collapse, squares_map, strip_map
from .coarse_maps import (
    closeness_trend,
    coarse_inverse_check,
    compose,
    control_profile,
    iterate,
    non_controlled_witness,
    section_of_surjection,
    sup_distance,
)

__version__ = "0.1.0"

__all__ = [
    "CoarseDynError",
    "DomainError",
    "PrecisionError",
    "WindowError",
    "ExactReal",
    "precision",
    "GRID_X",
    "GRID_Y",
    "CoarseMapSpec",
    "Grid3",
    "Halfline",
    "Space",
    "Strip",
    "Window",
    "density_witness",
    "dist",
    "neighborhood_cover_check",
    "samples",
    "squares_halfline",
    "strip_space",
    "unit_chain",
    "xk_lattice",
    "get_map",
    "grid_map",
    "label_collapse",
    "squares_map",
    "strip_map",
    "closeness_trend",
    "coarse_inverse_check",
    "compose",
    "control_profile",
    "iterate",
    "non_controlled_witness",
    "section_of_surjection",
    "sup_distance",
]
