"""Desk-scale toolkit for 2-complexes with large 2-girth."""

from .complex2 import (
    Complex2,
    HomologySummary,
    boundary2,
    complete_2_skeleton,
    complex_to_dict,
    complex_to_json,
    euler_characteristic,
    homology_ranks,
    is_cycle2,
    octahedron,
    parse_complex,
    tetrahedron_boundary,
    triangle_bipyramid,
)
from .errors import (
    AttemptsExhaustedError,
    BudgetExceededError,
    InvalidInputError,
    NotACycleError,
    NotASurfaceError,
    PropertyViolationError,
    UnfillableError,
)

__version__ = "0.1.0"
