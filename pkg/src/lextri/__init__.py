"""Lexicographic enumeration of combinatorial surfaces and 3-manifolds."""
from .complex import FacetViolation, PartialComplex, Triangulation
from .canonical import canonical_form, is_isomorphic
from .enumerator import (
    EnumerationConfig,
    EnumerationEvent,
    enumerate_partition,
    enumerate_triangulations,
    initial_stars,
    next_candidate_facets,
    trace,
)

__version__ = "0.1.0"
