"""Reasoning about combined cardinal-direction and relative-orientation
constraints on 2D points: relation algebra, grid oracle, derived tables,
closure engine, scenario search, and a knowledge-base front end."""

from .algebra import (
    CdaAtom,
    RoaAtom,
    UNIVERSAL,
    cda_converse,
    format_cda,
    format_roa,
    parse_cda,
    parse_roa,
    roa_converse,
    roa_rotation,
)
from .csp import (
    BinaryMatrix,
    CcoaCsp,
    TernaryTensor,
    assert_cda,
    assert_roa,
    new_csp,
    project_cda,
    project_roa,
)
from .geometry import Point, cda_of, model_search, roa_of, verify_assignment
from .kb import KnowledgeBase, build_csp, parse_kb, serialize_kb
from .propagation import (
    PropagationOutcome,
    PropagationStatus,
    path_consistency,
    pcs4c_plus,
    strong_4_consistency,
)
from .search import SearchOutcome, SearchResult, cda_consistency, find_scenario
from .tables import AlgebraTables, derive_tables, get_tables, load_tables

__version__ = "0.1.0"
