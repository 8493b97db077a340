"""Distances from orthogonal projections to nilpotent matrices."""

__version__ = "0.1.0"

from .arveson import CornerProfile, arveson_distance, corner_profile, truncation_projection
from .corank1 import (
    CandidateSet,
    PartialTraceSequence,
    SpectralParams,
    candidate_values,
    f_norm_sq,
    g_disc,
    h_inverse,
    h_step,
    lower_bound,
    nu_conjecture,
    nu_corank1,
    nu_rank1,
    optimal_projection,
    partial_trace_sequence,
    q_poly_closed_form,
    q_poly_sequence,
    shoot_for_t,
    spectral_params,
)
from .matcore import hermitian_eigenvalues, operator_norm, qr_isometry, rank_one_extract, solve_linear
from .pairing import (
    ClosestPair,
    antidiagonal_defect,
    canonical_phases,
    closest_nilpotent,
    closest_pair,
    pairs_unitarily_equivalent,
    residual_unitary,
)
from .search import SearchConfig, SearchResult, conjecture_table, objective, propose, random_walk_minimize
