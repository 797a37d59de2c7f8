"""Sketch and recovery for one k-substring edit (a localized burst of indels and substitutions)."""

from .blockhash import COMPRESSED, REFERENCE, PsiValue, edit_ball, psi, phi_sketch, recover_region
from .channel import EditOp, apply_edit, density_trial, enumerate_edits, sample_edit
from .codec import (
    Sketch, decode, detect_identity, dumps_sketch, fallback_recover, is_codeword, loads_sketch,
    recover, redundancy_report, sketch,
)
from .core import (
    Ambiguous, CodeError, CodeParams, DecodeFailure, NoCandidate, centered_residue,
    derive_params, scaled_overrides,
)
from .featmap import count_ones_runs, d_val, f_val, feature_vector
from .partition import find_patterns, is_dense, part_interval_to_bits, partition
from .vtlocate import LocatorInput, eta, is_locatable, locate, vt

__version__ = "0.1.0"
