"""Exact Koszul cohomology of explicit K3 surfaces and canonical curves."""

from .exactla import FieldSpec, ResourceError, SparseMatrix, kernel_dim, rank, row_echelon
from .gradedring import GradedPiece, Presentation, graded_piece, hilbert_function
from .koszul import BettiTable, betti_table, koszul_differential, kpq_dim
from .models import ModelSpec, build, build_with_retry, hyperplane_section, lm_invariants
from .bott import FlagSignature, bott_cohomology, weyl_dim
from .chowrr import BundleDescriptor, ChowClass, euler_char
from .verify import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "ResourceError", "SparseMatrix", "kernel_dim", "rank", "row_echelon",
    "GradedPiece", "Presentation", "graded_piece", "hilbert_function",
    "BettiTable", "betti_table", "koszul_differential", "kpq_dim",
    "ModelSpec", "build", "build_with_retry", "hyperplane_section", "lm_invariants",
    "FlagSignature", "bott_cohomology", "weyl_dim",
    "BundleDescriptor", "ChowClass", "euler_char", "VerificationReport",
]
