"""Singular value decompositions, pseudoinverses and projections of chain complexes."""

from .chain_complex import (
    ChainComplex,
    RankProfile,
    Thresholds,
    exact_homology,
    exact_profile,
    homology_from_ranks,
    laplacian,
    ranks_from_homology,
    validate,
)
from .complex_svd import (
    ComplexSVD,
    make_special_orthogonal,
    normal_form_residual,
    project_to_complex,
    rank_decision,
    stable_singular_values,
    svd_by_laplacian,
    svd_by_projection,
    svd_two_precision,
)
from .matrix_kernel import PrimeFieldMatrix, RationalMatrix

__all__ = [
    "ChainComplex",
    "ComplexSVD",
    "PrimeFieldMatrix",
    "RankProfile",
    "RationalMatrix",
    "Thresholds",
    "exact_homology",
    "exact_profile",
    "homology_from_ranks",
    "laplacian",
    "make_special_orthogonal",
    "normal_form_residual",
    "project_to_complex",
    "rank_decision",
    "ranks_from_homology",
    "stable_singular_values",
    "svd_by_laplacian",
    "svd_by_projection",
    "svd_two_precision",
    "validate",
]
