"""Exact integer homology, bad-prime certification and field persistence
for Rips and Čech filtrations under Euclidean and Finsler-type metrics."""

from ._kernels import BACKEND
from .complexes import (
    Filtration,
    SimplicialComplex,
    build_cech,
    build_filtration,
    build_rips,
    close_under_faces,
    simplexwise_filtration,
)
from .homology import (
    FieldSpec,
    HomologyGroup,
    boundary_matrix,
    field_homology,
    integer_homology,
    uct_check,
)
from .metric import MetricSpec, PointCloud, check_norm_axioms, distance, eval_norm
from .obstruction import (
    capture_obstruction,
    find_empty_simplices,
    rips_representability,
    verify_vanishing,
)
from .persistence import Barcode, compare_barcodes, persistent_homology, rank_invariant
from .primes import PrimeReport, bad_primes_for_degree, bad_primes_for_filtration, certify_good_prime
from .snf import IntegerMatrix, SNFResult, cokernel_structure, elementary_divisors_via_minors, smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Barcode",
    "FieldSpec",
    "Filtration",
    "HomologyGroup",
    "IntegerMatrix",
    "MetricSpec",
    "PointCloud",
    "PrimeReport",
    "SNFResult",
    "SimplicialComplex",
    "bad_primes_for_degree",
    "bad_primes_for_filtration",
    "boundary_matrix",
    "build_cech",
    "build_filtration",
    "build_rips",
    "capture_obstruction",
    "certify_good_prime",
    "check_norm_axioms",
    "close_under_faces",
    "cokernel_structure",
    "compare_barcodes",
    "distance",
    "elementary_divisors_via_minors",
    "eval_norm",
    "field_homology",
    "find_empty_simplices",
    "integer_homology",
    "persistent_homology",
    "rank_invariant",
    "rips_representability",
    "simplexwise_filtration",
    "smith_normal_form",
    "uct_check",
    "verify_vanishing",
]
