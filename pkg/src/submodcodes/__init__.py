"""Spherical codes of submodules of free modules over finite chain rings."""
from .chain_ring import BudgetExceeded, ChainRing, RingElement, make_ring
from .codes import (
    Code,
    free_code,
    perm_cardinality_bound,
    permutation_code,
    sperner_code,
    sperner_lower_bound,
    star_configuration,
)
from .counting import EDType, IntPolynomial, b_epsilon, ball_polynomial, grassmannian_count, sphere_polynomial
from .kernels import BACKEND
from .metric import DistanceMatrix, dist, half_distance_matrix
from .search import build_graph, card_exact, certify_theorems, dist_exact
from .submodule import (
    HomothetyClass,
    Submodule,
    class_of,
    enumerate_boundary,
    enumerate_classes,
    enumerate_submodules,
    from_generators,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BudgetExceeded", "ChainRing", "Code", "DistanceMatrix", "EDType", "HomothetyClass",
    "IntPolynomial", "RingElement", "Submodule", "b_epsilon", "ball_polynomial", "build_graph",
    "card_exact", "certify_theorems", "class_of", "dist", "dist_exact", "enumerate_boundary",
    "enumerate_classes", "enumerate_submodules", "free_code", "from_generators", "grassmannian_count",
    "half_distance_matrix", "make_ring", "perm_cardinality_bound", "permutation_code", "sperner_code",
    "sperner_lower_bound", "sphere_polynomial", "star_configuration",
]
