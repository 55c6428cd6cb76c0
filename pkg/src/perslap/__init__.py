"""Persistent Laplacians of simplicial pairs and filtrations."""
from .complex import (Filtration, ParseError, SimplicialComplex, SimplicialPair, boundary_matrix,
                      boundary_vector, make_pair, parse_complex, parse_filtration, serialize_complex,
                      serialize_filtration)
from .linalg import DEFAULT_TOL, Spectrum, Tolerances, column_reduce, pseudoinverse, schur_complement
from .laplacian import betti, down_laplacian, hodge_laplacian, up_laplacian
from .persistent import (PersistentLaplacian, persistent_betti, persistent_laplacian,
                         persistent_laplacian_reduction, persistent_laplacian_schur, persistent_spectrum)
from .filtration import (all_pairs_up_laplacians, interleaving_distance_filtrations,
                         interleaving_distance_functions, persistent_eigenvalue_function)
from .resistance import (CurrentGenerator, NotACurrentGenerator, effective_resistance_graph,
                         kron_preservation_check, simplicial_effective_resistance)
from .cheeger import GuardExceeded, cheeger_report, persistent_cheeger, strong_persistent_cheeger

__version__ = "0.1.0"
