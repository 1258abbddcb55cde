"""Exact analysis of finite-dimensional BiHom-Leibniz superalgebras.

Root-space decompositions with respect to an abelian subalgebra, connections
of roots and their classes, the ideals built from those classes, and a set of
simplicity diagnostics, all over the rationals.
"""

__version__ = "0.1.0"

from .linalg import Matrix, Subspace, echelonize, nullspace, parse_scalar, format_scalar, span
from .algebra import (SuperAlgebra, Verdict, ValidationReport, validate_structure, yau_twist,
                      ideal_closure, compute_J, classify_subspace, annihilator, replay)
from .roots import (RootFunctional, SplitDecomposition, find_root_system, root_space,
                    root_twist, verify_root_lemmas, check_maximal_abelian)
from .connections import (ConnectionChain, ConnectionClass, RootContext, OrbitDivergence,
                          root_orbit, find_connection, connection_classes, find_nJ_connection,
                          replay_chain)
from .decomposition import (ClassIdeal, JPartition, class_ideal, primary_decomposition,
                            direct_sum_check, maximal_length_check, lambda_partition_J,
                            root_multiplicativity_check, lie_annihilator, simplicity_report)
from .io import LoadError, load_algebra, loads_algebra, dump_algebra, dumps_algebra, load_fixture

__all__ = [name for name in dir() if not name.startswith("_")]
