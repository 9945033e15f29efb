"""Cellular embeddings of small multigraphs and closed trivalent
spin-network evaluation on the sphere and torus."""

from .scalars import Deformation, DomainError, Surd
from .graphs import (FaceTrace, Graph, RotationScheme, SchemeBoundExceeded,
                     bipartite_genus, classify_k33, embedding_genus,
                     enumerate_schemes, graph_genus, is_embedded_cycle,
                     is_planar, set_value, trace_faces)
from .minors import has_forbidden_minor
from .recoupling import (Spin, a_factor, admissible, coupling_coefficient,
                         loop_value, ninej, quantum_integer, sixj, theta,
                         toroidal_symbol, twist_factor)
from .expressions import Expression, evaluate_numeric, from_sexpr, to_sexpr
from .network import (IrreducibleNetwork, ReductionTrace, SpinNetwork,
                      apply_crossing, decompose, evaluate_phase_factor,
                      excise_triangle, reduce_bigon, smallest_embedded_cycle)
from .textio import parse_graph, to_dot

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
