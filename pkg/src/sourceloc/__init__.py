"""Source location and rooted network augmentation at desk scale.

Connectivity queries run as node-capacitated flows; the solvers are the
greedy submodular cover (directed star augmentation and source location),
the staged undirected biset-transversal pipeline, and the two-phase double
cover for flow-cost budgets.  Exact enumeration oracles anchor every
approximation claim.
"""

from .bounds import harmonic, rooted_stage_degree_cap, sequential_edge_bound, \
    sequential_node_bound, stage_degree_cap
from .core import (Biset, BisetFamily, CandidateEdge, Demand, Graph,
                   InstanceError, SNAInstance, SSLInstance, all_bisets,
                   biset_intersect, biset_minus, biset_union, covers,
                   d_dependent, delta, delta_count, is_d_uncrossable,
                   is_t_uncrossable, minimal_members, t_dependent)
from .flow import (ArcNetwork, CutCertificate, connectivity, cut_disconnects,
                   lambda_pq, lambda_pq_closed_form, lambda_q, lambda_q_pair,
                   max_flow, min_cost_flow, min_cut_certificate,
                   min_flow_cost, split_transform)
from .bisetcover import (StageReport, TransversalProblem, TransversalResult,
                         biset_requirement, deficiency, greedy_transversal,
                         menger_feasible, min_cut_biset, minimal_tight_bisets,
                         solve_ssl_sequential, solve_star_dsna,
                         solve_star_sna_sequential,
                         star_cover_from_transversal, tight_bisets,
                         validate_single_step)
from .oracle import (ExactResult, OracleCapError, SuiteSizes, exact_sna,
                     exact_ssl, exact_transversal, property_suite)
from .reductions import (NodeSplitMap, RootedReductionMap, SetCoverGadget,
                         node_split_reduction, rooted_sna_to_ssl,
                         set_cover_gadget, set_cover_optimum,
                         ssl_to_rooted_sna)
from .submodular import (CoverProblem, GreedyTrace, SolveResult, SolverError,
                         edge_progress, greedy_cover, node_progress,
                         sna_feasible, solve_double_cover, solve_sna_greedy,
                         solve_ssl_flow_bounds, solve_ssl_greedy, ssl_feasible)
from .values import INF, NEG_INF, format_number, parse_number

__version__ = "0.1.0"
