"""Complexity estimation for graphon (W-random graph) models.

Estimates neighborhood distances between nodes from one adjacency matrix,
plug-in covering/packing numbers and Minkowski dimension, and tests whether
the packing number at a radius is at most ``K``. Analytic families come with
oracle distances so every estimator can be checked against ground truth.
"""
__version__ = "0.1.0"

from .errors import (DegenerateInstance, DoubleSparsification, GraphonError,
                     InvalidArgument, RadiusOutOfRange, TooLargeForExact,
                     UnsupportedOracle)
from .model import (SBM, AdjacencyMatrix, ErdosRenyi, GeometricGraph, GraphonSpec,
                    HolderCube, LatentSample, LowerBoundSBM, lower_bound_sbm,
                    sample_graph, sample_latents, sparsify)
from .covering import CoverResult, greedy_cover, greedy_packing
from .ground_truth import (QuadratureConfig, TrueDistanceMatrix, exact_covering_number,
                           exact_packing_number, reference_dimension, rgg_distance,
                           sbm_approximation, true_distance_matrix)
from .distance import (DistanceEstimate, ErrorBudget, InnerProductMatrix, NeighborIndex,
                       error_budget, estimate_distances, nearest_neighbor_index,
                       proxy_f_hat, row_inner_products, sparse_rho_check)
from .complexity import (DimensionEstimate, RadiusSweep, correlation_integral,
                         covering_estimate, dimension_radius, dimension_radius_sparse,
                         estimate_dimension, sweep_dimension_curve)
from .packing_test import TestConfig, TestResult, check_w_eta_beta, run_packing_test
