"""Persistent-homology representations, topological distances and losses for
weighted networks and small point clouds."""

__version__ = "0.1.0"

from .classical import (SpdMatrix, canonical_correlation, graph_match_bound,
                        log_euclidean_distance, log_euclidean_mean,
                        matrix_norm_distance)
from .diagrams import Barcode, PersistenceDiagram
from .distances import (bottleneck, gh_distance, is_ultrametric, ks_distance,
                        single_linkage_matrix, wasserstein)
from .filtration import (BettiCurve, GraphBarcode, MorseSignal, betti_curve,
                         default_death_level, graph_barcode, maximal_filtration,
                         morse_pairs_1d, node_filtration, tree_betti_coordinates)
from .inference import (PermutationResult, TranspositionState, TwoSampleProblem,
                        ks_pvalue, pairwise_distances, permutation_test,
                        transposition_step)
from .networks import (BinaryNetwork, DataError, Hypergraph, MetricReport,
                       PointCloud, WeightedNetwork, check_metric,
                       corr_to_weight, hypergraph_adjacency, threshold)
from .simplicial import (BoundaryOperator, FilteredComplex, SimplicialComplex,
                         betti_via_hodge, betti_via_rank, boundary_matrix, dtm,
                         hodge_laplacian, maxmin_landmarks,
                         network_filtered_complex, persistence, rips_complex,
                         witness_complex)
from .summaries import (ImageGrid, PersistenceImage, apf, entropy, landscape,
                        landscape_curve, persistence_image)
from .topoloss import (BirthDeathDecomposition, RegressionProblem,
                       RegressionResult, birth_death_decomposition,
                       pd_regularizer, top_loss, topo_regression)

__all__ = [
    "__version__",
    "apf",
    "Barcode",
    "betti_curve",
    "betti_via_hodge",
    "betti_via_rank",
    "BettiCurve",
    "BinaryNetwork",
    "birth_death_decomposition",
    "BirthDeathDecomposition",
    "bottleneck",
    "boundary_matrix",
    "BoundaryOperator",
    "canonical_correlation",
    "check_metric",
    "corr_to_weight",
    "DataError",
    "default_death_level",
    "dtm",
    "entropy",
    "FilteredComplex",
    "gh_distance",
    "graph_barcode",
    "GraphBarcode",
    "graph_match_bound",
    "hodge_laplacian",
    "Hypergraph",
    "hypergraph_adjacency",
    "ImageGrid",
    "is_ultrametric",
    "ks_distance",
    "ks_pvalue",
    "landscape",
    "landscape_curve",
    "log_euclidean_distance",
    "log_euclidean_mean",
    "matrix_norm_distance",
    "maximal_filtration",
    "maxmin_landmarks",
    "MetricReport",
    "morse_pairs_1d",
    "MorseSignal",
    "network_filtered_complex",
    "node_filtration",
    "pairwise_distances",
    "pd_regularizer",
    "persistence",
    "persistence_image",
    "PersistenceDiagram",
    "PersistenceImage",
    "PermutationResult",
    "permutation_test",
    "PointCloud",
    "RegressionProblem",
    "RegressionResult",
    "rips_complex",
    "SimplicialComplex",
    "single_linkage_matrix",
    "SpdMatrix",
    "threshold",
    "top_loss",
    "topo_regression",
    "TranspositionState",
    "transposition_step",
    "tree_betti_coordinates",
    "TwoSampleProblem",
    "wasserstein",
    "WeightedNetwork",
    "witness_complex",
]
