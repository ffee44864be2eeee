"""Graph kernels for molecular graphs, with a precomputed-kernel SVM and cross-validation."""
from .graph import DirectProductGraph, LabeledGraph, adjacency_matrix, direct_product, validate_graph
from .gram import GramMatrix, check_psd, compute_gram, graph_rbf, kernel_metric, scale_gram

__version__ = "0.1.0"
