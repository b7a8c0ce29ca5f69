"""Principal feature analysis: select the independent argument features of a
dataset via pairwise independence tests and minimal-cut graph dissection."""

from .analysis import (
    PfaConfig,
    PfaResult,
    explain_feature,
    filter_by_mi,
    filter_relevant,
    robust_intersection,
    run_pfa,
)
from .binning import DiscretizedFeature, discretize, discretize_all
from .dataset import Dataset, DatasetError, load_csv, save_csv, subsample
from .depgraph import (
    Graph,
    IndependenceCache,
    build_graph,
    connected_components,
    is_complete,
)
from .dissect import (
    CompleteGraphError,
    DissectionResult,
    Removal,
    brute_force_min_node_cut,
    dissect,
    min_node_cut,
)
from .stats import (
    ContingencyTable,
    IndependenceVerdict,
    chi_square_p_value,
    chi_square_statistic,
    contingency,
    is_independent,
    mutual_information,
    regularized_upper_gamma,
)
from .synth import DagSpec, SynthSpec, generate, random_dag, random_graph

__all__ = [
    "CompleteGraphError",
    "ContingencyTable",
    "DagSpec",
    "Dataset",
    "DatasetError",
    "DiscretizedFeature",
    "DissectionResult",
    "Graph",
    "IndependenceCache",
    "IndependenceVerdict",
    "PfaConfig",
    "PfaResult",
    "Removal",
    "SynthSpec",
    "brute_force_min_node_cut",
    "build_graph",
    "chi_square_p_value",
    "chi_square_statistic",
    "connected_components",
    "contingency",
    "discretize",
    "discretize_all",
    "dissect",
    "explain_feature",
    "filter_by_mi",
    "filter_relevant",
    "generate",
    "is_complete",
    "is_independent",
    "load_csv",
    "min_node_cut",
    "mutual_information",
    "random_dag",
    "random_graph",
    "regularized_upper_gamma",
    "robust_intersection",
    "run_pfa",
    "save_csv",
    "subsample",
]
