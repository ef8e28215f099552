"""Exact influence and Fourier-Walsh analysis on finite product spaces."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .core import (
    DecisionTree,
    Domain,
    Leaf,
    Node,
    TabulatedFunction,
    eval_tree,
    expectation,
    tree_to_table,
    variance,
)
from .discretize import DiscretizationReport, check_certificates, discretize
from .errors import DomainError, InfluenceLabError, ResourceError, StateError
from .extremal import JuntaDistanceResult, gen_counterexample, gen_example1, junta_distance
from .fourier import (
    EfronSteinDecomposition,
    WalshSpectrum,
    efron_stein,
    noise_operator,
    p_norm,
    walsh_spectrum,
)
from .inequalities import (
    InequalityReport,
    check_analog,
    check_bonami_beckner,
    check_tree_influence,
    check_variance_bound,
    kkl_constant_probe,
)
from .influence import (
    InfluenceProfile,
    influence,
    max_influence_coordinate,
    total_influence,
    total_variational_influence,
    variational_influence,
)
from .subcube import (
    GreedyStep,
    GreedyTrace,
    bourgain_probe,
    greedy_subcube,
    is_increasing,
    restrict_top,
    restriction_search,
)
from .treebuilder import BuildDiagnostics, BuildParams, build_tree, node_accounting, tree_error

__version__ = "0.1.0"
