"""Executable topological expansion: sign-string index sets, stretching
trees, finite coproduct topologies, iterated integral means and
box-counting dimension."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import DomainError, SizeLimitError, TopexError
from .index_algebra import (ChartRef, MapToken, SignString, chart_composition, chart_index, children,
                            enumerate_lambda, format_composition, parent, sign_partition, sign_string_for_chart)
from .stretching import (EpsilonSchedule, ExpansionTree, Interval, OpenBox, build_tree, coproduct_measure,
                         stretched_box, stretched_interval, union_extent, verify_stretching_axioms)
from .finite_topology import (CoproductSpace, FamilyPresentation, FiniteSpace, check_expanding,
                              check_refinement, coproduct, encode_stretching_tree, expand_open, is_finer,
                              is_topology, random_presentation, subspace, verify_fractal_family)
from .mean_functions import (DeltaSchedule, GraphPoint, IteratedMean, SampledFunction, WeierstrassParams,
                             graph_points, iterated_mean, extra_level_convergence, mean, mean_derivative_check,
                             translate, weierstrass)
from .dimension import BoxCountResult, RasterGrid, box_count, rasterize_union, stretched_union_dimension
