"""Biased complete graphs with a vertex order: canonical families, labellings and searches."""
from .kernels import BACKEND
from .circuits import (
    Circuit,
    FourPattern,
    SpanningFilter,
    ThetaSubgraph,
    canonicalize,
    classify_four_circuit,
    delta,
    enumerate_circuits,
    enumerate_paths,
    enumerate_thetas,
    is_oscillating,
    similar,
)
from .instance import (
    BiasedInstance,
    ValidationReport,
    equals_instance,
    is_consistent,
    make_ka,
    make_ko,
    make_ku,
    read_instance,
    restrict,
    validate,
    write_instance,
)
from .labelling import (
    CyclicGroupElement,
    CyclicLabelling,
    Labellability,
    Orientation,
    check_not_group_labellable,
    derive_instance,
    gamma_a,
    gamma_o,
    gamma_u,
    normalize_first_vertex,
    pi,
    recognize_delta_multiples,
    reorient_edge,
    scale_vertex,
)
from .omega import OmegaGraph, build_omega, omega_adjacent, verify_omega_components
from .search import (
    Classification,
    QuadColor,
    classify_constant,
    color_quadruple,
    find_uniform_quads,
    ramsey_upper_bound,
    search_unavoidable,
)
from .bipartite import BipartiteBiasedInstance, find_consistent_biclique, validate_bipartite
from .counterexample import (
    OrderedPartition,
    build_bq,
    circuit_cij,
    enumerate_partitions,
    verify_counterexample_theorem,
)

__version__ = "0.1.0"
