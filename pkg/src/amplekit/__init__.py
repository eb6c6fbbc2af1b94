"""amplekit: build, verify and stress-test ample and conic simplicial complexes."""

from .complexes import (
    AmbientContext,
    SimplicialComplex,
    cone,
    count_subcomplexes,
    enumerate_subcomplexes,
    external_simplexes,
    is_isomorphic,
    join,
    read_complex,
    relabeled,
    write_complex,
)
from .ampleness import (
    AmpleVerdict,
    ConicVerdict,
    ample_witness,
    dedekind_reduced,
    extend_embedding,
    is_r_ample,
    is_r_conic,
    link_restricted,
    max_ampleness,
    max_conicity,
    min_vertices_for_ample,
    stars_intersection,
)
from .constructions import (
    MedialSample,
    PaleyResidueSet,
    PrimeFieldSpec,
    SearchResult,
    SplitMix64,
    TowerStage,
    ampleness_failure_bound,
    barmak_tower,
    example_thirteen,
    existence_threshold,
    least_primitive_root,
    medial_probability,
    medial_sample,
    one_vertex_extension,
    paley_complex,
    paley_parameter_check,
    paley_residues,
    projective_plane,
    rado_tower,
    search_ample,
    sphere_join,
)
from .topology import (
    BettiReport,
    ChainComplexMatrices,
    ConnectivityReport,
    CycleSurvival,
    FilledDisc,
    MedialTcBounds,
    betti_numbers,
    connectivity_report,
    cycle_survives,
    dimension_threshold,
    fill_loop,
    integral_torsion,
    internal_vertex_bound,
    medial_tc_calculator,
    tc_upper_bound,
    triangle_bound,
)
from .experiments import (
    DiscFillResult,
    ExperimentConfig,
    ExperimentReport,
    RemovalFamily,
    connectivity_after_removal_bound,
    disc_fill_experiment,
    empirical_dimension_and_betti,
    partition_experiment,
    remove_family,
    resilience_experiment,
    resilience_guarantee,
    sample_removal_family,
    witness_census,
)

__version__ = "0.1.0"
