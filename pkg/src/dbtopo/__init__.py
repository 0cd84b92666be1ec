"""Topology of decision boundaries: active label queries, labeled filtrations,
persistence diagrams, bottleneck comparison, and closed-form complexity bounds."""

from .active import QueryLog, mssp, passive_run, s2_run
from .bounds import (
    BoundsScenario,
    ScanRow,
    active_query_bound,
    annulus_scenario,
    complexity_ratio_scan,
    covering_number_circle,
    epsilon_interval,
    feasible_gamma,
    passive_sample_bound,
)
from .complexes import (
    FiltrationComplex,
    LocalScales,
    Simplex,
    betti_window_scan,
    build_lc_complex,
    build_lslvr_filtration,
    local_scales,
    min_enclosing_ball_radius,
)
from .datasets import (
    BoundaryDescriptor,
    CircleComponent,
    LabeledPointCloud,
    LabelOracle,
    default_two_circles_geometry,
    generate_annulus_cloud,
    generate_two_circles,
)
from .errors import (
    DbTopoError,
    InfeasibleScenarioError,
    InsufficientDataError,
    InvalidFiltrationError,
    InvalidGeometryError,
    InvalidParameterError,
    ParseError,
)
from .experiments import ground_truth_diagram, lslvr_diagram, queried_diagram, sweep
from .graph import (
    NeighborGraph,
    build_knn_graph,
    build_radius_graph,
    connected_components,
    cut_structures,
    shortest_path,
)
from .metrics import bottleneck_distance, select_min_distance
from .persistence import (
    PersistenceDiagram,
    PersistencePair,
    betti0_unionfind,
    betti_at,
    compute_persistence,
    diagram_from_json,
    diagram_to_json,
)
from .selection import (
    ClassifierOutputs,
    boundary_diagram,
    ensemble_average,
    ensemble_labels,
    knn_predict,
    validation_select,
)

__version__ = "0.1.0"

__all__ = [
    "QueryLog",
    "mssp",
    "passive_run",
    "s2_run",
    "BoundsScenario",
    "ScanRow",
    "active_query_bound",
    "annulus_scenario",
    "complexity_ratio_scan",
    "covering_number_circle",
    "epsilon_interval",
    "feasible_gamma",
    "passive_sample_bound",
    "FiltrationComplex",
    "LocalScales",
    "Simplex",
    "betti_window_scan",
    "build_lc_complex",
    "build_lslvr_filtration",
    "local_scales",
    "min_enclosing_ball_radius",
    "BoundaryDescriptor",
    "CircleComponent",
    "LabeledPointCloud",
    "LabelOracle",
    "default_two_circles_geometry",
    "generate_annulus_cloud",
    "generate_two_circles",
    "DbTopoError",
    "InfeasibleScenarioError",
    "InsufficientDataError",
    "InvalidFiltrationError",
    "InvalidGeometryError",
    "InvalidParameterError",
    "ParseError",
    "ground_truth_diagram",
    "lslvr_diagram",
    "queried_diagram",
    "sweep",
    "NeighborGraph",
    "build_knn_graph",
    "build_radius_graph",
    "connected_components",
    "cut_structures",
    "shortest_path",
    "bottleneck_distance",
    "select_min_distance",
    "PersistenceDiagram",
    "PersistencePair",
    "betti0_unionfind",
    "betti_at",
    "compute_persistence",
    "diagram_from_json",
    "diagram_to_json",
    "ClassifierOutputs",
    "boundary_diagram",
    "ensemble_average",
    "ensemble_labels",
    "knn_predict",
    "validation_select",
]
