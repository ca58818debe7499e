"""Combinatorial engine for free, flat and virtual knot diagrams.

Gauss (chord) diagrams with a Reidemeister move calculus, crossing parities
valued in abelian groups, Carter-surface homology, finite presentations of
the crossing-label group of move-graph regions, the Z2 state-sum bracket,
and minimality certificates.
"""

from .diagrams import (
    ChordDiagram,
    DecoratedDiagram,
    SmoothedState,
    as_diagram,
    components,
    initial_state,
    parse_code,
    parse_flat_code,
    parse_free_code,
    parse_signed_code,
    smooth,
    to_dot,
)
from .invariants import (
    BracketValue,
    MinimalityCertificate,
    bracket_eq,
    delete_odd,
    enumerate_diagrams,
    minimality_certificate,
    parity_bracket,
)
from .moves import (
    Move,
    MoveTrace,
    PartialBijection,
    apply_move,
    enumerate_moves,
    is_r2_irreducible,
    r2_reduce,
    replay_trace,
)
from .parity import (
    AbelianGroup,
    ParityAssignment,
    Polygon,
    Pseudoparity,
    Report,
    find_polygons,
    gaussian_parity,
    polygon_sum,
    pseudoparity_of,
    verify_axioms,
    verify_pseudoparity,
)
from .search import Inconclusive, SearchBounds, bfs_reachable, equivalent_bounded, fuzz_trace
from .surface import (
    CarterSurface,
    GraphHomology,
    H1Class,
    Z2ChainComplex,
    carter_surface,
    characteristic_parity_a,
    characteristic_parity_link,
    checkerboard,
    graph_quotient_homology,
    h1,
    half_cycle,
    homological_parity,
    homology_class,
    intersection_form,
    knot_class,
    leads_to,
    path_class,
    surface_report,
)
from .universal import (
    GroupPresentation,
    MoveGraphRegion,
    RelationSystem,
    collect_relations,
    explore,
    factor_check,
    local_universal_group,
    region_assignments,
)

__version__ = "0.1.0"
