"""Finite marked cubical complexes over the four cube categories.

Operator calculus (normal forms for faces, degeneracies, connections),
normalized presheaf complexes with markings, the free/forget/cofree
flavor-change functors and triangulation, comical lifting machinery,
and weak/strong connection structures with their synthesis algorithms.
"""

from .opcalc import (
    FLAVOR_BOTH,
    FLAVOR_NEG,
    FLAVOR_NONE,
    FLAVOR_POS,
    NormalForm,
    TailForm,
    all_epis,
    all_monos,
    compose,
    critical_edge,
    critical_faces,
    epi_mono_factor,
    format_nf,
    identity_nf,
    is_critical_face,
    mono_from_fixed,
    parse_nf,
    run_nf,
    tail_form,
)
from .complexes import (
    ComplexError,
    CubeRef,
    MCMap,
    MCSet,
    PushoutResult,
    boundary,
    boundary_inclusion,
    comical_cube,
    comical_marking_extension,
    comical_open_box_inclusion,
    compose_maps,
    empty_complex,
    enumerate_maps,
    find_iso,
    generated_subcomplex,
    identity_map,
    inclusion_map,
    isomorphic,
    make_mcset,
    maps_equal,
    marked_cube,
    marker,
    open_box,
    pushout,
    pushout_product,
    skeleton,
    standard_cube,
    subcomplex,
    tensor,
    tensor_indexed,
    tensor_map,
)
from .functors import (
    FlavorInclusion,
    MSMap,
    MSSet,
    cofree,
    core,
    counit_map,
    cubify,
    flat,
    flavor_ez,
    forget_connections,
    forget_connections_indexed,
    forget_markings,
    free_connections,
    free_connections_map,
    sharp,
    triangulate,
    triangulate_map,
    trivialize,
    unit_map,
)
from .homotopy import (
    BruteLiftOracle,
    ComicalVerdict,
    FillingOracle,
    FreeFillingComplex,
    LiftProblem,
    RLPVerdict,
    bounded_fibrant_approx,
    find_lift,
    generating_family,
    has_rlp,
    is_comical_set,
    terminal_complex,
    terminal_map,
)
from .connect import (
    ApproximationTable,
    QuotientResult,
    SCSViolation,
    SynthesisError,
    WCSTable,
    check_scs,
    extend_wcs,
    ez_decompose_wrt,
    make_wcs_table,
    not_surj_quotient,
    promote_scs,
    promote_scs_map,
    restrict_wcs,
    synthesize_on_cube,
    synthesize_scs,
    validate_approx,
    validate_wcs,
    wcs_from_counit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
