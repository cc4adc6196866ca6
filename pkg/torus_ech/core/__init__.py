"""Core computations package.

Aggregates the exact arithmetic, orbit model, index engine, spectral layer, ellipsoid
oracle and verification harness into one import surface.
"""

from torus_ech.core.ellipsoid import (
    EllipsoidGenerator,
    EllipsoidParams,
    crosscheck_spectrum,
    crosscheck_unknot_filtration,
    crosscheck_windows,
    ellipsoid_capacities,
    ellipsoid_filtration,
    ellipsoid_generators,
    unknot_filtered_group,
    unknot_threshold,
)
from torus_ech.core.exact import (
    PerturbedValue,
    Rational,
    Staircase,
    StaircaseEntry,
    build_staircase,
    format_perturbed,
    format_rational,
    parse_perturbed,
    perturbed_floor,
    repeat_count,
    staircase_sequence,
)
from torus_ech.core.harness import SuiteOptions, run_suite, verify_all, verify_identities
from torus_ech.core.index import (
    ChernClass,
    EuclideanSplit,
    IndexComponents,
    binding_index,
    cz,
    cz_via_ledger,
    cz_via_monodromy,
    derive_cover_self_pairing,
    ech_index,
    ech_index_components,
    q_pairing,
    q_pairing_binding,
    relative_chern,
    self_linking,
    total_cz,
    total_cz_direct,
)
from torus_ech.core.orbits import (
    EMPTY_CURRENT,
    FibrationParams,
    Orbit,
    ReebCurrent,
    action,
    degree,
    enumerate_generators,
    from_lattice_point,
    generators_of_degree,
    lattice_point,
    linking,
    relative_degree,
)
from torus_ech.core.reports import FailureRecord, VerificationReport
from torus_ech.core.spectral import (
    GradedGenerator,
    RotMode,
    SpectrumEntry,
    action_filtered_group,
    certified_degree_bound,
    ech_spectrum,
    graded_complex,
    graded_generator,
    knot_filtered_group,
    knot_filtration,
    knot_threshold,
    knot_thresholds,
)
from torus_ech.core.trivializations import (
    Cover,
    MonodromyTable,
    Trivialization,
    TrivOffsetLedger,
    get_ledger,
    monodromy_angle,
    monodromy_table,
    rotation_number,
    triv_offset,
)

__all__ = [
    # exact arithmetic
    "PerturbedValue",
    "Rational",
    "Staircase",
    "StaircaseEntry",
    "build_staircase",
    "format_perturbed",
    "format_rational",
    "parse_perturbed",
    "perturbed_floor",
    "repeat_count",
    "staircase_sequence",
    # orbit model
    "EMPTY_CURRENT",
    "FibrationParams",
    "Orbit",
    "ReebCurrent",
    "action",
    "degree",
    "enumerate_generators",
    "from_lattice_point",
    "generators_of_degree",
    "lattice_point",
    "linking",
    "relative_degree",
    # trivializations and index
    "ChernClass",
    "Cover",
    "EuclideanSplit",
    "IndexComponents",
    "MonodromyTable",
    "Trivialization",
    "TrivOffsetLedger",
    "binding_index",
    "cz",
    "cz_via_ledger",
    "cz_via_monodromy",
    "derive_cover_self_pairing",
    "ech_index",
    "ech_index_components",
    "get_ledger",
    "monodromy_angle",
    "monodromy_table",
    "q_pairing",
    "q_pairing_binding",
    "relative_chern",
    "rotation_number",
    "self_linking",
    "total_cz",
    "total_cz_direct",
    "triv_offset",
    # spectral
    "GradedGenerator",
    "RotMode",
    "SpectrumEntry",
    "action_filtered_group",
    "certified_degree_bound",
    "ech_spectrum",
    "graded_complex",
    "graded_generator",
    "knot_filtered_group",
    "knot_filtration",
    "knot_threshold",
    "knot_thresholds",
    # ellipsoid oracle
    "EllipsoidGenerator",
    "EllipsoidParams",
    "crosscheck_spectrum",
    "crosscheck_unknot_filtration",
    "crosscheck_windows",
    "ellipsoid_capacities",
    "ellipsoid_filtration",
    "ellipsoid_generators",
    "unknot_filtered_group",
    "unknot_threshold",
    # verification
    "FailureRecord",
    "SuiteOptions",
    "VerificationReport",
    "run_suite",
    "verify_all",
    "verify_identities",
]
