"""Kinetic two-velocity traffic model and LWR limit on a merging network.

Core pieces: concave fundamental diagrams with flux inverses (diagram),
the two-speed kinetic solver in the invariants (w, Z) (kinetic), the scalar
Godunov solver (lwr), fair/priority junction couplings for both models
(junction), boundary-layer analysis of the small-epsilon limit (layers),
the three-road simulation engine (network), scenario presets, snapshot
files and comparison metrics (snapshots), and a CLI (cli).
"""

from .diagram import FundamentalDiagram, lwr_diagram
from .junction import (
    JunctionTrace,
    KineticMergeOutcome,
    MacroMergeOutcome,
    kinetic_fair_merge,
    kinetic_junction_fluxes,
    kinetic_priority_merge,
    kinetic_priority_merge_truncated,
    macro_fair_merge,
    macro_priority_merge,
    max_truncation,
)
from .kinetic import (
    CellState,
    CFLViolation,
    InterfaceFlux,
    InvariantRegionError,
    eigenvalues,
    godunov_flux,
    interface_state,
    relax_exact,
    transport_step,
)
from .layers import (
    BoundaryResolution,
    CouplingVerdict,
    FixpointReport,
    HalfRiemannClass,
    LayerProblem,
    LayerSide,
    LayerTrajectory,
    MatchResult,
    classify_fixpoints,
    classify_half_riemann,
    enumerate_layer_couplings,
    integrate_layer,
    left_boundary_condition,
    match_fair_merge,
    matching_report,
    right_boundary_condition,
    settles_to,
)
from .lwr import scalar_godunov_flux, scalar_step, wave_speed_bound
from .network import (
    MassLedger,
    MergeNode,
    NetworkState,
    RoadGrid,
    RoadSnapshot,
    RunResult,
    SimulationConfig,
    Snapshot,
    advance,
    initialize,
    junction_outcome,
    run,
    stable_dt,
    take_snapshot,
    total_mass,
)
from .presets import PRESETS, Marker, ScenarioPreset, get_preset, preset_names
from .snapshots import (
    ComparisonReport,
    MarkerResult,
    check_markers,
    compare_runs,
    emit_run,
    evaluate_marker,
    junction_value,
    read_run,
    shock_position,
)
from .config import ConfigError, parse_config

__version__ = "0.1.0"
