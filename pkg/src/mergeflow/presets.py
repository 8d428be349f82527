"""Bundled merge scenarios with their expected outcomes.

Each preset fixes the three initial densities and the coupling pair (kinetic
coupling and its macroscopic counterpart) and declares expected markers:
(quantity, value, tolerance) assertions evaluated after a paired
kinetic + LWR run.  Marker quantities are dotted paths, see
snapshots.evaluate_marker.

Expected junction values are the steady states of the merge:

* fair merges force a common junction density rho_0 on all three roads, so
  the junction-adjacent cells of roads without a decaying layer sit exactly
  at rho_0 (rho_plus(C) for flux-limited roads, rho_minus(C1+C2) for the
  free-flowing outgoing road);
* priority merges block road 2 when road 1 saturates the outgoing capacity
  (trace -> 1) and otherwise leave equilibrium traces rho_plus(C2);
* macro.C* markers pin the supply/demand fluxes exactly (1e-12), evaluated
  from the LWR traces at the final time.

Junction cells inside a decaying boundary layer are deliberately not pinned
to rho_0: the first cell averages the layer profile, which at epsilon = dx
sits visibly below the interface value.  Flux-type markers (junction_q) are
used there instead, with coarser tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["Marker", "ScenarioPreset", "PRESETS", "get_preset", "preset_names"]


@dataclass(frozen=True)
class Marker:
    quantity: str
    value: float
    tolerance: float


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    densities: tuple[float, float, float]
    coupling: str  # macroscopic coupling: "fair" or "priority"
    kinetic_coupling: str  # "fair", "priority" or "priority_truncated"
    delta: float
    description: str
    markers: tuple[Marker, ...] = field(default_factory=tuple)


def _rho_plus(C: float) -> float:
    return 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * C))


def _rho_minus(C: float) -> float:
    return 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * C))


_RHO0_FAIR_1 = _rho_minus(0.09 + 0.1275)  # 0.3197...
_RHO0_FAIR_2 = _rho_plus(0.125)  # 0.85355...
_RHO0_FAIR_3 = _rho_plus(0.25 - 0.0475)  # 0.71794...
_RHO0_FAIR_4 = _rho_plus(0.08)  # 0.91231...


PRESETS: tuple[ScenarioPreset, ...] = (
    ScenarioPreset(
        name="merge_fair_1",
        densities=(0.1, 0.15, 0.2),
        coupling="fair",
        kinetic_coupling="fair",
        delta=0.5,
        description="Fair merge, light traffic: all demands pass, road 3 "
        "fills to rho_minus(C1 + C2).",
        markers=(
            Marker("kinetic.road3.junction_rho", _RHO0_FAIR_1, 2e-3),
            Marker("lwr.road3.junction_rho", _RHO0_FAIR_1, 2e-3),
            Marker("macro.C1", 0.09, 1e-12),
            Marker("macro.C2", 0.1275, 1e-12),
            Marker("macro.C3", 0.2175, 1e-12),
            Marker("compare.road1.l1", 0.0, 0.02),
            Marker("compare.road2.l1", 0.0, 0.02),
            Marker("compare.road3.l1", 0.0, 0.02),
        ),
    ),
    ScenarioPreset(
        name="merge_fair_2",
        densities=(0.7, 0.6, 0.2),
        coupling="fair",
        kinetic_coupling="fair",
        delta=0.5,
        description="Fair merge, congestion: both ingoing roads jam at "
        "rho_plus(sigma/2), upstream-moving shocks.",
        markers=(
            Marker("kinetic.road1.junction_rho", _RHO0_FAIR_2, 5e-3),
            Marker("kinetic.road2.junction_rho", _RHO0_FAIR_2, 5e-3),
            Marker("macro.C1", 0.125, 1e-12),
            Marker("macro.C2", 0.125, 1e-12),
            Marker("macro.C3", 0.25, 1e-12),
            Marker("compare.road1.l1", 0.0, 0.02),
            Marker("compare.road2.l1", 0.0, 0.02),
            Marker("compare.road3.l1", 0.0, 0.02),
        ),
    ),
    ScenarioPreset(
        name="merge_fair_3",
        densities=(0.05, 0.6, 0.2),
        coupling="fair",
        kinetic_coupling="fair",
        delta=0.5,
        description="Fair merge, asymmetric demands: road 1 passes freely, "
        "road 2 is limited to sigma - F(rho1).",
        markers=(
            Marker("kinetic.road2.junction_rho", _RHO0_FAIR_3, 5e-3),
            Marker("lwr.road2.junction_rho", _RHO0_FAIR_3, 2e-3),
            Marker("macro.C1", 0.0475, 1e-12),
            Marker("macro.C2", 0.2025, 1e-12),
            Marker("macro.C3", 0.25, 1e-12),
        ),
    ),
    ScenarioPreset(
        name="merge_fair_4",
        densities=(0.2, 0.5, 0.8),
        coupling="fair",
        kinetic_coupling="fair",
        delta=0.5,
        description="Fair merge, congested outgoing road: supply F(0.8) "
        "splits evenly, both ingoing roads jam at rho_plus(0.08).",
        markers=(
            Marker("kinetic.road1.junction_rho", _RHO0_FAIR_4, 2e-3),
            Marker("kinetic.road2.junction_rho", _RHO0_FAIR_4, 2e-3),
            Marker("macro.C1", 0.08, 1e-12),
            Marker("macro.C2", 0.08, 1e-12),
            Marker("macro.C3", 0.16, 1e-12),
        ),
    ),
    ScenarioPreset(
        name="merge_priority_1",
        densities=(0.6, 0.7, 0.2),
        coupling="priority",
        kinetic_coupling="priority_truncated",
        delta=0.5,
        description="Priority merge: road 1 saturates the junction, all "
        "cars on road 2 wait (trace -> 1).",
        markers=(
            Marker("kinetic.road2.junction_rho", 1.0, 2e-3),
            Marker("lwr.road2.junction_rho", 1.0, 2e-3),
            Marker("kinetic.road1.junction_q", 0.25, 2e-2),
            Marker("macro.C1", 0.25, 1e-12),
            Marker("macro.C2", 0.0, 1e-12),
            Marker("macro.C3", 0.25, 1e-12),
        ),
    ),
    ScenarioPreset(
        name="merge_priority_2",
        densities=(0.1, 0.5, 0.2),
        coupling="priority",
        kinetic_coupling="priority_truncated",
        delta=0.5,
        description="Priority merge, light road 1: free outflow on road 1, "
        "road 2 gets the remaining capacity and congests to rho_plus(0.16).",
        markers=(
            Marker("kinetic.road1.junction_rho", 0.1, 2e-3),
            Marker("kinetic.road2.junction_rho", 0.8, 5e-3),
            Marker("lwr.road2.junction_rho", 0.8, 2e-3),
            Marker("macro.C1", 0.09, 1e-12),
            Marker("macro.C2", 0.16, 1e-12),
            Marker("macro.C3", 0.25, 1e-12),
        ),
    ),
    ScenarioPreset(
        name="merge_priority_3",
        densities=(0.4, 0.4, 0.7),
        coupling="priority",
        kinetic_coupling="priority_truncated",
        delta=0.5,
        description="Priority merge, congested outgoing road: identical "
        "ingoing roads jam asymmetrically; road 2 is fully blocked and its "
        "jam front moves four times faster.",
        markers=(
            Marker("kinetic.road1.junction_rho", 0.7, 5e-3),
            Marker("kinetic.road2.junction_rho", 1.0, 2e-3),
            Marker("kinetic.road1.shock_x", 0.9, 0.05),
            Marker("kinetic.road2.shock_x", 0.6, 0.05),
            Marker("lwr.road1.shock_x", 0.9, 0.02),
            Marker("lwr.road2.shock_x", 0.6, 0.02),
            Marker("macro.C1", 0.21, 1e-12),
            Marker("macro.C2", 0.0, 1e-12),
            Marker("macro.C3", 0.21, 1e-12),
        ),
    ),
)


def preset_names() -> tuple[str, ...]:
    return tuple(p.name for p in PRESETS)


def get_preset(name: str) -> ScenarioPreset:
    for preset in PRESETS:
        if preset.name == name:
            return preset
    raise KeyError(
        f"unknown preset {name!r}; available: {', '.join(preset_names())}"
    )
