"""Coupling conditions for a 2-to-1 merge junction.

Roads 1 and 2 flow into the junction, road 3 leaves it.  On the kinetic level
the junction sees the traces Z^1, Z^2 of the incoming roads and the stopped
density w^3 of the outgoing road, and returns the complementary invariants:
ghost values w^1, w^2 for the incoming roads and Z^3 for the outgoing one.
Two closures are provided, a fair merge that distributes the free space of
road 3 between both senders, and a priority merge that serves road 1 first
(with an optional capacity truncation 1 - delta on road 3).

On the macroscopic level the junction allocates fluxes from the demands of
the incoming roads and the supply of the outgoing road.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .diagram import FundamentalDiagram
from .kinetic import CellState, InterfaceFlux, godunov_flux

__all__ = [
    "JunctionTrace",
    "MergeCase",
    "KineticMergeOutcome",
    "MacroMergeOutcome",
    "JunctionFluxes",
    "kinetic_fair_merge",
    "kinetic_priority_merge",
    "kinetic_priority_merge_truncated",
    "max_truncation",
    "macro_fair_merge",
    "macro_priority_merge",
    "kinetic_junction_fluxes",
]


class MergeCase(enum.Enum):
    FAIR_REGULAR = "fair"
    FAIR_DEGENERATE = "fair-degenerate"
    PRIORITY_I = "priority-I"
    PRIORITY_II = "priority-II"
    PRIORITY_III = "priority-III"


@dataclass(frozen=True)
class JunctionTrace:
    """Junction-side traces: Z of roads 1 and 2, stopped density w of road 3."""

    z1: float
    z2: float
    w3: float

    def __post_init__(self):
        for name, value in (("z1", self.z1), ("z2", self.z2), ("w3", self.w3)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} = {value} outside [0, 1]")


@dataclass(frozen=True)
class KineticMergeOutcome:
    """Ghost invariants returned by a kinetic coupling: w for the incoming
    roads, Z for the outgoing road, and the case that produced them."""

    w1: float
    w2: float
    z3: float
    case: MergeCase


@dataclass(frozen=True)
class MacroMergeOutcome:
    """Junction fluxes C1, C2 into and C3 = C1 + C2 out of the merge."""

    C1: float
    C2: float
    C3: float
    case_label: str


@dataclass(frozen=True)
class JunctionFluxes:
    """Resolved kinetic junction: ghost states and upwind interface fluxes."""

    outcome: KineticMergeOutcome
    ghost1: CellState
    ghost2: CellState
    ghost3: CellState
    flux1: InterfaceFlux
    flux2: InterfaceFlux
    flux3: InterfaceFlux


def _unit(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def kinetic_fair_merge(trace: JunctionTrace) -> KineticMergeOutcome:
    """Fair merge: both incoming roads share the free space of road 3.

    The sharing weights are alpha^1 = (1 - Z^2)/(1 - Z^1 Z^2) and symmetric,
    giving 1 - w^i = alpha^i (1 - w^3) and Z^3 = alpha^1 Z^1 + alpha^2 Z^2.
    When Z^1 = Z^2 = 1 the weights degenerate and are set to 1/2.
    """
    z1, z2, w3 = trace.z1, trace.z2, trace.w3
    product = z1 * z2
    if product >= 1.0:
        alpha1 = alpha2 = 0.5
    else:
        alpha1 = (1.0 - z2) / (1.0 - product)
        alpha2 = (1.0 - z1) / (1.0 - product)
    w1 = _unit(1.0 - alpha1 * (1.0 - w3))
    w2 = _unit(1.0 - alpha2 * (1.0 - w3))
    z3 = _unit(alpha1 * z1 + alpha2 * z2)
    degenerate = w3 >= 1.0 or product >= 1.0
    case = MergeCase.FAIR_DEGENERATE if degenerate else MergeCase.FAIR_REGULAR
    return KineticMergeOutcome(w1, w2, z3, case)


def kinetic_priority_merge(trace: JunctionTrace) -> KineticMergeOutcome:
    """Priority merge: road 1 is served first, road 3 fills up to Z^3 = 1.

    Case I  (1 - Z^2 <= w^3 + Z^1 <= 1): road 1 empties (w^1 = 0) and road 2
    sends the remaining space, 1 - w^2 = (1 - w^3 - Z^1)/Z^2.
    Case II (w^3 + Z^1 >= 1): road 1 alone saturates road 3, w^2 = 1 and
    1 - w^1 = (1 - w^3)/Z^1.
    Case III (w^3 + Z^1 <= 1 - Z^2): both empty, Z^3 = (Z^1 + Z^2)/(1 - w^3).
    Ties are resolved in the order I, II, III; the formulas agree there.
    """
    z1, z2, w3 = trace.z1, trace.z2, trace.w3
    load = w3 + z1
    if 1.0 - z2 <= load <= 1.0:
        free2 = (1.0 - w3 - z1) / z2 if z2 > 0.0 else 0.0
        return KineticMergeOutcome(0.0, _unit(1.0 - free2), 1.0, MergeCase.PRIORITY_I)
    if load >= 1.0:
        free1 = (1.0 - w3) / z1 if z1 > 0.0 else 0.0
        return KineticMergeOutcome(_unit(1.0 - free1), 1.0, 1.0, MergeCase.PRIORITY_II)
    z3 = (z1 + z2) / (1.0 - w3) if w3 < 1.0 else 0.0
    return KineticMergeOutcome(0.0, 0.0, _unit(z3), MergeCase.PRIORITY_III)


def max_truncation(diagram: FundamentalDiagram) -> float:
    """Largest admissible truncation delta = 1 / (1 - F'(1)).

    For any delta up to this bound the capacity Z^3 = 1 - delta stays above
    every equilibrium ratio Z(rho), so the truncated priority merge has the
    same macroscopic limit as the untruncated one.
    """
    return 1.0 / (1.0 - float(diagram.derivative(1.0)))


def kinetic_priority_merge_truncated(
    trace: JunctionTrace, delta: float, diagram: FundamentalDiagram
) -> KineticMergeOutcome:
    """Priority merge with road 3 capacity truncated to Z^3 = 1 - delta.

    The case split of kinetic_priority_merge with 1 - w^3 replaced by the
    capacity (1 - w^3)(1 - delta); delta = 0 recovers the untruncated merge.
    """
    if not 0.0 <= delta <= max_truncation(diagram) + 1e-12:
        raise ValueError(
            f"delta = {delta} outside [0, {max_truncation(diagram)}]"
        )
    z1, z2, w3 = trace.z1, trace.z2, trace.w3
    capacity = (1.0 - w3) * (1.0 - delta)
    if capacity >= z1 and z1 + z2 >= capacity:
        free2 = (capacity - z1) / z2 if z2 > 0.0 else 0.0
        return KineticMergeOutcome(
            0.0, _unit(1.0 - free2), 1.0 - delta, MergeCase.PRIORITY_I
        )
    if capacity <= z1:
        free1 = capacity / z1 if z1 > 0.0 else 0.0
        return KineticMergeOutcome(
            _unit(1.0 - free1), 1.0, 1.0 - delta, MergeCase.PRIORITY_II
        )
    z3 = (z1 + z2) / (1.0 - w3) if w3 < 1.0 else 0.0
    return KineticMergeOutcome(0.0, 0.0, _unit(z3), MergeCase.PRIORITY_III)


def macro_fair_merge(
    diagram: FundamentalDiagram, rho1: float, rho2: float, rho3: float
) -> MacroMergeOutcome:
    """Supply/demand fair merge.

    With demands c1, c2 and supply c3 the fluxes are C_i = c_i when everything
    fits (case A) and C_i = min(c_i, c3 - min(c1, c2, c3/2)) otherwise:
    case B splits c3 evenly, cases C and D let the smaller sender pass and
    assign the rest to the other road.
    """
    c1 = float(diagram.demand(rho1))
    c2 = float(diagram.demand(rho2))
    c3 = float(diagram.supply(rho3))
    if c1 + c2 <= c3:
        return MacroMergeOutcome(c1, c2, c1 + c2, "A")
    m = min(c1, c2, 0.5 * c3)
    C1 = min(c1, c3 - m)
    C2 = min(c2, c3 - m)
    if c1 >= 0.5 * c3 and c2 >= 0.5 * c3:
        label = "B"
    elif c2 < 0.5 * c3:
        label = "C"
    else:
        label = "D"
    return MacroMergeOutcome(C1, C2, C1 + C2, label)


def macro_priority_merge(
    diagram: FundamentalDiagram, rho1: float, rho2: float, rho3: float
) -> MacroMergeOutcome:
    """Supply/demand priority merge: C1 = min(c1, c3), C2 = max(c3 - c1, 0).

    Case A: both demands fit.  Case B: road 1 exhausts the supply and road 2
    is blocked.  Case C: road 1 passes fully, road 2 gets the remainder.
    """
    c1 = float(diagram.demand(rho1))
    c2 = float(diagram.demand(rho2))
    c3 = float(diagram.supply(rho3))
    if c1 + c2 <= c3:
        return MacroMergeOutcome(c1, c2, c1 + c2, "A")
    if c1 >= c3:
        return MacroMergeOutcome(c3, 0.0, c3, "B")
    return MacroMergeOutcome(c1, c3 - c1, c3, "C")


def kinetic_junction_fluxes(
    boundary1: CellState,
    boundary2: CellState,
    boundary3: CellState,
    coupling: str = "fair",
    *,
    delta: float = 0.5,
    diagram: FundamentalDiagram | None = None,
) -> JunctionFluxes:
    """Resolve the kinetic junction for one time step.

    ``boundary1/2`` are the last cells of the incoming roads, ``boundary3``
    the first cell of the outgoing road.  Builds the ghost states carrying the
    coupling outcome and returns the upwind fluxes at the three junction
    interfaces; their mass components balance, flux3 = flux1 + flux2.
    """
    trace = JunctionTrace(boundary1.Z, boundary2.Z, boundary3.w)
    if coupling == "fair":
        outcome = kinetic_fair_merge(trace)
    elif coupling == "priority":
        outcome = kinetic_priority_merge(trace)
    elif coupling == "priority_truncated":
        if diagram is None:
            raise ValueError("priority_truncated requires the diagram")
        outcome = kinetic_priority_merge_truncated(trace, delta, diagram)
    else:
        raise ValueError(f"unknown kinetic coupling {coupling!r}")

    ghost1 = CellState.from_w_z(outcome.w1, trace.z1)
    ghost2 = CellState.from_w_z(outcome.w2, trace.z2)
    ghost3 = CellState.from_w_z(trace.w3, outcome.z3)
    return JunctionFluxes(
        outcome=outcome,
        ghost1=ghost1,
        ghost2=ghost2,
        ghost3=ghost3,
        flux1=godunov_flux(boundary1, ghost1),
        flux2=godunov_flux(boundary2, ghost2),
        flux3=godunov_flux(ghost3, boundary3),
    )
