"""Merge network engine: grids, time loop, junction wiring, conservation.

The network is the 2-in/1-out merge: roads 1 and 2 reach the junction at
x = 1, road 3 leaves it at x = 0.  Every road lives on [0, 1] with the same
uniform cell count.  Outer boundaries are zero-gradient (the ghost repeats
the edge cell).  Kinetic runs split each step into a transport step and an
exact relaxation step; LWR runs use the scalar Godunov scheme with
supply/demand junction fluxes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .diagram import FundamentalDiagram, lwr_diagram
from .junction import (
    kinetic_junction_fluxes,
    macro_fair_merge,
    macro_priority_merge,
)
from .kinetic import CellState, eigenvalues, relax_exact, transport_step
from .lwr import scalar_godunov_flux, scalar_step, wave_speed_bound

__all__ = [
    "MODELS",
    "COUPLINGS",
    "JunctionEnd",
    "RoadGrid",
    "MergeNode",
    "SimulationConfig",
    "NetworkState",
    "RoadSnapshot",
    "Snapshot",
    "MassLedger",
    "RunResult",
    "initialize",
    "stable_dt",
    "advance",
    "total_mass",
    "take_snapshot",
    "junction_outcome",
    "run",
]

MODELS = ("kinetic", "lwr")
COUPLINGS = ("fair", "priority", "priority_truncated")


class JunctionEnd(enum.Enum):
    AT_RIGHT = "at_right"
    AT_LEFT = "at_left"


@dataclass(frozen=True)
class RoadGrid:
    """One road on [0, 1]: cell data, spacing, and which end touches the node."""

    cells: object  # CellState with array fields (kinetic) or ndarray (lwr)
    dx: float
    junction_end: JunctionEnd

    @property
    def x(self) -> np.ndarray:
        n = np.asarray(
            self.cells.f0 if isinstance(self.cells, CellState) else self.cells
        ).size
        return (np.arange(n) + 0.5) * self.dx


@dataclass(frozen=True)
class MergeNode:
    """2-in/1-out junction with its coupling rule."""

    incoming: tuple[int, int] = (1, 2)
    outgoing: int = 3
    coupling: str = "fair"
    delta: float = 0.5

    def __post_init__(self):
        if len(self.incoming) != 2:
            raise ValueError("merge node takes exactly two incoming roads")
        if self.coupling not in COUPLINGS:
            raise ValueError(f"unknown coupling {self.coupling!r}")


@dataclass(frozen=True)
class SimulationConfig:
    """Validated scenario description shared by the engine and the CLI."""

    model: str = "kinetic"
    coupling: str = "fair"
    rho1: float = 0.0
    rho2: float = 0.0
    rho3: float = 0.0
    cells: int = 1000
    epsilon: float = 0.001
    t_end: float = 1.0
    cfl: float = 0.45
    delta: float = 0.5
    snapshots: tuple[float, ...] = ()
    output_dir: str | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.coupling not in COUPLINGS:
            raise ValueError(
                f"coupling must be one of {COUPLINGS}, got {self.coupling!r}"
            )
        if self.model == "lwr" and self.coupling == "priority_truncated":
            raise ValueError(
                "priority_truncated pairs with the kinetic model only; "
                "use coupling=priority for lwr"
            )
        for name in ("rho1", "rho2", "rho3"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v} outside [0, 1]")
        if self.cells < 2:
            raise ValueError(f"cells must be >= 2, got {self.cells}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.t_end < 0.0:
            raise ValueError(f"t_end must be non-negative, got {self.t_end}")
        if not 0.0 < self.cfl < 1.0:
            raise ValueError(f"cfl must lie in (0, 1), got {self.cfl}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        object.__setattr__(self, "snapshots", tuple(float(t) for t in self.snapshots))
        for t in self.snapshots:
            if not 0.0 <= t <= self.t_end:
                raise ValueError(f"snapshot time {t} outside [0, t_end]")


@dataclass(frozen=True)
class NetworkState:
    """Full state of a run: grids, node, clock, and conservation counters."""

    config: SimulationConfig
    diagram: FundamentalDiagram
    roads: tuple[RoadGrid, RoadGrid, RoadGrid]
    node: MergeNode
    time: float
    steps: int
    initial_mass: float
    influx: float
    outflux: float
    max_junction_imbalance: float


@dataclass(frozen=True)
class RoadSnapshot:
    """Per-road field arrays; kinetic runs fill q and z, LWR runs fill flux."""

    x: np.ndarray
    rho: np.ndarray
    q: np.ndarray | None = None
    z: np.ndarray | None = None
    flux: np.ndarray | None = None


@dataclass(frozen=True)
class Snapshot:
    time: float
    roads: tuple[RoadSnapshot, RoadSnapshot, RoadSnapshot]


@dataclass(frozen=True)
class MassLedger:
    """Mass accounting over a run; the junction itself is mass-neutral."""

    initial_mass: float
    final_mass: float
    boundary_influx: float
    boundary_outflux: float
    max_junction_imbalance: float

    @property
    def expected_mass(self) -> float:
        return self.initial_mass + self.boundary_influx - self.boundary_outflux

    @property
    def relative_error(self) -> float:
        scale = max(abs(self.initial_mass), abs(self.expected_mass), 1e-300)
        return abs(self.final_mass - self.expected_mass) / scale


@dataclass(frozen=True)
class RunResult:
    config: SimulationConfig
    snapshot_list: tuple[Snapshot, ...]
    ledger: MassLedger
    steps: int

    @property
    def final(self) -> Snapshot:
        return self.snapshot_list[-1]

    def at(self, time: float, tol: float = 1e-9) -> Snapshot:
        for snap in self.snapshot_list:
            if abs(snap.time - time) <= tol:
                return snap
        raise KeyError(f"no snapshot at t = {time}")


def _cell(cells: CellState, index: int) -> CellState:
    return CellState(float(cells.f0[index]), float(cells.f1[index]))


def initialize(
    config: SimulationConfig, diagram: FundamentalDiagram | None = None
) -> NetworkState:
    """Constant initial densities per road; kinetic roads start in equilibrium."""
    diagram = diagram if diagram is not None else lwr_diagram()
    dx = 1.0 / config.cells
    densities = (config.rho1, config.rho2, config.rho3)
    ends = (JunctionEnd.AT_RIGHT, JunctionEnd.AT_RIGHT, JunctionEnd.AT_LEFT)
    roads = []
    for rho, end in zip(densities, ends):
        values = np.full(config.cells, float(rho))
        if config.model == "kinetic":
            cells = CellState.equilibrium(values, diagram)
        else:
            cells = values
        roads.append(RoadGrid(cells, dx, end))
    node = MergeNode(coupling=config.coupling, delta=config.delta)
    state = NetworkState(
        config=config,
        diagram=diagram,
        roads=tuple(roads),
        node=node,
        time=0.0,
        steps=0,
        initial_mass=0.0,
        influx=0.0,
        outflux=0.0,
        max_junction_imbalance=0.0,
    )
    return replace(state, initial_mass=total_mass(state))


def total_mass(state: NetworkState) -> float:
    """Integral of rho over all three roads."""
    out = 0.0
    for grid in state.roads:
        rho = grid.cells.rho if isinstance(grid.cells, CellState) else grid.cells
        out += float(np.sum(rho)) * grid.dx
    return out


def stable_dt(state: NetworkState) -> float:
    """Largest CFL-safe step at the current state."""
    dx = state.roads[0].dx
    if state.config.model == "lwr":
        return state.config.cfl * dx / wave_speed_bound(state.diagram)
    speed = 1.0
    for grid in state.roads:
        lam1, _ = eigenvalues(grid.cells)
        speed = max(speed, float(np.max(np.abs(lam1))))
    return state.config.cfl * dx / speed


def junction_outcome(state: NetworkState):
    """Coupling result at the current traces (kinetic ghosts or macro fluxes)."""
    g1, g2, g3 = state.roads
    if state.config.model == "kinetic":
        return kinetic_junction_fluxes(
            _cell(g1.cells, -1),
            _cell(g2.cells, -1),
            _cell(g3.cells, 0),
            state.node.coupling,
            delta=state.node.delta,
            diagram=state.diagram,
        )
    merge = macro_fair_merge if state.node.coupling == "fair" else macro_priority_merge
    return merge(
        state.diagram,
        float(g1.cells[-1]),
        float(g2.cells[-1]),
        float(g3.cells[0]),
    )


def _advance_kinetic(state: NetworkState, dt: float):
    cfg = state.config
    d = state.diagram
    g1, g2, g3 = state.roads
    c1, c2, c3 = g1.cells, g2.cells, g3.cells

    j = junction_outcome(state)
    left1 = _cell(c1, 0)
    left2 = _cell(c2, 0)
    right3 = _cell(c3, -1)

    # Outer-boundary mass fluxes, same expressions the transport step uses.
    influx = left1.Z * (1.0 - float(c1.f0[0])) + left2.Z * (1.0 - float(c2.f0[0]))
    outflux = float(c3.Z[-1]) * (1.0 - right3.w)

    new_cells = []
    for cells, lg, rg in (
        (c1, left1, j.ghost1),
        (c2, left2, j.ghost2),
        (c3, j.ghost3, right3),
    ):
        stepped = transport_step(cells, lg, rg, dt, g1.dx)
        new_cells.append(relax_exact(stepped, dt, cfg.epsilon, d))

    imbalance = abs(
        j.flux3.mass_flux - j.flux1.mass_flux - j.flux2.mass_flux
    )
    roads = tuple(
        replace(grid, cells=cells) for grid, cells in zip(state.roads, new_cells)
    )
    return roads, influx, outflux, imbalance


def _advance_lwr(state: NetworkState, dt: float):
    d = state.diagram
    g1, g2, g3 = state.roads
    r1, r2, r3 = g1.cells, g2.cells, g3.cells

    out = junction_outcome(state)
    in1 = float(scalar_godunov_flux(d, r1[0], r1[0]))
    in2 = float(scalar_godunov_flux(d, r2[0], r2[0]))
    out3 = float(scalar_godunov_flux(d, r3[-1], r3[-1]))

    new1 = scalar_step(d, r1, in1, out.C1, dt, g1.dx)
    new2 = scalar_step(d, r2, in2, out.C2, dt, g2.dx)
    new3 = scalar_step(d, r3, out.C3, out3, dt, g3.dx)

    imbalance = abs(out.C3 - out.C1 - out.C2)
    roads = tuple(
        replace(grid, cells=cells)
        for grid, cells in zip(state.roads, (new1, new2, new3))
    )
    return roads, in1 + in2, out3, imbalance


def advance(state: NetworkState, dt: float) -> NetworkState:
    """One synchronized step on all roads."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if state.config.model == "kinetic":
        roads, influx, outflux, imbalance = _advance_kinetic(state, dt)
    else:
        roads, influx, outflux, imbalance = _advance_lwr(state, dt)
    return replace(
        state,
        roads=roads,
        time=state.time + dt,
        steps=state.steps + 1,
        influx=state.influx + dt * influx,
        outflux=state.outflux + dt * outflux,
        max_junction_imbalance=max(state.max_junction_imbalance, imbalance),
    )


def take_snapshot(state: NetworkState, time: float | None = None) -> Snapshot:
    roads = []
    for grid in state.roads:
        if state.config.model == "kinetic":
            cells = grid.cells
            roads.append(
                RoadSnapshot(
                    x=grid.x,
                    rho=np.array(cells.rho, dtype=float),
                    q=np.array(cells.q, dtype=float),
                    z=np.array(cells.Z, dtype=float),
                )
            )
        else:
            rho = np.array(grid.cells, dtype=float)
            roads.append(
                RoadSnapshot(
                    x=grid.x, rho=rho, flux=np.asarray(state.diagram.flux(rho))
                )
            )
    return Snapshot(state.time if time is None else time, tuple(roads))


def run(
    config: SimulationConfig, diagram: FundamentalDiagram | None = None
) -> RunResult:
    """Advance to t_end with adaptive dt, collecting the requested snapshots.

    The step is clipped so each snapshot time and t_end are hit exactly; the
    final time is always snapshotted even when not requested explicitly.
    """
    state = initialize(config, diagram)
    targets = sorted(set(config.snapshots) | {config.t_end})
    snaps = []
    for target in targets:
        while state.time < target - 1e-13:
            dt = min(stable_dt(state), target - state.time)
            state = advance(state, dt)
        snaps.append(take_snapshot(state, time=target))
    ledger = MassLedger(
        initial_mass=state.initial_mass,
        final_mass=total_mass(state),
        boundary_influx=state.influx,
        boundary_outflux=state.outflux,
        max_junction_imbalance=state.max_junction_imbalance,
    )
    return RunResult(config, tuple(snaps), ledger, state.steps)
