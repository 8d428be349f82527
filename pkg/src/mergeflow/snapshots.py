"""Snapshot files, run comparison metrics, and expected-marker evaluation.

A run is emitted as one comma-separated file per road per snapshot (columns
x,rho,q,Z for kinetic runs and x,rho,flux for LWR runs, 17 significant
digits, which round-trips float64 exactly) plus a manifest.json recording
the snapshot times, the config echo, the conservation ledger, and the file
layout.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .diagram import FundamentalDiagram, lwr_diagram
from .junction import macro_fair_merge, macro_priority_merge
from .network import (
    MassLedger,
    RoadSnapshot,
    RunResult,
    SimulationConfig,
    Snapshot,
)
from .presets import Marker

__all__ = [
    "emit_run",
    "read_run",
    "RoadComparison",
    "ComparisonReport",
    "compare_runs",
    "shock_position",
    "junction_value",
    "evaluate_marker",
    "MarkerResult",
    "check_markers",
]

_KINETIC_COLUMNS = ("x", "rho", "q", "Z")
_LWR_COLUMNS = ("x", "rho", "flux")


def _row(values) -> str:
    return ",".join(f"{float(v):.17g}" for v in values)


def _road_columns(model: str, road: RoadSnapshot):
    if model == "kinetic":
        return _KINETIC_COLUMNS, (road.x, road.rho, road.q, road.z)
    return _LWR_COLUMNS, (road.x, road.rho, road.flux)


def emit_run(result: RunResult, output_dir) -> Path:
    """Write all snapshots and the manifest; returns the manifest path."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    model = result.config.model
    entries = []
    for k, snap in enumerate(result.snapshot_list):
        files = []
        for i, road in enumerate(snap.roads, start=1):
            columns, arrays = _road_columns(model, road)
            name = f"road{i}_snap{k}.csv"
            lines = [",".join(columns)]
            lines.extend(_row(vals) for vals in zip(*arrays))
            (out / name).write_text("\n".join(lines) + "\n")
            files.append(name)
        entries.append({"index": k, "time": snap.time, "files": files})
    manifest = {
        "model": model,
        "config": asdict(result.config),
        "steps": result.steps,
        "snapshots": entries,
        "ledger": {
            "initial_mass": result.ledger.initial_mass,
            "final_mass": result.ledger.final_mass,
            "boundary_influx": result.ledger.boundary_influx,
            "boundary_outflux": result.ledger.boundary_outflux,
            "max_junction_imbalance": result.ledger.max_junction_imbalance,
        },
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def read_run(output_dir) -> RunResult:
    """Rebuild a RunResult from an emitted directory (bit-exact round trip)."""
    out = Path(output_dir)
    manifest = json.loads((out / "manifest.json").read_text())
    cfg_dict = dict(manifest["config"])
    cfg_dict["snapshots"] = tuple(cfg_dict.get("snapshots", ()))
    config = SimulationConfig(**cfg_dict)
    model = manifest["model"]
    snaps = []
    for entry in manifest["snapshots"]:
        roads = []
        for name in entry["files"]:
            data = np.loadtxt(out / name, delimiter=",", skiprows=1, ndmin=2)
            if model == "kinetic":
                roads.append(
                    RoadSnapshot(
                        x=data[:, 0], rho=data[:, 1], q=data[:, 2], z=data[:, 3]
                    )
                )
            else:
                roads.append(
                    RoadSnapshot(x=data[:, 0], rho=data[:, 1], flux=data[:, 2])
                )
        snaps.append(Snapshot(float(entry["time"]), tuple(roads)))
    ledger = MassLedger(**manifest["ledger"])
    return RunResult(config, tuple(snaps), ledger, int(manifest["steps"]))


# ---------------------------------------------------------------------------
# Comparison metrics
# ---------------------------------------------------------------------------


def shock_position(x: np.ndarray, rho: np.ndarray) -> float:
    """x of the first crossing of the mid-level between min and max density.

    Scans from x = 0 and interpolates linearly between cell centers; nan for
    profiles with no jump.
    """
    lo = float(np.min(rho))
    hi = float(np.max(rho))
    if hi - lo < 1e-9:
        return math.nan
    level = 0.5 * (lo + hi)
    sign = rho - level
    for i in range(len(rho) - 1):
        if sign[i] == 0.0:
            return float(x[i])
        if sign[i] * sign[i + 1] < 0.0:
            frac = sign[i] / (rho[i] - rho[i + 1])
            return float(x[i] + frac * (x[i + 1] - x[i]))
    return math.nan


def junction_value(snapshot: Snapshot, road: int, column: str) -> float:
    """Field value in the junction-adjacent cell (roads 1, 2: x = 1 end;
    road 3: x = 0 end)."""
    data = snapshot.roads[road - 1]
    index = 0 if road == 3 else -1
    values = getattr(data, column)
    if values is None:
        raise ValueError(f"road {road} snapshot has no column {column!r}")
    return float(values[index])


@dataclass(frozen=True)
class RoadComparison:
    l1: float
    linf: float
    trace_a: float
    trace_b: float
    shock_offset_cells: float


@dataclass(frozen=True)
class ComparisonReport:
    time: float
    roads: tuple[RoadComparison, RoadComparison, RoadComparison]


def compare_runs(
    run_a: RunResult, run_b: RunResult, time: float | None = None
) -> ComparisonReport:
    """Per-road distances between two runs at a common snapshot time."""
    snap_a = run_a.final if time is None else run_a.at(time)
    snap_b = run_b.final if time is None else run_b.at(time)
    if abs(snap_a.time - snap_b.time) > 1e-9:
        raise ValueError(
            f"snapshot times differ: {snap_a.time} vs {snap_b.time}"
        )
    roads = []
    for number, (a, b) in enumerate(zip(snap_a.roads, snap_b.roads), start=1):
        if a.x.size != b.x.size or not np.allclose(a.x, b.x, atol=1e-12, rtol=0.0):
            raise ValueError(f"road {number}: grids do not match")
        dx = float(a.x[1] - a.x[0]) if a.x.size > 1 else 1.0
        diff = a.rho - b.rho
        pos_a = shock_position(a.x, a.rho)
        pos_b = shock_position(b.x, b.rho)
        index = 0 if number == 3 else -1
        roads.append(
            RoadComparison(
                l1=float(np.sum(np.abs(diff))) * dx,
                linf=float(np.max(np.abs(diff))),
                trace_a=float(a.rho[index]),
                trace_b=float(b.rho[index]),
                shock_offset_cells=(pos_a - pos_b) / dx,
            )
        )
    return ComparisonReport(snap_a.time, tuple(roads))


# ---------------------------------------------------------------------------
# Expected markers
# ---------------------------------------------------------------------------


def _parse_road(token: str) -> int:
    if token in ("road1", "road2", "road3"):
        return int(token[-1])
    raise ValueError(f"expected road1/road2/road3, got {token!r}")


def evaluate_marker(
    quantity: str,
    kinetic: RunResult | None = None,
    lwr: RunResult | None = None,
    comparison: ComparisonReport | None = None,
    diagram: FundamentalDiagram | None = None,
) -> float:
    """Resolve a dotted marker quantity against run results.

    Supported forms:
      kinetic.roadN.junction_rho | junction_q | junction_z | shock_x
      lwr.roadN.junction_rho | junction_q | shock_x
      kinetic.mass_error | lwr.mass_error
      compare.roadN.l1 | linf | shock_offset_cells
      macro.C1 | macro.C2 | macro.C3   (supply/demand fluxes at the LWR
                                        final traces)
    """
    parts = quantity.split(".")
    head = parts[0]
    if head in ("kinetic", "lwr"):
        result = kinetic if head == "kinetic" else lwr
        if result is None:
            raise ValueError(f"marker {quantity!r} needs a {head} run")
        if len(parts) == 2 and parts[1] == "mass_error":
            return result.ledger.relative_error
        if len(parts) != 3:
            raise ValueError(f"malformed marker quantity {quantity!r}")
        road = _parse_road(parts[1])
        snap = result.final
        field_name = parts[2]
        if field_name == "junction_rho":
            return junction_value(snap, road, "rho")
        if field_name == "junction_q":
            return junction_value(snap, road, "q" if head == "kinetic" else "flux")
        if field_name == "junction_z":
            return junction_value(snap, road, "z")
        if field_name == "shock_x":
            data = snap.roads[road - 1]
            return shock_position(data.x, data.rho)
        raise ValueError(f"unknown field {field_name!r} in {quantity!r}")
    if head == "compare":
        if comparison is None:
            raise ValueError(f"marker {quantity!r} needs a comparison report")
        road = _parse_road(parts[1])
        entry = comparison.roads[road - 1]
        if parts[2] in ("l1", "linf", "shock_offset_cells"):
            return getattr(entry, parts[2])
        raise ValueError(f"unknown comparison field {parts[2]!r}")
    if head == "macro":
        if lwr is None:
            raise ValueError(f"marker {quantity!r} needs an lwr run")
        if parts[1] not in ("C1", "C2", "C3"):
            raise ValueError(f"unknown macro field {parts[1]!r}")
        d = diagram if diagram is not None else lwr_diagram()
        snap = lwr.final
        merge = (
            macro_fair_merge
            if lwr.config.coupling == "fair"
            else macro_priority_merge
        )
        outcome = merge(
            d,
            junction_value(snap, 1, "rho"),
            junction_value(snap, 2, "rho"),
            junction_value(snap, 3, "rho"),
        )
        return float(getattr(outcome, parts[1]))
    raise ValueError(f"unknown marker quantity {quantity!r}")


@dataclass(frozen=True)
class MarkerResult:
    marker: Marker
    actual: float
    passed: bool


def check_markers(
    markers,
    kinetic: RunResult | None = None,
    lwr: RunResult | None = None,
    comparison: ComparisonReport | None = None,
    diagram: FundamentalDiagram | None = None,
) -> list[MarkerResult]:
    """Evaluate each marker; a nan actual value counts as failed."""
    results = []
    for marker in markers:
        actual = evaluate_marker(
            marker.quantity,
            kinetic=kinetic,
            lwr=lwr,
            comparison=comparison,
            diagram=diagram,
        )
        passed = math.isfinite(actual) and abs(actual - marker.value) <= marker.tolerance
        results.append(MarkerResult(marker, actual, passed))
    return results
