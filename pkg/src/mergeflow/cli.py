"""Command-line front end: run scenarios, compare outputs, execute presets."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, build_config, parse_config_text
from .network import SimulationConfig, run
from .presets import PRESETS, get_preset
from .snapshots import (
    check_markers,
    compare_runs,
    emit_run,
    junction_value,
    read_run,
)

_OVERRIDE_FLOATS = ("rho1", "rho2", "rho3", "epsilon", "t_end", "cfl", "delta")


def _add_config_flags(parser: argparse.ArgumentParser, scenario: bool = True):
    if scenario:
        parser.add_argument("--config", help="config file (key = value lines)")
        parser.add_argument("--model", choices=("kinetic", "lwr"))
        parser.add_argument(
            "--coupling", choices=("fair", "priority", "priority_truncated")
        )
        parser.add_argument("--preset", help="seed densities/coupling from a preset")
        parser.add_argument(
            "--snapshots", help="comma-separated snapshot times, e.g. 0.5,1.0"
        )
    for name in _OVERRIDE_FLOATS:
        parser.add_argument(f"--{name.replace('_', '-')}", type=float)
    parser.add_argument("--cells", type=int)
    parser.add_argument("--output-dir")


def _overrides(args: argparse.Namespace, scenario: bool = True) -> dict:
    out = {}
    keys = list(_OVERRIDE_FLOATS) + ["cells", "output_dir"]
    if scenario:
        keys += ["model", "coupling", "preset"]
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    if scenario and getattr(args, "snapshots", None) is not None:
        out["snapshots"] = tuple(
            float(v) for v in args.snapshots.split(",") if v.strip()
        )
    return out


def _print_summary(result) -> None:
    cfg = result.config
    print(f"model={cfg.model} coupling={cfg.coupling} t_end={cfg.t_end:g}")
    snap = result.final
    for road in (1, 2, 3):
        rho = junction_value(snap, road, "rho")
        print(f"  road {road}: junction rho = {rho:.6f}")
    ledger = result.ledger
    print(
        f"  steps={result.steps} mass_error={ledger.relative_error:.3e} "
        f"junction_imbalance={ledger.max_junction_imbalance:.3e}"
    )


def _cmd_run(args) -> int:
    mapping: dict = {}
    if args.config:
        mapping = parse_config_text(Path(args.config).read_text())
    mapping.update(_overrides(args))
    config = build_config(mapping)
    result = run(config)
    if config.output_dir:
        manifest = emit_run(result, config.output_dir)
        print(f"wrote {manifest}")
    _print_summary(result)
    return 0


def _cmd_compare(args) -> int:
    run_a = read_run(args.dir_a)
    run_b = read_run(args.dir_b)
    report = compare_runs(run_a, run_b)
    print(f"comparison at t = {report.time:g}")
    for number, entry in enumerate(report.roads, start=1):
        print(
            f"  road {number}: L1={entry.l1:.6e} Linf={entry.linf:.6e} "
            f"traces {entry.trace_a:.6f} vs {entry.trace_b:.6f} "
            f"shock_offset={entry.shock_offset_cells:.1f} cells"
        )
    return 0


def _cmd_preset_list(_args) -> int:
    for preset in PRESETS:
        rho = ", ".join(f"{v:g}" for v in preset.densities)
        print(
            f"{preset.name}: rho=({rho}) coupling={preset.coupling} "
            f"[kinetic: {preset.kinetic_coupling}] "
            f"{len(preset.markers)} markers"
        )
        print(f"    {preset.description}")
    return 0


def _preset_configs(preset, args) -> tuple[SimulationConfig, SimulationConfig]:
    common = {
        "rho1": preset.densities[0],
        "rho2": preset.densities[1],
        "rho3": preset.densities[2],
        "delta": preset.delta,
    }
    common.update(
        {k: v for k, v in _overrides(args, scenario=False).items() if k != "output_dir"}
    )
    kinetic_config = SimulationConfig(
        model="kinetic", coupling=preset.kinetic_coupling, **common
    )
    lwr_config = SimulationConfig(model="lwr", coupling=preset.coupling, **common)
    return kinetic_config, lwr_config


def _cmd_preset_run(args) -> int:
    try:
        preset = get_preset(args.name)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    kinetic_config, lwr_config = _preset_configs(preset, args)
    kinetic_result = run(kinetic_config)
    lwr_result = run(lwr_config)
    if args.output_dir:
        base = Path(args.output_dir)
        emit_run(kinetic_result, base / "kinetic")
        emit_run(lwr_result, base / "lwr")
        print(f"wrote {base / 'kinetic'} and {base / 'lwr'}")
    report = compare_runs(kinetic_result, lwr_result)
    _print_summary(kinetic_result)
    _print_summary(lwr_result)
    print(f"comparison at t = {report.time:g}")
    for number, entry in enumerate(report.roads, start=1):
        print(f"  road {number}: L1={entry.l1:.6e} Linf={entry.linf:.6e}")
    results = check_markers(
        preset.markers,
        kinetic=kinetic_result,
        lwr=lwr_result,
        comparison=report,
    )
    failed = 0
    for item in results:
        status = "PASS" if item.passed else "FAIL"
        failed += 0 if item.passed else 1
        m = item.marker
        print(
            f"  [{status}] {m.quantity}: {item.actual:.10g} "
            f"(expected {m.value:.10g} +/- {m.tolerance:g})"
        )
    if failed:
        print(f"{failed} marker(s) failed", file=sys.stderr)
        return 1
    print(f"all {len(results)} markers passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mergeflow",
        description="Two-velocity kinetic and LWR traffic merges on a "
        "2-in/1-out road network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    _add_config_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", help="compare two emitted runs")
    p_cmp.add_argument("dir_a")
    p_cmp.add_argument("dir_b")
    p_cmp.set_defaults(func=_cmd_compare)

    p_preset = sub.add_parser("preset", help="bundled scenarios")
    preset_sub = p_preset.add_subparsers(dest="preset_command", required=True)
    p_list = preset_sub.add_parser("list", help="list presets")
    p_list.set_defaults(func=_cmd_preset_list)
    p_prun = preset_sub.add_parser(
        "run", help="run a preset (kinetic + LWR) and check its markers"
    )
    p_prun.add_argument("name")
    _add_config_flags(p_prun, scenario=False)
    p_prun.set_defaults(func=_cmd_preset_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
