"""Full network simulation of a fair merge.

Three unit-length roads meet at one junction: roads 1 and 2 end there, road
3 starts there.  The run below starts in light traffic; both demands pass
and road 3 fills to the free-flow density carrying the combined flux.

Run with: python3 demos/fair_merge_simulation.py
"""

from mergeflow import (
    SimulationConfig,
    compare_runs,
    junction_value,
    lwr_diagram,
    macro_fair_merge,
    run,
)


def main():
    d = lwr_diagram()
    rho = (0.1, 0.15, 0.2)
    mac = macro_fair_merge(d, *rho)
    rho_pred = d.rho_minus(mac.C3)
    print(f"Initial densities {rho}, fair coupling.")
    print(f"Macroscopic junction fluxes: C1 = {mac.C1}, C2 = {mac.C2}, "
          f"C3 = {mac.C3}")
    print(f"Predicted road-3 junction density rho_minus(C3) = {rho_pred:.12f}")

    kinetic_cfg = SimulationConfig(
        model="kinetic",
        coupling="fair",
        rho1=rho[0],
        rho2=rho[1],
        rho3=rho[2],
        snapshots=(0.25, 0.5),
    )
    lwr_cfg = SimulationConfig(
        model="lwr",
        coupling="fair",
        rho1=rho[0],
        rho2=rho[1],
        rho3=rho[2],
        snapshots=(0.25, 0.5),
    )
    kinetic = run(kinetic_cfg)
    scalar = run(lwr_cfg)
    print(f"\nKinetic run: {kinetic.steps} steps on {kinetic_cfg.cells} cells, "
          f"epsilon = {kinetic_cfg.epsilon}")

    print("\nRoad-3 junction density over time (both models):")
    print(f"  {'t':>5} {'kinetic':>14} {'lwr':>14}")
    for snap_k, snap_l in zip(kinetic.snapshot_list, scalar.snapshot_list):
        vk = junction_value(snap_k, 3, "rho")
        vl = junction_value(snap_l, 3, "rho")
        print(f"  {snap_k.time:>5.2f} {vk:>14.10f} {vl:>14.10f}")
    final = junction_value(kinetic.final, 3, "rho")
    print(f"  final kinetic error vs prediction: {abs(final - rho_pred):.2e}")

    led = kinetic.ledger
    print("\nMass ledger (kinetic):")
    print(f"  initial {led.initial_mass:.12f} + influx {led.boundary_influx:.12f}"
          f" - outflux {led.boundary_outflux:.12f}")
    print(f"  final   {led.final_mass:.12f}  relative error {led.relative_error:.2e}")
    print(f"  worst junction flux imbalance over the run: "
          f"{led.max_junction_imbalance:.2e}")

    rep = compare_runs(kinetic, scalar)
    print("\nKinetic vs scalar at t = 1 (per-road L1 distance):")
    for i, road in enumerate(rep.roads, start=1):
        print(f"  road {i}: L1 = {road.l1:.2e}, Linf = {road.linf:.2e}")


if __name__ == "__main__":
    main()
