"""Merge couplings at a 2-to-1 junction, kinetic and macroscopic.

Two roads feed one outgoing road.  The kinetic couplings act on the junction
traces (Z of the incoming roads, stopped density w of the outgoing road) and
return ghost invariants; the macroscopic couplings act on densities and
return the junction fluxes C1 + C2 = C3.  Both conserve mass exactly.

Run with: python3 demos/junction_merges.py
"""

from mergeflow import (
    CellState,
    JunctionTrace,
    kinetic_fair_merge,
    kinetic_priority_merge,
    kinetic_priority_merge_truncated,
    lwr_diagram,
    macro_fair_merge,
    macro_priority_merge,
    max_truncation,
)


def show_kinetic(label, trace, out):
    f1 = trace.z1 * (1.0 - out.w1)
    f2 = trace.z2 * (1.0 - out.w2)
    f3 = out.z3 * (1.0 - trace.w3)
    print(f"  {label}: case {out.case.value}")
    print(f"    w1 = {out.w1:.6f}, w2 = {out.w2:.6f}, z3 = {out.z3:.6f}")
    print(f"    fluxes {f1:.6f} + {f2:.6f} = {f1 + f2:.6f} vs f3 = {f3:.6f}")


def main():
    d = lwr_diagram()
    trace = JunctionTrace(z1=0.3, z2=0.5, w3=0.2)
    print(f"Junction traces: Z1 = {trace.z1}, Z2 = {trace.z2}, w3 = {trace.w3}")

    print("\nKinetic couplings:")
    fair = kinetic_fair_merge(trace)
    show_kinetic("fair    ", trace, fair)
    show_kinetic("priority", trace, kinetic_priority_merge(trace))
    delta = 0.4
    show_kinetic(
        f"trunc({delta})", trace, kinetic_priority_merge_truncated(trace, delta, d)
    )
    print(f"    (delta may not exceed {max_truncation(d)} for this diagram)")

    # The fair merge equalizes the ghost densities of all three roads.
    g1 = CellState.from_w_z(fair.w1, trace.z1)
    g2 = CellState.from_w_z(fair.w2, trace.z2)
    g3 = CellState.from_w_z(trace.w3, fair.z3)
    print(f"    fair ghost densities: {g1.rho:.12f}, {g2.rho:.12f}, {g3.rho:.12f}")

    print("\nMacroscopic couplings on densities (rho1, rho2, rho3):")
    for rho in ((0.1, 0.15, 0.2), (0.7, 0.6, 0.2), (0.6, 0.7, 0.2), (0.1, 0.5, 0.2)):
        fair_m = macro_fair_merge(d, *rho)
        prio_m = macro_priority_merge(d, *rho)
        print(f"  rho = {rho}")
        print(
            f"    fair     case {fair_m.case_label}: C1 = {fair_m.C1:.6f}, "
            f"C2 = {fair_m.C2:.6f}, C3 = {fair_m.C3:.6f}"
        )
        print(
            f"    priority case {prio_m.case_label}: C1 = {prio_m.C1:.6f}, "
            f"C2 = {prio_m.C2:.6f}, C3 = {prio_m.C3:.6f}"
        )
    print("\nThe priority merge serves road 1 first: C1 = min(demand1, supply3),")
    print("road 2 gets what is left.  The fair merge splits the supply.")


if __name__ == "__main__":
    main()
