"""Matching boundary layers to the scalar merge solution.

The small-epsilon limit of the kinetic junction is a triple of boundary
layers, one per road, whose far-field states solve half-Riemann problems
against the interior data.  This script walks through the pieces:
half-Riemann classes, single-road boundary conditions, the joint matching at
a fair merge, and the admissibility rules for layer stability patterns.

Run with: python3 demos/riemann_matching.py
"""

from mergeflow import (
    classify_half_riemann,
    enumerate_layer_couplings,
    left_boundary_condition,
    lwr_diagram,
    macro_fair_merge,
    match_fair_merge,
    matching_report,
    right_boundary_condition,
    LayerSide,
)


def main():
    d = lwr_diagram()

    print("Half-Riemann classes (admissible junction traces per interior state):")
    for side, rho_b in ((LayerSide.LEFT, 0.3), (LayerSide.LEFT, 0.7),
                        (LayerSide.RIGHT, 0.3), (LayerSide.RIGHT, 0.7)):
        cls = classify_half_riemann(d, side, rho_b)
        ranges = ", ".join(f"[{lo:.3f}, {hi:.3f}]" for lo, hi in cls.admissible)
        print(f"  {side.name:<5} rho_b = {rho_b}: {cls.label}, traces {ranges}")

    print("\nSingle-road boundary conditions:")
    res = left_boundary_condition(d, z_in=0.25, rho_b=0.3)
    print(f"  left,  Z_in = 0.25, rho_b = 0.3: case {res.case}, "
          f"C = {res.C:.6f}, rho_K = {res.rho_K:.6f}")
    res = left_boundary_condition(d, z_in=0.5, rho_b=0.3)
    print(f"  left,  Z_in = 0.50, rho_b = 0.3: case {res.case}, "
          f"C = {res.C:.6f} (saturates at sigma), rho_0 = {res.rho_0:.6f}")
    res = right_boundary_condition(d, w_in=0.1, rho_b=0.7)
    print(f"  right, w_in = 0.10, rho_b = 0.7: case {res.case}, "
          f"C = {res.C:.6f}, rho_K = {res.rho_K:.6f}")

    print("\nFair-merge matching (roads 1, 2 on the left of the junction,")
    print("road 3 on the right); fluxes agree with the macroscopic merge:")
    for rho in ((0.1, 0.15, 0.2), (0.7, 0.6, 0.2), (0.3, 0.7, 0.8)):
        m = match_fair_merge(d, *rho)
        mac = macro_fair_merge(d, *rho)
        gap = max(abs(m.C[0] - mac.C1), abs(m.C[1] - mac.C2), abs(m.C[2] - mac.C3))
        print(f"  rho_b = {rho}: case {m.case_number} ({m.rp_case}), "
              f"stability {m.stability}")
        print(f"    C = ({m.C[0]:.6f}, {m.C[1]:.6f}, {m.C[2]:.6f}), "
              f"rho_0 = {m.rho_0:.6f}, macro gap {gap:.1e}")

    print("\nWhich stability patterns can couple at all?  'U' roads carry a")
    print("constant layer at the unstable fixpoint, 'S' roads a decaying one.")
    for stability, C in (
        (("U", "U", "S"), (None, None, 0.2)),
        (("S", "S", "U"), (0.08, 0.1, None)),
        (("S", "U", "U"), (0.1, 0.1, 0.2)),
        (("U", "U", "S"), (0.05, 0.1, 0.15)),
    ):
        v = enumerate_layer_couplings(d, stability, C)
        tag = "admissible" if v.admissible else f"rejected ({v.reason})"
        detail = f", C = {tuple(round(c, 6) for c in v.C)}" if v.C else ""
        print(f"  {''.join(stability)} with C = {C}: {tag}{detail}")

    print("\nCSV matching report over a coarse density grid:")
    grid = (0.2, 0.5, 0.8)
    points = [(a, b, c) for a in grid for b in grid for c in grid]
    lines = matching_report(d, points).splitlines()
    for line in lines[:5]:
        print(f"  {line}")
    print(f"  ... {len(lines) - 1} rows total")


if __name__ == "__main__":
    main()
