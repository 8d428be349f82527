"""Boundary layers of the kinetic model near a junction.

At small relaxation times the kinetic solution matches the scalar one away
from the junction but develops layers next to it, governed by an ODE in the
stretched coordinate y = x / epsilon.  This script integrates the layer ODE,
shows which fixpoints attract, and contrasts the exponential decay at
generic flux levels with the algebraic decay at C = sigma.

Run with: python3 demos/boundary_layers.py
"""

import numpy as np

from mergeflow import (
    LayerProblem,
    LayerSide,
    classify_fixpoints,
    integrate_layer,
    lwr_diagram,
    settles_to,
)


def main():
    d = lwr_diagram()
    C = 0.125

    print(f"Layer fixpoints at junction flux C = {C}:")
    for side in (LayerSide.LEFT, LayerSide.RIGHT):
        rep = classify_fixpoints(d, side, C)
        lo, hi = rep.attraction
        print(
            f"  {side.name:<5} stable = {rep.stable:.6f}, unstable = "
            f"{rep.unstable:.6f}, attracts from ({lo:.6f}, {hi:.6f})"
        )

    print("\nLeft layer (upstream of the junction) from rho = 0.6:")
    t = integrate_layer(LayerProblem(LayerSide.LEFT, C, 0.6), d, 60.0)
    for i in (0, 64, 128, 256, 511):
        print(f"  y = {t.y[i]:>6.2f}  rho = {t.rho[i]:.10f}")
    rep = classify_fixpoints(d, LayerSide.LEFT, C)
    print(f"  settles to rho_plus(C) = {rep.stable:.10f}: "
          f"{settles_to(t, rep.stable)}")

    print("\nStarting below rho_minus(C) the left layer exits through 0:")
    t = integrate_layer(LayerProblem(LayerSide.LEFT, C, 0.10), d, 60.0)
    print(f"  diverged = {t.diverged} (last rho = {t.rho[-1]:.3e})")

    print("\nAt C = sigma both fixpoints merge at rho* and the decay is")
    print("algebraic, ~1/y: the deviation halves between y and 2y.")
    for label, flux in (("C = sigma", d.sigma), ("C = 0.9 sigma", 0.9 * d.sigma)):
        rep = classify_fixpoints(d, LayerSide.LEFT, flux)
        t = integrate_layer(LayerProblem(LayerSide.LEFT, flux, 0.9), d, 400.0, 2048)
        dev = np.abs(t.rho - rep.stable)
        i100 = np.searchsorted(t.y, 100.0)
        i200 = np.searchsorted(t.y, 200.0)
        ratio = dev[i100] / dev[i200] if dev[i200] > 0 else float("inf")
        print(
            f"  {label:<13} dev(100) = {dev[i100]:.3e}, dev(200) = "
            f"{dev[i200]:.3e}, ratio = {ratio:.2f}"
        )
    print("  (ratio ~2 is the 1/y signature; below sigma the deviation is")
    print("  already at the integrator floor)")


if __name__ == "__main__":
    main()
