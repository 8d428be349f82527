"""Fundamental diagrams: flux curves, inverse branches, demand and supply.

Run with: python3 demos/fundamental_diagram.py
"""

import numpy as np

from mergeflow import FundamentalDiagram, lwr_diagram


def main():
    d = lwr_diagram()
    print("LWR parabola F(rho) = rho (1 - rho)")
    print(f"  critical density rho* = {d.rho_star}")
    print(f"  capacity sigma       = {d.sigma}")

    print("\nFlux and characteristic structure along the road:")
    print(f"  {'rho':>6} {'F(rho)':>10} {'dF(rho)':>10} {'tau(rho)':>10} {'Z(rho)':>10}")
    for rho in (0.0, 0.2, 0.5, 0.8, 1.0):
        print(
            f"  {rho:>6.2f} {d.flux(rho):>10.4f} {d.derivative(rho):>10.4f}"
            f" {d.tau(rho):>10.4f} {d.z_of_rho(rho):>10.6f}"
        )

    print("\nInverting the flux: every C < sigma has a free-flow and a")
    print("congested preimage, rho_minus(C) <= rho* <= rho_plus(C).")
    for C in (0.09, 0.16, 0.2175, 0.25):
        lo, hi = d.rho_minus(C), d.rho_plus(C)
        print(f"  C = {C:<7} rho_minus = {lo:.12f}  rho_plus = {hi:.12f}")

    print("\nDemand (max flux the upstream state can send) and supply (max")
    print("flux the downstream state can absorb) split at rho*:")
    print(f"  {'rho':>6} {'demand':>10} {'supply':>10}")
    for rho in np.linspace(0.0, 1.0, 6):
        print(f"  {rho:>6.2f} {d.demand(rho):>10.4f} {d.supply(rho):>10.4f}")

    # Any concave flux with F(0) = F(1) = 0, 0 <= F <= rho and F' <= 1 works;
    # the constructor checks those properties on a sample grid.
    skew = FundamentalDiagram(
        flux=lambda r: 0.5 * r * (1.0 - r) * (2.0 - r),
        derivative=lambda r: 0.5 * (2.0 - 6.0 * r + 3.0 * r * r),
        rho_star=1.0 - 3.0 ** -0.5,
        sigma=0.5 * (1.0 - 3.0 ** -0.5) * (3.0 ** -0.5) * (1.0 + 3.0 ** -0.5),
    )
    print("\nSkewed cubic diagram F(rho) = rho (1 - rho) (2 - rho) / 2:")
    print(f"  rho* = {skew.rho_star:.12f}, sigma = {skew.sigma:.12f}")
    C = 0.8 * skew.sigma
    lo, hi = skew.rho_minus(C), skew.rho_plus(C)
    print(f"  at C = 0.8 sigma: rho_minus = {lo:.12f}, rho_plus = {hi:.12f}")
    print(f"  residuals: {abs(skew.flux(lo) - C):.2e}, {abs(skew.flux(hi) - C):.2e}")


if __name__ == "__main__":
    main()
