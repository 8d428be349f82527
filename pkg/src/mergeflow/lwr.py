"""Godunov scheme for the scalar LWR equation rho_t + F(rho)_x = 0.

The numerical flux is the supply/demand form min(demand(rho_L), supply(rho_R)),
which coincides with the exact Godunov flux for concave diagrams.  Boundary
fluxes are injected by the caller, which is how junction couplings act on a
road without ghost states.
"""

from __future__ import annotations

import numpy as np

from .diagram import FundamentalDiagram
from .kinetic import CFLViolation, InvariantRegionError

__all__ = ["scalar_godunov_flux", "scalar_step", "wave_speed_bound"]

_CLAMP_TOL = 1e-13


def scalar_godunov_flux(diagram: FundamentalDiagram, rho_left, rho_right):
    """Godunov flux min(demand(rho_left), supply(rho_right))."""
    return np.minimum(diagram.demand(rho_left), diagram.supply(rho_right))


def wave_speed_bound(diagram: FundamentalDiagram) -> float:
    """Largest |F'| on [0, 1]; for concave F attained at an endpoint."""
    return float(
        max(abs(diagram.derivative(0.0)), abs(diagram.derivative(1.0)), 1e-12)
    )


def scalar_step(
    diagram: FundamentalDiagram,
    rho: np.ndarray,
    left_flux: float,
    right_flux: float,
    dt: float,
    dx: float,
) -> np.ndarray:
    """One conservative update with prescribed boundary fluxes.

    Interior fluxes come from scalar_godunov_flux; left_flux and right_flux
    replace the fluxes at the first and last interface.  Raises CFLViolation
    when dt exceeds dx / max|F'|.
    """
    rho = np.asarray(rho, dtype=float)
    speed = wave_speed_bound(diagram)
    if dt > dx / speed * (1.0 + 1e-12):
        raise CFLViolation(f"dt = {dt} exceeds CFL bound {dx / speed}")

    flux = np.empty(rho.size + 1)
    flux[0] = left_flux
    flux[-1] = right_flux
    flux[1:-1] = scalar_godunov_flux(diagram, rho[:-1], rho[1:])

    rho_new = rho - (dt / dx) * np.diff(flux)
    if np.any(rho_new < -_CLAMP_TOL) or np.any(rho_new > 1.0 + _CLAMP_TOL):
        raise InvariantRegionError("density left [0, 1]")
    return np.clip(rho_new, 0.0, 1.0)
