"""Two-speed kinetic traffic model with BGK-style relaxation.

The state of a road cell is (f0, f1): densities of stopped and driving cars.
Derived fields are the total density rho = f0 + f1, the flux q = f1, the
stopped density w = f0 (invariant of the transport part's second family) and
the driving ratio Z = f1 / (1 - f0) (invariant of the first family).

The homogeneous transport system is linearly degenerate in both fields with
eigenvalues lambda_1 = -q / (1 - rho) <= 0 and lambda_2 = 1, so Riemann
solutions consist of two contact waves and the interface state is obtained by
combining Z from the left with w from the right.  The relaxation source drives
q towards the equilibrium flux F(rho) on the time scale epsilon and is
integrated exactly at frozen rho.

Scalar fields and numpy arrays are handled alike; a CellState whose fields are
arrays represents a whole road.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagram import FundamentalDiagram

__all__ = [
    "CellState",
    "InterfaceFlux",
    "CFLViolation",
    "InvariantRegionError",
    "eigenvalues",
    "interface_state",
    "godunov_flux",
    "relax_exact",
    "transport_step",
]

# Round-off excursions out of the simplex up to this size are clamped;
# anything larger raises InvariantRegionError.
INVARIANT_TOL = 1e-13
# Guard for the degenerate ratio Z = 1: lambda_1 is reported as -1/Z_GUARD
# so that CFL time steps stay finite.
Z_GUARD = 1e-12


class CFLViolation(RuntimeError):
    """Raised when a step size exceeds the CFL bound."""


class InvariantRegionError(ValueError):
    """Raised when a state leaves f0, f1 >= 0, f0 + f1 <= 1 beyond round-off."""


@dataclass(frozen=True)
class CellState:
    """Kinetic state (f0, f1); fields may be floats or equally shaped arrays."""

    f0: object
    f1: object

    @property
    def rho(self):
        return self.f0 + self.f1

    @property
    def q(self):
        return self.f1

    @property
    def w(self):
        return self.f0

    @property
    def Z(self):
        """Driving ratio f1 / (1 - f0); defined as 1 at full congestion f0 = 1.

        f1 <= 1 - f0 in exact arithmetic, so the ratio is clipped against
        round-off excess: 1 + ulp here would flip the sign of 1 - Z and with
        it the backward wave speed.
        """
        den = 1.0 - np.asarray(self.f0, dtype=float)
        out = np.where(den > 0.0, np.asarray(self.f1, dtype=float) / np.where(den > 0.0, den, 1.0), 1.0)
        out = np.clip(out, 0.0, 1.0)
        return float(out) if np.ndim(out) == 0 else out

    @classmethod
    def from_rho_q(cls, rho, q) -> "CellState":
        """Build a state from density and flux; requires 0 <= q <= rho <= 1."""
        rho = np.asarray(rho, dtype=float)
        q = np.asarray(q, dtype=float)
        if (
            np.any(q < -INVARIANT_TOL)
            or np.any(q > rho + INVARIANT_TOL)
            or np.any(rho > 1.0 + INVARIANT_TOL)
        ):
            raise InvariantRegionError("need 0 <= q <= rho <= 1")
        q = np.clip(q, 0.0, np.minimum(rho, 1.0))
        rho = np.clip(rho, 0.0, 1.0)
        if rho.ndim == 0:
            return cls(float(rho - q), float(q))
        return cls(rho - q, q)

    @classmethod
    def from_w_z(cls, w, z) -> "CellState":
        """Build a state from the wave invariants (w, Z)."""
        w = np.asarray(w, dtype=float)
        z = np.asarray(z, dtype=float)
        if np.any(w < -INVARIANT_TOL) or np.any(w > 1.0 + INVARIANT_TOL):
            raise InvariantRegionError("need 0 <= w <= 1")
        if np.any(z < -INVARIANT_TOL) or np.any(z > 1.0 + INVARIANT_TOL):
            raise InvariantRegionError("need 0 <= Z <= 1")
        w = np.clip(w, 0.0, 1.0)
        z = np.clip(z, 0.0, 1.0)
        f1 = z * (1.0 - w)
        if w.ndim == 0:
            return cls(float(w), float(f1))
        return cls(w, f1)

    @classmethod
    def equilibrium(cls, rho, diagram: FundamentalDiagram) -> "CellState":
        """State on the equilibrium curve q = F(rho)."""
        return cls.from_rho_q(rho, diagram.flux(np.asarray(rho, dtype=float)))


@dataclass(frozen=True)
class InterfaceFlux:
    """Upwind fluxes of the conservative pair (rho, Z) across one interface."""

    mass_flux: object
    z_flux: object


def eigenvalues(state: CellState):
    """Wave speeds (lambda_1, lambda_2) = (-Z/(1-Z), 1).

    lambda_1 equals -q/(1-rho); the Z form extends it to rho = 1.  At Z = 1
    the speed is unbounded and a large negative sentinel -1/Z_GUARD is
    returned so callers can still form a finite CFL bound.
    """
    z = np.asarray(state.Z, dtype=float)
    den = 1.0 - z
    lam1 = np.where(den > Z_GUARD, -z / np.where(den > Z_GUARD, den, 1.0), -1.0 / Z_GUARD)
    lam2 = np.ones_like(lam1)
    if lam1.ndim == 0:
        return float(lam1), float(lam2)
    return lam1, lam2


def interface_state(left: CellState, right: CellState) -> CellState:
    """State at x/t = 0 of the Riemann problem: Z from the left, w from the right.

    Both characteristic families are linearly degenerate; the 1-contact has
    speed lambda_1 <= 0 and the 2-contact speed 1, so the middle state sits on
    the interface.
    """
    zl = np.asarray(left.Z, dtype=float)
    wr = np.asarray(right.w, dtype=float)
    f1 = zl * (1.0 - wr)
    if f1.ndim == 0:
        return CellState(float(wr), float(f1))
    return CellState(wr + np.zeros_like(f1), f1)


def godunov_flux(left: CellState, right: CellState) -> InterfaceFlux:
    """Upwind flux pair: mass flux Z_left (1 - w_right), ratio flux Z_left."""
    zl = np.asarray(left.Z, dtype=float)
    wr = np.asarray(right.w, dtype=float)
    mass = zl * (1.0 - wr)
    if mass.ndim == 0:
        return InterfaceFlux(float(mass), float(zl))
    return InterfaceFlux(mass, zl + np.zeros_like(mass))


def _clamp_simplex(f0, f1):
    """Clamp round-off excursions back into f0, f1 >= 0, f0 + f1 <= 1."""
    if (
        np.any(f0 < -INVARIANT_TOL)
        or np.any(f1 < -INVARIANT_TOL)
        or np.any(f0 + f1 > 1.0 + INVARIANT_TOL)
    ):
        raise InvariantRegionError("state left the invariant region")
    f0 = np.maximum(f0, 0.0)
    f1 = np.maximum(f1, 0.0)
    over = (f0 + f1) - 1.0
    scale = np.where(over > 0.0, 1.0 / np.maximum(f0 + f1, 1.0), 1.0)
    return f0 * scale, f1 * scale


def transport_step(
    cells: CellState,
    left_ghost: CellState,
    right_ghost: CellState,
    dt: float,
    dx: float,
) -> CellState:
    """One Godunov step of the homogeneous transport system on a road.

    ``cells`` holds array-valued fields; the ghosts are scalar states closing
    the two boundary Riemann problems.  The update is conservative in
    (rho, Z); afterwards (f0, f1) are reconstructed and clamped against
    round-off.  Raises CFLViolation if dt exceeds dx / max wave speed.
    """
    f0 = np.atleast_1d(np.asarray(cells.f0, dtype=float))
    f1 = np.atleast_1d(np.asarray(cells.f1, dtype=float))
    rho = f0 + f1
    den = 1.0 - f0
    z = np.where(den > 0.0, f1 / np.where(den > 0.0, den, 1.0), 1.0)

    lam1, _ = eigenvalues(CellState(f0, f1))
    max_speed = max(1.0, float(np.max(np.abs(np.atleast_1d(lam1)))))
    if dt > dx / max_speed * (1.0 + 1e-12):
        raise CFLViolation(
            f"dt = {dt} exceeds CFL bound {dx / max_speed} (max speed {max_speed})"
        )

    # Left state Z and right state w at each of the n + 1 interfaces.
    zl = np.concatenate(([left_ghost.Z], z))
    wr = np.concatenate((f0, [right_ghost.w]))
    mass_flux = zl * (1.0 - wr)
    z_flux = zl

    nu = dt / dx
    rho_new = rho - nu * np.diff(mass_flux)
    z_new = z - nu * np.diff(z_flux)

    # The exact-solution average keeps 0 <= Z <= rho <= 1; clamp round-off.
    if (
        np.any(rho_new > 1.0 + INVARIANT_TOL)
        or np.any(z_new < -INVARIANT_TOL)
        or np.any(z_new > rho_new + INVARIANT_TOL)
    ):
        raise InvariantRegionError("transport step left the invariant region")
    rho_new = np.clip(rho_new, 0.0, 1.0)
    z_new = np.clip(z_new, 0.0, rho_new)

    one_minus_z = 1.0 - z_new
    q_new = np.where(
        one_minus_z > 0.0,
        z_new * (1.0 - rho_new) / np.where(one_minus_z > 0.0, one_minus_z, 1.0),
        0.0,
    )
    f0_new, f1_new = _clamp_simplex(rho_new - q_new, q_new)
    return CellState(f0_new, f1_new)


def relax_exact(
    state: CellState, dt: float, epsilon: float, diagram: FundamentalDiagram
) -> CellState:
    """Exact relaxation step: q -> F(rho) + (q - F(rho)) exp(-dt/epsilon).

    rho is frozen, so only the split between stopped and driving cars changes.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if dt < 0.0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    if dt == 0.0:
        return state
    rho = np.asarray(state.rho, dtype=float)
    q = np.asarray(state.q, dtype=float)
    feq = diagram.flux(rho)
    q_new = feq + (q - feq) * np.exp(-dt / epsilon)
    f0_new, f1_new = _clamp_simplex(rho - q_new, q_new)
    if f1_new.ndim == 0:
        return CellState(float(f0_new), float(f1_new))
    return CellState(f0_new, f1_new)
