"""Fundamental diagrams for scalar traffic flow.

A fundamental diagram is a concave flux function F: [0, 1] -> [0, 1] with
F(0) = F(1) = 0 and a single maximum sigma at the critical density rho_star.
Its graph must stay inside the triangle 0 <= F(rho) <= rho, and the slope may
not exceed the free-flow speed: F'(rho) <= 1.

Provides the diagram container with validation, the inverse branches
rho_minus/rho_plus of the flux, the conjugate density tau, the equilibrium
driving ratio z_of_rho, and the demand/supply functions used for junction
capacities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["FundamentalDiagram", "lwr_diagram"]

# Absolute slack for validating float identities such as F(0) = 0.
_VALIDATION_TOL = 1e-12
# Bisection stops once the bracket is shorter than this.
_ROOT_TOL = 1e-13
_MAX_BISECT = 200


def _bisect_increasing(g, lo, hi, tol: float = _ROOT_TOL):
    """Root of an increasing function g on [lo, hi] with g(lo) <= 0 <= g(hi).

    Plain bisection; scalar inputs run a float loop, arrays run element-wise.
    """
    if np.ndim(lo) == 0 and np.ndim(hi) == 0:
        lo = float(lo)
        hi = float(hi)
        for _ in range(_MAX_BISECT):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if g(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    for _ in range(_MAX_BISECT):
        if np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        neg = g(mid) < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    return 0.5 * (lo + hi)


def _maybe_scalar(out, like):
    if np.ndim(like) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class FundamentalDiagram:
    """Concave flux law rho -> F(rho) with critical point (rho_star, sigma).

    ``flux`` and ``derivative`` must accept floats and numpy arrays.
    Validation samples the flux on a uniform grid and rejects functions that
    leave the admissible triangle, are not concave, exceed slope one, or whose
    maximum is not (rho_star, sigma).
    """

    flux: Callable = field(repr=False)
    derivative: Callable = field(repr=False)
    rho_star: float
    sigma: float
    samples: int = 1001
    validate: bool = True

    def __post_init__(self):
        if not (0.0 < self.rho_star < 1.0):
            raise ValueError(f"rho_star must lie in (0, 1), got {self.rho_star}")
        if not (0.0 < self.sigma <= 1.0):
            raise ValueError(f"sigma must lie in (0, 1], got {self.sigma}")
        if self.samples < 3:
            raise ValueError("need at least 3 validation samples")
        if self.validate:
            self._validate()

    def _validate(self) -> None:
        r = np.linspace(0.0, 1.0, self.samples)
        f = np.asarray(self.flux(r), dtype=float)
        if abs(f[0]) > _VALIDATION_TOL or abs(f[-1]) > _VALIDATION_TOL:
            raise ValueError("flux must vanish at rho = 0 and rho = 1")
        if np.any(f < -_VALIDATION_TOL) or np.any(f > r + _VALIDATION_TOL):
            raise ValueError("flux must satisfy 0 <= F(rho) <= rho")
        second = f[:-2] - 2.0 * f[1:-1] + f[2:]
        if np.any(second > _VALIDATION_TOL):
            raise ValueError("flux is not concave on the sampled grid")
        peak = float(self.flux(self.rho_star))
        if abs(peak - self.sigma) > _VALIDATION_TOL:
            raise ValueError(
                f"flux({self.rho_star}) = {peak} does not equal sigma = {self.sigma}"
            )
        if np.any(f > self.sigma + _VALIDATION_TOL):
            raise ValueError("flux exceeds sigma away from rho_star")
        slope = np.asarray(self.derivative(r), dtype=float)
        if np.any(slope > 1.0 + _VALIDATION_TOL):
            raise ValueError("flux slope exceeds the free-flow speed 1")

    # -- basic range checks -------------------------------------------------

    def _check_density(self, rho):
        if np.ndim(rho) == 0:
            r = float(rho)
            if r < -_VALIDATION_TOL or r > 1.0 + _VALIDATION_TOL:
                raise ValueError("density outside [0, 1]")
            return min(max(r, 0.0), 1.0)
        rho = np.asarray(rho, dtype=float)
        if np.any(rho < -_VALIDATION_TOL) or np.any(rho > 1.0 + _VALIDATION_TOL):
            raise ValueError("density outside [0, 1]")
        return np.clip(rho, 0.0, 1.0)

    def _check_capacity(self, C):
        if np.ndim(C) == 0:
            c = float(C)
            if c < -_VALIDATION_TOL or c > self.sigma + _VALIDATION_TOL:
                raise ValueError(f"flux value outside [0, sigma = {self.sigma}]")
            return min(max(c, 0.0), self.sigma)
        C = np.asarray(C, dtype=float)
        if np.any(C < -_VALIDATION_TOL) or np.any(C > self.sigma + _VALIDATION_TOL):
            raise ValueError(f"flux value outside [0, sigma = {self.sigma}]")
        return np.clip(C, 0.0, self.sigma)

    # -- inverse branches ----------------------------------------------------

    def rho_minus(self, C):
        """Free-flow inverse: the density in [0, rho_star] with F(rho) = C."""
        C = self._check_capacity(C)
        if np.ndim(C) == 0:
            if C <= 0.0:
                return 0.0
            if C >= self.sigma:
                return self.rho_star
            return _bisect_increasing(lambda r: self.flux(r) - C, 0.0, self.rho_star)
        root = _bisect_increasing(
            lambda r: self.flux(r) - C, np.zeros_like(C), np.full_like(C, self.rho_star)
        )
        out = np.where(C <= 0.0, 0.0, np.where(C >= self.sigma, self.rho_star, root))
        return _maybe_scalar(out, C)

    def rho_plus(self, C):
        """Congested inverse: the density in [rho_star, 1] with F(rho) = C."""
        C = self._check_capacity(C)
        if np.ndim(C) == 0:
            if C <= 0.0:
                return 1.0
            if C >= self.sigma:
                return self.rho_star
            return _bisect_increasing(lambda r: C - self.flux(r), self.rho_star, 1.0)
        root = _bisect_increasing(
            lambda r: C - self.flux(r), np.full_like(C, self.rho_star), np.ones_like(C)
        )
        out = np.where(C <= 0.0, 1.0, np.where(C >= self.sigma, self.rho_star, root))
        return _maybe_scalar(out, C)

    def tau(self, rho):
        """Conjugate density: tau(rho) != rho with F(tau(rho)) = F(rho)."""
        rho = self._check_density(rho)
        f = self.flux(rho)
        out = np.where(
            rho < self.rho_star,
            self.rho_plus(f),
            np.where(rho > self.rho_star, self.rho_minus(f), self.rho_star),
        )
        return _maybe_scalar(out, rho)

    # -- equilibrium ratio and capacities -------------------------------------

    def z_of_rho(self, rho):
        """Equilibrium driving ratio Z(rho) = F(rho) / (1 - rho + F(rho)).

        At rho = 1 the quotient is 0/0; full congestion is mapped to 1.
        """
        rho = self._check_density(rho)
        if np.ndim(rho) == 0:
            if rho >= 1.0:
                return 1.0
            f = float(self.flux(rho))
            return f / (1.0 - rho + f)
        f = self.flux(rho)
        den = 1.0 - rho + f
        out = np.where(rho >= 1.0, 1.0, f / np.where(den > 0.0, den, 1.0))
        return _maybe_scalar(out, rho)

    def demand(self, rho):
        """Maximum flux a road at density rho can send downstream."""
        rho = self._check_density(rho)
        if np.ndim(rho) == 0:
            return float(self.flux(rho)) if rho <= self.rho_star else self.sigma
        out = np.where(rho <= self.rho_star, self.flux(rho), self.sigma)
        return _maybe_scalar(out, rho)

    def supply(self, rho):
        """Maximum flux a road at density rho can accept from upstream."""
        rho = self._check_density(rho)
        if np.ndim(rho) == 0:
            return self.sigma if rho <= self.rho_star else float(self.flux(rho))
        out = np.where(rho <= self.rho_star, self.sigma, self.flux(rho))
        return _maybe_scalar(out, rho)

    def check_subcharacteristic(self, samples: int = 1001) -> bool:
        """Sampled check of -F(rho)/(1 - rho) <= F'(rho) <= 1."""
        r = np.linspace(0.0, 1.0, samples)[:-1]
        slope = np.asarray(self.derivative(r), dtype=float)
        lower = -np.asarray(self.flux(r), dtype=float) / (1.0 - r)
        ok_lower = np.all(slope >= lower - _VALIDATION_TOL)
        ok_upper = np.all(slope <= 1.0 + _VALIDATION_TOL)
        return bool(ok_lower and ok_upper)


def lwr_diagram() -> FundamentalDiagram:
    """Quadratic diagram F(rho) = rho (1 - rho) with rho_star = 1/2, sigma = 1/4."""
    return FundamentalDiagram(
        flux=lambda rho: rho * (1.0 - rho),
        derivative=lambda rho: 1.0 - 2.0 * np.asarray(rho, dtype=float),
        rho_star=0.5,
        sigma=0.25,
    )
