"""Boundary layer analysis for the kinetic model in the small-epsilon limit.

Near a boundary or junction the kinetic solution is described, in the
stretched coordinate y = x/epsilon, by the layer ODE at constant flux C:

    left boundary:   d(rho)/dy =  (1 - rho) (F(rho) - C) / C,
    right boundary: -d(rho)/dy =  (1 - rho) (F(rho) - C) / C,

whose fixpoints are the two flux inverses rho_minus(C) and rho_plus(C).  The
layer value at y = 0 is rho_0; the macroscopic trace rho_K is the fixpoint the
layer relaxes to (or rho_0 itself when the relevant fixpoint is unstable and
the layer is constant).

This module classifies fixpoint stability, the admissible half-Riemann
traces, resolves kinetic boundary data (Z on the left, w on the right) into
macroscopic boundary values, matches the fair merge conditions to
supply/demand junction fluxes, and enumerates which stability patterns of the
three layers at a merge admit a coupled solution.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .diagram import FundamentalDiagram, _bisect_increasing

__all__ = [
    "LayerSide",
    "LayerProblem",
    "LayerTrajectory",
    "FixpointReport",
    "HalfRiemannClass",
    "BoundaryResolution",
    "MatchResult",
    "CouplingVerdict",
    "integrate_layer",
    "settles_to",
    "classify_fixpoints",
    "classify_half_riemann",
    "left_boundary_condition",
    "right_boundary_condition",
    "match_fair_merge",
    "enumerate_layer_couplings",
    "matching_report",
]

_TOL = 1e-12


class LayerSide(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class LayerProblem:
    """Half-space layer problem: boundary side, layer flux C, value at y = 0."""

    side: LayerSide
    C: float
    rho0: float


@dataclass(frozen=True)
class LayerTrajectory:
    """Sampled layer profile; ``diverged`` marks an exit from [0, 1]."""

    y: np.ndarray
    rho: np.ndarray
    diverged: bool


@dataclass(frozen=True)
class FixpointReport:
    """Stability of the layer fixpoints rho_minus(C) <= rho_plus(C).

    ``attraction`` is the domain of attraction of the stable fixpoint, with
    closedness of each endpoint in ``attraction_closed``.  Initial values at
    the unstable fixpoint give constant layers; everything else diverges.
    """

    side: LayerSide
    C: float
    rho_minus: float
    rho_plus: float
    stable: float
    unstable: float | None
    attraction: tuple[float, float]
    attraction_closed: tuple[bool, bool]


@dataclass(frozen=True)
class HalfRiemannClass:
    """Admissible macroscopic traces rho_K of a boundary half-Riemann problem."""

    side: LayerSide
    rho_b: float
    label: str  # "RP1" or "RP2"
    admissible: tuple[tuple[float, float], ...]

    def contains(self, value: float, tol: float = 1e-9) -> bool:
        return any(lo - tol <= value <= hi + tol for lo, hi in self.admissible)


@dataclass(frozen=True)
class BoundaryResolution:
    """Macroscopic data induced by kinetic boundary data: flux C, trace rho_K,
    layer value rho_0, and the dispatch case ('1a', '1b', '2' or '3')."""

    case: str
    C: float
    rho_K: float
    rho_0: float


@dataclass(frozen=True)
class MatchResult:
    """Junction fluxes and states matching three layers at a fair merge."""

    C: tuple[float, float, float]
    rho_K: tuple[float, float, float]
    rho_0: float
    case_number: int
    rp_case: str
    stability: str


@dataclass(frozen=True)
class CouplingVerdict:
    """Admissibility of a stability pattern with given junction fluxes."""

    admissible: bool
    stability: str
    C: tuple[float, float, float] | None
    rho0_bounds: tuple[float, float] | None
    reason: str


# ---------------------------------------------------------------------------
# Layer ODE
# ---------------------------------------------------------------------------


def integrate_layer(
    problem: LayerProblem,
    diagram: FundamentalDiagram,
    y_max: float,
    steps: int = 512,
) -> LayerTrajectory:
    """Integrate the layer ODE from rho_0 over [0, y_max].

    Adaptive embedded Runge-Kutta integration with absolute tolerance 1e-10.
    The integration stops early, and the trajectory is flagged as diverged,
    when the profile leaves [0, 1].  For C = 0 the equation degenerates and
    the profile jumps straight to the attracting state (left: 1, right: 0)
    unless it starts at a fixpoint.
    """
    if not 0.0 <= problem.rho0 <= 1.0:
        raise ValueError(f"rho0 = {problem.rho0} outside [0, 1]")
    C = float(diagram._check_capacity(problem.C))
    y = np.linspace(0.0, y_max, steps)

    if C == 0.0:
        attractor = 1.0 if problem.side is LayerSide.LEFT else 0.0
        rho = np.full_like(y, attractor)
        rho[0] = problem.rho0
        if problem.rho0 in (0.0, 1.0):
            rho[:] = problem.rho0
        return LayerTrajectory(y, rho, diverged=False)

    sign = 1.0 if problem.side is LayerSide.LEFT else -1.0

    def rhs(_, state):
        r = min(max(state[0], 0.0), 1.0)
        return [sign * (1.0 - r) * (float(diagram.flux(r)) - C) / C]

    def exit_low(_, state):
        return state[0] + 1e-9

    def exit_high(_, state):
        return state[0] - 1.0 - 1e-9

    exit_low.terminal = True
    exit_high.terminal = True

    sol = solve_ivp(
        rhs,
        (0.0, y_max),
        [problem.rho0],
        t_eval=y,
        rtol=1e-10,
        atol=1e-10,
        events=(exit_low, exit_high),
    )
    diverged = sol.status == 1
    return LayerTrajectory(sol.t, sol.y[0], diverged)


def settles_to(
    trajectory: LayerTrajectory, value: float, tol: float = 1e-6, window: int = 10
) -> bool:
    """True when the last ``window`` samples all lie within tol of value."""
    if trajectory.diverged or trajectory.rho.size < window:
        return False
    return bool(np.all(np.abs(trajectory.rho[-window:] - value) < tol))


def classify_fixpoints(
    diagram: FundamentalDiagram, side: LayerSide, C: float
) -> FixpointReport:
    """Stability of the layer fixpoints at flux C.

    Left layers attract towards rho_plus from (rho_minus, 1); right layers
    towards rho_minus from [0, rho_plus).  At C = sigma both fixpoints merge
    at rho_star, attracting from one side only.  At C = 0 the fixpoints are
    the corners 0 and 1; the congested corner attracts on the left, the
    vacuum corner on the right.
    """
    C = float(diagram._check_capacity(C))
    rm = diagram.rho_minus(C)
    rp = diagram.rho_plus(C)
    if C >= diagram.sigma:
        star = diagram.rho_star
        if side is LayerSide.LEFT:
            return FixpointReport(side, C, star, star, star, None, (star, 1.0), (True, False))
        return FixpointReport(side, C, star, star, star, None, (0.0, star), (True, True))
    if side is LayerSide.LEFT:
        if C == 0.0:
            return FixpointReport(side, C, rm, rp, rp, rm, (0.0, 1.0), (False, True))
        return FixpointReport(side, C, rm, rp, rp, rm, (rm, 1.0), (False, False))
    if C == 0.0:
        return FixpointReport(side, C, rm, rp, rm, rp, (0.0, 1.0), (True, False))
    return FixpointReport(side, C, rm, rp, rm, rp, (0.0, rp), (True, False))


def classify_half_riemann(
    diagram: FundamentalDiagram, side: LayerSide, rho_b: float
) -> HalfRiemannClass:
    """Admissible traces of the half-Riemann problem with interior state rho_b.

    RP1 covers boundary states whose waves can leave the domain freely; RP2
    additionally admits the unchanged state rho_b as an isolated trace.
    """
    rho_b = float(diagram._check_density(rho_b))
    star = diagram.rho_star
    if side is LayerSide.LEFT:
        if rho_b <= star:
            return HalfRiemannClass(side, rho_b, "RP1", ((0.0, star),))
        return HalfRiemannClass(
            side, rho_b, "RP2", ((0.0, diagram.tau(rho_b)), (rho_b, rho_b))
        )
    if rho_b >= star:
        return HalfRiemannClass(side, rho_b, "RP1", ((star, 1.0),))
    return HalfRiemannClass(
        side, rho_b, "RP2", ((rho_b, rho_b), (diagram.tau(rho_b), 1.0))
    )


# ---------------------------------------------------------------------------
# Kinetic boundary data
# ---------------------------------------------------------------------------


def _invert_z(diagram: FundamentalDiagram, z: float, lo: float, hi: float) -> float:
    """Solve z_of_rho(rho) = z on [lo, hi]; z_of_rho is non-decreasing."""
    return float(_bisect_increasing(lambda r: diagram.z_of_rho(r) - z, lo, hi))


def _invert_w(diagram: FundamentalDiagram, w: float, lo: float, hi: float) -> float:
    """Solve rho - F(rho) = w on [lo, hi]; increasing since F' <= 1."""
    return float(_bisect_increasing(lambda r: r - diagram.flux(r) - w, lo, hi))


def left_boundary_condition(
    diagram: FundamentalDiagram, z_in: float, rho_b: float
) -> BoundaryResolution:
    """Resolve prescribed ingoing ratio Z at a left boundary.

    Cases 1a/1b: the ingoing data selects a free-flow state rho_minus with
    Z(rho_minus) = z_in and the layer is constant.  Case 2 (transonic,
    rho_b <= rho_star): the flux saturates at sigma and a layer connects
    rho_0 to rho_star.  Case 3 (outgoing, rho_b > rho_star): the interior
    state is preserved, C = F(rho_b), with a layer down to rho_b.
    """
    if not 0.0 <= z_in <= 1.0:
        raise ValueError(f"z_in = {z_in} outside [0, 1]")
    rho_b = float(diagram._check_density(rho_b))
    star = diagram.rho_star
    if rho_b <= star:
        z_crit = diagram.z_of_rho(star)
        if z_in <= z_crit:
            rho = _invert_z(diagram, z_in, 0.0, star)
            return BoundaryResolution("1a", float(diagram.flux(rho)), rho, rho)
        rho_0 = 1.0 + diagram.sigma - diagram.sigma / z_in
        return BoundaryResolution("2", diagram.sigma, star, rho_0)
    t = diagram.tau(rho_b)
    z_crit = diagram.z_of_rho(t)
    if z_in <= z_crit:
        rho = _invert_z(diagram, z_in, 0.0, t)
        return BoundaryResolution("1b", float(diagram.flux(rho)), rho, rho)
    C = float(diagram.flux(rho_b))
    rho_0 = 1.0 + C - C / z_in
    return BoundaryResolution("3", C, rho_b, rho_0)


def right_boundary_condition(
    diagram: FundamentalDiagram, w_in: float, rho_b: float
) -> BoundaryResolution:
    """Resolve prescribed ingoing stopped density w at a right boundary.

    Mirror of the left boundary: cases 1a/1b select a congested state
    rho_plus with rho_plus - F(rho_plus) = w_in; case 2 saturates at sigma
    with rho_0 = w_in + sigma; case 3 keeps C = F(rho_b) with
    rho_0 = w_in + F(rho_b).
    """
    if not 0.0 <= w_in <= 1.0:
        raise ValueError(f"w_in = {w_in} outside [0, 1]")
    rho_b = float(diagram._check_density(rho_b))
    star = diagram.rho_star
    if rho_b >= star:
        w_crit = star - diagram.sigma
        if w_in >= w_crit:
            rho = _invert_w(diagram, w_in, star, 1.0)
            return BoundaryResolution("1a", float(diagram.flux(rho)), rho, rho)
        return BoundaryResolution("2", diagram.sigma, star, w_in + diagram.sigma)
    t = diagram.tau(rho_b)
    w_crit = t - float(diagram.flux(t))
    if w_in >= w_crit:
        rho = _invert_w(diagram, w_in, t, 1.0)
        return BoundaryResolution("1b", float(diagram.flux(rho)), rho, rho)
    C = float(diagram.flux(rho_b))
    return BoundaryResolution("3", C, rho_b, w_in + C)


# ---------------------------------------------------------------------------
# Fair merge matching
# ---------------------------------------------------------------------------


def match_fair_merge(
    diagram: FundamentalDiagram, rho_b1: float, rho_b2: float, rho_b3: float
) -> MatchResult:
    """Junction fluxes, traces and layer value for the fair merge.

    Dispatches on which side of rho_star each interior state lies (the
    half-Riemann type of each road) and, inside each case, on which roads are
    flux-limited.  The resulting fluxes coincide with the supply/demand
    allocation of macro_fair_merge; rho_0 is the common kinetic density of
    all three roads at the junction.
    """
    rho_b1 = float(diagram._check_density(rho_b1))
    rho_b2 = float(diagram._check_density(rho_b2))
    rho_b3 = float(diagram._check_density(rho_b3))
    star = diagram.rho_star
    s = diagram.sigma
    half = 0.5 * s
    F1 = float(diagram.flux(rho_b1))
    F2 = float(diagram.flux(rho_b2))
    F3 = float(diagram.flux(rho_b3))
    in1 = rho_b1 >= star
    in2 = rho_b2 >= star
    out3 = rho_b3 <= star

    def result(number, C, rho_K, rho_0, stability):
        rp = "-".join(
            (
                "RP1" if in1 else "RP2",
                "RP1" if in2 else "RP2",
                "RP1" if out3 else "RP2",
            )
        )
        return MatchResult(C, rho_K, rho_0, number, rp, stability)

    if in1 and in2 and out3:  # case 1
        r0 = diagram.rho_plus(half)
        return result(1, (half, half, s), (r0, r0, star), r0, "UUS")
    if in1 and in2 and not out3:  # case 2
        r0 = diagram.rho_plus(0.5 * F3)
        return result(2, (0.5 * F3, 0.5 * F3, F3), (r0, r0, rho_b3), r0, "UUS")
    if in1 and not in2 and out3:  # case 3
        if F2 >= half:
            r0 = diagram.rho_plus(half)
            return result(3, (half, half, s), (r0, r0, star), r0, "UUS")
        r0 = diagram.rho_plus(s - F2)
        return result(3, (s - F2, F2, s), (r0, rho_b2, star), r0, "USS")
    if not in1 and in2 and out3:  # case 4
        if F1 >= half:
            r0 = diagram.rho_plus(half)
            return result(4, (half, half, s), (r0, r0, star), r0, "UUS")
        r0 = diagram.rho_plus(s - F1)
        return result(4, (F1, s - F1, s), (rho_b1, r0, star), r0, "SUS")
    if in1 and not in2 and not out3:  # case 5
        if F3 <= 2.0 * F2:
            r0 = diagram.rho_plus(0.5 * F3)
            return result(5, (0.5 * F3, 0.5 * F3, F3), (r0, r0, rho_b3), r0, "UUS")
        r0 = diagram.rho_plus(F3 - F2)
        return result(5, (F3 - F2, F2, F3), (r0, rho_b2, rho_b3), r0, "USS")
    if not in1 and in2 and not out3:  # case 6
        if F3 <= 2.0 * F1:
            r0 = diagram.rho_plus(0.5 * F3)
            return result(6, (0.5 * F3, 0.5 * F3, F3), (r0, r0, rho_b3), r0, "UUS")
        r0 = diagram.rho_plus(F3 - F1)
        return result(6, (F1, F3 - F1, F3), (rho_b1, r0, rho_b3), r0, "SUS")
    if not in1 and not in2 and out3:  # case 7
        if F1 + F2 <= s:
            r0 = diagram.rho_minus(F1 + F2)
            return result(7, (F1, F2, F1 + F2), (rho_b1, rho_b2, r0), r0, "SSU")
        if F1 >= half and F2 >= half:
            r0 = diagram.rho_plus(half)
            return result(7, (half, half, s), (r0, r0, star), r0, "UUS")
        if F2 <= half:
            r0 = diagram.rho_plus(s - F2)
            return result(7, (s - F2, F2, s), (r0, rho_b2, star), r0, "USS")
        r0 = diagram.rho_plus(s - F1)
        return result(7, (F1, s - F1, s), (rho_b1, r0, star), r0, "SUS")
    # case 8
    if F1 + F2 <= F3:
        r0 = diagram.rho_minus(F1 + F2)
        return result(8, (F1, F2, F1 + F2), (rho_b1, rho_b2, r0), r0, "SSU")
    if F3 <= 2.0 * F1 and F3 <= 2.0 * F2:
        r0 = diagram.rho_plus(0.5 * F3)
        return result(8, (0.5 * F3, 0.5 * F3, F3), (r0, r0, rho_b3), r0, "UUS")
    if F3 >= 2.0 * F2:
        r0 = diagram.rho_plus(F3 - F2)
        return result(8, (F3 - F2, F2, F3), (r0, rho_b2, rho_b3), r0, "USS")
    r0 = diagram.rho_plus(F3 - F1)
    return result(8, (F1, F3 - F1, F3), (rho_b1, r0, rho_b3), r0, "SUS")


def enumerate_layer_couplings(
    diagram: FundamentalDiagram,
    stability: tuple[str, str, str],
    C: tuple[float | None, float | None, float | None],
) -> CouplingVerdict:
    """Check whether a stability pattern admits a coupled layer solution.

    ``stability`` assigns 'U' (unstable, constant layer) or 'S' (stable
    layer) to roads 1, 2, 3.  Missing fluxes are completed from the flux
    balance C3 = C1 + C2 (and C1 = C2 for the U-U-S pattern).  Patterns with
    an unstable layer on road 3 and a stable one on an incoming road cannot
    equalize the junction densities and are rejected, as is U-U-U.
    The returned bounds collapse to a point except for S-S-S, where any
    rho_0 in [rho_minus(C3), min(rho_plus(C1), rho_plus(C2))] works.
    """
    sig = "".join(stability)
    if sorted(set(sig)) not in (["S"], ["U"], ["S", "U"]) or len(sig) != 3:
        raise ValueError(f"stability must be a triple over {{'U','S'}}, got {stability}")

    c1, c2, c3 = C
    if sig == "UUS" and c1 is None and c2 is None and c3 is not None:
        c1 = c2 = 0.5 * c3
    none_count = sum(v is None for v in (c1, c2, c3))
    if none_count > 1:
        raise ValueError("at least two fluxes (or C3 for U-U-S) are required")
    if c1 is None:
        c1 = c3 - c2
    elif c2 is None:
        c2 = c3 - c1
    elif c3 is None:
        c3 = c1 + c2

    fluxes = (float(c1), float(c2), float(c3))
    if any(not 0.0 <= v <= diagram.sigma + _TOL for v in fluxes):
        return CouplingVerdict(False, sig, None, None, "flux outside [0, sigma]")
    if abs(c3 - c1 - c2) > _TOL:
        return CouplingVerdict(False, sig, None, None, "fluxes violate C3 = C1 + C2")

    if sig in ("UUU", "SUU", "USU"):
        return CouplingVerdict(
            False, sig, None, None, "pattern admits no common junction density"
        )
    if sig == "UUS":
        if abs(c1 - c2) > _TOL:
            return CouplingVerdict(False, sig, None, None, "U-U-S requires C1 = C2")
        r0 = diagram.rho_plus(0.5 * c3)
        return CouplingVerdict(True, sig, fluxes, (r0, r0), "")
    if sig == "USS":
        if c3 < 2.0 * c2 - _TOL:
            return CouplingVerdict(False, sig, None, None, "U-S-S requires C3 >= 2 C2")
        r0 = diagram.rho_plus(c1)
        return CouplingVerdict(True, sig, fluxes, (r0, r0), "")
    if sig == "SUS":
        if c3 < 2.0 * c1 - _TOL:
            return CouplingVerdict(False, sig, None, None, "S-U-S requires C3 >= 2 C1")
        r0 = diagram.rho_plus(c2)
        return CouplingVerdict(True, sig, fluxes, (r0, r0), "")
    if sig == "SSU":
        if c3 >= diagram.sigma:
            return CouplingVerdict(
                False, sig, None, None, "S-S-U requires C1 + C2 < sigma"
            )
        r0 = diagram.rho_minus(c3)
        return CouplingVerdict(True, sig, fluxes, (r0, r0), "")
    # SSS
    lo = diagram.rho_minus(c3)
    hi = min(diagram.rho_plus(fluxes[0]), diagram.rho_plus(fluxes[1]))
    return CouplingVerdict(True, sig, fluxes, (lo, hi), "")


def matching_report(diagram: FundamentalDiagram, points) -> str:
    """Tabulate match_fair_merge over (rho_b1, rho_b2, rho_b3) triples as CSV."""
    out = io.StringIO()
    out.write(
        "rho_b1,rho_b2,rho_b3,case,rp,stability,C1,C2,C3,rho_K1,rho_K2,rho_K3,rho_0\n"
    )
    for rho_b1, rho_b2, rho_b3 in points:
        m = match_fair_merge(diagram, rho_b1, rho_b2, rho_b3)
        fields = (
            [rho_b1, rho_b2, rho_b3, m.case_number, m.rp_case, m.stability]
            + list(m.C)
            + list(m.rho_K)
            + [m.rho_0]
        )
        out.write(
            ",".join(
                f"{v:.17g}" if isinstance(v, float) else str(v) for v in fields
            )
            + "\n"
        )
    return out.getvalue()
