"""Cell states, transport step, and exact relaxation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mergeflow import (
    CellState,
    CFLViolation,
    eigenvalues,
    godunov_flux,
    interface_state,
    relax_exact,
    transport_step,
)


def random_states(rng, n):
    rho = rng.uniform(0.0, 1.0, n)
    q = rho * rng.uniform(0.0, 1.0, n)
    return CellState.from_rho_q(rho, q)


def test_cell_state_fields():
    s = CellState(f0=0.3, f1=0.2)
    assert s.rho == 0.5
    assert s.q == 0.2
    assert s.w == 0.3
    assert abs(s.Z - 0.2 / 0.7) < 1e-15


def test_full_stop_ratio_convention():
    assert CellState(f0=1.0, f1=0.0).Z == 1.0


def test_from_rho_q_round_trip():
    s = CellState.from_rho_q(0.6, 0.25)
    assert s.rho == 0.6
    assert s.q == 0.25
    assert abs(s.w - 0.35) < 1e-15


def test_from_rho_q_rejects_outside_region():
    with pytest.raises(ValueError):
        CellState.from_rho_q(0.5, 0.6)
    with pytest.raises(ValueError):
        CellState.from_rho_q(1.2, 0.1)
    with pytest.raises(ValueError):
        CellState.from_rho_q(0.5, -0.1)


def test_from_w_z_round_trip():
    for w in np.linspace(0.0, 0.95, 12):
        for z in np.linspace(0.0, 1.0, 12):
            s = CellState.from_w_z(float(w), float(z))
            assert abs(s.w - w) < 1e-14
            assert abs(s.Z - z) < 1e-14


def test_equilibrium_state(lwr):
    s = CellState.equilibrium(0.3, lwr)
    assert s.rho == 0.3
    assert abs(s.q - 0.21) < 1e-15


@settings(max_examples=300, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_state_algebra(rho, frac):
    q = rho * frac
    s = CellState.from_rho_q(rho, q)
    assert abs(s.w - (rho - q)) < 1e-15
    if s.f0 < 1.0:
        assert abs(s.Z - q / (1.0 - rho + q)) < 1e-12
    assert 0.0 <= s.Z <= 1.0


def test_eigenvalues():
    s = CellState(f0=0.5, f1=0.25)  # Z = 0.5
    lam1, lam2 = eigenvalues(s)
    assert lam2 == 1.0
    assert abs(lam1 + 1.0) < 1e-14
    lam1, _ = eigenvalues(CellState(f0=0.3, f1=0.2))  # Z = 2/7
    assert abs(lam1 + (2.0 / 7.0) / (5.0 / 7.0)) < 1e-14
    lam1, _ = eigenvalues(CellState(f0=1.0, f1=0.0))
    assert lam1 < -1e11  # congested limit


def test_interface_state_mixes_sides():
    left = CellState(f0=0.2, f1=0.4)  # Z = 0.5
    right = CellState(f0=0.3, f1=0.1)
    mid = interface_state(left, right)
    assert mid.w == right.w
    assert abs(mid.Z - left.Z) < 1e-15
    flux = godunov_flux(left, right)
    assert abs(flux.mass_flux - 0.5 * 0.7) < 1e-15
    assert flux.z_flux == left.Z


def test_relax_exact_frozen_value(lwr):
    # rho = 1/2, q = 0.1, dt = epsilon: q -> 1/4 - 0.15 exp(-1)
    s = relax_exact(CellState.from_rho_q(0.5, 0.1), 1e-3, 1e-3, lwr)
    assert abs(s.q - 0.19481808382428364) < 1e-15
    assert s.rho == 0.5


def test_relax_identity_and_limit(lwr):
    s0 = CellState.from_rho_q(0.5, 0.1)
    assert relax_exact(s0, 0.0, 1e-3, lwr) == s0
    far = relax_exact(s0, 0.1, 1e-3, lwr)  # dt / epsilon = 100
    assert abs(far.q - 0.25) < 1e-15
    with pytest.raises(ValueError):
        relax_exact(s0, 0.1, 0.0, lwr)
    with pytest.raises(ValueError):
        relax_exact(s0, -0.1, 1e-3, lwr)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=5.0),
)
def test_relax_preserves_density_and_region(rho, frac, ratio):
    from mergeflow import lwr_diagram

    d = lwr_diagram()
    s0 = CellState.from_rho_q(rho, rho * frac)
    s1 = relax_exact(s0, ratio * 1e-3, 1e-3, d)
    # splitting rho into (f0, f1) again costs at most one rounding step
    assert abs(s1.rho - s0.rho) < 1e-15
    assert -1e-13 <= s1.q <= s1.rho + 1e-13
    # the gap to equilibrium shrinks by exactly exp(-dt/epsilon)
    gap0 = s0.q - d.flux(rho)
    gap1 = s1.q - d.flux(rho)
    assert abs(gap1 - gap0 * math.exp(-ratio)) < 1e-12


def test_transport_constant_state_is_steady():
    cells = CellState(f0=np.full(40, 0.3), f1=np.full(40, 0.2))
    ghost = CellState(f0=0.3, f1=0.2)
    out = transport_step(cells, ghost, ghost, dt=0.004, dx=0.01)
    # fluxes cancel exactly; only the (f0, f1) reconstruction rounds
    assert np.allclose(out.f0, cells.f0, atol=1e-15, rtol=0.0)
    assert np.allclose(out.f1, cells.f1, atol=1e-15, rtol=0.0)
    assert np.array_equal(out.f0 + out.f1, cells.f0 + cells.f1)


def test_transport_conserves_mass(rng):
    n, dx = 64, 1.0 / 64
    cells = random_states(rng, n)
    lam_max = max(1.0, np.max(np.abs(cells.Z / np.maximum(1.0 - cells.Z, 1e-12))))
    dt = 0.9 * dx / lam_max
    left = CellState(f0=0.2, f1=0.3)
    right = CellState(f0=0.4, f1=0.1)
    out = transport_step(cells, left, right, dt=dt, dx=dx)
    influx = left.Z * (1.0 - cells.f0[0])
    outflux = cells.Z[-1] * (1.0 - right.w)
    before = np.sum(cells.f0 + cells.f1) * dx
    after = np.sum(out.f0 + out.f1) * dx
    assert abs(after - before - dt * (influx - outflux)) < 1e-13


def test_transport_preserves_invariant_region(rng):
    n, dx = 50, 1.0 / 50
    for _ in range(
        40
    ):  # includes near-vacuum and near-jam states from the uniform draw
        cells = random_states(rng, n)
        lam_max = max(1.0, np.max(np.abs(cells.Z / np.maximum(1.0 - cells.Z, 1e-12))))
        dt = 0.9 * dx / lam_max
        left = random_states(rng, 1)
        right = random_states(rng, 1)
        out = transport_step(
            cells,
            CellState(float(left.f0[0]), float(left.f1[0])),
            CellState(float(right.f0[0]), float(right.f1[0])),
            dt=dt,
            dx=dx,
        )
        rho = out.f0 + out.f1
        assert np.all(out.f0 >= -1e-13)
        assert np.all(out.f1 >= -1e-13)
        assert np.all(rho <= 1.0 + 1e-13)


def test_transport_rejects_large_step():
    # Z = 0.9 gives wave speed 9, so dt = dx violates the CFL bound
    cells = CellState(f0=np.full(10, 0.1), f1=np.full(10, 0.81))
    ghost = CellState(f0=0.1, f1=0.81)
    with pytest.raises(CFLViolation):
        transport_step(cells, ghost, ghost, dt=0.1, dx=0.1)


def test_transport_upwind_propagation():
    # a disturbance entering from the left moves at most one cell per step
    n, dx = 30, 1.0 / 30
    cells = CellState(f0=np.zeros(n), f1=np.zeros(n))
    left = CellState.from_w_z(0.0, 0.4)
    right = CellState(f0=0.0, f1=0.0)
    state = cells
    for step in range(1, 6):
        state = transport_step(state, left, right, dt=0.4 * dx, dx=dx)
        touched = np.nonzero(state.f0 + state.f1 > 0.0)[0]
        assert touched.size > 0
        assert touched.max() <= step - 1
