"""Boundary layers, half-Riemann classes, and the junction matching table."""

import math

import numpy as np
import pytest

from mergeflow import (
    LayerProblem,
    LayerSide,
    classify_fixpoints,
    classify_half_riemann,
    enumerate_layer_couplings,
    integrate_layer,
    left_boundary_condition,
    macro_fair_merge,
    match_fair_merge,
    matching_report,
    right_boundary_condition,
    settles_to,
)


def rho_minus(C):
    return 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * C))


def rho_plus(C):
    return 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * C))


# -- layer ODE -----------------------------------------------------------------


def test_left_layer_converges_to_congested_state(lwr):
    t = integrate_layer(LayerProblem(LayerSide.LEFT, 0.125, 0.6), lwr, 60.0)
    assert not t.diverged
    assert settles_to(t, rho_plus(0.125))


def test_left_layer_diverges_below_basin(lwr):
    # rho_minus(0.125) = 0.1464...; starting below it the profile leaves [0, 1]
    t = integrate_layer(LayerProblem(LayerSide.LEFT, 0.125, 0.10), lwr, 60.0)
    assert t.diverged


def test_right_layer_converges_to_free_state(lwr):
    t = integrate_layer(LayerProblem(LayerSide.RIGHT, 0.125, 0.6), lwr, 60.0)
    assert not t.diverged
    assert settles_to(t, rho_minus(0.125))


def test_right_layer_escapes_above_basin(lwr):
    # above rho_plus the profile creeps to the jam state instead of the
    # free-flow attractor; rho = 1 is only reached asymptotically
    t = integrate_layer(LayerProblem(LayerSide.RIGHT, 0.125, 0.95), lwr, 60.0)
    assert not settles_to(t, rho_minus(0.125))
    assert t.rho[-1] > 0.999


def test_layer_fixpoints_are_constant_solutions(lwr):
    # the stable fixpoint stays put indefinitely; the unstable one only over
    # a short window before round-off is amplified
    stable = {LayerSide.LEFT: rho_plus(0.18), LayerSide.RIGHT: rho_minus(0.18)}
    for side in (LayerSide.LEFT, LayerSide.RIGHT):
        t = integrate_layer(LayerProblem(side, 0.18, stable[side]), lwr, 40.0)
        assert np.all(np.abs(t.rho - stable[side]) < 1e-7)
        other = rho_minus(0.18) if side is LayerSide.LEFT else rho_plus(0.18)
        t = integrate_layer(LayerProblem(side, 0.18, other), lwr, 4.0)
        assert np.all(np.abs(t.rho - other) < 1e-8)


def test_critical_layer_decays_algebraically(lwr):
    # at C = sigma the linearization vanishes and the deviation decays like
    # 1 / y instead of exponentially
    crit = integrate_layer(LayerProblem(LayerSide.LEFT, 0.25, 0.7), lwr, 400.0, 2048)
    sub = integrate_layer(LayerProblem(LayerSide.LEFT, 0.125, 0.7), lwr, 400.0, 2048)
    dev_crit = np.abs(crit.rho - 0.5)
    dev_sub = np.abs(sub.rho - rho_plus(0.125))
    i30 = np.searchsorted(crit.y, 30.0)
    assert dev_crit[i30] > 1e-3
    assert dev_sub[i30] < 1e-9
    # halving rate: deviation at 2y is about half the deviation at y
    i100 = np.searchsorted(crit.y, 100.0)
    i200 = np.searchsorted(crit.y, 200.0)
    ratio = dev_crit[i100] / dev_crit[i200]
    assert 1.7 < ratio < 2.3


def test_degenerate_capacity_layers(lwr):
    # C = 0: everything drains to the absorbing state of the side
    left = integrate_layer(LayerProblem(LayerSide.LEFT, 0.0, 0.4), lwr, 10.0)
    assert settles_to(left, 1.0, tol=1e-12)
    right = integrate_layer(LayerProblem(LayerSide.RIGHT, 0.0, 0.4), lwr, 10.0)
    assert settles_to(right, 0.0, tol=1e-12)
    frozen = integrate_layer(LayerProblem(LayerSide.LEFT, 0.0, 1.0), lwr, 10.0)
    assert np.all(frozen.rho == 1.0)


def test_integrate_layer_validates_start(lwr):
    with pytest.raises(ValueError):
        integrate_layer(LayerProblem(LayerSide.LEFT, 0.125, 1.2), lwr, 10.0)


# -- fixpoint classification -----------------------------------------------------


def test_fixpoint_table_generic_capacity(lwr):
    rep = classify_fixpoints(lwr, LayerSide.LEFT, 0.125)
    assert abs(rep.stable - rho_plus(0.125)) < 1e-12
    assert abs(rep.unstable - rho_minus(0.125)) < 1e-12
    assert abs(rep.attraction[0] - rho_minus(0.125)) < 1e-12
    assert rep.attraction[1] == 1.0
    assert rep.attraction_closed == (False, False)

    rep = classify_fixpoints(lwr, LayerSide.RIGHT, 0.125)
    assert abs(rep.stable - rho_minus(0.125)) < 1e-12
    assert rep.attraction[0] == 0.0
    assert abs(rep.attraction[1] - rho_plus(0.125)) < 1e-12
    assert rep.attraction_closed == (True, False)


def test_fixpoint_table_critical_capacity(lwr):
    rep = classify_fixpoints(lwr, LayerSide.LEFT, 0.25)
    assert rep.stable == 0.5
    assert rep.attraction == (0.5, 1.0)
    assert rep.attraction_closed == (True, False)

    rep = classify_fixpoints(lwr, LayerSide.RIGHT, 0.25)
    assert rep.stable == 0.5
    assert rep.attraction == (0.0, 0.5)
    assert rep.attraction_closed == (True, True)


def test_fixpoint_table_zero_capacity(lwr):
    rep = classify_fixpoints(lwr, LayerSide.LEFT, 0.0)
    assert rep.stable == 1.0
    assert rep.attraction == (0.0, 1.0)
    assert rep.attraction_closed == (False, True)

    rep = classify_fixpoints(lwr, LayerSide.RIGHT, 0.0)
    assert rep.stable == 0.0
    assert rep.attraction == (0.0, 1.0)
    assert rep.attraction_closed == (True, False)


def test_fixpoints_match_simulation(lwr, rng):
    # sampled capacities: the reported attractor is where trajectories land
    for _ in range(10):
        C = float(rng.uniform(0.02, 0.23))
        for side in (LayerSide.LEFT, LayerSide.RIGHT):
            rep = classify_fixpoints(lwr, side, C)
            lo, hi = rep.attraction
            rho0 = float(rng.uniform(lo + 0.01, hi - 0.01))
            t = integrate_layer(LayerProblem(side, C, rho0), lwr, 300.0, 1024)
            assert settles_to(t, rep.stable), (side, C, rho0)


# -- half-Riemann classes ---------------------------------------------------------


def test_half_riemann_left(lwr):
    free = classify_half_riemann(lwr, LayerSide.LEFT, 0.3)
    assert free.label == "RP1"
    assert free.admissible == ((0.0, 0.5),)
    assert free.contains(0.2) and not free.contains(0.7)

    jam = classify_half_riemann(lwr, LayerSide.LEFT, 0.7)
    assert jam.label == "RP2"
    assert len(jam.admissible) == 2
    assert jam.admissible[0][0] == 0.0
    assert abs(jam.admissible[0][1] - 0.3) < 1e-12  # conjugate of 0.7
    assert jam.admissible[1] == (0.7, 0.7)
    assert jam.contains(0.25) and jam.contains(0.7)
    assert not jam.contains(0.5)


def test_half_riemann_right(lwr):
    jam = classify_half_riemann(lwr, LayerSide.RIGHT, 0.7)
    assert jam.label == "RP1"
    assert jam.admissible == ((0.5, 1.0),)

    free = classify_half_riemann(lwr, LayerSide.RIGHT, 0.3)
    assert free.label == "RP2"
    assert free.contains(0.3) and free.contains(0.8)
    assert not free.contains(0.5)


# -- kinetic boundary data ---------------------------------------------------------


def test_left_boundary_free_inflow(lwr):
    # z = 0.2 inverts to rho = 0.25 on the free branch
    res = left_boundary_condition(lwr, 0.2, 0.3)
    assert res.case == "1a"
    assert abs(res.C - 0.1875) < 1e-12
    assert abs(res.rho_K - 0.25) < 1e-12
    assert abs(res.rho_0 - 0.25) < 1e-12


def test_left_boundary_saturated(lwr):
    # z = 0.4 exceeds z(rho_star) = 1/3: flux saturates at sigma
    res = left_boundary_condition(lwr, 0.4, 0.3)
    assert res.case == "2"
    assert res.C == 0.25
    assert res.rho_K == 0.5
    assert abs(res.rho_0 - 0.625) < 1e-12


def test_left_boundary_congested_interior(lwr):
    res = left_boundary_condition(lwr, 0.2, 0.7)
    assert res.case == "1b"
    assert abs(res.rho_K - 0.25) < 1e-12

    res = left_boundary_condition(lwr, 0.5, 0.7)
    assert res.case == "3"
    assert abs(res.C - 0.21) < 1e-12
    assert res.rho_K == 0.7
    assert abs(res.rho_0 - 0.79) < 1e-12


def test_right_boundary_cases(lwr):
    # w = 0.6 inverts rho - F(rho) = rho^2 on the congested branch
    res = right_boundary_condition(lwr, 0.6, 0.7)
    assert res.case == "1a"
    root = math.sqrt(0.6)
    assert abs(res.rho_K - root) < 1e-12
    assert abs(res.C - root * (1.0 - root)) < 1e-12

    res = right_boundary_condition(lwr, 0.1, 0.7)
    assert res.case == "2"
    assert res.C == 0.25
    assert abs(res.rho_0 - 0.35) < 1e-12

    res = right_boundary_condition(lwr, 0.6, 0.3)
    assert res.case == "1b"
    assert abs(res.rho_K - root) < 1e-12

    res = right_boundary_condition(lwr, 0.3, 0.3)
    assert res.case == "3"
    assert abs(res.C - 0.21) < 1e-12
    assert abs(res.rho_0 - 0.51) < 1e-12


def test_boundary_input_validated(lwr):
    with pytest.raises(ValueError):
        left_boundary_condition(lwr, 1.3, 0.4)
    with pytest.raises(ValueError):
        right_boundary_condition(lwr, -0.2, 0.4)


# -- matched junction solutions ------------------------------------------------------


CASES = [
    # (rho_b1, rho_b2, rho_b3, case, stability, C1, C2, C3, rho_0)
    (0.7, 0.6, 0.2, 1, "UUS", 0.125, 0.125, 0.25, rho_plus(0.125)),
    (0.7, 0.6, 0.8, 2, "UUS", 0.08, 0.08, 0.16, rho_plus(0.08)),
    (0.7, 0.15, 0.2, 3, "UUS", 0.125, 0.125, 0.25, rho_plus(0.125)),
    (0.7, 0.05, 0.2, 3, "USS", 0.2025, 0.0475, 0.25, rho_plus(0.2025)),
    (0.05, 0.7, 0.2, 4, "SUS", 0.0475, 0.2025, 0.25, rho_plus(0.2025)),
    (0.7, 0.2, 0.9, 5, "UUS", 0.045, 0.045, 0.09, rho_plus(0.045)),
    (0.7, 0.02, 0.9, 5, "USS", 0.0704, 0.0196, 0.09, rho_plus(0.0704)),
    (0.02, 0.7, 0.9, 6, "SUS", 0.0196, 0.0704, 0.09, rho_plus(0.0704)),
    (0.1, 0.15, 0.2, 7, "SSU", 0.09, 0.1275, 0.2175, rho_minus(0.2175)),
    (0.45, 0.45, 0.2, 7, "UUS", 0.125, 0.125, 0.25, rho_plus(0.125)),
    (0.45, 0.1, 0.3, 7, "USS", 0.16, 0.09, 0.25, rho_plus(0.16)),
    (0.1, 0.45, 0.3, 7, "SUS", 0.09, 0.16, 0.25, rho_plus(0.16)),
    (0.3, 0.3, 0.7, 8, "UUS", 0.105, 0.105, 0.21, rho_plus(0.105)),
    (0.1, 0.3, 0.7, 8, "SUS", 0.09, 0.12, 0.21, rho_plus(0.12)),
    (0.3, 0.1, 0.7, 8, "USS", 0.12, 0.09, 0.21, rho_plus(0.12)),
    (0.05, 0.05, 0.8, 8, "SSU", 0.0475, 0.0475, 0.095, rho_minus(0.095)),
]


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c[0]}-{c[1]}-{c[2]}")
def test_match_fair_merge_cases(case, lwr):
    rho_b1, rho_b2, rho_b3, number, stability, C1, C2, C3, rho_0 = case
    m = match_fair_merge(lwr, rho_b1, rho_b2, rho_b3)
    assert m.case_number == number
    assert m.stability == stability
    assert abs(m.C[0] - C1) < 1e-12
    assert abs(m.C[1] - C2) < 1e-12
    assert abs(m.C[2] - C3) < 1e-12
    assert abs(m.rho_0 - rho_0) < 1e-9
    assert abs(m.C[2] - m.C[0] - m.C[1]) < 1e-15


def test_match_equals_macro_on_grid(lwr):
    grid = np.linspace(0.0, 1.0, 11)
    for r1 in grid:
        for r2 in grid:
            for r3 in grid:
                m = match_fair_merge(lwr, float(r1), float(r2), float(r3))
                mac = macro_fair_merge(lwr, float(r1), float(r2), float(r3))
                assert abs(m.C[0] - mac.C1) < 1e-12
                assert abs(m.C[1] - mac.C2) < 1e-12
                assert abs(m.C[2] - mac.C3) < 1e-12


def test_match_consistent_with_coupling_rules(lwr):
    for rho_b1, rho_b2, rho_b3, *_ in CASES:
        m = match_fair_merge(lwr, rho_b1, rho_b2, rho_b3)
        verdict = enumerate_layer_couplings(lwr, tuple(m.stability), m.C)
        assert verdict.admissible, (m.stability, m.C, verdict.reason)
        lo, hi = verdict.rho0_bounds
        assert lo - 1e-9 <= m.rho_0 <= hi + 1e-9


# -- admissible stability patterns -----------------------------------------------------


def test_coupling_even_split_completion(lwr):
    v = enumerate_layer_couplings(lwr, ("U", "U", "S"), (None, None, 0.2))
    assert v.admissible
    assert v.C == (0.1, 0.1, 0.2)
    lo, hi = v.rho0_bounds
    assert abs(lo - rho_plus(0.1)) < 1e-9
    assert abs(hi - rho_plus(0.1)) < 1e-9


def test_coupling_balance_completion(lwr):
    v = enumerate_layer_couplings(lwr, ("S", "S", "U"), (0.08, 0.1, None))
    assert v.admissible
    assert abs(v.C[2] - 0.18) < 1e-15
    lo, hi = v.rho0_bounds
    assert abs(lo - rho_minus(0.18)) < 1e-9
    assert hi == lo


def test_coupling_all_stable_interval(lwr):
    v = enumerate_layer_couplings(lwr, ("S", "S", "S"), (0.1, 0.05, 0.15))
    assert v.admissible
    lo, hi = v.rho0_bounds
    assert abs(lo - rho_minus(0.15)) < 1e-9
    assert abs(hi - rho_plus(0.1)) < 1e-9
    assert lo < hi


def test_coupling_rejections(lwr):
    assert not enumerate_layer_couplings(lwr, ("U", "U", "U"), (0.1, 0.1, 0.2)).admissible
    assert not enumerate_layer_couplings(lwr, ("S", "U", "U"), (0.1, 0.1, 0.2)).admissible
    assert not enumerate_layer_couplings(lwr, ("U", "S", "U"), (0.1, 0.1, 0.2)).admissible
    # uneven split contradicts equal ghost densities on two unstable senders
    assert not enumerate_layer_couplings(lwr, ("U", "U", "S"), (0.08, 0.12, 0.2)).admissible
    # road 3 must carry at least twice the stable sender
    assert not enumerate_layer_couplings(lwr, ("U", "S", "S"), (0.02, 0.08, 0.1)).admissible
    # saturated outgoing road contradicts a stable layer there
    assert not enumerate_layer_couplings(lwr, ("S", "S", "U"), (0.125, 0.125, 0.25)).admissible
    # flux balance violated
    assert not enumerate_layer_couplings(lwr, ("S", "S", "S"), (0.1, 0.1, 0.15)).admissible


def test_coupling_argument_validation(lwr):
    with pytest.raises(ValueError):
        enumerate_layer_couplings(lwr, ("U", "U", "X"), (0.1, 0.1, 0.2))
    with pytest.raises(ValueError):
        enumerate_layer_couplings(lwr, ("S", "S", "U"), (0.1, None, None))


# -- report ------------------------------------------------------------------------------


def test_matching_report_csv(lwr):
    points = [(0.1, 0.15, 0.2), (0.7, 0.6, 0.2)]
    text = matching_report(lwr, points)
    lines = text.strip().splitlines()
    assert lines[0].startswith("rho_b1,rho_b2,rho_b3,case,rp,stability")
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[3] == "7"
    assert first[5] == "SSU"
    assert abs(float(first[12]) - rho_minus(0.2175)) < 1e-9
