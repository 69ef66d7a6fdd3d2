"""Exact spectral evolution, the stepped solver, and forcing couplings."""

import math

import numpy as np
import pytest

from parafreq import (
    CoefficientField,
    ConstantRate,
    Cylinder,
    Forcing,
    ModeMatrix,
    Plane,
    SampledRate,
    ScalarOnU,
    Sphere,
    TimeGrid,
    ToleranceNotMetError,
    enumerate_modes,
    evolve_exact,
    evolve_exact_trajectory,
    evolve_forced,
    forcing_bound_margin,
    mode_from_index,
    quadrature,
)


def _field(bg, t, coeffs_by_index):
    return CoefficientField.from_dict(
        bg, t, {mode_from_index(bg, idx): a for idx, a in coeffs_by_index.items()}
    )


def _coeff(field, idx):
    for mode, a in field.entries:
        if mode.index == idx:
            return a
    return 0.0


# ---------------------------------------------------------------------------
# exact evolution


def test_exact_power_law():
    bg = Plane(1)
    f0 = _field(bg, -1.0, {(1,): 0.7, (3,): -0.2})
    for t in (-0.9, -0.5, -0.25, -0.1):
        ft = evolve_exact(f0, t)
        assert _coeff(ft, (1,)) == pytest.approx(0.7 * (-t) ** 0.5, rel=1e-15)
        assert _coeff(ft, (3,)) == pytest.approx(-0.2 * (-t) ** 1.5, rel=1e-15)


def test_exact_evolution_semigroup():
    bg = Sphere(2)
    f0 = _field(bg, -1.0, {(1, 0): 1.0, (2, 3): 0.4})
    direct = evolve_exact(f0, -0.2)
    via = evolve_exact(evolve_exact(f0, -0.6), -0.2)
    for (m1, a1), (m2, a2) in zip(direct.entries, via.entries):
        assert m1 == m2
        assert a1 == pytest.approx(a2, rel=1e-14)


def test_trajectory_matches_pointwise_evolution():
    bg = Cylinder(1, 1)
    f0 = _field(bg, -1.0, {(1, 0, 0): 0.5, (0, 0, 2): 1.0})
    grid = TimeGrid.uniform(-1.0, -0.25, 7)
    traj = evolve_exact_trajectory(f0, grid)
    for t, field in zip(grid.nodes, traj.fields):
        ref = evolve_exact(f0, t)
        for (m1, a1), (m2, a2) in zip(field.entries, ref.entries):
            assert m1 == m2
            assert a1 == pytest.approx(a2, abs=1e-15)


def test_zero_field_stays_zero():
    bg = Plane(2)
    f0 = CoefficientField.from_dict(bg, -1.0, {})
    assert f0.is_zero
    traj = evolve_exact_trajectory(f0, TimeGrid.uniform(-1.0, -0.5, 5))
    assert all(f.is_zero for f in traj.fields)


# ---------------------------------------------------------------------------
# stepped solver against exact oracles


def test_rk_with_zero_rate_matches_exact():
    bg = Plane(1)
    f0 = _field(bg, -1.0, {(1,): 1.0, (2,): 0.3, (4,): -0.1})
    grid = TimeGrid.uniform(-1.0, -0.1, 181)
    forcing = Forcing(ConstantRate(0.0), ScalarOnU())
    traj = evolve_forced(f0, grid, forcing, local_tol=1e-12)
    worst = 0.0
    for t, field in zip(grid.nodes, traj.fields):
        ref = evolve_exact(f0, t)
        for (m, a), (_, b) in zip(field.entries, ref.entries):
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    assert worst < 1e-10


def test_scalar_rate_closed_form():
    # f = c0*u shifts every coefficient by a common factor exp(c0*(t - t0))
    bg = Sphere(2)
    c0 = 0.8
    f0 = _field(bg, -1.0, {(1, 0): 1.0, (2, 1): -0.5})
    grid = TimeGrid.uniform(-1.0, -0.2, 161)
    traj = evolve_forced(f0, grid, Forcing(ConstantRate(c0), ScalarOnU()), local_tol=1e-12)
    t = grid.nodes[-1]
    factor = math.exp(c0 * (t - (-1.0)))
    ref = evolve_exact(f0, t)
    for (m, a), (_, b) in zip(traj.fields[-1].entries, ref.entries):
        assert a == pytest.approx(b * factor, rel=1e-9)


def test_sampled_rate_matches_constant_rate():
    bg = Plane(1)
    f0 = _field(bg, -1.0, {(2,): 1.0})
    grid = TimeGrid.uniform(-1.0, -0.5, 41)
    const = evolve_forced(f0, grid, Forcing(ConstantRate(0.3), ScalarOnU()), local_tol=1e-11)
    ts = np.linspace(-1.0, -0.4, 25)
    sampled = SampledRate(tuple(ts), tuple(0.3 for _ in ts))
    samp = evolve_forced(f0, grid, Forcing(sampled, ScalarOnU()), local_tol=1e-11)
    for fa, fb in zip(const.fields, samp.fields):
        for (_, a), (_, b) in zip(fa.entries, fb.entries):
            assert a == pytest.approx(b, rel=1e-12)


def test_mode_matrix_nilpotent_closed_form():
    # one-way coupling (3,) -> (1,) on the line admits an explicit solution:
    # a3(t) = A*(-t)^{3/2},  a1(t) = (-t)^{1/2} * (a1(t0)/(-t0)^{1/2}
    #                                + c0*w*A*(t0^2 - t^2)/2)
    bg = Plane(1)
    c0, w = 0.5, 0.4
    t0 = -1.0
    a1_0, a3_0 = 0.2, 1.0
    f0 = _field(bg, t0, {(1,): a1_0, (3,): a3_0})
    m1, m3 = mode_from_index(bg, (1,)), mode_from_index(bg, (3,))
    forcing = Forcing(ConstantRate(c0), ModeMatrix((m1, m3), ((0.0, w), (0.0, 0.0))))
    grid = TimeGrid.uniform(t0, -0.1, 361)
    traj = evolve_forced(f0, grid, forcing, local_tol=1e-12)
    amp = a3_0 / (-t0) ** 1.5
    for t, field in zip(grid.nodes, traj.fields):
        a3 = amp * (-t) ** 1.5
        a1 = (-t) ** 0.5 * (a1_0 / (-t0) ** 0.5 + c0 * w * amp * (t0 * t0 - t * t) / 2.0)
        assert _coeff(field, (3,)) == pytest.approx(a3, rel=1e-9, abs=1e-11)
        assert _coeff(field, (1,)) == pytest.approx(a1, rel=1e-9, abs=1e-11)


def test_forced_run_refuses_grid_near_zero():
    bg = Plane(1)
    f0 = _field(bg, -1.0, {(1,): 1.0})
    grid = TimeGrid.uniform(-1.0, -1e-5, 11)
    with pytest.raises(ValueError):
        evolve_forced(f0, grid, Forcing(ConstantRate(0.0), ScalarOnU()))


def test_unreachable_tolerance_raises():
    # a rate this stiff exhausts the step-halving budget on the first node
    bg = Plane(1)
    f0 = _field(bg, -1.0, {(1,): 1.0})
    grid = TimeGrid.uniform(-1.0, -0.5, 3)
    with pytest.raises(ToleranceNotMetError):
        evolve_forced(f0, grid, Forcing(ConstantRate(1e12), ScalarOnU()), local_tol=1e-10)


# ---------------------------------------------------------------------------
# forcing hypothesis certificate


def test_scalar_coupling_margin_sign():
    bg = Plane(1)
    rule = quadrature(bg, 32)
    f = _field(bg, -1.0, {(2,): 1.0})
    # |c0*u| <= c0*(|grad u| + |u|) holds pointwise with equality where grad u = 0
    assert forcing_bound_margin(f, Forcing(ConstantRate(0.7), ScalarOnU()), rule) >= 0.0


def test_matrix_coupling_margin_brackets_threshold():
    # coupling (3,) -> (1,) with unit source amplitude: certificate flips
    # between w = 1.0 and w = 1.03 (interior crossing near 1.015)
    bg = Plane(1)
    rule = quadrature(bg, 32)
    f = _field(bg, -1.0, {(3,): 1.0})
    m1, m3 = mode_from_index(bg, (1,)), mode_from_index(bg, (3,))

    def margin(w):
        forcing = Forcing(ConstantRate(0.5), ModeMatrix((m1, m3), ((0.0, w), (0.0, 0.0))))
        return forcing_bound_margin(f, forcing, rule)

    assert margin(0.4) > 0.3
    assert margin(1.0) > 0.0
    assert margin(1.03) < 0.0


def test_low_to_high_coupling_never_certifiable():
    # sending (1,) into (3,) asks |f| ~ |y^3 - c y| to be bounded by the
    # gradient and value of a degree-1 source; fails for any nonzero weight
    bg = Plane(1)
    rule = quadrature(bg, 32)
    f = _field(bg, -1.0, {(1,): 1.0})
    m1, m3 = mode_from_index(bg, (1,)), mode_from_index(bg, (3,))
    for w in (0.05, 0.2, 1.0):
        forcing = Forcing(ConstantRate(0.5), ModeMatrix((m3, m1), ((0.0, w), (0.0, 0.0))))
        assert forcing_bound_margin(f, forcing, rule) < 0.0


def test_mode_matrix_rejects_shape_mismatch():
    bg = Plane(1)
    m1 = mode_from_index(bg, (1,))
    with pytest.raises(ValueError):
        ModeMatrix((m1,), ((0.0, 1.0),))
