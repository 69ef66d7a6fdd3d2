"""Each verifier against an independent oracle, plus report plumbing."""

import math

import numpy as np
import pytest

from parafreq import (
    CoefficientField,
    ConstantRate,
    Cylinder,
    Forcing,
    ModeMatrix,
    NodeCheck,
    Plane,
    ScalarOnU,
    Sphere,
    TimeGrid,
    combination_gradients,
    evolve_exact_trajectory,
    evolve_forced,
    geometry_at,
    mode_from_index,
    quadrature,
    report_from_dict,
    standard_test_functions,
    verify_drift_bochner,
    verify_drift_bochner_verbatim,
    verify_eigenvalue_monotonicity,
    verify_equality_case,
    verify_frequency_monotonicity,
    verify_general_bounds,
    verify_general_harnack,
    verify_harnack,
    verify_harnack_printed,
    verify_quadrature_mass,
    verify_selfsimilar_scaling,
    verify_weighted_monotonicity,
)


def _traj(bg, coeffs_by_index, a=-1.0, b=-0.5, nodes=41):
    field = CoefficientField.from_dict(
        bg, a, {mode_from_index(bg, idx): amp for idx, amp in coeffs_by_index.items()}
    )
    return evolve_exact_trajectory(field, TimeGrid.uniform(a, b, nodes))


# ---------------------------------------------------------------------------
# monotonicity and Harnack


def test_monotonicity_margins_nonnegative_on_mixtures():
    for bg, coeffs in [
        (Plane(2), {(1, 0): 1.0, (2, 1): -0.5, (0, 2): 0.3}),
        (Sphere(2), {(1, 0): 1.0, (2, 3): 0.7}),
        (Cylinder(1, 1), {(1, 0, 0): 1.0, (0, 0, 2): -0.4}),
    ]:
        rep = verify_frequency_monotonicity(_traj(bg, coeffs))
        assert rep.status == "pass"
        assert rep.min_margin >= -rep.tolerance


def test_harnack_sphere_golden_margin():
    rep = verify_harnack(_traj(Sphere(2), {(1, 0): 1.0}, b=-0.5))
    assert rep.status == "pass"
    assert rep.min_margin == pytest.approx(1.0 - math.log(2.0), abs=1e-12)


def test_harnack_plane_equality_on_pure_modes():
    rep = verify_harnack(_traj(Plane(1), {(2,): 1.0}))
    assert rep.status == "pass"
    assert abs(rep.min_margin) < 1e-12


def test_harnack_printed_variant_known_gap():
    # same pure run: the printed kappa = 0 form misses by exactly 2 + ln 2
    rep = verify_harnack_printed(_traj(Plane(1), {(2,): 1.0}))
    assert rep.status == "fail"
    assert rep.min_margin == pytest.approx(-(2.0 + math.log(2.0)), abs=1e-12)


def test_harnack_printed_inapplicable_for_positive_kappa():
    rep = verify_harnack_printed(_traj(Sphere(2), {(1, 0): 1.0}))
    assert rep.status == "inapplicable"
    assert rep.min_margin is None


def test_harnack_degenerate_on_zero_data():
    rep = verify_harnack(_traj(Plane(1), {}))
    assert rep.status == "pass"
    assert rep.min_margin == 0.0
    assert any("zero data" in n for n in rep.notes)


def test_general_harnack_collapses_to_harnack_without_forcing():
    traj = _traj(Sphere(2), {(1, 0): 1.0, (2, 0): 0.3}, nodes=129)
    plain = verify_harnack(traj)
    general = verify_general_harnack(traj)
    assert general.status == "pass"
    assert general.min_margin == pytest.approx(plain.min_margin, abs=1e-9)


# ---------------------------------------------------------------------------
# equality case


def test_equality_case_triggers_on_pure_mode():
    rep = verify_equality_case(_traj(Plane(1), {(3,): 2.0}))
    assert rep.status == "pass"
    labels = {n.label for n in rep.nodes}
    assert "defect-bound" in labels and "eigenvalue-fit" in labels


def test_equality_case_vacuous_on_genuine_mixture():
    rep = verify_equality_case(_traj(Plane(1), {(1,): 1.0, (3,): 1.0}))
    assert rep.status == "pass"
    assert len(rep.nodes) == 1 and rep.nodes[0].margin == 0.0
    assert any("no node pair" in n or "vacuous" in n for n in rep.notes)


# ---------------------------------------------------------------------------
# weighted monotonicity


def test_weighted_monotonicity_passes_packaged_functions():
    for bg in [Plane(1), Sphere(2)]:
        grid = TimeGrid.uniform(-1.0, -0.5, 401)
        for name, poly in standard_test_functions(bg).items():
            rep = verify_weighted_monotonicity(bg, poly, grid, resolution=32, function_name=name)
            assert rep.status == "pass", (bg.label(), name, rep.min_margin)


def test_weighted_monotonicity_second_order_in_time_step():
    # residual is centered-difference truncation error, so order ~ 2
    bg = Plane(1)
    poly = standard_test_functions(bg)["x1_over4_pow6"]
    worst = {}
    for nodes in (101, 201):
        grid = TimeGrid.uniform(-1.0, -0.5, nodes)
        rep = verify_weighted_monotonicity(
            bg, poly, grid, resolution=32, tolerance=1.0, function_name="x1_over4_pow6"
        )
        worst[nodes] = max(abs(n.margin) for n in rep.nodes)
    order = math.log2(worst[101] / worst[201])
    assert order >= 1.8, worst


# ---------------------------------------------------------------------------
# pointwise curvature identity


def test_bochner_variants_coincide_on_plane():
    bg = Plane(2)
    rule = quadrature(bg, 32)
    traj = _traj(bg, {(1, 0): 1.0, (2, 1): 0.5})
    a = verify_drift_bochner(bg, traj.fields[0], rule)
    b = verify_drift_bochner_verbatim(bg, traj.fields[0], rule)
    assert a.status == "pass" and b.status == "pass"
    assert abs(a.min_margin) < 1e-12 and abs(b.min_margin) < 1e-12


def test_bochner_corrected_passes_on_sphere():
    bg = Sphere(2)
    rule = quadrature(bg, 48)
    traj = _traj(bg, {(2, 0): 1.0, (1, 1): 0.7})
    rep = verify_drift_bochner(bg, traj.fields[0], rule)
    assert rep.status == "pass"
    assert abs(rep.min_margin) < 1e-10


def test_bochner_verbatim_gap_equals_gradient_energy():
    # at t = -1 the missing pairing term equals (1/2) * integral |P grad v|^2
    bg = Sphere(2)
    rule = quadrature(bg, 48)
    for idx in [(1, 0), (2, 0)]:
        field = CoefficientField.from_dict(bg, -1.0, {mode_from_index(bg, idx): 1.0})
        rep = verify_drift_bochner_verbatim(bg, field, rule)
        gbar = combination_gradients(bg, dict(field.entries), rule.points)
        proj = np.stack([geometry_at(bg, p).tangent_projector for p in rule.points])
        tangential = np.einsum("nij,nj->ni", proj, gbar)
        grad_energy = rule.integrate(np.einsum("ni,ni->n", tangential, tangential))
        assert rep.status == "fail"
        assert abs(rep.min_margin) == pytest.approx(grad_energy / 2.0, abs=1e-8)


# ---------------------------------------------------------------------------
# forced growth bounds


def test_general_bounds_unforced_margins_near_zero():
    traj = _traj(Plane(1), {(2,): 1.0}, nodes=201)
    rep = verify_general_bounds(traj, 0.0)
    assert rep.status == "pass"
    assert rep.min_margin >= -rep.tolerance


def test_general_bounds_scalar_rate_matches_analytic_minimum():
    # for f = c0*u on a single mode, the frequency-derivative margin is
    # c0^2*(2*mu + 2*(-t)); its minimum sits at the latest interior node
    bg = Plane(1)
    c0 = 1.0
    field = CoefficientField.from_dict(bg, -1.0, {mode_from_index(bg, (1,)): 1.0})
    grid = TimeGrid.uniform(-1.0, -0.5, 161)
    traj = evolve_forced(field, grid, Forcing(ConstantRate(c0), ScalarOnU()), local_tol=1e-12)
    rep = verify_general_bounds(traj, 0.0)
    assert rep.status == "pass"
    expected = c0 * c0 * (2.0 * 0.5 + 2.0 * (-grid.nodes[-2]))
    assert rep.min_margin == pytest.approx(expected, abs=1e-4)


def test_general_bounds_inapplicable_when_hypothesis_fails():
    # low-to-high coupling: no constant certifies |f| <= C(|grad u| + |u|)
    bg = Plane(1)
    m1, m3 = mode_from_index(bg, (1,)), mode_from_index(bg, (3,))
    field = CoefficientField.from_dict(bg, -1.0, {m1: 1.0})
    forcing = Forcing(ConstantRate(0.5), ModeMatrix((m3, m1), ((0.0, 1.0), (0.0, 0.0))))
    grid = TimeGrid.uniform(-1.0, -0.5, 81)
    traj = evolve_forced(field, grid, forcing, local_tol=1e-10)
    rep = verify_general_bounds(traj, 0.0)
    assert rep.status == "inapplicable"
    assert rep.min_margin is None
    assert any("hypothesis fails" in n for n in rep.notes)


# ---------------------------------------------------------------------------
# eigenvalue monotonicity and self-similarity


def test_eigenvalue_drop_margins_exact():
    grid = TimeGrid.uniform(-1.0, -0.5, 6)
    h = 0.1
    plane = verify_eigenvalue_monotonicity(Plane(1), grid, 0.0)
    assert plane.status == "pass"
    assert abs(plane.min_margin) < 1e-15
    sphere = verify_eigenvalue_monotonicity(Sphere(2), grid, 0.5)
    assert sphere.status == "pass"
    assert sphere.min_margin == pytest.approx(0.5 * h, abs=1e-14)


def test_selfsimilar_scaling_pure_vs_mixture():
    pure = verify_selfsimilar_scaling(_traj(Sphere(2), {(2, 1): 1.5}))
    assert pure.status == "pass"
    mixed = verify_selfsimilar_scaling(_traj(Sphere(2), {(1, 0): 1.0, (2, 0): 1.0}))
    assert mixed.status == "inapplicable"
    assert any("distinct eigenvalues" in n or "multiple" in n for n in mixed.notes)


def test_quadrature_mass_check_all_backgrounds():
    for bg in [Plane(1), Plane(2), Sphere(1), Sphere(2), Cylinder(1, 1)]:
        rep = verify_quadrature_mass(bg)
        assert rep.status == "pass", bg.label()


# ---------------------------------------------------------------------------
# report plumbing


def test_report_roundtrip_through_dict():
    rep = verify_harnack(_traj(Sphere(2), {(1, 0): 1.0}))
    clone = report_from_dict(rep.to_dict())
    assert clone.to_dict() == rep.to_dict()
    assert clone.passed


def test_report_roundtrip_preserves_inapplicable():
    rep = verify_selfsimilar_scaling(_traj(Plane(1), {(1,): 1.0, (2,): 1.0}))
    doc = rep.to_dict()
    assert doc["min_margin"] is None
    clone = report_from_dict(doc)
    assert clone.status == "inapplicable"
    assert clone.min_margin is None


def test_node_checks_must_be_finite():
    with pytest.raises(ValueError):
        NodeCheck(t=-1.0, margin=float("nan"))
    with pytest.raises(ValueError):
        NodeCheck(t=-1.0, margin=float("inf"))


def test_reports_are_deterministic():
    a = verify_frequency_monotonicity(_traj(Plane(2), {(1, 0): 1.0, (0, 2): -0.3}))
    b = verify_frequency_monotonicity(_traj(Plane(2), {(1, 0): 1.0, (0, 2): -0.3}))
    assert a.to_dict() == b.to_dict()
