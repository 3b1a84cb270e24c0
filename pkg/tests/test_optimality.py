import math
from fractions import Fraction

import numpy as np
import pytest

from hardy_lab import (
    InvalidParameterError,
    NeedsTailError,
    check_bounded_oscillation,
    check_criticality_agreement,
    check_cutoff_decay,
    check_ground_state_identity,
    check_ground_state_transform,
    check_lambda0_bound,
    check_null_criticality,
    check_properness,
    closed_form_weight,
    criticality_energy,
    cutoff_profile,
    helper_sum,
    inflation_refutation,
    make_tree,
    optimality_probe,
)


def test_cutoff_profile_shape():
    phi = cutoff_profile(100)
    assert phi[0] == 1
    assert phi[1] == 1
    assert phi[100] == 0
    assert np.all(np.diff(phi[1:]) < 0)


def test_helper_sum_value():
    assert helper_sum(3) == pytest.approx(0.8966112928192101, rel=1e-15)
    # slow logarithmic decay
    assert helper_sum(10 ** 6) < helper_sum(10 ** 3) < helper_sum(10)


def test_criticality_two_routes_agree(tree2):
    rep = check_criticality_agreement(tree2, n_values=(10, 100, 1000))
    assert rep.status == "pass"
    assert rep.residuals["max_rel_diff"] <= 1e-10
    assert rep.residuals["value_at_largest_n"] == pytest.approx(
        0.2041733048766243, rel=1e-9
    )


def test_criticality_value_is_gamma_free(tree2):
    # the gamma terms cancel inside the direct route
    res0 = criticality_energy(tree2, 500, gamma=0)
    res_half = criticality_energy(tree2, 500, gamma=Fraction(1, 2))
    assert res_half.rel_diff <= 1e-10
    assert res_half.direct == pytest.approx(res0.direct, rel=1e-9)


def test_criticality_closed_route_scales_with_kappa(tree3):
    res = criticality_energy(tree3, 200)
    assert res.closed_form == pytest.approx(math.sqrt(3) * helper_sum(200), rel=1e-12)


def test_criticality_guards(tree2):
    with pytest.raises(InvalidParameterError):
        criticality_energy(tree2, 2)
    with pytest.raises(NeedsTailError):
        criticality_energy(tree2, tree2.depth + 1)


def test_cutoff_decay_window():
    rep = check_cutoff_decay()
    assert rep.status == "pass"
    ratio = rep.residuals["ratio"]
    assert 0.4 <= ratio <= 0.6


def test_null_criticality_quadratic_on_tree(tree2):
    rep = check_null_criticality(tree2, r_max=2048)
    assert rep.status == "pass"
    # partial sums grow like R**2, so doubling R quadruples the increment
    assert rep.residuals["increment_ratio"] == pytest.approx(4.0, abs=0.05)


def test_null_criticality_logarithmic_on_antitree(antitree_linear):
    rep = check_null_criticality(antitree_linear, r_max=1024)
    assert rep.status == "pass"
    assert rep.residuals["increment_ratio"] == pytest.approx(1.0, abs=0.05)


def test_null_criticality_guard(tree2):
    with pytest.raises(InvalidParameterError):
        check_null_criticality(tree2, r_max=8)


def test_inflation_is_refuted_quickly(tree2):
    rep = inflation_refutation(tree2, lam=0.1, b_max=2048)
    assert rep.status == "pass"
    assert rep.params["first_refuted"] == 32


def test_tiny_inflation_stays_inconclusive(tree2):
    rep = inflation_refutation(tree2, lam=1e-12, b_max=1024)
    assert rep.status == "inconclusive"
    assert rep.residuals["refuted"] == 0
    assert any("inconclusive" in n for n in rep.notes)


def test_inflation_guards(tree2):
    with pytest.raises(InvalidParameterError):
        inflation_refutation(tree2, lam=0.0)
    with pytest.raises(NeedsTailError):
        inflation_refutation(tree2, lam=0.1, b_max=tree2.depth)


def test_probe_reports_counts_never_passes(tree2):
    w = closed_form_weight(tree2, 0, 512).values
    rep = optimality_probe(tree2, w, lam=0.1, window=8, r_max=512)
    assert rep.status == "inconclusive"
    assert rep.residuals["refuted_fraction"] == 1.0
    tiny = optimality_probe(tree2, w, lam=1e-13, window=8, r_max=512)
    assert tiny.residuals["refuted_fraction"] == 0.0


def test_probe_window_must_fit(tree2):
    w = closed_form_weight(tree2, 0, 64).values
    with pytest.raises(InvalidParameterError):
        optimality_probe(tree2, w, lam=0.1, window=8, r_max=64, bases=[60])


def test_ground_state_transform_residual(tree2):
    rep = check_ground_state_transform(tree2, 0, radius=8, n_samples=50, seed=11)
    assert rep.status == "pass"
    assert rep.residuals["max_rel_residual"] <= 1e-11


def test_ground_state_transform_is_seed_deterministic(tree2):
    a = check_ground_state_transform(tree2, 0, radius=6, seed=5)
    b = check_ground_state_transform(tree2, 0, radius=6, seed=5)
    c = check_ground_state_transform(tree2, 0, radius=6, seed=6)
    assert a.residuals == b.residuals
    assert a.residuals != c.residuals
    assert a.params["seed"] == 5


def test_ground_state_identity_both_levels(tree2, antitree_linear):
    for model in (tree2, antitree_linear):
        rad = check_ground_state_identity(model, 0, 64, level="radial")
        assert rad.status == "pass"
        vert = check_ground_state_identity(model, 0, 6, level="vertex")
        assert vert.status == "pass"
    with pytest.raises(InvalidParameterError):
        check_ground_state_identity(tree2, 0, 6, level="edges")


def test_ground_state_identity_with_positive_gamma(tree3):
    rep = check_ground_state_identity(tree3, Fraction(1, 2), 32, level="radial")
    assert rep.status == "pass"


def test_bounded_oscillation(tree2, antitree_linear):
    assert check_bounded_oscillation(tree2, 1000).status == "pass"
    rep = check_bounded_oscillation(antitree_linear, 1000)
    assert rep.status == "pass"
    assert any("window" in n for n in rep.notes)
    with pytest.raises(NeedsTailError):
        check_bounded_oscillation(tree2, tree2.depth)


def test_properness_verdicts(tree2, antitree_linear):
    tree_rep = check_properness(tree2)
    assert tree_rep.status == "pass"
    assert tree_rep.params["certified"]

    anti_rep = check_properness(antitree_linear)
    assert anti_rep.status == "pass"
    assert not anti_rep.params["certified"]
    assert any("not a proof" in n for n in anti_rep.notes)

    line_rep = check_properness(make_tree(1, 40))
    assert line_rep.status == "hypothesis-not-met"


def test_lambda0_bound_on_trees(tree2):
    rep = check_lambda0_bound(tree2, section_radii=(16, 64, 256))
    assert rep.status == "pass"
    shift = (math.sqrt(2) - 1) ** 2
    assert rep.residuals["shift"] == pytest.approx(shift, rel=1e-15)
    assert 0 < rep.residuals["final_gap"] < 1e-2
    assert rep.residuals["vertex_ball_bottom"] >= shift - 1e-9


def test_lambda0_bound_needs_homogeneous_model(antitree_linear):
    rep = check_lambda0_bound(antitree_linear, section_radii=(16, 64))
    assert rep.status == "hypothesis-not-met"
    assert rep.params["first_inhomogeneous_radius"] >= 2
