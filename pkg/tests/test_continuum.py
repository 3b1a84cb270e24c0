import math

import numpy as np
import pytest

from hardy_lab import (
    BUILTIN_CURVES,
    CurveSpec,
    DimensionTooSmallError,
    InvalidParameterError,
    OriginSingularityError,
    check_closed_form_agreement,
    check_harmonic_condition,
    check_harmonicity,
    check_model_optimality_condition,
    damek_ricci_space,
    density_weight,
    harmonic_manifold,
    harmonicity_residual,
    hyperbolic_space,
    load_density,
    riemannian_model,
    weight_damek_ricci,
    weight_hyperbolic,
    weight_model,
)

GRID = np.linspace(0.1, 10.0, 120)


def test_hyperbolic_three_space_is_exact():
    # the curvature term drops out in dimension 3
    for r in (0.5, 1.0, 2.0, 7.0):
        assert weight_hyperbolic(3, r) == 1.0 + 1.0 / (4.0 * r * r)
    assert weight_hyperbolic(3, 2.0) == 1.0625


def test_closed_form_spot_values():
    assert weight_hyperbolic(4, 1.0) == pytest.approx(3.043046245724733, rel=1e-15)
    assert weight_damek_ricci(2, 1, 1.0) == pytest.approx(1.9896581789662144, rel=1e-15)
    assert weight_damek_ricci(3, 1, 0.3) == pytest.approx(26.457695241097507, rel=1e-15)
    assert weight_damek_ricci(2, 2, 5.0) == pytest.approx(2.2736593457603838, rel=1e-15)


def test_damek_ricci_q2_has_no_far_singular_term():
    # q = 2 kills the 1/sinh(r)**2 term, leaving the q = 0 style profile
    r = GRID
    explicit = (9.0 / 4.0 + 1.0 / (4.0 * r ** 2)
                + 1.0 / (2.0 * np.sinh(r / 2.0) ** 2))
    assert np.max(np.abs(weight_damek_ricci(2, 2, r) - explicit)) < 1e-14


def test_damek_ricci_degenerate_case_is_scaled_hyperbolic():
    got = weight_damek_ricci(3, 0, GRID)
    want = weight_hyperbolic(4, GRID / 2.0) / 4.0
    assert np.max(np.abs(got - want)) == 0.0


def test_master_formula_matches_closed_forms():
    pairs = [
        (hyperbolic_space(3), lambda r: weight_hyperbolic(3, r)),
        (hyperbolic_space(4), lambda r: weight_hyperbolic(4, r)),
        (damek_ricci_space(2, 1), lambda r: weight_damek_ricci(2, 1, r)),
        (damek_ricci_space(3, 1), lambda r: weight_damek_ricci(3, 1, r)),
        (damek_ricci_space(2, 2), lambda r: weight_damek_ricci(2, 2, r)),
    ]
    for space, closed in pairs:
        worst = max(
            abs(density_weight(space, r) - closed(r)) / max(1.0, abs(closed(r)))
            for r in GRID
        )
        assert worst < 1e-10, space.label


def test_rotational_model_reproduces_hyperbolic():
    got = weight_model(BUILTIN_CURVES["sinh"], 4, GRID)
    want = weight_hyperbolic(4, GRID)
    assert np.max(np.abs(got - want) / np.abs(want)) < 1e-12


def test_rotational_model_euclidean_inverse_square():
    got = weight_model(BUILTIN_CURVES["linear"], 5, GRID)
    want = 9.0 / (4.0 * GRID ** 2)
    assert np.max(np.abs(got - want) / want) < 1e-12


def test_closed_form_agreement_check_by_kind():
    assert check_closed_form_agreement(hyperbolic_space(5), 0.1, 10.0).status == "pass"
    assert check_closed_form_agreement(damek_ricci_space(2, 1), 0.1, 10.0).status == "pass"
    model = riemannian_model(BUILTIN_CURVES["sinh"], 4)
    rep = check_closed_form_agreement(model, 0.5, 5.0)
    assert rep.status == "pass"
    assert rep.residuals["max_rel_diff"] < 1e-12
    free = harmonic_manifold(BUILTIN_CURVES["sinh"], label="free-form")
    assert check_closed_form_agreement(free, 0.5, 5.0).status == "hypothesis-not-met"


def test_harmonic_manifold_from_raw_density_matches_closed_form():
    # only f is supplied; derivatives come from central differences, so the
    # agreement is limited by roundoff in the second difference (~1e-6)
    p, q = 2, 1

    def f(r):
        return math.sinh(r / 2.0) ** (p + q) * math.cosh(r / 2.0) ** q

    space = harmonic_manifold(f)
    assert space.kind == "harmonic"
    for r in (0.5, 1.0, 3.0):
        assert density_weight(space, r) == pytest.approx(
            weight_damek_ricci(p, q, r), abs=2e-5
        )


def test_curve_spec_numeric_derivative_quality():
    spec = CurveSpec(math.exp)
    fn, d1, d2 = spec.resolved()
    assert d1(1.0) == pytest.approx(math.e, rel=1e-9)
    assert d2(1.0) == pytest.approx(math.e, rel=1e-4)


def test_builtin_sinh_cubed_derivatives_are_analytic():
    spec = BUILTIN_CURVES["sinh-cubed"]
    numeric = CurveSpec(spec.value).resolved()
    for r in (0.4, 1.3, 2.2):
        assert spec.d1(r) == pytest.approx(numeric[1](r), rel=1e-8)
        assert spec.d2(r) == pytest.approx(numeric[2](r), rel=1e-4)


def test_harmonicity_residual_scales_quadratically():
    space = hyperbolic_space(3)
    coarse = harmonicity_residual(space, 0.5, 5.0, 1e-3)
    fine = harmonicity_residual(space, 0.5, 5.0, 5e-4)
    assert coarse / fine == pytest.approx(4.0, abs=0.8)


def test_harmonicity_check_both_profiles():
    for space in (hyperbolic_space(4), damek_ricci_space(2, 1)):
        for which in ("sqrt-u", "sqrt-u-log"):
            rep = check_harmonicity(space, 0.5, 5.0, which=which)
            assert rep.status == "pass", (space.label, which)
            assert 3.2 <= rep.residuals["convergence_factor"] <= 4.8


def test_harmonicity_detects_wrong_weight():
    space = hyperbolic_space(3)
    correct = harmonicity_residual(space, 0.5, 5.0, 1e-3)
    off = harmonicity_residual(
        space, 0.5, 5.0, 1e-3,
        weight_fn=lambda r: weight_hyperbolic(3, r) + 0.05,
    )
    assert correct < 1e-4
    assert off > 1e-3


def test_stencil_must_not_cross_origin():
    with pytest.raises(OriginSingularityError):
        harmonicity_residual(hyperbolic_space(3), 5e-4, 5.0, 1e-3)
    with pytest.raises(OriginSingularityError):
        density_weight(hyperbolic_space(3), 0.0)


def test_dimension_guards():
    with pytest.raises(DimensionTooSmallError):
        hyperbolic_space(2)
    with pytest.raises(DimensionTooSmallError):
        weight_hyperbolic(2, 1.0)
    with pytest.raises(DimensionTooSmallError):
        damek_ricci_space(2, 0)
    with pytest.raises(InvalidParameterError):
        damek_ricci_space(0, 3)
    with pytest.raises(DimensionTooSmallError):
        weight_model(BUILTIN_CURVES["sinh"], 1, 1.0)


def test_model_condition_sign():
    good = check_model_optimality_condition(BUILTIN_CURVES["sinh"], 4, 0.5, 5.0)
    assert good.status == "pass"
    sphere_like = CurveSpec(math.sin, math.cos, lambda r: -math.sin(r))
    bad = check_model_optimality_condition(sphere_like, 3, 0.5, 2.0)
    assert bad.status == "fail"
    assert bad.residuals["min_margin"] < 0


def test_harmonic_condition_on_hyperbolic():
    rep = check_harmonic_condition(hyperbolic_space(3), 0.5, 5.0)
    assert rep.status == "pass"


def test_load_density_round_trips(tmp_path):
    specs = {
        "hyp.txt": "radial-density v1\nkind hyperbolic\ndim 4\n",
        "dr.txt": "radial-density v1\nkind damek-ricci\np 2\nq 1\n",
        "model.txt": "radial-density v1\nkind model\ndim 4\ncurve sinh\n",
        "harm.txt": "radial-density v1\n# comment line\nkind harmonic\ncurve cosh\n",
    }
    for name, text in specs.items():
        path = tmp_path / name
        path.write_text(text)
        space = load_density(path)
        assert density_weight(space, 1.0) > 0
    hyp = load_density(tmp_path / "hyp.txt")
    assert hyp.kind == "hyperbolic" and hyp.dim == 4
    assert density_weight(hyp, 2.0) == pytest.approx(weight_hyperbolic(4, 2.0), rel=1e-12)


def test_load_density_rejects_bad_files(tmp_path):
    cases = {
        "noheader.txt": "kind hyperbolic\ndim 4\n",
        "badcurve.txt": "radial-density v1\nkind model\ndim 4\ncurve eval\n",
        "badkind.txt": "radial-density v1\nkind euclidean\ndim 4\n",
        "badline.txt": "radial-density v1\nkind\n",
    }
    for name, text in cases.items():
        path = tmp_path / name
        path.write_text(text)
        with pytest.raises(InvalidParameterError):
            load_density(path)
