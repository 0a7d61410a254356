import numpy as np
import pytest

from ficsel import CandidateSpec, ConfigError, DesignTemplate, build_design

POISSON = "poisson-log"


def test_bird_template_layout(bird_template):
    assert bird_template.p == 11
    names = bird_template.slot_names()
    assert names[0] == "1"
    assert names[1:5] == ("x1", "x2", "x3", "x4")
    assert names[5:] == ("x1:x2", "x1:x3", "x1:x4", "x2:x3", "x2:x4", "x3:x4")


def test_indicator_string_round_trip(bird_template):
    s = "10010,000000"
    ind = bird_template.parse_indicator(s)
    assert ind == (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0)
    assert bird_template.indicator_string(ind) == s
    with pytest.raises(ConfigError):
        bird_template.parse_indicator("101")


def test_intercept_only_design(birds, bird_template):
    spec = CandidateSpec(bird_template.parse_indicator("10000,000000"), POISSON)
    X = build_design(birds, bird_template, spec)
    assert X.shape == (14, 1)
    np.testing.assert_array_equal(X, np.ones((14, 1)))


def test_wide_design_has_eleven_parameters(birds, bird_template):
    spec = CandidateSpec((1,) * 11, POISSON)
    X = build_design(birds, bird_template, spec)
    assert X.shape == (14, 11)


def test_interaction_column_is_elementwise_product(birds, bird_template):
    spec = CandidateSpec((1,) * 11, POISSON)
    X = build_design(birds, bird_template, spec)
    # slot 5 is x1:x2; bird row 1 gives 0.33 * 1.26 = 0.4158
    assert X[0, 5] == pytest.approx(0.33 * 1.26, abs=1e-12)
    np.testing.assert_allclose(X[:, 5], birds.column("x1") * birds.column("x2"))
    np.testing.assert_allclose(X[:, 10], birds.column("x3") * birds.column("x4"))


def test_hierarchy_violation_rejected(birds, bird_template):
    # x1:x2 on while x2 is off
    spec = CandidateSpec(bird_template.parse_indicator("11000,100000"), POISSON)
    with pytest.raises(ConfigError, match="hierarchy"):
        build_design(birds, bird_template, spec)


def test_indicator_length_mismatch(birds, bird_template):
    spec = CandidateSpec((1, 0, 0), POISSON)
    with pytest.raises(ConfigError, match="length"):
        build_design(birds, bird_template, spec)


def test_protected_slot_must_be_on(birds, bird_template):
    spec = CandidateSpec((0,) + (1,) * 10, POISSON)
    with pytest.raises(ConfigError, match="protected"):
        build_design(birds, bird_template, spec)


def test_design_row_matches_build(birds, bird_template):
    row = bird_template.design_row(birds.covariates[2])
    spec = CandidateSpec((1,) * 11, POISSON)
    X = build_design(birds, bird_template, spec)
    np.testing.assert_allclose(row, X[2])


def test_main_effects_template_no_comma():
    tpl = DesignTemplate.main_effects(("a",))
    assert tpl.p == 2
    assert tpl.indicator_string((1, 1)) == "11"
