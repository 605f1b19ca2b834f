import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixbound import bounds as B
from mixbound import scenarios
from mixbound.errors import Unsupported


@pytest.mark.parametrize("name", sorted(scenarios.SCENARIOS))
@pytest.mark.parametrize("p", [0.01, 0.3, 0.5, 0.97])
def test_every_scenario_reports_positive_bounds(name, p):
    out = scenarios.get(name).bounds(p)
    values = [v["inverse_constant"] for v in out.values() if isinstance(v, dict) and "inverse_constant" in v]
    assert values and all(v > 0 for v in values)


def test_resolve_casts_and_rejects():
    sc = scenarios.get("gauss-equal-cov")
    assert sc.resolve({"y": "2", "n": "3"}) == {"y": 2.0, "sigma": 1.0, "n": 3}
    with pytest.raises(KeyError):
        sc.resolve({"bogus": 1})
    with pytest.raises(KeyError):
        scenarios.get("nope")
    with pytest.raises(Unsupported):
        scenarios.get("gauss-subgauss").spec(0.5)


@settings(max_examples=50, deadline=None)
@given(y=st.floats(0, 2.5), s=st.floats(0.3, 3), p=st.floats(0.01, 0.99))
def test_equal_covariance_displays(y, s, p):
    out = scenarios.get("gauss-equal-cov").bounds(p, {"y": y, "sigma": s})
    assert out["pi_display"]["inverse_constant"] == pytest.approx(out["pi_theorem"]["inverse_constant"], rel=1e-10)
    # the LSI display is the last-case expression of the theorem
    theorem = out["lsi_theorem"]
    if theorem["case"] == "interpolated":
        assert out["lsi_display"]["inverse_constant"] == pytest.approx(theorem["inverse_constant"], rel=1e-10)
        assert out["lsi_display_certified"]
    assert out["lsi_symmetric"]["inverse_constant"] >= theorem["inverse_constant"] * (1 - 1e-12)
    # the two printed forms differ by lambda_p (1 - 2 p q) > 0
    assert out["lsi_forms_disagree"]


def test_equal_covariance_lsi_display_uncertified_when_a_guard_holds():
    out = scenarios.get("gauss-equal-cov").bounds(0.1, {"y": 0.5})
    assert out["lsi_theorem"]["case"] == "case0_dominates"
    assert out["lsi_display"]["inverse_constant"] < out["lsi_theorem"]["inverse_constant"]
    assert out["lsi_display_certified"] is False


def test_cm_baseline_only_at_unit_variance():
    sc = scenarios.get("gauss-equal-cov")
    assert "pi_cm_baseline" in sc.bounds(0.5)
    assert "pi_cm_baseline" not in sc.bounds(0.5, {"sigma": 2.0})


@pytest.mark.parametrize("sigma", [0.25, 0.5, 0.8, 1.5, 2.0, 4.0])
@pytest.mark.parametrize("p", [0.05, 0.5, 0.95])
def test_variance_displays_match_nested(sigma, p):
    out = scenarios.get("gauss-variance").bounds(p, {"sigma": sigma})
    # the display is one direction of the nested corollary; pi_nested takes the better direction
    assert out["pi_nested"]["inverse_constant"] <= out["pi_display"]["inverse_constant"] * (1 + 1e-12)
    if sigma <= 0.5 or sigma >= 2.0:
        assert out["pi_display"]["inverse_constant"] == pytest.approx(out["pi_nested"]["inverse_constant"], rel=1e-12)
    assert out["pi"]["inverse_constant"] <= out["pi_nested"]["inverse_constant"] * (1 + 1e-12)
    assert out["lsi"]["inverse_constant"] <= out["lsi_nested"]["inverse_constant"] * (1 + 1e-12)


def test_variance_example_values():
    out = scenarios.get("gauss-variance").bounds(0.5, {"sigma": 0.25})
    assert out["pi_display"]["inverse_constant"] == pytest.approx(1.2559, abs=5e-5)
    out = scenarios.get("gauss-variance").bounds(0.25, {"sigma": 2.0})
    assert out["pi_cm_baseline"]["inverse_constant"] == pytest.approx(2.25)


def test_subgauss_displays_are_the_nested_bounds():
    sc = scenarios.get("gauss-subgauss")
    for p in (0.1, 0.6):
        out = sc.bounds(p, {"kappa": 3.0, "sigma": 0.5, "rho0": 0.4, "alpha0": 0.3})
        assert out["pi_display"]["inverse_constant"] == pytest.approx(out["pi_nested"]["inverse_constant"])
        assert out["lsi_display"]["inverse_constant"] == pytest.approx(out["lsi_nested"]["inverse_constant"])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_uniform_gauss(n):
    sc = scenarios.get("uniform-gauss")
    for p in (1e-6, 0.01, 0.5, 0.99):
        out = sc.bounds(p, {"n": n})
        br = out["chi0_bracket"]
        assert br["lower"] <= br["value"] <= br["upper"]
        assert out["pi_nested"]["inverse_constant"] <= out["pi_display"]["inverse_constant"] * (1 + 1e-12)
        assert out["combined_dominates_min"]
    out = sc.bounds(0.5, {"n": 1, "C_n": 1.0})
    assert out["lsi_combined"]["inverse_constant"] == pytest.approx(2.2533, abs=5e-5)
    assert out["pi_display"]["inverse_constant"] == pytest.approx(0.5 + 0.5 * math.sqrt(math.e) * math.sqrt(math.pi / 2))


def test_family_is_picklable():
    fam = scenarios.get("gauss-variance").family({"sigma": 2.0})
    spec = pickle.loads(pickle.dumps(fam))(0.4)
    assert spec.p == 0.4 and float(spec.mu1.variance) == 2.0


def test_lsi_bound_logarithmic_in_p():
    ratios = [scenarios.get("uniform-gauss").bounds(10.0**-k)["lsi_nested"]["inverse_constant"] / (k * math.log(10))
              for k in (4, 6, 8)]
    assert np.ptp(ratios) / np.mean(ratios) < 0.1
    assert B.inv_log_mean(1e-8) > 18
