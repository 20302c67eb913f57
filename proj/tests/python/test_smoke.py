import json
import math

import numpy as np
import pytest

import poncelet as pc


def test_elliptic_coordinates_frozen_example():
    out = pc.to_elliptic(["2", "1"], np.array([1.0, 0.5]))
    s17 = math.sqrt(17.0)
    assert out["lam"][0] == pytest.approx((7 + s17) / 8, rel=1e-12)
    assert out["lam"][1] == pytest.approx((7 - s17) / 8, rel=1e-12)
    assert not out["degenerate"]


def test_round_trip_from_elliptic():
    lam = np.array([1.3903882032022076, 0.3596117967977924])
    x = pc.from_elliptic(["2", "1"], lam, [1, 1])
    assert x[0] == pytest.approx(1.0, rel=1e-10)
    assert x[1] == pytest.approx(0.5, rel=1e-10)


def test_sqrt_series_frozen_coefficients():
    out = pc.sqrt_series(["1", "4"], 2)
    assert out["coeffs"] == ["1", "-5/8", "-9/128"]
    assert out["b0_squared"] == "4"


def test_cayley_exact_witness():
    v = pc.cayley_condition(["4", "2", "1"], ["4/5"], 4)
    assert v["periodic"] is True
    assert v["rank"] == 2
    assert v["threshold"] == 3
    # and a non-witness nearby
    assert pc.cayley_condition(["4", "2", "1"], ["79/100"], 4)["periodic"] is False


def test_scan_and_closure_pipeline():
    witnesses = pc.find_periodic_caustic([4.0, 2.0, 1.0], 3, 0.05, 0.999)
    verified = [w for w in witnesses if w["verified"]]
    assert verified and verified[0]["mu"] == pytest.approx(0.976284215926, abs=1e-6)

    km = pc.minkowski_to_klein(["4", "2", "1"], [str(verified[0]["mu"])], 1.0)
    t_star = km["caustic_shifts"][0]
    b = [str(v) for v in km["b"]]
    x0 = np.array([math.sqrt(km["b"][0] - 1.0), 0.0])
    # tangent launch from a generic boundary point
    theta = 0.83
    x0 = np.array([math.sqrt(km["b"][0] - 1.0) * math.cos(theta),
                   math.sqrt(km["b"][1] - 1.0) * math.sin(theta)])
    dirs = pc.tangent_directions(b, 1.0, x0, t_star)
    assert dirs
    tr = pc.trace_chords(b, 1.0, x0, dirs[0], 3)
    assert tr["closure_residuals"][2] < 1e-6


def test_hierarchy_involution():
    x = np.array([0.3, 0.2, 0.1])
    p = np.array([0.7, -0.4, 0.5])
    for k in (-1, 0, 1, 2):
        assert abs(pc.poisson_bracket_J(["3", "2", "1"], k, 0, 1, x, p)) < 1e-9


def test_basis_potential_catalog():
    out = pc.basis_potential("V2", ["2", "1"])
    assert out["residual_zero"]
    back = pc.separability_residual_zero(out["terms"], ["2", "1"])
    assert back
    # companion integral for the top tensor index is the potential itself
    f = pc.solve_f(out["terms"], ["2", "1"], 1)
    assert f["terms"] == out["terms"]


def test_run_scenario_report():
    out = pc.run_scenario(["cayley", "--a", "4,2,1", "--mu", "4/3", "--n", "4"])
    doc = json.loads(out["report"])
    assert doc["mode"] == "exact"
    assert doc["verdict"]["periodic"] is True
