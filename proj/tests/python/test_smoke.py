"""Smoke tests for the python bindings (driven against the CMake-built module
via PYTHONPATH)."""

import math

import pytest

import hypocalc as hc


def test_bracket_convention():
    assert hc.bracket("dx", "x*dy", 2) == "(1)*dy"


def test_field_round_trip():
    expr = "(x^2 - 1/2*y)*dx + (3*x)*dy"
    assert hc.parse_print_field(expr, 2) == expr


def test_evaluate_and_flow():
    assert hc.evaluate_field("x*dy", [2.0, 0.0]) == [0.0, 2.0]
    out = hc.flow_time_one("x*dx", [1.0])
    assert abs(out[0] - math.e) < 1e-9


def test_fiber_dims_heisenberg():
    rep = hc.fiber_dims(["dx", "x*dy"], [1, 2], 3, 2, ["0", "0"])
    assert rep["dims"] == [1, 1, 1]
    generic = hc.fiber_dims(["dx", "x*dy"], [1, 2], 3, 2, ["1", "0"])
    assert generic["dims"] == [1, 1, 0]


def test_osculating_heisenberg():
    alg = hc.osculating_at(["dx", "x*dy"], [1, 2], 3, 2, ["0", "1"])
    assert alg["dim"] == 3
    assert alg["weights"] == [1, 2, 3]
    assert list(alg["sc"]) == [(0, 1, 2, "1")]


def test_hormander():
    res = hc.check_hormander(["dx", "x*dy"], [1, 2], 3, 2, ["0", "0"])
    assert res["holds"] and not res["by_convention"]
    res2 = hc.check_hormander(["dx"], [1], 1, 2, ["0", "0"])
    assert not res2["holds"]


def test_free_nilpotent_and_bch():
    f = hc.free_nilpotent([1, 1], 3)
    assert f["dim"] == 5
    assert f["labels"][3] == "[g1,[g1,g2]]"
    heis = hc.free_nilpotent([1, 1], 2)
    z = hc.bch(heis["dim"], heis["weights"], heis["depth"], heis["sc"],
               [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
    assert z[0] == 1.0 and z[1] == 1.0 and abs(z[2] + 0.5) < 1e-15


def test_cone_sampling_and_membership():
    phi = hc.PairingMap(["x^2*dx", "x*dx", "dx"], [1, 2, 3], [0.0])
    entries = hc.sample_cone(phi, 500, seed=3)
    assert len(entries) > 20
    for e in entries[:50]:
        assert abs(e["xi"][0] * e["xi"][2] - e["xi"][1] ** 2) < 1e-8
    v_in = hc.membership(phi, [1.0, 1.0, 1.0], seed=5)
    assert v_in["verdict"] == "in" and v_in["residual"] < 1e-6
    v_out = hc.membership(phi, [1.0, 0.0, 1.0], seed=5)
    assert v_out["verdict"] == "out" and v_out["heuristic"]


def test_cone_sampling_determinism():
    phi = hc.PairingMap(["x^2*dx", "x*dx", "dx"], [1, 2, 3], [0.0])
    a = hc.sample_cone(phi, 200, seed=11)
    b = hc.sample_cone(phi, 200, seed=11)
    assert [e["xi"] for e in a] == [e["xi"] for e in b]


def test_callback_fields():
    def f1(x):
        r2 = x[0] * x[0] + x[1] * x[1]
        v = 0.0 if r2 < 1e-300 else (x[0] / math.sqrt(r2) + 2.0) * math.exp(-2.0 / r2)
        return [v, 0.0]

    def f2(x):
        r2 = x[0] * x[0] + x[1] * x[1]
        v = 0.0 if r2 < 1e-300 else math.exp(-1.0 / r2)
        return [v, 0.0]

    def fx(x):
        return [1.0, 0.0]

    def fy(x):
        return [0.0, 1.0]

    phi = hc.PairingMap([f1, f2, fx, fy], [1, 2, 3, 3], [0.0, 0.0])
    entries = hc.sample_cone(phi, 2000, seed=7, t_min=1e-3)
    ratios = [
        e["xi"][0] * e["xi"][2] / e["xi"][1] ** 2
        for e in entries
        if abs(e["xi"][1]) > 1e-3
    ]
    assert ratios
    assert all(1.0 - 1e-3 <= r <= 3.0 + 1e-3 for r in ratios)


def test_symbol_character_presentations():
    classes = [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]
    s1 = hc.symbol_character("X1*X2 - X3*X3", 3, 1, [1, 3, 2], ["0"], classes,
                             [1.0, 0.0, 1.0], order=4)
    s2 = hc.symbol_character("-X3", 3, 1, [1, 3, 2], ["0"], classes,
                             [1.0, 0.0, 1.0], order=4)
    assert abs((s2 - s1) - 1.0) < 1e-12
    on_cone = hc.symbol_character("X1*X2 - X3*X3", 3, 1, [1, 3, 2], ["0"], classes,
                                  [1.0, 2.0, 4.0], order=4)
    assert abs(on_cone) < 1e-12


def test_realize_symbol_oscillator():
    heis = hc.free_nilpotent([1, 1], 2)
    out = hc.realize_symbol(
        "-X1*X1 - X2*X2", 2, 2, [1, 1], ["0", "0"],
        heis["dim"], heis["weights"], heis["depth"], heis["sc"],
        ["0", "0", "1"], [["1", "0", "0"], ["0", "1", "0"]])
    assert out["q"] == 1
    assert out["operator"] == "(x^2)*(1) + (-1)*D^2" or "D^2" in out["operator"]


def test_harmonic_and_verdict():
    eigs = hc.harmonic_check(64)
    for i, e in enumerate(eigs):
        assert abs(e - (2 * i + 1)) < 1e-8
    v = hc.hypoellipticity_verdict(1, 1, 0.0)
    assert v["maximally_hypoelliptic"]
    spec = hc.model_spectrum(1, 1)
    assert spec["converged"]
    v2 = hc.hypoellipticity_verdict(1, 1, spec["eigenvalues"][0])
    assert not v2["maximally_hypoelliptic"]


def test_bch_series_and_order():
    series = hc.bch_series(2, [(1, "dx")], [(1, "x*dy")], 2)
    assert (2, "(-1/2)*dy") in series
    fit = hc.flow_order_test(2, [(1, "dx")], [(1, "x*dy")], [0.0, 0.0], 2)
    assert not fit["inconclusive"]
    assert fit["slope"] > 2.8
