import math

import numpy as np
import pytest

import relaydde as rd


def test_orbit_values():
    o = rd.periodic_solution(rd.P1)
    assert o.z1 == pytest.approx(0.817239655402078, abs=1e-13)
    assert o.period == pytest.approx(3.09188229228223, abs=1e-13)
    assert o(np.array([0.0, o.t_max])) == pytest.approx([o.x_min, o.x_max], abs=1e-14)


def test_evolve_constant_history():
    tr = rd.evolve(rd.P1, rd.History.constant(1.0, 1.0), 5.0)
    assert tr.zeros[0]["t"] == pytest.approx(math.log(2.25), abs=1e-14)
    assert tr.zeros[0]["direction"] == "down"
    xs = tr(np.linspace(0, 5, 11))
    assert xs.shape == (11,)
    assert tr.to_csv(4).splitlines()[0] == "t,x"


def test_pulse_responses():
    r = rd.response(rd.P1, 0.2, 0.1, 0.4)
    assert r["case"] == "RNRN"
    assert r["T"] == pytest.approx(2.96401567498838, abs=1e-13)
    s = rd.response(rd.P1, 0.2, 0.1, 0.4, simulate=True)
    assert s["T"] == pytest.approx(r["T"], abs=1e-9)
    assert rd.classify(rd.P2, 0.2, 3.0, 0.4) == "FNRP"


def test_sweep_and_sequence():
    seq = rd.case_sequence(rd.P1, 0.2, 0.4)
    assert seq == ["RNRN", "RNRP", "RPRP", "RPFP", "RPFN", "FPFN", "FNFN", "FNRN"]
    t = rd.sweep(rd.P2, 0.2, 0.4, n=256)
    assert t["report"]["pass"]
    assert t["sequence"] == ["RNRP", "RPRP", "RPFP", "FPFP", "FPFN", "FNFN", "FNRN", "FNRP"]
    assert len(t["rows"]) == 256
    assert t["csv"].startswith("delta,case,T,xmin,xmax\n")


def test_therapy_and_three_level():
    plan = rd.therapy(rd.P1, 0.05, -0.45)
    assert plan["feasible"]
    assert plan["achieved_min"] == pytest.approx(-0.45, abs=1e-9)
    bad = rd.therapy(rd.P1, 0.05, -0.3)
    assert not bad["feasible"] and bad["achieved_min"] is None
    r = rd.three_level(rd.ModelParams(5.0, 0.4, 0.8), 2.0, 0.6)
    assert r["undershoot"]
    assert r["x_z1_2tau"] == pytest.approx(-1.97450146387571, abs=1e-12)


def test_verify_and_merge():
    o = rd.periodic_solution(rd.P1)
    rep = rd.verify(rd.P1, o.segment(0.0), 2 * o.period)
    assert rep["max_abs_dev"] < 1e-5 and rep["zero_counts_match"]
    tr = rd.evolve(rd.P1, rd.History.constant(1.0, 1.0), 12.0)
    m = rd.merge_time(tr, o)
    assert m["phase"] == "Min"


def test_errors():
    with pytest.raises(rd.ValidationError):
        rd.periodic_solution(rd.ModelParams(1.0, 0.0, 0.8))
    with pytest.raises(rd.RelayError):
        rd.periodic_solution(rd.ModelParams(1.0, 0.4, -0.3))
    with pytest.raises(ValueError):
        rd.response(rd.P1, 0.9, 0.1, 0.4)
    assert rd.regime(rd.ModelParams(1.0, 0.4, -0.3)) == ("GasUpper", pytest.approx(0.3))
    raw = rd.nondimensionalize(rd.RawParams(1.0, 1.4, 0.2, 1.0, 1.0))
    assert raw.beta_u == pytest.approx(0.8)
