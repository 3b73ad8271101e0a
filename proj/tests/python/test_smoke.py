import json
import math

import pytest

import mstop


def test_lognormal_table():
    rows = mstop.value_table()
    assert len(rows) == 10
    assert rows[0][0] == pytest.approx(-1.65, abs=0.01)
    assert rows[9][8] == pytest.approx(-11.78, abs=0.01)


def test_worked_sequence():
    gains = [-0.57, -0.79, -4.75, -1.07, -1.14, -5.56, -1.59]
    taus, realized = mstop.run_rule(gains, k=4)
    assert taus == [1, 2, 4, 7]
    assert realized == pytest.approx(-4.02)


def test_kernels():
    assert mstop.bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1))
    assert mstop.ig_cdf(1.0, 1.0, 1.0) == pytest.approx(0.6681, abs=1e-4)


def test_gamma_fit_collapses():
    fit = mstop.fit_expansion(2.0, 2.0, 4.0, 24.0)  # Gamma(2, 1)
    assert abs(fit["A3"]) < 1e-12 and abs(fit["A4"]) < 1e-12
    assert fit["positive"]


def test_ilp_local_config():
    cfg = {"frequency": {"rate": 4}, "severity": {"mu": 1, "lambda": 3}, "policy": {"kind": "ILP", "param": 1}}
    rows = mstop.value_table(json.dumps(cfg))
    assert rows[0][0] == pytest.approx(-4.0)


def test_bad_config_raises():
    with pytest.raises(ValueError):
        mstop.value_table(json.dumps({"frequency": {"rate": -1}}))


def test_experiment_small():
    r = mstop.experiment("pap-study", M=1000, seed=3)
    assert r["local"]["optimal_beats_all"]
