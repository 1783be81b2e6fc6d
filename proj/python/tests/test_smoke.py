import cmath
import math
import os
import pathlib

import pytest

import bpsosc

SCENARIOS = pathlib.Path(os.environ.get("BPSOSC_SCENARIOS", pathlib.Path(__file__).parents[2] / "scenarios"))
FIXTURE = SCENARIOS / "double_a1.json"


def test_version():
    assert bpsosc.__version__ == "0.1.0"


def test_special_functions():
    assert abs(bpsosc.log_gamma(5) - math.log(24)) < 1e-13
    assert abs(bpsosc.log_lambda(1) - (1 - 0.5 * math.log(2 * math.pi))) < 1e-12
    assert bpsosc.bernoulli(4) == "-1/30"
    x = cmath.exp(2j * math.pi * complex(0.3, 0.4))
    assert abs(bpsosc.polylog_neg(1, x) - x / (1 - x) ** 2) < 1e-14


def test_stokes_closed_form():
    osc = bpsosc.SimpleOscillator(1, -1, "1", 1, 1j, 0.2)
    plus, minus = osc.stokes_analytic()
    num_plus, num_minus = osc.stokes_numeric()
    assert abs(plus[0][1] - 2 * math.sin(osc.coupling / 2)) < 1e-14
    assert abs(num_plus[0][1] - plus[0][1]) < 1e-6
    assert abs(num_minus[1][0] - minus[1][0]) < 1e-6
    assert abs(osc.stokes_hypergeometric()[0][1] - plus[0][1]) < 1e-12


def test_picard_matches_ode():
    osc = bpsosc.SimpleOscillator(1, -1, 1, 1, 1j, 0.05)
    t = cmath.rect(0.3, math.pi / 4)
    a, b = osc.picard(t), osc.ode(t)
    assert max(abs(a[i][k] - b[i][k]) for i in range(2) for k in range(2)) < 1e-6


def test_large_n_limit():
    r = bpsosc.psi_limit(str(FIXTURE), 1, 1, 0.05, [50, 100, 200, 400])
    assert r["extrapolated_error"] < 1e-6
    assert abs(r["fitted_order"] - 1) < 0.1


def test_gv_coefficients():
    c = bpsosc.gv_coefficients(3, {"beta": ("1", 0.3 + 0.4j)}, 3)
    x = cmath.exp(2j * math.pi * (0.3 + 0.4j))
    assert abs(c[2] - (3 / 5760 + x / (1 - x) ** 2 / 240)) < 1e-16
    assert set(c) == {2, 4}
    lhs, rhs, err = bpsosc.resum_check(0.3 + 0.4j, 2, 200)
    assert abs(rhs - (math.pi / cmath.sin(math.pi * (0.3 + 0.4j))) ** 2) < 1e-10


def test_errors_map_to_exceptions():
    with pytest.raises(bpsosc.ValidationError):
        bpsosc.SimpleOscillator(1, -1, "1/0", 1, 1j, 0.1)
    osc = bpsosc.SimpleOscillator(1, -1, 1, 1, 1j, 0.1)
    with pytest.raises(bpsosc.SectorError):
        osc.first_order(0.5)
    assert issubclass(bpsosc.DivergenceError, bpsosc.Error)


def test_scenario_and_run(tmp_path):
    digest, resolved, defaults = bpsosc.load_scenario(FIXTURE)
    assert resolved["rank"] == 2
    assert "quadrature" in defaults
    r = bpsosc.run("check-structure", str(FIXTURE), str(tmp_path), threads=2)
    assert r["exit_code"] == 0
    assert "uncoupled: true" in r["summary"]
    assert (tmp_path / f"check-structure-{digest}.csv").exists()
    bad = bpsosc.run("nope", str(FIXTURE), str(tmp_path))
    assert bad["exit_code"] == 2
    assert "check-structure" in bpsosc.task_names()
