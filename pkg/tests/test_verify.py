import dataclasses
import json

import numpy as np
import pytest

from bezout import CoeffSeries, SolveConfig, build_gram_solver, example, run_all
from bezout.instances import degenerate_scalar, random_symbol
from bezout.verify import CHECK_ORDER, check_theta_inner, sum_identity_parts

from conftest import N_GOLD, Q

GATED = ["GYG0", "invGH2", "invXiTheta", "allsolW-residual", "H2idW", "C1", "C2", "eqtht0*",
         "lemtht1-j0", "lemtht1-jpos", "TolH", "kernel-range", "detY-nonvanishing",
         "polynomial-Yinv-degree"]


@pytest.fixture(scope="module")
def gold_report():
    return run_all(example("polynomial_1x2"))


def test_gold_all_pass(gold_report):
    assert gold_report.passed, gold_report.to_table()
    assert [c.name for c in gold_report.checks] == list(CHECK_ORDER)
    for name in GATED:
        assert sum(c.name == name for c in gold_report.checks) == 1


def test_gold_tolokonnikov_tight(gold_report):
    assert gold_report["TolH"].residual <= 1e-8
    assert gold_report["kernel-range"].residual <= 1e-7


def test_gold_sum_identity_closed_form(gold_data):
    # sum_i Y_i^* Y_i from the geometric closed form (ratio q^2)
    closed = np.eye(2) + Q**2 / ((1 - 2 * Q) ** 2 * (1 - Q**2)) * N_GOLD.T @ N_GOLD
    s = build_gram_solver(gold_data.g, 128)
    lhs, rhs = sum_identity_parts(gold_data, s)
    np.testing.assert_allclose(lhs[0], closed, atol=1e-12)
    np.testing.assert_allclose(rhs[0], closed, atol=1e-12)
    for j in range(1, 6):
        np.testing.assert_allclose(lhs[j], rhs[j], atol=1e-12)


def test_constant_report():
    rep = run_all(example("constant"))
    assert rep.passed
    assert rep["C1"].residual == 0 and rep["C2"].residual == 0


def test_square_report_marks_theta_checks():
    rep = run_all(example("square_identity"))
    assert rep.passed
    for name in ("C1", "C2", "TolH", "kernel-range", "eqtht0*"):
        assert rep[name].status == "n/a (p=m)"


def test_degenerate_report_fails_precondition():
    rep = run_all(degenerate_scalar())
    assert not rep.passed and rep.precondition_failed
    assert rep["positivity"].status == "FAIL"
    assert all(c.status == "SKIPPED" for c in rep.checks[1:])


@pytest.mark.parametrize("seed,m,p,deg", [(0, 1, 2, 3), (1, 2, 4, 6), (2, 1, 3, 2), (3, 2, 3, 5)])
def test_random_reports(seed, m, p, deg):
    G = random_symbol(np.random.default_rng(seed), m, p, deg)
    rep = run_all(G, SolveConfig(seed=seed))
    assert rep.passed, rep.to_table()


def test_theta_inner_reports_edge_columns(gold_data):
    c1, c2 = check_theta_inner(gold_data, N=64)
    assert c1.passed and c2.passed
    assert c1.residual <= 1e-8
    assert 0 < c1.details["interior_columns"] < 64
    # truncation at the section edge shows up only in the reported edge data
    assert c2.details["edge_residual"] >= c2.residual


def test_corrupted_y_detected(gold_data):
    bad_c = np.array(gold_data.y.coeffs)
    bad_c[1] += 1e-3
    bad = dataclasses.replace(gold_data, y=CoeffSeries(bad_c))
    rep = run_all(gold_data.g, SolveConfig(section_blocks=128, output_degree=64), data=bad)
    assert not rep.passed and not rep.precondition_failed
    assert not rep["invGH2"].passed


def test_report_serialization_and_determinism(gold_report):
    again = run_all(example("polynomial_1x2"))
    assert gold_report.to_json() == again.to_json()
    data = json.loads(gold_report.to_json())
    assert data["passed"] is True and len(data["checks"]) == len(CHECK_ORDER)
    table = gold_report.to_table()
    assert "GYG0" in table and "PASS" in table
