"""Acceptance suite: one test per criterion, each prints a PASS/FAIL line."""

import time

import numpy as np
import pytest

from bezout import (
    CoeffSeries,
    NotPositiveError,
    SolveConfig,
    apply_gram_inverse,
    apply_gram_inverse_direct,
    assemble_solution,
    build_gram_solver,
    convolve,
    example,
    extract_parameter,
    margin_ladder,
    run_all,
    solve,
    solve_norm_split,
    spectral_factorize,
)
from bezout.instances import degenerate_scalar, random_symbol

from conftest import Q, record, theta_gold, xi_gold, y_gold


def draw_instance(rng, p_min_gap=1):
    m = int(rng.integers(1, 3))
    p = int(rng.integers(m + p_min_gap, 5))
    deg = int(rng.integers(1, 7))
    return random_symbol(rng, m, p, deg, min_margin=1e-2)


def random_series(rng, rows, cols, deg):
    shape = (deg + 1, rows, cols)
    return CoeffSeries(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@pytest.fixture(scope="module")
def gold_256():
    t0 = time.perf_counter()
    d = solve(example("polynomial_1x2"), SolveConfig(section_blocks=256, output_degree=64))
    return d, time.perf_counter() - t0


def test_criterion_1_gold_y_coefficients(gold_256):
    d, elapsed = gold_256
    err = max(np.linalg.norm(d.y.coeffs[nu] - y_gold(nu), 2) for nu in range(1, 21))
    ok = err <= 1e-9 and elapsed <= 10.0
    record(1, ok, f"max |Y_nu - closed form| = {err:.2e} (tol 1e-9), runtime {elapsed:.2f}s (limit 10s)")
    assert ok


def test_criterion_2_gold_structural_matrices(gold_256):
    d, _ = gold_256
    xi_err = np.linalg.norm(d.xi0 - Q / (1 - 2 * Q) * np.array([[1 - Q], [Q]]), 2)
    target = np.array([[0.0, 0.0], [0.0, 1.0 / Q]])
    th_err = np.linalg.norm(d.theta0 @ d.theta0.conj().T - target, 2)
    ok = xi_err <= 1e-9 and th_err <= 1e-9
    record(2, ok, f"|Xi0 - ref| = {xi_err:.2e}; |Theta0 Theta0^H - diag(0, 1/q)| = {th_err:.2e} (tol 1e-9 each)")
    assert xi_err <= 1e-9
    assert th_err <= 1e-9


def test_criterion_3_golden_spectral_factor():
    R = CoeffSeries(np.array([1.0, 3.0, 1.0]).reshape(3, 1, 1), -1)
    f = spectral_factorize(R)
    got = f.r_plus.padded(0, max(1, f.r_plus.hi))[:, 0, 0]
    ref = np.zeros_like(got)
    ref[:2] = Q**-0.5, Q**0.5
    err = np.linalg.norm(got - ref)
    ok = err <= 1e-8
    record(3, ok, f"|R_+ - (q^-1/2, q^1/2)| = {err:.2e} (tol 1e-8)")
    assert ok


TOLERANCES = {
    "GYG0": ("<=", 1e-8),
    "invGH2": ("<=", 1e-7),
    "invXiTheta": ("<=", 1e-10),
    "detY-nonvanishing": (">=", 1e-8),
    "H2idW": ("<=", 1e-8),
    "TolH": ("<=", 1e-7),
    "eqtht0*": ("<=", 1e-7),
    "C1": ("<=", 1e-6),
    "C2": ("<=", 1e-6),
}


def test_criterion_4_identity_suite():
    rng = np.random.default_rng(2024)
    instances = [("gold", example("polynomial_1x2"))]
    instances += [(f"random{i}", draw_instance(rng)) for i in range(20)]
    worst = {k: (np.inf if op == ">=" else 0.0) for k, (op, _) in TOLERANCES.items()}
    failures = []
    for label, G in instances:
        rep = run_all(G, SolveConfig(seed=int(rng.integers(2**31))))
        for name, (op, tol) in TOLERANCES.items():
            r = rep[name].residual
            if op == "<=":
                worst[name] = max(worst[name], r)
                bad = not r <= tol
            else:
                worst[name] = min(worst[name], r)
                bad = not r >= tol
            if bad:
                failures.append(f"{label}:{name}={r:.2e}")
    ok = not failures
    summary = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record(4, ok, f"21 instances; worst: {summary}" + (f"; failures {failures}" if failures else ""))
    assert ok


def test_criterion_5_oracle_equivalence():
    rng = np.random.default_rng(55)
    N = 128
    worst = 0.0
    for _ in range(50):
        G = draw_instance(rng)
        s = build_gram_solver(G, N)
        b = rng.standard_normal(N * G.rows) + 1j * rng.standard_normal(N * G.rows)
        x1 = apply_gram_inverse(s, b)
        x2 = apply_gram_inverse_direct(G, N, b)
        worst = max(worst, np.linalg.norm(x1 - x2) / np.linalg.norm(x2))
    ok = worst <= 1e-8
    record(5, ok, f"50 pairs at N=128, max relative difference {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_6_completeness_round_trip(gold_256):
    rng = np.random.default_rng(66)
    d_gold, _ = gold_256
    d_rand = solve(random_symbol(rng, 2, 4, 4), SolveConfig(section_blocks=160, output_degree=80))
    err_v = 0.0
    for i in range(20):
        d = d_gold if i % 2 == 0 else d_rand
        vdeg = int(rng.integers(0, 9))
        V = random_series(rng, d.p - d.m, d.m, vdeg)
        back = extract_parameter(d, assemble_solution(d, V))
        err_v = max(err_v, np.abs(back.padded(0, back.hi) - V.padded(0, back.hi)).max())

    # solutions built from the closed forms Xi = [1; 1-q]/(1+qz), Theta = sqrt(q)[z; 1+z]/(1+qz)
    deg = 64
    Xi, Th = xi_gold(deg), theta_gold(deg)
    err_x = 0.0
    for _ in range(20):
        V = random_series(rng, 1, 1, int(rng.integers(0, 9)))
        X = (Xi + convolve(Th, V)).truncate(deg)
        V_back = extract_parameter(d_gold, X)
        X_back = assemble_solution(d_gold, V_back, deg=deg)
        err_x = max(err_x, np.abs(X_back.coeffs - X.coeffs).max())
    ok = err_v <= 1e-8 and err_x <= 1e-8
    record(6, ok, f"V round trip {err_v:.2e}, closed-form X round trip {err_x:.2e} (tol 1e-8)")
    assert ok


def test_criterion_7_least_squares_split(gold_256):
    d, _ = gold_256
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(50):
        V = random_series(rng, 1, 1, int(rng.integers(0, 9)))
        u = np.exp(2j * np.pi * rng.uniform())
        x2, xi2, v2 = solve_norm_split(d, V, [u])
        worst = max(worst, abs((x2 - xi2) - v2) / v2)
    ok = worst <= 1e-8
    record(7, ok, f"50 draws, max relative error of |Xu|^2 - |Xi u|^2 = |Vu|^2: {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_8_polynomial_inverse_degree():
    rng = np.random.default_rng(88)
    worst, inv_err = 0.0, 0.0
    for _ in range(10):
        G = draw_instance(rng)
        d = solve(G)
        worst = max(worst, d.y_inv.coeff_norms()[G.hi + 1:].max())
        # the truncated polynomial must still invert Y
        prod = np.array(convolve(d.y, d.y_inv.truncate(G.hi)).truncate(d.degree).coeffs)
        prod[0] -= np.eye(d.p)
        inv_err = max(inv_err, np.abs(prod).max())
    ok = worst <= 1e-10 and inv_err <= 1e-9
    record(8, ok, f"10 polynomials, max |(Y^-1)_nu| beyond deg G = {worst:.2e} (tol 1e-10); "
                  f"|Y (Y^-1 truncated) - I| = {inv_err:.2e}")
    assert ok


def test_criterion_9_negative_path():
    G = degenerate_scalar()
    ladder = margin_ladder(G, [32, 64, 128])
    values = [v for _, v in ladder]
    monotone = all(a > b for a, b in zip(values, values[1:]))
    with pytest.raises(NotPositiveError) as err:
        solve(G)
    ladder_exc = [n for n, _ in err.value.ladder]
    ok = monotone and ladder_exc == [32, 64, 128]
    record(9, ok, "NotPositive raised; margins " + ", ".join(f"N={n}: {v:.3e}" for n, v in ladder))
    assert ok
