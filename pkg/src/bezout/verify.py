"""Machine-checked residuals for the structural identities.

Every check compares a measured residual against a fixed tolerance.  Checks
that live on finite sections of infinite operators (isometry of ``T_Theta``,
``im T_Theta = ker T_G``) are gated only on interior block columns; edge
data is kept in ``details``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import SolveConfig
from .errors import BezoutError
from .gram import GramSolver, apply_gram_inverse, apply_gram_inverse_direct, build_gram_solver
from .sections import blocks_of, toeplitz_section
from .series import CoeffSeries, EvalGrid, evaluate_many
from .solver import (
    BezoutData,
    assemble_solution,
    compute_xi_direct,
    compute_y_inverse_adjoint,
    h2_norm_sq,
    solution_residual,
    solve_sized,
    y_right_hand_side,
)

log = logging.getLogger(__name__)

CHECK_ORDER = (
    "positivity",
    "spectral-factor",
    "gram-oracle",
    "GYG0",
    "invGH2",
    "invXiTheta",
    "detY-nonvanishing",
    "polynomial-Yinv-degree",
    "Yinv-adjoint",
    "altdefXi",
    "allsolW-residual",
    "H2idW",
    "C1",
    "C2",
    "lemtht1-j0",
    "lemtht1-jpos",
    "eqtht0*",
    "TolH",
    "kernel-range",
)


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    status: str = ""
    comparison: str = "<="
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.status:
            self.status = "PASS" if self.passed else "FAIL"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": _jsonable(self.residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "status": self.status,
            "comparison": self.comparison,
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not np.isfinite(v):
        return None
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def upper(name, residual, tol, **details) -> Check:
    residual = float(residual)
    return Check(name, residual, tol, bool(residual <= tol), details=details)


def lower(name, value, tol, **details) -> Check:
    value = float(value)
    return Check(name, value, tol, bool(value >= tol), comparison=">=", details=details)


def not_applicable(name, reason="n/a (p=m)") -> Check:
    return Check(name, float("nan"), float("nan"), True, status=reason)


def skipped(name, reason) -> Check:
    return Check(name, float("nan"), float("nan"), False, status="SKIPPED", details={"reason": reason})


@dataclass
class VerifyReport:
    checks: list
    grid: EvalGrid
    degree: int
    seed: int = 0
    section_blocks: Optional[int] = None

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def precondition_failed(self) -> bool:
        return any(c.name == "positivity" and not c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "section_blocks": self.section_blocks,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "grid": {
                "n_interior": int(len(self.grid.interior_points)),
                "n_boundary": int(len(self.grid.boundary_points)),
            },
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_table(self) -> str:
        lines = [f"{'check':<24}{'residual':>14}{'tol':>11}  status", "-" * 58]
        for c in self.checks:
            res = "" if np.isnan(c.residual) else f"{c.residual:.3e}"
            tol = "" if np.isnan(c.tolerance) else f"{c.comparison}{c.tolerance:.0e}"
            lines.append(f"{c.name:<24}{res:>14}{tol:>11}  {c.status}")
        lines.append(f"seed={self.seed} degree={self.degree} N={self.section_blocks}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# pointwise identities


def _eval(F: CoeffSeries, zs):
    return evaluate_many(F, zs)


def check_gyg0(d: BezoutData, grid: EvalGrid, tol=1e-8) -> Check:
    zs = grid.all_points
    diff = _eval(d.g, zs) @ _eval(d.y, zs) - d.g.coeffs[0]
    return upper("GYG0", np.linalg.norm(diff, 2, axis=(1, 2)).max(), tol)


def check_inv_gh(d: BezoutData, grid: EvalGrid, tol=1e-7) -> Check:
    """``[G; H] Y [Xi_0 Theta_0] = I`` and the reverse product, pointwise."""
    zs = grid.all_points
    left = np.concatenate([_eval(d.g, zs), _eval(d.h, zs)], axis=1)
    right = _eval(d.y, zs) @ np.hstack([d.xi0, d.theta0])
    eye = np.eye(d.p)
    r1 = np.linalg.norm(left @ right - eye, 2, axis=(1, 2)).max()
    r2 = np.linalg.norm(right @ left - eye, 2, axis=(1, 2)).max()
    return upper("invGH2", max(r1, r2), tol, gh_times_xitheta=r1, xitheta_times_gh=r2)


def check_inv_xi_theta(d: BezoutData, tol=1e-10) -> Check:
    A = np.hstack([d.xi0, d.theta0])
    B = np.vstack([d.g.coeffs[0], d.h0])
    eye = np.eye(d.p)
    r = max(np.abs(A @ B - eye).max(), np.abs(B @ A - eye).max())
    return upper("invXiTheta", r, tol)


def check_det_y(d: BezoutData, grid: EvalGrid, tol=1e-8) -> Check:
    dets = np.abs(np.linalg.det(_eval(d.y, grid.all_points)))
    return lower("detY-nonvanishing", dets.min(), tol)


def check_yinv_degree(d: BezoutData, tol=1e-10) -> Check:
    dg = d.g.hi
    if dg >= d.y_inv.hi:
        return not_applicable("polynomial-Yinv-degree", "n/a (deg G >= working degree)")
    beyond = d.y_inv.coeff_norms()[dg + 1 :]
    return upper("polynomial-Yinv-degree", beyond.max(), tol, degree_g=dg)


def check_tolokonnikov(d: BezoutData, grid: EvalGrid, tol=1e-7) -> Check:
    """``H(zeta) = Theta(zeta)^* (I - Xi(zeta) G(zeta))`` on the circle."""
    if d.p == d.m:
        return not_applicable("TolH")
    zs = grid.boundary_points
    th = _eval(d.theta, zs)
    rhs = np.conj(np.transpose(th, (0, 2, 1))) @ (np.eye(d.p) - _eval(d.xi, zs) @ _eval(d.g, zs))
    diff = _eval(d.h, zs) - rhs
    return upper("TolH", np.linalg.norm(diff, 2, axis=(1, 2)).max(), tol)


# --------------------------------------------------------------------------
# inner-ness of Theta


def theta_column_products(d: BezoutData, N: int) -> np.ndarray:
    """``gamma_j^* gamma_k`` for the ``N`` block columns of the Toeplitz section of ``Theta``."""
    k = d.p - d.m
    T = toeplitz_section(d.theta, N).matrix
    return (T.conj().T @ T).reshape(N, k, N, k).transpose(0, 2, 1, 3)


def check_theta_inner(d: BezoutData, N: Optional[int] = None, jmax: Optional[int] = None,
                      tol=1e-6) -> list:
    """Conditions (C1) isometric columns and (C2) mutually orthogonal columns."""
    if d.p == d.m:
        return [not_applicable("C1"), not_applicable("C2")]
    eff = d.theta.effective_degree(1e-15)
    N = N or 2 * (eff + 1)
    jmax = N // 2 if jmax is None else jmax
    k = d.p - d.m
    prods = theta_column_products(d, N)
    n_int = min(jmax, N - 1 - eff) + 1
    eye = np.eye(k)
    c1 = np.array([np.linalg.norm(prods[j, j] - eye, 2) for j in range(N)])
    off = np.linalg.norm(prods, 2, axis=(2, 3))
    np.fill_diagonal(off, 0.0)
    interior = slice(0, max(n_int, 1))
    c1_int = c1[interior].max()
    c2_int = off[interior, interior].max() if n_int > 1 else 0.0
    edge_c1 = float(c1[n_int:].max()) if n_int < N else 0.0
    edge_c2 = float(off.max())
    return [
        upper("C1", c1_int, tol, interior_columns=n_int, edge_residual=edge_c1),
        upper("C2", c2_int, tol, interior_columns=n_int, edge_residual=edge_c2),
    ]


def sum_identity_parts(d: BezoutData, s: GramSolver, jmax: Optional[int] = None):
    """Left and right sides of the ``sum_i Y_i^* Y_{i+j}`` identities for ``j = 0..jmax``."""
    p, m = d.p, d.m
    Yc = d.y.coeffs
    jmax = len(Yc) // 2 if jmax is None else jmax
    W = blocks_of(y_right_hand_side(s), m)  # (N, m, p)
    G = d.g.padded(0, s.n_blocks)
    lhs, rhs = [], []
    for j in range(jmax + 1):
        lhs.append(np.einsum("iab,iac->bc", Yc[: len(Yc) - j].conj(), Yc[j:]))
        if j == 0:
            rhs.append(np.eye(p) + np.einsum("iab,iac->bc", G[1 : s.n_blocks + 1].conj(), W))
        else:
            rhs.append(-G[0].conj().T @ W[j - 1])
    return lhs, rhs


def check_sum_identities(d: BezoutData, s: GramSolver, jmax: Optional[int] = None,
                         tol=1e-7) -> list:
    lhs, rhs = sum_identity_parts(d, s, jmax)
    r0 = np.linalg.norm(lhs[0] - rhs[0], 2)
    rpos = max((np.linalg.norm(a - b, 2) for a, b in zip(lhs[1:], rhs[1:])), default=0.0)
    out = [upper("lemtht1-j0", r0, tol), upper("lemtht1-jpos", rpos, tol, jmax=len(lhs) - 1)]
    if d.p == d.m:
        out.append(not_applicable("eqtht0*"))
    else:
        k = d.p - d.m
        e = d.theta0.conj().T @ rhs[0] @ d.theta0 - np.eye(k)
        out.append(upper("eqtht0*", np.linalg.norm(e, 2), tol))
    return out


def check_kernel_range(d: BezoutData, s: GramSolver, trials: int = 8,
                       rng: Optional[np.random.Generator] = None,
                       tol_inclusion=1e-7, tol_reverse=1e-6) -> Check:
    """``im T_Theta`` inside ``ker T_G`` and the reverse inclusion on interior blocks."""
    if d.p == d.m:
        return not_applicable("kernel-range")
    rng = rng or np.random.default_rng(0)
    m, k = d.m, d.p - d.m
    N = s.n_blocks
    deg = d.theta.hi
    TT = toeplitz_section(d.theta, N).matrix
    v = rng.standard_normal((N * k, trials)) + 1j * rng.standard_normal((N * k, trials))
    out = s.toeplitz_g @ (TT @ v)
    n_in = min(deg + 1, N)
    incl = np.linalg.norm(out[: n_in * m]) / np.linalg.norm(v)
    incl_edge = np.linalg.norm(out[n_in * m :]) / np.linalg.norm(v) if n_in < N else 0.0

    def reverse(n):
        TG = toeplitz_section(d.g, n).matrix
        _, sv, vh = np.linalg.svd(TG)
        rank = int(np.sum(sv > 1e-8 * sv[0]))
        basis = vh[rank:].conj().T
        f = basis @ (rng.standard_normal((basis.shape[1], trials))
                     + 1j * rng.standard_normal((basis.shape[1], trials)))
        q, _ = np.linalg.qr(toeplitz_section(d.theta, n).matrix)
        resid = f - q @ (q.conj().T @ f)
        return float(np.linalg.norm(resid) / np.linalg.norm(f)), basis.shape[1]

    n_rev = min(deg + 1, N, 96)
    rev, dim = reverse(n_rev)
    rev_edge, _ = reverse(min(N, deg + 1 + n_rev // 2))
    passed = incl <= tol_inclusion and rev <= tol_reverse
    return Check(
        "kernel-range",
        float(max(incl, rev)),
        tol_reverse,
        bool(passed),
        details={
            "inclusion": float(incl),
            "inclusion_tol": tol_inclusion,
            "reverse": rev,
            "reverse_tol": tol_reverse,
            "kernel_dim": dim,
            "blocks": n_rev,
            "inclusion_edge": float(incl_edge),
            "reverse_edge": rev_edge,
        },
    )


# --------------------------------------------------------------------------
# solution set


def random_parameter(rng, rows, cols, deg=8) -> CoeffSeries:
    c = rng.standard_normal((deg + 1, rows, cols)) + 1j * rng.standard_normal((deg + 1, rows, cols))
    return CoeffSeries(c / np.sqrt(2 * (deg + 1)), 0)


def check_solutions(d: BezoutData, grid: EvalGrid, rng, trials=5, tol_res=1e-8,
                    tol_split=1e-8) -> list:
    k = d.p - d.m
    res, split = 0.0, 0.0
    for _ in range(trials):
        V = random_parameter(rng, k, d.m) if k else CoeffSeries.zeros(0, d.m)
        X = assemble_solution(d, V)
        res = max(res, solution_residual(d.g, X, grid))
        u = rng.standard_normal(d.m) + 1j * rng.standard_normal(d.m)
        u /= np.linalg.norm(u)
        x2 = h2_norm_sq(X, u)
        xi2 = h2_norm_sq(d.xi, u)
        v2 = h2_norm_sq(V, u) if k else 0.0
        split = max(split, abs(x2 - xi2 - v2) / x2)
    return [upper("allsolW-residual", res, tol_res), upper("H2idW", split, tol_split)]


def check_gram_oracle(s: GramSolver, rng, trials=4, tol=1e-8) -> Check:
    N, m = s.n_blocks, s.m
    b = rng.standard_normal((N * m, trials)) + 1j * rng.standard_normal((N * m, trials))
    x1 = apply_gram_inverse(s, b)
    x2 = apply_gram_inverse_direct(s.g, N, b)
    rel = np.linalg.norm(x1 - x2, axis=0) / np.linalg.norm(x2, axis=0)
    return upper("gram-oracle", rel.max(), tol, trials=trials)


def check_yinv_adjoint(d: BezoutData, s: GramSolver, tol=1e-9) -> Check:
    alt = compute_y_inverse_adjoint(s, d.y_inv.hi)
    return upper("Yinv-adjoint", np.abs(alt.coeffs - d.y_inv.coeffs).max(), tol)


def check_alt_xi(d: BezoutData, s: GramSolver, tol=1e-9) -> Check:
    alt = compute_xi_direct(s, d.xi.hi)
    return upper("altdefXi", np.abs(alt.coeffs - d.xi.coeffs).max(), tol)


# --------------------------------------------------------------------------


def run_all(G: CoeffSeries, cfg: Optional[SolveConfig] = None,
            data: Optional[BezoutData] = None, grid: Optional[EvalGrid] = None) -> VerifyReport:
    """Solve for ``G`` (unless ``data`` is given) and run every check.

    Failures are recorded in the report; nothing is raised for a failed
    check.  A non-positive Gram operator fails the ``positivity`` check and
    skips the rest.
    """
    cfg_in = cfg or SolveConfig()
    cfg = cfg_in.resolve(G.hi)
    grid = grid or EvalGrid.default(cfg.boundary_points)
    rng = np.random.default_rng(cfg.seed)
    N = cfg.section_blocks
    checks = []

    def finish():
        order = {n: i for i, n in enumerate(CHECK_ORDER)}
        checks.sort(key=lambda c: order.get(c.name, len(order)))
        deg = data.degree if data is not None else cfg.output_degree
        return VerifyReport(checks, grid, deg, cfg.seed, N)

    try:
        if data is None:
            s, data = solve_sized(G, cfg_in)
            N = s.n_blocks
            cfg = cfg.replace(section_blocks=N, output_degree=data.degree)
        else:
            s = build_gram_solver(G, N, cfg)
    except BezoutError as exc:
        ladder = getattr(exc, "ladder", [])
        margin = ladder[1][1] if len(ladder) > 1 else float("nan")
        checks.append(Check("positivity", margin, cfg.positivity_tol, False,
                            comparison=">", details={"error": str(exc), "ladder": ladder}))
        for name in CHECK_ORDER[1:]:
            checks.append(skipped(name, "precondition failed"))
        return finish()

    checks.append(Check("positivity", s.margin, cfg.positivity_tol, True, comparison=">",
                        details={"ladder": [[N, s.margin]]}))
    checks.append(upper("spectral-factor", s.r_factor.residual, cfg.factor_tol,
                        section_size=s.r_factor.section_size))
    checks.append(check_gram_oracle(s, rng))

    d = data

    checks.append(check_gyg0(d, grid))
    checks.append(check_inv_gh(d, grid))
    checks.append(check_inv_xi_theta(d))
    checks.append(check_det_y(d, grid))
    checks.append(check_yinv_degree(d))
    checks.append(check_yinv_adjoint(d, s))
    checks.append(check_alt_xi(d, s))
    checks.extend(check_solutions(d, grid, rng))
    checks.extend(check_theta_inner(d, N))
    checks.extend(check_sum_identities(d, s))
    checks.append(check_tolokonnikov(d, grid))
    checks.append(check_kernel_range(d, s, rng=rng))
    return finish()
