"""Structural data of the Bezout equation ``G(z) X(z) = I_m`` and its solutions.

Everything is read off the Moore-Penrose right inverse ``T_G^* (T_G T_G^*)^{-1}``:

* ``xi0``: first block of ``T_G^* (T_G T_G^*)^{-1} E_m``,
* ``theta0``: square root of ``I_p - E_p^* T_G^* (T_G T_G^*)^{-1} T_G E_p``,
* ``Y``: ``Y_0 = I`` and ``[Y_1; Y_2; ...] = -T_G^* (T_G T_G^*)^{-1} [G_1; G_2; ...]``.

All solutions are ``X = Y (xi0 + theta0 V)``; ``V = 0`` gives the least
squares solution.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import SolveConfig
from .errors import NotASolutionError, RankError, ShapeError
from .gram import GramSolver, apply_gram_inverse, build_gram_solver
from .sections import block_column, blocks_of
from .series import (
    CoeffSeries,
    EvalGrid,
    convolve,
    evaluate_many,
    lower_star,
    matrix_from_list,
    matrix_to_list,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BezoutData:
    g: CoeffSeries
    xi0: np.ndarray
    theta0: np.ndarray
    h0: np.ndarray
    y: CoeffSeries
    y_inv: CoeffSeries
    xi: CoeffSeries
    theta: CoeffSeries
    h: CoeffSeries
    margin: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.g.rows

    @property
    def p(self) -> int:
        return self.g.cols

    @property
    def degree(self) -> int:
        return self.y.hi

    def to_dict(self) -> dict:
        return {
            "g": self.g.to_dict(),
            "xi0": matrix_to_list(self.xi0),
            "theta0": matrix_to_list(self.theta0),
            "h0": matrix_to_list(self.h0),
            "y": self.y.to_dict(),
            "y_inv": self.y_inv.to_dict(),
            "xi": self.xi.to_dict(),
            "theta": self.theta.to_dict(),
            "h": self.h.to_dict(),
            "margin": self.margin,
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BezoutData":
        g = CoeffSeries.from_dict(data["g"])
        m, p = g.shape
        return cls(
            g=g,
            xi0=matrix_from_list(data["xi0"], p, m),
            theta0=matrix_from_list(data["theta0"], p, p - m),
            h0=matrix_from_list(data["h0"], p - m, p),
            y=CoeffSeries.from_dict(data["y"]),
            y_inv=CoeffSeries.from_dict(data["y_inv"]),
            xi=CoeffSeries.from_dict(data["xi"]),
            theta=CoeffSeries.from_dict(data["theta"]),
            h=CoeffSeries.from_dict(data["h"]),
            margin=float(data["margin"]),
            diagnostics=dict(data.get("diagnostics", {})),
        )

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "BezoutData":
        return cls.from_dict(json.loads(text))


# --------------------------------------------------------------------------
# helpers on the right inverse


def _first_block_of_tg_adjoint(s: GramSolver, w: np.ndarray) -> np.ndarray:
    """``E_p^* T_G^* w = sum_i G_i^H w_i``."""
    return s.toeplitz_g[:, : s.p].conj().T @ w


def _right_inverse_apply(s: GramSolver, b: np.ndarray) -> np.ndarray:
    """``T_G^* (T_G T_G^*)^{-1} b`` on the finite section."""
    return s.toeplitz_g.conj().T @ apply_gram_inverse(s, b)


def _embed_first_block(s: GramSolver, n: int) -> np.ndarray:
    e = np.zeros((s.n_blocks * n, n), dtype=complex)
    e[:n] = np.eye(n)
    return e


# --------------------------------------------------------------------------
# structural matrices


def compute_xi0(s: GramSolver) -> np.ndarray:
    """``Xi_0 = E_p^* T_G^* (T_G T_G^*)^{-1} E_m`` (``p x m``)."""
    w = apply_gram_inverse(s, _embed_first_block(s, s.m))
    return _first_block_of_tg_adjoint(s, w)


def compute_xi_direct(s: GramSolver, deg: int) -> CoeffSeries:
    """Taylor coefficients of ``Xi`` as the blocks of ``T_G^* (T_G T_G^*)^{-1} E_m``."""
    if deg > s.n_blocks - 1:
        raise ShapeError(f"degree {deg} needs more than {s.n_blocks} blocks")
    full = _right_inverse_apply(s, _embed_first_block(s, s.m))
    return CoeffSeries(blocks_of(full, s.p)[: deg + 1], 0)


def kernel_projector(s: GramSolver) -> np.ndarray:
    """``P = I_p - E_p^* T_G^* (T_G T_G^*)^{-1} T_G E_p``."""
    w = apply_gram_inverse(s, block_column(s.g, s.n_blocks))
    P = np.eye(s.p) - _first_block_of_tg_adjoint(s, w)
    return 0.5 * (P + P.conj().T)


def compute_theta0(s: GramSolver, cfg: Optional[SolveConfig] = None) -> np.ndarray:
    """Injective ``Theta_0`` with ``Theta_0 Theta_0^* = P``.

    Columns are ``sqrt(lambda_i) v_i`` for the eigenpairs of ``P`` above the
    rank cut, in descending order, each rotated so that its largest entry is
    real positive.

    Raises
    ------
    RankError
        If the number of surviving eigenvalues is not ``p - m``.
    """
    cfg = cfg or SolveConfig()
    P = kernel_projector(s)
    lam, vec = np.linalg.eigh(P)
    lam, vec = lam[::-1], vec[:, ::-1]
    cut = cfg.rank_tol * max(lam[0], 1.0)
    keep = lam > cut
    k = int(keep.sum())
    if k != s.p - s.m:
        raise RankError(
            f"kernel projector has rank {k}, expected p - m = {s.p - s.m}", eigenvalues=lam
        )
    cols = vec[:, keep] * np.sqrt(lam[keep])
    for j in range(cols.shape[1]):
        i = np.argmax(np.abs(cols[:, j]))
        cols[:, j] *= np.conj(cols[i, j]) / abs(cols[i, j])
    return cols


def compute_h0(xi0: np.ndarray, theta0: np.ndarray, g0: np.ndarray) -> np.ndarray:
    """``H_0 = (Theta_0^* Theta_0)^{-1} Theta_0^* (I_p - Xi_0 G_0)``."""
    p = xi0.shape[0]
    gram = theta0.conj().T @ theta0
    if gram.size and np.linalg.cond(gram) > 1e12:
        raise RankError("Theta_0^* Theta_0 is ill conditioned")
    h0 = np.linalg.solve(gram, theta0.conj().T @ (np.eye(p) - xi0 @ g0)) if gram.size else np.zeros((0, p))
    check = np.vstack([g0, h0]) @ np.hstack([xi0, theta0]) - np.eye(p)
    resid = np.abs(check).max()
    if resid > 1e-10:
        log.warning("[G0; H0][Xi0 Theta0] deviates from identity by %.2e", resid)
    return h0


# --------------------------------------------------------------------------
# the function Y and its inverse


def y_right_hand_side(s: GramSolver) -> np.ndarray:
    """``(T_G T_G^*)^{-1} H_G E_p`` (``H_G E_p = [G_1; G_2; ...]``)."""
    return apply_gram_inverse(s, block_column(s.g, s.n_blocks, start=1))


def compute_y(s: GramSolver, deg: int) -> CoeffSeries:
    """Taylor coefficients ``Y_0..Y_deg``."""
    if deg > s.n_blocks - 1:
        raise ShapeError(f"degree {deg} needs more than {s.n_blocks} blocks")
    w = y_right_hand_side(s)
    tail = -blocks_of(s.toeplitz_g.conj().T @ w, s.p)[:deg]
    return CoeffSeries(np.concatenate([np.eye(s.p)[None], tail]), 0)


def compute_y_inverse(s: GramSolver, deg: int) -> CoeffSeries:
    """Taylor coefficients of ``Y^{-1}``.

    Coefficient ``nu >= 1`` is ``E_p^* T_G^* (T_G T_G^*)^{-1} H_G S_p^{nu-1} E_p``,
    i.e. the right inverse applied to block column ``nu - 1`` of ``H_G``.
    """
    if deg > s.n_blocks - 1:
        raise ShapeError(f"degree {deg} needs more than {s.n_blocks} blocks")
    p = s.p
    out = np.zeros((deg + 1, p, p), dtype=complex)
    out[0] = np.eye(p)
    if deg == 0:
        return CoeffSeries(out, 0)
    Hm = s.hankel.matrix[:, : deg * p]
    nz = np.nonzero(np.any(Hm != 0, axis=0))[0]
    flat = np.zeros((p, deg * p), dtype=complex)
    if len(nz):
        flat[:, nz] = _first_block_of_tg_adjoint(s, apply_gram_inverse(s, Hm[:, nz]))
    out[1:] = flat.reshape(p, deg, p).transpose(1, 0, 2)
    return CoeffSeries(out, 0)


def compute_y_inverse_adjoint(s: GramSolver, deg: int) -> CoeffSeries:
    """``Y^{-1}`` as ``F_*`` with ``F = I + z E_p^* (I - z S_p^*)^{-1} H_G^* (T_G T_G^*)^{-1} T_G E_p``.

    Independent second route used to cross-check :func:`compute_y_inverse`.
    """
    p = s.p
    w = apply_gram_inverse(s, block_column(s.g, s.n_blocks))
    hw = blocks_of(s.hankel.matrix.conj().T @ w, p)
    F = np.concatenate([np.eye(p)[None], hw[:deg]])
    return lower_star(CoeffSeries(F, 0))


# --------------------------------------------------------------------------
# pipeline


def solve(G: CoeffSeries, cfg: Optional[SolveConfig] = None) -> BezoutData:
    """Compute ``Xi_0, Theta_0, H_0, Y, Y^{-1}, Xi, Theta, H`` for ``G``."""
    return solve_sized(G, cfg)[1]


def solve_sized(G: CoeffSeries, cfg: Optional[SolveConfig] = None) -> tuple[GramSolver, BezoutData]:
    """Solve and return the Gram solver that was used as well.

    With an adaptive config the section size is doubled until the tail mass
    of ``Y`` drops below ``cfg.tail_tol`` or ``cfg.max_section_blocks`` is
    reached.
    """
    cfg = cfg or SolveConfig()
    cur = cfg.resolve(G.hi)
    while True:
        s = build_gram_solver(G, cur.section_blocks, cur)
        d = solve_with(s, cur)
        tail = d.y.tail_mass()
        if not cfg.adaptive or tail <= cfg.tail_tol:
            return s, d
        if 2 * cur.section_blocks > cfg.max_section_blocks:
            log.warning("Y tail mass %.2e above %.1e at the largest section N=%d",
                        tail, cfg.tail_tol, cur.section_blocks)
            return s, d
        log.info("Y tail mass %.2e at N=%d; doubling", tail, cur.section_blocks)
        cur = cfg.replace(section_blocks=2 * cur.section_blocks).resolve(G.hi)


def solve_with(s: GramSolver, cfg: SolveConfig) -> BezoutData:
    cfg = cfg.resolve(s.g.hi)
    deg = cfg.output_degree
    g0 = s.g.coeffs[0]
    xi0 = compute_xi0(s)
    theta0 = compute_theta0(s, cfg)
    h0 = compute_h0(xi0, theta0, g0)
    y = compute_y(s, deg)
    y_inv = compute_y_inverse(s, deg)
    theta_gram = theta0.conj().T @ theta0
    diagnostics = {
        "section_blocks": s.n_blocks,
        "output_degree": deg,
        "y_tail_mass": y.tail_mass(),
        "y_inv_tail_mass": y_inv.tail_mass(),
        "theta_gram_min_eig": float(np.linalg.eigvalsh(theta_gram)[0]) if theta_gram.size else None,
        "spectral_factor_residual": s.r_factor.residual,
        "margin_ladder": [[s.n_blocks, s.margin]],
    }
    return BezoutData(
        g=s.g,
        xi0=xi0,
        theta0=theta0,
        h0=h0,
        y=y,
        y_inv=y_inv,
        xi=y @ xi0,
        theta=y @ theta0,
        h=h0 @ y_inv,
        margin=s.margin,
        diagnostics=diagnostics,
    )


# --------------------------------------------------------------------------
# solution set


def assemble_solution(d: BezoutData, V: CoeffSeries, deg: Optional[int] = None) -> CoeffSeries:
    """``X = Y (Xi_0 + Theta_0 V)`` truncated to ``deg`` (default: degree of ``Y``)."""
    if not V.is_analytic or V.shape != (d.p - d.m, d.m):
        raise ShapeError(f"V must be analytic of shape {(d.p - d.m, d.m)}, got {V.shape}")
    deg = d.degree if deg is None else deg
    inner = d.theta0 @ V + CoeffSeries.constant(d.xi0)
    return convolve(d.y, inner).truncate(deg)


def h2_norm_sq(F: CoeffSeries, u) -> float:
    """``||F(.) u||^2`` in ``H^2`` as the l2 sum of coefficients."""
    return float(np.sum(np.abs(F.coeffs @ np.asarray(u, dtype=complex)) ** 2))


def solve_norm_split(d: BezoutData, V: CoeffSeries, u, deg: Optional[int] = None):
    """``(||X u||^2, ||Xi u||^2, ||V u||^2)``; the first is the sum of the other two."""
    X = assemble_solution(d, V, deg)
    return h2_norm_sq(X, u), h2_norm_sq(d.xi, u), h2_norm_sq(V, u)


def solution_residual(G: CoeffSeries, X: CoeffSeries, grid: Optional[EvalGrid] = None) -> float:
    """``max ||G(z) X(z) - I||`` over the boundary grid."""
    grid = grid or EvalGrid.default()
    prod = evaluate_many(G, grid.boundary_points) @ evaluate_many(X, grid.boundary_points)
    return float(np.linalg.norm(prod - np.eye(G.rows), 2, axis=(1, 2)).max())


def extract_parameter(d: BezoutData, X: CoeffSeries, cfg: Optional[SolveConfig] = None) -> CoeffSeries:
    """Parameter ``V = H X`` of a solution ``X``, truncated to the degree of ``X``.

    Raises
    ------
    NotASolutionError
        If ``||G X - I||`` on the boundary grid exceeds ``cfg.solution_tol``.
    """
    cfg = cfg or SolveConfig()
    if X.shape != (d.p, d.m) or not X.is_analytic:
        raise ShapeError(f"X must be analytic of shape {(d.p, d.m)}")
    resid = solution_residual(d.g, X, EvalGrid.default(cfg.boundary_points))
    if resid > cfg.solution_tol:
        raise NotASolutionError(f"||G X - I|| = {resid:.3e} exceeds {cfg.solution_tol:.1e}")
    return convolve(d.h, X).truncate(X.hi)
