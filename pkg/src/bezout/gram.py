"""Application of ``(T_G T_G^*)^{-1}`` to finitely supported block vectors.

The structured route uses ``R = G G^*`` and its outer factor ``R_+``::

    (T_G T_G^*)^{-1} = T_R^{-1} + T_R^{-1} H_G M^{-1} H_G^* T_R^{-1},
    M = I - H_G^* T_R^{-1} H_G,   T_R^{-1} = T_{R_+}^{-1} T_{R_+^*}^{-1}.

``T_{R_+}`` is lower triangular (``R_+(0)`` is), so ``T_R^{-1}`` is two
triangular solves.  The direct route is a dense Cholesky solve of the
finite Gram section and serves as the oracle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .config import SolveConfig
from .errors import NotPositiveError, ShapeError, SingularError
from .sections import (
    OperatorSection,
    gram_section,
    hankel_section,
    margin_ladder,
    toeplitz_section,
)
from .series import CoeffSeries, adjoint_symbol, convolve
from .spectral import SpectralFactor, spectral_factorize

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GramSolver:
    g: CoeffSeries
    r_factor: SpectralFactor
    hankel: OperatorSection
    middle_factor: tuple  # scipy lu_factor handle for M
    n_blocks: int
    margin: float
    toeplitz_g: np.ndarray = field(repr=False)
    toeplitz_rplus: np.ndarray = field(repr=False)
    tr_inv_hankel: np.ndarray = field(repr=False)  # T_R^{-1} H_G on the nonzero columns
    hankel_support: np.ndarray = field(repr=False)  # column indices where H_G != 0
    middle_eigenvalues: np.ndarray = field(repr=False)
    cross_check: bool = False

    @property
    def m(self) -> int:
        return self.g.rows

    @property
    def p(self) -> int:
        return self.g.cols

    def apply_tr_inverse(self, b: np.ndarray) -> np.ndarray:
        """``T_R^{-1} b`` through the two triangular factors."""
        L = self.toeplitz_rplus
        y = sla.solve_triangular(L, b, lower=True, trans="C", check_finite=False)
        return sla.solve_triangular(L, y, lower=True, check_finite=False)

    def apply(self, b):
        return apply_gram_inverse(self, b)


def _as_block_matrix(b, n_rows):
    b = np.asarray(b, dtype=complex)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if b.ndim != 2 or b.shape[0] != n_rows:
        raise ShapeError(f"block vector must have {n_rows} rows, got {b.shape}")
    return b, vec


def build_gram_solver(G: CoeffSeries, N: int, cfg: Optional[SolveConfig] = None) -> GramSolver:
    """Assemble the structured Gram inverse at section size ``N``.

    Raises
    ------
    NotPositiveError
        If the Gram section margin is below ``cfg.positivity_tol`` or the
        symbol ``G G^*`` is not positive on the circle.
    """
    cfg = cfg or SolveConfig()
    if not G.is_analytic:
        raise ShapeError("G must be an analytic series")
    if G.rows > G.cols:
        raise ShapeError(f"G must be wide or square, got {G.rows}x{G.cols}")
    ladder = margin_ladder(G, [max(1, N // 2), N, 2 * N])
    margin = ladder[1][1]
    if not margin > cfg.positivity_tol:
        raise NotPositiveError(
            f"T_G T_G^* section margin {margin:.3e} <= {cfg.positivity_tol:.1e}", ladder=ladder
        )

    R = convolve(G, adjoint_symbol(G))
    try:
        factor = spectral_factorize(R, cfg.replace(section_blocks=N))
    except NotPositiveError as exc:
        raise NotPositiveError(str(exc), ladder=ladder, boundary_min=exc.boundary_min) from exc

    Lplus = toeplitz_section(factor.r_plus, N).matrix
    H = hankel_section(G, N)
    Hm = H.matrix
    support = np.nonzero(np.any(Hm != 0, axis=0))[0]
    Hs = Hm[:, support]
    y = sla.solve_triangular(Lplus, Hs, lower=True, trans="C", check_finite=False)
    K = sla.solve_triangular(Lplus, y, lower=True, check_finite=False)

    # M restricted to the support of H_G; it is the identity elsewhere
    Ms = np.eye(len(support), dtype=complex) - Hs.conj().T @ K
    herm_err = np.abs(Ms - Ms.conj().T).max() if len(support) else 0.0
    if herm_err > 1e-12 * max(1.0, np.abs(Ms).max(initial=0.0)):
        log.warning("middle factor M deviates from Hermitian by %.2e", herm_err)
    Ms = 0.5 * (Ms + Ms.conj().T)
    eig = np.linalg.eigvalsh(Ms) if len(support) else np.ones(0)
    if len(eig):
        emin, emax = np.abs(eig).min(), np.abs(eig).max()
        if emin == 0 or max(emax, 1.0) / emin > 1e12:
            raise SingularError(f"middle factor M is numerically singular (|eig| min {emin:.2e})")
        if eig.min() <= 0:
            log.info("middle factor M is indefinite (min eigenvalue %.3e)", eig.min())
    lu = sla.lu_factor(Ms) if len(support) else (np.zeros((0, 0)), np.zeros(0, int))

    return GramSolver(
        g=G,
        r_factor=factor,
        hankel=H,
        middle_factor=lu,
        n_blocks=N,
        margin=margin,
        toeplitz_g=toeplitz_section(G, N).matrix,
        toeplitz_rplus=Lplus,
        tr_inv_hankel=K,
        hankel_support=support,
        middle_eigenvalues=eig,
        cross_check=cfg.cross_check,
    )


def middle_matrix(s: GramSolver) -> np.ndarray:
    """Full ``N p x N p`` matrix ``M = I - H_G^* T_R^{-1} H_G``."""
    n = s.n_blocks * s.p
    M = np.eye(n, dtype=complex)
    idx = s.hankel_support
    Hs = s.hankel.matrix[:, idx]
    M[np.ix_(idx, idx)] -= Hs.conj().T @ s.tr_inv_hankel
    return M


def apply_gram_inverse(s: GramSolver, b) -> np.ndarray:
    """Structured ``(T_G T_G^*)^{-1} b`` for a block vector of ``N`` blocks in ``C^m``.

    ``b`` may be a single stacked vector or a matrix whose columns are
    block vectors.
    """
    b, vec = _as_block_matrix(b, s.n_blocks * s.m)
    t = s.apply_tr_inverse(b)
    x = t
    if len(s.hankel_support):
        Hs = s.hankel.matrix[:, s.hankel_support]
        x = t + s.tr_inv_hankel @ sla.lu_solve(s.middle_factor, Hs.conj().T @ t)
    if s.cross_check:
        ref = apply_gram_inverse_direct(s.g, s.n_blocks, b)
        rel = np.linalg.norm(x - ref) / max(np.linalg.norm(ref), 1e-300)
        log.info("gram cross-check: relative difference %.3e", rel)
        if rel > 1e-8:
            log.warning("structured and dense Gram solves differ by %.3e", rel)
    return x[:, 0] if vec else x


def apply_gram_inverse_direct(G: CoeffSeries, N: int, b, pad: Optional[int] = None) -> np.ndarray:
    """Dense Cholesky solve with a finite Gram section (oracle path).

    ``b`` holds ``N`` blocks and is read as a finitely supported vector.  It
    is zero padded by ``pad`` blocks (default ``N``) before solving, and the
    leading ``N`` blocks of the solution are returned.  Without padding the
    result is the inverse of the truncated matrix, which differs from
    ``(T_G T_G^*)^{-1} b`` near the section edge.
    """
    pad = N if pad is None else pad
    n = N + pad
    A = gram_section(G, n)
    b, vec = _as_block_matrix(b, N * G.rows)
    bb = np.zeros((n * G.rows, b.shape[1]), dtype=complex)
    bb[: N * G.rows] = b
    try:
        c = sla.cho_factor(A, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveError("Gram section is not positive definite") from exc
    x = sla.cho_solve(c, bb)
    nb = np.linalg.norm(bb)
    if nb > 0:
        res = np.linalg.norm(A @ x - bb) / nb
        if res > 1e-10:
            log.warning("dense Gram solve residual %.3e", res)
    x = x[: N * G.rows]
    return x[:, 0] if vec else x
