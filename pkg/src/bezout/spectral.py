"""Canonical spectral factorization ``R = R_+^* R_+`` by Bauer's method.

The block Toeplitz section of a positive Laurent symbol is Cholesky factored
(banded, so large sections are cheap); the last block row of the factor
converges to the coefficients of the outer factor.  The section size is
doubled until the coefficients stop moving.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .config import SolveConfig
from .errors import NoConvergenceError, NotPositiveError, ShapeError, SingularError
from .series import CoeffSeries, evaluate_many, roots_of_unity

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralFactor:
    r_plus: CoeffSeries
    residual: float
    section_size: int

    def to_dict(self) -> dict:
        return {
            "r_plus": self.r_plus.to_dict(),
            "residual": self.residual,
            "section_size": self.section_size,
        }

    @classmethod
    def from_dict(cls, data) -> "SpectralFactor":
        return cls(CoeffSeries.from_dict(data["r_plus"]), float(data["residual"]),
                   int(data.get("section_size", 0)))


def boundary_min_eigenvalue(R: CoeffSeries, n_points: int = 1024) -> float:
    """Smallest eigenvalue of the Hermitian part of ``R`` on ``n_points`` roots of unity."""
    vals = evaluate_many(R, roots_of_unity(n_points))
    vals = 0.5 * (vals + np.conj(np.transpose(vals, (0, 2, 1))))
    return float(np.linalg.eigvalsh(vals)[:, 0].min())


def factor_residual(R: CoeffSeries, r_plus: CoeffSeries, n_points: int = 128) -> float:
    """``max_z ||R(z) - R_+(z)^H R_+(z)||`` over roots of unity."""
    zs = roots_of_unity(max(n_points, 4 * (len(r_plus) + len(R))))
    a = evaluate_many(R, zs)
    f = evaluate_many(r_plus, zs)
    diff = a - np.conj(np.transpose(f, (0, 2, 1))) @ f
    return float(np.linalg.norm(diff, 2, axis=(1, 2)).max())


def _check_hermitian_symbol(R: CoeffSeries):
    if R.rows != R.cols:
        raise ShapeError("spectral factorization needs a square symbol")
    d = max(-R.lo, R.hi)
    c = R.padded(-d, d)
    mirror = np.conj(np.transpose(c[::-1], (0, 2, 1)))
    scale = max(1.0, float(np.abs(c).max()))
    if np.abs(c - mirror).max() > 1e-12 * scale:
        raise ShapeError("symbol is not Hermitian (R_{-nu} != R_nu^H)")


def _band_matrix(C: np.ndarray, K: int) -> np.ndarray:
    d1, m, _ = C.shape
    n = K * m
    bw = d1 * m
    ab = np.zeros((bw, n), dtype=complex)
    idx = np.arange(n)
    bi, ri = np.divmod(idx, m)
    for off in range(bw):
        j = idx[: n - off]
        i = j + off
        bd = bi[i] - bi[j]
        ok = bd < d1
        ab[off, : n - off][ok] = C[bd[ok], ri[i][ok], ri[j][ok]]
    return ab


def _bauer(C: np.ndarray, K: int) -> np.ndarray:
    d1, m, _ = C.shape
    ab = _band_matrix(C, K)
    try:
        L = sla.cholesky_banded(ab, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveError(f"section of {K} blocks is not positive definite") from exc
    bw = d1 * m
    n = K * m
    rows = np.zeros((d1, m, m), dtype=complex)
    for nu in range(min(d1, K)):
        for ri in range(m):
            i = n - m + ri
            for rj in range(m):
                j = (K - 1 - nu) * m + rj
                if 0 <= i - j < bw:
                    rows[nu, ri, rj] = L[i - j, j]
    return rows


def spectral_factorize(R: CoeffSeries, cfg: Optional[SolveConfig] = None,
                       start_blocks: Optional[int] = None) -> SpectralFactor:
    """Outer factor ``R_+`` with ``R = R_+^* R_+`` on the unit circle.

    ``R_+(0)`` is lower triangular with positive diagonal, which makes the
    factor unique.

    Parameters
    ----------
    R : CoeffSeries
        Hermitian Laurent symbol, positive definite on the circle.
    cfg : SolveConfig, optional
        Supplies ``positivity_tol``, ``factor_tol`` and ``max_factor_blocks``.
    start_blocks : int, optional
        Initial Cholesky section size; defaults to ``4 * cfg.section_blocks``
        (or 256).

    Raises
    ------
    NotPositiveError
        If the symbol is not positive definite on the boundary grid.
    NoConvergenceError
        If the residual exceeds ``factor_tol`` at the largest section.
    """
    cfg = cfg or SolveConfig()
    _check_hermitian_symbol(R)
    m = R.rows
    d = max(-R.lo, R.hi, 0)

    bmin = boundary_min_eigenvalue(R, max(1024, 16 * (d + 1)))
    if not bmin > cfg.positivity_tol:
        raise NotPositiveError(
            f"symbol is not positive definite on the circle (min eigenvalue {bmin:.3e})",
            boundary_min=bmin,
        )

    # Cholesky of J R^T J yields a factor with upper-triangular zeroth
    # coefficient; conjugating back by J makes it lower triangular.
    J = np.eye(m)[::-1]
    C = np.stack([J @ R.coeff(nu).T @ J for nu in range(d + 1)])

    K = start_blocks or 4 * (cfg.section_blocks or 64)
    K = max(K, 2 * (d + 1))
    prev = None
    scale = max(1.0, float(np.abs(C).max()))
    while True:
        A = _bauer(C, K)
        coeffs = J @ np.transpose(A, (0, 2, 1)) @ J
        r_plus = CoeffSeries(coeffs, 0)
        resid = factor_residual(R, r_plus, cfg.boundary_points)
        settled = prev is not None and np.abs(coeffs - prev).max() <= 1e-14 * scale
        log.debug("bauer K=%d residual=%.3e settled=%s", K, resid, settled)
        if settled and resid <= cfg.factor_tol:
            break
        if 2 * K > cfg.max_factor_blocks:
            if resid <= cfg.factor_tol:
                break
            raise NoConvergenceError(
                f"spectral factor residual {resid:.3e} > {cfg.factor_tol:.1e} at K={K}"
            )
        prev = coeffs
        K *= 2

    # pin the phase: real positive diagonal of R_+(0)
    diag = np.diag(coeffs[0])
    phase = np.where(np.abs(diag) > 0, np.conj(diag) / np.abs(diag), 1.0)
    coeffs = np.diag(phase) @ coeffs
    r_plus = CoeffSeries(coeffs, 0)
    return SpectralFactor(r_plus, factor_residual(R, r_plus, cfg.boundary_points), K)


def invert_outer(r_plus: CoeffSeries, deg: int) -> CoeffSeries:
    """Taylor coefficients ``0..deg`` of ``R_+^{-1}`` by block forward substitution."""
    if not r_plus.is_analytic or r_plus.rows != r_plus.cols:
        raise ShapeError("invert_outer needs a square analytic series")
    a0 = r_plus.coeffs[0]
    if np.linalg.cond(a0) > 1e12:
        raise SingularError("R_+(0) is numerically singular")
    lu = sla.lu_factor(a0)
    m = r_plus.rows
    a = r_plus.padded(0, deg)
    psi = np.zeros((deg + 1, m, m), dtype=complex)
    psi[0] = sla.lu_solve(lu, np.eye(m))
    for n in range(1, deg + 1):
        k = np.arange(1, min(n, r_plus.hi) + 1)
        if len(k):
            psi[n] = -sla.lu_solve(lu, np.einsum("kij,kjl->il", a[k], psi[n - k]))
    return CoeffSeries(psi, 0)
