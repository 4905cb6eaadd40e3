"""Finite block sections of Toeplitz and Hankel operators.

Block vectors are stored as stacked arrays of shape ``(N * n, k)``: block
``i`` occupies rows ``i*n:(i+1)*n``.  The embedding ``E_n`` is "put in block
0" and the shift ``S_n`` moves every block down by one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .series import CoeffSeries


class SectionKind(enum.Enum):
    TOEPLITZ = "toeplitz"
    HANKEL = "hankel"


@dataclass(frozen=True)
class OperatorSection:
    kind: SectionKind
    symbol: CoeffSeries
    blocks: int
    matrix: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        r, s = self.symbol.shape
        return self.matrix[i * r : (i + 1) * r, j * s : (j + 1) * s]


def _require_analytic(F: CoeffSeries):
    if not F.is_analytic:
        raise ShapeError("operator sections need an analytic symbol (lo = 0)")


def _assemble(blocks4: np.ndarray) -> np.ndarray:
    # (N, N, r, s) -> (N r, N s)
    n1, n2, r, s = blocks4.shape
    return np.ascontiguousarray(blocks4.transpose(0, 2, 1, 3)).reshape(n1 * r, n2 * s)


def toeplitz_section(F: CoeffSeries, N: int) -> OperatorSection:
    """``N x N`` block lower-triangular section with ``block(i, j) = F_{i-j}``."""
    _require_analytic(F)
    if N < 1:
        raise ShapeError("N must be >= 1")
    coeffs = F.padded(0, N - 1)
    i, j = np.indices((N, N))
    d = i - j
    b4 = coeffs[np.clip(d, 0, None)]
    b4[d < 0] = 0.0
    return OperatorSection(SectionKind.TOEPLITZ, F, N, _assemble(b4))


def hankel_section(F: CoeffSeries, N: int) -> OperatorSection:
    """``N x N`` block section with ``block(i, j) = F_{i+j+1}``."""
    _require_analytic(F)
    if N < 1:
        raise ShapeError("N must be >= 1")
    coeffs = F.padded(0, 2 * N)
    i, j = np.indices((N, N))
    return OperatorSection(SectionKind.HANKEL, F, N, _assemble(coeffs[i + j + 1]))


def block_column(F: CoeffSeries, N: int, start: int = 0) -> np.ndarray:
    """Stack ``[F_start; F_{start+1}; ...]`` over ``N`` blocks."""
    _require_analytic(F)
    return F.padded(start, start + N - 1).reshape(N * F.rows, F.cols)


def blocks_of(vec: np.ndarray, n: int) -> np.ndarray:
    """View a stacked block vector ``(N n, k)`` as ``(N, n, k)``."""
    vec = np.asarray(vec)
    if vec.ndim == 1:
        vec = vec[:, None]
    return vec.reshape(-1, n, vec.shape[-1])


def gram_section(G: CoeffSeries, N: int) -> np.ndarray:
    """Principal ``N x N`` block section of ``T_G T_G^*``.

    Exact because every block row of ``T_G`` is supported on block columns
    up to its own index.
    """
    T = toeplitz_section(G, N).matrix
    A = T @ T.conj().T
    return 0.5 * (A + A.conj().T)


def strict_positivity_margin(G: CoeffSeries, N: int) -> float:
    """Smallest eigenvalue of :func:`gram_section`."""
    if G.rows == 0:
        return np.inf
    return float(np.linalg.eigvalsh(gram_section(G, N))[0])


def margin_ladder(G: CoeffSeries, sizes) -> list[tuple[int, float]]:
    return [(int(n), strict_positivity_margin(G, int(n))) for n in sizes]
