"""Truncated matrix power and Laurent series.

A :class:`CoeffSeries` stores the coefficients ``F_lo, ..., F_{lo+L-1}`` of a
matrix function ``F(z) = sum_nu F_nu z^nu``.  It is the numerical stand-in
for a Wiener class function; truncation is always explicit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ShapeError

_UNIT_TOL = 1e-12


class CoeffSeries:
    """Immutable truncated matrix Taylor/Laurent series.

    Parameters
    ----------
    coeffs : array_like, shape (L, rows, cols)
        Coefficient matrices, index ``k`` holding frequency ``lo + k``.
    lo : int
        Lowest represented frequency (0 for analytic series).
    """

    __slots__ = ("_c", "_lo")
    __array_ufunc__ = None  # make ``ndarray @ series`` defer to __rmatmul__

    def __init__(self, coeffs, lo=0):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[0] == 0:
            raise ShapeError(f"coefficients must have shape (L, r, s) with L >= 1, got {c.shape}")
        c.setflags(write=False)
        self._c = c
        self._lo = int(lo)

    # -- basic attributes -------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        """Highest represented frequency."""
        return self._lo + self._c.shape[0] - 1

    @property
    def rows(self) -> int:
        return self._c.shape[1]

    @property
    def cols(self) -> int:
        return self._c.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self._c.shape[1:]

    @property
    def is_analytic(self) -> bool:
        return self._lo == 0

    def __len__(self):
        return self._c.shape[0]

    def __repr__(self):
        return f"CoeffSeries({self.rows}x{self.cols}, lo={self.lo}, len={len(self)})"

    def coeff(self, nu: int) -> np.ndarray:
        """Coefficient at frequency ``nu`` (zero outside the stored range)."""
        k = nu - self._lo
        if 0 <= k < len(self):
            return self._c[k]
        return np.zeros(self.shape, dtype=complex)

    def padded(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for frequencies ``lo..hi`` as a fresh array, zero padded."""
        out = np.zeros((hi - lo + 1,) + self.shape, dtype=complex)
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a <= b:
            out[a - lo : b - lo + 1] = self._c[a - self.lo : b - self.lo + 1]
        return out

    # -- construction helpers ---------------------------------------------
    @classmethod
    def constant(cls, matrix) -> "CoeffSeries":
        return cls(np.asarray(matrix, dtype=complex)[None])

    @classmethod
    def zeros(cls, rows, cols, length=1, lo=0) -> "CoeffSeries":
        return cls(np.zeros((length, rows, cols), dtype=complex), lo)

    @classmethod
    def identity(cls, n) -> "CoeffSeries":
        return cls.constant(np.eye(n))

    # -- arithmetic ---------------------------------------------------------
    def _aligned(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return lo, self.padded(lo, hi), other.padded(lo, hi)

    def __add__(self, other):
        if not isinstance(other, CoeffSeries):
            return NotImplemented
        lo, a, b = self._aligned(other)
        return CoeffSeries(a + b, lo)

    def __sub__(self, other):
        if not isinstance(other, CoeffSeries):
            return NotImplemented
        lo, a, b = self._aligned(other)
        return CoeffSeries(a - b, lo)

    def __neg__(self):
        return CoeffSeries(-self._c, self._lo)

    def __mul__(self, scalar):
        if isinstance(scalar, CoeffSeries):
            return NotImplemented
        return CoeffSeries(self._c * scalar, self._lo)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, CoeffSeries):
            return convolve(self, other)
        other = np.asarray(other, dtype=complex)
        if other.ndim != 2 or other.shape[0] != self.cols:
            raise ShapeError(f"cannot multiply {self.shape} series by matrix {other.shape}")
        return CoeffSeries(self._c @ other, self._lo)

    def __rmatmul__(self, other):
        other = np.asarray(other, dtype=complex)
        if other.ndim != 2 or other.shape[1] != self.rows:
            raise ShapeError(f"cannot multiply matrix {other.shape} by {self.shape} series")
        return CoeffSeries(other @ self._c, self._lo)

    # -- truncation and norms -----------------------------------------------
    def truncate(self, deg: int, report_tail: bool = False):
        """Keep frequencies ``<= deg``.

        With ``report_tail`` the Wiener norm of the discarded part is returned
        alongside the truncated series.
        """
        if deg < self.lo:
            raise ShapeError(f"cannot truncate series starting at {self.lo} to degree {deg}")
        keep = min(deg, self.hi) - self.lo + 1
        out = CoeffSeries(self._c[:keep], self._lo)
        if report_tail:
            dropped = self._c[keep:]
            tail = float(np.sum(np.linalg.norm(dropped, 2, axis=(1, 2)))) if len(dropped) else 0.0
            return out, tail
        return out

    def extend(self, deg: int) -> "CoeffSeries":
        """Zero-pad up to frequency ``deg`` (no-op if already long enough)."""
        if deg <= self.hi:
            return self
        return CoeffSeries(self.padded(self.lo, deg), self.lo)

    def coeff_norms(self) -> np.ndarray:
        """Spectral norms of the coefficient matrices."""
        if self.rows == 0 or self.cols == 0:
            return np.zeros(len(self))
        return np.linalg.norm(self._c, 2, axis=(1, 2))

    def wiener_norm(self) -> float:
        return float(self.coeff_norms().sum())

    def tail_mass(self, fraction: float = 0.1) -> float:
        """Wiener norm of the last ``fraction`` of the coefficients over the total."""
        norms = self.coeff_norms()
        total = norms.sum()
        if total == 0.0:
            return 0.0
        n_tail = max(1, int(np.ceil(fraction * len(norms))))
        return float(norms[-n_tail:].sum() / total)

    def effective_degree(self, rtol: float = 1e-14) -> int:
        """Last frequency whose coefficient norm exceeds ``rtol`` times the largest one."""
        norms = self.coeff_norms()
        big = norms.max() if len(norms) else 0.0
        if big == 0.0:
            return self.lo
        idx = np.nonzero(norms > rtol * big)[0]
        return self.lo + int(idx[-1])

    # -- evaluation -----------------------------------------------------------
    def __call__(self, z):
        return evaluate(self, z)

    # -- (de)serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "lo": self.lo,
            "coeffs": [matrix_to_list(c) for c in self._c],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CoeffSeries":
        rows, cols = int(data["rows"]), int(data["cols"])
        mats = [matrix_from_list(c, rows, cols) for c in data["coeffs"]]
        if not mats:
            raise ShapeError("series needs at least one coefficient")
        return cls(np.stack(mats), int(data.get("lo", 0)))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "CoeffSeries":
        return cls.from_dict(json.loads(text))

    def equals(self, other) -> bool:
        """Exact equality of range and coefficients."""
        return (
            isinstance(other, CoeffSeries)
            and self.lo == other.lo
            and self._c.shape == other._c.shape
            and bool(np.array_equal(self._c, other._c))
        )


def matrix_to_list(a) -> list:
    """Row-major nested list with ``[re, im]`` entries."""
    a = np.asarray(a, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in a]


def matrix_from_list(rows_data, rows: int, cols: int) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=complex)
    if rows and cols:
        arr = np.asarray(rows_data, dtype=float)
        if arr.shape != (rows, cols, 2):
            raise ShapeError(f"expected a {rows}x{cols} matrix of [re, im] pairs, got {arr.shape}")
        out = arr[..., 0] + 1j * arr[..., 1]
    return out


def evaluate(F: CoeffSeries, z) -> np.ndarray:
    """Value ``sum_nu F_nu z^nu`` by Horner summation over the stored range."""
    z = complex(z)
    if abs(z) > 1.0 + _UNIT_TOL:
        raise DomainError(f"|z| = {abs(z)} exceeds 1")
    if F.lo < 0 and z == 0:
        raise DomainError("Laurent series cannot be evaluated at z = 0")
    c = F.coeffs
    acc = c[-1].copy()
    for k in range(len(c) - 2, -1, -1):
        acc = acc * z + c[k]
    if F.lo:
        acc = acc * z**F.lo
    return acc


def evaluate_many(F: CoeffSeries, zs) -> np.ndarray:
    """Vectorized :func:`evaluate`; returns shape ``(len(zs), rows, cols)``."""
    zs = np.asarray(zs, dtype=complex).ravel()
    if np.any(np.abs(zs) > 1.0 + _UNIT_TOL):
        raise DomainError("evaluation point outside the closed unit disc")
    if F.lo < 0 and np.any(zs == 0):
        raise DomainError("Laurent series cannot be evaluated at z = 0")
    c = F.coeffs
    acc = np.broadcast_to(c[-1], (len(zs),) + F.shape).copy()
    for k in range(len(c) - 2, -1, -1):
        acc = acc * zs[:, None, None] + c[k]
    if F.lo:
        acc = acc * (zs**F.lo)[:, None, None]
    return acc


def convolve(F: CoeffSeries, G: CoeffSeries) -> CoeffSeries:
    """Cauchy product: coefficients of the pointwise product ``F(z) G(z)``."""
    if F.cols != G.rows:
        raise ShapeError(f"cannot multiply {F.shape} by {G.shape}")
    a, b = F.coeffs, G.coeffs
    out = np.zeros((len(a) + len(b) - 1, F.rows, G.cols), dtype=complex)
    # loop over the shorter factor; each step is a batched matmul
    if len(a) <= len(b):
        for i in range(len(a)):
            out[i : i + len(b)] += a[i] @ b
    else:
        for j in range(len(b)):
            out[j : j + len(a)] += a @ b[j]
    return CoeffSeries(out, F.lo + G.lo)


def adjoint_symbol(F: CoeffSeries) -> CoeffSeries:
    """``F^*(z) = F(1/conj(z))^*``: frequency ``-nu`` carries ``F_nu^H``."""
    c = np.conj(np.transpose(F.coeffs, (0, 2, 1)))[::-1]
    return CoeffSeries(c, -F.hi)


def lower_star(F: CoeffSeries) -> CoeffSeries:
    """``F_*(z) = F(conj(z))^*``: coefficient ``nu`` becomes ``F_nu^H``."""
    if not F.is_analytic:
        raise ShapeError("lower_star requires an analytic series (lo = 0)")
    return CoeffSeries(np.conj(np.transpose(F.coeffs, (0, 2, 1))), 0)


def roots_of_unity(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


@dataclass(frozen=True)
class EvalGrid:
    """Points where identities are checked pointwise."""

    interior_points: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    boundary_points: np.ndarray = field(default_factory=lambda: roots_of_unity(128))

    def __post_init__(self):
        inner = np.asarray(self.interior_points, dtype=complex).ravel()
        outer = np.asarray(self.boundary_points, dtype=complex).ravel()
        if np.any(np.abs(inner) >= 1.0 + _UNIT_TOL):
            raise DomainError("interior grid points must satisfy |z| < 1")
        if np.any(np.abs(np.abs(outer) - 1.0) > _UNIT_TOL):
            raise DomainError("boundary grid points must satisfy |z| = 1")
        object.__setattr__(self, "interior_points", inner)
        object.__setattr__(self, "boundary_points", outer)

    @classmethod
    def default(cls, n_boundary=128, n_interior=64, radii=(0.3, 0.6, 0.9)) -> "EvalGrid":
        angles = 2 * np.pi * (np.arange(n_interior) + 0.5) / n_interior
        inner = np.concatenate([r * np.exp(1j * angles) for r in radii] + [np.zeros(1)])
        return cls(inner, roots_of_unity(n_boundary))

    @property
    def all_points(self) -> np.ndarray:
        return np.concatenate([self.interior_points, self.boundary_points])

    def to_dict(self) -> dict:
        return {
            "interior_points": [[float(z.real), float(z.imag)] for z in self.interior_points],
            "boundary_points": [[float(z.real), float(z.imag)] for z in self.boundary_points],
        }
