"""Built-in symbols and random strictly positive test instances."""

from __future__ import annotations

import numpy as np

from .errors import UnknownExampleError
from .sections import strict_positivity_margin
from .series import CoeffSeries

GOLDEN_Q = (3.0 - np.sqrt(5.0)) / 2.0


def constant() -> CoeffSeries:
    """``G(z) = [1, 0]``."""
    return CoeffSeries(np.array([[[1.0, 0.0]]]))


def polynomial_1x2() -> CoeffSeries:
    """``G(z) = [1 + z, -z]``."""
    return CoeffSeries(np.array([[[1.0, 0.0]], [[1.0, -1.0]]]))


def square_identity() -> CoeffSeries:
    """``G(z) = I_2``."""
    return CoeffSeries.identity(2)


def degenerate_scalar() -> CoeffSeries:
    """``G(z) = 1 - z``; its Toeplitz operator has no bounded right inverse."""
    return CoeffSeries(np.array([[[1.0]], [[-1.0]]]))


EXAMPLES = {
    "constant": constant,
    "polynomial_1x2": polynomial_1x2,
    "square_identity": square_identity,
}


def example(name: str) -> CoeffSeries:
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise UnknownExampleError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None


def random_symbol(rng: np.random.Generator, m: int, p: int, deg: int,
                  min_margin: float = 1e-2, decay: float = 0.55, N: int = 64,
                  max_tries: int = 200) -> CoeffSeries:
    """Random polynomial ``m x p`` symbol whose Gram section margin is at least ``min_margin``.

    ``G_0`` has orthonormal rows; higher coefficients are complex Gaussian
    with norm shrinking like ``decay**nu``.
    """
    for _ in range(max_tries):
        z = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        q, _ = np.linalg.qr(z)
        c = np.zeros((deg + 1, m, p), dtype=complex)
        c[0] = q[:m]
        for nu in range(1, deg + 1):
            a = rng.standard_normal((m, p)) + 1j * rng.standard_normal((m, p))
            c[nu] = decay**nu * a / np.sqrt(2 * m * p)
        G = CoeffSeries(c, 0)
        if strict_positivity_margin(G, N) >= min_margin:
            return G
    raise RuntimeError("could not draw a strictly positive instance")
