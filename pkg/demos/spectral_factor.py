"""
Spectral factorization by Cholesky
==================================

R(z) = 3 + z + 1/z is positive on the circle.  The last row of the Cholesky
factor of a long Toeplitz section converges to its outer factor
R_+(z) = q^{-1/2} (1 + q z).
"""

import numpy as np

from bezout import CoeffSeries, GOLDEN_Q, adjoint_symbol, convolve, spectral_factorize

R = CoeffSeries(np.array([1.0, 3.0, 1.0]).reshape(3, 1, 1), lo=-1)
f = spectral_factorize(R)
print("R_+ coefficients:", f.r_plus.coeffs[:3, 0, 0].real)
print("expected        :", np.array([GOLDEN_Q**-0.5, GOLDEN_Q**0.5]))
print(f"residual {f.residual:.1e} with a {f.section_size} block section")

# a matrix case: R = A^* A for an outer A
rng = np.random.default_rng(0)
A = CoeffSeries(np.stack([np.eye(2) + 0.1 * rng.standard_normal((2, 2)),
                          0.3 * rng.standard_normal((2, 2))]))
f = spectral_factorize(convolve(adjoint_symbol(A), A))
U = f.r_plus.coeffs[0] @ np.linalg.inv(A.coeffs[0])
print("R_+ = U A with U unitary:", np.allclose(U @ U.conj().T, np.eye(2)),
      np.allclose(f.r_plus.coeffs[:2], U @ A.coeffs))
