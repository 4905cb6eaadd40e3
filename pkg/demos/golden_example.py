"""
A worked example: G(z) = [1 + z, -z]
====================================

The symbol has no zeros on the closed disc, so G(z) X(z) = 1 has Wiener
solutions.  Everything here is known in closed form with q = (3 - sqrt 5)/2,
which makes it a good sanity check.
"""

import numpy as np

from bezout import GOLDEN_Q as q
from bezout import SolveConfig, evaluate, example, solve

G = example("polynomial_1x2")
d = solve(G, SolveConfig(section_blocks=256, output_degree=64))

# Xi0 and the first coefficients of Y
print("Xi0 =", d.xi0.real.ravel())
print("Y_1 =\n", d.y.coeffs[1].real)

# Y_nu decays like (-q)^nu along a fixed rank one matrix
Nmat = np.array([[1 - q, -(1 - q)], [q, -q]])
err = max(np.abs(d.y.coeffs[nu] - (-q) ** nu / (1 - 2 * q) * Nmat).max() for nu in range(1, 21))
print(f"max coefficient error against the closed form: {err:.1e}")

# Y^{-1} is a polynomial of degree one
print("Y^-1 coefficients 0..2:\n", np.round(d.y_inv.coeffs[:3].real, 12))

# Theta has unit norm on the circle, it is inner
t = np.linspace(0, 2 * np.pi, 9)
print("|Theta(e^it)| =", np.round([np.linalg.norm(evaluate(d.theta, np.exp(1j * s))) for s in t], 12))
print("Theta0 =", d.theta0.real.ravel(), " sqrt(q) =", np.sqrt(q))
