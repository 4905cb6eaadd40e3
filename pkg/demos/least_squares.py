"""
All solutions and the least squares one
=======================================

Every Wiener solution is X = Y (Xi0 + Theta0 V) for a free parameter V.  The
choice V = 0 gives Xi, and the H2 norm splits as |X u|^2 = |Xi u|^2 + |V u|^2.
"""

import numpy as np

from bezout import (CoeffSeries, assemble_solution, example, extract_parameter,
                    solution_residual, solve, solve_norm_split)

rng = np.random.default_rng(1)
d = solve(example("polynomial_1x2"))

V = CoeffSeries(rng.standard_normal((4, 1, 1)))
X = assemble_solution(d, V)
print(f"|G X - 1| on the circle: {solution_residual(d.g, X):.1e}")

# the parameter is recovered from the solution
print("V      :", V.coeffs.ravel())
print("H X    :", extract_parameter(d, X).coeffs.ravel()[:4].real)

for scale in (0.0, 0.1, 1.0, 10.0):
    x2, xi2, v2 = solve_norm_split(d, V * scale, [1.0])
    print(f"scale {scale:5.1f}: |Xu|^2 = {x2:10.4f}  |Xi u|^2 + |Vu|^2 = {xi2 + v2:10.4f}")
