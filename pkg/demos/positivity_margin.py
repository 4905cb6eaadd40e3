"""
When there is no solution
=========================

G(z) = 1 - z vanishes at z = 1.  The smallest eigenvalue of the Gram section
T_G T_G^* drifts to zero as the section grows, and the solver refuses.
"""

from bezout import NotPositiveError, margin_ladder, solve
from bezout.instances import degenerate_scalar

G = degenerate_scalar()
for N, margin in margin_ladder(G, [16, 32, 64, 128, 256]):
    print(f"N = {N:4d}   margin = {margin:.3e}")

try:
    solve(G)
except NotPositiveError as exc:
    print("rejected:", exc)
