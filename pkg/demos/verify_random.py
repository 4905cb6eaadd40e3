"""
Checking the identities on a random symbol
==========================================

run_all solves for a random 2 x 4 symbol and checks each structural identity
against a fixed tolerance.
"""

import numpy as np

from bezout import SolveConfig, run_all
from bezout.instances import random_symbol

G = random_symbol(np.random.default_rng(7), m=2, p=4, deg=3)
report = run_all(G, SolveConfig(seed=7))
print(report.to_table())
print("all passed:", report.passed)
