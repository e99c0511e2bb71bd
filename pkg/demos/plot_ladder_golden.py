"""
Prime ladder and the golden ratio
=================================

Each prime crossed adds one continued-fraction level, so the exponent runs
through Fibonacci ratios toward ``nu = (sqrt 5 - 1)/2`` while the crossing
count is the prime counting function.
"""

from scalefree.dynamics import NU, asymptotic_correction, golden_cf, prime_ladder_walk
from scalefree.sieve import sieve_pi

# %%

g = golden_cf(40)
print(g.value, NU, g.error_ratios[-3:])

# %%

state = prime_ladder_walk(60)
for p, k, x in state.trajectory:
    print(f"p={p:2d}  crossings={k:2d}  exponent={x:.6f}")

# %%
# The correction factor at t = 1e-6 uses the exact count below 1e6.

pi6 = sieve_pi(10**6).pi(10**6)
print(pi6, asymptotic_correction(1e-6, pi6))
