"""
Absolute values of relative infinitesimals
==========================================

Numbers below a scale ``delta`` are valued by ``log_{1/delta}(delta/t)``.
"""

import numpy as np

from scalefree.valuation import (ValuedInfinitesimal, invert_to_infinitesimal, rel_abs,
                                 sym_product, ultra_norm)

# %%
# ``0.5 * delta**1.3`` has value ``0.3 + ln 2 / ln(1/delta)``, which drifts to 0.3.

for n in (2, 4, 8, 16, 32):
    d = 10.0**-n
    print(f"delta=1e-{n:<2d}  value={rel_abs(0.5 * d**1.3, d):.6f}")

# %%
# The extended norm keeps Euclidean magnitudes on [delta, N] and values the
# tails by their relative size.

for r in (1e-4, 1e-3, 0.5, 42.0, 1e3, 1e5):
    print(r, ultra_norm(r, 0.01, 100).to_json())

# %%
# Products add limiting values exactly.

a, b = ValuedInfinitesimal(2.0, 0.25), ValuedInfinitesimal(0.3, 1.5)
print(sym_product(a, b))

# %%
# The inversion exponent mu blows up as t approaches the scale.

for t in np.geomspace(0.0100001, 1.0, 6):
    print(f"t={t:.7f}  mu={invert_to_infinitesimal(t, 0.01, 0.5)[1]:.3f}")
