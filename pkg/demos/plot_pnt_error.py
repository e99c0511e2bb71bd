"""
How fast does pi(x) ln(x)/x approach 1?
=======================================

Scan the relative error up to 1e8, fit a power law, and compare with
``1/ln x`` and with the exponent ``-nu``.
"""

import numpy as np

from scalefree.cli import build_report
from scalefree.pnt import default_grid, fit_exponent, pnt_scan
from scalefree.sieve import sieve_pi

# %%

grid = default_grid()
table = sieve_pi(grid[-1], checkpoints=grid)
scan = pnt_scan(table, grid)
for row in scan.rows[::40]:
    print(f"x={row.x:>10d}  pi={row.pi:>8d}  relerr={row.relerr:.6f}  "
          f"relerr*ln(x)={row.relerr * np.log(row.x):.4f}  li-pi={row.li_err:.1f}")

# %%
# The fitted slope is close to the local slope of 1/ln x, far from -0.618.

fit = fit_exponent(scan)
print(fit.to_json())

# %%

print(build_report(1e3, 1e8, 201)["verdict"])
