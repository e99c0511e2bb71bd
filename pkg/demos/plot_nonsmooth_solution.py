"""
Nonsmooth solutions near t = 1
==============================

A single residual rescaling at level 1 leaves the solution continuous with a
continuous slope, but its second derivative jumps at ``t = 1``.
"""

import numpy as np

from scalefree.nonsmooth import (NonsmoothSolution, RescalingSchedule, discontinuity_probe,
                                 iterate_schedule, parity_transform, probe_noise_floor,
                                 trace_to_csv)

# %%
# With trivial parameters the level product telescopes to ``1 - eta``.

tr = iterate_schedule(RescalingSchedule.trivial(0.3, 30))
print(tr.final_product, 0.7)

# %%
# The first few levels of a rescaled schedule.

print(trace_to_csv(iterate_schedule(RescalingSchedule.build(0.1, 4, (1.05,), (0.002,)))))

# %%
# Compare both branches with their parity image.

sol = NonsmoothSolution((1.05,), (0.002,))
ref, dev = parity_transform(sol)
for t in np.linspace(0.9, 1.1, 9):
    print(f"t={t:.3f}  tau={sol(t):.8f}  parity={ref(t):.8f}")
print("max deviation", dev)

# %%
# Order-2 probe against the rounding floor.  Starting the rescaling one level
# later pushes the jump to a higher derivative.

floor = probe_noise_floor()
for name, s in [("trivial", NonsmoothSolution()), ("level 1", sol),
                ("level 2", NonsmoothSolution((1.0, 1.05), (0.0, 0.002)))]:
    print(f"{name:8s} jump={discontinuity_probe(s).jump:+.3e}  floor={floor:.1e}")
