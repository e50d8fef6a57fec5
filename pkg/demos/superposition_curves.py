"""
Layered Gaussian designs and their MMSE / mutual-information curves
===================================================================

A two-layer design for the ladder (2, 2.5) with beta = 0.4, then a
four-layer design over (0.8, 1.7, 2.2, 3). Both curves are exact piecewise
closed forms; we check the I-MMSE identity on each by integrating the MMSE.
"""

import numpy as np
from scipy.integrate import quad

from immse import make_design, mi_curve, mmse_curve

# %%
# Two layers: a common message decodable from snr 2 and a private one from 2.5.
two = make_design((2.0, 2.5), (0.4,))
print("layer rates (nats):", np.round(two.layer_rates, 6))
print("total rate  (nats):", round(two.total_rate, 6))

mmse = mmse_curve(two)
mi = mi_curve(two)
for g in (1.0, 1.999, 2.0, 2.2, 2.5, 3.0):
    print(f"gamma={g:5.3f}  mmse={mmse(g):.6f}  I={mi(g):.6f}")

# The MMSE drops at each rung; left_limit shows the value just below.
for b, jump in mmse.jumps():
    print(f"drop at {b}: {mmse.left_limit(b):.6f} -> {mmse(b):.6f} ({jump:+.6f})")

# %%
# Half the integral of the MMSE up to the top rung recovers the rate.
edges = [0.0, 2.0, 2.5]
half_integral = 0.5 * sum(quad(mmse, a, b)[0] for a, b in zip(edges, edges[1:]))
print("1/2 int MMSE:", half_integral, " rate:", two.total_rate)

# %%
# Four layers. Layer powers are differences of consecutive betas.
four = make_design((0.8, 1.7, 2.2, 3.0), (0.6, 0.4, 0.3))
print("layer powers:", np.round(four.layer_powers, 3))
print("total rate  :", round(four.total_rate, 6))

grid = np.linspace(0.0, 4.0, 9)
print(np.column_stack([grid, mmse_curve(four)(grid), mi_curve(four)(grid)]).round(5))

# Plot-ready CSV of the same data:
#   immse curve --snrs 0.8,1.7,2.2,3 --betas 0.6,0.4,0.3 --grid 0:4:0.01
