"""
MMSE lower bound for a finite-length code
=========================================

A code with rate 0.5 ln(1 + alpha snr1), alpha snr1 = 1 (half a bit), and
block error probability 1e-5 at snr1 = 2.5179. Fano's inequality turns the
error probability into a slightly smaller guaranteed mutual information, and
the bound on the MMSE below snr1 weakens accordingly.
"""

import numpy as np

from immse import (FiniteLengthParams, fano_mi_lower_bound, finite_length_bound_printed,
                   finite_length_mmse_lower_bound, mmse_lower_bound_asymptotic)

snr1 = 2.5179
coded = FiniteLengthParams(snr1, 1.0 / snr1, 1e-5)
print("rate (nats):", coded.rate, " Fano bound:", fano_mi_lower_bound(coded))

# %%
# The bound over snr0 in (0, 1), next to the error-free bound and the
# uncoded MMSE 1/(1+snr0), which no unit-power input exceeds.
grid = np.linspace(0.05, 0.95, 10)
rows = []
for s in grid:
    b = finite_length_mmse_lower_bound(coded, s)
    rows.append((s, b, mmse_lower_bound_asymptotic(s, snr1, coded.alpha), 1 / (1 + s),
                 finite_length_bound_printed(coded, s)))
print("   snr0   bound(Pe)  bound(0)  uncoded   printed-form")
for r in rows:
    print("  ".join(f"{v:.6f}" for v in r))

# %%
# Near snr0 = 0 the gap to the error-free bound is largest.
for s in (1e-3, 0.036, 0.5):
    gap = (mmse_lower_bound_asymptotic(s, snr1, coded.alpha)
           - finite_length_mmse_lower_bound(coded, s))
    print(f"snr0={s}: gap {gap:.3e}")

# %%
# With a large error probability the bound says nothing.
weak = FiniteLengthParams(snr1, 1.0 / snr1, 0.5)
print(finite_length_mmse_lower_bound(weak, 0.5, detail=True))
