"""
Maximum rate under MMSE constraints
===================================

An MMSE constraint ``MMSE(snr0) <= beta / (1 + beta snr0)`` at a lower SNR
costs rate at the design SNR. With one constraint the optimum is a two-layer
design; with several it is a layered design over the constraint SNRs.
"""

import math

import numpy as np

from immse import (alpha_to_beta, beta_to_alpha, max_rate_multi, max_rate_single,
                   prune_constraints)

# %%
# One constraint. beta = 1 is no constraint at all, beta = 0 forces decoding
# already at snr0.
s0, s1 = 2.0, 2.5
for beta in (0.0, 0.2, 0.4, 0.8, 1.0):
    r = max_rate_single(s0, s1, beta)
    a = beta_to_alpha(s0, s1, beta)
    print(f"beta={beta:.1f}  rate={r:.6f}  alpha={a:.6f}  0.5 ln(1+a s1)={0.5 * math.log1p(a * s1):.6f}")

# alpha is the fraction of snr1 a single Gaussian codebook would need for the
# same rate; the map inverts cleanly.
print("alpha_to_beta(2, 2.5, 14/15) =", alpha_to_beta(s0, s1, 14 / 15))

# %%
# Several constraints. Entries implied by others are pruned first.
raw = [(0.8, 0.6), (1.2, 0.7), (1.7, 0.4), (2.2, 0.3), (2.6, 0.35)]
print("pruned:", prune_constraints(raw))
rate, design = max_rate_multi(raw, 3.0)
print("rate:", rate)
print("ladder:", design.ladder, "betas:", design.betas)

# %%
# Tightening any constraint never helps.
for k in range(3):
    tighter = [(s, b * (0.5 if i == k else 1.0)) for i, (s, b) in
               enumerate([(0.8, 0.6), (1.7, 0.4), (2.2, 0.3)])]
    print(f"halve beta_{k}:", round(max_rate_multi(tighter, 3.0)[0], 6))

# %%
# Rate as a function of beta for a fixed pair of SNRs.
betas = np.linspace(0, 1, 11)
print(np.column_stack([betas, [max_rate_single(s0, s1, b) for b in betas]]).round(5))
