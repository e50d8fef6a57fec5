"""
Rate versus mutual-information disturbance
==========================================

If leakage to the lower-SNR receiver is measured by mutual information
instead of MMSE, a single reduced-power Gaussian codebook is optimal.
"""

from immse import compare_measures, effective_alpha, max_rate_disturbance, rate_disturbance_point

# %%
for alpha in (0.0, 0.4, 1.0):
    r, d = rate_disturbance_point(2.0, 2.5, alpha)
    print(f"alpha={alpha}: rate {r:.6f}, disturbance {d:.6f}")

# %%
# Several disturbance constraints: only the smallest alpha binds.
cons = [(1.0, 0.7), (2.0, 0.3), (2.5, 0.5)]
print("effective alpha:", effective_alpha(cons))
print("max rate at 4  :", max_rate_disturbance(cons, 4.0))

# %%
# The two measures disagree. The MMSE-optimal superposition design leaks the
# full capacity at snr0, so the matched disturbance constraint admits full power.
c = compare_measures(2.0, 2.5, 0.4)
for k, v in c.to_dict().items():
    print(f"{k:>22}: {v}")
