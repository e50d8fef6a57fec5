"""
Brute-force checks on small discrete codebooks
==============================================

Exact posteriors over a handful of codewords give ground truth for the MMSE
and mutual information. We use them to test the single-crossing property of
the q-function and the I-MMSE identity, and to watch a finite layered
codebook drift toward its Gaussian limit as the block length grows.
"""

import math

import numpy as np

from immse.gaussian import gaussian_mmse
from immse.oracle import (bpsk, layered_codebook, mmse_monte_carlo, random_codebook,
                          scalar_mi_quadrature, scalar_mmse_quadrature, verify_immse_identity,
                          verify_single_crossing)

# %%
# BPSK: deterministic values by Gauss-Hermite quadrature, then Monte Carlo.
const = [(1.0, 0.5), (-1.0, 0.5)]
print("mmse(1) quadrature :", scalar_mmse_quadrature(const, 1.0))
est = mmse_monte_carlo(bpsk(), 1.0, 200_000, seed=0)
print(f"mmse(1) Monte Carlo: {est.value:.6f} +- {est.std_error:.1e}")
print("I(1) quadrature    :", scalar_mi_quadrature(const, 1.0))

# %%
# q(gamma) = Gaussian MMSE - code MMSE never goes from >= 0 to < 0.
rep = verify_single_crossing(bpsk(), 1.0, np.linspace(0, 6, 7), 0, method="quadrature")
print("BPSK q:", np.round(rep.q_values, 5), rep.verdict)

cb = random_codebook(8, 3, seed=1)
rep = verify_single_crossing(cb, 0.5, [0.0, 0.5, 1.0, 2.0, 4.0, 8.0], 50_000, seed=2)
print("random q:", np.round(rep.q_values, 4), "+-", np.round(rep.q_errors, 4), rep.verdict)

# %%
# I(snr) against half the integral of the MMSE.
print(verify_immse_identity(bpsk(), 2.0).to_dict())
print(verify_immse_identity(random_codebook(8, 2, seed=3), 1.5, samples=50_000, seed=1).to_dict())

# %%
# A layered codebook with the rates of the (2, 2.5) / 0.4 design. Below the
# first rung the limit MMSE is 1/(1+gamma); finite codes sit well below it.
r_common, r_private = 0.25541281188299525, 0.34657359027997264
for n in (2, 4, 8):
    mu, mv = math.ceil(math.exp(n * r_common)), math.ceil(math.exp(n * r_private))
    vals = [mmse_monte_carlo(layered_codebook(0.4, n, mu, mv, seed=s).combined, 1.0, 20_000,
                             seed=s).value for s in range(5)]
    print(f"n={n} M={mu}x{mv}: mmse(1) {np.mean(vals):.4f} vs limit {gaussian_mmse(1.0, 1.0):.4f}")
