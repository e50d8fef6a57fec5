"""Scalar Gaussian-channel primitives.

All rates are in nats and all SNRs are linear. Conversions to bits or dB
happen at the command-line boundary only.
"""

import math

import numpy as np

__all__ = [
    "gaussian_mmse",
    "gaussian_capacity",
    "q_function",
    "binary_entropy",
    "nats_to_bits",
    "bits_to_nats",
    "db_to_linear",
    "linear_to_db",
]


def _check_snr(gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(~np.isfinite(g)) or np.any(g < 0):
        raise ValueError(f"SNR must be finite and nonnegative, got {gamma!r}")


def _check_variance(variance):
    v = np.asarray(variance, dtype=float)
    if np.any(~np.isfinite(v)) or np.any(v < 0) or np.any(v > 1):
        raise ValueError(f"variance must lie in [0, 1], got {variance!r}")


def gaussian_mmse(variance, gamma):
    """MMSE of a zero-mean Gaussian input of the given variance at SNR `gamma`.

    Parameters
    ----------
    variance : float or array_like
        Input variance in [0, 1].
    gamma : float or array_like
        Linear SNR, nonnegative.

    Returns
    -------
    float or np.ndarray
        ``variance / (1 + variance * gamma)``.
    """
    _check_variance(variance)
    _check_snr(gamma)
    out = np.asarray(variance, dtype=float) / (1.0 + np.multiply(variance, gamma))
    return float(out) if out.ndim == 0 else out


def gaussian_capacity(gamma):
    """Capacity ``0.5 * ln(1 + gamma)`` of the scalar channel, in nats."""
    _check_snr(gamma)
    out = 0.5 * np.log1p(np.asarray(gamma, dtype=float))
    return float(out) if out.ndim == 0 else out


def q_function(mmse_value, variance, gamma):
    """Gap between the Gaussian MMSE of `variance` and a code's MMSE at `gamma`.

    A positive value means the code estimates better than a Gaussian input of
    the same variance would.
    """
    return gaussian_mmse(variance, gamma) - np.asarray(mmse_value, dtype=float)


def binary_entropy(p):
    """Binary entropy in bits, with the limits at 0 and 1 taken as exactly 0."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    # derive both masses from the larger one so h(p) == h(1 - p) bit for bit;
    # this costs ~1e-16 absolute in the small mass
    hi = max(p, 1.0 - p)
    lo = 1.0 - hi
    if lo == 0.0:
        # p below half an ulp of 1: the entropy underflows along with it
        return 0.0
    return -(lo * math.log(lo) + hi * math.log1p(-lo)) / math.log(2.0)


def nats_to_bits(x):
    return np.asarray(x, dtype=float) / math.log(2.0)


def bits_to_nats(x):
    return np.asarray(x, dtype=float) * math.log(2.0)


def db_to_linear(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))
