"""MMSE lower bound for finite-length codes with nonzero block error rate."""

import math
from dataclasses import dataclass

from .gaussian import binary_entropy
from .superposition import InfeasibleError, mmse_lower_bound_asymptotic

__all__ = [
    "FiniteLengthParams",
    "FiniteLengthBound",
    "fano_mi_lower_bound",
    "finite_length_mmse_lower_bound",
    "finite_length_bound_printed",
]


@dataclass(frozen=True)
class FiniteLengthParams:
    """A code of rate ``0.5 ln(1 + alpha * snr1)`` nats with block error
    probability `pe` at `snr1`."""

    snr1: float
    alpha: float
    pe: float

    def __post_init__(self):
        if not (math.isfinite(self.snr1) and self.snr1 > 0):
            raise ValueError(f"snr1 must be positive, got {self.snr1}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0.0 <= self.pe <= 0.5:
            raise ValueError(f"pe must lie in [0, 0.5], got {self.pe}")

    @classmethod
    def from_rate(cls, rate, snr1, pe):
        """Build from a rate in nats instead of alpha."""
        return cls(snr1, math.expm1(2.0 * rate) / snr1, pe)

    @property
    def rate(self):
        return 0.5 * math.log1p(self.alpha * self.snr1)


@dataclass(frozen=True)
class FiniteLengthBound:
    value: float
    vacuous: bool


def _fano_log_gain(params):
    # ln[(1 + alpha snr1)^(1 - pe) * 2^(-2 h_b(pe))]
    return ((1.0 - params.pe) * math.log1p(params.alpha * params.snr1)
            - 2.0 * binary_entropy(params.pe) * math.log(2.0))


def fano_mi_lower_bound(params: FiniteLengthParams) -> float:
    """Fano lower bound on the mutual information at snr1, in nats, floored at 0."""
    return max(0.0, 0.5 * _fano_log_gain(params))


def finite_length_mmse_lower_bound(params: FiniteLengthParams, snr0: float,
                                   detail: bool = False):
    """Lower bound on the MMSE at `snr0` of the finite-length code.

    The Fano bound replaces the code rate; the resulting information gain
    over ``[snr0, snr1]`` is matched by a Gaussian input of variance ``d``
    and the bound is that input's MMSE at `snr0`.

    Parameters
    ----------
    params : FiniteLengthParams
    snr0 : float
        Must satisfy ``0 <= snr0 < alpha * snr1``.
    detail : bool
        Return a :class:`FiniteLengthBound` carrying the vacuity flag.

    Returns
    -------
    float or FiniteLengthBound
        The bound, clamped at 0. It is vacuous when clamping was needed.
    """
    snr0 = float(snr0)
    snr1 = params.snr1
    if not 0.0 <= snr0 < params.alpha * snr1:
        raise InfeasibleError(
            f"bound holds for 0 <= snr0 < alpha*snr1 = {params.alpha * snr1}, got {snr0}")
    if params.pe == 0.0:
        value = mmse_lower_bound_asymptotic(snr0, snr1, params.alpha)
    else:
        gain = math.exp(_fano_log_gain(params))
        ratio = gain / (1.0 + snr0)
        d = (ratio - 1.0) / (snr1 - ratio * snr0)
        value = d / (1.0 + d * snr0)
    vacuous = not value > 0.0
    value = max(0.0, value)
    if detail:
        return FiniteLengthBound(value, vacuous)
    return value


def finite_length_bound_printed(params: FiniteLengthParams, snr0: float) -> float:
    """Same bound as a single closed-form ratio, unclamped.

    Kept as an independent evaluation path to cross-check
    :func:`finite_length_mmse_lower_bound`.
    """
    a1 = 1.0 + params.alpha * params.snr1
    penalty = 2.0 ** (2.0 * binary_entropy(params.pe)) * a1 ** params.pe
    s0, s1 = float(snr0), params.snr1
    return (a1 - (1.0 + s0) * penalty) / (penalty * (s1 - s0 + s0 * (s1 - s0)))
