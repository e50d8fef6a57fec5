"""Rate versus mutual-information disturbance on the scalar Gaussian channel.

Here the leakage to an unintended receiver at a lower SNR is measured by
mutual information instead of MMSE. The optimum is then a single Gaussian
codebook at reduced power, never a superposition.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .superposition import max_rate_single

__all__ = [
    "rate_disturbance_point",
    "effective_alpha",
    "max_rate_disturbance",
    "MeasureComparison",
    "compare_measures",
]


def rate_disturbance_point(snr0, snr1, alpha) -> Tuple[float, float]:
    """Corner ``(R_max, R_d_min)`` of the region for power fraction `alpha`.

    `R_max` is the rate at `snr1`, `R_d_min` the unavoidable mutual information
    at `snr0`, both in nats.
    """
    if not 0.0 <= snr0 < snr1:
        raise ValueError(f"need 0 <= snr0 < snr1, got ({snr0}, {snr1})")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return 0.5 * math.log1p(alpha * snr1), 0.5 * math.log1p(alpha * snr0)


def _validate(constraints):
    entries = [(float(s), float(a)) for s, a in constraints]
    if not entries:
        raise ValueError("constraint set is empty")
    snrs = [s for s, _ in entries]
    if any(s <= 0 for s in snrs) or any(b <= a for a, b in zip(snrs, snrs[1:])):
        raise ValueError("constraint SNRs must be positive and strictly increasing")
    if any(not 0.0 <= a <= 1.0 for _, a in entries):
        raise ValueError("alphas must lie in [0, 1]")
    return entries


def effective_alpha(constraints: Sequence[Tuple[float, float]]) -> float:
    """Single power fraction that satisfies every disturbance constraint.

    Each constraint ``I(snr_i) <= 0.5 ln(1 + alpha_i snr_i)`` caps a Gaussian
    input's power at alpha_i, so only the smallest one binds.
    """
    return min(a for _, a in _validate(constraints))


def max_rate_disturbance(constraints, snrK):
    """Maximum rate at `snrK` under the disturbance constraints, in nats."""
    entries = _validate(constraints)
    if not snrK > entries[-1][0]:
        raise ValueError("snrK must exceed every constraint SNR")
    return 0.5 * math.log1p(effective_alpha(entries) * snrK)


@dataclass(frozen=True)
class MeasureComparison:
    snr0: float
    snr1: float
    beta: float
    alpha: float
    pairing: str
    mmse_rate: float
    disturbance_rate: float
    mmse_strategy: str
    disturbance_strategy: str

    @property
    def larger(self):
        if math.isclose(self.mmse_rate, self.disturbance_rate, rel_tol=1e-12, abs_tol=1e-15):
            return "equal"
        return "mmse" if self.mmse_rate > self.disturbance_rate else "disturbance"

    @property
    def strategies_coincide(self):
        return self.mmse_strategy == self.disturbance_strategy

    def to_dict(self):
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["larger"] = self.larger
        out["strategies_coincide"] = self.strategies_coincide
        return out


def compare_measures(snr0, snr1, beta, alpha: Optional[float] = None) -> MeasureComparison:
    """Contrast the MMSE-constrained optimum with a disturbance-constrained one.

    Without `alpha`, the disturbance constraint is matched to the mutual
    information the MMSE-optimal design leaks at `snr0` (pairing
    ``"equal_disturbance"``). Passing `alpha` uses it as given (pairing
    ``"caller"``).
    """
    mmse_rate = max_rate_single(snr0, snr1, beta)
    if alpha is None:
        # the MMSE-optimal design runs at capacity up to snr0, so matching its
        # leakage there allows full power
        alpha = 1.0
        pairing = "equal_disturbance"
    else:
        pairing = "caller"
    disturbance_rate, _ = rate_disturbance_point(snr0, snr1, alpha)

    if beta == 1.0:
        mmse_strategy = "gaussian"
    elif beta == 0.0:
        mmse_strategy = "gaussian at snr0"
    else:
        mmse_strategy = "superposition"
    disturbance_strategy = "gaussian" if alpha == 1.0 else "reduced-power gaussian"
    return MeasureComparison(float(snr0), float(snr1), float(beta), float(alpha), pairing,
                             mmse_rate, disturbance_rate, mmse_strategy, disturbance_strategy)
