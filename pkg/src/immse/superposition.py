"""Gaussian superposition designs and MMSE-constrained rate maximization.

A design layers Gaussian codebooks over an increasing SNR ladder
``snr_0 < ... < snr_K``. Its rate-splitting coefficients ``beta_0 > ... >
beta_{K-1}`` are the power fractions left undecoded once the receiver passes
each rung. Receivers below ``snr_0`` see an uncoded-looking Gaussian input;
above ``snr_K`` everything is decoded.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from .curves import Log, PiecewiseCurve, Rational, Zero
from .gaussian import gaussian_capacity

__all__ = [
    "InfeasibleError",
    "Constraint",
    "SuperpositionDesign",
    "make_design",
    "mmse_curve",
    "mi_curve",
    "max_rate_single",
    "beta_to_alpha",
    "alpha_to_beta",
    "equivalent_gaussian_variance",
    "mmse_lower_bound_asymptotic",
    "prune_constraints",
    "max_rate_multi",
    "optimal_profile",
    "closed_form_rate",
]


class InfeasibleError(ValueError):
    """Inputs are well formed but outside the region where a result exists."""


class Constraint(NamedTuple):
    """``MMSE(snr) <= beta / (1 + beta * snr)``."""

    snr: float
    beta: float


def _check_pair(snr0, snr1):
    if not (math.isfinite(snr0) and math.isfinite(snr1)):
        raise ValueError("SNRs must be finite")
    if snr0 < 0:
        raise ValueError(f"snr0 must be nonnegative, got {snr0}")
    if not snr0 < snr1:
        raise ValueError(f"need snr0 < snr1, got ({snr0}, {snr1})")


def _check_unit(name, x):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")


@dataclass(frozen=True)
class SuperpositionDesign:
    ladder: Tuple[float, ...]
    betas: Tuple[float, ...]
    layer_rates: Tuple[float, ...]
    total_rate: float

    @property
    def n_layers(self):
        return len(self.ladder)

    @property
    def layer_powers(self):
        """Power of each layer, common layer first; sums to one."""
        edges = (1.0,) + self.betas + (0.0,)
        return tuple(a - b for a, b in zip(edges, edges[1:]))

    def to_dict(self):
        return {
            "ladder": list(self.ladder),
            "betas": list(self.betas),
            "layer_rates": list(self.layer_rates),
            "total_rate": self.total_rate,
        }


def make_design(ladder: Sequence[float], betas: Sequence[float],
                strict_sum: bool = False) -> SuperpositionDesign:
    """Build the layered Gaussian design for an SNR ladder.

    Parameters
    ----------
    ladder : sequence of float
        Strictly increasing positive SNRs ``snr_0 .. snr_K``. A single rung
        gives an ordinary (single-layer) Gaussian codebook.
    betas : sequence of float
        ``K`` coefficients, strictly decreasing inside (0, 1).
    strict_sum : bool
        Also require ``sum(betas) <= 1``.

    Returns
    -------
    SuperpositionDesign
        Layer rates in nats, common layer first.
    """
    ladder = tuple(float(s) for s in ladder)
    betas = tuple(float(b) for b in betas)
    if len(ladder) < 1:
        raise ValueError("ladder needs at least one SNR")
    if len(betas) != len(ladder) - 1:
        raise ValueError(
            f"need {len(ladder) - 1} betas for {len(ladder)} SNRs, got {len(betas)}")
    if any(not math.isfinite(s) or s <= 0 for s in ladder):
        raise ValueError("ladder SNRs must be finite and positive")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be strictly increasing")
    if any(not 0.0 < b < 1.0 for b in betas):
        raise ValueError("betas must lie strictly inside (0, 1)")
    if any(b >= a for a, b in zip(betas, betas[1:])):
        raise ValueError("betas must be strictly decreasing")
    if strict_sum and sum(betas) > 1.0:
        raise InfeasibleError(f"sum of betas {sum(betas)} exceeds 1")

    if not betas:
        rates = (gaussian_capacity(ladder[0]),)
    else:
        rates = [0.5 * (math.log1p(ladder[0]) - math.log1p(betas[0] * ladder[0]))]
        for j in range(1, len(betas)):
            s = ladder[j]
            rates.append(0.5 * (math.log1p(betas[j - 1] * s) - math.log1p(betas[j] * s)))
        rates.append(0.5 * math.log1p(betas[-1] * ladder[-1]))
        rates = tuple(rates)
    return SuperpositionDesign(ladder, betas, rates, math.fsum(rates))


def mmse_curve(design: SuperpositionDesign) -> PiecewiseCurve:
    """Asymptotic MMSE of the design: a staircase of Gaussian MMSE pieces."""
    segments = [Rational(1.0)] + [Rational(b) for b in design.betas] + [Zero()]
    return PiecewiseCurve(design.ladder, tuple(segments), "mmse")


def mi_curve(design: SuperpositionDesign) -> PiecewiseCurve:
    """Asymptotic mutual information of the design, continuous in SNR."""
    s, b = design.ladder, design.betas
    segments = [Log(0.0, 1.0)]
    if b:
        offset = 0.5 * (math.log1p(s[0]) - math.log1p(b[0] * s[0]))
        segments.append(Log(offset, b[0]))
        for i in range(1, len(b)):
            offset += 0.5 * (math.log1p(b[i - 1] * s[i]) - math.log1p(b[i] * s[i]))
            segments.append(Log(offset, b[i]))
    segments.append(Log(design.total_rate, 0.0))
    return PiecewiseCurve(design.ladder, tuple(segments), "mutual_information")


def max_rate_single(snr0, snr1, beta):
    """Largest rate at `snr1` given ``MMSE(snr0) <= beta / (1 + beta snr0)``."""
    _check_pair(snr0, snr1)
    _check_unit("beta", beta)
    return 0.5 * (math.log1p(beta * snr1) + math.log1p(snr0) - math.log1p(beta * snr0))


def beta_to_alpha(snr0, snr1, beta):
    """Power fraction alpha with ``0.5 ln(1 + alpha snr1)`` equal to the
    single-constraint optimum for `beta`."""
    _check_pair(snr0, snr1)
    _check_unit("beta", beta)
    alpha = (beta * (snr1 - snr0) + snr0 * (1.0 + beta * snr1)) / (snr1 * (1.0 + beta * snr0))
    # rounding can step an ulp past 1 at beta = 1
    return min(1.0, alpha)


def _surrogate(snr0, snr1, alpha):
    # (1 + a s1)/(1 + s0) = (1 + d s1)/(1 + d s0), cleared of denominators;
    # the denominator stays >= s1 - s0 > 0 for alpha <= 1
    return (alpha * snr1 - snr0) / (snr1 - snr0 + snr0 * snr1 * (1.0 - alpha))


def alpha_to_beta(snr0, snr1, alpha):
    """Inverse of :func:`beta_to_alpha`; 0 when ``alpha * snr1 <= snr0``."""
    _check_pair(snr0, snr1)
    _check_unit("alpha", alpha)
    if alpha * snr1 <= snr0:
        return 0.0
    return min(1.0, _surrogate(snr0, snr1, alpha))


def equivalent_gaussian_variance(snr0, snr1, alpha):
    """Variance d of the Gaussian input whose information gain over
    ``[snr0, snr1]`` matches that of a rate ``0.5 ln(1 + alpha snr1)`` code
    running at capacity up to `snr0`.

    This is numerically the same map as :func:`alpha_to_beta`.
    """
    _check_pair(snr0, snr1)
    _check_unit("alpha", alpha)
    if not snr0 < alpha * snr1:
        raise InfeasibleError(f"need snr0 < alpha * snr1, got {snr0} >= {alpha * snr1}")
    return _surrogate(snr0, snr1, alpha)


def mmse_lower_bound_asymptotic(snr0, snr1, alpha):
    """Least MMSE at `snr0` of any reliable code of rate
    ``0.5 ln(1 + alpha snr1)`` at `snr1`."""
    _check_pair(snr0, snr1)
    _check_unit("alpha", alpha)
    if alpha * snr1 <= snr0:
        return 0.0
    return (alpha * snr1 - snr0) / ((snr1 - snr0) * (1.0 + snr0))


def prune_constraints(raw: Sequence[Tuple[float, float]]) -> Tuple[Constraint, ...]:
    """Drop constraints implied by others.

    ``(snr_l, beta_l)`` is implied by ``(snr_i, beta_i)`` whenever
    ``snr_i <= snr_l`` and ``beta_i <= beta_l``: a constraint met at snr_i keeps
    the MMSE under ``beta_i / (1 + beta_i gamma)`` for every larger gamma.
    On ties the lower SNR is kept. The result is increasing in SNR and
    strictly decreasing in beta.
    """
    entries = [Constraint(float(s), float(b)) for s, b in raw]
    if not entries:
        raise ValueError("constraint set is empty")
    for c in entries:
        if not math.isfinite(c.snr) or c.snr <= 0:
            raise ValueError(f"constraint SNR must be positive, got {c.snr}")
        _check_unit("beta", c.beta)
    kept = []
    for c in sorted(entries):
        if not kept or c.beta < kept[-1].beta:
            kept.append(c)
    return tuple(kept)


def _collapse(constraints, snrK):
    """Ladder and betas of the achieving design for pruned constraints."""
    # beta = 1 only restates the power constraint; after pruning it can only
    # be the first entry
    active = [c for c in constraints if c.beta < 1.0]
    if active and active[-1].beta == 0.0:
        # full decoding is forced at that SNR; it becomes the top rung
        ladder = [c.snr for c in active]
        betas = [c.beta for c in active[:-1]]
    else:
        ladder = [c.snr for c in active] + [snrK]
        betas = [c.beta for c in active]
    return ladder, betas


def max_rate_multi(constraints: Sequence[Tuple[float, float]], snrK: float,
                   strict_sum: bool = False) -> Tuple[float, SuperpositionDesign]:
    """Maximum rate at `snrK` under several MMSE constraints at lower SNRs.

    Constraints are pruned first, so redundant entries have no effect.
    Returns the rate in nats and the superposition design attaining it.
    """
    pruned = prune_constraints(constraints)
    snrK = float(snrK)
    top = max(float(s) for s, _ in constraints)
    if not snrK > top:
        raise InfeasibleError(f"snrK={snrK} must exceed every constraint SNR (max {top})")
    if strict_sum and sum(c.beta for c in pruned) > 1.0:
        raise InfeasibleError("sum of constraint betas exceeds 1")
    ladder, betas = _collapse(pruned, snrK)
    design = make_design(ladder, betas)
    return design.total_rate, design


def optimal_profile(constraints, snrK, strict_sum=False):
    """(MMSE, mutual information) curves shared by every maximum-rate code."""
    _, design = max_rate_multi(constraints, snrK, strict_sum=strict_sum)
    return mmse_curve(design), mi_curve(design)


def closed_form_rate(snrs: Sequence[float], betas: Sequence[float], snrK: float) -> float:
    """Closed-form multi-constraint optimum written directly from the
    constraint list (no pruning, no collapsing)."""
    s = np.asarray(snrs, dtype=float)
    b = np.asarray(betas, dtype=float)
    log_ratio = math.log1p(s[0]) - math.log1p(b[0] * s[0])
    for j in range(1, len(s)):
        log_ratio += math.log1p(b[j - 1] * s[j]) - math.log1p(b[j] * s[j])
    return 0.5 * log_ratio + 0.5 * math.log1p(b[-1] * snrK)
