"""Ground-truth MMSE and mutual information for small discrete codebooks.

Everything here works from first principles: the exact Bayes posterior over a
uniform codebook observed through ``y = sqrt(gamma) x + n`` with unit-variance
Gaussian noise. Scalar constellations also get a deterministic Gauss-Hermite
path. These estimators serve as independent checks on the closed forms in
the rest of the package.
"""

import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp, roots_hermitenorm

from .config import DEFAULT, Tolerances
from .gaussian import gaussian_mmse

__all__ = [
    "BudgetExceeded",
    "DiscreteCodebook",
    "LayeredCodebook",
    "MmseEstimate",
    "MiEstimate",
    "CrossingReport",
    "IdentityReport",
    "bpsk",
    "random_codebook",
    "layered_codebook",
    "conditional_mean",
    "mmse_monte_carlo",
    "mi_monte_carlo",
    "scalar_mmse_quadrature",
    "scalar_mi_quadrature",
    "verify_single_crossing",
    "verify_immse_identity",
]

_POWER_SLACK = 1e-12


class BudgetExceeded(RuntimeError):
    """The requested check is infeasible at this size."""


@dataclass(frozen=True, eq=False)
class DiscreteCodebook:
    """Uniformly distributed codewords, one per row of an ``(M, n)`` array."""

    codewords: np.ndarray

    def __post_init__(self):
        cw = np.atleast_2d(np.asarray(self.codewords, dtype=float))
        if cw.ndim != 2 or cw.shape[0] < 1 or cw.shape[1] < 1:
            raise ValueError("codewords must form a nonempty (M, n) array")
        if not np.all(np.isfinite(cw)):
            raise ValueError("codewords must be finite")
        power = np.mean(cw**2, axis=1)
        if np.any(power > 1.0 + _POWER_SLACK):
            raise ValueError(f"codeword power {power.max():.6g} exceeds 1")
        cw.setflags(write=False)
        object.__setattr__(self, "codewords", cw)

    @property
    def size(self):
        return self.codewords.shape[0]

    @property
    def length(self):
        return self.codewords.shape[1]

    @property
    def prior_variance(self):
        """Per-dimension variance ``(1/n) E||X - EX||^2`` under the uniform prior."""
        centred = self.codewords - self.codewords.mean(axis=0)
        return float(np.mean(np.sum(centred**2, axis=1)) / self.length)

    @property
    def power(self):
        return float(np.mean(self.codewords**2))


def bpsk():
    return DiscreteCodebook(np.array([[1.0], [-1.0]]))


def random_codebook(size, length, seed=None, power=1.0):
    """I.i.d. Gaussian codewords, each rescaled to exactly `power` per dimension."""
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((size, length))
    norms = np.sqrt(np.mean(raw**2, axis=1, keepdims=True))
    return DiscreteCodebook(raw / norms * math.sqrt(power))


@dataclass(frozen=True, eq=False)
class LayeredCodebook:
    common: DiscreteCodebook
    private: DiscreteCodebook
    combined: DiscreteCodebook


def layered_codebook(beta, length, common_size, private_size, seed=None):
    """Two-layer superposition of random codebooks.

    The common layer has power ``1 - beta``, the private layer ``beta``. If a
    sum of codewords exceeds unit power, the whole combined codebook is
    scaled down by one common factor so the layer structure is kept.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    ss = np.random.SeedSequence(seed)
    s_common, s_private = ss.spawn(2)
    u = random_codebook(common_size, length, s_common, power=1.0 - beta)
    v = random_codebook(private_size, length, s_private, power=beta)
    sums = (u.codewords[:, None, :] + v.codewords[None, :, :]).reshape(-1, length)
    sums = np.unique(sums, axis=0)
    peak = np.max(np.mean(sums**2, axis=1))
    if peak > 1.0:
        sums = sums / math.sqrt(peak)
    return LayeredCodebook(u, v, DiscreteCodebook(sums))


@dataclass(frozen=True)
class MmseEstimate:
    value: float
    std_error: float
    samples: int
    seed: Optional[int]


@dataclass(frozen=True)
class MiEstimate:
    value: float
    std_error: float
    samples: int
    seed: Optional[int]


def _log_weights(codewords, gamma, y):
    # log-likelihood up to a per-observation constant:
    # -||y - sqrt(g) x||^2 / 2 = sqrt(g) <y, x> - g ||x||^2 / 2 - ||y||^2 / 2
    sg = math.sqrt(gamma)
    return sg * (y @ codewords.T) - 0.5 * gamma * np.sum(codewords**2, axis=1)


def _posterior(codewords, gamma, y):
    lw = _log_weights(codewords, gamma, y)
    lw -= lw.max(axis=-1, keepdims=True)
    w = np.exp(lw)
    w /= w.sum(axis=-1, keepdims=True)
    return w


def conditional_mean(codebook: DiscreteCodebook, gamma, observation):
    """Posterior mean ``E[X | Y = y]`` for one observation or a batch of rows."""
    y = np.asarray(observation, dtype=float)
    if y.shape[-1] != codebook.length:
        raise ValueError(f"observation dimension {y.shape[-1]} != n = {codebook.length}")
    w = _posterior(codebook.codewords, float(gamma), np.atleast_2d(y))
    mean = w @ codebook.codewords
    return mean.reshape(y.shape)


def _chunks(samples, per_sample_cost, tol):
    size = max(1, tol.chunk_budget // max(1, per_sample_cost))
    start = 0
    while start < samples:
        stop = min(samples, start + size)
        yield stop - start
        start = stop


def _draw(codebook, gamma, count, rng):
    idx = rng.integers(codebook.size, size=count)
    noise = rng.standard_normal((count, codebook.length))
    x = codebook.codewords[idx]
    return x, noise, math.sqrt(gamma) * x + noise


def _mean_and_error(total, total_sq, samples):
    mean = float(total) / samples
    if samples < 2:
        return mean, 0.0
    var = max(0.0, (total_sq - samples * mean**2) / (samples - 1))
    return mean, math.sqrt(var / samples)


def mmse_monte_carlo(codebook: DiscreteCodebook, gamma, samples, seed=None,
                     tol: Tolerances = DEFAULT) -> MmseEstimate:
    """Monte Carlo estimate of the normalized MMSE ``(1/n) E||X - E[X|Y]||^2``.

    Each sampled observation contributes its exact posterior variance, the
    conditional expectation of the squared error given Y, which is unbiased
    for the MMSE and has lower variance than the raw squared error. Results
    are reproducible for a fixed seed and `tol.chunk_budget`.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    gamma = float(gamma)
    rng = np.random.default_rng(seed)
    cw = codebook.codewords
    sq_norms = np.sum(cw**2, axis=1)
    total = total_sq = 0.0
    for count in _chunks(samples, codebook.size * codebook.length, tol):
        _, _, y = _draw(codebook, gamma, count, rng)
        w = _posterior(cw, gamma, y)
        mean = w @ cw
        post_var = (w @ sq_norms - np.sum(mean**2, axis=1)) / codebook.length
        post_var = np.maximum(post_var, 0.0)
        total += post_var.sum()
        total_sq += np.dot(post_var, post_var)
    value, err = _mean_and_error(total, total_sq, samples)
    return MmseEstimate(value, err, samples, seed)


def mi_monte_carlo(codebook: DiscreteCodebook, gamma, samples, seed=None,
                   tol: Tolerances = DEFAULT) -> MiEstimate:
    """Monte Carlo estimate of ``(1/n) I(X; Y)`` in nats.

    Each observation contributes the divergence of its posterior from the
    uniform prior, which averages to the mutual information.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    gamma = float(gamma)
    rng = np.random.default_rng(seed)
    cw = codebook.codewords
    log_m = math.log(codebook.size)
    total = total_sq = 0.0
    for count in _chunks(samples, codebook.size * codebook.length, tol):
        _, _, y = _draw(codebook, gamma, count, rng)
        # E[ln p(y|X)/p(y) | y] = KL(posterior || uniform prior), the
        # conditional expectation of the usual log-ratio given y
        lw = _log_weights(cw, gamma, y)
        log_post = lw - logsumexp(lw, axis=1, keepdims=True)
        kl = np.sum(np.exp(log_post) * (log_post + log_m), axis=1)
        kl = np.clip(kl, 0.0, log_m) / codebook.length
        total += kl.sum()
        total_sq += np.dot(kl, kl)
    value, err = _mean_and_error(total, total_sq, samples)
    return MiEstimate(value, err, samples, seed)


def _constellation(constellation):
    pts = np.array([p for p, _ in constellation], dtype=float)
    probs = np.array([q for _, q in constellation], dtype=float)
    if pts.size == 0:
        raise ValueError("constellation is empty")
    if np.any(probs < 0) or not math.isclose(probs.sum(), 1.0, abs_tol=1e-12):
        raise ValueError(f"probabilities must be nonnegative and sum to 1, got {probs.sum()}")
    return pts, probs


@lru_cache(maxsize=16)
def _hermite(nodes):
    z, w = roots_hermitenorm(nodes)
    return z, w / math.sqrt(2.0 * math.pi)


def _adaptive(rule, nodes, tol):
    """Run `rule(z, w)` at a fixed order, or double from the default order
    until two successive orders agree to `tol.quadrature_target`."""
    if nodes is not None:
        return rule(*_hermite(nodes))
    n = tol.quadrature_nodes
    prev = rule(*_hermite(n))
    while n < tol.quadrature_max_nodes:
        n *= 2
        cur = rule(*_hermite(n))
        if abs(cur - prev) <= tol.quadrature_target:
            return cur
        prev = cur
    return prev


def scalar_mmse_quadrature(constellation: Sequence[Tuple[float, float]], gamma,
                           nodes: Optional[int] = None, tol: Tolerances = DEFAULT):
    """Deterministic MMSE of a scalar discrete input by Gauss-Hermite quadrature.

    The posterior variance is integrated against the noise density for each
    constellation point.

    Parameters
    ----------
    constellation : sequence of (point, probability)
    gamma : float
        Linear SNR.
    nodes : int, optional
        Fixed quadrature order. By default the order starts at
        ``tol.quadrature_nodes`` and doubles until converged; high SNR
        sharpens the integrand and needs more nodes.
    """
    pts, probs = _constellation(constellation)
    sg = math.sqrt(float(gamma))

    def rule(z, wz):
        # y[k, m] = sqrt(g) x_k + z_m
        y = sg * pts[:, None] + z[None, :]
        lw = np.log(np.where(probs > 0, probs, 1e-300))[None, None, :] \
            - 0.5 * (y[:, :, None] - sg * pts[None, None, :]) ** 2
        lw -= lw.max(axis=2, keepdims=True)
        w = np.exp(lw)
        w /= w.sum(axis=2, keepdims=True)
        mean = w @ pts
        post_var = np.maximum(w @ pts**2 - mean**2, 0.0)
        return float(probs @ (post_var @ wz))

    return _adaptive(rule, nodes, tol)


def scalar_mi_quadrature(constellation: Sequence[Tuple[float, float]], gamma,
                         nodes: Optional[int] = None, tol: Tolerances = DEFAULT):
    """Deterministic ``I(X; sqrt(gamma) X + N)`` in nats for a scalar discrete input."""
    pts, probs = _constellation(constellation)
    sg = math.sqrt(float(gamma))
    keep = probs > 0
    pts, probs = pts[keep], probs[keep]

    def rule(z, wz):
        y = sg * pts[:, None] + z[None, :]
        # ln p(y|x_k) - ln p(y) = -z^2/2 - logsumexp_j(ln p_j - (y - sqrt(g) x_j)^2 / 2)
        mix = logsumexp(np.log(probs)[None, None, :]
                        - 0.5 * (y[:, :, None] - sg * pts[None, None, :]) ** 2, axis=2)
        integrand = -0.5 * z[None, :] ** 2 - mix
        return float(probs @ (integrand @ wz))

    return _adaptive(rule, nodes, tol)


def _as_constellation(codebook):
    if codebook.length != 1:
        raise ValueError("quadrature path needs a scalar (n = 1) codebook")
    p = 1.0 / codebook.size
    return [(float(x), p) for x in codebook.codewords[:, 0]]


@dataclass(frozen=True)
class CrossingReport:
    grid: Tuple[float, ...]
    q_values: Tuple[float, ...]
    q_errors: Tuple[float, ...]
    verdict: bool
    first_nonnegative_index: Optional[int]
    violations: Tuple[Tuple[int, int], ...] = field(default=())

    def to_dict(self):
        return {
            "grid": list(self.grid),
            "q_values": list(self.q_values),
            "q_errors": list(self.q_errors),
            "verdict": "pass" if self.verdict else "fail",
            "first_nonnegative_index": self.first_nonnegative_index,
            "violations": [list(v) for v in self.violations],
        }


def crossing_verdict(q, err, sigma):
    """Index pairs (i, j), i < j, where q[i] >= 0 but q[j] sits more than
    `sigma` combined standard errors below zero."""
    q = np.asarray(q, dtype=float)
    err = np.asarray(err, dtype=float)
    bad = []
    for i in np.flatnonzero(q >= 0):
        for j in range(i + 1, len(q)):
            if q[j] + sigma * math.hypot(err[i], err[j]) < 0:
                bad.append((int(i), j))
    return tuple(bad)


def verify_single_crossing(codebook: DiscreteCodebook, variance, grid: Sequence[float],
                           samples, seed=None, method="monte_carlo",
                           tol: Tolerances = DEFAULT) -> CrossingReport:
    """Check that ``q(gamma) = mmse_G(variance, gamma) - mmse(gamma)`` never goes
    from nonnegative to significantly negative along `grid`.

    `method` is ``"monte_carlo"`` or ``"quadrature"`` (scalar codebooks only,
    zero error bars).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be nonempty and strictly increasing")
    q, err = [], []
    if method == "quadrature":
        const = _as_constellation(codebook)
        for g in grid:
            q.append(gaussian_mmse(variance, g) - scalar_mmse_quadrature(const, g, tol=tol))
            err.append(0.0)
    elif method == "monte_carlo":
        streams = np.random.SeedSequence(seed).spawn(len(grid))
        for g, ss in zip(grid, streams):
            est = mmse_monte_carlo(codebook, g, samples, ss, tol=tol)
            q.append(gaussian_mmse(variance, g) - est.value)
            err.append(est.std_error)
    else:
        raise ValueError(f"unknown method {method!r}")
    violations = crossing_verdict(q, err, tol.sigma_policy)
    nonneg = np.flatnonzero(np.asarray(q) >= 0)
    first = int(nonneg[0]) if nonneg.size else None
    return CrossingReport(tuple(grid.tolist()), tuple(float(v) for v in q),
                          tuple(float(e) for e in err), not violations, first, violations)


@dataclass(frozen=True)
class IdentityReport:
    snr: float
    method: str
    mutual_information: float
    mi_std_error: float
    half_integral: float
    integral_std_error: float
    quadrature_error: float
    residual: float
    budget: float
    nodes: int

    @property
    def passed(self):
        return self.residual <= self.budget

    def to_dict(self):
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["verdict"] = "pass" if self.passed else "fail"
        return out


def _trapezoid_nodes(grid_density, cap):
    # 2^k + 1 nodes so the every-other-node rule is available for Richardson
    k = max(2, math.ceil(math.log2(max(grid_density - 1, 2))))
    while 2**k + 1 > cap and k > 2:
        k -= 1
    return 2**k + 1


def verify_immse_identity(codebook: DiscreteCodebook, snr, grid_density=65,
                          samples=100_000, seed=None, method="auto",
                          tol: Tolerances = DEFAULT) -> IdentityReport:
    """Compare ``I(snr)`` with half the trapezoid integral of the MMSE on ``[0, snr]``.

    With ``method="quadrature"`` (the default for scalar codebooks) both sides
    are deterministic and the budget is the trapezoid error estimate plus a
    fixed allowance for Gauss-Hermite error. With ``"monte_carlo"`` the MMSE
    curve is sampled with common random numbers across the grid and the
    budget adds `tol.sigma_policy` combined standard errors.

    Raises
    ------
    BudgetExceeded
        If codewords x samples x nodes is beyond `tol.identity_budget`.
    """
    snr = float(snr)
    if snr <= 0:
        raise ValueError("snr must be positive")
    if method == "auto":
        method = "quadrature" if codebook.length == 1 else "monte_carlo"
    nodes = _trapezoid_nodes(grid_density, tol.max_grid_nodes)
    grid = np.linspace(0.0, snr, nodes)
    h = grid[1] - grid[0]

    if method == "quadrature":
        const = _as_constellation(codebook)
        mmse = np.array([scalar_mmse_quadrature(const, g, tol=tol) for g in grid])
        mmse_err = np.zeros_like(mmse)
        mi, mi_err = scalar_mi_quadrature(const, snr, tol=tol), 0.0
    elif method == "monte_carlo":
        cost = codebook.size * codebook.length * samples
        if cost * (nodes + codebook.size) > tol.identity_budget:
            raise BudgetExceeded(
                f"infeasible at this size: {cost * (nodes + codebook.size):.3g} "
                f"operations exceed the budget {tol.identity_budget:.3g}")
        streams = np.random.SeedSequence(seed).spawn(2)
        crn = int(streams[0].generate_state(1)[0])
        ests = [mmse_monte_carlo(codebook, g, samples, crn, tol=tol) for g in grid]
        mmse = np.array([e.value for e in ests])
        mmse_err = np.array([e.std_error for e in ests])
        mi_est = mi_monte_carlo(codebook, snr, samples, streams[1], tol=tol)
        mi, mi_err = mi_est.value, mi_est.std_error
    else:
        raise ValueError(f"unknown method {method!r}")

    weights = np.full(nodes, h)
    weights[[0, -1]] = h / 2
    fine = 0.5 * float(weights @ mmse)
    coarse_w = np.full((nodes + 1) // 2, 2 * h)
    coarse_w[[0, -1]] = h
    coarse = 0.5 * float(coarse_w @ mmse[::2])
    # the coarse rule's error is ~4x the fine one, so the gap overstates it
    quad_err = abs(fine - coarse)
    # common random numbers: errors are positively correlated, so add linearly
    int_err = 0.5 * float(weights @ mmse_err)
    residual = abs(mi - fine)
    stat = math.hypot(mi_err, int_err)
    floor = 1e-9 if method == "quadrature" else 0.0
    budget = tol.sigma_policy * stat + quad_err + floor
    return IdentityReport(snr, method, mi, mi_err, fine, int_err, quad_err,
                          residual, budget, nodes)
