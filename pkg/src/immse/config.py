"""Numerical tolerances shared across the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # statistical verdicts reject only beyond this many combined standard errors
    sigma_policy: float = 3.0
    # starting Gauss-Hermite order for the scalar quadrature oracle, doubled
    # up to quadrature_max_nodes until successive orders agree to the target
    quadrature_nodes: int = 64
    quadrature_max_nodes: int = 2048
    quadrature_target: float = 1e-13
    # residual accepted from the closed-form parameter inverses
    inverse_residual: float = 1e-14
    # cap on codewords x samples held in memory by one Monte Carlo chunk
    chunk_budget: int = 2_000_000
    # hard cap on codewords x samples x grid points for identity checks
    identity_budget: int = 5_000_000_000
    # upper limit on nodes of the adaptive trapezoid grid
    max_grid_nodes: int = 513


DEFAULT = Tolerances()
