"""Piecewise closed-form curves over SNR.

A curve is a sorted list of breakpoints and one segment per interval,
``[0, b_0), [b_0, b_1), ..., [b_last, inf)``. Evaluation is right-continuous,
so at a breakpoint the segment to its right is used. Use
:meth:`PiecewiseCurve.left_limit` for the value approached from below.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

__all__ = ["Rational", "Zero", "Log", "PiecewiseCurve"]


@dataclass(frozen=True)
class Rational:
    """``gamma -> a / (1 + a * gamma)``, the MMSE of a Gaussian of variance a."""

    a: float

    def __call__(self, gamma):
        return self.a / (1.0 + self.a * gamma)

    def derivative(self, gamma):
        return -((self.a / (1.0 + self.a * gamma)) ** 2)


@dataclass(frozen=True)
class Zero:
    def __call__(self, gamma):
        return np.zeros_like(gamma, dtype=float)

    def derivative(self, gamma):
        return np.zeros_like(gamma, dtype=float)


@dataclass(frozen=True)
class Log:
    """``gamma -> c + 0.5 * ln(1 + a * gamma)``."""

    c: float
    a: float

    def __call__(self, gamma):
        return self.c + 0.5 * np.log1p(self.a * gamma)

    def derivative(self, gamma):
        return 0.5 * self.a / (1.0 + self.a * gamma)


Segment = Union[Rational, Zero, Log]


@dataclass(frozen=True)
class PiecewiseCurve:
    breakpoints: Tuple[float, ...]
    segments: Tuple[Segment, ...]
    kind: str  # "mmse" or "mutual_information"

    def __post_init__(self):
        if len(self.segments) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more segment than breakpoints")
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if self.kind not in ("mmse", "mutual_information"):
            raise ValueError(f"unknown curve kind {self.kind!r}")

    def segment_index(self, gamma):
        return np.searchsorted(self.breakpoints, gamma, side="right")

    def _evaluate(self, gamma, index, method):
        g = np.asarray(gamma, dtype=float)
        if np.any(g < 0):
            raise ValueError("curves are defined for gamma >= 0 only")
        idx = np.asarray(index)
        out = np.empty(g.shape, dtype=float)
        for k, seg in enumerate(self.segments):
            mask = idx == k
            if np.any(mask):
                out[mask] = getattr(seg, method)(g[mask])
        return float(out) if out.ndim == 0 else out

    def __call__(self, gamma):
        g = np.asarray(gamma, dtype=float)
        return self._evaluate(g, self.segment_index(g), "__call__")

    def left_limit(self, gamma):
        """Value approached from below; equals the value off the breakpoints."""
        g = np.asarray(gamma, dtype=float)
        idx = np.searchsorted(self.breakpoints, g, side="left")
        return self._evaluate(g, idx, "__call__")

    def derivative(self, gamma):
        g = np.asarray(gamma, dtype=float)
        return self._evaluate(g, self.segment_index(g), "derivative")

    def jumps(self):
        """Pairs ``(breakpoint, right_value - left_value)``."""
        return [(b, self(b) - self.left_limit(b)) for b in self.breakpoints]
