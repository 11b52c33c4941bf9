"""Scalar profiles of one variable with exact derivative towers.

A profile is a function of the arc-length coordinate s that can report
its derivatives up to some maximum order.  Analytic profiles differentiate
in closed form; sampled profiles differentiate through finite-difference
stencils (5-point for orders 1-2, 7-point for orders 3-4); integrated
profiles get their higher derivatives from the differential equation that
defines them (see ode_solver).

All evaluation methods accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DerivativeOrderUnavailable,
    NonPositiveSample,
    OutOfDomain,
    TooFewSamples,
)

__all__ = [
    "Profile",
    "PolynomialProfile",
    "TrigProfile",
    "HyperbolicProfile",
    "SampledProfile",
    "ScaledDerivativeProfile",
    "ScaledProfile",
    "SumProfile",
    "fd_weights",
]

# Analytic profiles can be differentiated as often as we like; this is the
# order they advertise.  Nothing downstream needs more than 4.
ANALYTIC_ORDER = 8


class Profile:
    """Base class: a scalar function with a derivative tower."""

    max_order: int = 0

    def derivative(self, s, order: int):
        raise NotImplementedError

    def __call__(self, s):
        return self.derivative(s, 0)

    def _check_order(self, order: int) -> None:
        if not 0 <= order <= self.max_order:
            raise DerivativeOrderUnavailable(
                f"derivative order {order} not available "
                f"(max {self.max_order} for {type(self).__name__})"
            )


@dataclass(frozen=True)
class PolynomialProfile(Profile):
    """c[0] + c[1] s + c[2] s^2 + ... with exact derivatives."""

    coeffs: tuple[float, ...]
    max_order: int = field(default=ANALYTIC_ORDER, init=False)

    def derivative(self, s, order: int):
        self._check_order(order)
        s = np.asarray(s, dtype=float)
        c = np.asarray(self.coeffs, dtype=float)
        for _ in range(order):
            c = np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(1)
        return np.polynomial.polynomial.polyval(s, c)


@dataclass(frozen=True)
class TrigProfile(Profile):
    """a_sin * sin(w s + phase) + a_cos * cos(w s + phase).

    The d-th derivative advances the phase by d * pi/2 and scales by w^d.
    """

    a_sin: float = 0.0
    a_cos: float = 0.0
    omega: float = 1.0
    phase: float = 0.0
    max_order: int = field(default=ANALYTIC_ORDER, init=False)

    def derivative(self, s, order: int):
        self._check_order(order)
        x = self.omega * np.asarray(s, dtype=float) + self.phase + order * (math.pi / 2)
        scale = self.omega**order
        return scale * (self.a_sin * np.sin(x) + self.a_cos * np.cos(x))


@dataclass(frozen=True)
class HyperbolicProfile(Profile):
    """a_sinh * sinh(w s + phase) + a_cosh * cosh(w s + phase)."""

    a_sinh: float = 0.0
    a_cosh: float = 0.0
    omega: float = 1.0
    phase: float = 0.0
    max_order: int = field(default=ANALYTIC_ORDER, init=False)

    def derivative(self, s, order: int):
        self._check_order(order)
        x = self.omega * np.asarray(s, dtype=float) + self.phase
        scale = self.omega**order
        if order % 2 == 0:
            return scale * (self.a_sinh * np.sinh(x) + self.a_cosh * np.cosh(x))
        return scale * (self.a_sinh * np.cosh(x) + self.a_cosh * np.sinh(x))


def fd_weights(nodes: np.ndarray, x0: float, max_order: int) -> np.ndarray:
    """Finite-difference weights on arbitrary nodes (Fornberg's recursion).

    Returns an array W of shape (len(nodes), max_order + 1) such that
    sum_i W[i, m] * f(nodes[i]) approximates the m-th derivative of f at
    x0, exactly for polynomials up to degree len(nodes) - 1.
    """
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    w = np.zeros((n, max_order + 1))
    c1 = 1.0
    c4 = nodes[0] - x0
    w[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for m in range(mn, 0, -1):
                    w[i, m] = c1 * (m * w[i - 1, m - 1] - c5 * w[i - 1, m]) / c2
                w[i, 0] = -c1 * c5 * w[i - 1, 0] / c2
            for m in range(mn, 0, -1):
                w[j, m] = (c4 * w[j, m] - m * w[j, m - 1]) / c3
            w[j, 0] = c4 * w[j, 0] / c3
        c1 = c2
    return w


# Stencil widths: 5 points carry orders 1-2, 7 points carry orders 3-4.
_STENCIL = {0: 5, 1: 5, 2: 5, 3: 7, 4: 7}
_MARGIN = {0: 2, 1: 2, 2: 2, 3: 3, 4: 3}


class SampledProfile(Profile):
    """Uniformly sampled profile differentiated by local stencils.

    Evaluation is restricted to the interior where a centered stencil
    fits: two sample steps on each side for orders up to 2, three for
    orders 3 and 4.  Off-node queries use the same stencil with weights
    recomputed for the query point (local polynomial interpolation).
    """

    max_order = 4

    def __init__(self, s_start: float, step: float, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or samples.size < 9:
            raise TooFewSamples(
                f"need at least 9 samples, got {samples.size}"
            )
        if not step > 0:
            raise ValueError(f"sample step must be positive, got {step}")
        self.s_start = float(s_start)
        self.step = float(step)
        self.samples = samples
        self.samples.setflags(write=False)
        self.s_end = self.s_start + (samples.size - 1) * self.step

    def require_positive(self) -> None:
        if np.any(self.samples <= 0.0):
            bad = int(np.argmin(self.samples))
            raise NonPositiveSample(
                f"sample {bad} is {self.samples[bad]:g}; warping samples must be > 0"
            )

    def derivative(self, s, order: int):
        self._check_order(order)
        s_arr = np.asarray(s, dtype=float)
        margin = _MARGIN[order] * self.step
        lo = self.s_start + margin
        hi = self.s_end - margin
        eps = 1e-9 * self.step
        if np.any(s_arr < lo - eps) or np.any(s_arr > hi + eps):
            raise OutOfDomain(
                f"evaluation at s outside [{lo:g}, {hi:g}] "
                f"(order-{order} stencil needs {_MARGIN[order]} steps of margin)"
            )
        width = _STENCIL[order]
        half = width // 2
        flat = np.atleast_1d(s_arr).ravel()
        out = np.empty_like(flat)
        for idx, sv in enumerate(flat):
            center = int(round((sv - self.s_start) / self.step))
            start = min(max(center - half, 0), self.samples.size - width)
            nodes = self.s_start + self.step * np.arange(start, start + width)
            w = fd_weights(nodes, sv, order)
            out[idx] = w[:, order] @ self.samples[start : start + width]
        return out.reshape(s_arr.shape) if s_arr.shape else out[0]


@dataclass(frozen=True)
class ScaledDerivativeProfile(Profile):
    """factor * (d/ds) base, one derivative order fewer than the base."""

    base: Profile
    factor: float

    @property
    def max_order(self) -> int:  # type: ignore[override]
        return self.base.max_order - 1

    def derivative(self, s, order: int):
        self._check_order(order)
        return self.factor * self.base.derivative(s, order + 1)


@dataclass(frozen=True)
class ScaledProfile(Profile):
    """factor * base."""

    base: Profile
    factor: float

    @property
    def max_order(self) -> int:  # type: ignore[override]
        return self.base.max_order

    def derivative(self, s, order: int):
        self._check_order(order)
        return self.factor * self.base.derivative(s, order)


@dataclass(frozen=True)
class SumProfile(Profile):
    """Pointwise sum of two profiles."""

    first: Profile
    second: Profile

    @property
    def max_order(self) -> int:  # type: ignore[override]
        return min(self.first.max_order, self.second.max_order)

    def derivative(self, s, order: int):
        self._check_order(order)
        return self.first.derivative(s, order) + self.second.derivative(s, order)
