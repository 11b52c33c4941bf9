"""Warping profiles defined by h'' + c1 h = c0 h^(-p).

This one family covers both uses in the package: a single warped fiber of
an n-manifold (p = n-1, c1 = R/(n(n-1))) and a warped sub-factor of
dimension r1 inside a product (p = r1, c1 = R/((n-1)(r1+1))).  Multiplying
by h' and integrating once gives the conserved quantity

    k = h'^2 + 2 c0/(p-1) h^(-(p-1)) + c1 h^2

which doubles as the curvature constant the fiber must carry for the
resulting geometry to close up; the catalog builders rely on that.

Integration is classic fixed-step fourth-order Runge-Kutta (default step:
domain length / 4096).  The returned warping evaluates between nodes by a
single short Runge-Kutta step from the nearest stored node, and all
derivatives of order two and higher come from the differential equation,
never from finite differences, so the equation residual of the profile is
zero by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BadRange, BlowUp, NonPositiveInput, OutOfDomain, ZeroScale
from .profiles import Profile, ScaledDerivativeProfile
from .warped_geometry import LapseFunction, WarpingFunction

__all__ = [
    "WarpingODEParams",
    "FirstIntegralValue",
    "PeriodicSolution",
    "integrate_warping",
    "first_integral",
    "lapse_from_warping",
    "k0_threshold",
    "turning_point",
    "find_periodic",
]

DEFAULT_STEPS = 4096

# Integration aborts outside this window: the h^(-p) term is singular at
# zero and nothing geometric survives values this large.
_H_FLOOR = 1e-10
_STATE_CEIL = 1e12


@dataclass(frozen=True)
class WarpingODEParams:
    """Parameters and initial data for h'' + linear_coeff h = forcing h^(-power).

    power must be an integer >= 2.  `a` is an alias for `forcing`, matching
    the usual name of the constant in the single-fiber construction.
    """

    power: int
    linear_coeff: float
    forcing: float
    h0: float
    h0_prime: float
    domain: tuple[float, float]
    step: float | None = None

    def __post_init__(self):
        if int(self.power) != self.power or self.power < 2:
            raise BadRange(f"power must be an integer >= 2, got {self.power}")
        object.__setattr__(self, "power", int(self.power))
        object.__setattr__(
            self, "domain", (float(self.domain[0]), float(self.domain[1]))
        )
        if self.domain[1] <= self.domain[0]:
            raise BadRange(f"empty integration domain {self.domain}")
        if self.step is not None and not self.step > 0:
            raise BadRange(f"step must be positive, got {self.step}")
        if self.forcing != 0.0 and not self.h0 > 0.0:
            raise NonPositiveInput(
                f"h0 must be positive when the singular term is active, got {self.h0}"
            )

    @property
    def a(self) -> float:
        return self.forcing

    @property
    def effective_step(self) -> float:
        if self.step is not None:
            return self.step
        return (self.domain[1] - self.domain[0]) / DEFAULT_STEPS

    @classmethod
    def single_fiber(
        cls, n: int, R: float, forcing: float, h0: float, h0_prime: float,
        domain: tuple[float, float], step: float | None = None,
    ) -> "WarpingODEParams":
        """Warping of the full (n-1)-dimensional fiber of an n-manifold."""
        return cls(n - 1, R / (n * (n - 1.0)), forcing, h0, h0_prime, domain, step)

    @classmethod
    def warped_factor(
        cls, n: int, R: float, sub_dim: int, forcing: float, h0: float,
        h0_prime: float, domain: tuple[float, float], step: float | None = None,
    ) -> "WarpingODEParams":
        """Warping of a sub-factor of dimension sub_dim inside an n-manifold."""
        return cls(
            sub_dim, R / ((n - 1.0) * (sub_dim + 1.0)), forcing, h0, h0_prime,
            domain, step,
        )


@dataclass(frozen=True)
class FirstIntegralValue:
    """Value(s) of the conserved quantity along a trajectory."""

    value: float | np.ndarray


@dataclass(frozen=True)
class PeriodicSolution:
    """A closed orbit of the warping equation, starting at its maximum."""

    period: float
    h_min: float
    h_max: float
    k: float
    warping: WarpingFunction


def _accel(p: int, c1: float, c0: float, h):
    if c0 == 0.0:
        return -c1 * h
    return c0 * h ** (-float(p)) - c1 * h


def _rk4_step(p, c1, c0, h, hp, dt):
    """One Runge-Kutta step of the second-order equation; vectorized."""
    k1h = hp
    k1v = _accel(p, c1, c0, h)
    k2h = hp + 0.5 * dt * k1v
    k2v = _accel(p, c1, c0, h + 0.5 * dt * k1h)
    k3h = hp + 0.5 * dt * k2v
    k3v = _accel(p, c1, c0, h + 0.5 * dt * k2h)
    k4h = hp + dt * k3v
    k4v = _accel(p, c1, c0, h + dt * k3h)
    h_new = h + dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h)
    hp_new = hp + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return h_new, hp_new


def _state_ok(c0: float, h: float, hp: float) -> bool:
    if not (math.isfinite(h) and math.isfinite(hp)):
        return False
    if abs(h) > _STATE_CEIL or abs(hp) > _STATE_CEIL:
        return False
    if c0 != 0.0 and h <= _H_FLOOR:
        return False
    return True


class OdeBackedProfile(Profile):
    """Dense-output trajectory of the warping equation.

    Stores the fixed-step nodes and evaluates anywhere in the domain by
    one Runge-Kutta step from the node just below the query point.
    Orders 2 through 4 are read off the equation:

        h''   = c0 h^(-p) - c1 h
        h'''  = h' (-p c0 h^(-p-1) - c1)
        h'''' = p(p+1) c0 h^(-p-2) h'^2 - (p c0 h^(-p-1) + c1) h''
    """

    max_order = 4

    def __init__(self, params: WarpingODEParams):
        lo, hi = params.domain
        step = params.effective_step
        n_steps = max(1, math.ceil((hi - lo) / step - 1e-12))
        dt = (hi - lo) / n_steps
        p, c1, c0 = params.power, params.linear_coeff, params.forcing
        h = np.empty(n_steps + 1)
        hp = np.empty(n_steps + 1)
        h[0], hp[0] = params.h0, params.h0_prime
        if not _state_ok(c0, h[0], hp[0]):
            raise BlowUp("initial state already inadmissible", lo)
        for i in range(n_steps):
            h[i + 1], hp[i + 1] = _rk4_step(p, c1, c0, h[i], hp[i], dt)
            if not _state_ok(c0, h[i + 1], hp[i + 1]):
                raise BlowUp(
                    f"trajectory left the admissible region near s = {lo + (i + 1) * dt:g}",
                    lo + i * dt,
                )
        self.params = params
        self.s_lo, self.s_hi = lo, hi
        self.dt = dt
        self.h_nodes = h
        self.hp_nodes = hp

    def _state(self, s: np.ndarray):
        slack = 1e-9 * self.dt
        if np.any(s < self.s_lo - slack) or np.any(s > self.s_hi + slack):
            raise OutOfDomain(
                f"evaluation outside the integrated domain [{self.s_lo:g}, {self.s_hi:g}]"
            )
        idx = np.clip(
            np.floor((s - self.s_lo) / self.dt).astype(int), 0, self.h_nodes.size - 1
        )
        delta = s - (self.s_lo + idx * self.dt)
        pr = self.params
        return _rk4_step(
            pr.power, pr.linear_coeff, pr.forcing,
            self.h_nodes[idx], self.hp_nodes[idx], delta,
        )

    def derivative(self, s, order: int):
        self._check_order(order)
        s_arr = np.asarray(s, dtype=float)
        h, hp = self._state(s_arr)
        p = float(self.params.power)
        c1, c0 = self.params.linear_coeff, self.params.forcing
        if order == 0:
            return h
        if order == 1:
            return hp
        sing = c0 * h ** (-p) if c0 != 0.0 else np.zeros_like(h)
        h2 = sing - c1 * h
        if order == 2:
            return h2
        sing1 = -p * c0 * h ** (-p - 1.0) if c0 != 0.0 else np.zeros_like(h)
        if order == 3:
            return hp * (sing1 - c1)
        sing2 = p * (p + 1.0) * c0 * h ** (-p - 2.0) if c0 != 0.0 else np.zeros_like(h)
        return sing2 * hp**2 + (sing1 - c1) * h2


def integrate_warping(params: WarpingODEParams) -> WarpingFunction:
    """Integrate the warping equation and wrap the trajectory as a warping."""
    profile = OdeBackedProfile(params)
    tag = (
        float(params.power), params.linear_coeff, params.forcing,
        params.h0, params.h0_prime,
    )
    return WarpingFunction("ode-backed", tag, profile.max_order, profile)


def first_integral(params: WarpingODEParams, h, h_prime) -> FirstIntegralValue:
    """Conserved combination k evaluated on a state (scalars or arrays)."""
    h = np.asarray(h, dtype=float)
    hp = np.asarray(h_prime, dtype=float)
    p, c1, c0 = params.power, params.linear_coeff, params.forcing
    value = hp**2 + c1 * h**2
    if c0 != 0.0:
        value = value + (2.0 * c0 / (p - 1.0)) * h ** (-(p - 1.0))
    if value.ndim == 0:
        return FirstIntegralValue(float(value))
    return FirstIntegralValue(value)


def lapse_from_warping(h: WarpingFunction, c: float) -> LapseFunction:
    """The lapse f = c h' that pairs with an equation-driven warping."""
    if c == 0.0:
        raise ZeroScale("lapse scale must be nonzero")
    profile = ScaledDerivativeProfile(h.profile, float(c))
    return LapseFunction("derived", (float(c),), h.derivative_order - 1, profile)


def k0_threshold(n: int, R: float, a: float) -> float:
    """Least first-integral value admitting a periodic single-fiber warping.

    Equals the potential minimum of the conserved quantity:
    R/((n-1)(n-2)) * (n(n-1) a / R)^(2/n) for R > 0, a > 0.
    """
    if n < 3:
        raise BadRange(f"need n >= 3, got {n}")
    if R <= 0.0:
        raise NonPositiveInput(f"threshold defined for R > 0, got R={R}")
    if a <= 0.0:
        raise NonPositiveInput(f"threshold defined for a > 0, got a={a}")
    return R / ((n - 1.0) * (n - 2.0)) * (n * (n - 1.0) * a / R) ** (2.0 / n)


def _potential(p: int, c1: float, c0: float, h: float) -> float:
    return 2.0 * c0 / (p - 1.0) * h ** (-(p - 1.0)) + c1 * h * h


def turning_point(params: WarpingODEParams, k: float, branch: str = "outer") -> float:
    """Value of h where the potential part of the conserved quantity hits k.

    At a turning point h' = 0, so integrating from (turning_point(k), 0)
    produces a trajectory with conserved value exactly k.  "outer" is the
    root above the potential minimum (needs linear_coeff > 0), "inner" the
    barrier root below it; with linear_coeff <= 0 only "inner" exists.
    """
    p, c1, c0 = params.power, params.linear_coeff, params.forcing
    if c0 <= 0.0:
        raise NonPositiveInput(f"turning points need forcing > 0, got {c0}")
    if branch not in ("inner", "outer"):
        raise BadRange(f"branch must be 'inner' or 'outer', got {branch!r}")

    def gap(h: float) -> float:
        return _potential(p, c1, c0, h) - k

    if c1 > 0.0:
        h_star = (c0 / c1) ** (1.0 / (p + 1.0))
        if gap(h_star) >= 0.0:
            raise BadRange(
                f"no turning point: conserved value {k} does not clear the "
                "potential minimum"
            )
        if branch == "outer":
            hi = 2.0 * h_star
            while gap(hi) <= 0.0:
                hi *= 2.0
            return float(brentq(gap, h_star, hi, xtol=1e-14, rtol=1e-15))
        lo = 0.5 * h_star
        while gap(lo) <= 0.0:
            lo *= 0.5
        return float(brentq(gap, lo, h_star, xtol=1e-14, rtol=1e-15))
    # Monotone potential: a single barrier root on the inner side.
    if branch == "outer":
        raise BadRange("no outer turning point when linear_coeff <= 0")
    if c1 == 0.0 and k <= 0.0:
        raise BadRange(
            f"no turning point: conserved value must be positive when the "
            f"linear term vanishes, got {k}"
        )
    lo = hi = 1.0
    while gap(lo) <= 0.0:
        lo *= 0.5
    while gap(hi) >= 0.0:
        hi *= 2.0
    return float(brentq(gap, lo, hi, xtol=1e-14, rtol=1e-15))


def find_periodic(
    params: WarpingODEParams, k: float, *, closure_tol: float = 1e-8
) -> PeriodicSolution | None:
    """Closed orbit with first integral k, or None when none exists.

    Requires a confining potential (linear_coeff > 0 and forcing > 0) and
    k strictly above the potential minimum; the orbit starts at its
    maximum (a root of the potential, h' = 0) and the period is located
    by bisecting the h' sign changes of the dense trajectory.
    """
    p, c1, c0 = params.power, params.linear_coeff, params.forcing
    if c1 <= 0.0 or c0 <= 0.0:
        return None
    h_star = (c0 / c1) ** (1.0 / (p + 1.0))
    k_min = _potential(p, c1, c0, h_star)
    if k - k_min <= 1e-12 * max(1.0, abs(k_min)):
        return None

    def gap(h: float) -> float:
        return _potential(p, c1, c0, h) - k

    hi = 2.0 * h_star
    while gap(hi) <= 0.0:
        hi *= 2.0
    h_max = brentq(gap, h_star, hi, xtol=1e-14, rtol=1e-15)
    lo = 0.5 * h_star
    while gap(lo) <= 0.0:
        lo *= 0.5
    h_min = brentq(gap, lo, h_star, xtol=1e-14, rtol=1e-15)

    # Linearized period sets the step; the search window is generous.
    t_lin = 2.0 * math.pi / math.sqrt((p + 1.0) * c1)
    dt = params.step if params.step is not None else t_lin / DEFAULT_STEPS
    s_budget = 64.0 * t_lin

    s = 0.0
    h, hp = h_max, 0.0
    crossings = 0
    while s < s_budget:
        h_next, hp_next = _rk4_step(p, c1, c0, h, hp, dt)
        if not _state_ok(c0, h_next, hp_next):
            raise BlowUp(f"orbit search left admissible region near s = {s + dt:g}", s)
        if hp_next == 0.0 or (hp < 0.0 < hp_next) or (hp > 0.0 > hp_next):
            # h' changes sign inside (s, s + dt]; locate the crossing.
            def hp_at(delta: float) -> float:
                return _rk4_step(p, c1, c0, h, hp, delta)[1]

            delta = (
                dt if hp_next == 0.0
                else brentq(hp_at, 0.0, dt, xtol=1e-14, rtol=1e-15)
            )
            crossings += 1
            if crossings == 2:
                period = s + delta
                h_close = _rk4_step(p, c1, c0, h, hp, delta)[0]
                if abs(h_close - h_max) > closure_tol * max(1.0, h_max):
                    return None
                orbit = WarpingODEParams(
                    p, c1, c0, h_max, 0.0, (0.0, period), period / DEFAULT_STEPS
                )
                return PeriodicSolution(
                    period, h_min, h_max, float(k), integrate_warping(orbit)
                )
        s += dt
        h, hp = h_next, hp_next
    return None
