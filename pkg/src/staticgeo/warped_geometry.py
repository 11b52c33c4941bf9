"""Geometry descriptions: warped-product metrics over an interval.

The metric under study is

    g = ds^2 + sum_j h_j(s)^2 g_j

on I x F_1 x ... x F_B, where each fiber (F_j, g_j) is a circle/line
(dim 1), a space form of curvature k, or an abstract Einstein space whose
Einstein constant is (dim - 1) * k.  A WarpedProductSpec bundles the fiber
blocks with the interval and an evaluation grid; a LapseFunction is the
scalar factor paired with the metric by the verification routines.

Positivity of the warpings is a property of the pair (function, domain),
so it is checked by validate_spec over the margin-shrunk grid rather than
at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import profiles
from .errors import (
    BadRange,
    OutOfDomain,
    UnsupportedKind,
    ZeroScale,
)
from .profiles import (
    HyperbolicProfile,
    PolynomialProfile,
    Profile,
    SampledProfile,
    ScaledDerivativeProfile,
    ScaledProfile,
    SumProfile,
    TrigProfile,
)

__all__ = [
    "DEFAULT_GRID_POINTS",
    "GRID_MARGIN_STEPS",
    "WARPING_KINDS",
    "LAPSE_KINDS",
    "WarpingFunction",
    "FiberBlock",
    "WarpedProductSpec",
    "LapseFunction",
    "ValidationReport",
    "make_analytic_warping",
    "make_sampled_warping",
    "make_lapse",
    "perturbed_lapse",
    "validate_spec",
    "spec_from_dict",
    "load_problem",
]

DEFAULT_GRID_POINTS = 1024
# Residuals are never evaluated on the outermost grid points; two steps are
# trimmed from each side so derivative stencils and near-boundary zeros of
# analytic warpings stay out of the evaluation window.
GRID_MARGIN_STEPS = 2

WARPING_KINDS = frozenset(
    {
        "constant",
        "linear",
        "sin-scaled",
        "cos-scaled",
        "sinh-scaled",
        "cosh-scaled",
        "sampled",
        "ode-backed",
    }
)

LAPSE_KINDS = frozenset(
    {"constant", "linear", "poly", "sin-cos", "sinh-cosh", "derived", "sampled"}
)


@dataclass(frozen=True)
class WarpingFunction:
    """One warping factor h_j(s) with its derivative tower.

    kind is one of WARPING_KINDS; params echoes the construction
    parameters (useful for serialization and reports); derivative_order is
    the maximum order the underlying profile supports.
    """

    kind: str
    params: tuple[float, ...]
    derivative_order: int
    profile: Profile = field(repr=False, compare=False)

    def value(self, s):
        return self.profile.derivative(s, 0)

    def derivative(self, s, order: int):
        return self.profile.derivative(s, order)

    def __call__(self, s):
        return self.value(s)


def make_analytic_warping(kind: str, params) -> WarpingFunction:
    """Build a closed-form warping.

    Supported kinds and parameters:

    - "constant":     (value,)
    - "linear":       (intercept, slope)
    - "sin-scaled":   (amplitude, frequency[, phase])   A sin(w s + phase)
    - "cos-scaled":   (amplitude, frequency[, phase])
    - "sinh-scaled":  (amplitude, frequency[, phase])
    - "cosh-scaled":  (amplitude, frequency[, phase])
    """
    params = tuple(float(p) for p in params)
    if kind == "constant":
        if len(params) != 1:
            raise BadRange(f"constant warping takes 1 parameter, got {len(params)}")
        profile: Profile = PolynomialProfile(params)
    elif kind == "linear":
        if len(params) != 2:
            raise BadRange(f"linear warping takes 2 parameters, got {len(params)}")
        profile = PolynomialProfile(params)
    elif kind in ("sin-scaled", "cos-scaled", "sinh-scaled", "cosh-scaled"):
        if len(params) not in (2, 3):
            raise BadRange(f"{kind} warping takes 2 or 3 parameters, got {len(params)}")
        amp, omega = params[0], params[1]
        phase = params[2] if len(params) == 3 else 0.0
        if kind == "sin-scaled":
            profile = TrigProfile(a_sin=amp, omega=omega, phase=phase)
        elif kind == "cos-scaled":
            profile = TrigProfile(a_cos=amp, omega=omega, phase=phase)
        elif kind == "sinh-scaled":
            profile = HyperbolicProfile(a_sinh=amp, omega=omega, phase=phase)
        else:
            profile = HyperbolicProfile(a_cosh=amp, omega=omega, phase=phase)
    else:
        raise UnsupportedKind(f"unknown analytic warping kind {kind!r}")
    return WarpingFunction(kind, params, profiles.ANALYTIC_ORDER, profile)


def make_sampled_warping(s_start: float, step: float, samples) -> WarpingFunction:
    """Warping from uniform samples; needs at least 9 strictly positive values."""
    profile = SampledProfile(s_start, step, samples)
    profile.require_positive()
    params = (float(s_start), float(step)) + tuple(float(v) for v in profile.samples)
    return WarpingFunction("sampled", params, profile.max_order, profile)


@dataclass(frozen=True)
class FiberBlock:
    """One fiber factor: dimension, model, curvature constant, warping.

    model is "line" (dim 1, no curvature constant), "space_form"
    (constant curvature k), or "abstract_einstein" (Einstein constant
    (dim - 1) * k, full curvature unknown).  Blocks of dimension 1 always
    normalize to the line model with k = 0.
    """

    dim: int
    warping: WarpingFunction
    model: str = "space_form"
    k: float = 0.0

    def __post_init__(self):
        if self.model not in ("line", "space_form", "abstract_einstein"):
            raise UnsupportedKind(f"unknown fiber model {self.model!r}")
        if self.dim == 1:
            object.__setattr__(self, "model", "line")
            object.__setattr__(self, "k", 0.0)
        elif self.model == "line":
            raise BadRange(f"line model requires dim 1, got dim {self.dim}")


@dataclass(frozen=True)
class WarpedProductSpec:
    """A multiply warped product over an interval, plus its grid."""

    blocks: tuple[FiberBlock, ...]
    domain: tuple[float, float]
    grid_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(
            self, "domain", (float(self.domain[0]), float(self.domain[1]))
        )
        if self.domain[1] <= self.domain[0]:
            raise BadRange(f"empty domain {self.domain}")
        if self.grid_points < 9:
            raise BadRange(f"grid needs at least 9 points, got {self.grid_points}")

    @property
    def n(self) -> int:
        """Total manifold dimension, 1 + sum of fiber dimensions."""
        return 1 + sum(b.dim for b in self.blocks)

    @property
    def step(self) -> float:
        return (self.domain[1] - self.domain[0]) / (self.grid_points - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], self.grid_points)

    def evaluation_grid(self) -> np.ndarray:
        """Full grid with GRID_MARGIN_STEPS points trimmed from each side."""
        return self.grid()[GRID_MARGIN_STEPS:-GRID_MARGIN_STEPS]

    def block_offsets(self) -> tuple[int, ...]:
        """First frame index of each block (index 0 is the interval direction)."""
        offsets = []
        pos = 1
        for b in self.blocks:
            offsets.append(pos)
            pos += b.dim
        return tuple(offsets)


@dataclass(frozen=True)
class LapseFunction:
    """Scalar factor f(s) paired with a spec by the verification routines."""

    kind: str
    params: tuple[float, ...]
    derivative_order: int
    profile: Profile = field(repr=False, compare=False)

    def value(self, s):
        return self.profile.derivative(s, 0)

    def derivative(self, s, order: int):
        return self.profile.derivative(s, order)

    def __call__(self, s):
        return self.value(s)

    def rescaled(self, c: float) -> "LapseFunction":
        """The lapse c * f; c must be nonzero."""
        if c == 0.0:
            raise ZeroScale("lapse rescaling factor must be nonzero")
        return LapseFunction(
            self.kind,
            self.params,
            self.derivative_order,
            ScaledProfile(self.profile, float(c)),
        )


def make_lapse(kind: str, params) -> LapseFunction:
    """Build a lapse function.

    Supported kinds and parameters:

    - "constant":   (value,)
    - "linear":     (intercept, slope)
    - "poly":       (c0, c1, c2, ...)
    - "sin-cos":    (c_sin, c_cos, frequency[, phase])
    - "sinh-cosh":  (c_sinh, c_cosh, frequency[, phase])
    - "sampled":    (s_start, step, v0, v1, ...)

    The "derived" kind (f = c h') is built by ode_solver.lapse_from_warping
    from a warping function rather than from raw parameters.
    """
    params = tuple(float(p) for p in params)
    if kind == "constant":
        profile: Profile = PolynomialProfile(params[:1])
        order = profiles.ANALYTIC_ORDER
    elif kind in ("linear", "poly"):
        profile = PolynomialProfile(params)
        order = profiles.ANALYTIC_ORDER
    elif kind in ("sin-cos", "sinh-cosh"):
        if len(params) not in (3, 4):
            raise BadRange(f"{kind} lapse takes 3 or 4 parameters, got {len(params)}")
        c1, c2, omega = params[0], params[1], params[2]
        phase = params[3] if len(params) == 4 else 0.0
        if kind == "sin-cos":
            profile = TrigProfile(a_sin=c1, a_cos=c2, omega=omega, phase=phase)
        else:
            profile = HyperbolicProfile(a_sinh=c1, a_cosh=c2, omega=omega, phase=phase)
        order = profiles.ANALYTIC_ORDER
    elif kind == "sampled":
        if len(params) < 3:
            raise BadRange("sampled lapse needs (s_start, step, samples...)")
        profile = SampledProfile(params[0], params[1], params[2:])
        order = profile.max_order
    else:
        raise UnsupportedKind(f"unknown lapse kind {kind!r}")
    return LapseFunction(kind, params, order, profile)


def perturbed_lapse(f: LapseFunction, extra: Profile) -> LapseFunction:
    """f plus an additive analytic term (used by negative tests)."""
    return LapseFunction(
        f.kind, f.params, min(f.derivative_order, extra.max_order),
        SumProfile(f.profile, extra),
    )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_spec: ok iff violations is empty.

    Each violation is (grid index, constraint name, offending value);
    grid index is -1 for constraints not tied to a grid point.
    """

    ok: bool
    violations: tuple[tuple[int, str, float], ...]


def validate_spec(spec: WarpedProductSpec) -> ValidationReport:
    """Check a spec is usable: dimensions sane, warpings positive.

    Positivity is tested on the margin-shrunk grid, which is exactly
    where every downstream residual is evaluated.
    """
    violations: list[tuple[int, str, float]] = []
    if spec.n < 3:
        violations.append((-1, "total_dim", float(spec.n)))
    for j, b in enumerate(spec.blocks):
        if b.dim < 1:
            violations.append((-1, f"block[{j}].dim", float(b.dim)))
    grid = spec.evaluation_grid()
    for j, b in enumerate(spec.blocks):
        if b.dim < 1:
            continue
        try:
            h = np.asarray(b.warping.value(grid), dtype=float)
        except OutOfDomain:
            violations.append((-1, f"block[{j}].coverage", float("nan")))
            continue
        bad = np.nonzero(~(h > 0.0))[0]
        for idx in bad[:16]:
            violations.append((int(idx), f"block[{j}].positivity", float(h[idx])))
    return ValidationReport(ok=not violations, violations=tuple(violations))


# ---------------------------------------------------------------------------
# JSON wire format.  Field names here are the stable external interface used
# by the command line driver; see README for a complete example.
# ---------------------------------------------------------------------------


def _warping_from_dict(d: dict, domain: tuple[float, float]) -> WarpingFunction:
    kind = d.get("kind")
    params = d.get("params", [])
    if kind not in WARPING_KINDS:
        raise UnsupportedKind(f"unknown warping kind {kind!r}")
    if kind == "sampled":
        if len(params) < 3:
            raise BadRange("sampled warping needs params [s_start, step, samples...]")
        return make_sampled_warping(params[0], params[1], params[2:])
    if kind == "ode-backed":
        # Deferred import: ode_solver depends on this module for its types.
        from .ode_solver import WarpingODEParams, integrate_warping

        if len(params) not in (5, 6):
            raise BadRange(
                "ode-backed warping needs params [power, linear_coeff, forcing, "
                "h0, h0_prime] with optional trailing step"
            )
        step = params[5] if len(params) == 6 else None
        ode = WarpingODEParams(
            power=int(params[0]),
            linear_coeff=float(params[1]),
            forcing=float(params[2]),
            h0=float(params[3]),
            h0_prime=float(params[4]),
            domain=domain,
            step=step,
        )
        return integrate_warping(ode)
    return make_analytic_warping(kind, params)


def _lapse_from_dict(d: dict, blocks: tuple[FiberBlock, ...]) -> LapseFunction:
    kind = d.get("kind")
    params = d.get("params", [])
    if kind == "derived":
        from .ode_solver import lapse_from_warping

        if not params:
            raise BadRange("derived lapse needs params [scale] or [scale, block]")
        scale = float(params[0])
        block_index = int(params[1]) if len(params) > 1 else 0
        if not 0 <= block_index < len(blocks):
            raise BadRange(f"derived lapse block index {block_index} out of range")
        return lapse_from_warping(blocks[block_index].warping, scale)
    if kind not in LAPSE_KINDS:
        raise UnsupportedKind(f"unknown lapse kind {kind!r}")
    return make_lapse(kind, params)


def spec_from_dict(d: dict, default_grid: int = DEFAULT_GRID_POINTS) -> WarpedProductSpec:
    """Build a WarpedProductSpec from the JSON wire format (without lapse)."""
    domain = (float(d["domain"][0]), float(d["domain"][1]))
    grid = int(d.get("grid", default_grid))
    blocks = []
    for bd in d["blocks"]:
        warping = _warping_from_dict(bd["warping"], domain)
        blocks.append(
            FiberBlock(
                dim=int(bd["dim"]),
                warping=warping,
                model=bd.get("model", "space_form"),
                k=float(bd.get("k", 0.0)),
            )
        )
    spec = WarpedProductSpec(tuple(blocks), domain, grid)
    declared = int(d["n"])
    if declared != spec.n:
        raise BadRange(
            f"declared dimension n={declared} but blocks give n={spec.n}"
        )
    return spec


def load_problem(
    d: dict, default_grid: int = DEFAULT_GRID_POINTS
) -> tuple[WarpedProductSpec, LapseFunction]:
    """Spec plus lapse from one JSON document."""
    spec = spec_from_dict(d, default_grid)
    lapse = _lapse_from_dict(d["lapse"], spec.blocks)
    return spec, lapse
