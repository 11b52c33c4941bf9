"""Residual checks and structure classification for static warped products.

Everything here reduces to sup norms of pointwise residual channels over
the margin-shrunk evaluation grid.  Residuals are always written in a
multiplied-through form (no division by the lapse or its derivative), so
they stay finite across zeros of f.

The classification looks at how many distinct values the fiber Ricci
eigenvalues take and which blocks warp.  Label strings, including
"ViolatesThm42" for three or more distinct fiber eigenvalues, are part of
the wire format and are consumed verbatim by the command line tools.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from . import curvature_engine as ce
from .errors import WrongBlockCount
from .warped_geometry import LapseFunction, WarpedProductSpec

__all__ = [
    "Channel",
    "ResidualReport",
    "ToleranceProfile",
    "ANALYTIC",
    "ODE_BACKED",
    "tier_for",
    "static_pointwise",
    "static_residual",
    "harmonic_pointwise",
    "harmonic_residual",
    "integrability_residual",
    "identity_dcw",
    "identity_db",
    "check_lemma41",
    "verify_pair",
    "TypeLabel",
    "LABELS",
    "classify",
]

LABELS = (
    "Einstein",
    "DFlat_TypeI",
    "TypeII",
    "TypeIII",
    "TypeIV",
    "ViolatesThm42",
    "Invalid",
)


@dataclass(frozen=True)
class Channel:
    """Sup norm of one residual channel, with the offending grid point."""

    sup: float
    argmax_index: int
    argmax_s: float


@dataclass(frozen=True)
class ResidualReport:
    """Named residual channels measured over a common grid."""

    channels: Mapping[str, Channel]
    grid: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "channels", MappingProxyType(dict(self.channels)))

    def max_sup(self) -> float:
        return max((c.sup for c in self.channels.values()), default=0.0)

    def merge(self, other: "ResidualReport") -> "ResidualReport":
        merged = dict(self.channels)
        merged.update(other.channels)
        return ResidualReport(merged, self.grid)

    def to_dict(self) -> dict:
        return {
            name: {"sup": c.sup, "argmax_index": c.argmax_index, "argmax_s": c.argmax_s}
            for name, c in sorted(self.channels.items())
        }


def _channel(values: np.ndarray, grid: np.ndarray) -> Channel:
    flat = np.abs(np.asarray(values, dtype=float))
    i = int(np.argmax(flat))
    return Channel(float(flat[i]), i, float(grid[i]))


@dataclass(frozen=True)
class ToleranceProfile:
    """Thresholds used by verification and classification.

    residual      sup tolerance for the static/harmonic channels
    distinct_rel  relative separation below which eigenvalues coincide
    structure     auxiliary structure fits inside classify
    """

    residual: float
    distinct_rel: float
    structure: float


ANALYTIC = ToleranceProfile(residual=1e-8, distinct_rel=1e-6, structure=1e-8)
ODE_BACKED = ToleranceProfile(residual=1e-5, distinct_rel=1e-6, structure=1e-5)


def tier_for(spec: WarpedProductSpec, f: LapseFunction | None = None) -> ToleranceProfile:
    """Pick the tolerance tier from the data sources involved.

    Trajectory-backed or sampled inputs carry integration and stencil
    noise, so they get the looser tier.
    """
    kinds = {b.warping.kind for b in spec.blocks}
    if f is not None:
        kinds.add(f.kind)
    if kinds & {"ode-backed", "sampled", "derived"}:
        return ODE_BACKED
    return ANALYTIC


# ---------------------------------------------------------------------------
# Residual channels
# ---------------------------------------------------------------------------


def static_pointwise(
    spec: WarpedProductSpec, f: LapseFunction, s=None
) -> dict[str, np.ndarray]:
    """Signed static-equation residuals per channel.

    In the adapted frame the Hessian of f is diag(f'', f' xi_j ...), so
    the equation Hess f = f (Ric - R/(n-1) g) becomes

        static_11       = f'' - f (lambda_1 - R/(n-1))
        static_block[j] = f' xi_j - f (lambda_j - R/(n-1))
    """
    if s is None:
        s = spec.evaluation_grid()
    r = ce.ricci_spectrum(spec, s)
    xi = ce.xi_profile(spec, s)
    f0 = np.asarray(f.value(s), dtype=float)
    f1 = np.asarray(f.derivative(s, 1), dtype=float)
    f2 = np.asarray(f.derivative(s, 2), dtype=float)
    shift = r.scalar / (spec.n - 1.0)
    out = {"static_11": f2 - f0 * (r.lambda_1 - shift)}
    for j in range(len(spec.blocks)):
        out[f"static_block[{j}]"] = f1 * xi[j] - f0 * (r.lambda_block[j] - shift)
    return out


def static_residual(spec: WarpedProductSpec, f: LapseFunction) -> ResidualReport:
    """Sup-norm report of the static-equation channels."""
    s = spec.evaluation_grid()
    point = static_pointwise(spec, f, s)
    return ResidualReport({k: _channel(v, s) for k, v in point.items()}, s)


def harmonic_pointwise(spec: WarpedProductSpec, s=None) -> dict[str, np.ndarray]:
    """Signed residuals of the harmonic-curvature conditions.

        harmonic_block[j] = lambda_j' - (lambda_1 - lambda_j) xi_j
        scalar_drift      = R'
    """
    if s is None:
        s = spec.evaluation_grid()
    d = ce.eigenvalue_derivatives(spec, s, order=1)
    out = {"scalar_drift": d.scalar[1]}
    for j in range(len(spec.blocks)):
        out[f"harmonic_block[{j}]"] = d.lambda_block[1, j] - (
            d.lambda_1[0] - d.lambda_block[0, j]
        ) * d.xi[0, j]
    return out


def harmonic_residual(
    spec: WarpedProductSpec, f: LapseFunction | None = None
) -> ResidualReport:
    """Sup-norm report of the harmonic-curvature channels (metric-only)."""
    del f
    s = spec.evaluation_grid()
    point = harmonic_pointwise(spec, s)
    return ResidualReport({k: _channel(v, s) for k, v in point.items()}, s)


def integrability_residual(spec: WarpedProductSpec) -> ResidualReport:
    """Per-block residual of xi_j' + xi_j^2 = lambda_j - R/(n-1).

    This ties the radial curvature of each block to its Ricci eigenvalue;
    it holds on solutions of the static equation with harmonic curvature
    and is a useful smoke alarm when a profile is inconsistent.
    """
    s = spec.evaluation_grid()
    d = ce.eigenvalue_derivatives(spec, s, order=1)
    shift = d.scalar[0] / (spec.n - 1.0)
    channels = {}
    for j in range(len(spec.blocks)):
        res = d.xi[1, j] + d.xi[0, j] ** 2 - (d.lambda_block[0, j] - shift)
        channels[f"integrability_block[{j}]"] = _channel(res, s)
    return ResidualReport(channels, s)


def identity_dcw(spec: WarpedProductSpec, f: LapseFunction) -> ResidualReport:
    """Dense residual of f C_ijk = f_l W_lijk + D_ijk.

    Materialized over all n^3 index triples so that class bookkeeping is
    exercised, then attributed back to blocks through the first index.
    """
    s = spec.evaluation_grid()
    C = ce.materialize_full(ce.cotton_classes(spec, f, s), spec)
    W = ce.materialize_full(ce.weyl_classes(spec, s), spec)
    D = ce.materialize_full(ce.d_tensor_classes(spec, f, s), spec)
    f0 = np.asarray(f.value(s), dtype=float)[..., None, None, None]
    f1 = np.asarray(f.derivative(s, 1), dtype=float)[..., None, None, None]
    res = f0 * C - f1 * W[..., 0, :, :, :] - D
    owner = ce._block_of_index(spec)
    channels = {}
    for j in range(len(spec.blocks)):
        rows = res[..., owner == j, :, :]
        channels[f"dcw_block[{j}]"] = _channel(
            np.max(np.abs(rows), axis=tuple(range(1, rows.ndim))), s
        )
    return ResidualReport(channels, s)


def identity_db(spec: WarpedProductSpec, f: LapseFunction) -> ResidualReport:
    """Dense residual of (n-2) f B_ij = D_ijk,k - f_k (C_ijk + m C_jik).

    Here m = (n-3)/(n-2) and only k = 1 contributes to the gradient term.
    The divergence of D is taken densely with the frame connection.
    """
    s = spec.evaluation_grid()
    n = spec.n
    B = ce.materialize_full(ce.bach_spectrum(spec, f, s), spec)
    C = ce.materialize_full(ce.cotton_classes(spec, f, s), spec)
    d_der = ce.d_tensor_derivatives(spec, f, s, order=1)
    D = ce.materialize_full(ce.MixedThreeTensor(d_der[0]), spec)
    Dp = ce.materialize_full(ce.MixedThreeTensor(d_der[1]), spec)
    G = ce.frame_connection(spec, s)
    div_d = ce.dense_three_tensor_divergence(D, Dp, G)
    f0 = np.asarray(f.value(s), dtype=float)
    f1 = np.asarray(f.derivative(s, 1), dtype=float)
    mix = C[..., :, :, 0] + (n - 3.0) / (n - 2.0) * np.swapaxes(C, -3, -2)[..., :, :, 0]
    res = (n - 2.0) * f0[..., None, None] * B - div_d + f1[..., None, None] * mix
    owner = ce._block_of_index(spec)
    channels = {"db_11": _channel(res[..., 0, 0], s)}
    for j in range(len(spec.blocks)):
        rows = res[..., owner == j, :]
        channels[f"db_block[{j}]"] = _channel(
            np.max(np.abs(rows), axis=tuple(range(1, rows.ndim))), s
        )
    return ResidualReport(channels, s)


def check_lemma41(spec: WarpedProductSpec, f: LapseFunction) -> ResidualReport:
    """Two-block consistency identities, multiplied through by f.

    With X, Y the xi of the two blocks and S = r1 X + r2 Y:

        lemma41_46: [2f' + f(S - X - Y)](X - Y)
                    - f[(r1-1) k1/h1^2 - (r2-1) k2/h2^2]
        lemma41_47: -f' S + f S' + 2 f (r1 X^2 + r2 Y^2) - f (X + Y) S
    """
    if len(spec.blocks) != 2:
        raise WrongBlockCount(
            f"two-block identities need exactly 2 blocks, got {len(spec.blocks)}"
        )
    s = spec.evaluation_grid()
    d = ce.eigenvalue_derivatives(spec, s, order=1)
    b1, b2 = spec.blocks
    r1, r2 = float(b1.dim), float(b2.dim)
    X, Y = d.xi[0, 0], d.xi[0, 1]
    Xp, Yp = d.xi[1, 0], d.xi[1, 1]
    f0 = np.asarray(f.value(s), dtype=float)
    f1 = np.asarray(f.derivative(s, 1), dtype=float)
    h1 = np.asarray(b1.warping.value(s), dtype=float)
    h2 = np.asarray(b2.warping.value(s), dtype=float)
    sum_xi = r1 * X + r2 * Y
    curv_gap = (r1 - 1.0) * b1.k / h1**2 - (r2 - 1.0) * b2.k / h2**2
    lem46 = (2.0 * f1 + f0 * (sum_xi - X - Y)) * (X - Y) - f0 * curv_gap
    lem47 = (
        -f1 * sum_xi
        + f0 * (r1 * Xp + r2 * Yp)
        + 2.0 * f0 * (r1 * X**2 + r2 * Y**2)
        - f0 * (X + Y) * sum_xi
    )
    return ResidualReport(
        {"lemma41_46": _channel(lem46, s), "lemma41_47": _channel(lem47, s)}, s
    )


def verify_pair(spec: WarpedProductSpec, f: LapseFunction) -> ResidualReport:
    """Static, harmonic and integrability channels in one report."""
    return (
        static_residual(spec, f)
        .merge(harmonic_residual(spec))
        .merge(integrability_residual(spec))
    )


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeLabel:
    """Classification outcome with the diagnostics that drove it."""

    label: str
    distinct_count: int
    multiplicities: tuple[int, ...]
    xi_product_sup: float
    d_sup: float
    detail: str

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "distinct_count": self.distinct_count,
            "multiplicities": list(self.multiplicities),
            "xi_product_sup": self.xi_product_sup,
            "d_sup": self.d_sup,
            "detail": self.detail,
        }


def _cluster_blocks(lam_blk: np.ndarray, threshold: float) -> list[list[int]]:
    """Group block indices whose eigenvalue profiles agree in sup norm."""
    B = lam_blk.shape[0]
    clusters: list[list[int]] = []
    for j in range(B):
        placed = False
        for cl in clusters:
            if all(np.max(np.abs(lam_blk[j] - lam_blk[i])) <= threshold for i in cl):
                cl.append(j)
                placed = True
                break
        if not placed:
            clusters.append([j])
    return clusters


def classify(
    spec: WarpedProductSpec,
    f: LapseFunction,
    tol: ToleranceProfile | None = None,
) -> TypeLabel:
    """Identify which structural family the verified pair (spec, f) is in.

    Flow: residual gate, then eigenvalue clustering, then per-count
    structure checks.  A failed gate or an unrecognized structure comes
    back as "Invalid" with the reason in `detail`; three or more distinct
    fiber eigenvalues with everything else consistent come back as
    "ViolatesThm42".
    """
    if tol is None:
        tol = tier_for(spec, f)
    s = spec.evaluation_grid()
    report = verify_pair(spec, f)

    d = ce.eigenvalue_derivatives(spec, s, order=0)
    lam1, lam_blk, scal, xi = d.lambda_1[0], d.lambda_block[0], d.scalar[0], d.xi[0]
    dims = [b.dim for b in spec.blocks]
    scale = max(float(np.max(np.abs(lam_blk))), float(np.max(np.abs(lam1))), 1e-12)
    thr = tol.distinct_rel * scale

    clusters = _cluster_blocks(lam_blk, thr)
    mults = tuple(sorted(sum(dims[j] for j in cl) for cl in clusters))
    m = len(clusters)

    xi_prod = 0.0
    for i, cl_i in enumerate(clusters):
        for cl_j in clusters[i + 1 :]:
            for a in cl_i:
                for b in cl_j:
                    xi_prod = max(xi_prod, float(np.max(np.abs(xi[a] * xi[b]))))
    d_sup = float(np.max(np.abs(ce.d_tensor_classes(spec, f, s).value_block)))

    def made(label: str, detail: str) -> TypeLabel:
        return TypeLabel(label, m, mults, xi_prod, d_sup, detail)

    gate = report.max_sup()
    if gate > tol.residual:
        worst = max(report.channels, key=lambda k: report.channels[k].sup)
        return made("Invalid", f"residual gate failed: {worst} sup {gate:.3e}")

    if m == 1:
        if float(np.max(np.abs(lam1 - lam_blk))) <= thr:
            return made("Einstein", "single eigenvalue shared with the interval direction")
        return made("DFlat_TypeI", "single fiber eigenvalue distinct from lambda_1")

    if m >= 3:
        return made("ViolatesThm42", "three or more distinct fiber eigenvalues")

    # Exactly two clusters: one must be non-warping.
    R = float(np.median(scal))
    const = [
        cl
        for cl in clusters
        if max(float(np.max(np.abs(xi[j]))) for j in cl) <= tol.structure
    ]
    if len(const) == 0:
        return made("Invalid", "two eigenvalue clusters but both warp")
    if len(const) == 2:
        return made("Invalid", "two eigenvalue clusters but neither warps")
    const_cl = const[0]
    warp_cl = clusters[0] if clusters[1] is const_cl else clusters[1]
    if len(warp_cl) != 1:
        return made("Invalid", "warping cluster spans several blocks")
    wb = spec.blocks[warp_cl[0]]
    lam_const = lam_blk[const_cl[0]]

    if wb.dim == 1:
        if float(np.max(np.abs(lam_const - R / (spec.n - 1.0)))) > thr:
            return made(
                "Invalid", "constant cluster eigenvalue is not R/(n-1)"
            )
        if R > tol.structure * scale:
            return made("TypeII", "one warped circle direction, R > 0")
        if R < -tol.structure * scale:
            return made("TypeIII", "one warped circle direction, R < 0")
        return made("Invalid", "one warped circle direction needs R != 0")

    # Warped block of dimension >= 2: fit the product-family equation
    # h'' + R/((n-1)(r1+1)) h = c0 h^(-r1) and its conserved quantity.
    r1 = wb.dim
    const_dim = sum(dims[j] for j in const_cl)
    if const_dim == 1 and abs(R) > tol.structure * scale:
        return made("Invalid", "line-type constant factor needs R = 0")
    c1 = R / ((spec.n - 1.0) * (r1 + 1.0))
    h = np.asarray(wb.warping.value(s), dtype=float)
    hp = np.asarray(wb.warping.derivative(s, 1), dtype=float)
    hpp = np.asarray(wb.warping.derivative(s, 2), dtype=float)
    c0_profile = (hpp + c1 * h) * h**r1
    c0 = float(np.median(c0_profile))
    if float(np.max(np.abs(c0_profile - c0))) > tol.structure * max(1.0, abs(c0)):
        return made("Invalid", "warped factor does not follow the product-family equation")
    k_profile = hp**2 + c1 * h**2
    if c0 != 0.0:
        k_profile = k_profile + 2.0 * c0 / (r1 - 1.0) * h ** (-(r1 - 1.0))
    k_med = float(np.median(k_profile))
    if float(np.max(np.abs(k_profile - k_med))) > tol.structure * max(1.0, abs(k_med)):
        return made("Invalid", "conserved quantity of the warped factor drifts")
    return made("TypeIV", "warped factor obeys the product-family equation")
