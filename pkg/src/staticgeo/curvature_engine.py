"""Curvature of multiply warped products in an adapted orthonormal frame.

For g = ds^2 + sum_j h_j(s)^2 g_j the frame is E_1 = d/ds together with
orthonormal directions along each fiber block.  Writing xi_j = h_j'/h_j,
everything collapses to a handful of s-dependent classes:

  connection        w_{1a} = xi_a w_a,  w_{a alpha} = 0 across blocks
  curvature         R_{1a1a} = -(xi_a' + xi_a^2) = -h_a''/h_a
                    R_{abab} = (k - h'^2)/h^2          same block, dim >= 2
                    R_{a alpha a alpha} = -xi_a xi_alpha   different blocks
  Ricci             lambda_1 = -sum_i (xi_i' + xi_i^2)
                    lambda_a = -xi_a' - xi_a sum_i xi_i + (dim-1) k / h^2
  trace-adjusted    A_ij = R_ij - R/(2(n-1)) delta_ij
  conformal         W_ijkl = R_ijkl - (A_ik d_jl + A_jl d_ik
                                       - A_il d_jk - A_jk d_il)/(n-2)

(sums over i run over all fiber directions with multiplicity).  The
intra-block class (k - h'^2)/h^2 is pinned by requiring that the frame
contraction sum_k R_{akak} reproduce lambda_a; a unit test enforces this.

Derivatives of the classes are computed with truncated Taylor jets, so
first and second derivatives of eigenvalue profiles are exact given the
warping's derivative tower (no finite differencing happens here).

Scalar s arguments or 1-d grids are both accepted; outputs carry the
grid axes last, block axes first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadRange,
    DerivativeOrderUnavailable,
    InsufficientFiberData,
    OutOfDomain,
)
from .jets import derivatives_from_jet, jconst, jder, jdiv, jet_of, jmul
from .warped_geometry import LapseFunction, WarpedProductSpec

__all__ = [
    "RicciSpectrum",
    "RiemannClasses",
    "DiagonalTwoTensor",
    "MixedThreeTensor",
    "SpectrumDerivatives",
    "xi_profile",
    "ricci_spectrum",
    "eigenvalue_derivatives",
    "d_tensor_derivatives",
    "scalar_profile",
    "riemann_classes",
    "schouten_spectrum",
    "weyl_classes",
    "cotton_classes",
    "cotton_from_weyl_divergence",
    "d_tensor_classes",
    "bach_spectrum",
    "materialize_full",
    "frame_connection",
    "dense_three_tensor_divergence",
    "dense_weyl_divergence",
]


@dataclass(frozen=True)
class RicciSpectrum:
    """Diagonal Ricci data: lambda_1, per-block lambda_a, scalar curvature."""

    lambda_1: np.ndarray
    lambda_block: np.ndarray
    scalar: np.ndarray


@dataclass(frozen=True)
class RiemannClasses:
    """Curvature-operator classes of a warped product (or its Weyl part).

    base_block[j]       component with index pattern (1, a, 1, a)
    intra_block[j]      pattern (a, b, a, b) inside block j (nan if dim 1)
    cross_block[i, j]   pattern (a, alpha, a, alpha) across blocks (nan diag)
    """

    base_block: np.ndarray
    intra_block: np.ndarray
    cross_block: np.ndarray


@dataclass(frozen=True)
class DiagonalTwoTensor:
    """Diagonal symmetric 2-tensor constant on blocks."""

    value_1: np.ndarray
    value_block: np.ndarray


@dataclass(frozen=True)
class MixedThreeTensor:
    """3-tensor whose only components follow the (a,1,a) = -(a,a,1) pattern."""

    value_block: np.ndarray


def _require_order(fn, order: int, what: str) -> None:
    if fn.derivative_order < order:
        raise DerivativeOrderUnavailable(
            f"{what} needs derivative order {order}, "
            f"but only {fn.derivative_order} is available"
        )


def _check_domain(spec: WarpedProductSpec, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    lo = spec.domain[0] + 2 * spec.step
    hi = spec.domain[1] - 2 * spec.step
    slack = 1e-9 * spec.step
    if np.any(s < lo - slack) or np.any(s > hi + slack):
        raise OutOfDomain(
            f"s outside margin-shrunk domain [{lo:g}, {hi:g}] of the spec"
        )
    return s


def _check_fiber_data(spec: WarpedProductSpec) -> None:
    for j, b in enumerate(spec.blocks):
        if b.model == "abstract_einstein" and b.dim >= 3:
            raise InsufficientFiberData(
                f"block {j} is an abstract Einstein fiber of dimension {b.dim}; "
                "full curvature output needs a space form (or dimension 2)"
            )


def _dims(spec: WarpedProductSpec, tail_ndim: int) -> np.ndarray:
    return np.array([b.dim for b in spec.blocks], dtype=float).reshape(
        (len(spec.blocks),) + (1,) * tail_ndim
    )


class _Frame:
    """Jet tower shared by the public operations.

    All jets are arrays of shape (order+1, B) + S with the jet axis first
    and the block axis second, so jet arithmetic broadcasts across blocks
    and evaluation points alike.
    """

    def __init__(self, spec: WarpedProductSpec, s, lam_order: int, what: str):
        s = _check_domain(spec, s)
        self.spec = spec
        self.s = s
        self.n = spec.n
        self.B = len(spec.blocks)
        horder = lam_order + 2
        for b in spec.blocks:
            _require_order(b.warping, horder, what)
        h = np.stack(
            [
                np.stack(
                    [
                        np.broadcast_to(
                            np.asarray(b.warping.derivative(s, d), dtype=float), s.shape
                        )
                        for b in spec.blocks
                    ],
                    axis=0,
                )
                / _fact(d)
                for d in range(horder + 1)
            ],
            axis=0,
        )
        dims = _dims(spec, s.ndim)
        ks = np.array([b.k for b in spec.blocks], dtype=float).reshape(dims.shape)

        self.h = h
        hp = jder(h)                                   # order: horder-1
        self.xi = jdiv(hp, h[:horder])                 # order: horder-1
        h2inv = jdiv(jconst(1.0, horder, like=h), jmul(h, h))
        self.trace = np.sum(dims * self.xi, axis=1)    # sum_i xi_i, mult-weighted
        xi_p = jder(self.xi)                           # order: horder-2 = lam_order
        lo = lam_order + 1
        xi_sq = jmul(self.xi, self.xi)
        # lambda_a = -xi' - xi * trace + (dim-1) k / h^2
        self.lam = (
            -xi_p[:lo]
            - jmul(self.xi, self.trace[:, None])[:lo]
            + (dims - 1.0) * ks * h2inv[:lo]
        )
        # lambda_1 = -sum_j r_j (xi_j' + xi_j^2)
        self.lam1 = -np.sum(dims * (xi_p[:lo] + xi_sq[:lo]), axis=1)
        self.scal = self.lam1 + np.sum(dims * self.lam, axis=1)
        # R_{1a1a} and friends
        self.m_class = -(xi_p[:lo] + xi_sq[:lo])
        p = jmul(ks * jconst(1.0, horder - 1, like=h) - jmul(hp, hp), h2inv)[:lo]
        p[:, np.array([b.dim for b in spec.blocks]) == 1] = np.nan
        self.p_class = p
        q = -jmul(self.xi[:, :, None], self.xi[:, None, :])[:lo]
        q[:, np.arange(self.B), np.arange(self.B)] = np.nan
        self.q_class = q
        # A_ij = R_ij - R/(2(n-1)) delta_ij
        shift = self.scal / (2.0 * (self.n - 1))
        self.A1 = self.lam1 - shift
        self.Ablk = self.lam - shift[:, None]
        self.dims = dims
        self.ks = ks

    def weyl_jets(self):
        nm2 = self.n - 2
        w_base = self.m_class - (self.A1[:, None] + self.Ablk) / nm2
        w_intra = self.p_class - 2.0 * self.Ablk / nm2
        w_cross = self.q_class - (self.Ablk[:, :, None] + self.Ablk[:, None, :]) / nm2
        return w_base, w_intra, w_cross

    def cotton_jets(self):
        # C_{a1a} = (A_11 - A_aa) xi_a - A_aa'
        prod = jmul(self.A1[:, None] - self.Ablk, self.xi)
        d_a = jder(self.Ablk)
        rows = min(prod.shape[0], d_a.shape[0])
        return prod[:rows] - d_a[:rows]


_FACTS = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0]


def _fact(d: int) -> float:
    return _FACTS[d]


# ---------------------------------------------------------------------------
# Pointwise class operations
# ---------------------------------------------------------------------------


def xi_profile(spec: WarpedProductSpec, s) -> np.ndarray:
    """Per-block xi_j = h_j'/h_j, shape (B,) + shape(s)."""
    s = _check_domain(spec, s)
    for b in spec.blocks:
        _require_order(b.warping, 1, "xi_profile")
    h = np.stack([np.broadcast_to(b.warping.value(s), s.shape) for b in spec.blocks])
    hp = np.stack(
        [np.broadcast_to(b.warping.derivative(s, 1), s.shape) for b in spec.blocks]
    )
    return hp / h


def ricci_spectrum(spec: WarpedProductSpec, s) -> RicciSpectrum:
    """Eigenvalues of the Ricci endomorphism in the adapted frame."""
    fr = _Frame(spec, s, 0, "ricci_spectrum")
    return RicciSpectrum(fr.lam1[0], fr.lam[0], fr.scal[0])


def scalar_profile(spec: WarpedProductSpec, s) -> np.ndarray:
    """Scalar curvature along the interval."""
    return ricci_spectrum(spec, s).scalar


@dataclass(frozen=True)
class SpectrumDerivatives:
    """Eigenvalue functions with their s-derivatives stacked on a leading axis.

    Row d holds the d-th derivative (true derivatives, not Taylor
    coefficients).  Shapes: lambda_1 and scalar (order+1,) + S,
    lambda_block and xi (order+1, B) + S.
    """

    lambda_1: np.ndarray
    lambda_block: np.ndarray
    scalar: np.ndarray
    xi: np.ndarray


def eigenvalue_derivatives(
    spec: WarpedProductSpec, s, order: int = 1
) -> SpectrumDerivatives:
    """Ricci eigenvalues, scalar curvature and xi with exact derivatives.

    Derivatives come from the warping's own derivative tower through jet
    arithmetic, so an order-1 request costs warping derivatives up to 3.
    """
    fr = _Frame(spec, s, order, "eigenvalue_derivatives")
    return SpectrumDerivatives(
        derivatives_from_jet(fr.lam1),
        derivatives_from_jet(fr.lam),
        derivatives_from_jet(fr.scal),
        derivatives_from_jet(fr.xi[: order + 1]),
    )


def d_tensor_derivatives(
    spec: WarpedProductSpec, f: LapseFunction, s, order: int = 1
) -> np.ndarray:
    """Obstruction classes D_{a1a} with derivatives, shape (order+1, B) + S."""
    _require_order(f, order + 1, "d_tensor_derivatives")
    fr = _Frame(spec, s, order, "d_tensor_derivatives")
    n = spec.n
    fp = jder(jet_of(f, fr.s, order + 1))
    combo = ((n - 1.0) * fr.lam - fr.scal[:, None] + fr.lam1[:, None]) / (n - 2.0)
    return derivatives_from_jet(jmul(fp[:, None], combo))


def riemann_classes(spec: WarpedProductSpec, s) -> RiemannClasses:
    """Sectional-curvature classes; intra-block entries need space forms."""
    _check_fiber_data(spec)
    fr = _Frame(spec, s, 0, "riemann_classes")
    return RiemannClasses(fr.m_class[0], fr.p_class[0], fr.q_class[0])


def schouten_spectrum(spec: WarpedProductSpec, s) -> DiagonalTwoTensor:
    """Diagonal of A_ij = R_ij - R/(2(n-1)) delta_ij."""
    fr = _Frame(spec, s, 0, "schouten_spectrum")
    return DiagonalTwoTensor(fr.A1[0], fr.Ablk[0])


def weyl_classes(spec: WarpedProductSpec, s) -> RiemannClasses:
    """Conformal curvature classes (same index patterns as the Riemann part)."""
    _check_fiber_data(spec)
    fr = _Frame(spec, s, 0, "weyl_classes")
    w_base, w_intra, w_cross = fr.weyl_jets()
    return RiemannClasses(w_base[0], w_intra[0], w_cross[0])


def cotton_classes(spec: WarpedProductSpec, f, s) -> MixedThreeTensor:
    """C_{a1a} per block.  The lapse is accepted for signature parity with
    the other verification-facing operations; the value is metric-only."""
    del f
    fr = _Frame(spec, s, 1, "cotton_classes")
    return MixedThreeTensor(fr.cotton_jets()[0])


def d_tensor_classes(spec: WarpedProductSpec, f: LapseFunction, s) -> MixedThreeTensor:
    """Obstruction 3-tensor classes for the pair (spec, f).

    D_{a1a} = f' [ (n-1) lambda_a - R + lambda_1 ] / (n-2); antisymmetric
    in its last two slots, zero elsewhere, like the Cotton classes.
    """
    _require_order(f, 1, "d_tensor_classes")
    fr = _Frame(spec, s, 0, "d_tensor_classes")
    fp = np.asarray(f.derivative(fr.s, 1), dtype=float)
    n = spec.n
    combo = ((n - 1.0) * fr.lam[0] - fr.scal[0][None] + fr.lam1[0][None]) / (n - 2.0)
    return MixedThreeTensor(fp[None] * combo)


def bach_spectrum(spec: WarpedProductSpec, f, s) -> DiagonalTwoTensor:
    """Diagonal Bach values B_11 and B_aa per block (metric-only).

    B_ij = (C_ijk,k + R_kl W_ikjl)/(n-2); the divergence is taken in the
    adapted frame, where only w_{1a} = xi_a w_a contributes for
    block-constant component functions.
    """
    del f
    _check_fiber_data(spec)
    fr = _Frame(spec, s, 2, "bach_spectrum")
    nm2 = spec.n - 2.0
    dims = fr.dims
    c = fr.cotton_jets()           # jet order 1
    w_base, w_intra, w_cross = fr.weyl_jets()
    xi0 = fr.xi[0]
    lam0 = fr.lam[0]
    lam1 = fr.lam1[0]
    tr0 = fr.trace[0]

    # (div C)_11 = -sum_j r_j c_j xi_j ; contraction with Ricci adds
    # sum_j r_j lambda_j W_{1a1a}.
    div_c_11 = -np.sum(dims * c[0] * xi0, axis=0)
    ric_w_11 = np.sum(dims * lam0 * w_base[0], axis=0)
    b_11 = (div_c_11 + ric_w_11) / nm2

    # (div C)_aa = -c_a' - c_a (sum_i xi_i - xi_a); the Ricci contraction
    # collects the base, intra-block and cross-block conformal classes.
    c_prime = jder(c)[0]
    div_c_aa = -c_prime - c[0] * (tr0[None] - xi0)
    w_intra0 = np.where(np.isnan(w_intra[0]), 0.0, w_intra[0])
    w_cross0 = np.where(np.isnan(w_cross[0]), 0.0, w_cross[0])
    ric_w_aa = (
        lam1[None] * w_base[0]
        + (dims - 1.0) * lam0 * w_intra0
        + np.sum((dims * lam0)[None, ...] * w_cross0, axis=1)
    )
    b_aa = (div_c_aa + ric_w_aa) / nm2
    return DiagonalTwoTensor(b_11, b_aa)


def cotton_from_weyl_divergence(spec: WarpedProductSpec, f, s) -> MixedThreeTensor:
    """Cotton classes recovered from -(n-2)/(n-3) * div W (first slot).

    Independent route used to cross-check cotton_classes; needs n >= 4
    and space-form fibers.  Evaluated densely so that index bookkeeping
    errors cannot hide in the class collapse.
    """
    del f
    if spec.n < 4:
        raise BadRange(f"Weyl-divergence route needs n >= 4, got n={spec.n}")
    _check_fiber_data(spec)
    fr = _Frame(spec, s, 1, "cotton_from_weyl_divergence")
    w_base, w_intra, w_cross = fr.weyl_jets()
    w_now = RiemannClasses(w_base[0], w_intra[0], w_cross[0])
    w_dot = RiemannClasses(*(jder(j)[0] for j in (w_base, w_intra, w_cross)))
    W = materialize_full(w_now, spec)
    Wp = materialize_full(w_dot, spec)
    G = frame_connection(spec, fr.s)
    div = dense_weyl_divergence(W, Wp, G)
    dense_c = -(spec.n - 2.0) / (spec.n - 3.0) * div
    offs = spec.block_offsets()
    vals = np.stack([dense_c[..., a, 0, a] for a in offs], axis=0)
    return MixedThreeTensor(vals)


# ---------------------------------------------------------------------------
# Dense materialization and frame tensor calculus
# ---------------------------------------------------------------------------


def _block_of_index(spec: WarpedProductSpec) -> np.ndarray:
    """Map frame index -> block id (-1 for the interval direction)."""
    owner = np.full(spec.n, -1, dtype=int)
    for j, (off, b) in enumerate(zip(spec.block_offsets(), spec.blocks)):
        owner[off : off + b.dim] = j
    return owner


def materialize_full(classes, spec: WarpedProductSpec, s=None) -> np.ndarray:
    """Expand collapsed classes into a dense frame tensor.

    RiemannClasses -> (..., n, n, n, n) with all pair symmetries;
    DiagonalTwoTensor / RicciSpectrum -> (..., n, n);
    MixedThreeTensor -> (..., n, n, n).
    Grid axes of the class arrays come first in the output.
    """
    del s
    n = spec.n
    owner = _block_of_index(spec)
    if isinstance(classes, RiemannClasses):
        _check_fiber_data(spec)
        tail = classes.base_block.shape[1:]
        out = np.zeros(tail + (n, n, n, n))
        for i in range(n):
            for j in range(i + 1, n):
                if i == 0:
                    val = classes.base_block[owner[j]]
                elif owner[i] == owner[j]:
                    val = classes.intra_block[owner[i]]
                else:
                    val = classes.cross_block[owner[i], owner[j]]
                out[..., i, j, i, j] = val
                out[..., j, i, j, i] = val
                out[..., i, j, j, i] = -val
                out[..., j, i, i, j] = -val
        return out
    if isinstance(classes, (DiagonalTwoTensor, RicciSpectrum)):
        if isinstance(classes, RicciSpectrum):
            v1, vb = classes.lambda_1, classes.lambda_block
        else:
            v1, vb = classes.value_1, classes.value_block
        tail = vb.shape[1:]
        out = np.zeros(tail + (n, n))
        out[..., 0, 0] = v1
        for a in range(1, n):
            out[..., a, a] = vb[owner[a]]
        return out
    if isinstance(classes, MixedThreeTensor):
        vb = classes.value_block
        tail = vb.shape[1:]
        out = np.zeros(tail + (n, n, n))
        for a in range(1, n):
            out[..., a, 0, a] = vb[owner[a]]
            out[..., a, a, 0] = -vb[owner[a]]
        return out
    raise TypeError(f"cannot materialize {type(classes).__name__}")


def frame_connection(spec: WarpedProductSpec, s) -> np.ndarray:
    """Connection coefficients G[..., m, i, l] with w_{mi} = G[m,i,l] w_l.

    Only the w_{1a} = xi_a w_a classes appear; fiber-internal forms drop
    out of every covariant derivative of block-constant tensors, which is
    validated against dense oracles in the test suite.
    """
    s = _check_domain(spec, s)
    xi = xi_profile(spec, s)
    n = spec.n
    owner = _block_of_index(spec)
    out = np.zeros(s.shape + (n, n, n))
    for a in range(1, n):
        out[..., 0, a, a] = xi[owner[a]]
        out[..., a, 0, a] = -xi[owner[a]]
    return out


def dense_three_tensor_divergence(
    C: np.ndarray, C_prime: np.ndarray, G: np.ndarray
) -> np.ndarray:
    """(div C)_ij = C_ijk,k for a frame 3-tensor with s-dependent components.

    C_prime is the plain s-derivative of the components; G comes from
    frame_connection.
    """
    div = C_prime[..., 0].copy()
    div += np.einsum("...mjk,...mik->...ij", C, G)
    div += np.einsum("...imk,...mjk->...ij", C, G)
    div += np.einsum("...ijm,...mkk->...ij", C, G)
    return div


def dense_weyl_divergence(
    W: np.ndarray, W_prime: np.ndarray, G: np.ndarray
) -> np.ndarray:
    """(div W)_ijk = W_lijk,l contracted over the first slot."""
    tr = np.einsum("...pll->...p", G)
    div = W_prime[..., 0, :, :, :].copy()
    div += np.einsum("...pijk,...p->...ijk", W, tr)
    div += np.einsum("...lpjk,...pil->...ijk", W, G)
    div += np.einsum("...lipk,...pjl->...ijk", W, G)
    div += np.einsum("...lijp,...pkl->...ijk", W, G)
    return div
