"""Independent oracles used by the test suite.

Two layers, deliberately built with different machinery than the package:

1. A coordinate-level computation (sympy) of curvature for a doubly
   warped 4-metric, straight from Christoffel symbols.  No frames, no
   classes: plain coordinate tensors, normalized to the orthonormal
   frame only at the very end.

2. Dense index-loop evaluations of the tensor-tower formulas (Schouten,
   Weyl, Cotton, the obstruction 3-tensor, Bach, contracted Bianchi)
   written with explicit Python loops and Kronecker deltas.  The package
   uses einsum and collapsed classes; these loops share none of that.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy as sp

from staticgeo.profiles import (
    ANALYTIC_ORDER,
    HyperbolicProfile,
    PolynomialProfile,
    SumProfile,
    TrigProfile,
)
from staticgeo.warped_geometry import (
    FiberBlock,
    LapseFunction,
    WarpedProductSpec,
    WarpingFunction,
)

# ---------------------------------------------------------------------------
# Layer 1: coordinate curvature of ds^2 + h1^2 (dth^2 + sin^2 th dph^2) + h2^2 dy^2
# ---------------------------------------------------------------------------

COORD_H1 = "2 + sin(s)/2"
COORD_H2 = "1 + s**2/8"
COORD_F = "1 + s/3"


def reference_spec(n: int, grid_points: int = 64) -> WarpedProductSpec:
    """Analytic comparison spec at n = 4 or 5.

    Block 0 is a 2-sphere warped by COORD_H1 and block 1 a line warped by
    COORD_H2, matching the coordinate model above; n = 5 appends a second
    line with an independent hyperbolic warping so cross-block components
    vary.
    """
    h1 = WarpingFunction(
        "custom", (), ANALYTIC_ORDER,
        SumProfile(PolynomialProfile((2.0,)), TrigProfile(a_sin=0.5, omega=1.0)),
    )
    h2 = WarpingFunction(
        "custom", (), ANALYTIC_ORDER, PolynomialProfile((1.0, 0.0, 0.125))
    )
    blocks = [FiberBlock(2, h1, "space_form", 1.0), FiberBlock(1, h2)]
    if n == 5:
        h3 = WarpingFunction(
            "custom", (), ANALYTIC_ORDER, HyperbolicProfile(a_cosh=1.5, omega=0.5)
        )
        blocks.append(FiberBlock(1, h3))
    elif n != 4:
        raise ValueError(f"reference spec exists for n in (4, 5), not {n}")
    return WarpedProductSpec(tuple(blocks), domain=(0.2, 1.6), grid_points=grid_points)


def reference_lapse() -> LapseFunction:
    """The lapse COORD_F as a package object."""
    return LapseFunction(
        "poly", (1.0, 1.0 / 3.0), ANALYTIC_ORDER, PolynomialProfile((1.0, 1.0 / 3.0))
    )


@lru_cache(maxsize=1)
def coordinate_model():
    """Symbolic curvature of the reference 4-metric, lambdified.

    Returns a dict of callables of (s, th): metric diagonal, lowered
    Riemann, Ricci, scalar curvature and lowered Cotton, each returned
    as dense numpy arrays.  Index order: x0 = s, x1 = th, x2 = ph,
    x3 = y.
    """
    s, th = sp.symbols("s th", positive=True)
    h1 = sp.sympify(COORD_H1, locals={"s": s})
    h2 = sp.sympify(COORD_H2, locals={"s": s})
    x = (s, th, sp.Symbol("ph"), sp.Symbol("y"))
    n = 4
    g = sp.zeros(n, n)
    g[0, 0] = sp.Integer(1)
    g[1, 1] = h1**2
    g[2, 2] = h1**2 * sp.sin(th) ** 2
    g[3, 3] = h2**2
    ginv = sp.diag(*[1 / g[i, i] for i in range(n)])

    # Christoffel symbols of the second kind.
    gamma = [[[sp.Integer(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                term = sp.Integer(0)
                for d in range(n):
                    term += ginv[a, d] * (
                        sp.diff(g[d, b], x[c])
                        + sp.diff(g[d, c], x[b])
                        - sp.diff(g[b, c], x[d])
                    )
                gamma[a][b][c] = sp.together(term / 2)

    # R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
    #            + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
    riem_up = [[[[sp.Integer(0)] * n for _ in range(n)] for _ in range(n)]
               for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    term = sp.diff(gamma[a][d][b], x[c]) - sp.diff(
                        gamma[a][c][b], x[d]
                    )
                    for e in range(n):
                        term += (
                            gamma[a][c][e] * gamma[e][d][b]
                            - gamma[a][d][e] * gamma[e][c][b]
                        )
                    riem_up[a][b][c][d] = term

    riem = [[[[sp.together(g[a, a] * riem_up[a][b][c][d]) for d in range(n)]
              for c in range(n)] for b in range(n)] for a in range(n)]

    ric = sp.zeros(n, n)
    for b in range(n):
        for d in range(n):
            term = sp.Integer(0)
            for a in range(n):
                term += riem_up[a][b][a][d]
            ric[b, d] = sp.together(term)

    scal = sp.together(
        sum(ginv[i, i] * ric[i, i] for i in range(n))
    )

    # Cotton from covariant derivatives of the trace-adjusted Ricci.
    A = ric - scal / (2 * (n - 1)) * g
    nabla_A = [[[sp.Integer(0)] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                term = sp.diff(A[i, j], x[k])
                for m in range(n):
                    term -= gamma[m][k][i] * A[m, j] + gamma[m][k][j] * A[i, m]
                nabla_A[k][i][j] = term
    cotton = [[[sp.together(nabla_A[k][i][j] - nabla_A[j][i][k])
                for k in range(n)] for j in range(n)] for i in range(n)]

    def pack(expr_nested, shape):
        flat = []

        def rec(node):
            if isinstance(node, (list, tuple)):
                for sub in node:
                    rec(sub)
            else:
                flat.append(node)

        rec(expr_nested)
        fns = [sp.lambdify((s, th), e, "numpy") for e in flat]

        def call(sv, tv):
            vals = np.array([float(fn(sv, tv)) for fn in fns])
            return vals.reshape(shape)

        return call

    g_list = [g[i, i] for i in range(n)]
    ric_list = [[ric[i, j] for j in range(n)] for i in range(n)]
    return {
        "metric_diag": pack(g_list, (n,)),
        "riemann": pack(riem, (n, n, n, n)),
        "ricci": pack(ric_list, (n, n)),
        "scalar": pack([scal], (1,)),
        "cotton": pack(cotton, (n, n, n)),
    }


def frame_normalize(coord_tensor: np.ndarray, metric_diag: np.ndarray) -> np.ndarray:
    """Divide each index slot by sqrt(g_ii): orthonormal-frame components."""
    out = np.array(coord_tensor, dtype=float)
    root = np.sqrt(metric_diag)
    rank = out.ndim
    for axis in range(rank):
        shape = [1] * rank
        shape[axis] = len(root)
        out = out / root.reshape(shape)
    return out


# ---------------------------------------------------------------------------
# Layer 2: dense index-loop formula oracles (frame components)
# ---------------------------------------------------------------------------


def loop_schouten(ric: np.ndarray, scal: float, n: int) -> np.ndarray:
    """A_ij = R_ij - R/(2(n-1)) delta_ij, explicit loops."""
    A = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            A[i, j] = ric[i, j] - (scal / (2.0 * (n - 1.0)) if i == j else 0.0)
    return A


def loop_weyl(riem: np.ndarray, A: np.ndarray, n: int) -> np.ndarray:
    """W from the Riemann tensor and Schouten tensor, explicit loops."""
    W = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    combo = (
                        A[i, k] * (1.0 if j == l else 0.0)
                        + A[j, l] * (1.0 if i == k else 0.0)
                        - A[i, l] * (1.0 if j == k else 0.0)
                        - A[j, k] * (1.0 if i == l else 0.0)
                    )
                    W[i, j, k, l] = riem[i, j, k, l] - combo / (n - 2.0)
    return W


def loop_grad_three(T: np.ndarray, T_prime: np.ndarray, G: np.ndarray) -> np.ndarray:
    """(nabla_k T)_ij for a frame 2-tensor depending only on s; loops."""
    n = T.shape[0]
    out = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                acc = T_prime[i, j] if k == 0 else 0.0
                for m in range(n):
                    acc += G[m, i, k] * T[m, j] + G[m, j, k] * T[i, m]
                out[i, j, k] = acc
    return out


def loop_cotton(A: np.ndarray, A_prime: np.ndarray, G: np.ndarray) -> np.ndarray:
    """C_ijk = A_ij,k - A_ik,j from covariant derivative loops."""
    nabla = loop_grad_three(A, A_prime, G)
    n = A.shape[0]
    C = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                C[i, j, k] = nabla[i, j, k] - nabla[i, k, j]
    return C


def loop_d_tensor(ric: np.ndarray, scal: float, grad_f: np.ndarray, n: int) -> np.ndarray:
    """Obstruction 3-tensor from Ricci, scalar and the lapse gradient."""
    D = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                val = (n - 1.0) / (n - 2.0) * (
                    ric[i, k] * grad_f[j] - ric[i, j] * grad_f[k]
                )
                val += scal / (n - 2.0) * (
                    grad_f[k] * (1.0 if i == j else 0.0)
                    - grad_f[j] * (1.0 if i == k else 0.0)
                )
                contraction = 0.0
                for l in range(n):
                    contraction += grad_f[l] * (
                        ric[l, j] * (1.0 if i == k else 0.0)
                        - ric[l, k] * (1.0 if i == j else 0.0)
                    )
                D[i, j, k] = val + contraction / (n - 2.0)
    return D


def loop_three_divergence(
    T: np.ndarray, T_prime: np.ndarray, G: np.ndarray
) -> np.ndarray:
    """(div T)_ij = T_ijk,k over the last slot, explicit loops."""
    n = T.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            acc = T_prime[i, j, 0]
            for k in range(n):
                for m in range(n):
                    acc += (
                        G[m, i, k] * T[m, j, k]
                        + G[m, j, k] * T[i, m, k]
                        + G[m, k, k] * T[i, j, m]
                    )
            out[i, j] = acc
    return out


def loop_bach(
    cotton: np.ndarray,
    cotton_prime: np.ndarray,
    ric: np.ndarray,
    weyl: np.ndarray,
    G: np.ndarray,
    n: int,
) -> np.ndarray:
    """B_ij = (C_ijk,k + R_kl W_ikjl)/(n-2), explicit loops."""
    div_c = loop_three_divergence(cotton, cotton_prime, G)
    B = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            acc = div_c[i, j]
            for k in range(n):
                for l in range(n):
                    acc += ric[k, l] * weyl[i, k, j, l]
            B[i, j] = acc / (n - 2.0)
    return B


def loop_div_ricci(
    ric: np.ndarray, ric_prime: np.ndarray, G: np.ndarray
) -> np.ndarray:
    """(div Ric)_i = R_ji,j, explicit loops (for the contracted Bianchi check)."""
    n = ric.shape[0]
    out = np.zeros(n)
    for i in range(n):
        acc = ric_prime[0, i]
        for j in range(n):
            for m in range(n):
                acc += G[m, j, j] * ric[m, i] + G[m, i, j] * ric[j, m]
        out[i] = acc
    return out
