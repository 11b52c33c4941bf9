"""Curvature operations against two independent oracle layers.

Layer 1 (sympy): coordinate-level curvature of a doubly warped 4-metric,
computed from Christoffel symbols with no frame shortcuts; the engine's
collapsed classes must reproduce it after frame normalization.

Layer 2 (index loops): the tensor-tower formulas evaluated densely with
explicit Python loops, fed by the engine's already-validated Riemann and
Ricci output.
"""

import numpy as np
import pytest

import staticgeo.curvature_engine as ce
from staticgeo.errors import (
    BadRange,
    DerivativeOrderUnavailable,
    InsufficientFiberData,
    OutOfDomain,
)
from staticgeo.profiles import PolynomialProfile, SampledProfile
from staticgeo.warped_geometry import (
    FiberBlock,
    WarpedProductSpec,
    WarpingFunction,
    make_analytic_warping,
    make_lapse,
)

from oracle_tools import (
    coordinate_model,
    frame_normalize,
    loop_bach,
    loop_cotton,
    loop_d_tensor,
    loop_div_ricci,
    loop_schouten,
    loop_three_divergence,
    loop_weyl,
    reference_lapse,
    reference_spec,
)

SAMPLE_POINTS = np.array([0.37, 0.9, 1.41])
TH = 1.1


def dense_ricci(spec, s):
    return ce.materialize_full(ce.ricci_spectrum(spec, s), spec)


def schouten_prime(spec, s):
    """Exact s-derivative of the dense Schouten tensor."""
    n = spec.n
    d = ce.eigenvalue_derivatives(spec, s, order=1)
    shift = d.scalar[1] / (2.0 * (n - 1.0))
    diag = ce.DiagonalTwoTensor(d.lambda_1[1] - shift, d.lambda_block[1] - shift)
    return ce.materialize_full(diag, spec)


# ---------------------------------------------------------------------------
# Layer 1: coordinate oracle
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def model():
    return coordinate_model()


@pytest.fixture(scope="module")
def spec4():
    return reference_spec(4)


@pytest.fixture(scope="module")
def spec5():
    return reference_spec(5)


class TestCoordinateOracle:
    def test_metric_diagonal_matches(self, model, spec4):
        for sv in SAMPLE_POINTS:
            md = model["metric_diag"](sv, TH)
            h1 = spec4.blocks[0].warping.value(sv)
            h2 = spec4.blocks[1].warping.value(sv)
            np.testing.assert_allclose(
                md, [1.0, h1**2, h1**2 * np.sin(TH) ** 2, h2**2], rtol=1e-14
            )

    def test_ricci_spectrum_matches_coordinates(self, model, spec4):
        r = ce.ricci_spectrum(spec4, SAMPLE_POINTS)
        for i, sv in enumerate(SAMPLE_POINTS):
            md = model["metric_diag"](sv, TH)
            ric = frame_normalize(model["ricci"](sv, TH), md)
            off = ric - np.diag(np.diag(ric))
            assert np.max(np.abs(off)) < 1e-12
            assert abs(r.lambda_1[i] - ric[0, 0]) < 1e-12
            assert abs(r.lambda_block[0, i] - ric[1, 1]) < 1e-12
            assert abs(r.lambda_block[0, i] - ric[2, 2]) < 1e-12
            assert abs(r.lambda_block[1, i] - ric[3, 3]) < 1e-12

    def test_scalar_matches_coordinates(self, model, spec4):
        scal = ce.scalar_profile(spec4, SAMPLE_POINTS)
        for i, sv in enumerate(SAMPLE_POINTS):
            assert abs(scal[i] - model["scalar"](sv, TH)) < 1e-12

    def test_riemann_dense_matches_coordinates(self, model, spec4):
        riem = ce.materialize_full(ce.riemann_classes(spec4, SAMPLE_POINTS), spec4)
        for i, sv in enumerate(SAMPLE_POINTS):
            md = model["metric_diag"](sv, TH)
            expected = frame_normalize(model["riemann"](sv, TH), md)
            assert np.max(np.abs(riem[i] - expected)) < 1e-12

    def test_schouten_matches_coordinates(self, model, spec4):
        A = ce.materialize_full(ce.schouten_spectrum(spec4, SAMPLE_POINTS), spec4)
        for i, sv in enumerate(SAMPLE_POINTS):
            md = model["metric_diag"](sv, TH)
            ric = frame_normalize(model["ricci"](sv, TH), md)
            expected = ric - model["scalar"](sv, TH) / 6.0 * np.eye(4)
            assert np.max(np.abs(A[i] - expected)) < 1e-12

    def test_cotton_matches_coordinates(self, model, spec4):
        f = reference_lapse()
        C = ce.materialize_full(ce.cotton_classes(spec4, f, SAMPLE_POINTS), spec4)
        for i, sv in enumerate(SAMPLE_POINTS):
            md = model["metric_diag"](sv, TH)
            expected = frame_normalize(model["cotton"](sv, TH), md)
            assert np.max(np.abs(C[i] - expected)) < 1e-12
        # The comparison must not be vacuous.
        assert np.max(np.abs(C)) > 1e-3


# ---------------------------------------------------------------------------
# Layer 2: index-loop oracles at n = 4 and n = 5
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module", params=[4, 5])
def loop_setup(request):
    """Dense engine quantities at a few points, for the loop comparisons."""
    n = request.param
    spec = reference_spec(n)
    f = reference_lapse()
    s = SAMPLE_POINTS
    der = ce.eigenvalue_derivatives(spec, s, order=1)
    return {
        "n": n,
        "spec": spec,
        "f": f,
        "s": s,
        "ric": dense_ricci(spec, s),
        "scal": der.scalar[0],
        "riem": ce.materialize_full(ce.riemann_classes(spec, s), spec),
        "A": ce.materialize_full(ce.schouten_spectrum(spec, s), spec),
        "A_prime": schouten_prime(spec, s),
        "W": ce.materialize_full(ce.weyl_classes(spec, s), spec),
        "C": ce.materialize_full(ce.cotton_classes(spec, f, s), spec),
        "D": ce.materialize_full(ce.d_tensor_classes(spec, f, s), spec),
        "B": ce.materialize_full(ce.bach_spectrum(spec, f, s), spec),
        "G": ce.frame_connection(spec, s),
        "der": der,
    }


class TestLoopOracles:
    def test_schouten_loops(self, loop_setup):
        st = loop_setup
        for i in range(len(st["s"])):
            expected = loop_schouten(st["ric"][i], st["scal"][i], st["n"])
            assert np.max(np.abs(st["A"][i] - expected)) < 1e-12

    def test_weyl_loops(self, loop_setup):
        st = loop_setup
        for i in range(len(st["s"])):
            expected = loop_weyl(st["riem"][i], st["A"][i], st["n"])
            assert np.max(np.abs(st["W"][i] - expected)) < 1e-12

    def test_cotton_loops(self, loop_setup):
        st = loop_setup
        for i in range(len(st["s"])):
            expected = loop_cotton(st["A"][i], st["A_prime"][i], st["G"][i])
            assert np.max(np.abs(st["C"][i] - expected)) < 1e-12

    def test_d_tensor_loops(self, loop_setup):
        st = loop_setup
        fp = st["f"].derivative(st["s"], 1)
        for i in range(len(st["s"])):
            grad_f = np.zeros(st["n"])
            grad_f[0] = fp[i]
            expected = loop_d_tensor(st["ric"][i], st["scal"][i], grad_f, st["n"])
            assert np.max(np.abs(st["D"][i] - expected)) < 1e-12

    def test_bach_loops_with_fd_cotton(self, loop_setup):
        st = loop_setup
        spec, f = st["spec"], st["f"]
        delta = 1e-5
        for i, sv in enumerate(st["s"]):
            up = ce.materialize_full(
                ce.cotton_classes(spec, f, np.array([sv + delta])), spec
            )[0]
            dn = ce.materialize_full(
                ce.cotton_classes(spec, f, np.array([sv - delta])), spec
            )[0]
            c_prime = (up - dn) / (2.0 * delta)
            expected = loop_bach(
                st["C"][i], c_prime, st["ric"][i], st["W"][i], st["G"][i], st["n"]
            )
            assert np.max(np.abs(st["B"][i] - expected)) < 1e-8

    def test_three_divergence_loops(self, loop_setup):
        st = loop_setup
        spec, f = st["spec"], st["f"]
        d_der = ce.d_tensor_derivatives(spec, f, st["s"], order=1)
        Dp = ce.materialize_full(ce.MixedThreeTensor(d_der[1]), spec)
        div_engine = ce.dense_three_tensor_divergence(st["D"], Dp, st["G"])
        for i in range(len(st["s"])):
            expected = loop_three_divergence(st["D"][i], Dp[i], st["G"][i])
            assert np.max(np.abs(div_engine[i] - expected)) < 1e-12

    def test_contracted_bianchi_loops(self, loop_setup):
        # div Ric = dR/2, with exact eigenvalue derivatives feeding the loop.
        st = loop_setup
        der = st["der"]
        diag_prime = ce.DiagonalTwoTensor(der.lambda_1[1], der.lambda_block[1])
        ric_prime = ce.materialize_full(diag_prime, st["spec"])
        for i in range(len(st["s"])):
            div = loop_div_ricci(st["ric"][i], ric_prime[i], st["G"][i])
            target = np.zeros(st["n"])
            target[0] = der.scalar[1][i] / 2.0
            assert np.max(np.abs(div - target)) < 1e-12

    def test_cotton_against_weyl_divergence_route(self, loop_setup):
        st = loop_setup
        direct = ce.cotton_classes(st["spec"], st["f"], st["s"]).value_block
        recovered = ce.cotton_from_weyl_divergence(
            st["spec"], st["f"], st["s"]
        ).value_block
        assert np.max(np.abs(direct - recovered)) < 1e-8


# ---------------------------------------------------------------------------
# Structure of the dense materialization
# ---------------------------------------------------------------------------


class TestDenseStructure:
    def test_riemann_contracts_to_ricci(self, spec5):
        riem = ce.materialize_full(ce.riemann_classes(spec5, SAMPLE_POINTS), spec5)
        ric = np.einsum("...ikjk->...ij", riem)
        expected = dense_ricci(spec5, SAMPLE_POINTS)
        assert np.max(np.abs(ric - expected)) < 1e-12

    def test_first_bianchi_exact(self, spec5):
        riem = ce.materialize_full(ce.riemann_classes(spec5, SAMPLE_POINTS), spec5)
        cyc = (
            riem
            + np.transpose(riem, (0, 1, 3, 4, 2))
            + np.transpose(riem, (0, 1, 4, 2, 3))
        )
        assert np.all(cyc == 0.0)

    def test_riemann_pair_symmetries(self, spec5):
        riem = ce.materialize_full(ce.riemann_classes(spec5, SAMPLE_POINTS), spec5)
        assert np.all(riem == np.transpose(riem, (0, 3, 4, 1, 2)))
        assert np.all(riem == -np.transpose(riem, (0, 2, 1, 3, 4)))
        assert np.all(riem == -np.transpose(riem, (0, 1, 2, 4, 3)))

    def test_weyl_traces_vanish(self, spec5):
        W = ce.materialize_full(ce.weyl_classes(spec5, SAMPLE_POINTS), spec5)
        assert np.max(np.abs(np.einsum("...ijik->...jk", W))) < 1e-12
        assert np.max(np.abs(np.einsum("...ijki->...jk", W))) < 1e-12
        assert np.max(np.abs(np.einsum("...iijk->...jk", W))) < 1e-12

    def test_mixed_tensor_sparsity(self, spec5):
        f = reference_lapse()
        vals = ce.d_tensor_classes(spec5, f, SAMPLE_POINTS)
        D = ce.materialize_full(vals, spec5)
        offs = spec5.block_offsets()
        mask = np.zeros(D.shape[1:], dtype=bool)
        for j, b in enumerate(spec5.blocks):
            for a in range(offs[j], offs[j] + b.dim):
                mask[a, 0, a] = mask[a, a, 0] = True
                np.testing.assert_allclose(D[:, a, 0, a], vals.value_block[j])
                np.testing.assert_allclose(D[:, a, a, 0], -vals.value_block[j])
        assert np.all(D[:, ~mask] == 0.0)

    def test_xi_profile_closed_form(self, spec5):
        xi = ce.xi_profile(spec5, SAMPLE_POINTS)
        s = SAMPLE_POINTS
        np.testing.assert_allclose(
            xi[0], 0.5 * np.cos(s) / (2.0 + 0.5 * np.sin(s)), atol=1e-14
        )
        np.testing.assert_allclose(xi[1], 0.25 * s / (1.0 + s**2 / 8.0), atol=1e-14)
        np.testing.assert_allclose(xi[2], 0.5 * np.tanh(0.5 * s), atol=1e-14)

    def test_eigenvalue_derivatives_match_fd(self, spec5):
        der = ce.eigenvalue_derivatives(spec5, SAMPLE_POINTS, order=1)
        delta = 1e-6
        up = ce.ricci_spectrum(spec5, SAMPLE_POINTS + delta)
        dn = ce.ricci_spectrum(spec5, SAMPLE_POINTS - delta)
        np.testing.assert_allclose(
            der.lambda_1[1], (up.lambda_1 - dn.lambda_1) / (2 * delta), atol=1e-7
        )
        np.testing.assert_allclose(
            der.lambda_block[1],
            (up.lambda_block - dn.lambda_block) / (2 * delta),
            atol=1e-7,
        )
        np.testing.assert_allclose(
            der.scalar[1], (up.scalar - dn.scalar) / (2 * delta), atol=1e-7
        )

    def test_d_tensor_derivatives_match_fd(self, spec5):
        f = reference_lapse()
        der = ce.d_tensor_derivatives(spec5, f, SAMPLE_POINTS, order=1)
        delta = 1e-6
        up = ce.d_tensor_classes(spec5, f, SAMPLE_POINTS + delta).value_block
        dn = ce.d_tensor_classes(spec5, f, SAMPLE_POINTS - delta).value_block
        np.testing.assert_allclose(der[0], up / 2 + dn / 2, atol=1e-10)
        np.testing.assert_allclose(der[1], (up - dn) / (2 * delta), atol=1e-7)

    def test_sampled_warping_feeds_the_engine(self):
        # The same geometry through a sampled profile stays close to the
        # analytic route.
        analytic = reference_spec(4)
        grid = np.linspace(-0.5, 2.3, 561)
        step = grid[1] - grid[0]
        h1_prof = analytic.blocks[0].warping
        h1 = SampledProfile(grid[0], step, h1_prof.value(grid))
        h2 = SampledProfile(grid[0], step, analytic.blocks[1].warping.value(grid))
        sampled_spec = WarpedProductSpec(
            blocks=(
                FiberBlock(2, WarpingFunction("sampled", (), 4, h1),
                           "space_form", 1.0),
                FiberBlock(1, WarpingFunction("sampled", (), 4, h2)),
            ),
            domain=analytic.domain,
            grid_points=64,
        )
        got = ce.ricci_spectrum(sampled_spec, SAMPLE_POINTS)
        want = ce.ricci_spectrum(analytic, SAMPLE_POINTS)
        np.testing.assert_allclose(got.lambda_1, want.lambda_1, atol=1e-6)
        np.testing.assert_allclose(got.lambda_block, want.lambda_block, atol=1e-6)
        np.testing.assert_allclose(got.scalar, want.scalar, atol=1e-6)


# ---------------------------------------------------------------------------
# Refusals
# ---------------------------------------------------------------------------


class TestEngineErrors:
    def abstract_spec(self, dim):
        return WarpedProductSpec(
            blocks=(
                FiberBlock(dim, make_analytic_warping("cosh-scaled", (1.0, 1.0)),
                           "abstract_einstein", 0.5),
            ),
            domain=(0.0, 1.0),
            grid_points=64,
        )

    def test_abstract_einstein_blocks_riemann_output(self):
        spec = self.abstract_spec(3)
        s = np.array([0.5])
        # Ricci-level output is still fine.
        ce.ricci_spectrum(spec, s)
        with pytest.raises(InsufficientFiberData):
            ce.riemann_classes(spec, s)
        with pytest.raises(InsufficientFiberData):
            ce.weyl_classes(spec, s)

    def test_dimension_two_einstein_fiber_is_exempt(self):
        spec = self.abstract_spec(2)
        ce.weyl_classes(spec, np.array([0.5]))

    def test_margin_shrunk_domain_enforced(self):
        spec = reference_spec(4)
        lo, hi = spec.domain
        with pytest.raises(OutOfDomain):
            ce.xi_profile(spec, np.array([lo]))
        with pytest.raises(OutOfDomain):
            ce.ricci_spectrum(spec, np.array([hi]))

    def test_derivative_tower_limit_surfaces(self):
        grid = np.linspace(-1.0, 3.0, 801)
        prof = SampledProfile(grid[0], grid[1] - grid[0], np.exp(0.1 * grid))
        spec = WarpedProductSpec(
            blocks=(FiberBlock(3, WarpingFunction("sampled", (), 4, prof),
                               "space_form", 1.0),),
            domain=(0.2, 1.8),
            grid_points=64,
        )
        s = np.array([1.0])
        # Order 1 eigenvalue derivatives need warping order 3: fine.
        ce.eigenvalue_derivatives(spec, s, order=1)
        with pytest.raises(DerivativeOrderUnavailable):
            ce.eigenvalue_derivatives(spec, s, order=3)

    def test_weyl_divergence_route_needs_n_at_least_4(self):
        spec = WarpedProductSpec(
            blocks=(FiberBlock(2, make_analytic_warping("cosh-scaled", (1.0, 1.0)),
                               "space_form", 1.0),),
            domain=(0.0, 1.0),
            grid_points=64,
        )
        f = make_lapse("constant", (1.0,))
        with pytest.raises(BadRange):
            ce.cotton_from_weyl_divergence(spec, f, np.array([0.5]))

    def test_materialize_rejects_unknown_payload(self):
        spec = reference_spec(4)
        with pytest.raises(TypeError):
            ce.materialize_full(np.zeros(3), spec)
