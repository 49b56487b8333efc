import math

import numpy as np
import pytest

from conftest import simple_quadratic, synth_logistic
from zosketch import (ConstructionError, CountingOracle, Decay, NoiseSpec,
                      Preconditioner, RngStream, SketchMatrix, SketchSpec,
                      make_quadratic, sample_sketch, trace_estimate,
                      zo_full_fd, zo_grad_and_trace, zo_gradient,
                      zo_gradient_precond)

ALL_KINDS = ("gaussian", "rademacher", "srht", "sparse")


def spec(kind, d, ell, seed=0, stream=0, sparsity=1):
    return SketchSpec(kind, d, ell, seed=RngStream(seed, stream), sparsity=sparsity)


class _Quartic:
    """phi(x) = sum x_i^4: smooth, non-quadratic, known gradient."""

    def __init__(self, d):
        self.dim = d

    def value(self, x):
        return float(np.sum(x ** 4))

    def value_many(self, X):
        return (X ** 4).sum(axis=1)

    def gradient(self, x):
        return 4.0 * x ** 3


class TestZoGradient:
    def test_identity_directions_recover_gradient_exactly(self):
        # central differences are exact on quadratics; with S = I_d the
        # estimate collapses to the classical full finite-difference gradient
        d = 5
        oracle = CountingOracle(simple_quadratic(d))
        x = RngStream(1).generator().standard_normal(d)
        est = zo_gradient(oracle, x, SketchMatrix.from_dense(np.eye(d)), alpha=0.7)
        assert np.allclose(est.direction, x, rtol=1e-13, atol=1e-13)
        assert est.queries_used == 2 * d and oracle.queries == 2 * d

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_matches_sketched_true_gradient(self, kind):
        q = make_quadratic(4, Decay.exp(0.8), 1e-3, RngStream(2))
        oracle = CountingOracle(q)
        x = RngStream(3).generator().standard_normal(4)
        S = sample_sketch(spec(kind, 4, 3, seed=4, sparsity=2))
        est = zo_gradient(oracle, x, S, alpha=0.1)
        want = S.apply(S.apply_transpose(q.gradient(x)))
        scale = max(np.linalg.norm(want), 1.0)
        assert np.linalg.norm(est.direction - want) <= 1e-10 * scale
        assert oracle.queries == 6

    def test_noise_residual_lies_in_sketch_range_with_bounded_coefficients(self):
        q = make_quadratic(6, Decay.poly_inv(), 1e-2, RngStream(5))
        sigma, alpha = 0.05, 0.2
        noise = NoiseSpec(sigma=sigma, mode="uniform_hash", seed=11)
        oracle = CountingOracle(q, noise)
        x = RngStream(6).generator().standard_normal(6)
        S = sample_sketch(spec("gaussian", 6, 4, seed=7))
        est = zo_gradient(oracle, x, S, alpha=alpha)
        dirs = S.to_dense()
        v = np.array([
            (noise.zeta(x + alpha * dirs.T[i]) - noise.zeta(x - alpha * dirs.T[i]))
            / (2 * alpha) for i in range(4)])
        assert np.linalg.norm(v) <= math.sqrt(4) * sigma / alpha + 1e-15
        want = S.apply(S.apply_transpose(q.gradient(x))) + S.apply(v)
        assert np.allclose(est.direction, want, rtol=1e-10, atol=1e-12)

    def test_alpha_must_be_positive(self):
        oracle = CountingOracle(simple_quadratic(3))
        S = sample_sketch(spec("gaussian", 3, 2))
        with pytest.raises(ConstructionError):
            zo_gradient(oracle, np.zeros(3), S, alpha=0.0)


class TestZoGradientPrecond:
    def test_identity_preconditioner_is_bitwise_plain_estimate(self):
        q = make_quadratic(5, Decay.exp(0.9), 1e-3, RngStream(8))
        x = RngStream(9).generator().standard_normal(5)
        S = sample_sketch(spec("srht", 5, 4, seed=10))
        a = zo_gradient(CountingOracle(q), x, S, alpha=0.1)
        b = zo_gradient_precond(CountingOracle(q), x, S, alpha=0.1,
                                P=Preconditioner.identity())
        assert np.array_equal(a.direction, b.direction)
        assert a.queries_used == b.queries_used == 8

    def test_exact_preconditioner_matches_whitened_sketch_product(self):
        q = make_quadratic(6, Decay.exp(0.5), 1e-2, RngStream(11))
        P = Preconditioner.from_quadratic(q)
        oracle = CountingOracle(q)
        x = RngStream(12).generator().standard_normal(6)
        S = sample_sketch(spec("gaussian", 6, 4, seed=13))
        est = zo_gradient_precond(oracle, x, S, alpha=0.1, P=P)
        dirs = P.inv_sqrt_apply(S.to_dense())
        want = dirs @ (dirs.T @ q.gradient(x))
        scale = max(np.linalg.norm(want), 1.0)
        assert np.linalg.norm(est.direction - want) <= 1e-10 * scale
        assert oracle.queries == 8

    def test_zero_gradient_point_gives_zero_direction(self):
        q = make_quadratic(4, Decay.exp(0.7), 1e-2, RngStream(14))
        P = Preconditioner.from_quadratic(q)
        est = zo_gradient_precond(CountingOracle(q), q.xstar,
                                  sample_sketch(spec("gaussian", 4, 3, seed=15)),
                                  alpha=0.1, P=P)
        assert np.linalg.norm(est.direction) <= 1e-9

    def test_rho_recorded(self):
        q = make_quadratic(3, Decay.exp(0.5), 0.1, RngStream(16))
        assert Preconditioner.from_quadratic(q).rho == 1.0
        with pytest.raises(ConstructionError):
            Preconditioner.spectral(np.eye(2), [1.0, -1.0])


class TestZoFullFd:
    def test_exact_on_quadratics(self):
        q = make_quadratic(5, Decay.poly_inv(), 1e-3, RngStream(17))
        oracle = CountingOracle(q)
        x = RngStream(18).generator().standard_normal(5)
        est = zo_full_fd(oracle, x, alpha=0.3)
        grad = q.gradient(x)
        assert np.linalg.norm(est.direction - grad) <= 1e-10 * max(1, np.linalg.norm(grad))
        assert est.queries_used == 10 and oracle.queries == 10

    def test_bias_scales_quadratically_in_alpha(self):
        obj = _Quartic(4)
        x = 0.5 + 0.1 * np.arange(4.0)
        errs = []
        for alpha in (2e-2, 1e-2):
            est = zo_full_fd(CountingOracle(obj), x, alpha=alpha)
            errs.append(np.linalg.norm(est.direction - obj.gradient(x)))
        ratio = errs[0] / errs[1]
        assert 3.0 <= ratio <= 5.0  # halving alpha quarters the error +-25%

    def test_chunking_consistency(self):
        # dimension beyond one chunk still produces the exact gradient
        q = simple_quadratic(300)
        x = RngStream(19).generator().standard_normal(300)
        est = zo_full_fd(CountingOracle(q), x, alpha=0.1)
        assert np.allclose(est.direction, x, rtol=1e-11, atol=1e-11)
        assert est.queries_used == 600


class TestTraceEstimate:
    @pytest.mark.parametrize("kind", ["rademacher", "srht"])
    def test_identity_hessian_exactness(self, kind):
        # ||s_i||^2 = d/ell exactly, so tau = d for phi = 0.5 ||x||^2
        d, ell = 64, 8
        q = simple_quadratic(d)
        x = RngStream(20).generator().standard_normal(d)
        for i in range(20):
            oracle = CountingOracle(q)
            tau = trace_estimate(oracle, x, sample_sketch(spec(kind, d, ell, seed=i)),
                                 alpha=0.1)
            assert abs(tau - d) <= 1e-10 * d
            assert oracle.queries == 2 * ell + 1

    def test_matches_quadratic_forms(self):
        q = make_quadratic(4, Decay.exp(0.6), 1e-2, RngStream(21))
        x = RngStream(22).generator().standard_normal(4)
        S = sample_sketch(spec("gaussian", 4, 5, seed=23))
        tau = trace_estimate(CountingOracle(q), x, S, alpha=0.1)
        want = sum(float(S.column(i) @ q.hessian_matvec(None, S.column(i)))
                   for i in range(5))
        assert np.isclose(tau, want, rtol=1e-10)

    def test_independent_of_evaluation_point_for_quadratics(self):
        q = make_quadratic(4, Decay.poly_inv(), 1e-3, RngStream(24))
        S = sample_sketch(spec("rademacher", 4, 3, seed=25))
        g = RngStream(26).generator()
        t1 = trace_estimate(CountingOracle(q), g.standard_normal(4), S, alpha=0.2)
        t2 = trace_estimate(CountingOracle(q), g.standard_normal(4), S, alpha=0.2)
        assert np.isclose(t1, t2, rtol=1e-10)

    def test_unbiased_over_gaussian_sketches(self):
        d, ell, n = 64, 8, 2000
        q = make_quadratic(d, Decay.exp(0.95), 1e-4, RngStream(27))
        x = np.zeros(d)
        total = 0.0
        for i in range(n):
            total += trace_estimate(CountingOracle(q), x,
                                    sample_sketch(spec("gaussian", d, ell,
                                                       seed=28, stream=i)), alpha=0.1)
        mean = total / n
        assert abs(mean - q.hessian_trace(None)) <= 0.02 * q.hessian_trace(None)


class TestFusedGradAndTrace:
    def test_matches_separate_estimates(self):
        q = make_quadratic(5, Decay.exp(0.8), 1e-3, RngStream(29))
        x = RngStream(30).generator().standard_normal(5)
        S = sample_sketch(spec("gaussian", 5, 4, seed=31))
        est, tau = zo_grad_and_trace(CountingOracle(q), x, S, alpha=0.1)
        sep_g = zo_gradient(CountingOracle(q), x, S, alpha=0.1)
        sep_t = trace_estimate(CountingOracle(q), x, S, alpha=0.1)
        assert np.allclose(est.direction, sep_g.direction, rtol=1e-12, atol=1e-14)
        assert np.isclose(tau, sep_t, rtol=1e-12)

    def test_query_cost_is_shared(self):
        q = simple_quadratic(6)
        oracle = CountingOracle(q)
        est, tau = zo_grad_and_trace(oracle, np.ones(6),
                                     sample_sketch(spec("srht", 6, 4, seed=32)),
                                     alpha=0.1)
        assert oracle.queries == 2 * 4 + 1
        assert est.queries_used == 2 * 4 + 1

    def test_quadratic_pair_identity(self):
        q = make_quadratic(4, Decay.poly_inv(), 1e-2, RngStream(33))
        x = RngStream(34).generator().standard_normal(4)
        S = sample_sketch(spec("rademacher", 4, 3, seed=35))
        est, tau = zo_grad_and_trace(CountingOracle(q), x, S, alpha=0.1)
        want_g = S.apply(S.apply_transpose(q.gradient(x)))
        want_t = sum(float(S.column(i) @ q.hessian_matvec(None, S.column(i)))
                     for i in range(3))
        assert np.allclose(est.direction, want_g, rtol=1e-10, atol=1e-12)
        assert np.isclose(tau, want_t, rtol=1e-10)


class TestSketchedBiasDecay:
    def test_logistic_bias_scales_quadratically(self):
        # smooth non-quadratic objective: the residual against the sketched
        # true gradient shrinks ~4x when alpha halves
        obj = synth_logistic(100, 20, seed=36, ridge=1e-4)
        ratios = []
        for i in range(15):
            g = RngStream(37, i).generator()
            x = 0.5 * g.standard_normal(20)
            S = sample_sketch(spec("gaussian", 20, 4, seed=38, stream=i))
            want = S.apply(S.apply_transpose(obj.gradient(x)))
            errs = []
            for alpha in (1e-2, 5e-3):
                est = zo_gradient(CountingOracle(obj), x, S, alpha=alpha)
                errs.append(np.linalg.norm(est.direction - want))
            ratios.append(errs[0] / errs[1])
        assert 3.0 <= float(np.median(ratios)) <= 5.0
