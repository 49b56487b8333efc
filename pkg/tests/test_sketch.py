import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zosketch import (ConstructionError, DimensionError, RngStream,
                      SketchMatrix, SketchSpec, product_approx_error,
                      random_orthogonal, sample_sketch)

ALL_KINDS = ("gaussian", "rademacher", "srht", "sparse")


def spec(kind, d, ell, seed=0, stream=0, sparsity=1):
    return SketchSpec(kind, d, ell, seed=RngStream(seed, stream), sparsity=sparsity)


class TestSpecValidation:
    def test_unknown_kind(self):
        with pytest.raises(ConstructionError):
            SketchSpec("fourier", 4, 2)

    @pytest.mark.parametrize("d,ell", [(0, 2), (4, 0)])
    def test_bad_sizes(self, d, ell):
        with pytest.raises(ConstructionError):
            SketchSpec("gaussian", d, ell)

    def test_sparse_sparsity_range(self):
        with pytest.raises(ConstructionError):
            SketchSpec("sparse", 8, 4, sparsity=5)
        with pytest.raises(ConstructionError):
            SketchSpec("sparse", 8, 4, sparsity=0)

    def test_default_rank_parameter(self):
        assert SketchSpec("gaussian", 8, 16).k == 4
        assert SketchSpec("gaussian", 8, 2).k == 1

    def test_srht_padded_dimension(self):
        assert SketchSpec("srht", 6, 2).padded_dim == 8
        assert SketchSpec("srht", 8, 2).padded_dim == 8
        assert SketchSpec("srht", 1, 1).padded_dim == 1


class TestStructuralInvariants:
    def test_rademacher_entries(self):
        m = sample_sketch(spec("rademacher", 4, 2)).to_dense()
        assert np.all(np.isin(m, [1 / math.sqrt(2), -1 / math.sqrt(2)]))

    @pytest.mark.parametrize("d,ell", [(8, 4), (64, 8), (256, 32)])
    @pytest.mark.parametrize("kind", ["rademacher", "srht"])
    def test_column_norms_sqrt_d_over_ell(self, kind, d, ell):
        S = sample_sketch(spec(kind, d, ell, seed=3))
        want = math.sqrt(d / ell)
        for i in range(ell):
            assert abs(np.linalg.norm(S.column(i)) - want) <= 1e-12 * want

    def test_srht_entry_magnitudes(self):
        S = sample_sketch(spec("srht", 8, 4, seed=1))
        assert np.allclose(np.abs(S.to_dense()), 1 / math.sqrt(4), atol=1e-15)

    def test_srht_non_power_of_two_column_norm(self):
        S = sample_sketch(spec("srht", 6, 3, seed=2))
        for i in range(3):
            assert np.isclose(np.linalg.norm(S.column(i)), math.sqrt(6 / 3), rtol=1e-12)

    def test_sparse_support_per_coordinate(self):
        # each input coordinate carries exactly `sparsity` signed nonzeros
        # spread over the ell directions, so S S^T has unit diagonal
        S = sample_sketch(spec("sparse", 16, 8, seed=4, sparsity=2))
        m = S.to_dense()
        assert m.shape == (16, 8)
        nz_per_coord = (m != 0).sum(axis=1)
        assert np.all(nz_per_coord == 2)
        assert np.all(np.isin(m[m != 0], [1 / math.sqrt(2), -1 / math.sqrt(2)]))
        assert np.allclose(np.diag(m @ m.T), 1.0, atol=1e-15)

    def test_dense_payload_column_major(self):
        m = sample_sketch(spec("gaussian", 8, 4)).to_dense()
        assert m.flags["F_CONTIGUOUS"]


class TestColumnAccess:
    def test_single_gaussian_column_reproducible(self):
        s1 = sample_sketch(spec("gaussian", 3, 1, seed=9))
        s2 = sample_sketch(spec("gaussian", 3, 1, seed=9))
        assert np.array_equal(s1.column(0), s2.column(0))

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_column_matches_dense(self, kind):
        S = sample_sketch(spec(kind, 16, 4, seed=5, sparsity=2))
        m = S.to_dense()
        for i in range(4):
            assert np.array_equal(S.column(i), m[:, i])

    def test_index_out_of_range(self):
        S = sample_sketch(spec("gaussian", 4, 2))
        with pytest.raises(DimensionError):
            S.column(2)
        with pytest.raises(DimensionError):
            S.column(-1)


class TestApply:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_apply_transpose_matches_column_dots(self, kind):
        S = sample_sketch(spec(kind, 8, 4, seed=6, sparsity=2))
        x = RngStream(1).generator().standard_normal(8)
        brute = np.array([S.column(i) @ x for i in range(4)])
        assert np.allclose(S.apply_transpose(x), brute, rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_apply_matches_column_sums(self, kind):
        S = sample_sketch(spec(kind, 8, 4, seed=7, sparsity=2))
        y = RngStream(2).generator().standard_normal(4)
        brute = sum(y[i] * S.column(i) for i in range(4))
        assert np.allclose(S.apply(y), brute, rtol=1e-12, atol=1e-14)

    def test_apply_basis_vector_gives_column(self):
        S = sample_sketch(spec("srht", 8, 4, seed=8))
        e1 = np.eye(4)[1]
        assert np.allclose(S.apply(e1), S.column(1), atol=1e-15)

    def test_zero_inputs(self):
        S = sample_sketch(spec("sparse", 8, 4, seed=9, sparsity=3))
        assert np.array_equal(S.apply(np.zeros(4)), np.zeros(8))
        assert np.array_equal(S.apply_transpose(np.zeros(8)), np.zeros(4))

    def test_single_column_inner_product(self):
        S = sample_sketch(spec("gaussian", 4, 1, seed=10))
        x = np.array([5.0, 0.0, 0.0, 0.0])
        assert np.isclose(S.apply_transpose(x)[0], 5.0 * S.column(0)[0], rtol=1e-15)

    def test_dimension_mismatch(self):
        S = sample_sketch(spec("gaussian", 8, 4))
        with pytest.raises(DimensionError):
            S.apply(np.zeros(8))
        with pytest.raises(DimensionError):
            S.apply_transpose(np.zeros(4))

    @pytest.mark.parametrize("kind", ALL_KINDS)
    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_adjointness(self, kind, seed):
        S = sample_sketch(spec(kind, 16, 8, seed=seed, sparsity=3))
        g = RngStream(seed, 77).generator()
        x = g.standard_normal(16)
        y = g.standard_normal(8)
        lhs = S.apply_transpose(x) @ y
        rhs = x @ S.apply(y)
        assert np.isclose(lhs, rhs, rtol=1e-12, atol=1e-13)


class TestDistributionalProperties:
    @pytest.mark.parametrize("kind", ["gaussian", "rademacher", "sparse"])
    def test_mean_ssT_converges_to_identity(self, kind):
        d, ell, n = 16, 8, 20_000
        acc = np.zeros((d, d))
        for i in range(n):
            m = sample_sketch(spec(kind, d, ell, seed=100, stream=i, sparsity=2)).to_dense()
            acc += m @ m.T
        acc /= n
        assert np.abs(acc - np.eye(d)).max() < 0.05

    def test_srht_mean_ssT_with_padding(self):
        d, ell, n = 6, 4, 4000
        acc = np.zeros((d, d))
        for i in range(n):
            m = sample_sketch(spec("srht", d, ell, seed=101, stream=i)).to_dense()
            acc += m @ m.T
        acc /= n
        assert np.abs(acc - np.eye(d)).max() < 0.1

    def test_spectral_bound_where_oblivious(self):
        # ||S^T A S||_2 <= 5||A||_2/4 + tr(A)/(4k) holds w.h.p. once ell is
        # large enough for the gamma=1/4 product property (here ell=64, k=4)
        d, ell, k = 128, 64, 4
        lam = 0.95 ** np.arange(d)
        bound = 1.25 * lam[0] + lam.sum() / (4 * k)
        hits = 0
        for i in range(200):
            m = sample_sketch(spec("gaussian", d, ell, seed=102, stream=i)).to_dense()
            top = np.linalg.eigvalsh(m.T * lam @ m)[-1]
            hits += top <= bound
        assert hits / 200 >= 0.95

    def test_gradient_norm_sandwich_where_oblivious(self):
        d, ell = 128, 48
        z = np.zeros(d)
        z[0] = 1.0
        hits = 0
        for i in range(200):
            S = sample_sketch(spec("gaussian", d, ell, seed=103, stream=i))
            n2 = float(np.sum(S.apply_transpose(z) ** 2))
            hits += 0.5 <= n2 <= 1.5
        assert hits / 200 >= 0.95

    def test_determinism_same_seed(self):
        for kind in ALL_KINDS:
            a = sample_sketch(spec(kind, 12, 5, seed=3, sparsity=2)).to_dense()
            b = sample_sketch(spec(kind, 12, 5, seed=3, sparsity=2)).to_dense()
            assert np.array_equal(a, b)


class TestProductApproxError:
    def test_exact_sketch_gives_zero(self):
        # S's columns orthonormal and spanning range(B): S S^T acts as the
        # identity on range(B), so the measured error vanishes
        d, r = 16, 4
        q = random_orthogonal(d, RngStream(12))[:, :r]
        proj = q @ q.T
        ratio = product_approx_error(SketchMatrix.from_dense(q),
                                     lambda v: proj @ v, 1.0, math.sqrt(r), k=2,
                                     rng=RngStream(13))
        assert ratio <= 1e-10

    def test_identity_operator_ratio_nonnegative_finite(self):
        d = 8
        S = sample_sketch(spec("rademacher", d, d, seed=14))
        ratio = product_approx_error(S, lambda v: v, 1.0, math.sqrt(d), k=2,
                                     rng=RngStream(15))
        assert np.isfinite(ratio) and ratio >= 0.0

    def test_definition_event_where_oblivious(self):
        # exp-decay B, gaussian ell=64, k=4: measured ratio <= 1/4 in >=95%
        # of 200 seeds (the gamma=1/4 regime for this ell)
        d, ell, k = 128, 64, 4
        lam_b = 0.95 ** np.arange(d)
        b_fro = float(np.sqrt((lam_b ** 2).sum()))
        hits = 0
        for i in range(200):
            S = sample_sketch(spec("gaussian", d, ell, seed=104, stream=i))
            ratio = product_approx_error(S, lambda v: lam_b * v, 1.0, b_fro, k,
                                         rng=RngStream(16), iters=60)
            hits += ratio <= 0.25
        assert hits / 200 >= 0.95
