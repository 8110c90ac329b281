import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nusampling.act import (act_reconstruct, act_reconstruct_2d, build_rhs, build_toeplitz,
                            build_toeplitz_2d, data_residual, default_weights,
                            normal_equation_discrepancy, vandermonde_lsq_oracle,
                            vandermonde_lsq_oracle_2d)
from nusampling.signals import (add_noise, fourier_matrix, generate_bandlimited,
                                generate_bandlimited_2d, jittered_grid_2d, jittered_set,
                                regular_set)


def dense_double_sum(t, w, M, P):
    k = np.arange(-M, M + 1)
    d = k[:, None] - k[None, :]
    return np.einsum("j,klj->kl", w, np.exp(-2j * np.pi * d[:, :, None] * t / P)) / P


class TestWeights:
    def test_equispaced(self):
        t = np.arange(10) * 0.5 - 2.25
        np.testing.assert_allclose(default_weights(t, 5.0), 0.5)

    def test_hand_example(self):
        np.testing.assert_allclose(default_weights([0.0, 0.25, 0.75], 1.0), [0.25, 0.375, 0.375])

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.integers(2, 60))
    def test_sum_is_period(self, seed, n):
        t = np.sort(np.random.default_rng(seed).uniform(-3, 3, n))
        if np.any(np.diff(t) <= 0):
            return
        w = default_weights(t, 6.5)
        assert np.all(w > 0) and w.sum() == pytest.approx(6.5)

    def test_errors(self):
        with pytest.raises(ValueError):
            default_weights([0.0], 1.0)
        with pytest.raises(ValueError):
            default_weights([0.0, 2.0], 1.0)


class TestToeplitz:
    def test_kronecker_identity(self):
        S = regular_set(16, 4)
        T = build_toeplitz(S.points, np.ones(len(S)), 16, S.period)
        np.testing.assert_allclose(T.dense(), 4 * np.eye(33), atol=1e-12)

    def test_single_point(self):
        T = build_toeplitz([0.0], [1.0], 3)
        np.testing.assert_allclose(T.dense(), np.full((7, 7), 1 / 7))

    def test_matches_double_sum(self):
        rng = np.random.default_rng(0)
        t = np.sort(rng.uniform(-5, 5, 23))
        w = rng.uniform(0.1, 1, 23)
        T = build_toeplitz(t, w, 6, 13.0)
        assert np.max(np.abs(T.dense() - dense_double_sum(t, w, 6, 13.0))) <= 1e-12

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10**6), M=st.integers(0, 12))
    def test_psd(self, seed, M):
        rng = np.random.default_rng(seed)
        t = rng.uniform(-M - 0.5, M + 0.5, 2 * M + 5)
        w = rng.uniform(0.01, 2, t.size)
        lam = np.linalg.eigvalsh(build_toeplitz(t, w, M).dense())
        assert lam.min() >= -1e-10


class TestRhs:
    def test_zero_samples(self):
        np.testing.assert_array_equal(build_rhs([0.0, 1.0], [0.0, 0.0], [1.0, 1.0], 2), 0)

    def test_single_point(self):
        np.testing.assert_allclose(build_rhs([0.0], [1.0], [1.0], 3), np.full(7, 1 / np.sqrt(7)))

    def test_direct_sum(self):
        rng = np.random.default_rng(1)
        t, b, w = rng.uniform(-4, 4, 15), rng.standard_normal(15), rng.uniform(0.5, 1, 15)
        k = np.arange(-4, 5)
        ref = np.array([np.sum(b * w * np.exp(-2j * np.pi * kk * t / 9.0)) for kk in k]) / 3.0
        np.testing.assert_allclose(build_rhs(t, b, w, 4), ref, atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            build_rhs([0.0, 1.0], [1.0], [1.0, 1.0], 1)


class TestReconstruct:
    def test_exact_recovery(self):
        for M in (1, 5, 17, 32):
            p = generate_bandlimited(M, seed=M)
            S = jittered_set(2 * M + 3, 0.999, M + 0.5, seed=M)
            q, rep = act_reconstruct(S.points, p(S.points), M, cg_tol=1e-14)
            assert np.max(np.abs(q.coeffs - p.coeffs)) <= 1e-8
            assert rep.success

    def test_regular_oversampling_divides_rhs(self):
        S = regular_set(8, 3)
        b = np.random.default_rng(2).standard_normal(len(S))
        w = np.ones(len(S))
        q, _ = act_reconstruct(S.points, b, 8, weights="unit", period=S.period)
        y = build_rhs(S.points, b, w, 8, S.period)
        np.testing.assert_allclose(q.coeffs, y / 3, atol=1e-10)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6), M=st.integers(1, 16), extra=st.integers(0, 60),
           noisy=st.booleans())
    def test_matches_oracle(self, seed, M, extra, noisy):
        P = 2 * M + 1
        S = jittered_set(P + 2 + extra, 0.95, P / 2, seed=seed)
        p = generate_bandlimited(M, P, seed=seed)
        b = p(S.points)
        if noisy:
            b = add_noise(b, 0.05, seed=seed).values
        w = default_weights(S.points, P)
        q, _ = act_reconstruct(S.points, b, M, weights=w, cg_tol=1e-14)
        ref = vandermonde_lsq_oracle(S.points, b, w, M)
        assert np.max(np.abs(q.coeffs - ref.coeffs)) <= 1e-8

    def test_local_minimality(self):
        rng = np.random.default_rng(5)
        S = jittered_set(40, 0.8, 8.5, seed=5)
        b = rng.standard_normal(40)
        w = default_weights(S.points, 17.0)
        q, _ = act_reconstruct(S.points, b, 8, weights=w, cg_tol=1e-14)
        base = data_residual(q, S.points, b, w)
        for _ in range(20):
            e = 1e-4 * (rng.standard_normal(17) + 1j * rng.standard_normal(17))
            pert = q.__class__(q.degree, q.period, q.coeffs + e)
            assert data_residual(pert, S.points, b, w) >= base - 1e-12

    def test_too_few_samples(self):
        with pytest.raises(ValueError, match="2M\\+1"):
            act_reconstruct(np.arange(5.0), np.ones(5), 3)

    def test_discrepancy_stop(self):
        P = 21.0
        S = jittered_set(40, 0.7, P / 2, seed=1)
        p = generate_bandlimited(10, P, seed=1)
        b = add_noise(p(S.points), 0.1, seed=2).values
        q, rep = act_reconstruct(S.points, b, 10, delta=0.1)
        w = default_weights(S.points, P)
        wn = w * w.size / w.sum()
        assert rep.termination == "stopping-rule"
        assert np.sum(wn * np.abs(q(S.points) - b) ** 2) <= 1.21 * 0.01 * np.sum(wn * np.abs(b) ** 2)
        with pytest.raises(ValueError):
            act_reconstruct(S.points, b, 10, delta=0.1, tau_stop=1.0)


class TestOracle:
    def test_interpolation(self):
        t = np.array([-2.0, -0.7, 0.4, 1.1, 2.3])
        b = np.array([1.0, -1.0, 0.5, 2.0, 0.0])
        q = vandermonde_lsq_oracle(t, b, None, 2)
        np.testing.assert_allclose(q(t), b, atol=1e-10)

    def test_normal_equations(self):
        rng = np.random.default_rng(7)
        t = np.sort(rng.uniform(-6, 6, 40))
        b = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        eT, ey = normal_equation_discrepancy(t, b, default_weights(t, 13.0), 6)
        assert eT <= 1e-12 and ey <= 1e-12

    def test_rank_deficiency(self):
        with pytest.raises(np.linalg.LinAlgError):
            vandermonde_lsq_oracle([0.0, 0.0, 0.0, 1.0, 1.0], np.ones(5), None, 2)


class Test2d:
    def test_exact_recovery(self):
        for M in (1, 2, 3, 4):
            p = generate_bandlimited_2d(M, seed=M)
            G = jittered_grid_2d(2 * M + 3, M + 0.5, seed=M)
            q, rep = act_reconstruct_2d(G.points, p(G.points[:, 0], G.points[:, 1]), M,
                                        cg_tol=1e-14)
            assert np.max(np.abs(q.coeffs - p.coeffs)) <= 1e-7

    def test_tensor_kronecker(self):
        S = regular_set(3, 2)
        U, V = np.meshgrid(S.points, S.points, indexing="ij")
        pts = np.column_stack([U.ravel(), V.ravel()])
        T = build_toeplitz_2d(pts, None, 3, S.period)
        np.testing.assert_allclose(T.dense(), 4 * np.eye(49), atol=1e-12)
        # and the dense double-sum oracle agrees entrywise
        E = np.einsum("jk,jl->jkl", fourier_matrix(pts[:, 0], 3, S.period),
                      fourier_matrix(pts[:, 1], 3, S.period)).reshape(len(pts), -1)
        np.testing.assert_allclose(T.dense(), E.conj().T @ E, atol=1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(3)
        pts = rng.uniform(-3.5, 3.5, (90, 2))
        b = rng.standard_normal(90)
        q, _ = act_reconstruct_2d(pts, b, 2, period=7.0, cg_tol=1e-14, max_iter=500)
        ref = vandermonde_lsq_oracle_2d(pts, b, None, 2, 7.0)
        np.testing.assert_allclose(q.coeffs, ref.coeffs, atol=1e-8)

    def test_too_few(self):
        with pytest.raises(ValueError):
            act_reconstruct_2d(np.zeros((20, 2)), np.ones(20), 2)
