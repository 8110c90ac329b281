import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nusampling.frame import build_gram
from nusampling.spectra import (bump_dictionary, circulant_eigenvalues, circulant_embed,
                                cluster_fractions, diagnose, eigenvalues,
                                equally_distributed_gap, gap_set_toeplitz, prolate_matrix,
                                symbol_partial_sum, transition_count)


class TestProlate:
    def test_m1_identity(self):
        np.testing.assert_allclose(prolate_matrix(5, 1), np.eye(11), atol=1e-15)

    def test_n1_m2(self):
        c = 2 / np.pi
        ref = np.array([[1, c, 0], [c, 1, c], [0, c, 1]])
        np.testing.assert_allclose(prolate_matrix(1, 2), ref, atol=1e-15)

    def test_matches_gram(self):
        for n, m in ((4, 2), (10, 3), (16, 2)):
            t = np.arange(-n, n + 1) / m
            assert np.max(np.abs(prolate_matrix(n, m) - build_gram(t).matrix)) <= 1e-14

    def test_normalized_spectrum(self):
        lam = eigenvalues(prolate_matrix(64, 2, normalized=True))
        assert lam.min() > -1e-12 and lam.max() < 1 + 1e-12
        assert cluster_fractions(lam, (0.0, 1.0), 0.1).sum() >= 0.85
        assert transition_count(lam) <= 4 * np.log2(129)

    def test_errors(self):
        with pytest.raises(ValueError):
            prolate_matrix(-1, 2)
        with pytest.raises(ValueError):
            prolate_matrix(3, 0)


class TestEigenvalues:
    def test_trivial(self):
        np.testing.assert_allclose(eigenvalues(np.eye(4)), 1.0)
        np.testing.assert_allclose(eigenvalues(np.diag([3.0, 1.0])), [1.0, 3.0])

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_cubic_roots(self, seed):
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        A = X + X.conj().T
        roots = np.sort(np.roots(np.poly(A)).real)
        np.testing.assert_allclose(eigenvalues(A), roots, atol=1e-8 * np.abs(roots).max())

    def test_non_hermitian(self):
        with pytest.raises(ValueError):
            eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            eigenvalues(np.ones((2, 3)))


class TestCirculant:
    def test_examples(self):
        np.testing.assert_array_equal(circulant_embed([1, 0]), [1, 0, 0])
        np.testing.assert_array_equal(circulant_embed([2, 1j]), [2, 1j, -1j])

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.integers(1, 40))
    def test_fft_vs_dense(self, seed, n):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        a[0] = a[0].real
        c = circulant_embed(a)
        N = c.size
        C = c[(np.arange(N)[:, None] - np.arange(N)[None, :]) % N]
        lam = circulant_eigenvalues(c)
        assert np.max(np.abs(lam.imag)) <= 1e-10
        np.testing.assert_allclose(np.sort(lam.real), eigenvalues(C), atol=1e-10)


class TestSymbol:
    def test_trivial(self):
        x = np.linspace(-0.5, 0.5, 11)
        np.testing.assert_allclose(symbol_partial_sum(np.zeros(4), x), 0)
        np.testing.assert_allclose(symbol_partial_sum([1, 0, 0], x), 1)

    def test_real_for_hermitian_column(self):
        a = np.array([1.0, 0.3 + 0.2j, -0.1j])
        v = symbol_partial_sum(a, np.linspace(-0.5, 0.5, 17))
        assert np.max(np.abs(v.imag)) <= 1e-14

    def test_gap_set_indicator(self):
        T = gap_set_toeplitz(128, 2, 2)
        v = symbol_partial_sum(T.first_column, [0.0, 0.45]).real
        assert abs(v[0] - 1) <= 0.1 and abs(v[1]) <= 0.1


class TestClusters:
    def test_examples(self):
        np.testing.assert_allclose(cluster_fractions(np.ones(5), [1.0], 0.1), [1.0])
        np.testing.assert_allclose(cluster_fractions(np.full(5, 0.5), [0.0, 1.0], 0.1), [0, 0])
        with pytest.raises(ValueError):
            cluster_fractions([1.0], [1.0], 0.0)

    def test_gap_set_fraction_increases(self):
        f = [cluster_fractions(eigenvalues(gap_set_toeplitz(M, 2, 2).dense()), (0.0, 1.0), 0.1).sum()
             for M in (16, 32, 64)]
        assert f[0] < f[1] < f[2]

    def test_diagnose(self):
        T = gap_set_toeplitz(16, 2, 2)
        d = diagnose(T.dense(), symbol_column=T.first_column, n_symbol=64)
        assert d.eigenvalues.size == 33 and d.symbol_values.size == 64
        assert d.condition_number > 1


class TestEqualDistribution:
    def test_trivial(self):
        x = np.random.default_rng(0).uniform(0, 1, 50)
        assert equally_distributed_gap(x, x) == 0
        assert equally_distributed_gap(x, x[::-1]) == pytest.approx(0, abs=1e-15)
        with pytest.raises(ValueError):
            equally_distributed_gap(x, x[:-1])

    def test_bumps_are_lipschitz(self):
        x = np.linspace(-1, 2, 3001)
        for F in bump_dictionary():
            assert np.max(np.abs(np.diff(F(x)) / np.diff(x))) <= 1 + 1e-9

    def test_prolate_vs_circulant(self):
        gaps = []
        for n in (64, 128):
            R = prolate_matrix(n, 2, normalized=True)
            nu = circulant_eigenvalues(circulant_embed(R[: n + 1, 0])).real
            gaps.append(equally_distributed_gap(eigenvalues(R), np.sort(nu)))
        assert gaps[1] <= 0.05 and gaps[1] < gaps[0]
