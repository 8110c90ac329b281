import numpy as np
import pytest

from nusampling.frame import (MACHINE_DELTA, build_gram, estimate_tau, reconstruct_cg,
                              reconstruct_tsvd)
from nusampling.linalg import svd, tsvd_solve
from nusampling.signals import add_noise, regular_set, sinc
from nusampling.spectra import prolate_matrix


def noisy_prolate(n, m, seed, delta=1e-2):
    R = prolate_matrix(n, m)
    rng = np.random.default_rng(seed)
    c = R @ rng.standard_normal(2 * n + 1)   # smooth solution (source condition)
    b = add_noise(R @ c, delta, seed=seed + 1).values
    return np.arange(-n, n + 1) / m, R, c, b


class TestGram:
    def test_integer_points_identity(self):
        np.testing.assert_allclose(build_gram([0.0, 1.0, 2.0]).matrix, np.eye(3), atol=1e-15)

    def test_half_point(self):
        R = build_gram([0.0, 0.5]).matrix
        np.testing.assert_allclose(R, [[1, 2 / np.pi], [2 / np.pi, 1]])

    def test_half_integer_grid_is_prolate(self):
        t = np.arange(-5, 6) / 2
        d = np.subtract.outer(np.arange(11), np.arange(11)) / 2
        with np.errstate(invalid="ignore", divide="ignore"):
            ref = np.where(d == 0, 1.0, np.sin(np.pi * d) / (np.pi * d))
        np.testing.assert_allclose(build_gram(t).matrix, ref, atol=1e-15)

    def test_properties(self):
        t = np.sort(np.random.default_rng(0).uniform(-5, 5, 30))
        R = build_gram(t).matrix
        np.testing.assert_array_equal(R, R.T)
        np.testing.assert_array_equal(np.diag(R), 1.0)
        assert np.all(np.abs(R) <= 1.0)

    def test_eigenvalues_below_frame_bound(self):
        for m in (2, 3, 4):
            R = build_gram(regular_set(20, m)).matrix
            assert np.linalg.eigvalsh(R).max() <= m + 1e-10

    def test_empty(self):
        with pytest.raises(ValueError):
            build_gram([])


class TestEstimateTau:
    def test_values(self):
        assert estimate_tau(1.0, 1e-16, 1) == pytest.approx(1e-8, rel=1e-12)
        assert estimate_tau(1.0, 1e-16, 2) == pytest.approx(5e-17 ** (1 / 3), rel=1e-12)
        assert estimate_tau(1.0, 1e-16, 2) == pytest.approx(3.68e-6, abs=5e-9)
        assert estimate_tau(6.0, 0.01, 1) == pytest.approx(0.6)

    def test_invalid(self):
        with pytest.raises(ValueError):
            estimate_tau(1.0, 0.0)
        with pytest.raises(ValueError):
            estimate_tau(0.0, 0.1)
        with pytest.raises(ValueError):
            estimate_tau(1.0, 0.1, p=0)


class TestTsvd:
    def test_regular_oversampling_coefficients(self):
        # in the m-fold frame f has coefficients f(t_j)/m; the finite section
        # approaches them away from the edges as n grows
        m, n = 2, 80
        t = np.arange(-n * m, n * m + 1) / m
        f = lambda s: sinc((s - 0.3) / 2) ** 2
        sx, rep = reconstruct_tsvd(t, f(t), 0.0)
        core = np.abs(t) <= n / 4
        np.testing.assert_allclose(sx.coeffs[core], f(t[core]) / m, atol=1e-3)
        s = np.linspace(-n / 4, n / 4, 101)
        np.testing.assert_allclose(sx(s), f(s), atol=1e-7)
        assert rep.extra["delta"] == MACHINE_DELTA

    def test_identity_case(self):
        b = np.array([1.0, -2.0, 0.5])
        sx, _ = reconstruct_tsvd([0.0, 1.0, 2.0], b, 1e-3)
        np.testing.assert_allclose(sx.coeffs, b, atol=1e-14)
        np.testing.assert_allclose(sx(np.array([0.0, 1.0, 2.0])), b, atol=1e-14)

    def test_matches_pinv_oracle(self):
        rng = np.random.default_rng(4)
        t = np.sort(rng.uniform(-6, 6, 15))
        b = rng.standard_normal(15)
        tau = 1e-3
        sx, rep = reconstruct_tsvd(t, b, 0.1, tau=tau)
        R = build_gram(t).matrix
        lam, V = np.linalg.eigh(R)      # symmetric PSD: eigen = singular
        keep = np.abs(lam) >= tau
        ref = V[:, keep] @ ((V[:, keep].T @ b) / lam[keep])
        np.testing.assert_allclose(sx.coeffs, ref, atol=1e-8)
        assert rep.tau == tau

    def test_delta_required(self):
        with pytest.raises(ValueError):
            reconstruct_tsvd([0.0, 1.0], [1.0, 1.0], None)

    def test_near_best_threshold_on_prolate(self):
        for seed in range(6):
            t, R, c, b = noisy_prolate(64, 2, seed)
            sx, _ = reconstruct_tsvd(t, b, 1e-2)
            F = svd(R)
            best = min(np.linalg.norm(tsvd_solve(R, b, s, factors=F) - c) for s in F.s)
            assert np.linalg.norm(sx.coeffs - c) <= 3 * best

    def test_report_serializes(self):
        _, rep = reconstruct_tsvd([0.0, 0.5, 1.0], [1.0, 0.0, 1.0], 0.01)
        d = rep.to_dict()
        assert d["method"] == "frame-tsvd" and d["extra"]["kept_singular_values"] >= 1


class TestCg:
    def test_well_conditioned_matches_direct(self):
        t = np.arange(-6, 7) * 1.1
        b = np.random.default_rng(2).standard_normal(13)
        sx, rep = reconstruct_cg(t, b, 1e-12)
        ref = np.linalg.solve(build_gram(t).matrix, b)
        np.testing.assert_allclose(sx.coeffs, ref, atol=1e-8)
        assert rep.termination == "stopping-rule"

    def test_discrepancy_stop_on_prolate(self):
        t, R, c, b = noisy_prolate(64, 2, 0)
        sx, rep = reconstruct_cg(t, b, 1e-2)
        assert rep.termination == "stopping-rule"
        assert np.linalg.norm(b - R @ sx.coeffs) <= 1.1e-2 * np.linalg.norm(b)
        errs = []
        from nusampling.linalg import cg_solve
        cg_solve(R, b, max_iter=40, tol=0, callback=lambda x: errs.append(np.linalg.norm(x - c)))
        assert np.linalg.norm(sx.coeffs - c) <= 3 * min(errs)

    def test_tau_stop_precondition(self):
        with pytest.raises(ValueError):
            reconstruct_cg([0.0, 1.0], [1.0, 1.0], 0.1, tau_stop=1.0)

    def test_divergence_is_reported_not_raised(self):
        t, R, c, b = noisy_prolate(32, 4, 3)
        sx, rep = reconstruct_cg(t, b, 1e-2, max_iter=20)
        assert rep.termination in ("stopping-rule", "max-iter")
        assert rep.success == (rep.termination == "stopping-rule")
