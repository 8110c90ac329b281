"""Weighted least-squares trigonometric approximation via Toeplitz systems.

Given samples ``b_j`` at ``t_j`` and weights ``w_j > 0`` the degree-``M``
polynomial minimizing ``sum_j w_j |p(t_j) - b_j|**2`` has coefficients
solving ``T a = y`` with

    T[k, l] = P**-1   * sum_j w_j exp(-2j*pi*(k-l)*t_j/P)
    y[k]    = P**-0.5 * sum_j w_j b_j exp(-2j*pi*k*t_j/P)

``T`` is Hermitian Toeplitz of size ``2M+1`` whatever the number of samples,
so CG with FFT products costs ``O(M log M)`` per step.  Entries are formed by
direct summation in ``O(r M)``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .linalg import BlockToeplitz2D, ToeplitzSystem, cg_solve
from .report import ReconstructionReport
from .signals import TrigPoly, TrigPoly2D, fourier_matrix

__all__ = [
    "default_weights",
    "build_toeplitz",
    "build_rhs",
    "act_reconstruct",
    "vandermonde_lsq_oracle",
    "normal_equation_discrepancy",
    "build_toeplitz_2d",
    "build_rhs_2d",
    "act_reconstruct_2d",
    "vandermonde_lsq_oracle_2d",
    "data_residual",
]


def _points(points):
    return np.asarray(getattr(points, "points", points), dtype=float)


def _period(points, M, period):
    if period is not None:
        return float(period)
    return 2.0 * M + 1


def default_weights(points, period):
    """Half the distance between the two neighbours, wrapping around the torus.

    The weights sum to ``period``.
    """
    t = _points(points)
    if t.size < 2:
        raise ValueError("need at least 2 points")
    if np.any(np.diff(t) <= 0):
        raise ValueError("points must be strictly increasing")
    if t[-1] - t[0] >= period:
        raise ValueError("points must lie within one period")
    ext = np.concatenate([[t[-1] - period], t, [t[0] + period]])
    return (ext[2:] - ext[:-2]) / 2.0


def _resolve_weights(t, weights, period):
    if weights is None:
        return default_weights(t, period)
    if isinstance(weights, str):
        if weights == "unit":
            return np.ones(t.size)
        if weights == "voronoi":
            return default_weights(t, period)
        raise ValueError(f"unknown weights {weights!r}")
    w = np.asarray(weights, dtype=float)
    if w.shape != t.shape or np.any(w <= 0):
        raise ValueError("weights must be positive and aligned with points")
    return w


def build_toeplitz(points, weights, M, period=None, samples=None):
    """Assemble the level-``M`` Toeplitz matrix (and ``rhs`` if samples are given)."""
    t = _points(points)
    P = _period(t, M, period)
    w = np.ones(t.size) if weights is None else np.asarray(weights, dtype=float)
    s = np.arange(2 * M + 1)
    z = np.exp(-2j * np.pi * np.outer(s, t) / P) @ w / P
    rhs = None if samples is None else build_rhs(t, samples, w, M, P)
    return ToeplitzSystem(z, rhs)


def build_rhs(points, samples, weights, M, period=None):
    t = _points(points)
    b = np.asarray(samples)
    w = np.ones(t.size) if weights is None else np.asarray(weights, dtype=float)
    if b.shape != t.shape or w.shape != t.shape:
        raise ValueError("samples and weights must be aligned with points")
    P = _period(t, M, period)
    return fourier_matrix(t, M, P).conj().T @ (w * b)


def data_residual(p, points, samples, weights=None):
    """``sum_j w_j |p(t_j) - b_j|**2`` (unit weights if omitted)."""
    d = p(_points(points)) - np.asarray(samples)
    w = 1.0 if weights is None else np.asarray(weights)
    return float(np.sum(w * np.abs(d) ** 2))


def act_reconstruct(points, samples, M, weights=None, period=None, cg_tol=1e-10,
                    max_iter=None, x0=None, stop=None, delta=None, tau_stop=1.1):
    """Least-squares degree-``M`` polynomial through CG on the Toeplitz system.

    Parameters
    ----------
    points, samples : array_like
        Sample locations within one period and the (possibly noisy) values.
    M : int
        Degree; ``2M+1 <= len(points)`` is required.
    weights : array_like, "unit", "voronoi" or None
        ``None`` and ``"voronoi"`` use :func:`default_weights`.
    period : float, optional
        Defaults to ``2M+1``.
    cg_tol, max_iter
        Relative residual tolerance and iteration cap (default ``4*(2M+1)``).
    x0 : ndarray, optional
        Initial coefficients.
    stop : callable, optional
        Extra stopping rule forwarded to :func:`cg_solve`.
    delta : float, optional
        Relative noise level of the samples.  When given, CG stops at the
        first iterate with ``sum w|p(t_j)-b_j|**2 <= (tau_stop*delta)**2 * sum w|b_j|**2``
        (weights rescaled to mean one), which regularizes badly conditioned
        geometries.
    tau_stop : float
        Safety factor ``> 1`` of that discrepancy rule.

    Returns
    -------
    TrigPoly, ReconstructionReport
    """
    t = _points(points)
    b = np.asarray(samples)
    if b.shape != t.shape:
        raise ValueError("samples must be aligned with points")
    if t.size < 2 * M + 1:
        raise ValueError(f"need r >= 2M+1 samples: r={t.size}, M={M}")
    P = _period(t, M, period)
    w = _resolve_weights(t, weights, P)
    T = build_toeplitz(t, w, M, P, samples=b)
    max_iter = 4 * (2 * M + 1) if max_iter is None else max_iter
    if delta is not None:
        stop = _discrepancy_rule(t, b, w, M, P, delta, tau_stop, stop)
    a, trace = cg_solve(T, T.rhs, stop=stop, max_iter=max_iter, tol=cg_tol, x0=x0)
    p = TrigPoly(M, P, a)
    report = ReconstructionReport(
        method="act",
        coefficients=a,
        residuals=trace.residual_norms,
        iterations=trace.iterations,
        termination=trace.termination,
        degree=M,
        success=trace.termination in ("tolerance", "stopping-rule"),
        extra={"period": P, "data_residual": data_residual(p, t, b)},
    )
    return p, report


def _discrepancy_rule(t, b, w, M, P, delta, tau_stop, extra=None):
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if not tau_stop > 1:
        raise ValueError("tau_stop must be > 1")
    wn = w * w.size / w.sum()
    E = fourier_matrix(t, M, P)
    bound = (tau_stop * delta) ** 2 * np.sum(wn * np.abs(b) ** 2)

    def rule(x, r, k):
        if extra is not None and extra(x, r, k):
            return True
        return np.sum(wn * np.abs(E @ x - b) ** 2) <= bound

    return rule


def _discrepancy_rule_2d(pts, b, w, M, P, delta, tau_stop, extra=None):
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if not tau_stop > 1:
        raise ValueError("tau_stop must be > 1")
    wn = w * w.size / w.sum()
    Eu = fourier_matrix(pts[:, 0], M, P)
    Ev = fourier_matrix(pts[:, 1], M, P)
    bound = (tau_stop * delta) ** 2 * np.sum(wn * np.abs(b) ** 2)

    def rule(x, r, k):
        if extra is not None and extra(x, r, k):
            return True
        d = np.einsum("jk,jk->j", Eu @ x, Ev) - b
        return np.sum(wn * np.abs(d) ** 2) <= bound

    return rule


def _weighted_lstsq(A, rhs):
    Q, R = scipy.linalg.qr(A, mode="economic")
    d = np.abs(np.diag(R))
    if d.min() <= 1e-13 * d.max():
        raise np.linalg.LinAlgError("rank-deficient least-squares problem")
    return scipy.linalg.solve_triangular(R, Q.conj().T @ rhs)


def vandermonde_lsq_oracle(points, samples, weights, M, period=None):
    """Dense weighted least squares ``min ||W (V a - b)||`` by Householder QR.

    Independent of the Toeplitz route; raises ``LinAlgError`` when the
    Vandermonde matrix is numerically rank deficient.
    """
    t = _points(points)
    b = np.asarray(samples)
    if t.size < 2 * M + 1:
        raise ValueError(f"need r >= 2M+1 samples: r={t.size}, M={M}")
    P = _period(t, M, period)
    w = np.ones(t.size) if weights is None else np.asarray(weights, dtype=float)
    sw = np.sqrt(w)
    V = fourier_matrix(t, M, P)
    return TrigPoly(M, P, _weighted_lstsq(sw[:, None] * V, sw * b))


def normal_equation_discrepancy(points, samples, weights, M, period=None):
    """Relative gaps between the Toeplitz assembly and ``V* W^2 V``, ``V* W^2 b``."""
    t = _points(points)
    P = _period(t, M, period)
    w = np.ones(t.size) if weights is None else np.asarray(weights, dtype=float)
    V = fourier_matrix(t, M, P)
    T_dense = V.conj().T @ (w[:, None] * V)
    y_dense = V.conj().T @ (w * np.asarray(samples))
    T = build_toeplitz(t, w, M, P, samples=samples)
    eT = np.linalg.norm(T.dense() - T_dense) / np.linalg.norm(T_dense)
    ny = np.linalg.norm(y_dense)
    ey = np.linalg.norm(T.rhs - y_dense) / ny if ny > 0 else np.linalg.norm(T.rhs)
    return float(eT), float(ey)


# --- two dimensions -------------------------------------------------------

def _points2d(points):
    pts = np.asarray(getattr(points, "points", points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("2-D points must have shape (r, 2)")
    return pts


def build_toeplitz_2d(points, weights, M, period=None, samples=None):
    """Block-Toeplitz-Toeplitz-block matrix of the tensor-degree-``M`` problem."""
    pts = _points2d(points)
    P = 2.0 * M + 1 if period is None else float(period)
    w = np.ones(pts.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    s = np.arange(-2 * M, 2 * M + 1)
    Eu = np.exp(-2j * np.pi * np.outer(pts[:, 0], s) / P)
    Ev = np.exp(-2j * np.pi * np.outer(pts[:, 1], s) / P)
    gen = (Eu.T * w) @ Ev / P ** 2
    rhs = None if samples is None else build_rhs_2d(pts, samples, w, M, P)
    return BlockToeplitz2D(gen, rhs)


def build_rhs_2d(points, samples, weights, M, period=None):
    pts = _points2d(points)
    b = np.asarray(samples)
    if b.shape != (pts.shape[0],):
        raise ValueError("samples must be aligned with points")
    P = 2.0 * M + 1 if period is None else float(period)
    w = np.ones(pts.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    Eu = fourier_matrix(pts[:, 0], M, P).conj()
    Ev = fourier_matrix(pts[:, 1], M, P).conj()
    return (Eu.T * (w * b)) @ Ev


def _vandermonde_2d(pts, M, P):
    Eu = fourier_matrix(pts[:, 0], M, P)
    Ev = fourier_matrix(pts[:, 1], M, P)
    return (Eu[:, :, None] * Ev[:, None, :]).reshape(pts.shape[0], -1)


def act_reconstruct_2d(points, samples, M, weights=None, period=None, cg_tol=1e-10,
                       max_iter=None, x0=None, stop=None, delta=None, tau_stop=1.1):
    """2-D analog of :func:`act_reconstruct`; weights default to 1.

    ``r >= (2M+1)**2`` is necessary but not sufficient for a unique solution;
    when CG fails to reach ``cg_tol`` the report says so.
    """
    pts = _points2d(points)
    b = np.asarray(samples)
    if b.shape != (pts.shape[0],):
        raise ValueError("samples must be aligned with points")
    n = 2 * M + 1
    if pts.shape[0] < n * n:
        raise ValueError(f"need r >= (2M+1)^2 samples: r={pts.shape[0]}, M={M}")
    P = 2.0 * M + 1 if period is None else float(period)
    w = np.ones(pts.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    T = build_toeplitz_2d(pts, w, M, P, samples=b)
    max_iter = 4 * n * n if max_iter is None else max_iter
    if delta is not None:
        stop = _discrepancy_rule_2d(pts, b, w, M, P, delta, tau_stop, stop)
    a, trace = cg_solve(T, T.rhs, stop=stop, max_iter=max_iter, tol=cg_tol, x0=x0)
    p = TrigPoly2D(M, P, a)
    d = p(pts[:, 0], pts[:, 1]) - b
    report = ReconstructionReport(
        method="act-2d",
        coefficients=a,
        residuals=trace.residual_norms,
        iterations=trace.iterations,
        termination=trace.termination,
        degree=M,
        success=trace.termination in ("tolerance", "stopping-rule"),
        extra={"period": P, "data_residual": float(np.sum(w * np.abs(d) ** 2))},
    )
    return p, report


def vandermonde_lsq_oracle_2d(points, samples, weights, M, period=None):
    pts = _points2d(points)
    P = 2.0 * M + 1 if period is None else float(period)
    w = np.ones(pts.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    sw = np.sqrt(w)
    V = _vandermonde_2d(pts, M, P)
    a = _weighted_lstsq(sw[:, None] * V, sw * np.asarray(samples))
    return TrigPoly2D(M, P, a.reshape(2 * M + 1, 2 * M + 1))
