"""Truncated-frame reconstruction with sinc atoms.

The finite section of the frame Gram matrix, ``R[j, l] = sinc(t_j - t_l)``,
is assembled for the supplied points and the coefficients of
``f(t) = sum_j c_j sinc(t - t_j)`` are obtained from ``R c = b`` either by a
truncated SVD or by CG stopped with the discrepancy principle.  Both are
regularizations of a badly conditioned system: even for regular oversampling
the section's spectrum decays to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import cg_solve, svd, tsvd_solve
from .report import ReconstructionReport
from .signals import sinc

__all__ = [
    "GramSystem",
    "SincExpansion",
    "build_gram",
    "estimate_tau",
    "reconstruct_tsvd",
    "reconstruct_cg",
    "MACHINE_DELTA",
]

# noise level used when the data are exact
MACHINE_DELTA = 1e-16


@dataclass(frozen=True)
class GramSystem:
    points: np.ndarray
    matrix: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(default=None, repr=False)
    noise_level: float = None


@dataclass(frozen=True)
class SincExpansion:
    """``f(t) = sum_j coeffs[j] * sinc(t - points[j])``."""

    points: np.ndarray
    coeffs: np.ndarray

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = sinc(t.ravel()[:, None] - self.points[None, :]) @ self.coeffs
        return out.reshape(t.shape)


def build_gram(points, samples=None, noise_level=None):
    points = np.asarray(getattr(points, "points", points), dtype=float)
    if points.size == 0:
        raise ValueError("no sampling points")
    R = sinc(points[:, None] - points[None, :])
    rhs = None if samples is None else np.asarray(samples)
    return GramSystem(points, R, rhs, noise_level)


def estimate_tau(B_upper, delta, p=2):
    """Truncation level ``B * (delta/p)**(1/(p+1))`` for a TSVD.

    ``p`` is the smoothness index of the solution; ``p=1`` and ``p=2`` bracket
    the recommended range.  ``delta`` must be positive; exact data should use
    :data:`MACHINE_DELTA`.
    """
    if not B_upper > 0:
        raise ValueError("B_upper must be positive")
    if not delta > 0:
        raise ValueError("delta must be positive; substitute MACHINE_DELTA for exact data")
    if p < 1:
        raise ValueError("p must be >= 1")
    return B_upper * (delta / p) ** (1.0 / (p + 1))


def _effective_delta(delta):
    if delta is None:
        raise ValueError("noise level delta is required")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    return MACHINE_DELTA if delta == 0 else float(delta)


def reconstruct_tsvd(points, samples, delta, p=2, tau=None):
    """TSVD solution of the truncated Gram system.

    The upper frame bound in the threshold rule is replaced by the largest
    singular value of the section, which never exceeds it.  An explicit
    ``tau`` bypasses the rule.

    Returns
    -------
    SincExpansion, ReconstructionReport
    """
    G = build_gram(points, samples)
    b = np.asarray(samples)
    if b.shape != G.points.shape:
        raise ValueError("samples must be aligned with points")
    d = _effective_delta(delta)
    F = svd(G.matrix)
    B_est = float(F.s[0])
    if tau is None:
        tau = estimate_tau(B_est, d, p)
    c = tsvd_solve(G.matrix, b, tau, factors=F)
    if not np.iscomplexobj(b):
        c = c.real
    res = float(np.linalg.norm(b - G.matrix @ c))
    report = ReconstructionReport(
        method="frame-tsvd",
        coefficients=c,
        residuals=[res],
        termination="direct",
        tau=float(tau),
        extra={"B_estimate": B_est, "delta": d, "p": p,
               "kept_singular_values": int(np.sum(F.s >= tau)),
               "condition_number": float(F.s[0] / F.s[-1]) if F.s[-1] > 0 else float("inf")},
    )
    return SincExpansion(G.points, c), report


def reconstruct_cg(points, samples, delta, tau_stop=1.1, max_iter=None, callback=None):
    """CG on the truncated Gram system, stopped by the discrepancy principle.

    Iteration ends at the first iterate with
    ``||b - R c_k|| <= tau_stop * delta * ||b||``; otherwise after
    ``max_iter`` steps (default ``len(points)``), which the report flags.
    """
    if not tau_stop > 1:
        raise ValueError("tau_stop must be > 1")
    G = build_gram(points, samples)
    b = np.asarray(samples)
    if b.shape != G.points.shape:
        raise ValueError("samples must be aligned with points")
    d = _effective_delta(delta)
    bound = tau_stop * d * np.linalg.norm(b)

    def discrepancy(x, r, k):
        return np.linalg.norm(r) <= bound

    c, trace = cg_solve(G.matrix, b, stop=discrepancy, max_iter=max_iter, tol=0.0,
                        callback=callback)
    if not np.iscomplexobj(b):
        c = c.real
    report = ReconstructionReport(
        method="frame-cg",
        coefficients=c,
        residuals=trace.residual_norms,
        iterations=trace.iterations,
        termination=trace.termination,
        tau=float(tau_stop),
        success=trace.termination == "stopping-rule",
        extra={"delta": d, "discrepancy_bound": float(bound)},
    )
    return SincExpansion(G.points, c), report
