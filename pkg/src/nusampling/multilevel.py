"""Reconstruction without a known bandwidth by sweeping the polynomial degree.

Levels ``M = 1, 2, ...`` share one period, so a level-``M`` polynomial embeds
into level ``M+1`` by zero padding and serves as the next initial guess.  At
each level CG runs on the Toeplitz system until the *inner* rule

    res_k <= 2 tau (delta ||b|| + E_M)**2

holds, where ``res_k = sum_j |p_k(t_j) - b_j|**2`` and ``E_M`` estimates the
part of the data the level cannot represent (see :func:`estimate_tail`).  The
sweep ends as soon as the *outer* rule

    res <= 2 tau delta**2 ||b||**2

holds, i.e. the data are fitted down to the noise and no further.  Here
``delta`` is the relative noise norm ``||b_delta - b|| / ||b||``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .act import build_toeplitz, build_toeplitz_2d
from .linalg import cg_solve
from .report import ReconstructionReport
from .signals import TrigPoly, TrigPoly2D, fourier_matrix

__all__ = [
    "LevelRecord",
    "LevelTrace",
    "estimate_tail",
    "level_schedule",
    "multilevel_reconstruct",
    "multilevel_reconstruct_2d",
]


@dataclass
class LevelRecord:
    degree: int
    iterations: int
    residual: float
    tail: float
    rule: str
    outer_satisfied: bool


@dataclass
class LevelTrace:
    levels: List[LevelRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    @property
    def residuals(self):
        return [lv.residual for lv in self.levels]

    @property
    def tails(self):
        return [lv.tail for lv in self.levels]

    def to_csv(self):
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["level", "iterations", "residual", "tail", "rule"])
        for lv in self.levels:
            wr.writerow([lv.degree, lv.iterations, repr(lv.residual), repr(lv.tail), lv.rule])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls([LevelRecord(int(r["level"]), int(r["iterations"]), float(r["residual"]),
                                float(r["tail"]), r["rule"], r["rule"] == "outer")
                    for r in rows])


def estimate_tail(floor_residual, delta, b_norm):
    """Estimate ``||f - Q_M f||`` from the least-squares floor of level ``M``.

    The floor ``min_p sum_j |p(t_j) - b_j|**2`` is the noise left unfitted plus
    the energy of the signal outside the level; attributing all of the excess
    over the noise energy ``(delta ||b||)**2`` to the latter gives

        E_M = sqrt(max(0, floor - (delta ||b||)**2)).

    Floors of nested levels never increase, so neither does ``E_M``; it is at
    most ``||b||`` and vanishes once the level represents the data.
    """
    if floor_residual < 0 or b_norm < 0:
        raise ValueError("residual and norm must be non-negative")
    return float(np.sqrt(max(0.0, floor_residual - (delta * b_norm) ** 2)))


def level_schedule(M_max, schedule="unit"):
    if schedule == "unit":
        return list(range(1, M_max + 1))
    if schedule == "geometric":
        out, M = [], 1
        while M < M_max:
            out.append(M)
            M *= 2
        return out + [M_max]
    raise ValueError(f"unknown schedule {schedule!r}")


def _sweep(levels, make_level, b, w, delta, tau_stop, cg_tol, max_iter):
    """Run the level loop; ``make_level(M)`` returns ``(T, evaluate, embed)``."""
    bn2 = float(np.sum(w * np.abs(b) ** 2))
    bn = np.sqrt(bn2)
    outer = 2 * tau_stop * delta ** 2 * bn2
    trace = LevelTrace()
    a_prev, coeffs, success = None, None, False

    for M in levels:
        T, evaluate, embed = make_level(M)
        x0 = embed(a_prev)

        def res(a):
            return float(np.sum(w * np.abs(evaluate(a) - b) ** 2))

        cap = max_iter(M)
        # probe the least-squares floor of this level
        a_floor, _ = cg_solve(T, T.rhs, max_iter=cap, tol=cg_tol, x0=x0)
        tail = estimate_tail(min(res(a_floor), res(x0)), delta, bn)
        inner = 2 * tau_stop * (delta * bn + tail) ** 2

        a, ct = cg_solve(T, T.rhs, stop=lambda x, r, k: res(x) <= inner,
                         max_iter=cap, tol=cg_tol, x0=x0)
        rk = res(a)
        ok = rk <= outer
        rule = "outer" if ok else ("inner" if ct.termination == "stopping-rule" else ct.termination)
        trace.levels.append(LevelRecord(M, ct.iterations, rk, tail, rule, ok))
        a_prev, coeffs = a, a
        if ok:
            success = True
            break
    return coeffs, trace, success, outer


def _check_common(delta, tau_stop):
    if not delta > 0:
        raise ValueError("delta must be positive (use 1e-16 for exact data)")
    if not tau_stop > 1:
        raise ValueError("tau_stop must be > 1")


def _normalized_weights(weights, r):
    if weights is None:
        return np.ones(r)
    w = np.asarray(weights, dtype=float)
    if w.shape != (r,) or np.any(w <= 0):
        raise ValueError("weights must be positive and aligned with points")
    return w * r / w.sum()


def multilevel_reconstruct(points, samples, delta, tau_stop=1.1, M_max=None, period=None,
                           weights=None, cg_tol=1e-10, max_iter=None, schedule="unit"):
    """Degree-adaptive least-squares reconstruction in one dimension.

    Parameters
    ----------
    points, samples : array_like or SamplingSet
        ``period`` is taken from a :class:`SamplingSet`; for plain arrays it
        defaults to ``span * r / (r - 1)``.
    delta : float
        Relative noise norm; must be positive.
    tau_stop : float
        Safety factor ``> 1`` of both stopping rules.
    M_max : int, optional
        Highest level; defaults to the largest ``M`` with ``2M+1 <= r``.
    weights : array_like, optional
        Residual weights, rescaled to mean one; unit weights by default.
    max_iter : int, optional
        CG cap per level, default ``4*(2M+1)``.

    Returns
    -------
    TrigPoly, LevelTrace, ReconstructionReport
        ``report.success`` is false when ``M_max`` was reached without meeting
        the outer rule; the last level is returned in that case.
    """
    _check_common(delta, tau_stop)
    P = period if period is not None else getattr(points, "period", None)
    t = np.asarray(getattr(points, "points", points), dtype=float)
    b = np.asarray(samples)
    r = t.size
    if b.shape != t.shape:
        raise ValueError("samples must be aligned with points")
    if P is None:
        P = (t[-1] - t[0]) * r / (r - 1)
    M_max = (r - 1) // 2 if M_max is None else int(M_max)
    if M_max < 1 or r < 2 * M_max + 1:
        raise ValueError(f"need M_max >= 1 and r >= 2*M_max+1 (r={r}, M_max={M_max})")
    w = _normalized_weights(weights, r)
    cap = (lambda M: 4 * (2 * M + 1)) if max_iter is None else (lambda M: max_iter)

    def make_level(M):
        T = build_toeplitz(t, w, M, P, samples=b)
        E = fourier_matrix(t, M, P)

        def embed(a):
            x = np.zeros(2 * M + 1, dtype=complex)
            if a is not None:
                m = (a.size - 1) // 2
                x[M - m: M + m + 1] = a
            return x

        return T, (lambda a: E @ a), embed

    a, trace, success, outer = _sweep(level_schedule(M_max, schedule), make_level, b, w,
                                      delta, tau_stop, cg_tol, cap)
    M = trace.levels[-1].degree
    p = TrigPoly(M, P, a)
    report = ReconstructionReport(
        method="multilevel",
        coefficients=a,
        residuals=trace.residuals,
        iterations=sum(lv.iterations for lv in trace),
        termination="outer" if success else "max-level",
        degree=M,
        tau=tau_stop,
        success=success,
        extra={"period": P, "delta": delta, "outer_bound": outer,
               "levels": [lv.__dict__ for lv in trace]},
    )
    return p, trace, report


def multilevel_reconstruct_2d(points, samples, delta, tau_stop=1.1, M_max=None, period=None,
                              weights=None, cg_tol=1e-10, max_iter=None, schedule="unit"):
    """Two-dimensional analog of :func:`multilevel_reconstruct` on the square torus."""
    _check_common(delta, tau_stop)
    P = period if period is not None else getattr(points, "period", None)
    pts = np.asarray(getattr(points, "points", points), dtype=float)
    b = np.asarray(samples)
    r = pts.shape[0]
    if b.shape != (r,):
        raise ValueError("samples must be aligned with points")
    if P is None:
        raise ValueError("period is required for plain 2-D point arrays")
    if M_max is None:
        M_max = int((np.sqrt(r) - 1) // 2)
    if M_max < 1 or r < (2 * M_max + 1) ** 2:
        raise ValueError(f"need M_max >= 1 and r >= (2*M_max+1)^2 (r={r}, M_max={M_max})")
    w = _normalized_weights(weights, r)
    cap = (lambda M: 4 * (2 * M + 1) ** 2) if max_iter is None else (lambda M: max_iter)

    def make_level(M):
        n = 2 * M + 1
        T = build_toeplitz_2d(pts, w, M, P, samples=b)
        Eu = fourier_matrix(pts[:, 0], M, P)
        Ev = fourier_matrix(pts[:, 1], M, P)

        def embed(a):
            x = np.zeros((n, n), dtype=complex)
            if a is not None:
                m = (a.shape[0] - 1) // 2
                x[M - m: M + m + 1, M - m: M + m + 1] = a
            return x

        return T, (lambda a: np.einsum("jk,jk->j", Eu @ a, Ev)), embed

    a, trace, success, outer = _sweep(level_schedule(M_max, schedule), make_level, b, w,
                                      delta, tau_stop, cg_tol, cap)
    M = trace.levels[-1].degree
    p = TrigPoly2D(M, P, a)
    report = ReconstructionReport(
        method="multilevel-2d",
        coefficients=a,
        residuals=trace.residuals,
        iterations=sum(lv.iterations for lv in trace),
        termination="outer" if success else "max-level",
        degree=M,
        tau=tau_stop,
        success=success,
        extra={"period": P, "delta": delta, "outer_bound": outer,
               "levels": [lv.__dict__ for lv in trace]},
    )
    return p, trace, report
