"""scikit-learn style wrappers around the reconstruction methods.

``X`` holds sample locations (shape ``(r, 1)`` or ``(r, 2)``) and ``y`` the
values.  ``predict`` evaluates the fitted signal.  Complex ``y`` is accepted;
``predict`` then returns complex values, otherwise real ones.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .act import act_reconstruct, act_reconstruct_2d
from .frame import reconstruct_cg, reconstruct_tsvd
from .multilevel import multilevel_reconstruct, multilevel_reconstruct_2d

__all__ = ["TrigPolyRegressor", "MultilevelRegressor", "TruncatedFrameRegressor"]


def _check_Xy(X, y, dims=(1, 2)):
    X = check_array(X, ensure_2d=True, dtype=float)
    if X.shape[1] not in dims:
        raise ValueError(f"X must have {' or '.join(map(str, dims))} column(s), got {X.shape[1]}")
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise ValueError("y must be 1-D and aligned with X")
    if not np.all(np.isfinite(y)):
        raise ValueError("y contains NaN or inf")
    return X, y


def _sorted_1d(X, y):
    order = np.argsort(X[:, 0], kind="stable")
    t = X[order, 0]
    if np.any(np.diff(t) <= 0):
        raise ValueError("sample locations must be distinct")
    return t, y[order]


class _Base(RegressorMixin, BaseEstimator):
    def _finish(self, y):
        self.complex_ = bool(np.iscomplexobj(y))
        self.n_features_in_ = self.n_dims_

    def predict(self, X):
        check_is_fitted(self, "signal_")
        X = check_array(X, ensure_2d=True, dtype=float)
        if X.shape[1] != self.n_dims_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_dims_}")
        out = self.signal_(X[:, 0]) if self.n_dims_ == 1 else self.signal_(X[:, 0], X[:, 1])
        return out if self.complex_ else np.real(out)


class TrigPolyRegressor(_Base):
    """Weighted least-squares trigonometric polynomial of fixed degree (Toeplitz CG).

    Parameters
    ----------
    degree : int
    period : float, optional
        Torus length; defaults to ``2*degree+1``.
    weights : {"voronoi", "unit"}
        ``"voronoi"`` is only available in 1-D; 2-D fits use unit weights.
    delta : float, optional
        Relative noise level; enables discrepancy stopping of CG.
    tau_stop, cg_tol, max_iter
        Forwarded to :func:`act_reconstruct`.
    """

    def __init__(self, degree=10, period=None, weights="voronoi", delta=None, tau_stop=1.1,
                 cg_tol=1e-10, max_iter=None):
        self.degree = degree
        self.period = period
        self.weights = weights
        self.delta = delta
        self.tau_stop = tau_stop
        self.cg_tol = cg_tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X, y = _check_Xy(X, y)
        self.n_dims_ = X.shape[1]
        kw = dict(period=self.period, cg_tol=self.cg_tol, max_iter=self.max_iter,
                  delta=self.delta, tau_stop=self.tau_stop)
        if self.n_dims_ == 1:
            t, b = _sorted_1d(X, y)
            self.signal_, self.report_ = act_reconstruct(t, b, self.degree, weights=self.weights, **kw)
        else:
            if self.weights not in ("unit", None):
                raise ValueError("2-D fits support unit weights only")
            self.signal_, self.report_ = act_reconstruct_2d(X, y, self.degree, **kw)
        self.coef_ = self.signal_.coeffs
        self._finish(y)
        return self


class MultilevelRegressor(_Base):
    """Degree chosen from the data by the multilevel sweep.

    Parameters
    ----------
    delta : float
        Relative noise level ``||noise|| / ||y||``; must be positive.
    period : float, optional
        Torus length.  In 1-D it defaults to ``span * r/(r-1)``; 2-D fits require it.
    """

    def __init__(self, delta=0.01, period=None, tau_stop=1.1, max_degree=None,
                 schedule="unit", cg_tol=1e-10, max_iter=None):
        self.delta = delta
        self.period = period
        self.tau_stop = tau_stop
        self.max_degree = max_degree
        self.schedule = schedule
        self.cg_tol = cg_tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X, y = _check_Xy(X, y)
        self.n_dims_ = X.shape[1]
        kw = dict(tau_stop=self.tau_stop, M_max=self.max_degree, period=self.period,
                  cg_tol=self.cg_tol, max_iter=self.max_iter, schedule=self.schedule)
        if self.n_dims_ == 1:
            t, b = _sorted_1d(X, y)
            self.signal_, self.trace_, self.report_ = multilevel_reconstruct(t, b, self.delta, **kw)
        else:
            self.signal_, self.trace_, self.report_ = multilevel_reconstruct_2d(X, y, self.delta, **kw)
        self.degree_ = self.signal_.degree
        self.coef_ = self.signal_.coeffs
        self._finish(y)
        return self


class TruncatedFrameRegressor(_Base):
    """Sinc expansion over the sample locations, regularized by TSVD or stopped CG (1-D)."""

    def __init__(self, delta=0.01, solver="tsvd", p=2, tau=None, tau_stop=1.1, max_iter=None):
        self.delta = delta
        self.solver = solver
        self.p = p
        self.tau = tau
        self.tau_stop = tau_stop
        self.max_iter = max_iter

    def fit(self, X, y):
        X, y = _check_Xy(X, y, dims=(1,))
        self.n_dims_ = 1
        t, b = _sorted_1d(X, y)
        if self.solver == "tsvd":
            self.signal_, self.report_ = reconstruct_tsvd(t, b, self.delta, p=self.p, tau=self.tau)
        elif self.solver == "cg":
            self.signal_, self.report_ = reconstruct_cg(t, b, self.delta, tau_stop=self.tau_stop,
                                                        max_iter=self.max_iter)
        else:
            raise ValueError(f"unknown solver {self.solver!r}; use 'tsvd' or 'cg'")
        self.coef_ = self.signal_.coeffs
        self._finish(y)
        return self
