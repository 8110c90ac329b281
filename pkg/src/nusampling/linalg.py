"""Numerical kernels: Hermitian CG, dense SVD/TSVD, FFT Toeplitz products."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

__all__ = [
    "ToeplitzSystem",
    "BlockToeplitz2D",
    "CgTrace",
    "SvdFactors",
    "cg_solve",
    "svd",
    "tsvd_solve",
    "toeplitz_matvec",
    "block_toeplitz_matvec_2d",
    "next_pow2",
]


def next_pow2(n):
    return 1 << max(0, int(n - 1).bit_length())


@dataclass(frozen=True)
class ToeplitzSystem:
    """Hermitian Toeplitz matrix ``T[k, l] = z[k-l]`` with ``z[-s] = conj(z[s])``.

    Only the first column ``z[0..dim-1]`` is stored.  ``rhs`` is optional.
    """

    first_column: np.ndarray
    rhs: Optional[np.ndarray] = None
    _symbol: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        z = np.array(self.first_column, dtype=complex)
        if z.ndim != 1 or z.size == 0:
            raise ValueError("first_column must be a non-empty 1-D array")
        z.setflags(write=False)
        object.__setattr__(self, "first_column", z)
        if self.rhs is not None:
            y = np.array(self.rhs, dtype=complex)
            if y.shape != z.shape:
                raise ValueError("rhs length must equal dim")
            y.setflags(write=False)
            object.__setattr__(self, "rhs", y)
        n = next_pow2(2 * z.size - 1)
        c = np.zeros(n, dtype=complex)
        c[: z.size] = z
        if z.size > 1:
            c[n - z.size + 1:] = np.conj(z[:0:-1])
        sym = np.fft.fft(c)
        sym.setflags(write=False)
        object.__setattr__(self, "_symbol", sym)

    @property
    def dim(self):
        return self.first_column.size

    @property
    def shape(self):
        return (self.dim, self.dim)

    def dense(self):
        z = self.first_column
        d = self.dim
        s = np.arange(d)[:, None] - np.arange(d)[None, :]
        return np.where(s >= 0, z[np.abs(s)], np.conj(z[np.abs(s)]))

    def matvec(self, x):
        return toeplitz_matvec(self, x)

    __matmul__ = matvec


@dataclass(frozen=True)
class BlockToeplitz2D:
    """Block-Toeplitz matrix with Toeplitz blocks acting on ``(d1, d2)`` grids.

    ``generator[s1 + d1 - 1, s2 + d2 - 1] = z[s1, s2]`` for ``|s1| < d1``,
    ``|s2| < d2``, and ``(T X)[k] = sum_l z[k - l] X[l]``.
    """

    generator: np.ndarray
    rhs: Optional[np.ndarray] = None
    _symbol: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = np.array(self.generator, dtype=complex)
        if g.ndim != 2 or g.shape[0] % 2 == 0 or g.shape[1] % 2 == 0:
            raise ValueError("generator must be 2-D with odd side lengths")
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)
        d1, d2 = self.grid_shape
        if self.rhs is not None:
            y = np.array(self.rhs, dtype=complex)
            if y.shape != (d1, d2):
                raise ValueError("rhs shape must equal grid shape")
            y.setflags(write=False)
            object.__setattr__(self, "rhs", y)
        n1, n2 = next_pow2(2 * d1 - 1), next_pow2(2 * d2 - 1)
        c = np.zeros((n1, n2), dtype=complex)
        s1 = np.arange(-(d1 - 1), d1)
        s2 = np.arange(-(d2 - 1), d2)
        c[np.ix_(s1 % n1, s2 % n2)] = g
        sym = np.fft.fft2(c)
        sym.setflags(write=False)
        object.__setattr__(self, "_symbol", sym)

    @property
    def grid_shape(self):
        return ((self.generator.shape[0] + 1) // 2, (self.generator.shape[1] + 1) // 2)

    def dense(self):
        d1, d2 = self.grid_shape
        k1, k2 = np.meshgrid(np.arange(d1), np.arange(d2), indexing="ij")
        k1, k2 = k1.ravel(), k2.ravel()
        return self.generator[(k1[:, None] - k1[None, :]) + d1 - 1,
                              (k2[:, None] - k2[None, :]) + d2 - 1]

    def matvec(self, X):
        return block_toeplitz_matvec_2d(self, X)

    __matmul__ = matvec


def toeplitz_matvec(T, x):
    """``T @ x`` through a circulant embedding of length ``next_pow2(2*dim - 1)``."""
    x = np.asarray(x)
    if x.shape != (T.dim,):
        raise ValueError(f"expected vector of length {T.dim}, got shape {x.shape}")
    n = T._symbol.size
    return np.fft.ifft(T._symbol * np.fft.fft(x, n))[: T.dim]


def block_toeplitz_matvec_2d(T2, X):
    """2-D analog of :func:`toeplitz_matvec` using ``fft2`` on a padded grid."""
    X = np.asarray(X)
    d1, d2 = T2.grid_shape
    if X.shape != (d1, d2):
        raise ValueError(f"expected grid of shape {(d1, d2)}, got {X.shape}")
    return np.fft.ifft2(T2._symbol * np.fft.fft2(X, T2._symbol.shape))[:d1, :d2]


@dataclass
class CgTrace:
    """Residual history of a CG run.

    ``residual_norms[k]`` is the system residual after update ``k+1``, so its
    length always equals ``iterations``.
    """

    residual_norms: List[float] = field(default_factory=list)
    termination: str = "max-iter"
    initial_residual: float = 0.0

    @property
    def iterations(self):
        return len(self.residual_norms)


def _as_operator(apply_A):
    if callable(apply_A) and not isinstance(apply_A, np.ndarray):
        return apply_A
    if hasattr(apply_A, "matvec"):
        return apply_A.matvec
    A = np.asarray(apply_A)
    return lambda v: A @ v


def _vdot(a, b):
    return np.vdot(a.ravel(), b.ravel())


def cg_solve(apply_A, rhs, stop=None, max_iter=None, tol=1e-10, x0=None,
             callback: Optional[Callable] = None):
    """Conjugate gradients for a Hermitian positive semidefinite operator.

    Parameters
    ----------
    apply_A : callable, ndarray or object with ``matvec``
        The operator.  Vectors may be 1-D or 2-D arrays (grids).
    rhs : ndarray
    stop : callable, optional
        ``stop(x, r, k) -> bool`` evaluated on every iterate (``k = 0`` is the
        initial guess) before the update; a true value ends the run with
        termination ``"stopping-rule"``.
    max_iter : int, optional
        Defaults to ``rhs.size``.
    tol : float
        Relative residual ``||r|| <= tol * ||rhs||`` ends the run with
        ``"tolerance"``.  Pass 0 to disable.
    callback : callable, optional
        ``callback(x)`` after each update.

    Returns
    -------
    x : ndarray
    trace : CgTrace
        ``termination`` is one of ``tolerance``, ``stopping-rule``,
        ``max-iter`` or ``breakdown`` (vanishing curvature ``p* A p``).
    """
    A = _as_operator(apply_A)
    b = np.asarray(rhs, dtype=complex)
    max_iter = b.size if max_iter is None else int(max_iter)
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=complex)
    r = b - A(x) if x0 is not None else b.copy()
    bnorm = np.linalg.norm(b)
    rs = _vdot(r, r).real
    trace = CgTrace(initial_residual=float(np.sqrt(rs)))
    p = r.copy()
    k = 0
    while True:
        if stop is not None and stop(x, r, k):
            trace.termination = "stopping-rule"
            break
        if np.sqrt(rs) <= tol * bnorm or rs == 0.0:
            trace.termination = "tolerance"
            break
        if k >= max_iter:
            trace.termination = "max-iter"
            break
        Ap = A(p)
        curv = _vdot(p, Ap).real
        if not curv > np.finfo(float).tiny:
            trace.termination = "breakdown"
            break
        alpha = rs / curv
        x = x + alpha * p
        r = r - alpha * Ap
        rs_new = _vdot(r, r).real
        p = r + (rs_new / rs) * p
        rs = rs_new
        k += 1
        trace.residual_norms.append(float(np.sqrt(rs)))
        if callback is not None:
            callback(x)
    return x, trace


@dataclass(frozen=True)
class SvdFactors:
    """``A = U @ diag(s) @ Vh`` with ``s`` descending."""

    s: np.ndarray
    U: np.ndarray
    Vh: np.ndarray

    def reconstruct(self):
        return (self.U * self.s) @ self.Vh


def svd(A):
    """Dense SVD via LAPACK; raises ``numpy.linalg.LinAlgError`` on non-convergence."""
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    return SvdFactors(s, U, Vh)


def tsvd_solve(A, y, tau, factors=None):
    """Truncated-SVD solution ``V diag(d) U* y`` with ``d_k = 1/s_k`` iff ``s_k >= tau``.

    ``tau = 0`` gives the Moore-Penrose solution, treating ``s_k <= 1e-14 * s_max``
    as zero.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    F = svd(A) if factors is None else factors
    s = F.s
    if tau == 0:
        keep = s > 1e-14 * (s[0] if s.size else 0.0)
    else:
        keep = s >= tau
    d = np.zeros_like(s)
    d[keep] = 1.0 / s[keep]
    y = np.asarray(y)
    return F.Vh.conj().T @ (d * (F.U.conj().T @ y))
