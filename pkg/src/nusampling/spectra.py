"""Spectral diagnostics for the two finite models.

* The Gram section of a regularly oversampled set is the prolate matrix: its
  eigenvalues cluster at 0 and at the frame bound with only ``O(log n)``
  values in between, so the section is severely ill-conditioned.
* Toeplitz matrices from sampling sets with one large gap have eigenvalues
  clustering at 0 and 1, distributed like the symbol, which tends to an
  indicator function.  Circulant preconditioning cannot remove the cluster at 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .act import build_toeplitz
from .signals import gap_set, sinc

__all__ = [
    "SpectrumDiagnostics",
    "prolate_matrix",
    "eigenvalues",
    "circulant_embed",
    "circulant_eigenvalues",
    "symbol_partial_sum",
    "cluster_fractions",
    "bump_dictionary",
    "equally_distributed_gap",
    "transition_count",
    "gap_set_toeplitz",
    "diagnose",
]


@dataclass
class SpectrumDiagnostics:
    eigenvalues: np.ndarray = field(repr=False)
    cluster_centers: tuple
    cluster_fractions: np.ndarray
    condition_number: float
    symbol_x: np.ndarray = field(default=None, repr=False)
    symbol_values: np.ndarray = field(default=None, repr=False)


def prolate_matrix(n, m, normalized=False):
    """``(2n+1)``-square Gram section of the points ``j/m``.

    Entries are ``sinc((j-l)/m)``.  With ``normalized=True`` the matrix is
    divided by the frame bound ``m``, which gives the classical prolate matrix
    with half-bandwidth ``1/(2m)`` and spectrum inside ``(0, 1)``.
    """
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    d = np.arange(2 * n + 1)
    R = sinc((d[:, None] - d[None, :]) / m)
    return R / m if normalized else R


def eigenvalues(A):
    """Ascending eigenvalues of a Hermitian matrix."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(A, A.conj().T, rtol=1e-12, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(A)


def circulant_embed(first_column):
    """First column of ``circ(a_0, ..., a_n, conj(a_n), ..., conj(a_1))``."""
    a = np.asarray(first_column, dtype=complex)
    return np.concatenate([a, np.conj(a[:0:-1])])


def circulant_eigenvalues(c):
    """Eigenvalues of the circulant with first column ``c`` (one FFT)."""
    return np.fft.fft(np.asarray(c, dtype=complex))


def symbol_partial_sum(first_column, x):
    """``sum_{|k|<=n} a_k exp(2j*pi*k*x)`` with ``a_{-k} = conj(a_k)``."""
    a = np.asarray(first_column, dtype=complex)
    x = np.asarray(x, dtype=float)
    k = np.arange(1, a.size)
    out = a[0] + (np.exp(2j * np.pi * np.multiply.outer(x, k)) @ a[1:]
                  + np.exp(-2j * np.pi * np.multiply.outer(x, k)) @ np.conj(a[1:]))
    return out


def cluster_fractions(eigs, centers, radius):
    """Fraction of ``eigs`` within ``radius`` of each center."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    e = np.asarray(eigs, dtype=float)
    if e.size == 0:
        return np.zeros(len(centers))
    return np.array([np.mean(np.abs(e - c) <= radius) for c in centers])


def transition_count(values, lo=0.1, hi=0.9):
    """Number of values strictly inside ``(lo, hi)``."""
    v = np.asarray(values)
    return int(np.sum((v > lo) & (v < hi)))


def bump_dictionary(n=8, lo=-0.5, hi=1.5, half_width=0.25):
    """``n`` hat functions of height ``half_width`` (Lipschitz constant 1) centred on ``[lo, hi]``."""
    centers = np.linspace(lo, hi, n)
    return [lambda x, c=c: np.maximum(0.0, half_width - np.abs(x - c)) for c in centers]


def equally_distributed_gap(lams, nus, funcs=None):
    """``max_F |mean(F(lams)) - mean(F(nus))|`` over the test functions."""
    lams = np.asarray(lams, dtype=float)
    nus = np.asarray(nus, dtype=float)
    if lams.shape != nus.shape:
        raise ValueError("sequences must have equal length")
    funcs = bump_dictionary() if funcs is None else funcs
    return float(max(abs(np.mean(F(lams)) - np.mean(F(nus))) for F in funcs))


def gap_set_toeplitz(M, m, L):
    """Level-``M`` Toeplitz matrix of the one-block-one-gap set.

    Every sample gets weight ``1/(L m)``, its spacing, so the symbol tends to
    the indicator of ``[-1/(2L), 1/(2L)]`` and the spectrum to ``{0, 1}``.
    """
    S = gap_set(M, m, L)
    w = np.full(len(S), 1.0 / (L * m))
    return build_toeplitz(S.points, w, M, S.period)


def diagnose(A, centers=(0.0, 1.0), radius=0.1, symbol_column=None, n_symbol=512):
    """Eigenvalues, cluster fractions and condition number of a Hermitian matrix."""
    eigs = eigenvalues(A)
    lo = np.abs(eigs).min()
    cond = float(np.abs(eigs).max() / lo) if lo > 0 else float("inf")
    sx = sv = None
    if symbol_column is not None:
        sx = np.linspace(-0.5, 0.5, n_symbol, endpoint=False)
        sv = symbol_partial_sum(symbol_column, sx).real
    return SpectrumDiagnostics(eigs, tuple(centers), cluster_fractions(eigs, centers, radius),
                               cond, sx, sv)
