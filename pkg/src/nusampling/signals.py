"""Domain types, synthetic signals, sampling geometries, noise and error metrics.

Everything lives on a torus of length ``period``.  A degree-``M`` trigonometric
polynomial is

    p(t) = P**-0.5 * sum_{k=-M..M} a_k exp(2j*pi*k*t/P)

so that the integral of ``|p|**2`` over one period equals ``sum |a_k|**2`` for
any period ``P``.  With the default period ``P = 2M+1`` this is exactly the
``1/sqrt(2M+1)`` convention used for evaluation and right-hand sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "SamplingSet",
    "SamplingSet2D",
    "SampleVector",
    "TrigPoly",
    "TrigPoly2D",
    "RNG_NAME",
    "sinc",
    "spectral_envelope",
    "generate_bandlimited",
    "generate_bandlimited_2d",
    "eval_trigpoly",
    "eval_trigpoly_grid",
    "eval_trigpoly_2d",
    "jittered_set",
    "random_set",
    "regular_set",
    "gap_set",
    "jittered_grid_2d",
    "add_noise",
    "relative_error",
]

RNG_NAME = "numpy.random.Generator(PCG64)"


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SamplingSet:
    """Sorted sample locations on ``[-interval_halfwidth, interval_halfwidth]``.

    ``period`` is the length of the torus the interval is identified with.  It
    defaults to ``2 * interval_halfwidth``; generators that follow the
    ``[-M-1/2, M+1/2]`` or ``2N`` conventions set it explicitly.
    """

    points: np.ndarray
    interval_halfwidth: float
    weights: Optional[np.ndarray] = None
    period: Optional[float] = None

    def __post_init__(self):
        pts = _frozen(self.points)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("points must be a non-empty 1-D array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("points must be strictly increasing")
        if self.interval_halfwidth <= 0:
            raise ValueError("interval_halfwidth must be positive")
        h = float(self.interval_halfwidth)
        if pts[0] < -h or pts[-1] > h:
            raise ValueError("points must lie in [-interval_halfwidth, interval_halfwidth]")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "interval_halfwidth", h)
        if self.weights is not None:
            w = _frozen(self.weights)
            if w.shape != pts.shape:
                raise ValueError("weights must have the same length as points")
            if np.any(w <= 0):
                raise ValueError("weights must be positive")
            object.__setattr__(self, "weights", w)
        period = 2.0 * h if self.period is None else float(self.period)
        if period <= 0 or pts[-1] - pts[0] >= period:
            raise ValueError("period must exceed the span of the points")
        object.__setattr__(self, "period", period)

    def __len__(self):
        return self.points.size

    def gaps(self, periodic=True):
        """Consecutive spacings, including the wrap-around gap if ``periodic``."""
        g = np.diff(self.points)
        if periodic:
            g = np.append(g, self.points[0] + self.period - self.points[-1])
        return g

    def max_gap(self, periodic=True):
        return float(self.gaps(periodic).max()) if len(self) > 1 or periodic else 0.0

    def with_weights(self, weights):
        return SamplingSet(self.points, self.interval_halfwidth, weights, self.period)


@dataclass(frozen=True)
class SamplingSet2D:
    """Scattered points ``(u_j, v_j)`` in the square ``[-h, h]**2`` with torus side ``period``."""

    points: np.ndarray
    interval_halfwidth: float
    weights: Optional[np.ndarray] = None
    period: Optional[float] = None

    def __post_init__(self):
        pts = _frozen(self.points)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise ValueError("points must have shape (r, 2)")
        h = float(self.interval_halfwidth)
        if h <= 0:
            raise ValueError("interval_halfwidth must be positive")
        if np.any(np.abs(pts) > h):
            raise ValueError("points must lie in [-h, h]^2")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "interval_halfwidth", h)
        if self.weights is not None:
            w = _frozen(self.weights)
            if w.shape != (pts.shape[0],) or np.any(w <= 0):
                raise ValueError("weights must be positive and aligned with points")
            object.__setattr__(self, "weights", w)
        period = 2.0 * h if self.period is None else float(self.period)
        object.__setattr__(self, "period", period)

    def __len__(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class SampleVector:
    """Sample values aligned with a sampling set; ``noise_level`` is the relative
    perturbation ``||b_delta - b|| / ||b||`` when known."""

    values: np.ndarray
    noise_level: Optional[float] = None

    def __post_init__(self):
        v = np.array(self.values)
        if v.ndim != 1:
            raise ValueError("values must be 1-D")
        v = _frozen(v, dtype=complex if np.iscomplexobj(v) else float)
        object.__setattr__(self, "values", v)
        if self.noise_level is not None and self.noise_level < 0:
            raise ValueError("noise_level must be non-negative")

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class TrigPoly:
    """Degree-``M`` trigonometric polynomial, coefficients indexed ``k = -M..M``."""

    degree: int
    period: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError("degree must be a non-negative integer")
        if not self.period > 0:
            raise ValueError("period must be positive")
        a = _frozen(self.coeffs, dtype=complex)
        if a.shape != (2 * self.degree + 1,):
            raise ValueError(f"expected {2 * self.degree + 1} coefficients, got {a.shape}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "coeffs", a)

    @property
    def frequencies(self):
        return np.arange(-self.degree, self.degree + 1)

    def __call__(self, t):
        return eval_trigpoly(self, t)

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def embed(self, degree):
        """Zero-pad to a higher degree; sample values are unchanged."""
        if degree < self.degree:
            raise ValueError("cannot embed into a lower degree")
        a = np.zeros(2 * degree + 1, dtype=complex)
        a[degree - self.degree: degree + self.degree + 1] = self.coeffs
        return TrigPoly(degree, self.period, a)


@dataclass(frozen=True)
class TrigPoly2D:
    """Tensor-degree ``M`` polynomial on the square torus; ``coeffs[k+M, l+M]`` is ``a_{k,l}``."""

    degree: int
    period: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError("degree must be a non-negative integer")
        if not self.period > 0:
            raise ValueError("period must be positive")
        n = 2 * int(self.degree) + 1
        a = _frozen(self.coeffs, dtype=complex)
        if a.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} coefficient grid, got {a.shape}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "coeffs", a)

    def __call__(self, u, v):
        return eval_trigpoly_2d(self, u, v)

    def embed(self, degree):
        if degree < self.degree:
            raise ValueError("cannot embed into a lower degree")
        a = np.zeros((2 * degree + 1,) * 2, dtype=complex)
        s = slice(degree - self.degree, degree + self.degree + 1)
        a[s, s] = self.coeffs
        return TrigPoly2D(degree, self.period, a)


def sinc(t):
    """Normalized sinc, ``sin(pi t) / (pi t)`` with ``sinc(0) = 1``."""
    return np.sinc(t)


def spectral_envelope(M, decay="flat", rate=1.0):
    """Amplitude profile ``|a_k|`` before randomization, ``k = -M..M``.

    ``flat`` gives ones; ``exponential`` gives ``exp(-rate*|k|)``.
    """
    k = np.arange(-M, M + 1)
    if decay == "flat":
        return np.ones(k.size)
    if decay == "exponential":
        return np.exp(-rate * np.abs(k))
    raise ValueError(f"unknown spectrum_decay {decay!r}")


def _check_degree_period(M, period):
    if int(M) != M or M < 0:
        raise ValueError("M must be a non-negative integer")
    if period is not None and not period > 0:
        raise ValueError("period must be positive")


def generate_bandlimited(M, period=None, seed=0, spectrum_decay="flat", rate=1.0, real=False):
    """Random degree-``M`` polynomial with complex Gaussian coefficients.

    The coefficients are ``envelope_k * z_k`` with ``z_k`` standard complex
    normal.  With ``real=True`` the coefficients are made Hermitian
    (``a_{-k} = conj(a_k)``) so the polynomial is real-valued.
    """
    _check_degree_period(M, period)
    period = 2 * M + 1 if period is None else period
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal(2 * M + 1) + 1j * rng.standard_normal(2 * M + 1)) / np.sqrt(2)
    if real:
        z = 0.5 * (z + np.conj(z[::-1]))
    a = spectral_envelope(M, spectrum_decay, rate) * z
    return TrigPoly(M, period, a)


def generate_bandlimited_2d(M, period=None, seed=0, spectrum_decay="flat", rate=1.0, real=False):
    """2-D analog of :func:`generate_bandlimited`; exponential decay is radial, ``exp(-rate*|k|_2)``."""
    _check_degree_period(M, period)
    period = 2 * M + 1 if period is None else period
    n = 2 * M + 1
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    if real:
        z = 0.5 * (z + np.conj(z[::-1, ::-1]))
    k = np.arange(-M, M + 1)
    if spectrum_decay == "flat":
        env = np.ones((n, n))
    elif spectrum_decay == "exponential":
        env = np.exp(-rate * np.hypot(k[:, None], k[None, :]))
    else:
        raise ValueError(f"unknown spectrum_decay {spectrum_decay!r}")
    return TrigPoly2D(M, period, env * z)


def fourier_matrix(t, M, period):
    """Matrix ``E[j, k+M] = P**-0.5 * exp(2j*pi*k*t_j/P)`` mapping coefficients to samples."""
    t = np.asarray(t, dtype=float)
    k = np.arange(-M, M + 1)
    return np.exp(2j * np.pi * np.outer(t, k) / period) / np.sqrt(period)


def eval_trigpoly(p, t):
    """Evaluate ``p`` at arbitrary points by direct summation."""
    t = np.asarray(t, dtype=float)
    out = fourier_matrix(t.ravel(), p.degree, p.period) @ p.coeffs
    return out.reshape(t.shape)


def eval_trigpoly_grid(p, n, start=0.0):
    """Evaluate ``p`` on ``n`` equispaced points ``start + i*P/n`` with one FFT.

    Requires ``n >= 2M+1`` so that no frequencies alias.
    """
    M = p.degree
    if n < 2 * M + 1:
        raise ValueError("grid must have at least 2M+1 points")
    buf = np.zeros(n, dtype=complex)
    k = np.arange(-M, M + 1)
    # shift the grid origin into a per-coefficient phase
    buf[k % n] = p.coeffs * np.exp(2j * np.pi * k * start / p.period)
    t = start + p.period * np.arange(n) / n
    return t, np.fft.ifft(buf) * n / np.sqrt(p.period)


def eval_trigpoly_2d(p, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    Eu = fourier_matrix(u.ravel(), p.degree, p.period)
    Ev = fourier_matrix(v.ravel(), p.degree, p.period)
    out = np.einsum("jk,kl,jl->j", Eu, p.coeffs, Ev)
    return out.reshape(u.shape)


def jittered_set(n_points, gap_ratio, interval_halfwidth, seed=0, jitter=None):
    """Perturbed equispaced set whose largest gap, wrap-around included, is at most ``gap_ratio``.

    The base grid has spacing ``h = 2*halfwidth/n_points``.  Each point moves by
    at most ``a = min((gap_ratio - h)/2, 0.49*h)``; pass ``jitter=0`` for the
    equispaced set.
    """
    if not 0 < gap_ratio < 1:
        raise ValueError("gap_ratio must lie in (0, 1)")
    if n_points < 1:
        raise ValueError("n_points must be positive")
    width = 2.0 * interval_halfwidth
    h = width / n_points
    if h > gap_ratio:
        need = int(np.ceil(width / gap_ratio))
        raise ValueError(f"infeasible: {n_points} points cannot keep gaps <= {gap_ratio} "
                         f"on an interval of length {width} (need >= {need})")
    amp = min((gap_ratio - h) / 2, 0.49 * h)
    if jitter is not None:
        amp = min(amp, float(jitter))
    rng = np.random.default_rng(seed)
    base = -interval_halfwidth + h / 2 + h * np.arange(n_points)
    pts = base + rng.uniform(-amp, amp, n_points)
    return SamplingSet(pts, interval_halfwidth)


def random_set(n_points, interval_halfwidth, seed=0):
    """Independent uniform points on the interval (sorted, duplicates rejected)."""
    rng = np.random.default_rng(seed)
    pts = np.unique(rng.uniform(-interval_halfwidth, interval_halfwidth, n_points))
    if pts.size != n_points:
        raise ValueError("duplicate points drawn")
    return SamplingSet(pts, interval_halfwidth)


def regular_set(n_half, m):
    """Points ``j/m`` for ``|j| <= n_half*m`` on ``[-n_half, n_half]``.

    The torus length is ``2N`` with ``N = n + n/(r-1)``, i.e. one extra
    spacing, so the set stays regular across the wrap-around.
    """
    if m < 1 or n_half < 1:
        raise ValueError("m and n_half must be >= 1")
    j = np.arange(-n_half * m, n_half * m + 1)
    r = j.size
    N = n_half + n_half / (r - 1)
    return SamplingSet(j / m, n_half, period=2 * N)


def gap_set(n_half, m, L):
    """One block of samples ``j/(L m)``, ``|j| <= m*n_half``, and one large gap.

    The torus is ``[-n_half-1/2, n_half+1/2]`` (period ``2*n_half+1``); the
    block covers roughly a fraction ``1/L`` of it.
    """
    if m < 1 or L < 1 or n_half < 1:
        raise ValueError("n_half, m and L must be >= 1")
    j = np.arange(-m * n_half, m * n_half + 1)
    return SamplingSet(j / (L * m), n_half, period=2 * n_half + 1)


def jittered_grid_2d(n_per_axis, interval_halfwidth, seed=0, jitter=0.3):
    """Tensor grid with each point perturbed by up to ``jitter`` times the spacing."""
    h = 2.0 * interval_halfwidth / n_per_axis
    rng = np.random.default_rng(seed)
    base = -interval_halfwidth + h / 2 + h * np.arange(n_per_axis)
    U, V = np.meshgrid(base, base, indexing="ij")
    pts = np.column_stack([U.ravel(), V.ravel()])
    pts = pts + rng.uniform(-jitter * h, jitter * h, pts.shape)
    return SamplingSet2D(pts, interval_halfwidth)


def add_noise(b, delta, seed=0):
    """Perturb ``b`` so that ``||b_delta - b|| = delta * ||b||`` exactly.

    Real data get real Gaussian noise, complex data complex Gaussian noise,
    rescaled to the prescribed norm.
    """
    values = b.values if isinstance(b, SampleVector) else np.asarray(b)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0:
        return SampleVector(values, 0.0)
    nb = np.linalg.norm(values)
    if nb == 0:
        raise ValueError("cannot scale noise relative to an all-zero sample vector")
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(values.size)
    if np.iscomplexobj(values):
        e = (e + 1j * rng.standard_normal(values.size)) / np.sqrt(2)
    e *= delta * nb / np.linalg.norm(e)
    return SampleVector(values + e, float(delta))


def relative_error(f_ref, f_approx):
    """Squared relative error ``||f_ref - f_approx||**2 / ||f_ref||**2``."""
    f_ref = np.asarray(f_ref)
    f_approx = np.asarray(f_approx)
    if f_ref.shape != f_approx.shape:
        raise ValueError("shape mismatch")
    den = np.vdot(f_ref, f_ref).real
    if den == 0:
        raise ValueError("reference vector is zero")
    d = f_ref - f_approx
    return float(np.vdot(d, d).real / den)
