"""Seeded synthetic experiments behind ``nusampling demo``.

Each function returns plain data (arrays, numbers, reports); writing files is
left to the CLI.  ``REFERENCE_ERRORS`` lists published magnitudes for similar
experiments on real data; they are context, not targets.
"""

from __future__ import annotations

import numpy as np

from .act import act_reconstruct, default_weights
from .frame import reconstruct_cg, reconstruct_tsvd
from .multilevel import multilevel_reconstruct, multilevel_reconstruct_2d
from .signals import (SamplingSet, SamplingSet2D, add_noise, generate_bandlimited,
                      generate_bandlimited_2d, relative_error)
from .spectra import (circulant_eigenvalues, circulant_embed, cluster_fractions,
                      eigenvalues, gap_set_toeplitz, prolate_matrix, symbol_partial_sum,
                      transition_count)

__all__ = ["SPECTROSCOPY", "GEO2D", "GAP1D", "REFERENCE_ERRORS",
           "spectroscopy_data", "spectroscopy", "gap1d", "geo2d_data", "geo2d"]

SPECTROSCOPY = {"degree": 30, "n_grid": 1024, "n_samples": 107, "delta": 0.1,
                "decay_rate": 0.07, "tau_stop": 1.1, "tsvd_p": 2, "M_low": 11,
                "M_high": 40, "M_max": 50}
GEO2D = {"degree": 16, "n_samples": 1000, "delta": 0.05, "decay_rate": 0.38,
         "tau_stop": 1.1, "n_grid": 64}
GAP1D = {"degrees": [32, 64, 128], "m": 2, "L": 2, "radius": 0.1}

# published errors on real data, shown for scale only
REFERENCE_ERRORS = {
    "frame-tsvd": 0.0944, "frame-cg": 0.1097, "act": 0.0876,
    "act-low": 0.4648, "act-high": 0.2805, "multilevel": 0.0959, "geo2d": 0.0517,
}


def _merge(defaults, overrides):
    cfg = dict(defaults)
    for k, v in (overrides or {}).items():
        if k not in cfg:
            raise ValueError(f"unknown parameter {k!r}; expected one of {sorted(cfg)}")
        cfg[k] = v
    return cfg


def spectroscopy_data(seed=0, **overrides):
    """Truth, grid and noisy random samples of the 1-D experiment.

    The truth is a real degree-``M`` polynomial on the period ``2M+1`` whose
    coefficients decay like ``exp(-rate*|k|)``; ``n_samples`` distinct grid
    points are drawn at random and perturbed by relative noise ``delta``.
    """
    cfg = _merge(SPECTROSCOPY, overrides)
    M = int(cfg["degree"])
    P = 2.0 * M + 1
    f = generate_bandlimited(M, P, seed=seed, spectrum_decay="exponential",
                             rate=cfg["decay_rate"], real=True)
    n = int(cfg["n_grid"])
    grid = -P / 2 + P * np.arange(n) / n
    fg = f(grid).real
    rng = np.random.default_rng(seed + 1000)
    idx = np.sort(rng.choice(n, int(cfg["n_samples"]), replace=False))
    S = SamplingSet(grid[idx], P / 2, period=P)
    b = add_noise(fg[idx], cfg["delta"], seed=seed + 2000)
    return {"config": cfg, "truth": f, "grid": grid, "truth_grid": fg, "sampling": S,
            "samples": b}


def spectroscopy(seed=0, **overrides):
    """Run all methods of the 1-D comparison; returns the data and six labeled results."""
    d = spectroscopy_data(seed, **overrides)
    cfg = d["config"]
    S, b, grid, fg = d["sampling"], d["samples"].values, d["grid"], d["truth_grid"]
    t, P, delta, tau = S.points, S.period, cfg["delta"], cfg["tau_stop"]
    w = default_weights(t, P)
    results = []

    def add(label, key, fn_grid, rep):
        results.append({"label": label, "method": key, "degree": rep.degree,
                        "iterations": rep.iterations, "termination": rep.termination,
                        "error": relative_error(fg, fn_grid), "reference": REFERENCE_ERRORS[key],
                        "values": fn_grid, "report": rep})

    sx, rep = reconstruct_tsvd(t, b, delta, p=cfg["tsvd_p"])
    add("(a) truncated frame, TSVD", "frame-tsvd", sx(grid), rep)
    sx, rep = reconstruct_cg(t, b, delta, tau_stop=tau)
    add("(b) truncated frame, CG", "frame-cg", sx(grid), rep)
    for label, key, M in (("(c) ACT, M=%d" % cfg["degree"], "act", cfg["degree"]),
                          ("(d) ACT, M=%d" % cfg["M_low"], "act-low", cfg["M_low"]),
                          ("(e) ACT, M=%d" % cfg["M_high"], "act-high", cfg["M_high"])):
        p, rep = act_reconstruct(t, b, int(M), weights=w, period=P, delta=delta, tau_stop=tau)
        add(label, key, p(grid).real, rep)
    p, trace, rep = multilevel_reconstruct(S, b, delta, tau_stop=tau, M_max=cfg["M_max"])
    add(f"(f) multilevel, stopped at M={rep.degree}", "multilevel", p(grid).real, rep)
    d["results"] = results
    d["level_trace"] = trace
    return d


def gap1d(**overrides):
    """Eigenvalue clustering of gap-set Toeplitz matrices next to the prolate matrix."""
    cfg = _merge(GAP1D, overrides)
    rows = []
    for M in cfg["degrees"]:
        T = gap_set_toeplitz(int(M), int(cfg["m"]), int(cfg["L"]))
        lam = eigenvalues(T.dense())
        c = circulant_embed(T.first_column)
        x = np.linspace(-0.5, 0.5, 512, endpoint=False)
        R = prolate_matrix(int(M), int(cfg["m"]), normalized=True)
        plam = eigenvalues(R)
        rows.append({
            "degree": int(M),
            "eigenvalues": lam,
            "cluster_fractions": cluster_fractions(lam, (0.0, 1.0), cfg["radius"]),
            "circulant_eigenvalues": circulant_eigenvalues(c).real,
            "symbol_x": x,
            "symbol": symbol_partial_sum(T.first_column, x).real,
            "prolate_eigenvalues": plam,
            "prolate_transition": transition_count(plam),
            "prolate_cluster_fractions": cluster_fractions(plam, (0.0, 1.0), cfg["radius"]),
        })
    return {"config": cfg, "rows": rows}


def geo2d_data(seed=0, **overrides):
    """Exponentially decaying 2-D truth and ``n_samples`` uniformly scattered noisy samples."""
    cfg = _merge(GEO2D, overrides)
    M = int(cfg["degree"])
    P = 2.0 * M + 1
    f = generate_bandlimited_2d(M, P, seed=seed, spectrum_decay="exponential",
                                rate=cfg["decay_rate"], real=True)
    rng = np.random.default_rng(seed + 1000)
    pts = rng.uniform(-P / 2, P / 2, (int(cfg["n_samples"]), 2))
    S = SamplingSet2D(pts, P / 2, period=P)
    b = add_noise(f(pts[:, 0], pts[:, 1]).real, cfg["delta"], seed=seed + 2000)
    g = -P / 2 + P * np.arange(int(cfg["n_grid"])) / cfg["n_grid"]
    return {"config": cfg, "truth": f, "sampling": S, "samples": b, "axis": g}


def geo2d(seed=0, **overrides):
    d = geo2d_data(seed, **overrides)
    cfg, S, b, g = d["config"], d["sampling"], d["samples"], d["axis"]
    p, trace, rep = multilevel_reconstruct_2d(S, b.values, cfg["delta"], tau_stop=cfg["tau_stop"])
    U, V = np.meshgrid(g, g, indexing="ij")
    truth = d["truth"](U, V).real
    recon = p(U, V).real
    d.update(poly=p, level_trace=trace, report=rep, truth_grid=truth, recon_grid=recon,
             error=relative_error(truth, recon), reference=REFERENCE_ERRORS["geo2d"])
    return d
