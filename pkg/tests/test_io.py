import json

import numpy as np
import pytest

from nusampling import io
from nusampling.signals import (SampleVector, SamplingSet, SamplingSet2D, generate_bandlimited,
                                generate_bandlimited_2d, jittered_set)


def test_fmt():
    assert io.fmt(None) == ""
    assert io.fmt(3) == "3"
    assert float(io.fmt(0.1 + 0.2)) == 0.1 + 0.2


def test_csv_round_trip(tmp_path):
    x = np.random.default_rng(0).standard_normal(20)
    io.write_csv(tmp_path / "a.csv", {"x": x, "name": ["a"] * 20}, {"k": 1.5, "none": None})
    cols, meta = io.read_csv(tmp_path / "a.csv")
    assert np.array_equal(cols["x"], x) and cols["name"] == ["a"] * 20
    assert meta == {"k": 1.5, "none": None}
    with pytest.raises(ValueError):
        io.write_csv(tmp_path / "b.csv", {"x": [1.0], "y": [1.0, 2.0]})


def test_sampling_set_round_trip(tmp_path):
    S = jittered_set(30, 0.8, 10.0, seed=1)
    io.save_sampling_set(tmp_path / "s.csv", S)
    T = io.load_sampling_set(tmp_path / "s.csv")
    assert np.array_equal(T.points, S.points) and T.weights is None
    assert T.period == S.period and T.interval_halfwidth == S.interval_halfwidth
    W = S.with_weights(np.linspace(0.5, 1.0, 30))
    io.save_sampling_set(tmp_path / "w.csv", W)
    assert np.array_equal(io.load_sampling_set(tmp_path / "w.csv").weights, W.weights)


def test_sampling_set_2d_round_trip(tmp_path):
    pts = np.random.default_rng(2).uniform(-3, 3, (25, 2))
    S = SamplingSet2D(pts, 3.0, period=6.5)
    io.save_sampling_set(tmp_path / "s.csv", S)
    T = io.load_sampling_set(tmp_path / "s.csv")
    assert isinstance(T, SamplingSet2D) and np.array_equal(T.points, pts)


def test_samples_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    b = SampleVector(rng.standard_normal(12) + 1j * rng.standard_normal(12), 0.05)
    io.save_samples(tmp_path / "b.csv", b)
    c = io.load_samples(tmp_path / "b.csv")
    assert np.array_equal(c.values, b.values) and c.noise_level == 0.05
    assert not io.has_points(tmp_path / "b.csv")


def test_samples_with_points(tmp_path):
    S = jittered_set(12, 0.9, 5.0, seed=4)
    b = np.arange(12.0)
    io.save_samples(tmp_path / "b.csv", b, S)
    assert io.has_points(tmp_path / "b.csv")
    assert np.array_equal(io.load_sampling_set(tmp_path / "b.csv").points, S.points)
    c = io.load_samples(tmp_path / "b.csv")
    assert np.array_equal(c.values, b) and not np.iscomplexobj(c.values)
    with pytest.raises(ValueError):
        io.save_samples(tmp_path / "c.csv", b[:5], S)


def test_trigpoly_round_trip(tmp_path):
    for p in (generate_bandlimited(7, seed=5), generate_bandlimited_2d(3, seed=5)):
        io.save_trigpoly(tmp_path / "p.json", p)
        q = io.load_trigpoly(tmp_path / "p.json")
        assert type(q) is type(p) and np.array_equal(q.coeffs, p.coeffs)
        assert q.period == p.period and q.degree == p.degree


def test_trigpoly_malformed(tmp_path):
    (tmp_path / "bad.json").write_text(json.dumps({"degree": 1}))
    with pytest.raises(ValueError):
        io.load_trigpoly(tmp_path / "bad.json")
    (tmp_path / "junk.json").write_text("{not json")
    with pytest.raises(ValueError):
        io.load_trigpoly(tmp_path / "junk.json")


def test_grid_round_trip(tmp_path):
    t = np.linspace(-1, 1, 9)
    v = np.exp(1j * t)
    io.save_grid(tmp_path / "g.csv", t, v, {"degree": 3})
    t2, v2, meta = io.load_grid(tmp_path / "g.csv")
    assert np.array_equal(t2, t) and np.array_equal(v2, v) and meta["degree"] == 3


def test_missing_metadata(tmp_path):
    (tmp_path / "s.csv").write_text("t,w\n0.0,\n")
    with pytest.raises(ValueError, match="interval_halfwidth"):
        io.load_sampling_set(tmp_path / "s.csv")
