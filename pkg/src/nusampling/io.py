"""File formats: CSV for sampling sets, samples and grids, JSON for polynomials.

Floats are written with ``repr`` (shortest round-trip decimal), so every file
reloads bit-exactly.  A CSV may start with one ``#`` line of ``key=value``
metadata pairs separated by ``;``.  See ``docs/formats.md``.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .report import to_jsonable
from .signals import SampleVector, SamplingSet, SamplingSet2D, TrigPoly, TrigPoly2D

__all__ = [
    "fmt",
    "write_csv",
    "read_csv",
    "save_sampling_set",
    "load_sampling_set",
    "save_samples",
    "load_samples",
    "has_points",
    "save_trigpoly",
    "load_trigpoly",
    "save_grid",
    "load_grid",
    "save_json",
]


def fmt(x):
    """Shortest round-trip decimal for a float; ``""`` for ``None``."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def _parse_meta(line):
    meta = {}
    body = line.lstrip("#").strip()
    if not body:
        return meta
    for item in body.split(";"):
        if "=" not in item:
            raise ValueError(f"malformed metadata item {item!r}")
        k, v = item.split("=", 1)
        v = v.strip()
        meta[k.strip()] = None if v in ("", "None") else float(v)
    return meta


def write_csv(path, columns, meta=None):
    """Write equal-length columns (a dict name -> sequence) with optional metadata."""
    names = list(columns)
    n = {len(columns[c]) for c in names}
    if len(n) > 1:
        raise ValueError("columns must have equal length")
    buf = _io.StringIO()
    if meta:
        buf.write("# " + ";".join(f"{k}={fmt(v)}" for k, v in meta.items()) + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(names)
    for row in zip(*(columns[c] for c in names)):
        wr.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    Path(path).write_text(buf.getvalue())


def read_csv(path):
    """Return ``(columns, meta)``; numeric columns become float arrays."""
    text = Path(path).read_text()
    lines = text.splitlines()
    meta = {}
    if lines and lines[0].startswith("#"):
        meta = _parse_meta(lines[0])
        lines = lines[1:]
    rows = list(csv.reader(lines))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header, body = rows[0], rows[1:]
    cols = {}
    for i, name in enumerate(header):
        vals = [r[i] for r in body]
        try:
            cols[name] = np.array([np.nan if v == "" else float(v) for v in vals])
        except ValueError:
            cols[name] = vals
    return cols, meta


def _require(cols, names, path):
    missing = [c for c in names if c not in cols]
    if missing:
        raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")


# sampling sets

def save_sampling_set(path, S):
    w = S.weights
    meta = {"interval_halfwidth": S.interval_halfwidth, "period": S.period}
    if isinstance(S, SamplingSet2D):
        cols = {"u": S.points[:, 0], "v": S.points[:, 1]}
    else:
        cols = {"t": S.points}
    cols["w"] = [None] * len(S) if w is None else w
    write_csv(path, cols, meta)


def load_sampling_set(path):
    cols, meta = read_csv(path)
    if "interval_halfwidth" not in meta:
        raise ValueError(f"{path}: metadata line must give interval_halfwidth")
    h, P = meta["interval_halfwidth"], meta.get("period")
    w = cols.get("w")
    if w is not None and np.all(np.isnan(w)):
        w = None
    if "u" in cols:
        _require(cols, ["u", "v"], path)
        return SamplingSet2D(np.column_stack([cols["u"], cols["v"]]), h, w, P)
    _require(cols, ["t"], path)
    return SamplingSet(cols["t"], h, w, P)


# sample values

def save_samples(path, b, sampling=None):
    """Write ``re_b, im_b``; with ``sampling`` the file also carries its points
    (``t, w, re_b, im_b`` or ``u, v, w, re_b, im_b``) and loads as either."""
    v = b.values if isinstance(b, SampleVector) else np.asarray(b)
    noise = b.noise_level if isinstance(b, SampleVector) else None
    cols, meta = {}, {}
    if sampling is not None:
        if len(sampling) != v.size:
            raise ValueError("samples and sampling set differ in length")
        if isinstance(sampling, SamplingSet2D):
            cols.update(u=sampling.points[:, 0], v=sampling.points[:, 1])
        else:
            cols["t"] = sampling.points
        w = sampling.weights
        cols["w"] = [None] * len(sampling) if w is None else w
        meta.update(interval_halfwidth=sampling.interval_halfwidth, period=sampling.period)
    cols.update(re_b=v.real, im_b=np.imag(v))
    meta["noise_level"] = noise
    write_csv(path, cols, meta)


def load_samples(path):
    cols, meta = read_csv(path)
    _require(cols, ["re_b"], path)
    im = cols.get("im_b")
    v = cols["re_b"] if im is None or not np.any(im) else cols["re_b"] + 1j * im
    return SampleVector(v, meta.get("noise_level"))


def has_points(path):
    cols, meta = read_csv(path)
    return ("t" in cols or "u" in cols) and "interval_halfwidth" in meta


# polynomials

def save_trigpoly(path, p):
    two_d = isinstance(p, TrigPoly2D)
    a = p.coeffs
    pair = np.stack([a.real, a.imag], axis=-1).tolist()
    doc = {"kind": "trigpoly2d" if two_d else "trigpoly", "degree": p.degree,
           "period": p.period, "coeffs": pair}
    # json writes floats with repr, which round-trips exactly
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_trigpoly(path):
    try:
        doc = json.loads(Path(path).read_text())
        kind = doc.get("kind", "trigpoly")
        a = np.array(doc["coeffs"], dtype=float)
        a = a[..., 0] + 1j * a[..., 1]
        cls = TrigPoly2D if kind == "trigpoly2d" else TrigPoly
        return cls(int(doc["degree"]), float(doc["period"]), a)
    except (KeyError, TypeError, IndexError, json.JSONDecodeError) as exc:
        raise ValueError(f"{path}: not a polynomial file ({exc})") from exc


# reconstruction grids

def save_grid(path, t, values, meta=None):
    v = np.asarray(values)
    t = np.asarray(t)
    if t.ndim == 2:
        cols = {"u": t[:, 0], "v": t[:, 1]}
    else:
        cols = {"t": t}
    cols["re_f"] = v.real.ravel()
    cols["im_f"] = np.imag(v).ravel()
    write_csv(path, cols, meta)


def load_grid(path):
    cols, meta = read_csv(path)
    v = cols["re_f"] + 1j * cols["im_f"]
    t = np.column_stack([cols["u"], cols["v"]]) if "u" in cols else cols["t"]
    return t, v, meta


def save_json(path, obj):
    Path(path).write_text(json.dumps(to_jsonable(obj), indent=1, sort_keys=True) + "\n")
