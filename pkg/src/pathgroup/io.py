"""JSON and CSV encodings of the public value types.

Floats are written with ``repr`` in JSON (shortest string that round-trips)
and with 17 significant digits in CSV.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import DimensionMismatch, InvalidParams
from .geodesics import GeodesicParams, Helix, Line
from .group import GroupPoint, Stratum
from .optimality import CutInfo
from .symmetry import InvariantPoint
from .synthesis import Multiplicity, Solution, SynthesisResult


def fmt_csv(v: float) -> str:
    return format(float(v), ".16e")


def _floats(v):
    return [float(a) for a in np.asarray(v, dtype=float).reshape(-1)]


def _require(d: dict, *keys):
    missing = [k for k in keys if k not in d]
    if missing:
        raise InvalidParams(f"missing field(s): {', '.join(missing)}")


def point_to_dict(p: GroupPoint) -> dict:
    return {"n": p.n, "x": float(p.x), "l": _floats(p.l), "y": _floats(p.y)}


def point_from_dict(d: dict) -> GroupPoint:
    _require(d, "x", "l", "y")
    l, y = d["l"], d["y"]
    if len(l) != len(y):
        raise DimensionMismatch(f"len(l) = {len(l)} but len(y) = {len(y)}")
    if "n" in d and int(d["n"]) != len(l):
        raise DimensionMismatch(f"n = {d['n']} but the vectors have length {len(l)}")
    return GroupPoint(float(d["x"]), l, y)


def params_to_dict(g: GeodesicParams) -> dict:
    if isinstance(g, Line):
        return {"kind": "line", "c0": g.c0, "c": _floats(g.c)}
    d = {"kind": "helix", "alpha": g.alpha, "rho": g.rho, "sigma": g.sigma, "k": _floats(g.k)}
    if g.kperp is not None:
        d["kperp"] = _floats(g.kperp)
    return d


def params_from_dict(d: dict) -> GeodesicParams:
    kind = d.get("kind")
    if kind == "line":
        _require(d, "c0", "c")
        return Line(d["c0"], d["c"])
    if kind == "helix":
        _require(d, "alpha", "rho", "sigma", "k")
        kperp = d.get("kperp")
        if kperp is not None and len(kperp) != len(d["k"]):
            raise DimensionMismatch("k and kperp have different lengths")
        return Helix(d["alpha"], d["rho"], d["sigma"], d["k"], kperp)
    raise InvalidParams(f"unknown geodesic kind {kind!r}; expected 'helix' or 'line'")


def invariants_to_dict(inv: InvariantPoint) -> dict:
    return {"x": inv.x, "l2": inv.l2, "ldoty": inv.ldoty, "lwedge": inv.lwedge,
            "y2": inv.y2, "phi": inv.phi}


def invariants_from_dict(d: dict) -> InvariantPoint:
    _require(d, "x", "l2", "ldoty", "lwedge", "y2")
    return InvariantPoint(float(d["x"]), float(d["l2"]), float(d["ldoty"]),
                          float(d["lwedge"]), float(d["y2"]))


def cut_info_to_dict(c: CutInfo) -> dict:
    return {"t_cut": c.t_cut, "is_conjugate_at_cut": c.is_conjugate_at_cut,
            "multiplicity": c.multiplicity.value}


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(a) for k, a in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(a) for a in v]
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def result_to_dict(r: SynthesisResult) -> dict:
    return {
        "solutions": [{"params": params_to_dict(g), "time": float(t)} for g, t in r.solutions],
        "distance": float(r.distance),
        "multiplicity": r.multiplicity.value,
        "stratum": r.stratum.name,
        "tau": r.tau,
        "is_conjugate_at_cut": r.is_conjugate_at_cut,
        "diagnostics": _plain(r.diagnostics),
    }


def result_from_dict(d: dict) -> SynthesisResult:
    _require(d, "solutions", "distance", "multiplicity", "stratum")
    sols = tuple(Solution(params_from_dict(s["params"]), float(s["time"])) for s in d["solutions"])
    return SynthesisResult(sols, float(d["distance"]), Multiplicity(d["multiplicity"]),
                           Stratum[d["stratum"]], d.get("tau"),
                           bool(d.get("is_conjugate_at_cut", False)), d.get("diagnostics", {}))


def _json_default(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    raise TypeError(f"not JSON serializable: {type(v).__name__}")


def dumps(obj) -> str:
    """JSON text; non-finite floats are written as null."""
    return json.dumps(_finite(obj), default=_json_default, sort_keys=False)


def _finite(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _finite(a) for k, a in v.items()}
    if isinstance(v, (list, tuple)):
        return [_finite(a) for a in v]
    return v


def loads(text: str):
    return json.loads(text)


def trajectory_rows(ts, points):
    """CSV rows t, x, l_1..l_n, y_1..y_n."""
    for t, p in zip(ts, points):
        yield [fmt_csv(t), fmt_csv(p.x)] + [fmt_csv(v) for v in p.l] + [fmt_csv(v) for v in p.y]


def trajectory_header(n: int):
    return ["t", "x"] + [f"l_{i}" for i in range(1, n + 1)] + [f"y_{i}" for i in range(1, n + 1)]
