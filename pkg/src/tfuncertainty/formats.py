"""JSON input files and deterministic report output.

Signal file::

    {"d": 1, "terms": [{"c": [re, im], "a": [re, im], "mu": [...], "nu": [...]}]}

Point configuration::

    {"d": 1, "points": [[x, omega], ...]}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .core import GaussianMixture, GeneralizedGaussian, PhasePoint


class FormatError(ValueError):
    """Malformed input file; the message names the offending field."""


def _load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _pair(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise FormatError(f"{where}: expected [re, im] pair of numbers, got {value!r}")
    return complex(value[0], value[1])


def _vector(value, d: int, where: str) -> list:
    if (not isinstance(value, list) or len(value) != d
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise FormatError(f"{where}: expected a list of {d} numbers, got {value!r}")
    return [float(v) for v in value]


def mixture_from_dict(data, source: str = "signal") -> GaussianMixture:
    if not isinstance(data, dict):
        raise FormatError(f"{source}: top level must be an object")
    d = data.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise FormatError(f"{source}: field 'd' must be a positive integer, got {d!r}")
    terms = data.get("terms")
    if not isinstance(terms, list):
        raise FormatError(f"{source}: field 'terms' must be a list")
    out = []
    for k, term in enumerate(terms):
        where = f"{source}: terms[{k}]"
        if not isinstance(term, dict):
            raise FormatError(f"{where}: must be an object")
        missing = {"c", "a", "mu", "nu"} - term.keys()
        if missing:
            raise FormatError(f"{where}: missing field(s) {sorted(missing)}")
        try:
            out.append(GeneralizedGaussian(
                _pair(term["c"], f"{where}.c"), _pair(term["a"], f"{where}.a"),
                _vector(term["mu"], d, f"{where}.mu"), _vector(term["nu"], d, f"{where}.nu")))
        except FormatError:
            raise
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from exc
    return GaussianMixture(out, d)


def mixture_to_dict(f: GaussianMixture) -> dict:
    return {
        "d": f.d,
        "terms": [{"c": [t.c.real, t.c.imag], "a": [t.a.real, t.a.imag],
                   "mu": list(t.mu), "nu": list(t.nu)} for t in f.terms],
    }


def load_signal(path) -> GaussianMixture:
    return mixture_from_dict(_load_json(path), str(path))


def points_from_dict(data, source: str = "points") -> list[PhasePoint]:
    if not isinstance(data, dict):
        raise FormatError(f"{source}: top level must be an object")
    d = data.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise FormatError(f"{source}: field 'd' must be a positive integer, got {d!r}")
    pts = data.get("points")
    if not isinstance(pts, list) or not pts:
        raise FormatError(f"{source}: field 'points' must be a non-empty list")
    return [PhasePoint(_vector(p, 2 * d, f"{source}: points[{k}]")) for k, p in enumerate(pts)]


def load_points(path) -> list[PhasePoint]:
    return points_from_dict(_load_json(path), str(path))


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or (isinstance(obj, float) and math.isnan(obj)):
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps_report(obj, indent: int = 2) -> str:
    """Deterministic JSON: floats at 17 significant digits, NaN as null, keys in insertion order."""
    return _encode(obj, indent, 0) + "\n"
