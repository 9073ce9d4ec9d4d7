"""Reading and writing state files.

A state file is UTF-8 JSON::

    {"dims": [2, 2],
     "amplitudes": [[0.7071067811865476, 0.0], [0, 0], [0, 0], [0.7071067811865476, 0.0]],
     "meta": {"name": "bell"}}

Amplitudes are ``[re, im]`` pairs in big-endian basis order.  A density
matrix file carries ``"density"`` (a list of rows of ``[re, im]`` pairs)
instead of ``"amplitudes"``.  Non-finite numbers are rejected.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import StateFileError
from .states import DensityMatrix, DimSpec, StateVector


def _reject_constant(name):
    raise StateFileError(f"non-finite number {name!r} in state file")


def _complex(pair, where: str) -> complex:
    if (not isinstance(pair, (list, tuple)) or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
        raise StateFileError(f"{where}: expected [re, im], got {pair!r}")
    re, im = float(pair[0]), float(pair[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise StateFileError(f"{where}: non-finite value")
    return complex(re, im)


def parse_state(text: str) -> StateVector | DensityMatrix:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "dims" not in doc:
        raise StateFileError("state file must be an object with a 'dims' entry")
    dims = doc["dims"]
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims)):
        raise StateFileError(f"'dims' must be a non-empty list of integers, got {dims!r}")
    try:
        spec = DimSpec(tuple(dims))
    except ValueError as exc:
        raise StateFileError(str(exc)) from exc
    D = spec.total_dim
    if "amplitudes" in doc:
        amps = doc["amplitudes"]
        if not isinstance(amps, list) or len(amps) != D:
            raise StateFileError(f"expected {D} amplitudes for dims {dims}")
        return StateVector(spec, [_complex(p, f"amplitude {i}") for i, p in enumerate(amps)])
    if "density" in doc:
        rows = doc["density"]
        if not isinstance(rows, list) or len(rows) != D or any(
                not isinstance(r, list) or len(r) != D for r in rows):
            raise StateFileError(f"expected a {D}x{D} density matrix for dims {dims}")
        return DensityMatrix(spec, [[_complex(p, f"density[{i}][{j}]") for j, p in enumerate(r)]
                                    for i, r in enumerate(rows)])
    raise StateFileError("state file needs 'amplitudes' or 'density'")


def load_state(path) -> StateVector | DensityMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    return parse_state(text)


def _pairs(values) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values).reshape(-1)]


def dump_state(obj: StateVector | DensityMatrix, meta: dict | None = None) -> str:
    doc = {"dims": list(obj.dims.dims)}
    if isinstance(obj, StateVector):
        doc["amplitudes"] = _pairs(obj.amplitudes)
    else:
        D = obj.dims.total_dim
        flat = _pairs(obj.entries)
        doc["density"] = [flat[i * D:(i + 1) * D] for i in range(D)]
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, sort_keys=True)


def save_state(obj: StateVector | DensityMatrix, path, meta: dict | None = None) -> None:
    Path(path).write_text(dump_state(obj, meta) + "\n", encoding="utf-8")
