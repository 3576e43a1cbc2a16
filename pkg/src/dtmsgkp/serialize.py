"""JSON interchange for matrices, lattice bases and code specs."""
from __future__ import annotations

import json

import numpy as np

from .codes import CodeSpec
from .errors import DimensionError
from .lattice import ELL
from .symplectic import n_modes_of


def matrix_to_json(S) -> dict:
    """{n_modes, entries}: entries are the 2N x 2N matrix flattened row-major."""
    S = np.asarray(S, dtype=float)
    return {"n_modes": n_modes_of(S), "entries": [float(x) for x in S.ravel()]}


def matrix_from_json(data) -> np.ndarray:
    if isinstance(data, str):
        data = json.loads(data)
    n2 = 2 * int(data["n_modes"])
    entries = np.asarray(data["entries"], dtype=float)
    if entries.size != n2 * n2:
        raise DimensionError(f"expected {n2 * n2} entries, got {entries.size}")
    return entries.reshape(n2, n2)


def lattice_to_json(M) -> dict:
    """{n_modes, generator, scale}; physical basis vectors are scale * columns."""
    out = matrix_to_json(M)
    return {"n_modes": out["n_modes"], "generator": out["entries"], "scale": ELL}


def lattice_from_json(data) -> np.ndarray:
    if isinstance(data, str):
        data = json.loads(data)
    M = matrix_from_json({"n_modes": data["n_modes"], "entries": data["generator"]})
    scale = float(data.get("scale", ELL))
    return M * (scale / ELL)


def spec_to_json(spec: CodeSpec) -> dict:
    return spec.to_dict()


def spec_from_json(data) -> CodeSpec:
    if isinstance(data, str):
        data = json.loads(data)
    return CodeSpec.from_dict(data)


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")
