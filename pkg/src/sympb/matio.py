"""Matrix file I/O: CSV (rows of comma-separated reals) and JSON (array of arrays)."""

from __future__ import annotations

import json

import numpy as np

FLOAT_FMT = "%.17g"


def load_matrix(path: str) -> np.ndarray:
    """Read a real matrix from a ``.csv`` or ``.json`` file (by extension)."""
    if path.endswith(".json"):
        with open(path) as fh:
            data = json.load(fh)
        m = np.asarray(data, dtype=float)
    else:
        m = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    if m.ndim != 2:
        raise ValueError(f"{path} does not contain a 2-D matrix")
    return m


def save_matrix(m, path: str) -> None:
    """Write a real matrix to ``.csv`` or ``.json`` (by extension)."""
    m = np.asarray(m, dtype=float)
    if path.endswith(".json"):
        with open(path, "w") as fh:
            json.dump([[float(x) for x in row] for row in m], fh)
            fh.write("\n")
    else:
        np.savetxt(path, m, delimiter=",", fmt=FLOAT_FMT)
