"""Noise vector files (`.vec`), the small sibling of the model format.

Used by the attack subcommands to persist witness pairs so they can be
independently re-verified later.
"""

from __future__ import annotations

import numpy as np

from .errors import ModelFormatError

VEC_VERSION = 1


def save_vector(v: np.ndarray) -> bytes:
    v = np.asarray(v, dtype=np.float64).ravel()
    lines = [f"vec {VEC_VERSION}", f"dim {v.size}",
             "values " + " ".join(repr(x) for x in v.tolist())]
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_vector(data: bytes | str) -> np.ndarray:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    dim = None
    values = None
    header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if not header:
            if parts[:1] != ["vec"] or len(parts) != 2 or parts[1] != "1":
                raise ModelFormatError(
                    "file must start with a 'vec 1' header", lineno)
            header = True
        elif parts[0] == "dim":
            dim = int(parts[1])
        elif parts[0] == "values":
            try:
                values = np.array([float(p) for p in parts[1:]],
                                  dtype=np.float64)
            except ValueError as e:
                raise ModelFormatError(f"bad number: {e}", lineno)
        else:
            raise ModelFormatError(f"unknown directive {parts[0]!r}", lineno)
    if dim is None or values is None:
        raise ModelFormatError("missing dim or values line")
    if values.size != dim:
        raise ModelFormatError(
            f"declared dim {dim} but {values.size} values present")
    if not np.all(np.isfinite(values)):
        raise ModelFormatError("non-finite value in vector")
    return values
