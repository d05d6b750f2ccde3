"""Load and save networks in the `.nnw` text format (version 1).

The format is line oriented UTF-8, documented with a grammar in
docs/formats.md.  Numbers are written with Python's repr, i.e. the
shortest decimal string that round-trips the exact float64 value, so a
save/load cycle is bit-faithful.  Loading validates and rejects; it
never repairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ModelFormatError
from .network import Layer, Network
from .tensor import ACTIVATIONS

FORMAT_VERSION = 1


@dataclass
class ModelFile:
    """Parsed on-disk form of one network, before Network validation."""
    version: int
    role: str
    input_dim: int
    output_dim: int
    layers: list  # of (rows, cols, activation, weights, bias)
    meta: dict = field(default_factory=dict)


def _tokens(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


def _parse_floats(parts, lineno, what):
    try:
        vals = np.array([float(p) for p in parts], dtype=np.float64)
    except ValueError as e:
        raise ModelFormatError(f"bad number in {what}: {e}", lineno)
    if not np.all(np.isfinite(vals)):
        raise ModelFormatError(f"non-finite value in {what}", lineno)
    return vals


def _parse_int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise ModelFormatError(f"{what} must be an integer, got {tok!r}",
                               lineno)


def parse_model_file(data: bytes | str) -> ModelFile:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ModelFormatError(f"not UTF-8 text: {e}")
    else:
        text = data

    lines = text.splitlines()
    header = None
    role = input_dim = output_dim = None
    meta = {}
    layers = []
    pending = None  # (lineno, rows, cols, activation, weights, bias)

    def finish_layer():
        nonlocal pending
        lineno, rows, cols, act, w, b = pending
        if w is None:
            raise ModelFormatError(
                f"layer {len(layers)} has no weights line", lineno)
        if b is None:
            raise ModelFormatError(
                f"layer {len(layers)} has no bias line", lineno)
        if w.size != rows * cols:
            raise ModelFormatError(
                f"layer {len(layers)}: {w.size} weights for declared "
                f"{rows}x{cols}", lineno)
        if b.size != rows:
            raise ModelFormatError(
                f"layer {len(layers)}: {b.size} bias values for declared "
                f"{rows} rows", lineno)
        layers.append((rows, cols, act, w.reshape(rows, cols), b))
        pending = None

    for lineno, raw in enumerate(lines, start=1):
        parts = _tokens(raw)
        if not parts:
            continue
        key = parts[0]
        if header is None:
            if key != "nnw" or len(parts) != 2:
                raise ModelFormatError(
                    "file must start with a 'nnw <version>' header", lineno)
            header = _parse_int(parts[1], lineno, "version")
            if header != FORMAT_VERSION:
                raise ModelFormatError(
                    f"unsupported format version {header}; this reader "
                    f"handles version {FORMAT_VERSION}", lineno)
            continue
        if key == "role":
            if len(parts) != 2 or parts[1] not in ("generator", "classifier"):
                raise ModelFormatError(
                    "role must be 'generator' or 'classifier'", lineno)
            role = parts[1]
        elif key == "input_dim":
            input_dim = _parse_int(parts[1], lineno, "input_dim")
        elif key == "output_dim":
            output_dim = _parse_int(parts[1], lineno, "output_dim")
        elif key == "meta":
            if len(parts) < 2:
                raise ModelFormatError("meta needs a key", lineno)
            raw_rest = raw.split("#", 1)[0].split(None, 2)
            meta[parts[1]] = raw_rest[2].rstrip() if len(raw_rest) > 2 else ""
        elif key == "layer":
            if pending is not None:
                finish_layer()
            if len(parts) != 4:
                raise ModelFormatError(
                    "layer line must be 'layer <rows> <cols> <activation>'",
                    lineno)
            rows = _parse_int(parts[1], lineno, "rows")
            cols = _parse_int(parts[2], lineno, "cols")
            if rows <= 0 or cols <= 0:
                raise ModelFormatError("layer dims must be positive", lineno)
            if parts[3] not in ACTIVATIONS:
                raise ModelFormatError(
                    f"unsupported activation {parts[3]!r}", lineno)
            pending = (lineno, rows, cols, parts[3], None, None)
        elif key == "weights":
            if pending is None:
                raise ModelFormatError("weights line outside a layer", lineno)
            if pending[4] is not None:
                raise ModelFormatError("duplicate weights line", lineno)
            pending = pending[:4] + (
                _parse_floats(parts[1:], lineno, "weights"), pending[5])
        elif key == "bias":
            if pending is None:
                raise ModelFormatError("bias line outside a layer", lineno)
            if pending[5] is not None:
                raise ModelFormatError("duplicate bias line", lineno)
            pending = pending[:5] + (
                _parse_floats(parts[1:], lineno, "bias"),)
        else:
            raise ModelFormatError(f"unknown directive {key!r}", lineno)

    if pending is not None:
        finish_layer()
    if header is None:
        raise ModelFormatError("empty file; expected 'nnw 1' header")
    for name, val in (("role", role), ("input_dim", input_dim),
                      ("output_dim", output_dim)):
        if val is None:
            raise ModelFormatError(f"missing required field {name!r}")
    if not layers:
        raise ModelFormatError("model declares no layers")

    # dimension chain
    if layers[0][1] != input_dim:
        raise ModelFormatError(
            f"layer 0 has {layers[0][1]} columns but input_dim is "
            f"{input_dim}")
    for i in range(len(layers) - 1):
        if layers[i][0] != layers[i + 1][1]:
            raise ModelFormatError(
                f"layer {i} has {layers[i][0]} rows but layer {i + 1} "
                f"has {layers[i + 1][1]} columns")
    if layers[-1][0] != output_dim:
        raise ModelFormatError(
            f"final layer has {layers[-1][0]} rows but output_dim is "
            f"{output_dim}")

    return ModelFile(version=header, role=role, input_dim=input_dim,
                     output_dim=output_dim, layers=layers, meta=meta)


def load_model(data: bytes | str) -> Network:
    mf = parse_model_file(data)
    layers = tuple(
        Layer(weights=w, bias=b, activation=act)
        for (_, _, act, w, b) in mf.layers
    )
    return Network(layers=layers, role=mf.role)


def load_model_path(path) -> Network:
    with open(path, "rb") as f:
        return load_model(f.read())


def save_model(net: Network, meta: dict | None = None) -> bytes:
    """Serialize a network to format version 1.

    Floats use repr (shortest round-trip), so load(save(net)) evaluates
    bitwise identically to net.
    """
    out = [f"nnw {FORMAT_VERSION}"]
    role = net.role if net.role in ("generator", "classifier") else "classifier"
    out.append(f"role {role}")
    out.append(f"input_dim {net.input_dim}")
    out.append(f"output_dim {net.output_dim}")
    for k, v in (meta or {}).items():
        out.append(f"meta {k} {v}".rstrip())
    for layer in net.layers:
        q, p = layer.weights.shape
        out.append(f"layer {q} {p} {layer.activation}")
        out.append("weights " + " ".join(repr(v) for v in
                                         layer.weights.ravel().tolist()))
        out.append("bias " + " ".join(repr(v) for v in
                                      layer.bias.tolist()))
    return ("\n".join(out) + "\n").encode("utf-8")


def save_model_path(net: Network, path, meta: dict | None = None):
    with open(path, "wb") as f:
        f.write(save_model(net, meta))
