"""Export torch MLPs to the gmrobust `.nnw` weight format (version 1).

This module implements the documented format directly (see the gmrobust
repository's docs/formats.md); the toolkit itself is consumed only
through that file contract.  Weights are written via float64 repr, the
shortest decimal string that round-trips the exact value, so the
evaluation engine sees exactly the trained float32 weights (every
float32 is exactly representable as float64).
"""

from __future__ import annotations

import os

import numpy as np
import torch
from torch import nn

_ACTIVATION_NAMES = {
    nn.ReLU: "relu",
    nn.Tanh: "tanh",
    nn.Sigmoid: "sigmoid",
    nn.Identity: "identity",
}


def sequential_to_nnw(model: nn.Sequential, role: str,
                      meta: dict | None = None) -> str:
    """Serialize an alternating Linear/activation Sequential."""
    if role not in ("generator", "classifier"):
        raise ValueError(f"role must be generator or classifier, got {role}")
    layers = []  # (W, b, activation_name)
    pending = None
    for module in model:
        if isinstance(module, nn.Linear):
            if pending is not None:
                layers.append(pending + ("identity",))
            W = module.weight.detach().cpu().double().numpy()
            b = (module.bias.detach().cpu().double().numpy()
                 if module.bias is not None else np.zeros(W.shape[0]))
            pending = (W, b)
        else:
            name = _ACTIVATION_NAMES.get(type(module))
            if name is None:
                raise ValueError(
                    f"unsupported module {type(module).__name__}; only "
                    "Linear plus relu/tanh/sigmoid/identity export")
            if pending is None:
                raise ValueError("activation before any Linear layer")
            layers.append(pending + (name,))
            pending = None
    if pending is not None:
        layers.append(pending + ("identity",))
    if not layers:
        raise ValueError("model contains no Linear layers")

    input_dim = layers[0][0].shape[1]
    output_dim = layers[-1][0].shape[0]
    lines = ["nnw 1", f"role {role}", f"input_dim {input_dim}",
             f"output_dim {output_dim}"]
    for k, v in (meta or {}).items():
        lines.append(f"meta {k} {v}".rstrip())
    for W, b, act in layers:
        q, p = W.shape
        lines.append(f"layer {q} {p} {act}")
        lines.append("weights " + " ".join(repr(x) for x in
                                           W.ravel().tolist()))
        lines.append("bias " + " ".join(repr(x) for x in b.tolist()))
    return "\n".join(lines) + "\n"


def export_model(model: nn.Sequential, role: str, path: str,
                 meta: dict | None = None) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    text = sequential_to_nnw(model, role, meta)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    return path


@torch.no_grad()
def model_forward(model: nn.Sequential, x: np.ndarray) -> np.ndarray:
    """Framework-side forward pass on a float64 copy of the weights,
    for export fidelity checks."""
    import copy

    t = torch.from_numpy(np.asarray(x, dtype=np.float64))
    return copy.deepcopy(model).double()(t).numpy()
