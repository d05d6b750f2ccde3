"""Feedforward network representation: forward evaluation, argmax
classification, generator/classifier composition and reverse-mode
gradients of a single logit.

Networks are immutable after construction; forward/classify/gradient are
pure and safe to call concurrently on a shared network.  The only
mutable attachment is an evaluation counter used by tests to enforce
the black-box contract of the attacks module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CompositionError, DimensionError
from .tensor import (ACTIVATIONS, activate, activation_derivative, affine,
                     as_tensor)

ROLES = ("generator", "classifier", "composed")


@dataclass
class EvalCounters:
    """Forward / gradient call counts, for black-box contract tests."""
    forward: int = 0
    gradient: int = 0

    def reset(self):
        self.forward = 0
        self.gradient = 0


@dataclass(frozen=True)
class Layer:
    weights: np.ndarray  # (q, p)
    bias: np.ndarray     # (q,)
    activation: str

    def __post_init__(self):
        object.__setattr__(self, "weights", as_tensor(self.weights))
        object.__setattr__(self, "bias", as_tensor(self.bias))
        if self.weights.ndim != 2:
            raise DimensionError(
                f"layer weights must be 2-D, got shape {self.weights.shape}"
            )
        if self.bias.shape != (self.weights.shape[0],):
            raise DimensionError(
                f"bias shape {self.bias.shape} does not match "
                f"weights shape {self.weights.shape}"
            )
        if self.activation not in ACTIVATIONS:
            raise DimensionError(
                f"unsupported activation {self.activation!r}"
            )

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class Network:
    layers: tuple
    role: str
    # number of leading layers that belong to the generator half of a
    # composed net; None for plain generators/classifiers
    generator_layer_count: int | None = None
    counters: EvalCounters = field(default_factory=EvalCounters, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise DimensionError("network needs at least one layer")
        if self.role not in ROLES:
            raise DimensionError(f"unsupported role {self.role!r}")
        for i in range(len(self.layers) - 1):
            a, b = self.layers[i], self.layers[i + 1]
            if a.out_dim != b.in_dim:
                raise DimensionError(
                    f"layer {i} outputs {a.out_dim} values but layer "
                    f"{i + 1} expects {b.in_dim}"
                )

    @property
    def input_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].out_dim


@dataclass(frozen=True)
class Prediction:
    logits: np.ndarray
    category: int
    score: float


def forward(net: Network, x: np.ndarray) -> np.ndarray:
    """Evaluate the network on one input vector or a batch (rows)."""
    h = np.asarray(x, dtype=np.float64)
    expected = net.input_dim
    got = h.shape[-1] if h.ndim in (1, 2) else None
    if got != expected:
        raise DimensionError(
            f"input shape {h.shape} does not match network input_dim "
            f"{expected}"
        )
    net.counters.forward += 1 if h.ndim == 1 else h.shape[0]
    for layer in net.layers:
        h = activate(layer.activation, affine(layer.weights, layer.bias, h))
    return h


def classify(net: Network, x: np.ndarray) -> Prediction:
    """Argmax over logits; ties break toward the lowest category index."""
    if net.role not in ("classifier", "composed"):
        raise DimensionError(f"cannot classify with a {net.role} network")
    logits = forward(net, x)
    cat = int(np.argmax(logits))  # np.argmax returns the first maximum
    return Prediction(logits=logits, category=cat, score=float(logits[cat]))


def classify_batch(net: Network, X: np.ndarray) -> np.ndarray:
    """Categories for a batch of inputs (rows), same tie-break as classify."""
    if net.role not in ("classifier", "composed"):
        raise DimensionError(f"cannot classify with a {net.role} network")
    logits = forward(net, X)
    return np.argmax(logits, axis=1)


def compose(G: Network, C: Network) -> Network:
    """Rewire the generator's output into the classifier's input."""
    if G.role != "generator":
        raise CompositionError(f"first operand has role {G.role!r}, "
                               "expected generator")
    if C.role != "classifier":
        raise CompositionError(f"second operand has role {C.role!r}, "
                               "expected classifier")
    if G.output_dim != C.input_dim:
        raise CompositionError(
            f"generator outputs {G.output_dim} values but classifier "
            f"expects {C.input_dim}"
        )
    return Network(
        layers=G.layers + C.layers,
        role="composed",
        generator_layer_count=len(G.layers),
    )


def generator_part(composed: Network) -> Network:
    """The generator half of a composed network (for rendering images)."""
    k = composed.generator_layer_count
    if composed.role != "composed" or not k:
        raise DimensionError("network is not a composed C(G(x)) network")
    return Network(layers=composed.layers[:k], role="generator")


def gradient(net: Network, x: np.ndarray, class_idx: int) -> np.ndarray:
    """d logits[class_idx] / d x by reverse-mode accumulation."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.input_dim,):
        raise DimensionError(
            f"input shape {x.shape} does not match network input_dim "
            f"{net.input_dim}"
        )
    if not 0 <= class_idx < net.output_dim:
        raise IndexError(
            f"class index {class_idx} out of range for output_dim "
            f"{net.output_dim}"
        )
    net.counters.gradient += 1
    # forward pass, keeping preactivations
    pres = []
    h = x
    for layer in net.layers:
        z = affine(layer.weights, layer.bias, h)
        pres.append(z)
        h = activate(layer.activation, z)
    # backward pass
    grad = np.zeros(net.output_dim)
    grad[class_idx] = 1.0
    for layer, z in zip(reversed(net.layers), reversed(pres)):
        grad = (grad * activation_derivative(layer.activation, z)) @ layer.weights
    return grad


def identity_network(dim: int, role: str = "generator") -> Network:
    """dim-dimensional identity map, handy as a trivial generator."""
    return Network(
        layers=(Layer(np.eye(dim), np.zeros(dim), "identity"),),
        role=role,
    )
