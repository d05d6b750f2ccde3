"""Sound but incomplete certification of infinity-norm balls via
interval bound propagation, plus a brute-force grid oracle for
low-dimensional tests.

Affine layers propagate boxes in center-radius form (center' = W c + b,
radius' = |W| r); activations are monotone, so images of endpoints give
the exact interval.  The certifier never falsifies: that job belongs to
the attacks module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, GridTooLargeError
from .network import Network, classify_batch
from .tensor import activate

GRID_POINT_CAP = 10_000_000


@dataclass(frozen=True)
class IntervalVector:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=np.float64)
        hi = np.asarray(self.hi, dtype=np.float64)
        if lo.shape != hi.shape:
            raise DimensionError(
                f"interval bounds shapes differ: {lo.shape} vs {hi.shape}")
        if np.any(lo > hi):
            raise DimensionError("interval has lo > hi in some coordinate")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)


@dataclass(frozen=True)
class Verdict:
    kind: str  # Certified | Falsified | Unknown
    witness: tuple | None = None   # (x, x_prime) when Falsified
    margin: float | None = None    # certified logit gap when Certified

    def __post_init__(self):
        if self.kind not in ("Certified", "Falsified", "Unknown"):
            raise ValueError(f"bad verdict kind {self.kind!r}")
        if (self.witness is not None) != (self.kind == "Falsified"):
            raise ValueError("witness present iff Falsified")
        if self.kind == "Certified" and (self.margin is None
                                         or self.margin <= 0):
            raise ValueError("Certified requires a positive margin")


def ibp_propagate(net: Network, box: IntervalVector) -> IntervalVector:
    """Output bounds containing forward(net, x) for every x in box."""
    if box.lo.shape != (net.input_dim,):
        raise DimensionError(
            f"box shape {box.lo.shape} does not match network input_dim "
            f"{net.input_dim}")
    center = (box.lo + box.hi) / 2.0
    radius = (box.hi - box.lo) / 2.0
    for layer in net.layers:
        center = layer.weights @ center + layer.bias
        radius = np.abs(layer.weights) @ radius
        lo = activate(layer.activation, center - radius)
        hi = activate(layer.activation, center + radius)
        center = (lo + hi) / 2.0
        radius = (hi - lo) / 2.0
    return IntervalVector(lo=center - radius, hi=center + radius)


def certify(net: Network, x: np.ndarray, epsilon: float, c: int) -> Verdict:
    """Certified iff class c's lower logit bound strictly beats every
    other class's upper bound over the epsilon-infinity-ball; otherwise
    Unknown."""
    x = np.asarray(x, dtype=np.float64)
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    if not 0 <= c < net.output_dim:
        raise IndexError(
            f"class index {c} out of range for output_dim {net.output_dim}")
    bounds = ibp_propagate(
        net, IntervalVector(lo=x - epsilon, hi=x + epsilon))
    others = np.delete(bounds.hi, c)
    margin = float(bounds.lo[c] - np.max(others))
    if margin > 0:
        return Verdict(kind="Certified", margin=margin)
    return Verdict(kind="Unknown")


def grid_falsify(net: Network, x: np.ndarray, epsilon: float, c: int,
                 points_per_dim: int,
                 batch_size: int = 1_048_576) -> np.ndarray | None:
    """Exhaustive oracle over a uniform grid in the epsilon-box.

    Returns the first grid point (row-major scan order) classified
    differently from c, or None.  Only tractable for small input dims;
    guarded by a hard point cap.
    """
    x = np.asarray(x, dtype=np.float64)
    d = x.size
    if points_per_dim < 2:
        raise ValueError("points_per_dim must be >= 2")
    if epsilon == 0:
        points_per_dim = 1
    if points_per_dim**d > GRID_POINT_CAP:
        raise GridTooLargeError(
            f"{points_per_dim}^{d} grid points exceed the cap of "
            f"{GRID_POINT_CAP}")
    axes = [np.linspace(xi - epsilon, xi + epsilon, points_per_dim)
            for xi in x]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    for start in range(0, pts.shape[0], batch_size):
        chunk = pts[start:start + batch_size]
        cats = classify_batch(net, chunk)
        bad = np.nonzero(cats != c)[0]
        if bad.size:
            return chunk[bad[0]].copy()
    return None
