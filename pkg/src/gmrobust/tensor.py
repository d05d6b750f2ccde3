"""Dense tensor arithmetic and seeded random number generation.

Tensors are plain float64 numpy arrays; `as_tensor` is the validating
entry point for external data (finiteness is enforced there and after
every operation that could overflow).

Random numbers come from a counter-based construction so that streams
are cheap to key and independent of consumption order:

  key(master_seed, stream_id) = splitmix64(master_seed * PHI ^ stream_id)
  raw(key, t)                 = splitmix64(key + (t + 1) * PHI)      (uint64)
  uniform(key, t)             = ((raw >> 11) + 1) / (2^53 + 1)       in (0,1)
  normal(key, t)              = ndtri(uniform(key, t))               (inverse CDF)

where PHI = 0x9E3779B97F4A7C15 and splitmix64 is the finalizer of
Steele et al.'s SplitMix generator.  This is frozen: the same
(master_seed, stream_id, counter) triple yields the same float on every
platform and numpy version, and whole blocks vectorize to one numpy
expression.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

from .errors import ConfigurationError, DimensionError, NonFiniteError

_PHI = np.uint64(0x9E3779B97F4A7C15)
_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)

ACTIVATIONS = ("relu", "tanh", "sigmoid", "identity")


def as_tensor(values, shape=None) -> np.ndarray:
    """Validate external numeric data into a float64 array.

    Raises NonFiniteError if any entry is NaN/Inf, DimensionError if an
    explicit shape does not match the element count.
    """
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("tensor input contains NaN or Inf")
    if shape is not None:
        shape = tuple(int(s) for s in shape)
        if any(s <= 0 for s in shape):
            raise DimensionError(f"shape {shape} has a non-positive entry")
        if arr.size != int(np.prod(shape)):
            raise DimensionError(
                f"{arr.size} values cannot fill shape {shape}"
            )
        arr = arr.reshape(shape)
    return arr


def check_finite(arr: np.ndarray, context: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{context} produced a non-finite value")
    return arr


def affine(W: np.ndarray, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    """W @ x + b for W (q,p), b (q,), x (p,) or a batch (n,p) -> (n,q)."""
    W = np.asarray(W, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if W.ndim != 2:
        raise DimensionError(f"weights must be a matrix, got shape {W.shape}")
    q, p = W.shape
    if b.shape != (q,):
        raise DimensionError(
            f"bias shape {b.shape} does not match weights rows {q}"
        )
    if x.ndim == 1:
        if x.shape != (p,):
            raise DimensionError(
                f"input shape {x.shape} does not match weights cols {p}"
            )
        out = W @ x + b
    elif x.ndim == 2:
        if x.shape[1] != p:
            raise DimensionError(
                f"batch input shape {x.shape} does not match weights cols {p}"
            )
        out = x @ W.T + b
    else:
        raise DimensionError(f"input must be 1-D or 2-D, got shape {x.shape}")
    return check_finite(out, "affine")


def activate(kind: str, x: np.ndarray) -> np.ndarray:
    """Elementwise activation; shape preserved, monotone nondecreasing."""
    x = np.asarray(x, dtype=np.float64)
    if kind == "relu":
        return np.maximum(x, 0.0)
    if kind == "tanh":
        return np.tanh(x)
    if kind == "sigmoid":
        # stable for large |x|; never overflows
        out = np.empty_like(x)
        pos = x >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
        ex = np.exp(x[~pos])
        out[~pos] = ex / (1.0 + ex)
        return out
    if kind == "identity":
        return x
    raise ConfigurationError(
        f"unsupported activation {kind!r}; expected one of {ACTIVATIONS}"
    )


def activation_derivative(kind: str, pre: np.ndarray) -> np.ndarray:
    """d activate / d pre, evaluated at preactivation values.

    relu subgradient at exactly 0 is 0.
    """
    pre = np.asarray(pre, dtype=np.float64)
    if kind == "relu":
        return (pre > 0.0).astype(np.float64)
    if kind == "tanh":
        t = np.tanh(pre)
        return 1.0 - t * t
    if kind == "sigmoid":
        s = activate("sigmoid", pre)
        return s * (1.0 - s)
    if kind == "identity":
        return np.ones_like(pre)
    raise ConfigurationError(
        f"unsupported activation {kind!r}; expected one of {ACTIVATIONS}"
    )


def _splitmix64(x: np.ndarray) -> np.ndarray:
    # uint64 wraparound is the point here
    with np.errstate(over="ignore"):
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9) & _MASK
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB) & _MASK
        return x ^ (x >> np.uint64(31))


def _stream_key(master_seed: int, stream_id: int) -> np.uint64:
    s = np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF)
    i = np.uint64(stream_id & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        return _splitmix64((s * _PHI & _MASK) ^ i)


def _uniform_block(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Open-interval uniforms for a (broadcast) grid of keys x counters."""
    with np.errstate(over="ignore"):
        raw = _splitmix64(
            (keys + (counters + np.uint64(1)) * _PHI) & _MASK
        )
    return ((raw >> np.uint64(11)).astype(np.float64) + 1.0) / (2.0**53 + 1.0)


class RngStream:
    """One reproducible random stream keyed by (master_seed, stream_id).

    Streams with the same key produce identical sequences; distinct
    stream_ids derived from one master seed are independent of each
    other's consumption order.  Single-owner: derive children for
    parallel work instead of sharing an instance.
    """

    def __init__(self, master_seed: int, stream_id: int = 0):
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        self._key = _stream_key(self.master_seed, self.stream_id)
        self._counter = 0

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.master_seed, stream_id)

    def uniform(self, count: int) -> np.ndarray:
        counters = np.arange(
            self._counter, self._counter + count, dtype=np.uint64
        )
        self._counter += count
        return _uniform_block(self._key, counters)

    def normal(self, count: int) -> np.ndarray:
        return ndtri(self.uniform(count))


def sample_gaussian(rng: RngStream, dim: int, count: int) -> np.ndarray:
    """count i.i.d. standard normal vectors of length dim, rows = samples."""
    if dim < 1 or count < 1:
        raise ConfigurationError(f"dim={dim}, count={count} must be >= 1")
    return rng.normal(dim * count).reshape(count, dim)


def gaussian_matrix(master_seed: int, n: int, dim: int,
                    base_stream: int = 0) -> np.ndarray:
    """(n, dim) standard normals where row i is the first dim values of
    stream (master_seed, base_stream + i).

    Bit-identical to drawing row i from RngStream(master_seed,
    base_stream + i) individually, but computed in one vectorized block;
    results therefore do not depend on batch size or worker schedule.
    """
    ids = np.arange(base_stream, base_stream + n, dtype=np.uint64)
    seeds = np.full(n, master_seed & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
    with np.errstate(over="ignore"):
        keys = _splitmix64((seeds * _PHI & _MASK) ^ ids)
    counters = np.arange(dim, dtype=np.uint64)
    u = _uniform_block(keys[:, None], counters[None, :])
    return ndtri(u)
