"""Exploratory instruments: latent-space random walks, outlier mining
and cross-generator comparison, with PGM (P5) image dumps.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError
from .estimator import (DEFAULT_LEVEL, EstimateReport,
                        estimate_global_correctness)
from .network import Network, Prediction, classify_batch, compose, forward
from .tensor import RngStream, gaussian_matrix


@dataclass(frozen=True)
class WalkConfig:
    steps: int
    sigma: float = 0.05
    seed: int = 0
    frame_shape: tuple[int, int] | None = None  # (height, width)

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigurationError(f"steps must be >= 1, got {self.steps}")
        if self.sigma < 0:
            raise ConfigurationError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class ComparisonReport:
    category: int
    estimates: tuple  # one EstimateReport per generator, input order
    max_discrepancy: float


def _value_range(net: Network) -> tuple[float, float] | None:
    """Fixed pixel range implied by the output activation, if any."""
    act = net.layers[-1].activation
    if act == "tanh":
        return (-1.0, 1.0)
    if act == "sigmoid":
        return (0.0, 1.0)
    return None


def render_pgm(frame: np.ndarray, shape: tuple[int, int],
               value_range: tuple[float, float] | None = None) -> bytes:
    """Binary PGM (P5, maxval 255).

    pixel = clamp(round((v - lo) / (hi - lo) * 255)); (lo, hi) comes
    from value_range, else from the frame itself (flat frames render as
    all zeros).
    """
    h, w = shape
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size != h * w:
        raise DimensionError(
            f"frame with {frame.size} values cannot fill {h}x{w}")
    if value_range is None:
        lo, hi = float(frame.min()), float(frame.max())
    else:
        lo, hi = value_range
    if hi <= lo:
        pixels = np.zeros(frame.size, dtype=np.uint8)
    else:
        scaled = np.clip(np.round((frame - lo) / (hi - lo) * 255), 0, 255)
        pixels = scaled.astype(np.uint8)
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()


def random_walk(G: Network, cfg: WalkConfig,
                out_dir: str | None = None) -> list[np.ndarray]:
    """Images along x_0 ~ N(0,1)^p, x_{i+1} = x_i + N(0, sigma)^p.

    Returns steps + 1 frames; if out_dir is given, also writes them as
    frame_%04d.pgm.
    """
    if cfg.frame_shape is not None:
        h, w = cfg.frame_shape
        if h * w != G.output_dim:
            raise DimensionError(
                f"frame shape {cfg.frame_shape} does not match generator "
                f"output_dim {G.output_dim}")
    rng = RngStream(cfg.seed)
    p = G.input_dim
    x = rng.normal(p)
    frames = [forward(G, x)]
    for _ in range(cfg.steps):
        x = x + cfg.sigma * rng.normal(p)
        frames.append(forward(G, x))
    if out_dir is not None:
        shape = cfg.frame_shape or (1, G.output_dim)
        rng_range = _value_range(G)
        os.makedirs(out_dir, exist_ok=True)
        for i, frame in enumerate(frames):
            path = os.path.join(out_dir, f"frame_{i:04d}.pgm")
            with open(path, "wb") as f:
                f.write(render_pgm(frame, shape, rng_range))
    return frames


def mine_outliers(C: Network, G: Network, c: int, n: int, seed: int,
                  out_dir: str | None = None,
                  frame_shape: tuple[int, int] | None = None
                  ) -> list[tuple[np.ndarray, Prediction]]:
    """Every sampled noise whose composed classification is not c.

    Uses the same per-sample streams as estimate_global_correctness, so
    len(result) == n - successes for the matching report.
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    composed = compose(G, C)
    X = gaussian_matrix(seed, n, composed.input_dim)
    logits = forward(composed, X)
    cats = np.argmax(logits, axis=1)
    bad = np.nonzero(cats != c)[0]
    out = []
    for i in bad:
        cat = int(cats[i])
        out.append((X[i].copy(),
                    Prediction(logits=logits[i], category=cat,
                               score=float(logits[i][cat]))))
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        shape = frame_shape or (1, G.output_dim)
        rng_range = _value_range(G)
        for j, (noise, _) in enumerate(out):
            img = forward(G, noise)
            with open(os.path.join(out_dir, f"outlier_{j:04d}.pgm"),
                      "wb") as f:
                f.write(render_pgm(img, shape, rng_range))
    return out


def compare_generators(C: Network, generators: list[Network], c: int,
                       n: int, seed: int,
                       level: float = DEFAULT_LEVEL) -> ComparisonReport:
    """Correctness estimate per generator under a shared seed."""
    if not generators:
        raise ConfigurationError("need at least one generator to compare")
    estimates = []
    for idx, G in enumerate(generators):
        try:
            estimates.append(
                estimate_global_correctness(C, G, c, n, seed, level=level))
        except DimensionError as e:
            raise DimensionError(f"generator {idx}: {e}") from e
    points = [r.point_estimate for r in estimates]
    return ComparisonReport(category=c, estimates=tuple(estimates),
                            max_discrepancy=max(points) - min(points))
