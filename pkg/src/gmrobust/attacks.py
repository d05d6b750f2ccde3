"""Search for realistic adversarial examples on the composed network:
a black-box local search and a white-box gradient ascent.

Both attacks maximise the target class score (the pre-softmax logit) and
declare success as soon as the current iterate is classified differently
from the starting noise.  Every iterate is projected back onto the
epsilon-infinity-ball around the start, so a returned witness pair
always satisfies the distance clause of the definition.

The black-box attack only ever calls forward evaluation; this is
checked in tests through the network's evaluation counters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError
from .network import Network, classify, forward, generator_part, gradient
from .tensor import RngStream


@dataclass(frozen=True)
class AttackParams:
    epsilon: float
    target_class: int
    source_class: int
    n_step: int = 16
    n_dir: int = 10
    step_scale: float | None = None  # defaults to epsilon / n_step
    max_restarts: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n_step < 1 or self.n_dir < 1:
            raise ConfigurationError("n_step and n_dir must be >= 1")
        if self.epsilon <= 0:
            raise ConfigurationError("epsilon must be > 0")
        if self.max_restarts < 1:
            raise ConfigurationError("max_restarts must be >= 1")
        if self.step_scale is not None and self.step_scale <= 0:
            raise ConfigurationError("step_scale must be > 0")

    @property
    def alpha(self) -> float:
        return (self.step_scale if self.step_scale is not None
                else self.epsilon / self.n_step)


@dataclass(frozen=True)
class RealisticAdvExample:
    x: np.ndarray
    x_prime: np.ndarray
    category_x: int
    category_x_prime: int
    image_x: np.ndarray
    image_x_prime: np.ndarray
    linf_distance: float


def _project(x: np.ndarray, center: np.ndarray,
             epsilon: float) -> np.ndarray:
    return np.clip(x, center - epsilon, center + epsilon)


def _witness(composed: Network, x0: np.ndarray, x1: np.ndarray,
             c0: int, c1: int) -> RealisticAdvExample:
    gen = generator_part(composed)
    return RealisticAdvExample(
        x=x0.copy(), x_prime=x1.copy(),
        category_x=c0, category_x_prime=c1,
        image_x=forward(gen, x0), image_x_prime=forward(gen, x1),
        linf_distance=float(np.max(np.abs(x0 - x1))),
    )


def black_box_attack(composed: Network, params: AttackParams,
                     start: np.ndarray | None = None
                     ) -> RealisticAdvExample | None:
    """Random local search (forward evaluations only).

    Per restart: from a sampled (or given) start noise, take n_step
    steps; each step probes n_dir Gaussian perturbations of scale
    alpha and moves to the best-scoring candidate if it improves the
    incumbent, then projects onto the epsilon-ball around the start.
    """
    if composed.role != "composed":
        raise DimensionError("attack expects the composed network")
    p = composed.input_dim
    if start is not None:
        start = np.asarray(start, dtype=np.float64)
        if start.shape != (p,):
            raise DimensionError(
                f"start shape {start.shape} does not match input_dim {p}")
    for restart in range(params.max_restarts):
        rng = RngStream(params.seed, stream_id=restart)
        x0 = start if start is not None else rng.normal(p)
        c0 = classify(composed, x0).category
        x = x0
        for _ in range(params.n_step):
            s_max = float(forward(composed, x)[params.target_class])
            x_next = x
            for _ in range(params.n_dir):
                cand = x + params.alpha * rng.normal(p)
                s = float(forward(composed, cand)[params.target_class])
                if s > s_max:
                    s_max = s
                    x_next = cand
            x = _project(x_next, x0, params.epsilon)
            c1 = classify(composed, x).category
            if c1 != c0:
                return _witness(composed, x0, x, c0, c1)
    return None


def white_box_attack(composed: Network, params: AttackParams,
                     start: np.ndarray | None = None
                     ) -> RealisticAdvExample | None:
    """Projected gradient ascent on the target class logit."""
    if composed.role != "composed":
        raise DimensionError("attack expects the composed network")
    p = composed.input_dim
    if start is not None:
        start = np.asarray(start, dtype=np.float64)
        if start.shape != (p,):
            raise DimensionError(
                f"start shape {start.shape} does not match input_dim {p}")
    for restart in range(params.max_restarts):
        rng = RngStream(params.seed, stream_id=restart)
        x0 = start if start is not None else rng.normal(p)
        c0 = classify(composed, x0).category
        x = x0
        for _ in range(params.n_step):
            g = gradient(composed, x, params.target_class)
            x = _project(x + params.alpha * g, x0, params.epsilon)
            c1 = classify(composed, x).category
            if c1 != c0:
                return _witness(composed, x0, x, c0, c1)
        if start is not None:
            # gradient ascent from a fixed start is deterministic;
            # further restarts would repeat the same trajectory
            break
    return None


def verify_adv_example(candidate: RealisticAdvExample, composed: Network,
                       epsilon: float) -> bool:
    """Recheck the definition from scratch: distance within epsilon and
    classifications through the composed network differ."""
    x = np.asarray(candidate.x, dtype=np.float64)
    xp = np.asarray(candidate.x_prime, dtype=np.float64)
    if x.shape != (composed.input_dim,) or xp.shape != (composed.input_dim,):
        raise DimensionError("witness shapes do not match composed input")
    dist = float(np.max(np.abs(x - xp)))
    if dist > epsilon:
        return False
    return classify(composed, x).category != classify(composed, xp).category
