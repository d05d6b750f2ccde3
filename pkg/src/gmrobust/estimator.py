"""Monte Carlo estimation of global correctness and global robustness
of a classifier with respect to a generative model.

Sample i's noise always comes from random stream (seed, i), so the
verdicts and the final report are independent of batch size and worker
count.  Confidence intervals are Wilson score intervals, which behave
correctly in the k ~ n regime where all interesting results live.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .attacks import AttackParams, white_box_attack
from .errors import ConfigurationError
from .network import Network, classify_batch, compose, forward
from .tensor import gaussian_matrix
from .verifier import Verdict, certify

# two-sided normal quantiles for the supported confidence levels
_Z = {0.9: 1.6448536269514722,
      0.95: 1.959963984540054,
      0.99: 2.5758293035489004}

DEFAULT_LEVEL = 0.95
DEFAULT_BATCH = 256


@dataclass(frozen=True)
class EstimateReport:
    category: int
    n: int
    successes: int
    point_estimate: float
    ci_lo: float
    ci_hi: float
    level: float
    seed: int
    delta_claim: float  # the report supports "correct with prob >= 1 - delta"


@dataclass(frozen=True)
class RobustnessReport:
    category: int
    epsilon: float
    n: int
    certified: int
    falsified: int
    unknown: int
    lower_bound: float
    upper_bound: float
    level: float
    seed: int
    verdicts: str  # one char per sample index: C / F / U


def confidence_interval(k: int, n: int,
                        level: float = DEFAULT_LEVEL) -> tuple[float, float]:
    """Wilson score interval for k successes out of n, clamped to [0,1]."""
    if level not in _Z:
        raise ConfigurationError(
            f"unsupported confidence level {level}; choose from "
            f"{sorted(_Z)}")
    if not 0 <= k <= n or n < 1:
        raise ConfigurationError(f"need 0 <= k <= n, n >= 1; got k={k} n={n}")
    z = _Z[level]
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / n
                                   + z * z / (4 * n * n))
    return (max(0.0, center - half), min(1.0, center + half))


def estimate_global_correctness(C: Network, G: Network, c: int, n: int,
                                seed: int, level: float = DEFAULT_LEVEL,
                                batch_size: int = DEFAULT_BATCH
                                ) -> EstimateReport:
    """Fraction of noises x ~ N(0,1)^p with C(G(x)) classified as c."""
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    composed = compose(G, C)
    X = gaussian_matrix(seed, n, composed.input_dim)
    k = 0
    for start in range(0, n, batch_size):
        cats = classify_batch(composed, X[start:start + batch_size])
        k += int(np.sum(cats == c))
    lo, hi = confidence_interval(k, n, level)
    return EstimateReport(category=c, n=n, successes=k,
                          point_estimate=k / n, ci_lo=lo, ci_hi=hi,
                          level=level, seed=seed, delta_claim=1.0 - lo)


def _runner_up(logits: np.ndarray, c: int) -> int:
    """Highest-scoring class other than c (attack target heuristic)."""
    order = np.argsort(logits)[::-1]
    return int(order[0]) if order[0] != c else int(order[1])


def _sample_verdict(composed: Network, x: np.ndarray, logits: np.ndarray,
                    c: int, epsilon: float, budget: int,
                    seed: int) -> Verdict:
    if int(np.argmax(logits)) != c:
        # the ball center itself is a violation
        return Verdict(kind="Falsified", witness=(x.copy(), x.copy()))
    if epsilon == 0.0:
        # degenerate ball: the verdict is plain classification
        return Verdict(kind="Certified", margin=_point_margin(logits, c))
    v = certify(composed, x, epsilon, c)
    if v.kind == "Certified":
        return v
    params = AttackParams(epsilon=epsilon, target_class=_runner_up(
        logits, c), source_class=c, max_restarts=budget, seed=seed)
    adv = white_box_attack(composed, params, start=x)
    if adv is not None:
        return Verdict(kind="Falsified", witness=(adv.x, adv.x_prime))
    return Verdict(kind="Unknown")


def _point_margin(logits: np.ndarray, c: int) -> float:
    others = np.delete(logits, c)
    gap = float(logits[c] - np.max(others))
    # an exact tie resolved toward c by the argmax rule still counts as
    # correct classification at epsilon = 0
    return gap if gap > 0 else float(np.finfo(np.float64).tiny)


def estimate_global_robustness(C: Network, G: Network, c: int,
                               epsilon: float, n: int, seed: int,
                               budget: int = 1,
                               level: float = DEFAULT_LEVEL,
                               threads: int = 1) -> RobustnessReport:
    """Three-way per-sample verdicts over n sampled noises.

    Each sample is first handed to the IBP certifier; if that does not
    certify, the white-box attack restricted to the epsilon-ball tries
    to falsify.  lower/upper bound the true robustness probability:
    Wilson-lo of certified/n and Wilson-hi of (certified + unknown)/n.
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    if epsilon < 0:
        raise ConfigurationError(f"epsilon must be >= 0, got {epsilon}")
    if budget < 1:
        raise ConfigurationError(f"budget must be >= 1, got {budget}")
    composed = compose(G, C)
    X = gaussian_matrix(seed, n, composed.input_dim)
    logits_all = forward(composed, X)

    def verdict_at(i: int) -> str:
        return _sample_verdict(composed, X[i], logits_all[i], c, epsilon,
                               budget, seed=seed + i).kind

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            kinds = list(pool.map(verdict_at, range(n)))
    else:
        kinds = [verdict_at(i) for i in range(n)]

    cert = kinds.count("Certified")
    fals = kinds.count("Falsified")
    unk = kinds.count("Unknown")
    lower = confidence_interval(cert, n, level)[0]
    upper = confidence_interval(cert + unk, n, level)[1]
    return RobustnessReport(category=c, epsilon=epsilon, n=n,
                            certified=cert, falsified=fals, unknown=unk,
                            lower_bound=lower, upper_bound=upper,
                            level=level, seed=seed,
                            verdicts="".join(k[0] for k in kinds))


def report_to_text(report) -> str:
    """Structured text form of a report (same line-oriented family as
    the model format); field order is fixed so outputs are diffable."""
    if isinstance(report, EstimateReport):
        fields = [("kind", "correctness"),
                  ("category", report.category), ("n", report.n),
                  ("successes", report.successes),
                  ("point_estimate", repr(report.point_estimate)),
                  ("ci_lo", repr(report.ci_lo)),
                  ("ci_hi", repr(report.ci_hi)),
                  ("level", repr(report.level)), ("seed", report.seed),
                  ("delta_claim", repr(report.delta_claim))]
    elif isinstance(report, RobustnessReport):
        fields = [("kind", "robustness"),
                  ("category", report.category),
                  ("epsilon", repr(report.epsilon)), ("n", report.n),
                  ("certified", report.certified),
                  ("falsified", report.falsified),
                  ("unknown", report.unknown),
                  ("lower_bound", repr(report.lower_bound)),
                  ("upper_bound", repr(report.upper_bound)),
                  ("level", repr(report.level)), ("seed", report.seed),
                  ("verdicts", report.verdicts)]
    else:
        raise ConfigurationError(f"cannot serialize {type(report).__name__}")
    return "report 1\n" + "".join(f"{k} {v}\n" for k, v in fields)
