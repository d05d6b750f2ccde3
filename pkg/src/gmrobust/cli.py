"""Command line entry point.

Every run prints its fully resolved configuration (including a
defaulted seed) before doing work, so any run can be reproduced from
its log.  Exit codes: 0 success, 1 domain error (bad model, dimension
mismatch, ...), 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys

import numpy as np

from . import __version__
from .attacks import (AttackParams, black_box_attack, verify_adv_example,
                      white_box_attack, RealisticAdvExample)
from .errors import GmRobustError
from .estimator import (estimate_global_correctness,
                        estimate_global_robustness, report_to_text)
from .experiments import (WalkConfig, compare_generators, mine_outliers,
                          random_walk, render_pgm, _value_range)
from .model_io import load_model_path
from .network import compose, generator_part, forward
from .vectors import load_vector, save_vector


def _add_common(p, generator=True, classifier=True):
    if classifier:
        p.add_argument("--classifier", required=True,
                       help="classifier model file (.nnw)")
    if generator:
        p.add_argument("--generator", required=True,
                       help="generator model file (.nnw)")
    p.add_argument("--seed", type=int, default=None,
                   help="master seed; drawn fresh and printed if omitted")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("GMROBUST_THREADS", "1")),
                   help="worker threads (results are identical for any "
                        "value; env fallback GMROBUST_THREADS)")


def _attack_args(p):
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--target-class", type=int, required=True)
    p.add_argument("--source-class", type=int, required=True)
    p.add_argument("--n-step", type=int, default=16)
    p.add_argument("--n-dir", type=int, default=10)
    p.add_argument("--max-restarts", type=int, default=100)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gmrobust",
        description="Global correctness / robustness evaluation of a "
                    "classifier against a generative model, and search "
                    "for realistic adversarial examples.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correctness",
                       help="Monte Carlo global correctness estimate")
    _add_common(p)
    p.add_argument("--category", type=int, required=True)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--level", type=float, default=0.95)

    p = sub.add_parser("robustness",
                       help="Monte Carlo global robustness estimate")
    _add_common(p)
    p.add_argument("--category", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--budget", type=int, default=1,
                   help="falsification restarts per unresolved sample")

    for name in ("attack-bb", "attack-wb"):
        p = sub.add_parser(name, help=f"{'black' if name == 'attack-bb' else 'white'}"
                                      "-box realistic adversarial example search")
        _add_common(p)
        _attack_args(p)

    p = sub.add_parser("walk", help="latent-space random walk, PGM frames")
    _add_common(p, classifier=False)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--frame-shape", default=None,
                   help="HxW, e.g. 28x28; default 1 x output_dim")

    p = sub.add_parser("outliers", help="mine misclassified generated images")
    _add_common(p)
    p.add_argument("--category", type=int, required=True)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--frame-shape", default=None)

    p = sub.add_parser("compare",
                       help="correctness across several generators")
    _add_common(p, generator=False)
    p.add_argument("--generator", action="append", required=True,
                   dest="generators", help="repeatable")
    p.add_argument("--category", type=int, required=True)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--level", type=float, default=0.95)

    p = sub.add_parser("verify-pair",
                       help="re-verify a stored witness pair")
    p.add_argument("--classifier", required=True)
    p.add_argument("--generator", required=True)
    p.add_argument("--dir", required=True,
                   help="attack output directory with noise_x.vec and "
                        "noise_x_prime.vec")
    p.add_argument("--epsilon", type=float, required=True)
    return ap


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is None:
        args.seed = secrets.randbits(32)
    return args.seed


def _print_config(args):
    items = {k: v for k, v in sorted(vars(args).items()) if k != "command"}
    print(f"run {args.command} " +
          " ".join(f"{k}={v}" for k, v in items.items()))


def _parse_frame_shape(text):
    if text is None:
        return None
    try:
        h, w = text.lower().split("x")
        return (int(h), int(w))
    except ValueError:
        raise GmRobustError(f"bad --frame-shape {text!r}; expected HxW")


def _write(path: str, data: bytes | str):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as f:
        f.write(data)


def _save_witness(adv: RealisticAdvExample, composed, out_dir: str,
                  epsilon: float):
    gen = generator_part(composed)
    shape = (1, gen.output_dim)
    vrange = _value_range(gen)
    _write(os.path.join(out_dir, "noise_x.vec"), save_vector(adv.x))
    _write(os.path.join(out_dir, "noise_x_prime.vec"),
           save_vector(adv.x_prime))
    _write(os.path.join(out_dir, "image_x.pgm"),
           render_pgm(adv.image_x, shape, vrange))
    _write(os.path.join(out_dir, "image_x_prime.pgm"),
           render_pgm(adv.image_x_prime, shape, vrange))
    summary = ("report 1\n"
               "kind attack\n"
               "found 1\n"
               f"epsilon {epsilon!r}\n"
               f"category_x {adv.category_x}\n"
               f"category_x_prime {adv.category_x_prime}\n"
               f"linf_distance {adv.linf_distance!r}\n")
    _write(os.path.join(out_dir, "attack_report.txt"), summary)


def _cmd_correctness(args) -> int:
    C = load_model_path(args.classifier)
    G = load_model_path(args.generator)
    rep = estimate_global_correctness(C, G, args.category, args.n,
                                      args.seed, level=args.level)
    _write(os.path.join(args.out, "correctness_report.txt"),
           report_to_text(rep))
    print(f"correctness point_estimate={rep.point_estimate} "
          f"ci=[{rep.ci_lo}, {rep.ci_hi}]")
    return 0


def _cmd_robustness(args) -> int:
    C = load_model_path(args.classifier)
    G = load_model_path(args.generator)
    rep = estimate_global_robustness(C, G, args.category, args.epsilon,
                                     args.n, args.seed, budget=args.budget,
                                     level=args.level, threads=args.threads)
    _write(os.path.join(args.out, "robustness_report.txt"),
           report_to_text(rep))
    print(f"robustness certified={rep.certified} falsified={rep.falsified} "
          f"unknown={rep.unknown} bounds=[{rep.lower_bound}, "
          f"{rep.upper_bound}]")
    return 0


def _cmd_attack(args, white: bool) -> int:
    C = load_model_path(args.classifier)
    G = load_model_path(args.generator)
    composed = compose(G, C)
    params = AttackParams(epsilon=args.epsilon,
                          target_class=args.target_class,
                          source_class=args.source_class,
                          n_step=args.n_step, n_dir=args.n_dir,
                          max_restarts=args.max_restarts, seed=args.seed)
    attack = white_box_attack if white else black_box_attack
    adv = attack(composed, params)
    if adv is None:
        print("attack exhausted restarts without a witness")
        return 0
    if not verify_adv_example(adv, composed, args.epsilon):
        raise GmRobustError("internal error: witness failed re-verification")
    _save_witness(adv, composed, args.out, args.epsilon)
    print(f"witness found: categories {adv.category_x} vs "
          f"{adv.category_x_prime}, linf_distance {adv.linf_distance}")
    return 0


def _cmd_walk(args) -> int:
    G = load_model_path(args.generator)
    cfg = WalkConfig(steps=args.steps, sigma=args.sigma, seed=args.seed,
                     frame_shape=_parse_frame_shape(args.frame_shape))
    frames = random_walk(G, cfg, out_dir=args.out)
    print(f"wrote {len(frames)} frames to {args.out}")
    return 0


def _cmd_outliers(args) -> int:
    C = load_model_path(args.classifier)
    G = load_model_path(args.generator)
    outliers = mine_outliers(C, G, args.category, args.n, args.seed,
                             out_dir=args.out,
                             frame_shape=_parse_frame_shape(args.frame_shape))
    lines = ["report 1", "kind outliers", f"category {args.category}",
             f"n {args.n}", f"seed {args.seed}",
             f"outlier_count {len(outliers)}"]
    for noise, pred in outliers:
        lines.append("outlier " + str(pred.category) + " "
                     + " ".join(repr(v) for v in noise.tolist()))
    _write(os.path.join(args.out, "outliers_report.txt"),
           "\n".join(lines) + "\n")
    print(f"found {len(outliers)} outliers out of {args.n}")
    return 0


def _cmd_compare(args) -> int:
    C = load_model_path(args.classifier)
    gens = [load_model_path(p) for p in args.generators]
    rep = compare_generators(C, gens, args.category, args.n, args.seed,
                             level=args.level)
    lines = ["report 1", "kind compare", f"category {args.category}",
             f"n {args.n}", f"seed {args.seed}",
             f"max_discrepancy {rep.max_discrepancy!r}"]
    for path, est in zip(args.generators, rep.estimates):
        lines.append(f"estimate {path} {est.point_estimate!r} "
                     f"{est.ci_lo!r} {est.ci_hi!r}")
    _write(os.path.join(args.out, "compare_report.txt"),
           "\n".join(lines) + "\n")
    print(f"max discrepancy {rep.max_discrepancy}")
    return 0


def _cmd_verify_pair(args) -> int:
    C = load_model_path(args.classifier)
    G = load_model_path(args.generator)
    composed = compose(G, C)
    with open(os.path.join(args.dir, "noise_x.vec"), "rb") as f:
        x = load_vector(f.read())
    with open(os.path.join(args.dir, "noise_x_prime.vec"), "rb") as f:
        xp = load_vector(f.read())
    from .network import classify
    px, pxp = classify(composed, x), classify(composed, xp)
    cand = RealisticAdvExample(
        x=x, x_prime=xp, category_x=px.category,
        category_x_prime=pxp.category,
        image_x=forward(generator_part(composed), x),
        image_x_prime=forward(generator_part(composed), xp),
        linf_distance=float(np.max(np.abs(x - xp))))
    ok = verify_adv_example(cand, composed, args.epsilon)
    print(f"verify-pair {'VALID' if ok else 'INVALID'}: categories "
          f"{px.category} vs {pxp.category}, linf_distance "
          f"{cand.linf_distance}")
    return 0


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _resolve_seed(args)
        _print_config(args)
        if args.command == "correctness":
            return _cmd_correctness(args)
        if args.command == "robustness":
            return _cmd_robustness(args)
        if args.command == "attack-bb":
            return _cmd_attack(args, white=False)
        if args.command == "attack-wb":
            return _cmd_attack(args, white=True)
        if args.command == "walk":
            return _cmd_walk(args)
        if args.command == "outliers":
            return _cmd_outliers(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "verify-pair":
            return _cmd_verify_pair(args)
        raise AssertionError(args.command)
    except (GmRobustError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
