"""Command line entry point: train-classifier / train-generator."""

from __future__ import annotations

import argparse
import sys

from .config import CLASSIFIER_ARCHS, DATASETS, TrainingConfig
from .data import DatasetError
from .train import train_classifier, train_generator


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", choices=DATASETS, default="synthetic-blobs")
    p.add_argument("--epochs", type=int, default=2)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="forge_out")
    p.add_argument("--data-dir", default="data")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="model-forge",
        description="Train a dense classifier or a per-category generator "
                    "and export it as a .nnw weight file.")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("train-classifier", help="train and export the "
                        "dense classifier")
    pc.add_argument("--arch", choices=sorted(CLASSIFIER_ARCHS),
                    default="small")
    pc.add_argument("--augmentation", action="store_true",
                    help="rotations, shear, and shifts on each batch")
    _add_common(pc)

    pg = sub.add_parser("train-generator", help="adversarially train and "
                        "export one per-category generator")
    pg.add_argument("--category", type=int, required=True)
    pg.add_argument("--latent-dim", type=int, default=100)
    _add_common(pg)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = TrainingConfig(
            dataset=args.dataset,
            classifier_arch=getattr(args, "arch", "small"),
            latent_dim=getattr(args, "latent_dim", 100),
            augmentation=getattr(args, "augmentation", False),
            epochs=args.epochs, batch_size=args.batch_size,
            seed=args.seed, out_dir=args.out_dir, data_dir=args.data_dir)
        if args.command == "train-classifier":
            _, acc, path = train_classifier(cfg)
            print(f"exported {path} (test accuracy {acc:.4f})")
        else:
            _, path = train_generator(cfg, args.category)
            print(f"exported {path}")
    except (ValueError, DatasetError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
