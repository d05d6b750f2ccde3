#!/usr/bin/env python3
"""Generate the large model fixtures that are too big to check in.

The full-scale GAN skeleton (latent 100 -> 256 -> 512 -> 1024 -> 784,
random weights, sigmoid output) is ~30 MB of text, so it is produced on
demand with a fixed seed instead of living in fixtures/.
"""

import argparse

import numpy as np

from gmrobust import Layer, Network, save_model_path


def gan_skeleton(seed: int = 0, latent: int = 100) -> Network:
    rng = np.random.default_rng(seed)
    dims = (latent, 256, 512, 1024, 784)
    acts = ("relu", "relu", "relu", "sigmoid")
    layers = []
    for (p, q), act in zip(zip(dims[:-1], dims[1:]), acts):
        layers.append(Layer(rng.standard_normal((q, p)) / np.sqrt(p),
                            np.zeros(q), act))
    return Network(layers=tuple(layers), role="generator")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gan-skeleton", metavar="PATH",
                    help="write the random-weight GAN skeleton here")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--latent", type=int, default=100)
    args = ap.parse_args()
    if args.gan_skeleton:
        net = gan_skeleton(args.seed, args.latent)
        save_model_path(net, args.gan_skeleton,
                        meta={"note": "random-weight GAN skeleton",
                              "seed": str(args.seed)})
        print(f"wrote {args.gan_skeleton} "
              f"({args.latent} -> 256 -> 512 -> 1024 -> 784)")


if __name__ == "__main__":
    main()
