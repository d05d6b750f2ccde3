#!/usr/bin/env python3
"""End-to-end demo on the checked-in fixtures: correctness estimate,
robustness estimate, both attacks and a random walk, all reproducible
from the printed seeds."""

import os
import sys

from gmrobust.cli import run

FIX = os.path.join(os.path.dirname(__file__), "..", "fixtures")
OUT = sys.argv[1] if len(sys.argv) > 1 else "demo_out"

steps = [
    ["correctness",
     "--classifier", f"{FIX}/threshold_classifier_1d.nnw",
     "--generator", f"{FIX}/identity_generator_1d.nnw",
     "--category", "1", "--n", "10000", "--seed", "7",
     "--out", f"{OUT}/correctness"],
    ["robustness",
     "--classifier", f"{FIX}/threshold_classifier_1d.nnw",
     "--generator", f"{FIX}/identity_generator_1d.nnw",
     "--category", "1", "--epsilon", "0.1", "--n", "2000", "--seed", "7",
     "--out", f"{OUT}/robustness"],
    ["attack-wb",
     "--classifier", f"{FIX}/tiny_classifier_2d.nnw",
     "--generator", f"{FIX}/identity_generator_2d.nnw",
     "--epsilon", "1.0", "--target-class", "0", "--source-class", "1",
     "--seed", "7", "--out", f"{OUT}/attack_wb"],
    ["attack-bb",
     "--classifier", f"{FIX}/tiny_classifier_2d.nnw",
     "--generator", f"{FIX}/identity_generator_2d.nnw",
     "--epsilon", "1.0", "--target-class", "0", "--source-class", "1",
     "--seed", "7", "--out", f"{OUT}/attack_bb"],
    ["walk",
     "--generator", f"{FIX}/identity_generator_2d.nnw",
     "--steps", "16", "--sigma", "0.05", "--seed", "7",
     "--frame-shape", "1x2", "--out", f"{OUT}/walk"],
]

for argv in steps:
    print(f"$ gmrobust {' '.join(argv)}")
    code = run(argv)
    if code != 0:
        sys.exit(code)
print(f"all outputs under {OUT}/")
