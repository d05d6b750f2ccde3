"""Desk-scale training: a dense classifier and per-category dense
generators (vanilla GAN), exported to `.nnw`.

GAN recipe (the usual off-the-shelf choices, recorded here since they
matter for reproduction): BCE-with-logits adversarial loss, Adam with
lr 2e-4 and betas (0.5, 0.999) for both nets, one discriminator step
per generator step, LeakyReLU(0.2) discriminator 784 -> 256 -> 128 -> 1,
generator latent -> hidden widths -> 784 with ReLU hidden layers and a
sigmoid output (pixels live in [0, 1]).
"""

from __future__ import annotations

import os
import time

import numpy as np
import torch
from torch import nn

from .config import IMAGE_DIM, N_CLASSES, TrainingConfig
from .data import augment_batch, load_dataset
from .export import export_model


def _deterministic(seed: int) -> torch.Generator:
    torch.manual_seed(seed)
    torch.set_num_threads(1)
    g = torch.Generator()
    g.manual_seed(seed)
    return g


def build_classifier(widths: tuple) -> nn.Sequential:
    dims = (IMAGE_DIM, *widths, N_CLASSES)
    modules = []
    for i in range(len(dims) - 1):
        modules.append(nn.Linear(dims[i], dims[i + 1]))
        if i < len(dims) - 2:
            modules.append(nn.ReLU())
    return nn.Sequential(*modules)


def build_generator(latent_dim: int, hidden: tuple) -> nn.Sequential:
    dims = (latent_dim, *hidden, IMAGE_DIM)
    modules = []
    for i in range(len(dims) - 1):
        modules.append(nn.Linear(dims[i], dims[i + 1]))
        modules.append(nn.ReLU() if i < len(dims) - 2 else nn.Sigmoid())
    return nn.Sequential(*modules)


def _build_discriminator() -> nn.Sequential:
    return nn.Sequential(
        nn.Linear(IMAGE_DIM, 256), nn.LeakyReLU(0.2),
        nn.Linear(256, 128), nn.LeakyReLU(0.2),
        nn.Linear(128, 1),
    )


def train_classifier(cfg: TrainingConfig) -> tuple[nn.Sequential, float, str]:
    """Train the classifier, log test accuracy, export.  Returns
    (model, test_accuracy, exported_path)."""
    g = _deterministic(cfg.seed)
    (train_x, train_y), (test_x, test_y) = load_dataset(cfg)
    x = torch.from_numpy(train_x)
    y = torch.from_numpy(train_y)
    model = build_classifier(cfg.classifier_widths)
    opt = torch.optim.Adam(model.parameters(), lr=1e-3)
    loss_fn = nn.CrossEntropyLoss()

    n = len(y)
    for epoch in range(cfg.epochs):
        order = torch.randperm(n, generator=g)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            xb = x[idx]
            if cfg.augmentation:
                xb = augment_batch(xb, g)
            opt.zero_grad()
            loss = loss_fn(model(xb), y[idx])
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
        print(f"[classifier] epoch {epoch + 1}/{cfg.epochs} "
              f"loss {total / n:.4f}")

    model.eval()
    with torch.no_grad():
        pred = model(torch.from_numpy(test_x)).argmax(dim=1).numpy()
    acc = float(np.mean(pred == test_y))
    print(f"[classifier] test accuracy {acc:.4f}")

    path = os.path.join(cfg.out_dir, f"classifier_{cfg.classifier_arch}.nnw")
    export_model(model, "classifier", path, meta={
        "dataset": cfg.dataset, "arch": cfg.classifier_arch,
        "test_accuracy": f"{acc:.4f}", "seed": cfg.seed})
    return model, acc, path


def train_generator(cfg: TrainingConfig,
                    category: int) -> tuple[nn.Sequential, str]:
    """Train a per-category generator adversarially and export it.
    Returns (generator, exported_path)."""
    if not 0 <= category < N_CLASSES:
        raise ValueError(f"category must be in [0, {N_CLASSES}), "
                         f"got {category}")
    g = _deterministic(cfg.seed * N_CLASSES + category + 1)
    (train_x, train_y), _ = load_dataset(cfg)
    real = torch.from_numpy(train_x[train_y == category])
    if len(real) == 0:
        raise ValueError(f"no training images for category {category}")

    gen = build_generator(cfg.latent_dim, cfg.generator_hidden)
    disc = _build_discriminator()
    opt_g = torch.optim.Adam(gen.parameters(), lr=2e-4, betas=(0.5, 0.999))
    opt_d = torch.optim.Adam(disc.parameters(), lr=2e-4, betas=(0.5, 0.999))
    loss_fn = nn.BCEWithLogitsLoss()

    t0 = time.time()
    n = len(real)
    for epoch in range(cfg.epochs):
        order = torch.randperm(n, generator=g)
        for start in range(0, n, cfg.batch_size):
            xb = real[order[start:start + cfg.batch_size]]
            m = len(xb)
            z = torch.randn(m, cfg.latent_dim, generator=g)
            fake = gen(z)

            opt_d.zero_grad()
            d_loss = (loss_fn(disc(xb), torch.ones(m, 1))
                      + loss_fn(disc(fake.detach()), torch.zeros(m, 1)))
            d_loss.backward()
            opt_d.step()

            opt_g.zero_grad()
            g_loss = loss_fn(disc(fake), torch.ones(m, 1))
            g_loss.backward()
            opt_g.step()
        if (epoch + 1) % 5 == 0 or epoch == cfg.epochs - 1:
            print(f"[generator c={category}] epoch {epoch + 1}/{cfg.epochs} "
                  f"d_loss {float(d_loss.detach()):.3f} "
                  f"g_loss {float(g_loss.detach()):.3f} "
                  f"({time.time() - t0:.1f}s)")

    gen.eval()
    path = os.path.join(cfg.out_dir, f"generator_c{category}.nnw")
    export_model(gen, "generator", path, meta={
        "dataset": cfg.dataset, "category": category,
        "latent_dim": cfg.latent_dim, "seed": cfg.seed})
    return gen, path
