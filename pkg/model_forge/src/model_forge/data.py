"""Dataset loading: MNIST / Fashion-MNIST via torchvision (when the
archives are reachable or already on disk) and an offline synthetic
blobs dataset so the whole pipeline runs without any download.
"""

from __future__ import annotations

import numpy as np

from .config import IMAGE_DIM, N_CLASSES, TrainingConfig

# one blob center per class on a ring, in pixel coordinates of the
# 28x28 canvas
_BLOB_CENTERS = [
    (14 + 9 * np.cos(2 * np.pi * c / N_CLASSES),
     14 + 9 * np.sin(2 * np.pi * c / N_CLASSES))
    for c in range(N_CLASSES)
]
_BLOB_SIGMA = 2.5


class DatasetError(RuntimeError):
    pass


def blob_image(category: int, rng: np.random.Generator) -> np.ndarray:
    """One 28x28 image: a Gaussian bump near the class's ring position,
    with jittered center and mild pixel noise, values in [0, 1]."""
    cy, cx = _BLOB_CENTERS[category]
    cy += rng.uniform(-1.5, 1.5)
    cx += rng.uniform(-1.5, 1.5)
    ys, xs = np.mgrid[0:28, 0:28]
    img = np.exp(-((ys - cy) ** 2 + (xs - cx) ** 2) / (2 * _BLOB_SIGMA**2))
    img += rng.normal(0, 0.02, size=img.shape)
    return np.clip(img, 0.0, 1.0).ravel()


def make_blobs(n_per_class: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for c in range(N_CLASSES):
        for _ in range(n_per_class):
            xs.append(blob_image(c, rng))
            ys.append(c)
    x = np.array(xs, dtype=np.float32)
    y = np.array(ys, dtype=np.int64)
    order = rng.permutation(len(y))
    return x[order], y[order]


def _load_torchvision(name: str, data_dir: str):
    import torchvision

    cls = {"mnist": torchvision.datasets.MNIST,
           "fashion-mnist": torchvision.datasets.FashionMNIST}[name]
    out = []
    for train in (True, False):
        try:
            ds = cls(root=data_dir, train=train, download=True)
        except Exception as e:
            raise DatasetError(
                f"could not obtain {name} under {data_dir!r}: {e}. "
                "Place the dataset archives there or use "
                "--dataset synthetic-blobs for a fully offline run."
            ) from e
        x = ds.data.numpy().reshape(-1, IMAGE_DIM).astype(np.float32) / 255.0
        y = ds.targets.numpy().astype(np.int64)
        out.append((x, y))
    return out[0], out[1]


def load_dataset(cfg: TrainingConfig):
    """Returns ((train_x, train_y), (test_x, test_y)); images are float32
    rows of length 784 in [0, 1]."""
    if cfg.dataset == "synthetic-blobs":
        train = make_blobs(600, seed=cfg.seed)
        test = make_blobs(100, seed=cfg.seed + 1)
        return train, test
    return _load_torchvision(cfg.dataset, cfg.data_dir)


def augment_batch(x, rng_torch):
    """Rotations, shear, and shifts applied to a batch of flat images."""
    import torch
    import torchvision.transforms.v2.functional as F

    imgs = x.reshape(-1, 1, 28, 28)
    angle = float(torch.empty(1).uniform_(-15, 15, generator=rng_torch))
    shear = float(torch.empty(1).uniform_(-10, 10, generator=rng_torch))
    dx = int(torch.randint(-2, 3, (1,), generator=rng_torch))
    dy = int(torch.randint(-2, 3, (1,), generator=rng_torch))
    out = F.affine(imgs, angle=angle, translate=[dx, dy], scale=1.0,
                   shear=[shear])
    return out.reshape(-1, IMAGE_DIM)
