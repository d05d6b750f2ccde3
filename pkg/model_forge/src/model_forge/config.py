"""Training configuration for the desk-scale model forge."""

from __future__ import annotations

from dataclasses import dataclass, field

DATASETS = ("mnist", "fashion-mnist", "synthetic-blobs")

# hidden-layer widths of the three classifier sizes
CLASSIFIER_ARCHS = {
    "small": (32, 64, 200),
    "medium": (64, 128, 256),
    "large": (64, 128, 512),
}

IMAGE_DIM = 784  # 28 x 28
N_CLASSES = 10
GENERATOR_HIDDEN = (256, 512, 1024)


@dataclass
class TrainingConfig:
    dataset: str = "synthetic-blobs"
    classifier_arch: str = "small"
    generator_hidden: tuple = GENERATOR_HIDDEN
    latent_dim: int = 100
    augmentation: bool = False
    epochs: int = 2
    batch_size: int = 128
    seed: int = 0
    out_dir: str = "forge_out"
    data_dir: str = "data"

    def __post_init__(self):
        if self.dataset not in DATASETS:
            raise ValueError(
                f"unknown dataset {self.dataset!r}; choose from {DATASETS}")
        if self.classifier_arch not in CLASSIFIER_ARCHS:
            raise ValueError(
                f"unknown classifier arch {self.classifier_arch!r}; "
                f"choose from {sorted(CLASSIFIER_ARCHS)}")
        if self.epochs < 1 or self.batch_size < 1 or self.latent_dim < 1:
            raise ValueError("epochs, batch_size and latent_dim must be >= 1")

    @property
    def classifier_widths(self) -> tuple:
        return CLASSIFIER_ARCHS[self.classifier_arch]
