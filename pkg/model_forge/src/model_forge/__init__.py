"""Desk-scale classifier/GAN training with `.nnw` export."""

from .config import (CLASSIFIER_ARCHS, DATASETS, GENERATOR_HIDDEN, IMAGE_DIM,
                     N_CLASSES, TrainingConfig)
from .data import DatasetError, blob_image, load_dataset, make_blobs
from .export import export_model, model_forward, sequential_to_nnw
from .train import (build_classifier, build_generator, train_classifier,
                    train_generator)

__version__ = "0.1.0"

__all__ = [
    "CLASSIFIER_ARCHS", "DATASETS", "GENERATOR_HIDDEN", "IMAGE_DIM",
    "N_CLASSES", "TrainingConfig", "DatasetError", "blob_image",
    "load_dataset", "make_blobs", "export_model", "model_forward",
    "sequential_to_nnw", "build_classifier", "build_generator",
    "train_classifier", "train_generator", "__version__",
]
