import pytest

from model_forge import TrainingConfig, train_classifier, train_generator


@pytest.fixture(scope="session")
def out_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("forge"))


@pytest.fixture(scope="session")
def blob_cfg(out_dir):
    return TrainingConfig(dataset="synthetic-blobs", classifier_arch="small",
                          epochs=2, batch_size=128, seed=0, out_dir=out_dir)


@pytest.fixture(scope="session")
def trained_classifier(blob_cfg):
    """(model, test_accuracy, path) — trained once per session."""
    return train_classifier(blob_cfg)


@pytest.fixture(scope="session")
def trained_generator(blob_cfg, out_dir):
    """(model, path) — category-3 generator, trained once per session."""
    cfg = TrainingConfig(dataset="synthetic-blobs", epochs=10, batch_size=64,
                         seed=0, out_dir=out_dir)
    return train_generator(cfg, 3)
