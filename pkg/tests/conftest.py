import os

import numpy as np
import pytest

from gmrobust import (Layer, Network, compose, identity_network,
                      load_model_path)

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURE_DIR, name)


@pytest.fixture
def threshold_classifier():
    """1-D classifier with logits (-x/2, x/2): category 1 iff x > 0."""
    return load_model_path(fixture_path("threshold_classifier_1d.nnw"))


@pytest.fixture
def identity_gen_1d():
    return load_model_path(fixture_path("identity_generator_1d.nnw"))


@pytest.fixture
def identity_gen_2d():
    return load_model_path(fixture_path("identity_generator_2d.nnw"))


@pytest.fixture
def boundary_classifier_2d():
    """2-D classifier with linear boundary x1 + x2 = 0."""
    return load_model_path(fixture_path("tiny_classifier_2d.nnw"))


@pytest.fixture
def threshold_composed(identity_gen_1d, threshold_classifier):
    return compose(identity_gen_1d, threshold_classifier)


@pytest.fixture
def boundary_composed(identity_gen_2d, boundary_classifier_2d):
    return compose(identity_gen_2d, boundary_classifier_2d)


def constant_classifier(input_dim, n_classes, winner):
    """Classifier whose logits are constant: always predicts `winner`."""
    bias = np.zeros(n_classes)
    bias[winner] = 1.0
    return Network(
        layers=(Layer(np.zeros((n_classes, input_dim)), bias, "identity"),),
        role="classifier")


def random_net(rng, dims, activations, role="classifier"):
    layers = []
    for (p, q), act in zip(zip(dims[:-1], dims[1:]), activations):
        W = rng.standard_normal((q, p)) / np.sqrt(p)
        b = rng.standard_normal(q) * 0.1
        layers.append(Layer(W, b, act))
    return Network(layers=tuple(layers), role=role)


def gradient_fixture_nets():
    """Five small nets mixing all activation kinds, seeded."""
    rng = np.random.default_rng(12345)
    specs = [
        ((3, 5, 2), ("relu", "identity")),
        ((4, 6, 6, 3), ("tanh", "relu", "identity")),
        ((2, 8, 2), ("sigmoid", "identity")),
        ((5, 4, 4, 2), ("relu", "tanh", "identity")),
        ((3, 3, 3, 3), ("sigmoid", "relu", "identity")),
    ]
    return [random_net(rng, dims, acts) for dims, acts in specs]


def composed_2d_fixtures():
    """Small 2-D-input composed nets for certifier tests."""
    rng = np.random.default_rng(999)
    gen1 = identity_network(2)
    cls1 = random_net(rng, (2, 6, 3), ("relu", "identity"))
    gen2 = random_net(rng, (2, 4, 3), ("tanh", "tanh"), role="generator")
    cls2 = random_net(rng, (3, 5, 2), ("relu", "identity"))
    return [compose(gen1, cls1), compose(gen2, cls2)]
