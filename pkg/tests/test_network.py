import numpy as np
import pytest

from gmrobust import (CompositionError, DimensionError, Layer, Network,
                      classify, classify_batch, compose, forward,
                      generator_part, gradient, identity_network)

from conftest import constant_classifier, gradient_fixture_nets, random_net


def finite_difference_grad(net, x, c, h=1e-5):
    g = np.zeros_like(x)
    for i in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (forward(net, xp)[c] - forward(net, xm)[c]) / (2 * h)
    return g


class TestForward:
    def test_identity_network(self):
        net = identity_network(2, role="classifier")
        assert np.array_equal(forward(net, np.array([1.0, 2.0])),
                              np.array([1.0, 2.0]))

    def test_two_layer_hand_arithmetic(self):
        net = Network(layers=(
            Layer(np.array([[2.0, 0.0], [0.0, 2.0]]), np.zeros(2),
                  "identity"),
            Layer(np.array([[1.0, 1.0]]), np.zeros(1), "identity"),
        ), role="classifier")
        assert forward(net, np.array([1.0, 1.0]))[0] == 4.0

    def test_dead_relu_region(self):
        net = Network(layers=(
            Layer(np.eye(3), np.array([-10.0, -10.0, -10.0]), "relu"),
        ), role="classifier")
        assert np.array_equal(forward(net, np.array([1.0, 2.0, 3.0])),
                              np.zeros(3))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            forward(identity_network(2), np.zeros(3))

    def test_invalid_layer_chain_rejected(self):
        with pytest.raises(DimensionError):
            Network(layers=(
                Layer(np.zeros((3, 2)), np.zeros(3), "relu"),
                Layer(np.zeros((2, 4)), np.zeros(2), "identity"),
            ), role="classifier")


class TestClassify:
    def test_argmax(self):
        net = Network(layers=(
            Layer(np.zeros((2, 1)), np.array([0.1, 0.9]), "identity"),
        ), role="classifier")
        assert classify(net, np.zeros(1)).category == 1

    def test_tie_breaks_low(self):
        net = Network(layers=(
            Layer(np.zeros((2, 1)), np.array([0.5, 0.5]), "identity"),
        ), role="classifier")
        assert classify(net, np.zeros(1)).category == 0

    def test_constant_classifier(self):
        net = constant_classifier(3, 4, winner=2)
        rng = np.random.default_rng(1)
        for _ in range(20):
            assert classify(net, rng.standard_normal(3)).category == 2

    def test_generator_cannot_classify(self):
        with pytest.raises(DimensionError):
            classify(identity_network(2), np.zeros(2))

    def test_shift_invariance_of_argmax(self):
        rng = np.random.default_rng(7)
        net = random_net(rng, (3, 5, 4), ("relu", "identity"))
        last = net.layers[-1]
        shifted = Network(layers=net.layers[:-1] + (
            Layer(last.weights, last.bias + 3.25, last.activation),),
            role="classifier")
        for _ in range(50):
            x = rng.standard_normal(3)
            assert (classify(net, x).category
                    == classify(shifted, x).category)

    def test_batch_matches_single(self):
        rng = np.random.default_rng(3)
        net = random_net(rng, (4, 6, 3), ("tanh", "identity"))
        X = rng.standard_normal((30, 4))
        cats = classify_batch(net, X)
        for i in range(30):
            assert cats[i] == classify(net, X[i]).category


class TestCompose:
    def test_identity_composition(self):
        comp = compose(identity_network(2),
                       identity_network(2, role="classifier"))
        x = np.array([0.3, -0.7])
        assert np.array_equal(forward(comp, x), x)
        assert comp.role == "composed"
        assert comp.input_dim == 2 and comp.output_dim == 2

    def test_forward_agrees_with_nested_eval(self):
        rng = np.random.default_rng(11)
        G = random_net(rng, (3, 5, 4), ("tanh", "sigmoid"),
                       role="generator")
        C = random_net(rng, (4, 6, 2), ("relu", "identity"))
        comp = compose(G, C)
        for _ in range(100):
            x = rng.standard_normal(3)
            assert np.array_equal(forward(comp, x),
                                  forward(C, forward(G, x)))

    def test_dimension_mismatch(self):
        G = random_net(np.random.default_rng(0), (3, 5), ("identity",),
                       role="generator")
        C = random_net(np.random.default_rng(0), (4, 2), ("identity",))
        with pytest.raises(CompositionError, match="5.*4"):
            compose(G, C)

    def test_role_checks(self):
        C = identity_network(2, role="classifier")
        with pytest.raises(CompositionError):
            compose(C, C)

    def test_generator_part_roundtrip(self):
        rng = np.random.default_rng(5)
        G = random_net(rng, (2, 4, 3), ("tanh", "tanh"), role="generator")
        C = random_net(rng, (3, 2), ("identity",))
        comp = compose(G, C)
        gen = generator_part(comp)
        x = rng.standard_normal(2)
        assert np.array_equal(forward(gen, x), forward(G, x))


class TestGradient:
    def test_linear_map_gradient_is_weight_row(self):
        W = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        net = Network(layers=(Layer(W, np.zeros(2), "identity"),),
                      role="classifier")
        for c in range(2):
            assert np.array_equal(gradient(net, np.zeros(3), c), W[c])

    def test_dead_relu_zero_gradient(self):
        net = Network(layers=(
            Layer(np.eye(2), np.array([-5.0, -5.0]), "relu"),
            Layer(np.ones((2, 2)), np.zeros(2), "identity"),
        ), role="classifier")
        assert np.array_equal(gradient(net, np.array([1.0, 1.0]), 0),
                              np.zeros(2))

    def test_class_index_out_of_range(self):
        with pytest.raises(IndexError):
            gradient(identity_network(2, role="classifier"), np.zeros(2), 5)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(42)
        for net in gradient_fixture_nets():
            for _ in range(50):
                x = rng.standard_normal(net.input_dim)
                c = int(rng.integers(net.output_dim))
                g = gradient(net, x, c)
                fd = finite_difference_grad(net, x, c)
                big = np.abs(g) >= 1e-8
                if np.any(big):
                    rel = np.abs(g[big] - fd[big]) / np.abs(g[big])
                    assert rel.max() < 1e-4
                if np.any(~big):
                    assert np.abs(g[~big] - fd[~big]).max() < 1e-8
