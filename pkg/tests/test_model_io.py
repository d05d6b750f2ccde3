import numpy as np
import pytest

from gmrobust import (ModelFormatError, forward, load_model,
                      load_model_path, parse_model_file, save_model)

from conftest import fixture_path, random_net

MINIMAL = """\
nnw 1
role generator
input_dim 2
output_dim 2
layer 2 2 identity
weights 1.0 0.0 0.0 1.0
bias 0.0 0.0
"""


def test_minimal_valid_file():
    net = load_model(MINIMAL)
    assert net.input_dim == 2
    assert net.role == "generator"
    assert np.array_equal(forward(net, np.array([3.0, 4.0])),
                          np.array([3.0, 4.0]))


def test_weight_count_mismatch_names_layer():
    bad = MINIMAL.replace("weights 1.0 0.0 0.0 1.0", "weights 1.0 0.0 0.0")
    with pytest.raises(ModelFormatError, match="layer 0"):
        load_model(bad)


def test_roundtrip_evaluates_identically():
    rng = np.random.default_rng(8)
    net = random_net(rng, (3, 7, 4), ("tanh", "sigmoid"), role="generator")
    again = load_model(save_model(net))
    for _ in range(100):
        x = rng.standard_normal(3)
        assert np.array_equal(forward(net, x), forward(again, x))


def test_save_load_save_is_idempotent():
    for name in ("identity_generator_2d.nnw", "tiny_classifier_2d.nnw",
                 "threshold_classifier_1d.nnw"):
        with open(fixture_path(name), "rb") as f:
            data = f.read()
        once = save_model(load_model(data))
        twice = save_model(load_model(once))
        assert once == twice


def test_activation_field_serialized():
    net = load_model(MINIMAL)
    assert b"layer 2 2 identity" in save_model(net)


def test_meta_preserved_verbatim():
    meta = {"dataset": "mnist digits v1", "seed": "42"}
    net = load_model(MINIMAL)
    mf = parse_model_file(save_model(net, meta=meta))
    assert mf.meta == meta


@pytest.mark.parametrize("mutate,match", [
    (lambda t: t.replace("nnw 1", "nnw 2"), "version"),
    (lambda t: t.replace("role generator", "role oracle"), "role"),
    (lambda t: t.replace("input_dim 2", "input_dim 3"), "input_dim"),
    (lambda t: t.replace("output_dim 2", "output_dim 5"), "output_dim"),
    (lambda t: t.replace("bias 0.0 0.0", "bias 0.0"), "bias"),
    (lambda t: t.replace("weights 1.0 0.0 0.0 1.0",
                         "weights 1.0 nan 0.0 1.0"), "non-finite"),
    (lambda t: t.replace("layer 2 2 identity", "layer 2 2 swish"),
     "activation"),
    (lambda t: t + "gibberish 1 2 3\n", "unknown directive"),
    (lambda t: "", "empty"),
])
def test_each_invariant_violation_is_named(mutate, match):
    with pytest.raises(ModelFormatError, match=match):
        load_model(mutate(MINIMAL))


def test_parse_error_carries_line_number():
    bad = MINIMAL.replace("input_dim 2", "input_dim two")
    with pytest.raises(ModelFormatError, match="line 3"):
        load_model(bad)


def test_layer_chain_mismatch_rejected():
    text = """\
nnw 1
role classifier
input_dim 2
output_dim 2
layer 3 2 relu
weights 1 0 0 1 1 1
bias 0 0 0
layer 2 2 identity
weights 1 0 0 1
bias 0 0
"""
    with pytest.raises(ModelFormatError, match="rows.*columns"):
        load_model(text)


def test_fixture_files_load(threshold_classifier, identity_gen_2d,
                            boundary_classifier_2d):
    assert threshold_classifier.output_dim == 2
    assert identity_gen_2d.role == "generator"
    assert boundary_classifier_2d.input_dim == 2


def test_float_roundtrip_is_exact():
    rng = np.random.default_rng(13)
    net = random_net(rng, (2, 3), ("identity",), role="generator")
    again = load_model(save_model(net))
    assert np.array_equal(net.layers[0].weights, again.layers[0].weights)
    assert np.array_equal(net.layers[0].bias, again.layers[0].bias)


def test_load_model_path(tmp_path):
    p = tmp_path / "m.nnw"
    p.write_text(MINIMAL)
    assert load_model_path(p).input_dim == 2
