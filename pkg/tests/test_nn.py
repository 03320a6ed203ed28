import math

import numpy as np
import pytest

from tableqa.errors import DimensionMismatch, EmptyData, LabelOutOfRange
from tableqa.nn import (
    MlpSpec,
    OutputHead,
    TrainConfig,
    _backward,
    _forward_train,
    dump_model,
    forward,
    gradient_check,
    init_model,
    load_model,
    parse_model,
    predict_batch,
    save_model,
    softmax,
    train,
    upsample_positives,
)

BIN = OutputHead.BINARY2
SOFT7 = OutputHead.SOFTMAX7


def blob_data(n_per_class=40, seed=4):
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for label, center in [(0, (-2.0, -2.0)), (1, (2.0, 2.0))]:
        pts = rng.normal(loc=center, scale=0.5, size=(n_per_class, 2))
        xs.extend(pts)
        ys.extend([label] * n_per_class)
    return [(x, y) for x, y in zip(xs, ys)]


def accuracy(model, data):
    x = np.array([np.asarray(v) for v, _ in data])
    y = np.array([t for _, t in data])
    preds = predict_batch(model, x).argmax(axis=1)
    return float((preds == y).mean())


class TestForward:
    def test_all_zero_parameters_give_uniform_output(self):
        spec = MlpSpec(input_dim=3, hidden=(4,), output=SOFT7)
        model = init_model(spec, seed=0)
        for w in model.weights:
            w[:] = 0.0
        out = forward(model, np.array([1.0, -2.0, 3.0]))
        assert np.allclose(out, np.full(7, 1 / 7))

    def test_single_linear_layer_identity_weights(self):
        spec = MlpSpec(input_dim=2, hidden=(), output=BIN, use_batchnorm=False)
        model = init_model(spec, seed=0)
        model.weights[0] = np.eye(2)
        model.biases[0] = np.zeros(2)
        out = forward(model, np.zeros(2))
        assert np.allclose(out, [0.5, 0.5])

    def test_hand_computed_two_two_two(self):
        spec = MlpSpec(input_dim=2, hidden=(2,), output=BIN, use_batchnorm=False)
        model = init_model(spec, seed=0)
        model.weights[0] = np.array([[1.0, -1.0], [0.5, 2.0]])
        model.biases[0] = np.array([0.1, -0.2])
        model.weights[1] = np.array([[0.3, -0.3], [0.2, 0.1]])
        model.biases[1] = np.array([0.0, 0.5])
        # by hand: z0 = [2.1, 2.8] -> relu unchanged
        # logits = [0.63 + 0.56, -0.63 + 0.28 + 0.5] = [1.19, 0.15]
        e0, e1 = math.exp(1.19), math.exp(0.15)
        expected = [e0 / (e0 + e1), e1 / (e0 + e1)]
        out = forward(model, np.array([1.0, 2.0]))
        assert np.allclose(out, expected, atol=1e-12)

    def test_hand_computed_with_batchnorm_running_stats(self):
        spec = MlpSpec(input_dim=2, hidden=(2,), output=BIN, use_batchnorm=True)
        model = init_model(spec, seed=0)
        model.weights[0] = np.array([[1.0, -1.0], [0.5, 2.0]])
        model.biases[0] = np.array([0.1, -0.2])
        model.weights[1] = np.array([[1.0, 0.0], [0.0, 1.0]])
        model.biases[1] = np.zeros(2)
        bn = model.batchnorms[0]
        bn.gamma = np.array([2.0, 1.0])
        bn.beta = np.array([0.0, 1.0])
        bn.running_mean = np.array([1.0, 2.0])
        bn.running_var = np.array([4.0, 0.25])
        z = [2.1, 2.8]
        h = [
            max(0.0, (z[0] - 1.0) / math.sqrt(4.0 + 1e-5) * 2.0 + 0.0),
            max(0.0, (z[1] - 2.0) / math.sqrt(0.25 + 1e-5) * 1.0 + 1.0),
        ]
        e0, e1 = math.exp(h[0]), math.exp(h[1])
        expected = [e0 / (e0 + e1), e1 / (e0 + e1)]
        out = forward(model, np.array([1.0, 2.0]))
        assert np.allclose(out, expected, atol=1e-12)

    def test_dimension_mismatch(self):
        model = init_model(MlpSpec(2, (2,), BIN), seed=0)
        with pytest.raises(DimensionMismatch):
            forward(model, np.zeros(3))

    def test_softmax_normalized_on_random_vectors(self):
        rng = np.random.default_rng(12)
        for _ in range(300):
            # normalization holds even for wild scales
            v = rng.normal(scale=rng.uniform(0.1, 50), size=rng.integers(2, 9))
            assert abs(softmax(v).sum() - 1.0) < 1e-9
        for _ in range(300):
            # strict openness needs logit gaps below the float64 saturation point
            v = rng.normal(scale=rng.uniform(0.1, 3), size=rng.integers(2, 9))
            p = softmax(v)
            assert np.all(p > 0) and np.all(p < 1)


class TestTrain:
    def test_separable_blobs(self):
        data = blob_data()
        cfg = TrainConfig(learning_rate=0.05, epochs=200, seed=1, batch_size=16)
        model = train(MlpSpec(2, (8,), BIN), data, cfg)
        assert accuracy(model, data) >= 0.95

    def test_zero_epochs_returns_initialization(self):
        data = blob_data(n_per_class=5)
        cfg = TrainConfig(epochs=0, seed=9)
        model = train(MlpSpec(2, (4,), BIN), data, cfg)
        init = init_model(MlpSpec(2, (4,), BIN), seed=9)
        for a, b in zip(model.weights, init.weights):
            assert np.array_equal(a, b)

    def test_same_seed_bit_identical(self):
        data = blob_data(n_per_class=10)
        cfg = TrainConfig(epochs=20, seed=7)
        m1 = train(MlpSpec(2, (4,), BIN), data, cfg)
        m2 = train(MlpSpec(2, (4,), BIN), data, cfg)
        assert dump_model(m1) == dump_model(m2)

    def test_loss_non_increasing_full_batch_small_lr(self):
        data = blob_data(n_per_class=20)
        cfg = TrainConfig(learning_rate=0.01, epochs=60, seed=3,
                          batch_size=len(data))
        model = train(MlpSpec(2, (6,), BIN, use_batchnorm=False), data, cfg)
        losses = model.loss_history
        assert len(losses) == 60
        for before, after in zip(losses, losses[1:]):
            assert after <= before + 1e-6

    def test_empty_data_rejected(self):
        with pytest.raises(EmptyData):
            train(MlpSpec(2, (2,), BIN), [], TrainConfig())

    def test_label_out_of_range(self):
        with pytest.raises(LabelOutOfRange):
            train(MlpSpec(2, (2,), BIN), [(np.zeros(2), 2)], TrainConfig())

    def test_wrong_dimension_rejected(self):
        with pytest.raises(DimensionMismatch):
            train(MlpSpec(2, (2,), BIN), [(np.zeros(3), 0)], TrainConfig())


class TestGradientCheck:
    def batch(self, dim, n_classes, n=3, seed=0):
        rng = np.random.default_rng(seed)
        return [(rng.normal(size=dim), int(rng.integers(0, n_classes)))
                for _ in range(n)]

    def test_select_architecture(self):
        spec = MlpSpec(25, (32, 16, 8), BIN)
        err = gradient_check(spec, self.batch(25, 2), epsilon=1e-5, seed=0)
        assert err < 1e-4

    def test_column_type_architecture(self):
        spec = MlpSpec(9, (32, 32), SOFT7)
        err = gradient_check(spec, self.batch(9, 7), epsilon=1e-5, seed=1)
        assert err < 1e-4

    def test_small_select_head(self):
        spec = MlpSpec(25, (16,), BIN)
        err = gradient_check(spec, self.batch(25, 2), epsilon=1e-5, seed=4)
        assert err < 1e-4

    def test_no_batchnorm_variant(self):
        spec = MlpSpec(5, (4,), BIN, use_batchnorm=False)
        err = gradient_check(spec, self.batch(5, 2), epsilon=1e-5, seed=2)
        assert err < 1e-4

    def test_epsilon_validated(self):
        with pytest.raises(ValueError):
            gradient_check(MlpSpec(2, (2,), BIN), self.batch(2, 2), epsilon=0.5)

    def test_zero_loss_point_has_vanishing_gradients(self):
        # logits pinned far into the correct class: loss ~ 0, gradients ~ 0
        spec = MlpSpec(2, (), BIN, use_batchnorm=False)
        model = init_model(spec, seed=0)
        model.weights[0] = np.array([[40.0, -40.0], [40.0, -40.0]])
        model.biases[0] = np.zeros(2)
        x = np.array([[1.0, 1.0]])
        y = np.array([0])
        probs, cache = _forward_train(model, x, update_running=False)
        grads_w, grads_b, _ = _backward(model, probs, y, cache)
        assert np.all(np.abs(grads_w[0]) < 1e-12)
        assert np.all(np.abs(grads_b[0]) < 1e-12)

    def test_constant_input_rows_scale_first_layer_gradient(self):
        spec = MlpSpec(2, (3,), BIN, use_batchnorm=False)
        model = init_model(spec, seed=5)
        const = np.array([2.0, -0.5])
        x = np.tile(const, (4, 1))
        y = np.array([0, 1, 0, 1])
        probs, cache = _forward_train(model, x, update_running=False)
        grads_w, _, _ = _backward(model, probs, y, cache)
        # dW0 rows are the input components times a shared row vector
        assert np.allclose(grads_w[0][0] / const[0], grads_w[0][1] / const[1])


class TestUpsample:
    def test_imbalanced_corpus_counts(self):
        data = [(i, 1) for i in range(273)] + [(i, 0) for i in range(1773)]
        up = upsample_positives(data, factor=6)
        assert sum(1 for _, y in up if y == 1) == 1638
        assert sum(1 for _, y in up if y == 0) == 1773

    def test_factor_one_is_identity_multiset(self):
        data = [(1, 1), (2, 0), (3, 1)]
        up = upsample_positives(data, factor=1)
        assert sorted(up) == sorted(data)

    def test_small_arithmetic(self):
        data = [(1, 1), (2, 1), (3, 0), (4, 0), (5, 0)]
        up = upsample_positives(data, factor=3)
        assert sum(1 for _, y in up if y == 1) == 6
        assert sum(1 for _, y in up if y == 0) == 3

    def test_shuffle_is_seeded(self):
        data = [(i, i % 2) for i in range(20)]
        assert upsample_positives(data, 2, seed=5) == upsample_positives(data, 2, seed=5)
        assert upsample_positives(data, 2, seed=5) != upsample_positives(data, 2, seed=6)

    def test_non_binary_rejected(self):
        with pytest.raises(LabelOutOfRange):
            upsample_positives([(1, 3)], factor=2)


class TestSerialization:
    def test_round_trip_exact(self, tmp_path):
        data = blob_data(n_per_class=8)
        model = train(MlpSpec(2, (4, 3), BIN), data,
                      TrainConfig(epochs=15, seed=2))
        path = tmp_path / "m.model"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.spec == model.spec
        for (n1, a1), (n2, a2) in zip(model.parameter_arrays(),
                                      loaded.parameter_arrays()):
            assert n1 == n2
            assert np.array_equal(a1, a2)
        for bn1, bn2 in zip(model.batchnorms, loaded.batchnorms):
            assert np.array_equal(bn1.running_mean, bn2.running_mean)
            assert np.array_equal(bn1.running_var, bn2.running_var)

    def test_dump_is_loadable_text(self):
        model = init_model(MlpSpec(3, (2,), SOFT7), seed=0)
        text = dump_model(model)
        assert text.startswith("tableqa-mlp v1\n")
        again = parse_model(text)
        assert dump_model(again) == text

    def test_inference_identical_after_round_trip(self, tmp_path):
        data = blob_data(n_per_class=8)
        model = train(MlpSpec(2, (4,), BIN), data, TrainConfig(epochs=10, seed=6))
        save_model(model, tmp_path / "m.model")
        loaded = load_model(tmp_path / "m.model")
        x = np.array([0.3, -1.2])
        assert np.array_equal(forward(model, x), forward(loaded, x))
