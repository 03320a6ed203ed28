"""Minimal feed-forward network core shared by the three classifiers.

MLP with ReLU hidden layers separated by batch normalization, a softmax
output head, cross-entropy loss and plain SGD, all in numpy float64.
Training is fully seed-deterministic: initialization, shuffling and
batch-norm statistics derive from the seed, so identical runs produce
bit-identical models.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyData,
    LabelOutOfRange,
    UntrainedModel,
)

_BN_EPS = 1e-5
_BN_MOMENTUM = 0.9


class OutputHead(enum.Enum):
    BINARY2 = ("binary2", 2)
    SOFTMAX7 = ("softmax7", 7)

    def __init__(self, label: str, n_classes: int):
        self.label = label
        self.n_classes = n_classes

    @classmethod
    def from_label(cls, label: str) -> "OutputHead":
        for head in cls:
            if head.label == label:
                return head
        raise ValueError(f"unknown output head {label!r}")


@dataclass(frozen=True)
class MlpSpec:
    input_dim: int
    hidden: tuple[int, ...]
    output: OutputHead
    use_batchnorm: bool = True

    def __post_init__(self):
        if self.input_dim < 1 or any(h < 1 for h in self.hidden):
            raise ValueError("all layer sizes must be >= 1")
        object.__setattr__(self, "hidden", tuple(self.hidden))

    @property
    def layer_dims(self) -> list[tuple[int, int]]:
        sizes = [self.input_dim, *self.hidden, self.output.n_classes]
        return list(zip(sizes[:-1], sizes[1:]))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    epochs: int = 300
    seed: int = 0
    batch_size: int = 32

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class BatchNormParams:
    gamma: np.ndarray
    beta: np.ndarray
    running_mean: np.ndarray
    running_var: np.ndarray


@dataclass
class MlpModel:
    spec: MlpSpec
    weights: list[np.ndarray]       # one (fan_in, fan_out) matrix per layer
    biases: list[np.ndarray]
    batchnorms: list[BatchNormParams]  # one per hidden layer when enabled
    loss_history: list[float] = field(default_factory=list)

    @property
    def n_hidden(self) -> int:
        return len(self.spec.hidden)

    def parameter_arrays(self) -> list[tuple[str, np.ndarray]]:
        """Named views of every trainable array, in a fixed order."""
        named = []
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            named.append((f"W{i}", w))
            named.append((f"b{i}", b))
        for i, bn in enumerate(self.batchnorms):
            named.append((f"bn{i}.gamma", bn.gamma))
            named.append((f"bn{i}.beta", bn.beta))
        return named


def init_model(spec: MlpSpec, seed: int) -> MlpModel:
    # uniform +-sqrt(6 / (fan_in + fan_out)), biases zero
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in spec.layer_dims:
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    batchnorms = []
    if spec.use_batchnorm:
        for h in spec.hidden:
            batchnorms.append(BatchNormParams(
                gamma=np.ones(h), beta=np.zeros(h),
                running_mean=np.zeros(h), running_var=np.ones(h),
            ))
    return MlpModel(spec=spec, weights=weights, biases=biases, batchnorms=batchnorms)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=-1, keepdims=True)


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Inference-mode forward pass for a single input vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.spec.input_dim,):
        raise DimensionMismatch(
            f"expected input of shape ({model.spec.input_dim},), got {x.shape}"
        )
    probs = _forward_batch_inference(model, x[None, :])
    return probs[0]


def _forward_batch_inference(model: MlpModel, x: np.ndarray) -> np.ndarray:
    h = x
    for i in range(model.n_hidden):
        z = h @ model.weights[i] + model.biases[i]
        if model.spec.use_batchnorm:
            bn = model.batchnorms[i]
            z = bn.gamma * (z - bn.running_mean) / np.sqrt(bn.running_var + _BN_EPS) \
                + bn.beta
        h = np.maximum(z, 0.0)
    logits = h @ model.weights[-1] + model.biases[-1]
    return softmax(logits)


def predict_batch(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Inference probabilities for a (batch, input_dim) matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.spec.input_dim:
        raise DimensionMismatch(
            f"expected (n, {model.spec.input_dim}), got {x.shape}"
        )
    return _forward_batch_inference(model, x)


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

def _forward_train(model: MlpModel, x: np.ndarray, update_running: bool):
    """Training-mode forward pass; returns probs and the backprop cache."""
    cache = {"inputs": [], "pre_bn": [], "bn": [], "pre_relu": []}
    h = x
    for i in range(model.n_hidden):
        cache["inputs"].append(h)
        z = h @ model.weights[i] + model.biases[i]
        cache["pre_bn"].append(z)
        if model.spec.use_batchnorm:
            bn = model.batchnorms[i]
            mu = z.mean(axis=0)
            var = z.var(axis=0)
            inv_std = 1.0 / np.sqrt(var + _BN_EPS)
            z_hat = (z - mu) * inv_std
            cache["bn"].append((mu, var, inv_std, z_hat))
            if update_running:
                bn.running_mean = _BN_MOMENTUM * bn.running_mean + (1 - _BN_MOMENTUM) * mu
                bn.running_var = _BN_MOMENTUM * bn.running_var + (1 - _BN_MOMENTUM) * var
            z = bn.gamma * z_hat + bn.beta
        else:
            cache["bn"].append(None)
        cache["pre_relu"].append(z)
        h = np.maximum(z, 0.0)
    cache["inputs"].append(h)
    logits = h @ model.weights[-1] + model.biases[-1]
    return softmax(logits), cache


def _cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    picked = probs[np.arange(len(labels)), labels]
    return float(-np.mean(np.log(np.clip(picked, 1e-300, None))))


def _backward(model: MlpModel, probs, labels, cache):
    """Gradients of mean cross-entropy wrt every trainable array."""
    n = len(labels)
    grads_w = [None] * len(model.weights)
    grads_b = [None] * len(model.biases)
    grads_bn = [None] * model.n_hidden

    d_logits = probs.copy()
    d_logits[np.arange(n), labels] -= 1.0
    d_logits /= n

    grads_w[-1] = cache["inputs"][-1].T @ d_logits
    grads_b[-1] = d_logits.sum(axis=0)
    d_h = d_logits @ model.weights[-1].T

    for i in reversed(range(model.n_hidden)):
        d_z = d_h * (cache["pre_relu"][i] > 0)
        if model.spec.use_batchnorm:
            mu, var, inv_std, z_hat = cache["bn"][i]
            bn = model.batchnorms[i]
            d_gamma = (d_z * z_hat).sum(axis=0)
            d_beta = d_z.sum(axis=0)
            z_centered = cache["pre_bn"][i] - mu
            d_zhat = d_z * bn.gamma
            d_var = (d_zhat * z_centered).sum(axis=0) * -0.5 * inv_std**3
            d_mu = -(d_zhat.sum(axis=0)) * inv_std \
                + d_var * (-2.0 / n) * z_centered.sum(axis=0)
            d_z = d_zhat * inv_std + d_var * 2.0 * z_centered / n + d_mu / n
            grads_bn[i] = (d_gamma, d_beta)
        grads_w[i] = cache["inputs"][i].T @ d_z
        grads_b[i] = d_z.sum(axis=0)
        if i > 0:
            d_h = d_z @ model.weights[i].T
    return grads_w, grads_b, grads_bn


def _validate_data(spec: MlpSpec, data):
    if not data:
        raise EmptyData("training data is empty")
    n_classes = spec.output.n_classes
    for x, y in data:
        if len(x) != spec.input_dim:
            raise DimensionMismatch(
                f"example has dimension {len(x)}, expected {spec.input_dim}"
            )
        if not (0 <= int(y) < n_classes):
            raise LabelOutOfRange(f"label {y} outside [0, {n_classes})")


def train(spec: MlpSpec, data, cfg: TrainConfig) -> MlpModel:
    """Seeded mini-batch SGD on softmax cross-entropy."""
    _validate_data(spec, data)
    x_all = np.array([np.asarray(x, dtype=np.float64) for x, _ in data])
    y_all = np.array([int(y) for _, y in data])

    model = init_model(spec, cfg.seed)
    rng = np.random.default_rng(cfg.seed + 1)
    n = len(data)
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            xb, yb = x_all[idx], y_all[idx]
            probs, cache = _forward_train(model, xb, update_running=True)
            epoch_loss += _cross_entropy(probs, yb)
            n_batches += 1
            grads_w, grads_b, grads_bn = _backward(model, probs, yb, cache)
            for i in range(len(model.weights)):
                model.weights[i] -= cfg.learning_rate * grads_w[i]
                model.biases[i] -= cfg.learning_rate * grads_b[i]
            for i, g in enumerate(grads_bn):
                if g is not None:
                    model.batchnorms[i].gamma -= cfg.learning_rate * g[0]
                    model.batchnorms[i].beta -= cfg.learning_rate * g[1]
        model.loss_history.append(epoch_loss / max(n_batches, 1))
    return model


def upsample_positives(data, factor: int, seed: int = 0):
    """Duplicate positive (label 1) examples so they appear factor times.

    Negatives are untouched; the combined list is reshuffled with the seed.
    """
    if factor < 1:
        raise ValueError("factor must be >= 1")
    for _, y in data:
        if int(y) not in (0, 1):
            raise LabelOutOfRange(f"upsampling expects binary labels, got {y}")
    out = []
    for x, y in data:
        out.extend([(x, y)] * (factor if int(y) == 1 else 1))
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(out))
    return [out[i] for i in order]


# ---------------------------------------------------------------------------
# Gradient verification
# ---------------------------------------------------------------------------

def _loss_on_batch(model: MlpModel, x: np.ndarray, y: np.ndarray) -> float:
    # training-mode forward without the backprop cache; log-sum-exp form
    # keeps the finite-difference loop cheap and numerically stable
    h = x
    use_bn = model.spec.use_batchnorm
    for i in range(model.n_hidden):
        z = h @ model.weights[i] + model.biases[i]
        if use_bn:
            bn = model.batchnorms[i]
            mu = z.mean(axis=0)
            z = z - mu
            var = np.mean(z * z, axis=0)
            z = bn.gamma * (z / np.sqrt(var + _BN_EPS)) + bn.beta
        h = np.maximum(z, 0.0)
    logits = h @ model.weights[-1] + model.biases[-1]
    shift = logits.max(axis=1)
    lse = shift + np.log(np.exp(logits - shift[:, None]).sum(axis=1))
    return float(np.mean(lse - logits[np.arange(len(y)), y]))


def gradient_check(spec: MlpSpec, data, epsilon: float = 1e-5, seed: int = 0) -> float:
    """Max relative error between analytic and central-difference gradients.

    Checks every trainable parameter of a freshly initialized model on the
    given batch, in training mode so batch-norm statistics are exercised.
    When both gradients are below 1e-6 in magnitude the parameter counts as
    agreeing: along loss-flat directions (a hidden bias is absorbed by the
    following batch norm) the finite difference is pure roundoff noise.
    """
    if not (0 < epsilon <= 1e-2):
        raise ValueError("epsilon must be in (0, 1e-2]")
    _validate_data(spec, data)
    x = np.array([np.asarray(v, dtype=np.float64) for v, _ in data])
    y = np.array([int(t) for _, t in data])
    model = init_model(spec, seed)

    probs, cache = _forward_train(model, x, update_running=False)
    grads_w, grads_b, grads_bn = _backward(model, probs, y, cache)
    analytic = {}
    for i in range(len(model.weights)):
        analytic[f"W{i}"] = grads_w[i]
        analytic[f"b{i}"] = grads_b[i]
    for i, g in enumerate(grads_bn):
        if g is not None:
            analytic[f"bn{i}.gamma"] = g[0]
            analytic[f"bn{i}.beta"] = g[1]

    worst = 0.0
    for name, array in model.parameter_arrays():
        grad = analytic[name]
        flat = array.reshape(-1)
        grad_flat = np.asarray(grad).reshape(-1)
        for j in range(flat.size):
            original = flat[j]
            flat[j] = original + epsilon
            loss_plus = _loss_on_batch(model, x, y)
            flat[j] = original - epsilon
            loss_minus = _loss_on_batch(model, x, y)
            flat[j] = original
            numeric = (loss_plus - loss_minus) / (2 * epsilon)
            denom = max(abs(grad_flat[j]), abs(numeric))
            if denom < 1e-6:
                continue
            worst = max(worst, abs(grad_flat[j] - numeric) / denom)
    return worst


# ---------------------------------------------------------------------------
# Serialization: versioned line-oriented text, byte-stable for a given model
# ---------------------------------------------------------------------------

_MAGIC = "tableqa-mlp v1"


def dump_model(model: MlpModel) -> str:
    lines = [_MAGIC]
    hidden = ",".join(str(h) for h in model.spec.hidden)
    lines.append(
        f"spec {model.spec.input_dim} {hidden or '-'} "
        f"{model.spec.output.label} {int(model.spec.use_batchnorm)}"
    )
    arrays = model.parameter_arrays() + [
        (f"bn{i}.mean", bn.running_mean) for i, bn in enumerate(model.batchnorms)
    ] + [
        (f"bn{i}.var", bn.running_var) for i, bn in enumerate(model.batchnorms)
    ]
    for name, array in arrays:
        shape = ",".join(str(s) for s in array.shape)
        values = " ".join(repr(float(v)) for v in array.reshape(-1))
        lines.append(f"array {name} {shape} {values}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def save_model(model: MlpModel, path) -> None:
    with open(str(path), "w", encoding="utf-8") as fh:
        fh.write(dump_model(model))


def parse_model(text: str) -> MlpModel:
    lines = text.splitlines()
    if not lines or lines[0] != _MAGIC:
        raise UntrainedModel("not a tableqa-mlp v1 model file")
    spec_parts = lines[1].split()
    if spec_parts[0] != "spec":
        raise UntrainedModel("missing spec line")
    input_dim = int(spec_parts[1])
    hidden = tuple(int(h) for h in spec_parts[2].split(",")) if spec_parts[2] != "-" else ()
    output = OutputHead.from_label(spec_parts[3])
    use_bn = bool(int(spec_parts[4]))
    spec = MlpSpec(input_dim=input_dim, hidden=hidden, output=output,
                   use_batchnorm=use_bn)

    arrays = {}
    for line in lines[2:]:
        if line == "end":
            break
        tag, name, shape_s, values_s = line.split(" ", 3)
        if tag != "array":
            raise UntrainedModel(f"unexpected line in model file: {line[:40]!r}")
        shape = tuple(int(s) for s in shape_s.split(","))
        arr = np.array([float(v) for v in values_s.split()], dtype=np.float64)
        arrays[name] = arr.reshape(shape)

    model = init_model(spec, seed=0)
    for i in range(len(model.weights)):
        model.weights[i] = arrays[f"W{i}"]
        model.biases[i] = arrays[f"b{i}"]
    for i in range(model.n_hidden):
        if spec.use_batchnorm:
            model.batchnorms[i] = BatchNormParams(
                gamma=arrays[f"bn{i}.gamma"],
                beta=arrays[f"bn{i}.beta"],
                running_mean=arrays[f"bn{i}.mean"],
                running_var=arrays[f"bn{i}.var"],
            )
    return model


def load_model(path) -> MlpModel:
    with open(str(path), encoding="utf-8") as fh:
        return parse_model(fh.read())
