"""Fully connected ReLU network with softmax cross-entropy, in numpy float64.

Flattened parameter order: for each layer, the weight matrix of shape
(n_out, n_in) row-major, then its bias vector.
"""

from __future__ import annotations

import numpy as np

from ..errors import ArgumentError

N_FEATURES = 45
N_CLASSES = 19

MODEL_HIDDEN = {
    "model1": (10,),
    "model2": (10, 20),
    "model3": (10, 20, 15),
    "model4": (15, 20, 30, 20),
    "model5": (20, 30, 40, 20, 10),
}

WEIGHT_CLAMP = float(2 ** 23)


def model_layers(name, n_in=N_FEATURES, n_out=N_CLASSES):
    key = name.lower()
    if key not in MODEL_HIDDEN:
        raise ArgumentError(f"unknown model {name!r}; choose from {sorted(MODEL_HIDDEN)}")
    return [n_in, *MODEL_HIDDEN[key], n_out]


def param_count(layers):
    return sum(a * b + b for a, b in zip(layers[:-1], layers[1:]))


class MlpModel:
    def __init__(self, layers, weights, biases):
        layers = [int(n) for n in layers]
        if len(layers) < 2 or any(n < 1 for n in layers):
            raise ArgumentError(f"invalid layer sizes {layers}")
        if len(weights) != len(layers) - 1 or len(biases) != len(layers) - 1:
            raise ArgumentError("weights/biases do not match the layer chain")
        for l, (w, b) in enumerate(zip(weights, biases)):
            if w.shape != (layers[l + 1], layers[l]) or b.shape != (layers[l + 1],):
                raise ArgumentError(f"layer {l} has shapes {w.shape}, {b.shape}")
        self.layers = layers
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]

    @classmethod
    def init(cls, layers, seed=0):
        """Uniform(-sqrt(1/n_in), sqrt(1/n_in)) for weights and biases."""
        rng = np.random.default_rng(seed)
        ws, bs = [], []
        for n_in, n_out in zip(layers[:-1], layers[1:]):
            bound = np.sqrt(1.0 / n_in)
            ws.append(rng.uniform(-bound, bound, size=(n_out, n_in)))
            bs.append(rng.uniform(-bound, bound, size=n_out))
        return cls(layers, ws, bs)

    @property
    def num_params(self):
        return param_count(self.layers)

    def copy(self):
        return MlpModel(self.layers, [w.copy() for w in self.weights], [b.copy() for b in self.biases])

    # -- flatten --

    def flatten(self):
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts)

    @classmethod
    def unflatten(cls, flat, layers):
        flat = np.asarray(flat, dtype=np.float64)
        if flat.ndim != 1 or flat.size != param_count(layers):
            raise ArgumentError(f"flat vector has {flat.size} entries, expected {param_count(layers)}")
        ws, bs = [], []
        pos = 0
        for n_in, n_out in zip(layers[:-1], layers[1:]):
            ws.append(flat[pos : pos + n_in * n_out].reshape(n_out, n_in).copy())
            pos += n_in * n_out
            bs.append(flat[pos : pos + n_out].copy())
            pos += n_out
        return cls(layers, ws, bs)

    # -- numerics --

    def forward(self, x):
        """Return logits and the list of layer activations (input first)."""
        acts = [x]
        h = x
        last = len(self.weights) - 1
        for l, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w.T + b
            h = z if l == last else np.maximum(z, 0.0)
            acts.append(h)
        return h, acts

    def predict(self, x):
        logits, _ = self.forward(np.asarray(x, dtype=np.float64))
        return np.argmax(logits, axis=1)

    def loss(self, x, y):
        logits, _ = self.forward(np.asarray(x, dtype=np.float64))
        return float(np.mean(_cross_entropy(logits, y)))

    def gradients(self, x, y):
        """Mean cross-entropy loss and its gradients (per layer, same shapes as params)."""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y)
        logits, acts = self.forward(x)
        n = x.shape[0]
        probs = _softmax(logits)
        loss = float(np.mean(_cross_entropy(logits, y)))
        delta = probs
        delta[np.arange(n), y] -= 1.0
        delta /= n
        gw = [None] * len(self.weights)
        gb = [None] * len(self.weights)
        for l in range(len(self.weights) - 1, -1, -1):
            gw[l] = delta.T @ acts[l]
            gb[l] = delta.sum(axis=0)
            if l:
                delta = (delta @ self.weights[l]) * (acts[l] > 0)
        return loss, gw, gb

    def sgd_step(self, x, y, lr):
        loss, gw, gb = self.gradients(x, y)
        for l in range(len(self.weights)):
            self.weights[l] -= lr * gw[l]
            self.biases[l] -= lr * gb[l]
            np.clip(self.weights[l], -WEIGHT_CLAMP, WEIGHT_CLAMP, out=self.weights[l])
            np.clip(self.biases[l], -WEIGHT_CLAMP, WEIGHT_CLAMP, out=self.biases[l])
        return loss

    def accuracy(self, x, y):
        y = np.asarray(y)
        if y.size == 0:
            return float("nan")
        return float(np.mean(self.predict(x) == y))


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _cross_entropy(logits, y):
    z = logits - logits.max(axis=1, keepdims=True)
    logsum = np.log(np.exp(z).sum(axis=1))
    return logsum - z[np.arange(len(y)), y]


def flatten(model: MlpModel):
    return model.flatten()


def unflatten(flat, layers) -> MlpModel:
    return MlpModel.unflatten(flat, layers)
