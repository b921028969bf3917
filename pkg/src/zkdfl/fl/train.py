"""Local client training (minibatch SGD) and the client dataset type."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ArgumentError
from .model import N_CLASSES, MlpModel


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 1
    batch: int = 10
    lr: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ArgumentError("epochs must be >= 1")
        if self.batch < 1:
            raise ArgumentError("batch size must be >= 1")
        # lr = 0 is allowed: it is a useful no-op configuration
        if not self.lr >= 0:
            raise ArgumentError("learning rate must be non-negative")


class ClientDataset:
    def __init__(self, features, labels, client_id=0, n_classes=N_CLASSES):
        x = np.asarray(features, dtype=np.float64)
        y = np.asarray(labels, dtype=np.int64)
        if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
            raise ArgumentError("features must be (n, d) and labels (n,)")
        if not np.all(np.isfinite(x)):
            raise ArgumentError("features contain non-finite values")
        if y.size and (y.min() < 0 or y.max() >= n_classes):
            raise ArgumentError(f"labels must lie in [0, {n_classes})")
        self.x = x
        self.y = y
        self.client_id = int(client_id)

    def __len__(self):
        return self.x.shape[0]


def client_update(model: MlpModel, data: ClientDataset, cfg: TrainConfig):
    """Train a copy of ``model`` for cfg.epochs epochs; return flat weights.

    Batches are reshuffled every epoch from (cfg.seed, client id), so a run is
    reproducible per client.
    """
    if len(data) == 0:
        raise ArgumentError(f"client {data.client_id} has no data")
    local = model.copy()
    rng = np.random.default_rng([cfg.seed & 0xFFFFFFFF, data.client_id])
    n = len(data)
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        for start in range(0, n, cfg.batch):
            idx = order[start : start + cfg.batch]
            local.sgd_step(data.x[idx], data.y[idx], cfg.lr)
    return local.flatten()
