"""Federated learning substrate: MLP, local SGD, FedAvg and fixed-point codec."""

from .aggregate import fed_avg, num_selected, select_clients
from .codec import DEFAULT_CODEC, OFFSET, SCALE, FixedPointCodec, decode_weights, encode_weights
from .model import MODEL_HIDDEN, N_CLASSES, N_FEATURES, MlpModel, flatten, model_layers, param_count, unflatten
from .train import ClientDataset, TrainConfig, client_update

__all__ = [
    "MlpModel",
    "MODEL_HIDDEN",
    "N_FEATURES",
    "N_CLASSES",
    "model_layers",
    "param_count",
    "flatten",
    "unflatten",
    "TrainConfig",
    "ClientDataset",
    "client_update",
    "fed_avg",
    "select_clients",
    "num_selected",
    "FixedPointCodec",
    "DEFAULT_CODEC",
    "SCALE",
    "OFFSET",
    "encode_weights",
    "decode_weights",
]
