"""Small federations shared by the protocol and acceptance tests."""

import numpy as np

from zkdfl.fl import TrainConfig
from zkdfl.orchestrator import RoundConfig, Session, partition, synthetic

TINY_LAYERS = (2, 1, 2)  # P = 7


def tiny_federation(m=2, layers=TINY_LAYERS, n_samples=200, seed=0, prove=True):
    """(cfg, partition) for a two-feature, two-class task with m clients."""
    ds = synthetic(n_samples, seed, n_features=layers[0], n_classes=layers[-1])
    part = partition(ds, m, seed=seed)
    cfg = RoundConfig(
        clients=m, layers=tuple(layers), train=TrainConfig(1, 5, 0.05, seed), seed=seed, prove=prove
    )
    return cfg, part


def fresh_session(cfg, keys=None):
    """New chain and model; optionally reuse proving keys from an earlier session."""
    s = Session(cfg.architecture(), seed=cfg.seed)
    if keys is not None:
        s.keys = keys
    return s


def write_tree(root, acts=2, subjects=2, segments=3, rows=4, seed=0):
    """Miniature aNN/pN/sNN.txt tree of random 45-column rows."""
    rng = np.random.default_rng(seed)
    for a in range(1, acts + 1):
        for p in range(1, subjects + 1):
            d = root / f"a{a:02d}" / f"p{p}"
            d.mkdir(parents=True)
            for s in range(1, segments + 1):
                x = rng.normal(size=(rows, 45))
                (d / f"s{s:02d}.txt").write_text("\n".join(",".join(f"{v:.6f}" for v in r) for r in x) + "\n")
