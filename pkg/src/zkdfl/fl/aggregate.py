"""Server-side FedAvg and client sampling."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ArgumentError


def fed_avg(weights, sizes):
    """sum_k (n_k / N) * w_k, elementwise."""
    ws = [np.asarray(w, dtype=np.float64) for w in weights]
    if not ws:
        raise ArgumentError("fed_avg needs at least one client")
    if len(sizes) != len(ws):
        raise ArgumentError("one size per weight vector is required")
    shape = ws[0].shape
    if any(w.shape != shape for w in ws):
        raise ArgumentError("weight vectors differ in length")
    sizes = [float(s) for s in sizes]
    if any(not s > 0 for s in sizes):
        raise ArgumentError("client sizes must be positive")
    total = math.fsum(sizes)
    out = np.zeros(shape)
    for w, s in zip(ws, sizes):
        out += (s / total) * w
    return out


def num_selected(k, c):
    # small epsilon keeps e.g. 0.29 * 100 from flooring to 28
    return max(int(math.floor(c * k + 1e-9)), 1)


def select_clients(k: int, c: float, seed=0):
    """m = max(floor(C*K), 1) distinct client ordinals via a seeded Fisher-Yates prefix."""
    if k < 1:
        raise ArgumentError("need at least one client")
    if not 0 < c <= 1:
        raise ArgumentError("client fraction must lie in (0, 1]")
    m = num_selected(k, c)
    rng = np.random.default_rng(seed)
    perm = list(range(k))
    for i in range(m):
        j = int(rng.integers(i, k))
        perm[i], perm[j] = perm[j], perm[i]
    return perm[:m]
