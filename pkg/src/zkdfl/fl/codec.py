"""Fixed-point encoding of real weights as positive integers: e = O + round(w * S)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import RangeError

SCALE = 1 << 16
OFFSET = 1 << 40
MAX_ABS = float(1 << 24)


@dataclass(frozen=True)
class FixedPointCodec:
    scale: int = SCALE
    offset: int = OFFSET
    max_abs: float = MAX_ABS

    def encode(self, flat):
        w = np.asarray(flat, dtype=np.float64).ravel()
        bad = np.flatnonzero(~(np.abs(w) < self.max_abs))
        if bad.size:
            i = int(bad[0])
            raise RangeError(f"weight {w[i]!r} at index {i} exceeds the codec range", i)
        # round half up; exact because |w*S| < 2^40 fits a double's mantissa
        q = np.floor(w * self.scale + 0.5).astype(np.int64)
        low = np.flatnonzero(q <= -self.offset)
        if low.size:  # only reachable within 2^-17 of -max_abs
            i = int(low[0])
            raise RangeError(f"weight {w[i]!r} at index {i} encodes to a non-positive value", i)
        return [int(v) + self.offset for v in q]

    def decode(self, encoded):
        e = np.array([int(v) - self.offset for v in encoded], dtype=np.float64)
        return e / self.scale


DEFAULT_CODEC = FixedPointCodec()


def encode_weights(flat, codec: FixedPointCodec = DEFAULT_CODEC):
    return codec.encode(flat)


def decode_weights(encoded, codec: FixedPointCodec = DEFAULT_CODEC):
    return codec.decode(encoded)
