"""Multi-scalar multiplication and fixed-base batch multiplication.

Large point vectors (proving-key queries) are held as ``PointVec``: a flat
buffer in the native little-endian layout, so they can go straight to the C
accelerator without per-point conversion. When the accelerator is missing, or
``ZKDFL_PURE=1`` is set, a pure-Python bucket (Pippenger) MSM is used.
"""

from __future__ import annotations

import os

from ..errors import ArgumentError
from .field import R_SCALAR
from .groups import (
    _G1_INF,
    _G2_INF,
    G1Point,
    G2Point,
    _g1_add,
    _g1_dbl,
    _g2_add,
    _g2_dbl,
)

try:  # pragma: no cover - depends on build
    from . import _bn254 as _native
except ImportError:  # pragma: no cover
    _native = None

_FORCE_PURE = os.environ.get("ZKDFL_PURE", "") not in ("", "0")


def native_available() -> bool:
    return _native is not None and not _FORCE_PURE


def set_pure(flag: bool) -> None:
    """Force (or stop forcing) the pure-Python code paths."""
    global _FORCE_PURE
    _FORCE_PURE = bool(flag)


class _Group:
    def __init__(self, name, point_cls, nbytes, inf, add, dbl):
        self.name = name
        self.point_cls = point_cls
        self.nbytes = nbytes
        self.inf = inf
        self.add = add
        self.dbl = dbl


_G1 = _Group("g1", G1Point, 64, _G1_INF, _g1_add, _g1_dbl)
_G2 = _Group("g2", G2Point, 128, _G2_INF, _g2_add, _g2_dbl)


def _group_of(point_cls):
    if point_cls is G1Point:
        return _G1
    if point_cls is G2Point:
        return _G2
    raise ArgumentError(f"unsupported point type {point_cls!r}")


def scalars_to_bytes(scalars) -> bytes:
    return b"".join((int(s) % R_SCALAR).to_bytes(32, "little") for s in scalars)


class PointVec:
    """Immutable vector of G1 or G2 points stored in native byte layout."""

    __slots__ = ("point_cls", "data")

    def __init__(self, point_cls, data: bytes):
        grp = _group_of(point_cls)
        if len(data) % grp.nbytes:
            raise ArgumentError("point buffer length is not a whole number of points")
        self.point_cls = point_cls
        self.data = bytes(data)

    @classmethod
    def from_points(cls, points, point_cls=None):
        points = list(points)
        if point_cls is None:
            if not points:
                raise ArgumentError("cannot infer point type of an empty vector")
            point_cls = type(points[0])
        return cls(point_cls, b"".join(p.to_native() for p in points))

    @property
    def nbytes_per_point(self):
        return _group_of(self.point_cls).nbytes

    def __len__(self):
        return len(self.data) // self.nbytes_per_point

    def __getitem__(self, i):
        n = len(self)
        if i < 0:
            i += n
        if not 0 <= i < n:
            raise IndexError(i)
        w = self.nbytes_per_point
        return self.point_cls.from_native(self.data[i * w : (i + 1) * w])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def to_points(self):
        return list(self)

    def __eq__(self, other):
        return isinstance(other, PointVec) and self.point_cls is other.point_cls and self.data == other.data

    def __hash__(self):
        return hash((self.point_cls.__name__, self.data))


# ---- pure-Python paths ----


def _window(n):
    return max(2, min(16, n.bit_length() - 4))


def _pippenger(grp, jac_points, scalars):
    pairs = [(p, s) for p, s in zip(jac_points, scalars) if s and p[2] != grp.inf[2]]
    if not pairs:
        return grp.inf
    c = _window(len(pairs))
    mask = (1 << c) - 1
    nwin = (254 + c - 1) // c
    result = grp.inf
    for w in range(nwin - 1, -1, -1):
        for _ in range(c):
            result = grp.dbl(result)
        buckets = [None] * (1 << c)
        shift = w * c
        for p, s in pairs:
            d = (s >> shift) & mask
            if d:
                b = buckets[d]
                buckets[d] = p if b is None else grp.add(b, p)
        running = grp.inf
        acc = grp.inf
        for d in range(mask, 0, -1):
            b = buckets[d]
            if b is not None:
                running = grp.add(running, b)
            acc = grp.add(acc, running)
        result = grp.add(result, acc)
    return result


def _pure_msm(grp, points, scalars):
    jacs = [p._jac() for p in points]
    scal = [int(s) % R_SCALAR for s in scalars]
    return grp.point_cls._from_jac(_pippenger(grp, jacs, scal))


def _pure_mul_batch(grp, base, scalars):
    table = []
    cur = base._jac()
    for _ in range(254):
        table.append(cur)
        cur = grp.dbl(cur)
    out = []
    for s in scalars:
        s = int(s) % R_SCALAR
        acc = grp.inf
        i = 0
        while s:
            if s & 1:
                acc = grp.add(acc, table[i])
            s >>= 1
            i += 1
        out.append(acc)
    return [grp.point_cls._from_jac(j) for j in out]


# ---- public API ----


def msm(points, scalars):
    """Return sum(scalars[i] * points[i]).

    ``points`` is a ``PointVec`` or a sequence of G1/G2 points of one type.
    ``scalars`` may also be a buffer already in native layout (see
    ``scalars_to_bytes``), which avoids re-encoding a vector used many times.
    """
    raw = None
    if isinstance(scalars, (bytes, bytearray, memoryview)):
        raw = bytes(scalars)
        if len(raw) % 32:
            raise ArgumentError("scalar buffer length is not a multiple of 32")
        if native_available():
            scalars = [None] * (len(raw) // 32)  # only the length is needed
        else:
            scalars = [int.from_bytes(raw[i : i + 32], "little") for i in range(0, len(raw), 32)]
    else:
        scalars = list(scalars)
    if isinstance(points, PointVec):
        vec = points
    else:
        points = list(points)
        if not points:
            if scalars:
                raise ArgumentError("points and scalars differ in length")
            raise ArgumentError("empty MSM has no point type; pass a PointVec")
        vec = None
    n = len(vec) if vec is not None else len(points)
    if n != len(scalars):
        raise ArgumentError(f"points ({n}) and scalars ({len(scalars)}) differ in length")
    point_cls = vec.point_cls if vec is not None else type(points[0])
    grp = _group_of(point_cls)
    if native_available():
        data = vec.data if vec is not None else b"".join(p.to_native() for p in points)
        fn = _native.g1_msm if grp is _G1 else _native.g2_msm
        return point_cls.from_native(fn(data, raw if raw is not None else scalars_to_bytes(scalars)))
    pts = vec.to_points() if vec is not None else points
    return _pure_msm(grp, pts, scalars)


def mul_batch(base, scalars, *, as_vec=False):
    """Multiply one base point by every scalar (fixed-base windows).

    Returns a list of points, or a ``PointVec`` when ``as_vec`` is true.
    """
    point_cls = type(base)
    grp = _group_of(point_cls)
    scalars = list(scalars)
    if native_available():
        fn = _native.g1_mul_batch if grp is _G1 else _native.g2_mul_batch
        data = fn(base.to_native(), scalars_to_bytes(scalars))
        vec = PointVec(point_cls, data)
        return vec if as_vec else vec.to_points()
    pts = _pure_mul_batch(grp, base, scalars)
    return PointVec.from_points(pts, point_cls) if as_vec else pts
