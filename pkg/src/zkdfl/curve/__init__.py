"""BN254 arithmetic: fields, G1/G2, optimal ate pairing, MSM and FFT."""

from ..errors import ArgumentError
from .field import (
    FR_GENERATOR,
    FR_TWO_ADICITY,
    Q_BASE,
    R_SCALAR,
    FieldRng,
    Fr,
    batch_inverse,
    fr_ops,
)
from .fft import Domain, root_of_unity
from .groups import G1, G2, G1Point, G2Point
from .msm import PointVec, msm, mul_batch, native_available, set_pure
from .pairing import Gt, pairing, pairing_check, pairing_product


def g1_msm(points, scalars) -> G1Point:
    """sum(scalars[i] * points[i]) over G1."""
    if isinstance(points, PointVec):
        return msm(points, scalars)
    points = list(points)
    if not points:
        scalars = list(scalars)
        if scalars:
            raise ArgumentError("points and scalars differ in length")
        return G1Point.infinity()
    return msm(points, scalars)


def g2_msm(points, scalars) -> G2Point:
    if isinstance(points, PointVec):
        return msm(points, scalars)
    points = list(points)
    if not points:
        if list(scalars):
            raise ArgumentError("points and scalars differ in length")
        return G2Point.infinity()
    return msm(points, scalars)


def fft(values, inverse=False):
    """Transform over the canonical domain of size len(values)."""
    d = Domain(_check_pow2(len(values)))
    return d.ifft(values) if inverse else d.fft(values)


def _check_pow2(n):
    if n < 1 or n & (n - 1):
        raise ArgumentError(f"FFT length {n} is not a power of two")
    return n


__all__ = [
    "Fr",
    "FieldRng",
    "fr_ops",
    "batch_inverse",
    "R_SCALAR",
    "Q_BASE",
    "FR_GENERATOR",
    "FR_TWO_ADICITY",
    "G1Point",
    "G2Point",
    "G1",
    "G2",
    "Gt",
    "pairing",
    "pairing_product",
    "pairing_check",
    "PointVec",
    "msm",
    "g1_msm",
    "g2_msm",
    "mul_batch",
    "native_available",
    "set_pure",
    "Domain",
    "root_of_unity",
    "fft",
]
