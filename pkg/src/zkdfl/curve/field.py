"""Prime fields of BN254: the scalar field Fr and the base field Fq (with Fq2).

``Fr`` is an ``int`` subclass kept in canonical form, so scalars can flow into
bulk code (FFT, MSM, witness vectors) as plain integers without conversion.
Fq and Fq2 arithmetic is internal plumbing for the curve and pairing code and
works on raw ints / ``(c0, c1)`` tuples for speed.
"""

from __future__ import annotations

import hashlib
import secrets

from ..errors import ArgumentError, FieldError

R_SCALAR = 21888242871839275222246405745257275088548364400416034343698204186575808495617
Q_BASE = 21888242871839275222246405745257275088696311157297823662689037894645226208583

FR_TWO_ADICITY = 28
FR_GENERATOR = 5


class Fr(int):
    """Element of the scalar field, always reduced to ``[0, R_SCALAR)``."""

    __slots__ = ()

    def __new__(cls, value=0):
        return int.__new__(cls, int(value) % R_SCALAR)

    def __repr__(self):
        return f"Fr({int(self)})"

    def __add__(self, other):
        return Fr(int(self) + int(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Fr(int(self) - int(other))

    def __rsub__(self, other):
        return Fr(int(other) - int(self))

    def __mul__(self, other):
        return Fr(int(self) * int(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Fr(-int(self))

    def __truediv__(self, other):
        return self * Fr(other).inv()

    def __rtruediv__(self, other):
        return Fr(other) * self.inv()

    def __pow__(self, exponent, modulo=None):
        if exponent < 0:
            return self.inv() ** (-exponent)
        return Fr(pow(int(self), int(exponent), R_SCALAR))

    def inv(self):
        if int(self) == 0:
            raise FieldError("inverse of zero in Fr")
        return Fr(pow(int(self), -1, R_SCALAR))

    def to_bytes32(self):
        return int(self).to_bytes(32, "big")

    @classmethod
    def from_bytes32(cls, data):
        if len(data) != 32:
            raise ArgumentError(f"Fr encoding must be 32 bytes, got {len(data)}")
        value = int.from_bytes(data, "big")
        if value >= R_SCALAR:
            raise ArgumentError("non-canonical Fr encoding")
        return cls(value)


def fr_ops(a, b, op, exponent=None):
    """Dispatch a named scalar-field operation: add, sub, mul, inv or pow."""
    a = Fr(a)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "pow":
        return a ** (b if exponent is None else exponent)
    raise ArgumentError(f"unknown field operation {op!r}")


def batch_inverse(values, modulus=R_SCALAR):
    """Invert many nonzero elements with a single modular inversion."""
    n = len(values)
    prefix = [0] * n
    acc = 1
    for i, v in enumerate(values):
        prefix[i] = acc
        acc = acc * v % modulus
    if acc == 0:
        raise FieldError("batch_inverse got a zero element")
    inv = pow(acc, -1, modulus)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = inv * prefix[i] % modulus
        inv = inv * values[i] % modulus
    return out


class FieldRng:
    """Deterministic stream of field elements (SHA-256 in counter mode).

    With ``seed=None`` the seed is drawn from OS entropy.
    """

    def __init__(self, seed=None):
        if seed is None:
            seed = secrets.token_bytes(32)
        elif isinstance(seed, int):
            seed = seed.to_bytes((seed.bit_length() + 8) // 8, "big", signed=True)
        elif isinstance(seed, str):
            seed = seed.encode()
        self._seed = bytes(seed)
        self._counter = 0

    def _block(self):
        h = hashlib.sha256(self._seed + self._counter.to_bytes(8, "big")).digest()
        self._counter += 1
        return h

    def fr(self):
        # 512 bits reduced mod r: statistical distance ~2^-258
        return Fr(int.from_bytes(self._block() + self._block(), "big"))

    def nonzero_fr(self):
        while True:
            x = self.fr()
            if x:
                return x


# ---- Fq / Fq2 helpers (tuples (c0, c1) meaning c0 + c1*u, u^2 = -1) ----

P = Q_BASE


def fq_inv(a):
    if a % P == 0:
        raise FieldError("inverse of zero in Fq")
    return pow(a, -1, P)


def fq_sqrt(a):
    """Square root in Fq (p = 3 mod 4) or None if ``a`` is a non-residue."""
    a %= P
    r = pow(a, (P + 1) // 4, P)
    return r if r * r % P == a else None


def f2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def f2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def f2_neg(a):
    return (-a[0] % P, -a[1] % P)


def f2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    return ((a0 * b0 - a1 * b1) % P, (a0 * b1 + a1 * b0) % P)


def f2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, 2 * a0 * a1 % P)


def f2_scale(a, k):
    return (a[0] * k % P, a[1] * k % P)


def f2_inv(a):
    a0, a1 = a
    n = (a0 * a0 + a1 * a1) % P
    if n == 0:
        raise FieldError("inverse of zero in Fq2")
    inv = pow(n, -1, P)
    return (a0 * inv % P, -a1 * inv % P)


def f2_conj(a):
    return (a[0], -a[1] % P)


def f2_pow(a, e):
    result = (1, 0)
    base = a
    while e:
        if e & 1:
            result = f2_mul(result, base)
        base = f2_sqr(base)
        e >>= 1
    return result


F2_ZERO = (0, 0)
F2_ONE = (1, 0)
XI = (9, 1)  # non-residue defining Fq12 = Fq2[w]/(w^6 - XI)
