"""G1 and G2 of BN254 (alt_bn128) in affine form, with Jacobian internals.

G1: y^2 = x^3 + 3 over Fq, generator (1, 2).
G2: y^2 = x^3 + 3/(9+u) over Fq2 (D-type twist), standard EIP-197 generator.

Byte encoding (big-endian, 32 bytes per Fq limb): G1 is ``x || y``; G2 is
``x.c0 || x.c1 || y.c0 || y.c1``; the point at infinity is all zero bytes.
"""

from __future__ import annotations

from ..errors import ArgumentError
from .field import (
    F2_ONE,
    F2_ZERO,
    P,
    R_SCALAR,
    XI,
    f2_add,
    f2_inv,
    f2_mul,
    f2_neg,
    f2_scale,
    f2_sqr,
    f2_sub,
)

B1 = 3
B2 = f2_mul((3, 0), f2_inv(XI))

# ---- G1 Jacobian over ints ----

_G1_INF = (1, 1, 0)


def _g1_dbl(p):
    x, y, z = p
    if z == 0 or y == 0:
        return _G1_INF
    a = x * x % P
    b = y * y % P
    c = b * b % P
    d = 2 * ((x + b) ** 2 - a - c) % P
    e = 3 * a % P
    f = e * e % P
    x3 = (f - 2 * d) % P
    y3 = (e * (d - x3) - 8 * c) % P
    z3 = 2 * y * z % P
    return (x3, y3, z3)


def _g1_add(p, q):
    x1, y1, z1 = p
    x2, y2, z2 = q
    if z1 == 0:
        return q
    if z2 == 0:
        return p
    z1z1 = z1 * z1 % P
    z2z2 = z2 * z2 % P
    u1 = x1 * z2z2 % P
    u2 = x2 * z1z1 % P
    s1 = y1 * z2 * z2z2 % P
    s2 = y2 * z1 * z1z1 % P
    h = (u2 - u1) % P
    r = (s2 - s1) % P
    if h == 0:
        return _g1_dbl(p) if r == 0 else _G1_INF
    r = 2 * r % P
    i = 4 * h * h % P
    j = h * i % P
    v = u1 * i % P
    x3 = (r * r - j - 2 * v) % P
    y3 = (r * (v - x3) - 2 * s1 * j) % P
    z3 = ((z1 + z2) ** 2 - z1z1 - z2z2) * h % P
    return (x3, y3, z3)


def _g1_neg(p):
    return (p[0], -p[1] % P, p[2])


def _g1_mul(p, k):
    result = _G1_INF
    addend = p
    while k:
        if k & 1:
            result = _g1_add(result, addend)
        addend = _g1_dbl(addend)
        k >>= 1
    return result


def _g1_affine(p):
    x, y, z = p
    if z == 0:
        return None
    zi = pow(z, -1, P)
    zi2 = zi * zi % P
    return (x * zi2 % P, y * zi2 * zi % P)


# ---- G2 Jacobian over Fq2 tuples ----

_G2_INF = (F2_ONE, F2_ONE, F2_ZERO)


def _g2_dbl(p):
    x, y, z = p
    if z == F2_ZERO or y == F2_ZERO:
        return _G2_INF
    a = f2_sqr(x)
    b = f2_sqr(y)
    c = f2_sqr(b)
    t = f2_sqr(f2_add(x, b))
    d = f2_scale(f2_sub(f2_sub(t, a), c), 2)
    e = f2_scale(a, 3)
    f = f2_sqr(e)
    x3 = f2_sub(f, f2_scale(d, 2))
    y3 = f2_sub(f2_mul(e, f2_sub(d, x3)), f2_scale(c, 8))
    z3 = f2_scale(f2_mul(y, z), 2)
    return (x3, y3, z3)


def _g2_add(p, q):
    x1, y1, z1 = p
    x2, y2, z2 = q
    if z1 == F2_ZERO:
        return q
    if z2 == F2_ZERO:
        return p
    z1z1 = f2_sqr(z1)
    z2z2 = f2_sqr(z2)
    u1 = f2_mul(x1, z2z2)
    u2 = f2_mul(x2, z1z1)
    s1 = f2_mul(f2_mul(y1, z2), z2z2)
    s2 = f2_mul(f2_mul(y2, z1), z1z1)
    h = f2_sub(u2, u1)
    r = f2_sub(s2, s1)
    if h == F2_ZERO:
        return _g2_dbl(p) if r == F2_ZERO else _G2_INF
    r = f2_scale(r, 2)
    i = f2_scale(f2_sqr(h), 4)
    j = f2_mul(h, i)
    v = f2_mul(u1, i)
    x3 = f2_sub(f2_sub(f2_sqr(r), j), f2_scale(v, 2))
    y3 = f2_sub(f2_mul(r, f2_sub(v, x3)), f2_scale(f2_mul(s1, j), 2))
    z3 = f2_mul(f2_sub(f2_sub(f2_sqr(f2_add(z1, z2)), z1z1), z2z2), h)
    return (x3, y3, z3)


def _g2_neg(p):
    return (p[0], f2_neg(p[1]), p[2])


def _g2_mul(p, k):
    result = _G2_INF
    addend = p
    while k:
        if k & 1:
            result = _g2_add(result, addend)
        addend = _g2_dbl(addend)
        k >>= 1
    return result


def _g2_affine(p):
    x, y, z = p
    if z == F2_ZERO:
        return None
    zi = f2_inv(z)
    zi2 = f2_sqr(zi)
    return (f2_mul(x, zi2), f2_mul(f2_mul(y, zi2), zi))


# ---- public point types ----


class G1Point:
    """Affine point of G1; ``G1Point.infinity()`` is the group identity."""

    __slots__ = ("x", "y", "inf")

    def __init__(self, x, y, *, check=True):
        self.x = x % P
        self.y = y % P
        self.inf = False
        if check and not self.is_on_curve():
            raise ArgumentError(f"point ({x}, {y}) is not on G1")

    @classmethod
    def infinity(cls):
        pt = cls.__new__(cls)
        pt.x, pt.y, pt.inf = 0, 0, True
        return pt

    @classmethod
    def generator(cls):
        return cls(1, 2)

    @classmethod
    def _from_jac(cls, jac):
        aff = _g1_affine(jac)
        return cls.infinity() if aff is None else cls(aff[0], aff[1], check=False)

    def _jac(self):
        return _G1_INF if self.inf else (self.x, self.y, 1)

    def is_on_curve(self):
        return self.inf or (self.y * self.y - self.x ** 3 - B1) % P == 0

    def in_subgroup(self):
        # cofactor 1: every curve point has order r
        return self.is_on_curve()

    def __add__(self, other):
        return G1Point._from_jac(_g1_add(self._jac(), other._jac()))

    def __neg__(self):
        return self if self.inf else G1Point(self.x, -self.y, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return G1Point._from_jac(_g1_mul(self._jac(), int(k) % R_SCALAR))

    __rmul__ = __mul__

    def mul_unreduced(self, k):
        return G1Point._from_jac(_g1_mul(self._jac(), int(k)))

    def __eq__(self, other):
        if not isinstance(other, G1Point):
            return NotImplemented
        if self.inf or other.inf:
            return self.inf and other.inf
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash(("G1", self.inf, self.x, self.y))

    def __repr__(self):
        return "G1Point(inf)" if self.inf else f"G1Point({self.x}, {self.y})"

    def to_bytes(self):
        if self.inf:
            return bytes(64)
        return self.x.to_bytes(32, "big") + self.y.to_bytes(32, "big")

    @classmethod
    def from_bytes(cls, data):
        if len(data) != 64:
            raise ArgumentError(f"G1 encoding must be 64 bytes, got {len(data)}")
        if not any(data):
            return cls.infinity()
        x = int.from_bytes(data[:32], "big")
        y = int.from_bytes(data[32:], "big")
        if x >= P or y >= P:
            raise ArgumentError("non-canonical G1 coordinate")
        return cls(x, y)

    def to_native(self):
        if self.inf:
            return bytes(64)
        return self.x.to_bytes(32, "little") + self.y.to_bytes(32, "little")

    @classmethod
    def from_native(cls, data):
        if not any(data):
            return cls.infinity()
        return cls(int.from_bytes(data[:32], "little"), int.from_bytes(data[32:64], "little"), check=False)


class G2Point:
    """Affine point of G2 with Fq2 coordinates given as ``(c0, c1)`` tuples."""

    __slots__ = ("x", "y", "inf")

    def __init__(self, x, y, *, check=True):
        self.x = (x[0] % P, x[1] % P)
        self.y = (y[0] % P, y[1] % P)
        self.inf = False
        if check and not self.is_on_curve():
            raise ArgumentError("point is not on the G2 twist")

    @classmethod
    def infinity(cls):
        pt = cls.__new__(cls)
        pt.x, pt.y, pt.inf = F2_ZERO, F2_ZERO, True
        return pt

    @classmethod
    def generator(cls):
        return cls(
            (
                10857046999023057135944570762232829481370756359578518086990519993285655852781,
                11559732032986387107991004021392285783925812861821192530917403151452391805634,
            ),
            (
                8495653923123431417604973247489272438418190587263600148770280649306958101930,
                4082367875863433681332203403145435568316851327593401208105741076214120093531,
            ),
        )

    @classmethod
    def _from_jac(cls, jac):
        aff = _g2_affine(jac)
        return cls.infinity() if aff is None else cls(aff[0], aff[1], check=False)

    def _jac(self):
        return _G2_INF if self.inf else (self.x, self.y, F2_ONE)

    def is_on_curve(self):
        if self.inf:
            return True
        lhs = f2_sqr(self.y)
        rhs = f2_add(f2_mul(f2_sqr(self.x), self.x), B2)
        return lhs == rhs

    def in_subgroup(self):
        if not self.is_on_curve():
            return False
        return self.inf or _g2_mul(self._jac(), R_SCALAR)[2] == F2_ZERO

    def __add__(self, other):
        return G2Point._from_jac(_g2_add(self._jac(), other._jac()))

    def __neg__(self):
        return self if self.inf else G2Point(self.x, f2_neg(self.y), check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return G2Point._from_jac(_g2_mul(self._jac(), int(k) % R_SCALAR))

    __rmul__ = __mul__

    def mul_unreduced(self, k):
        return G2Point._from_jac(_g2_mul(self._jac(), int(k)))

    def __eq__(self, other):
        if not isinstance(other, G2Point):
            return NotImplemented
        if self.inf or other.inf:
            return self.inf and other.inf
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash(("G2", self.inf, self.x, self.y))

    def __repr__(self):
        return "G2Point(inf)" if self.inf else f"G2Point({self.x}, {self.y})"

    def to_bytes(self):
        if self.inf:
            return bytes(128)
        return b"".join(v.to_bytes(32, "big") for v in (*self.x, *self.y))

    @classmethod
    def from_bytes(cls, data, *, check_subgroup=True):
        if len(data) != 128:
            raise ArgumentError(f"G2 encoding must be 128 bytes, got {len(data)}")
        if not any(data):
            return cls.infinity()
        limbs = [int.from_bytes(data[i : i + 32], "big") for i in range(0, 128, 32)]
        if any(v >= P for v in limbs):
            raise ArgumentError("non-canonical G2 coordinate")
        pt = cls((limbs[0], limbs[1]), (limbs[2], limbs[3]))
        if check_subgroup and not pt.in_subgroup():
            raise ArgumentError("G2 point is not in the order-r subgroup")
        return pt

    def to_native(self):
        if self.inf:
            return bytes(128)
        return b"".join(v.to_bytes(32, "little") for v in (*self.x, *self.y))

    @classmethod
    def from_native(cls, data):
        if not any(data):
            return cls.infinity()
        limbs = [int.from_bytes(data[i : i + 32], "little") for i in range(0, 128, 32)]
        return cls((limbs[0], limbs[1]), (limbs[2], limbs[3]), check=False)


G1 = G1Point.generator()
G2 = G2Point.generator()
