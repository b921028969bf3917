"""Optimal ate pairing on BN254.

Fq12 is represented as Fq2[w]/(w^6 - xi), xi = 9 + u, stored as a flat tuple
of 12 ints ``(a0.c0, a0.c1, a1.c0, ..., a5.c1)`` for ``sum a_k w^k``. The Miller
loop runs on the twist in affine coordinates; each line is sparse
(``l0 + l1*w + l3*w^3``). Vertical lines live in Fq6 and are dropped since the
final exponentiation kills them.
"""

from __future__ import annotations

from ..errors import ArgumentError
from .field import (
    P,
    R_SCALAR,
    XI,
    f2_add,
    f2_conj,
    f2_inv,
    f2_mul,
    f2_neg,
    f2_pow,
    f2_sqr,
    f2_sub,
)
from .groups import G1Point, G2Point

BN_U = 4965661367192848881
ATE_LOOP_COUNT = 6 * BN_U + 2
_ATE_BITS = [int(b) for b in bin(ATE_LOOP_COUNT)[3:]]

_FINAL_HARD = (P ** 4 - P ** 2 + 1) // R_SCALAR

# Frobenius constants
_PI_X = f2_pow(XI, (P - 1) // 3)
_PI_Y = f2_pow(XI, (P - 1) // 2)
_PI2_X = f2_pow(XI, (P * P - 1) // 3)
_PI2_Y = f2_pow(XI, (P * P - 1) // 2)
_FROB2 = [f2_pow(XI, k * (P * P - 1) // 6) for k in range(6)]

F12_ONE = (1,) + (0,) * 11


def f12_mul(a, b):
    acc = [0] * 22
    for i in range(6):
        ar = a[2 * i]
        ai = a[2 * i + 1]
        if not (ar or ai):
            continue
        for j in range(6):
            br = b[2 * j]
            bi = b[2 * j + 1]
            k = 2 * (i + j)
            acc[k] += ar * br - ai * bi
            acc[k + 1] += ar * bi + ai * br
    for k in range(6, 11):
        re = acc[2 * k]
        im = acc[2 * k + 1]
        acc[2 * k - 12] += 9 * re - im
        acc[2 * k - 11] += re + 9 * im
    return tuple(v % P for v in acc[:12])


def f12_sqr(a):
    acc = [0] * 22
    for i in range(6):
        ar = a[2 * i]
        ai = a[2 * i + 1]
        k = 4 * i
        acc[k] += ar * ar - ai * ai
        acc[k + 1] += 2 * ar * ai
        ar2 = 2 * ar
        ai2 = 2 * ai
        for j in range(i + 1, 6):
            br = a[2 * j]
            bi = a[2 * j + 1]
            k = 2 * (i + j)
            acc[k] += ar2 * br - ai2 * bi
            acc[k + 1] += ar2 * bi + ai2 * br
    for k in range(6, 11):
        re = acc[2 * k]
        im = acc[2 * k + 1]
        acc[2 * k - 12] += 9 * re - im
        acc[2 * k - 11] += re + 9 * im
    return tuple(v % P for v in acc[:12])


def _mul_line(f, l0, l1, l3):
    """f * (l0 + l1*w + l3*w^3) with l0 in Fq and l1, l3 in Fq2."""
    acc = [0] * 18
    l1r, l1i = l1
    l3r, l3i = l3
    for i in range(6):
        fr = f[2 * i]
        fi = f[2 * i + 1]
        acc[2 * i] += l0 * fr
        acc[2 * i + 1] += l0 * fi
        k = 2 * (i + 1)
        acc[k] += fr * l1r - fi * l1i
        acc[k + 1] += fr * l1i + fi * l1r
        k = 2 * (i + 3)
        acc[k] += fr * l3r - fi * l3i
        acc[k + 1] += fr * l3i + fi * l3r
    for k in range(6, 9):
        re = acc[2 * k]
        im = acc[2 * k + 1]
        acc[2 * k - 12] += 9 * re - im
        acc[2 * k - 11] += re + 9 * im
    return tuple(v % P for v in acc[:12])


def _conj6(f):
    """f^(p^6): negates odd powers of w."""
    return tuple(v if (k // 2) % 2 == 0 else -v % P for k, v in enumerate(f))


def _frob2(f):
    out = []
    for k in range(6):
        c = f2_mul((f[2 * k], f[2 * k + 1]), _FROB2[k])
        out.extend(c)
    return tuple(out)


def f12_inv(f):
    n = f12_mul(f, _conj6(f))
    # n lies in Fq6 = Fq2[v]/(v^3 - xi), v = w^2
    a0 = (n[0], n[1])
    a1 = (n[4], n[5])
    a2 = (n[8], n[9])
    t0 = f2_sub(f2_sqr(a0), f2_mul(XI, f2_mul(a1, a2)))
    t1 = f2_sub(f2_mul(XI, f2_sqr(a2)), f2_mul(a0, a1))
    t2 = f2_sub(f2_sqr(a1), f2_mul(a0, a2))
    den = f2_add(f2_mul(a0, t0), f2_mul(XI, f2_add(f2_mul(a2, t1), f2_mul(a1, t2))))
    di = f2_inv(den)
    c0, c1, c2 = f2_mul(t0, di), f2_mul(t1, di), f2_mul(t2, di)
    ninv = (c0[0], c0[1], 0, 0, c1[0], c1[1], 0, 0, c2[0], c2[1], 0, 0)
    return f12_mul(_conj6(f), ninv)


def f12_pow(f, e):
    if e == 0:
        return F12_ONE
    table = [F12_ONE, f]
    for _ in range(14):
        table.append(f12_mul(table[-1], f))
    result = F12_ONE
    nibbles = []
    while e:
        nibbles.append(e & 15)
        e >>= 4
    for idx, nib in enumerate(reversed(nibbles)):
        if idx:
            for _ in range(4):
                result = f12_sqr(result)
        if nib:
            result = f12_mul(result, table[nib])
    return result


def _double_step(T, xp, yp):
    xt, yt = T
    lam = f2_mul(f2_mul((3, 0), f2_sqr(xt)), f2_inv(((2 * yt[0]) % P, (2 * yt[1]) % P)))
    x3 = f2_sub(f2_sqr(lam), ((2 * xt[0]) % P, (2 * xt[1]) % P))
    y3 = f2_sub(f2_mul(lam, f2_sub(xt, x3)), yt)
    line = (yp, ((-lam[0] * xp) % P, (-lam[1] * xp) % P), f2_sub(f2_mul(lam, xt), yt))
    return line, (x3, y3)


def _add_step(T, Q, xp, yp):
    xt, yt = T
    xq, yq = Q
    if xt == xq:
        if yt == yq:
            return _double_step(T, xp, yp)
        return None, None  # vertical line, T + Q = infinity
    lam = f2_mul(f2_sub(yq, yt), f2_inv(f2_sub(xq, xt)))
    x3 = f2_sub(f2_sub(f2_sqr(lam), xt), xq)
    y3 = f2_sub(f2_mul(lam, f2_sub(xt, x3)), yt)
    line = (yp, ((-lam[0] * xp) % P, (-lam[1] * xp) % P), f2_sub(f2_mul(lam, xt), yt))
    return line, (x3, y3)


def miller_loop(p: G1Point, q: G2Point):
    if p.inf or q.inf:
        return F12_ONE
    xp, yp = p.x, p.y
    Q = (q.x, q.y)
    T = Q
    f = F12_ONE
    for bit in _ATE_BITS:
        line, T = _double_step(T, xp, yp)
        f = _mul_line(f12_sqr(f), *line)
        if bit:
            line, T = _add_step(T, Q, xp, yp)
            f = _mul_line(f, *line)
    q1 = (f2_mul(f2_conj(q.x), _PI_X), f2_mul(f2_conj(q.y), _PI_Y))
    q2 = (f2_mul(q.x, _PI2_X), f2_neg(f2_mul(q.y, _PI2_Y)))
    line, T = _add_step(T, q1, xp, yp)
    f = _mul_line(f, *line)
    line, _ = _add_step(T, q2, xp, yp)
    if line is not None:
        f = _mul_line(f, *line)
    return f


def final_exponentiation(f):
    f = f12_mul(_conj6(f), f12_inv(f))  # f^(p^6 - 1)
    f = f12_mul(_frob2(f), f)  # ^(p^2 + 1)
    return Gt(f12_pow(f, _FINAL_HARD))


class Gt:
    """Element of the order-r target group inside Fq12*."""

    __slots__ = ("value",)

    def __init__(self, value=F12_ONE):
        self.value = tuple(value)

    @classmethod
    def one(cls):
        return cls(F12_ONE)

    def is_one(self):
        return self.value == F12_ONE

    def __mul__(self, other):
        return Gt(f12_mul(self.value, other.value))

    def __pow__(self, e):
        e = int(e) % R_SCALAR
        return Gt(f12_pow(self.value, e))

    def inverse(self):
        # unitary after final exponentiation: inverse is the p^6 conjugate
        return Gt(_conj6(self.value))

    def __eq__(self, other):
        return isinstance(other, Gt) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "Gt(1)" if self.is_one() else f"Gt({self.value[0]}, ...)"


def _check(p, q):
    if not isinstance(p, G1Point) or not isinstance(q, G2Point):
        raise ArgumentError("pairing expects (G1Point, G2Point)")
    if not p.is_on_curve():
        raise ArgumentError("G1 argument is off-curve")
    if not q.is_on_curve():
        raise ArgumentError("G2 argument is off-curve")


def pairing(p: G1Point, q: G2Point) -> Gt:
    """e(p, q); degenerate inputs map to the identity of Gt."""
    _check(p, q)
    if p.inf or q.inf:
        return Gt.one()
    return final_exponentiation(miller_loop(p, q))


def miller_product(pairs):
    """Product of Miller loop values (no input validation)."""
    f = F12_ONE
    for p, q in pairs:
        if p.inf or q.inf:
            continue
        f = f12_mul(f, miller_loop(p, q))
    return f


def pairing_product(pairs) -> Gt:
    """Product of pairings sharing a single final exponentiation."""
    pairs = list(pairs)
    for p, q in pairs:
        _check(p, q)
    return final_exponentiation(miller_product(pairs))


def pairing_check(pairs) -> bool:
    return pairing_product(pairs).is_one()
