"""Radix-2 FFT over Fr and evaluation domains.

The multiplicative group of Fr has a subgroup of order 2^28, so domains of any
power-of-two size up to 2^28 are available. Coset transforms use the field
generator 5 as shift.
"""

from __future__ import annotations

from ..errors import ArgumentError
from . import msm as _msm
from .field import FR_GENERATOR, FR_TWO_ADICITY, R_SCALAR, batch_inverse

_ROOT_2_28 = pow(FR_GENERATOR, (R_SCALAR - 1) >> FR_TWO_ADICITY, R_SCALAR)


def root_of_unity(n: int) -> int:
    """Primitive n-th root of unity, n a power of two."""
    if n < 1 or n & (n - 1):
        raise ArgumentError(f"domain size {n} is not a power of two")
    log = n.bit_length() - 1
    if log > FR_TWO_ADICITY:
        raise ArgumentError(f"domain size 2^{log} exceeds 2^{FR_TWO_ADICITY}")
    return pow(_ROOT_2_28, 1 << (FR_TWO_ADICITY - log), R_SCALAR)


def _to_bytes(values):
    return b"".join((int(v) % R_SCALAR).to_bytes(32, "little") for v in values)


def _from_bytes(buf):
    fb = int.from_bytes
    return [fb(buf[i : i + 32], "little") for i in range(0, len(buf), 32)]


def _pure_fft(values, omega):
    a = [int(v) % R_SCALAR for v in values]
    n = len(a)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j ^= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    length = 2
    while length <= n:
        w_len = pow(omega, n // length, R_SCALAR)
        half = length // 2
        tw = [1] * half
        for k in range(1, half):
            tw[k] = tw[k - 1] * w_len % R_SCALAR
        for start in range(0, n, length):
            for k in range(half):
                u = a[start + k]
                v = a[start + k + half] * tw[k] % R_SCALAR
                a[start + k] = (u + v) % R_SCALAR
                a[start + k + half] = (u - v) % R_SCALAR
        length <<= 1
    return a


def fft(values, omega):
    """Evaluate the polynomial with coefficients ``values`` at omega^0..omega^(n-1)."""
    n = len(values)
    if n == 0 or n & (n - 1):
        raise ArgumentError(f"FFT length {n} is not a power of two")
    if _msm.native_available():
        return _from_bytes(_msm._native.fr_fft(_to_bytes(values), int(omega).to_bytes(32, "little")))
    return _pure_fft(values, int(omega))


def scale_powers(values, start, ratio):
    """values[i] * start * ratio^i."""
    if _msm.native_available():
        buf = _msm._native.fr_scale_powers(
            _to_bytes(values), (start % R_SCALAR).to_bytes(32, "little"), (ratio % R_SCALAR).to_bytes(32, "little")
        )
        return _from_bytes(buf)
    out = []
    cur = start % R_SCALAR
    for v in values:
        out.append(int(v) * cur % R_SCALAR)
        cur = cur * ratio % R_SCALAR
    return out


class Domain:
    """Multiplicative subgroup {omega^i} of size n (a power of two)."""

    def __init__(self, n: int):
        self.size = n
        self.omega = root_of_unity(n)
        self.omega_inv = pow(self.omega, -1, R_SCALAR)
        self.size_inv = pow(n, -1, R_SCALAR)

    @classmethod
    def for_size(cls, m: int):
        """Smallest domain with at least m points (at least 2)."""
        n = 2
        while n < m:
            n <<= 1
        return cls(n)

    def elements(self):
        out = [1] * self.size
        for i in range(1, self.size):
            out[i] = out[i - 1] * self.omega % R_SCALAR
        return out

    def vanishing(self, x):
        return (pow(int(x), self.size, R_SCALAR) - 1) % R_SCALAR

    def fft(self, coeffs):
        return fft(self._pad(coeffs), self.omega)

    def ifft(self, evals):
        out = fft(self._pad(evals), self.omega_inv)
        return scale_powers(out, self.size_inv, 1)

    def coset_fft(self, coeffs, shift=FR_GENERATOR):
        return fft(scale_powers(self._pad(coeffs), 1, shift), self.omega)

    def coset_ifft(self, evals, shift=FR_GENERATOR):
        coeffs = self.ifft(evals)
        return scale_powers(coeffs, 1, pow(shift, -1, R_SCALAR))

    def lagrange_at(self, tau):
        """[L_i(tau)] for all i; tau must not lie in the domain."""
        tau = int(tau) % R_SCALAR
        z = self.vanishing(tau)
        if z == 0:
            raise ArgumentError("evaluation point lies in the domain")
        elems = self.elements()
        inv = batch_inverse([(tau - e) % R_SCALAR for e in elems])
        k = z * self.size_inv % R_SCALAR
        return [e * d % R_SCALAR * k % R_SCALAR for e, d in zip(elems, inv)]

    def _pad(self, values):
        values = list(values)
        if len(values) > self.size:
            raise ArgumentError(f"{len(values)} values exceed domain size {self.size}")
        return values + [0] * (self.size - len(values))
