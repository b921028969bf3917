"""Groth16 over BN254: trusted setup, prover and verifier.

Setup samples the toxic waste (tau, alpha, beta, gamma, delta) from a seeded
field RNG and normally discards it. The verifier checks

    e(A, B) = e(alpha, beta) * e(vk_x, gamma) * e(C, delta)

as a single product of three Miller loops times the precomputed e(alpha, beta).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .curve.field import R_SCALAR, FieldRng
from .curve.groups import G1, G2, G1Point, G2Point
from .curve.msm import PointVec, msm, mul_batch, scalars_to_bytes
from .curve.pairing import Gt, final_exponentiation, miller_product, pairing
from .errors import ArgumentError, UnsatisfiedCircuit
from .qap import Qap

PROOF_BYTES = 256


@dataclass(frozen=True)
class ToxicWaste:
    tau: int
    alpha: int
    beta: int
    gamma: int
    delta: int


@dataclass
class VerifyingKey:
    alpha_g1: G1Point
    beta_g2: G2Point
    gamma_g2: G2Point
    delta_g2: G2Point
    ic: list
    _alpha_beta: Gt = None

    @property
    def num_public(self):
        return len(self.ic) - 1

    @property
    def alpha_beta(self) -> Gt:
        """e(alpha, beta), computed once."""
        if self._alpha_beta is None:
            self._alpha_beta = pairing(self.alpha_g1, self.beta_g2)
        return self._alpha_beta

    def to_bytes(self) -> bytes:
        parts = [self.alpha_g1.to_bytes(), self.beta_g2.to_bytes(), self.gamma_g2.to_bytes(), self.delta_g2.to_bytes()]
        parts.append(struct.pack(">I", len(self.ic)))
        parts.extend(p.to_bytes() for p in self.ic)
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "VerifyingKey":
        head = 64 + 3 * 128
        if len(data) < head + 4:
            raise ArgumentError("verifying key file is truncated")
        alpha = G1Point.from_bytes(data[0:64])
        beta = G2Point.from_bytes(data[64:192])
        gamma = G2Point.from_bytes(data[192:320])
        delta = G2Point.from_bytes(data[320:448])
        (count,) = struct.unpack(">I", data[head : head + 4])
        if count < 1 or len(data) != head + 4 + 64 * count:
            raise ArgumentError("verifying key ic section has the wrong length")
        off = head + 4
        ic = [G1Point.from_bytes(data[off + 64 * i : off + 64 * (i + 1)]) for i in range(count)]
        return cls(alpha, beta, gamma, delta, ic)

    def __eq__(self, other):
        return isinstance(other, VerifyingKey) and self.to_bytes() == other.to_bytes()


@dataclass
class ProvingKey:
    qap: Qap
    alpha_g1: G1Point
    beta_g1: G1Point
    beta_g2: G2Point
    delta_g1: G1Point
    delta_g2: G2Point
    a_query: PointVec  # A_j(tau) G1, every variable
    b_g1_query: PointVec  # B_j(tau) G1
    b_g2_query: PointVec  # B_j(tau) G2
    h_query: PointVec  # tau^i t(tau) / delta, i < n - 1
    l_query: PointVec  # (beta A_j + alpha B_j + C_j) / delta, witness variables

    @property
    def num_public(self):
        return self.qap.num_public

    @property
    def num_witness(self):
        return len(self.l_query)

    def to_bytes(self) -> bytes:
        """Deterministic byte image of all key material (not the QAP itself)."""
        parts = [
            self.alpha_g1.to_bytes(),
            self.beta_g1.to_bytes(),
            self.beta_g2.to_bytes(),
            self.delta_g1.to_bytes(),
            self.delta_g2.to_bytes(),
        ]
        for vec in (self.a_query, self.b_g1_query, self.b_g2_query, self.h_query, self.l_query):
            parts.append(struct.pack(">I", len(vec)))
            parts.append(vec.data)
        return b"".join(parts)


@dataclass(frozen=True)
class Proof:
    a: G1Point
    b: G2Point
    c: G1Point

    def to_bytes(self) -> bytes:
        return self.a.to_bytes() + self.b.to_bytes() + self.c.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Proof":
        if len(data) != PROOF_BYTES:
            raise ArgumentError(f"proof must be {PROOF_BYTES} bytes, got {len(data)}")
        return cls(G1Point.from_bytes(data[:64]), G2Point.from_bytes(data[64:192]), G1Point.from_bytes(data[192:]))


def _sample(rng, qap):
    n = qap.degree
    while True:
        tau = rng.nonzero_fr()
        if pow(tau, n, R_SCALAR) != 1:  # tau outside the evaluation domain
            break
    return ToxicWaste(int(tau), *(int(rng.nonzero_fr()) for _ in range(4)))


def setup(qap: Qap, seed=None, *, return_toxic=False, toxic: ToxicWaste = None):
    """Generate (ProvingKey, VerifyingKey[, ToxicWaste]) for a QAP.

    ``seed=None`` draws fresh OS entropy. ``toxic`` fixes the secrets directly
    (tests only).
    """
    if not isinstance(qap, Qap):
        raise ArgumentError("setup expects a Qap")
    tw = toxic if toxic is not None else _sample(FieldRng(seed), qap)
    r = R_SCALAR
    ua, va, wa, t_tau = qap.evaluate_at(tw.tau)
    gamma_inv = pow(tw.gamma, -1, r)
    delta_inv = pow(tw.delta, -1, r)
    npub = qap.num_public

    a_query = mul_batch(G1, ua, as_vec=True)
    b_g1_query = mul_batch(G1, va, as_vec=True)
    b_g2_query = mul_batch(G2, va, as_vec=True)

    mixed = [(tw.beta * u + tw.alpha * v + w) % r for u, v, w in zip(ua, va, wa)]
    ic_scalars = [x * gamma_inv % r for x in mixed[: npub + 1]]
    l_scalars = [x * delta_inv % r for x in mixed[npub + 1 :]]
    ic = mul_batch(G1, ic_scalars)
    l_query = mul_batch(G1, l_scalars, as_vec=True) if l_scalars else PointVec(G1Point, b"")

    n = qap.degree
    h_scalars = []
    cur = t_tau * delta_inv % r
    for _ in range(n - 1):
        h_scalars.append(cur)
        cur = cur * tw.tau % r
    h_query = mul_batch(G1, h_scalars, as_vec=True)

    alpha_g1 = G1 * tw.alpha
    beta_g2 = G2 * tw.beta
    delta_g2 = G2 * tw.delta
    pk = ProvingKey(
        qap=qap,
        alpha_g1=alpha_g1,
        beta_g1=G1 * tw.beta,
        beta_g2=beta_g2,
        delta_g1=G1 * tw.delta,
        delta_g2=delta_g2,
        a_query=a_query,
        b_g1_query=b_g1_query,
        b_g2_query=b_g2_query,
        h_query=h_query,
        l_query=l_query,
    )
    vk = VerifyingKey(alpha_g1, beta_g2, G2 * tw.gamma, delta_g2, ic)
    return (pk, vk, tw) if return_toxic else (pk, vk)


def prove(pk: ProvingKey, public, witness, seed=None) -> Proof:
    """Create a proof; refuses (UnsatisfiedCircuit) if the assignment fails any row."""
    qap = pk.qap
    public = [int(x) for x in public]
    witness = [int(x) for x in witness]
    if len(public) != qap.num_public:
        raise ArgumentError(f"expected {qap.num_public} public inputs, got {len(public)}")
    if len(witness) != qap.num_variables - 1 - qap.num_public:
        raise ArgumentError(f"expected {qap.num_variables - 1 - qap.num_public} witness values, got {len(witness)}")
    z = [1] + [v % R_SCALAR for v in public] + [v % R_SCALAR for v in witness]
    az, bz, cz = qap.row_values(z)
    for i in range(qap.num_constraints):
        if az[i] * bz[i] % R_SCALAR != cz[i]:
            raise UnsatisfiedCircuit(i)
    h = qap._quotient_from_rows(az, bz, cz)
    del az, bz, cz

    rng = FieldRng(seed)
    rr = int(rng.fr())
    ss = int(rng.fr())

    z_bytes = scalars_to_bytes(z)
    a = pk.alpha_g1 + msm(pk.a_query, z_bytes) + pk.delta_g1 * rr
    b2 = pk.beta_g2 + msm(pk.b_g2_query, z_bytes) + pk.delta_g2 * ss
    b1 = pk.beta_g1 + msm(pk.b_g1_query, z_bytes) + pk.delta_g1 * ss
    w_bytes = z_bytes[32 * (1 + qap.num_public) :]
    c = msm(pk.h_query, h)
    if len(pk.l_query):
        c = c + msm(pk.l_query, w_bytes)
    c = c + a * ss + b1 * rr - pk.delta_g1 * (rr * ss % R_SCALAR)
    return Proof(a, b2, c)


def _proof_well_formed(proof):
    return (
        isinstance(proof, Proof)
        and proof.a.is_on_curve()
        and proof.c.is_on_curve()
        and proof.b.in_subgroup()
    )


def verify(vk: VerifyingKey, public, proof: Proof) -> bool:
    """Check a proof against public inputs. Length mismatch raises ArgumentError."""
    public = [int(x) for x in public]
    if len(public) != vk.num_public:
        raise ArgumentError(f"expected {vk.num_public} public inputs, got {len(public)}")
    for x in public:
        if not 0 <= x < R_SCALAR:
            raise ArgumentError("public input is not a canonical field element")
    if not _proof_well_formed(proof):
        return False
    vk_x = vk.ic[0]
    if public:
        vk_x = vk_x + msm(vk.ic[1:], public)
    f = miller_product(
        [
            (-proof.a, proof.b),
            (vk_x, vk.gamma_g2),
            (proof.c, vk.delta_g2),
        ]
    )
    return (final_exponentiation(f) * vk.alpha_beta).is_one()

