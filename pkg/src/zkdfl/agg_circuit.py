"""The aggregation statement as one R1CS.

Public inputs, in order: H^1..H^m (client digests), w_hash (digest of the
averaged vector) and H_sum (sum of client digests). Private witness: every
encoded client parameter e[k][j], the floor averages q[j] and remainders
rem[j], their bit decompositions, and MiMC7 intermediates.

Per parameter j the circuit enforces
    sum_k e[k][j] = m * q[j] + rem[j]
    rem[j] and (m - 1 - rem[j]) both fit in b = ceil(log2 m) bits
    q[j] fits in 48 bits
and per client it recomputes the chained digest of the packed vector
(3 parameters per element) into H^k. The averaged vector is hashed with five
48-bit quotients per element, which the range check on q makes injective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curve.field import R_SCALAR
from .errors import ArgumentError, RangeError
from .mimc7 import (
    ENC_PER_ELEMENT,
    ENC_SLOT_BITS,
    QUOT_PER_ELEMENT,
    QUOT_SLOT_BITS,
    MimcParams,
    default_params,
    hash_encoded,
    hash_quotients,
    mimc7_hash_gadget,
    packed_length,
)
from .r1cs import ConstraintSystem

Q_BITS = 48
E_BOUND = 1 << 47


def rem_bits(m: int) -> int:
    return (m - 1).bit_length() if m > 1 else 0  # ceil(log2 m)


@dataclass(frozen=True)
class AggLayout:
    m: int
    P: int

    @property
    def num_public(self):
        return self.m + 2

    @property
    def bits(self):
        return rem_bits(self.m)


def aggregate_encoded(encoded):
    """Integer floor average per column: returns (q, rem)."""
    m = len(encoded)
    P = len(encoded[0])
    q, rem = [], []
    for j in range(P):
        s = sum(int(encoded[k][j]) for k in range(m))
        q.append(s // m)
        rem.append(s % m)
    return q, rem


def _check_encoded(encoded):
    if not encoded or not encoded[0]:
        raise ArgumentError("need m >= 1 clients with P >= 1 parameters")
    P = len(encoded[0])
    for k, row in enumerate(encoded):
        if len(row) != P:
            raise ArgumentError(f"client {k} has {len(row)} parameters, expected {P}")
        for j, v in enumerate(row):
            v = int(v)
            if not 0 <= v < E_BOUND:
                raise RangeError(f"encoded value e[{k}][{j}] = {v} outside [0, 2^47)", k * P + j)


def statement_values(encoded, params: MimcParams = None):
    """Native public inputs [H^1..H^m, w_hash, H_sum] plus (q, rem)."""
    params = params or default_params()
    _check_encoded(encoded)
    q, rem = aggregate_encoded(encoded)
    hs = [hash_encoded(row, params) for row in encoded]
    w_hash = hash_quotients(q, params)
    h_sum = sum(hs) % R_SCALAR
    return hs + [w_hash, h_sum], q, rem


def _build(encoded, params, record):
    params = params or default_params()
    m = len(encoded)
    P = len(encoded[0])
    public, q, rem = statement_values(encoded, params)
    cs = ConstraintSystem(record=record)
    pub = [cs.alloc_public(v) for v in public]
    h_vars, w_var, sum_var = pub[:m], pub[m], pub[m + 1]

    aw = cs.alloc_witness
    enforce = cs.enforce_terms
    e_idx = [[aw(int(v)).index for v in row] for row in encoded]
    q_idx = [aw(v).index for v in q]
    r_idx = [aw(v).index for v in rem]
    b = rem_bits(m)
    one = [(0, 1)]
    neg = R_SCALAR - 1

    for j in range(P):
        # (a) column sum = m*q + rem
        a_row = [(e_idx[k][j], 1) for k in range(m)] + [(q_idx[j], (-m) % R_SCALAR), (r_idx[j], neg)]
        enforce(a_row, one, [])
        # (b) rem and m-1-rem in b bits
        rv = rem[j]
        cv = m - 1 - rv
        rb = [aw((rv >> i) & 1).index for i in range(b)]
        cb = [aw((cv >> i) & 1).index for i in range(b)]
        for v in rb + cb:
            enforce([(v, 1)], [(v, 1)], [(v, 1)])
        enforce([(v, 1 << i) for i, v in enumerate(rb)] + [(r_idx[j], neg)], one, [])
        comp = [(v, 1 << i) for i, v in enumerate(cb)] + [(r_idx[j], 1)]
        if m - 1:
            comp.append((0, (1 - m) % R_SCALAR))
        enforce(comp, one, [])
        # (c) q in 48 bits
        qv = q[j]
        qb = [aw((qv >> i) & 1).index for i in range(Q_BITS)]
        for v in qb:
            enforce([(v, 1)], [(v, 1)], [(v, 1)])
        enforce([(v, 1 << i) for i, v in enumerate(qb)] + [(q_idx[j], neg)], one, [])

    for k in range(m):
        xs = _packed_terms(e_idx[k], ENC_PER_ELEMENT, ENC_SLOT_BITS)
        mimc7_hash_gadget(cs, xs, params, out=h_vars[k])
    mimc7_hash_gadget(cs, _packed_terms(q_idx, QUOT_PER_ELEMENT, QUOT_SLOT_BITS), params, out=w_var)
    enforce([(h.index, 1) for h in h_vars] + [(sum_var.index, neg)], one, [])
    return cs


def _packed_terms(indices, per, bits):
    from .r1cs import LinearCombination

    out = []
    for start in range(0, len(indices), per):
        lc = LinearCombination()
        lc.terms = {idx: 1 << (bits * s) for s, idx in enumerate(indices[start : start + per])}
        out.append(lc)
    return out


def build_circuit(m: int, P: int, params: MimcParams = None) -> ConstraintSystem:
    """Circuit topology for (m, P); carries the (satisfying) all-zero assignment."""
    if m < 1 or P < 1:
        raise ArgumentError("build_circuit needs m >= 1 and P >= 1")
    return _build([[0] * P for _ in range(m)], params, record=True)


def build_assigned(encoded, params: MimcParams = None) -> ConstraintSystem:
    """Circuit with rows recorded and the honest assignment for ``encoded``."""
    return _build(encoded, params, record=True)


def assign_witness(encoded, params: MimcParams = None):
    """(public, witness) for the circuit of shape (len(encoded), len(encoded[0]))."""
    cs = _build(encoded, params, record=False)
    return cs.public_inputs(), cs.witness()


def witness_offsets(m: int, P: int):
    """Start of e (row-major by client), q and rem inside the witness vector."""
    return {"e": 0, "q": m * P, "rem": m * P + P}


def constraint_count(m: int, P: int, params: MimcParams = None) -> int:
    """Exact row count of build_circuit(m, P), from the construction's closed form."""
    params = params or default_params()
    b = rem_bits(m)
    per_param = 1 + (2 * b + 2) + (Q_BITS + 1)
    hashing = (m * packed_length(P, ENC_PER_ELEMENT) + packed_length(P, QUOT_PER_ELEMENT)) * params.constraints_per_call
    return P * per_param + hashing + 1


def public_inputs_to_bytes(values) -> bytes:
    return b"".join((int(v) % R_SCALAR).to_bytes(32, "big") for v in values)


def public_inputs_from_bytes(data: bytes):
    if len(data) % 32 or not data:
        raise ArgumentError("public-input file must hold whole 32-byte elements")
    out = []
    for i in range(0, len(data), 32):
        v = int.from_bytes(data[i : i + 32], "big")
        if v >= R_SCALAR:
            raise ArgumentError(f"public input {i // 32} is not canonical")
        out.append(v)
    return out


def decode_quotients(q, codec=None):
    from .fl.codec import DEFAULT_CODEC

    return (codec or DEFAULT_CODEC).decode(q)


def ceil_log2(m):
    return math.ceil(math.log2(m)) if m > 1 else 0
