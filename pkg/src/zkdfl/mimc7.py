"""MiMC7 cipher and hash, natively and as R1CS gadgets.

Round function F_i(x) = (x + k + c_i)^7 with c_0 = 0; encryption composes all
rounds and adds the key once more at the end. Vectors are hashed with the
Miyaguchi-Preneel chain s' = s + x + E_s(x) starting from s = 0.

Each gadget round costs four multiplications (t^2, t^4, t^6, t^7). The final
multiplication of an invocation writes straight into the caller's output
variable, so chaining never needs extra copy constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .curve.field import R_SCALAR
from .errors import ArgumentError, RangeError
from .r1cs import ConstraintSystem, LinearCombination, Variable

DEFAULT_ROUNDS = 91
DEFAULT_SEED = 0x6D696D6337  # ascii "mimc7"
CONSTRAINTS_PER_ROUND = 4

_M64 = (1 << 64) - 1


def splitmix64(seed):
    """Infinite SplitMix64 output stream."""
    state = seed & _M64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        yield z ^ (z >> 31)


def round_constants(seed: int = DEFAULT_SEED, rounds: int = DEFAULT_ROUNDS):
    if rounds < 1:
        raise ArgumentError("MiMC7 needs at least one round")
    stream = splitmix64(seed)
    out = [0]
    for _ in range(rounds - 1):
        u = [next(stream) for _ in range(4)]
        out.append((u[0] | u[1] << 64 | u[2] << 128 | u[3] << 192) % R_SCALAR)
    return out


@dataclass(frozen=True)
class MimcParams:
    rounds: int
    constants: tuple
    seed: int = DEFAULT_SEED

    @classmethod
    def create(cls, seed: int = DEFAULT_SEED, rounds: int = DEFAULT_ROUNDS):
        return cls(rounds, tuple(round_constants(seed, rounds)), seed)

    def to_bytes(self) -> bytes:
        return b"".join(c.to_bytes(32, "big") for c in self.constants)

    @property
    def constraints_per_call(self):
        return CONSTRAINTS_PER_ROUND * self.rounds


@lru_cache(maxsize=None)
def default_params() -> MimcParams:
    return MimcParams.create()


# ---- native ----


def _rounds_native(x, k, consts):
    r = R_SCALAR
    for c in consts:
        t = (x + k + c) % r
        t2 = t * t % r
        t4 = t2 * t2 % r
        x = t4 * t2 % r * t % r
    return x


def mimc7_encrypt(x, k, params: MimcParams = None) -> int:
    params = params or default_params()
    x = int(x) % R_SCALAR
    k = int(k) % R_SCALAR
    return (_rounds_native(x, k, params.constants) + k) % R_SCALAR


def mimc7_hash_vec(xs, params: MimcParams = None) -> int:
    params = params or default_params()
    xs = list(xs)
    if not xs:
        raise ArgumentError("cannot hash an empty vector")
    consts = params.constants
    r = R_SCALAR
    s = 0
    for x in xs:
        x = int(x) % r
        s = (s + x + _rounds_native(x, s, consts) + s) % r
    return s


# ---- packing ----

ENC_SLOT_BITS = 64
ENC_PER_ELEMENT = 3
QUOT_SLOT_BITS = 48
QUOT_PER_ELEMENT = 5


def pack(values, per=ENC_PER_ELEMENT, bits=ENC_SLOT_BITS):
    """Pack non-negative integers < 2^bits, ``per`` to a field element, zero-padded."""
    if per * bits >= 254:
        raise ArgumentError("packed element would overflow the field")
    values = [int(v) for v in values]
    limit = 1 << bits
    out = []
    for start in range(0, len(values), per):
        acc = 0
        for s, v in enumerate(values[start : start + per]):
            if not 0 <= v < limit:
                raise RangeError(f"value {v} does not fit a {bits}-bit slot", start + s)
            acc |= v << (bits * s)
        out.append(acc)
    return out


def packed_length(n, per=ENC_PER_ELEMENT):
    return -(-n // per)


def hash_encoded(encoded, params=None):
    """Digest of a client's encoded parameter vector (3 per element)."""
    return mimc7_hash_vec(pack(encoded, ENC_PER_ELEMENT, ENC_SLOT_BITS), params)


def hash_quotients(q, params=None):
    """Digest of the aggregated quotient vector (5 per element, 48-bit slots)."""
    return mimc7_hash_vec(pack(q, QUOT_PER_ELEMENT, QUOT_SLOT_BITS), params)


# ---- gadgets ----


def _terms(x):
    if isinstance(x, Variable):
        return {x.index: 1}
    return dict(LinearCombination.of(x).terms)


def _merge(*parts):
    out = {}
    for coef, terms in parts:
        for idx, c in terms.items():
            v = (out.get(idx, 0) + coef * c) % R_SCALAR
            if v:
                out[idx] = v
            else:
                out.pop(idx, None)
    return out


def _encrypt_into(cs: ConstraintSystem, x_terms, x_val, k_terms, k_val, out_var, offset_terms, consts):
    """Constrain out_var = rounds(x, k) + offset, where offset is linear.

    Returns nothing; ``out_var`` must already be allocated with the right value.
    """
    r = R_SCALAR
    rec = cs.record
    alloc = cs.alloc_witness
    enforce = cs.enforce_terms
    base = _merge((1, x_terms), (1, k_terms))
    cur_val = x_val
    cur_idx = None
    last = len(consts) - 1
    for i, c in enumerate(consts):
        if cur_idx is None:
            t_terms = dict(base)
        else:
            t_terms = _merge((1, {cur_idx: 1}), (1, k_terms))
        if c:
            t_terms[0] = (t_terms.get(0, 0) + c) % r
            if not t_terms[0]:
                del t_terms[0]
        t = (cur_val + k_val + c) % r
        t2 = t * t % r
        t4 = t2 * t2 % r
        t6 = t4 * t2 % r
        t7 = t6 * t % r
        v2 = alloc(t2).index
        v4 = alloc(t4).index
        v6 = alloc(t6).index
        tl = list(t_terms.items()) if rec else None
        enforce(tl, tl, [(v2, 1)])
        enforce([(v2, 1)], [(v2, 1)], [(v4, 1)])
        enforce([(v4, 1)], [(v2, 1)], [(v6, 1)])
        if i == last:
            c_terms = _merge((1, {out_var.index: 1}), (-1, offset_terms)) if rec else None
            enforce([(v6, 1)], tl, list(c_terms.items()) if rec else None)
        else:
            v7 = alloc(t7).index
            enforce([(v6, 1)], tl, [(v7, 1)])
            cur_idx = v7
        cur_val = t7
    return cur_val


def mimc7_gadget(cs: ConstraintSystem, x, k, params: MimcParams = None) -> Variable:
    """Allocate and return a variable constrained to mimc7_encrypt(x, k)."""
    params = params or default_params()
    xv, kv = cs.value(x), cs.value(k)
    out = cs.alloc_witness(mimc7_encrypt(xv, kv, params))
    kt = _terms(k)
    _encrypt_into(cs, _terms(x), xv, kt, kv, out, kt, params.constants)
    return out


def mimc7_hash_gadget(cs: ConstraintSystem, xs, params: MimcParams = None, out: Variable = None) -> Variable:
    """Chained hash of a list of variables / linear combinations.

    If ``out`` is given (e.g. a public input) the final state is written into
    it instead of a fresh witness, costing no extra constraint.
    """
    params = params or default_params()
    xs = list(xs)
    if not xs:
        raise ArgumentError("cannot hash an empty vector")
    r = R_SCALAR
    consts = params.constants
    values = cs.values
    s_terms, s_val = {}, 0
    for pos, x in enumerate(xs):
        x_terms = _terms(x)
        x_val = sum(c * values[i] for i, c in x_terms.items()) % r
        new_val = (2 * s_val + x_val + _rounds_native(x_val, s_val, consts)) % r
        if pos == len(xs) - 1 and out is not None:
            nxt = out  # the caller's value stands; a mismatch shows up as a failing row
        else:
            nxt = cs.alloc_witness(new_val)
        offset = _merge((2, s_terms), (1, x_terms))
        _encrypt_into(cs, x_terms, x_val, s_terms, s_val, nxt, offset, consts)
        s_terms, s_val = {nxt.index: 1}, new_val
    return nxt


def gadget_constraints(n_elements: int, params: MimcParams = None) -> int:
    params = params or default_params()
    return n_elements * params.constraints_per_call
