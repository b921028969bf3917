"""Deterministic simulated chain with EVM-style gas metering.

Contracts are native state machines driven purely by calldata bytes, so a
transaction log (sender, contract, kind, calldata, gas, status) can be
replayed from genesis to reproduce storage and gas exactly.

Contract kinds
    hashsum   participants' digests are summed in Fr and compared with a claim
    verifier  holds a Groth16 verifying key and checks submitted proofs
    baseline  traditional on-chain aggregation of full weight vectors

Calldata is priced per byte at the nonzero rate by default ("uniform"), which
makes costs depend only on byte counts; ``calldata_mode="content"`` prices
zero bytes at the lower rate instead.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .curve.field import R_SCALAR
from .errors import ArgumentError
from .groth16 import PROOF_BYTES, Proof, VerifyingKey, verify

ADDRESS_BYTES = 20
WORD = 32


@dataclass(frozen=True)
class GasSchedule:
    TX_BASE: int = 21000
    CALLDATA_NONZERO_BYTE: int = 16
    CALLDATA_ZERO_BYTE: int = 4
    SSTORE_NEW: int = 20000
    SSTORE_UPDATE: int = 5000
    SLOAD: int = 2100
    ARITH_ADD: int = 3
    ARITH_MUL: int = 5
    ECADD: int = 150
    ECMUL: int = 6000
    PAIRING_BASE: int = 45000
    PAIRING_PER_PAIR: int = 34000
    CONTRACT_DEPLOY: int = 300000

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value <= 0:
                raise ArgumentError(f"gas constant {name} must be positive")


DEFAULT_SCHEDULE = GasSchedule()


# ---- pure gas functions (shared by contracts and accounting estimates) ----


def calldata_gas(data, schedule=DEFAULT_SCHEDULE, mode="uniform"):
    if isinstance(data, int):  # byte count, uniform pricing only
        return data * schedule.CALLDATA_NONZERO_BYTE
    if mode == "uniform":
        return len(data) * schedule.CALLDATA_NONZERO_BYTE
    if mode == "content":
        zeros = data.count(0)
        return zeros * schedule.CALLDATA_ZERO_BYTE + (len(data) - zeros) * schedule.CALLDATA_NONZERO_BYTE
    raise ArgumentError(f"unknown calldata mode {mode!r}")


def deploy_gas(init_data, schedule=DEFAULT_SCHEDULE, mode="uniform"):
    return schedule.CONTRACT_DEPLOY + calldata_gas(init_data, schedule, mode)


def submit_gas(first_write: bool, schedule=DEFAULT_SCHEDULE):
    s = schedule
    store = s.SSTORE_NEW if first_write else s.SSTORE_UPDATE
    return s.TX_BASE + calldata_gas(WORD, s) + s.SLOAD + s.ARITH_ADD + store


def finalize_gas(schedule=DEFAULT_SCHEDULE):
    s = schedule
    return s.TX_BASE + 2 * s.SLOAD + s.ARITH_ADD


def verify_gas(n_public: int, schedule=DEFAULT_SCHEDULE, calldata=None, mode="uniform"):
    s = schedule
    cd = calldata if calldata is not None else PROOF_BYTES + WORD * n_public
    return (
        s.TX_BASE
        + calldata_gas(cd, s, mode)
        + n_public * (s.ECMUL + s.ECADD)
        + s.PAIRING_BASE
        + 4 * s.PAIRING_PER_PAIR
    )


def revert_gas(calldata, schedule=DEFAULT_SCHEDULE, mode="uniform"):
    return schedule.TX_BASE + calldata_gas(calldata, schedule, mode) + schedule.SLOAD


def vk_bytes_len(n_public: int) -> int:
    return 64 + 3 * 128 + 4 + 64 * (n_public + 1)


def hashsum_init_len(m: int) -> int:
    return m * ADDRESS_BYTES + WORD


def zkdfl_round_gas(m: int, schedule=DEFAULT_SCHEDULE, *, deploy_verifier=True):
    """Gas of one honest round with m clients (deploys included), by component."""
    n_pub = m + 2
    out = {
        "deploy_h": deploy_gas(hashsum_init_len(m), schedule),
        "deploy_p": deploy_gas(vk_bytes_len(n_pub), schedule) if deploy_verifier else 0,
        "submit": sum(submit_gas(i == 0, schedule) for i in range(m)),
        "finalize": finalize_gas(schedule),
        "verify": verify_gas(n_pub, schedule),
    }
    out["total"] = sum(out.values())
    return out


def baseline_client_gas(P: int, schedule=DEFAULT_SCHEDULE):
    s = schedule
    return s.TX_BASE + calldata_gas(WORD * P, s) + P * s.SSTORE_NEW


def baseline_aggregate_gas(m: int, P: int, schedule=DEFAULT_SCHEDULE):
    s = schedule
    return P * (m * (s.SLOAD + s.ARITH_ADD) + s.ARITH_MUL + s.SSTORE_UPDATE)


def baseline_round_gas(m: int, P: int, schedule=DEFAULT_SCHEDULE):
    return m * baseline_client_gas(P, schedule) + baseline_aggregate_gas(m, P, schedule)


# ---- addresses ----


def address_of(name: str) -> str:
    return "0x" + hashlib.sha256(name.encode()).hexdigest()[: 2 * ADDRESS_BYTES]


def _addr_bytes(addr: str) -> bytes:
    raw = bytes.fromhex(addr[2:] if addr.startswith("0x") else addr)
    if len(raw) != ADDRESS_BYTES:
        raise ArgumentError(f"address {addr!r} is not {ADDRESS_BYTES} bytes")
    return raw


def _addr_str(raw: bytes) -> str:
    return "0x" + raw.hex()


# ---- transactions ----


@dataclass
class Receipt:
    index: int
    sender: str
    contract: str
    kind: str
    calldata: bytes
    gas: int
    status: str  # "ok" or "revert"
    result: object = None
    error: str = ""

    @property
    def ok(self):
        return self.status == "ok"

    def to_record(self):
        return {
            "sender": self.sender,
            "contract": self.contract,
            "kind": self.kind,
            "calldata": self.calldata.hex(),
            "gas": self.gas,
            "status": self.status,
        }


class _Revert(Exception):
    pass


class _Contract:
    kind = ""

    def __init__(self, chain, address, init_data):
        self.chain = chain
        self.address = address
        self.init_data = bytes(init_data)
        self.storage = {}

    def call(self, sender, method, calldata):
        fn = getattr(self, "m_" + method, None)
        if fn is None:
            raise _Revert(f"{self.kind} has no method {method!r}")
        return fn(sender, calldata)

    def digest(self):
        h = hashlib.sha256(self.kind.encode() + self.address.encode() + self.init_data)
        for key in sorted(self.storage):
            h.update(key.encode() + b"=" + int(self.storage[key]).to_bytes(32, "big"))
        return h.hexdigest()


class HashSumContract(_Contract):
    """Contract_h: each participant submits its digest once; finalize compares the Fr sum."""

    kind = "hashsum"

    def __init__(self, chain, address, init_data):
        super().__init__(chain, address, init_data)
        body = self.init_data[:-WORD]
        if len(self.init_data) < WORD or len(body) % ADDRESS_BYTES:
            raise _Revert("hashsum init data must be m addresses followed by a 32-byte claim")
        self.participants = [_addr_str(body[i : i + ADDRESS_BYTES]) for i in range(0, len(body), ADDRESS_BYTES)]
        if len(set(self.participants)) != len(self.participants):
            raise _Revert("duplicate participant address")
        self.storage["claimed"] = int.from_bytes(self.init_data[-WORD:], "big") % R_SCALAR
        self.storage["finalized"] = 0
        self.storage["count"] = 0

    def m_submit(self, sender, calldata):
        s = self.chain.schedule
        if len(calldata) != WORD:
            raise _Revert("submit expects one 32-byte field element")
        if self.storage["finalized"]:
            raise _Revert("already finalized")
        if sender not in self.participants:
            raise _Revert(f"{sender} is not a participant")
        key = "sub:" + sender
        if key in self.storage:
            raise _Revert(f"{sender} already submitted")
        h = int.from_bytes(calldata, "big") % R_SCALAR
        first = "sum" not in self.storage
        self.storage["sum"] = (self.storage.get("sum", 0) + h) % R_SCALAR
        self.storage[key] = h
        self.storage["count"] += 1
        gas = s.TX_BASE + calldata_gas(calldata, s, self.chain.calldata_mode) + s.SLOAD + s.ARITH_ADD
        gas += s.SSTORE_NEW if first else s.SSTORE_UPDATE
        return gas, True

    def m_finalize(self, sender, calldata):
        if self.storage["finalized"]:
            raise _Revert("already finalized")
        if self.storage["count"] != len(self.participants):
            raise _Revert(f"{len(self.participants) - self.storage['count']} submissions missing")
        self.storage["finalized"] = 1
        ok = self.storage.get("sum", 0) == self.storage["claimed"]
        self.storage["result"] = int(ok)
        s = self.chain.schedule
        return s.TX_BASE + calldata_gas(calldata, s, self.chain.calldata_mode) + 2 * s.SLOAD + s.ARITH_ADD, ok

    @property
    def running_sum(self):
        return self.storage.get("sum", 0)


class VerifierContract(_Contract):
    """Contract_p: verifies Groth16 proofs against the stored key."""

    kind = "verifier"

    def __init__(self, chain, address, init_data):
        super().__init__(chain, address, init_data)
        try:
            self.vk = VerifyingKey.from_bytes(self.init_data)
        except ArgumentError as exc:
            raise _Revert(f"bad verifying key: {exc}") from None
        if not all(pt.is_on_curve() for pt in [self.vk.alpha_g1, *self.vk.ic]):
            raise _Revert("verifying key has an off-curve G1 point")
        self.storage["accepted"] = 0
        self.storage["checks"] = 0
        self.public_inputs = []

    def m_verify(self, sender, calldata):
        n = self.vk.num_public
        if len(calldata) != PROOF_BYTES + WORD * n:
            raise _Revert(f"expected a proof and {n} public inputs")
        pub = [int.from_bytes(calldata[PROOF_BYTES + WORD * i : PROOF_BYTES + WORD * (i + 1)], "big") for i in range(n)]
        try:
            proof = Proof.from_bytes(calldata[:PROOF_BYTES])
            ok = all(x < R_SCALAR for x in pub) and verify(self.vk, pub, proof)
        except ArgumentError:
            ok = False  # malformed points: a rejection, not a revert
        self.storage["checks"] += 1
        if ok:
            self.storage["accepted"] = 1
            self.public_inputs = pub
            for i, x in enumerate(pub):
                self.storage[f"pub:{i}"] = x
        s = self.chain.schedule
        gas = verify_gas(n, s, calldata, self.chain.calldata_mode)
        return gas, ok


class BaselineContract(_Contract):
    """Traditional DFL: clients upload full vectors, the contract averages on-chain.

    Init data is (m, P) as two 4-byte integers; empty init data opens a pool
    whose P is fixed by the first upload and whose m is the upload count at
    aggregation time.
    """

    kind = "baseline"

    def __init__(self, chain, address, init_data):
        super().__init__(chain, address, init_data)
        if len(self.init_data) not in (0, 8):
            raise _Revert("baseline init data is empty or (m, P) as two 4-byte integers")
        self.m = self.P = None
        if self.init_data:
            self.m = int.from_bytes(self.init_data[:4], "big")
            self.P = int.from_bytes(self.init_data[4:], "big")
            if self.m < 1 or self.P < 1:
                raise _Revert("baseline needs m >= 1 and P >= 1")
        self.uploads = {}
        self.aggregate = None

    def m_upload(self, sender, calldata):
        if not calldata or len(calldata) % WORD or (self.P is not None and len(calldata) != WORD * self.P):
            raise _Revert(f"upload expects {self.P or 'P'} 32-byte words")
        if self.aggregate is not None:
            raise _Revert("already aggregated")
        if sender in self.uploads:
            raise _Revert(f"{sender} already uploaded")
        if self.m is not None and len(self.uploads) >= self.m:
            raise _Revert("all uploads received")
        self.P = len(calldata) // WORD
        vec = [int.from_bytes(calldata[i : i + WORD], "big") for i in range(0, len(calldata), WORD)]
        self.uploads[sender] = vec
        for j, v in enumerate(vec):
            self.storage[f"w:{len(self.uploads) - 1}:{j}"] = v
        s = self.chain.schedule
        return s.TX_BASE + calldata_gas(calldata, s) + self.P * s.SSTORE_NEW, True

    def m_aggregate(self, sender, calldata):
        m = len(self.uploads)
        if m == 0 or (self.m is not None and m != self.m):
            raise _Revert("uploads missing")
        if self.aggregate is not None:
            raise _Revert("already aggregated")
        vecs = list(self.uploads.values())
        agg = [sum(v[j] for v in vecs) // m for j in range(self.P)]
        for j, v in enumerate(agg):
            self.storage[f"agg:{j}"] = v
        self.aggregate = agg
        return baseline_aggregate_gas(m, self.P, self.chain.schedule), agg


_KINDS = {c.kind: c for c in (HashSumContract, VerifierContract, BaselineContract)}


class SimChain:
    """Sequential transaction processor with per-account and per-contract gas totals."""

    def __init__(self, schedule: GasSchedule = DEFAULT_SCHEDULE, calldata_mode="uniform"):
        if calldata_mode not in ("uniform", "content"):
            raise ArgumentError(f"unknown calldata mode {calldata_mode!r}")
        self.schedule = schedule
        self.calldata_mode = calldata_mode
        self.log: list[Receipt] = []
        self.contracts: dict[str, _Contract] = {}
        self.gas_by_account: dict[str, int] = {}
        self.gas_by_contract: dict[str, int] = {}
        self._nonce = 0

    # -- core --

    def _record(self, sender, contract, kind, calldata, gas, status, result=None, error=""):
        r = Receipt(len(self.log), sender, contract, kind, bytes(calldata), gas, status, result, error)
        self.log.append(r)
        self.gas_by_account[sender] = self.gas_by_account.get(sender, 0) + gas
        if contract:
            self.gas_by_contract[contract] = self.gas_by_contract.get(contract, 0) + gas
        return r

    def deploy(self, kind: str, init_data: bytes = b"", sender: str = "deployer") -> Receipt:
        if kind not in _KINDS:
            raise ArgumentError(f"unknown contract kind {kind!r}")
        address = address_of(f"contract:{self._nonce}")
        self._nonce += 1
        gas = deploy_gas(bytes(init_data), self.schedule, self.calldata_mode)
        try:
            contract = _KINDS[kind](self, address, init_data)
        except _Revert as exc:
            return self._record(sender, address, "deploy:" + kind, init_data, gas, "revert", error=str(exc))
        self.contracts[address] = contract
        return self._record(sender, address, "deploy:" + kind, init_data, gas, "ok", result=address)

    def call(self, sender: str, address: str, method: str, calldata: bytes = b"") -> Receipt:
        contract = self.contracts.get(address)
        calldata = bytes(calldata)
        if contract is None:
            gas = revert_gas(calldata, self.schedule, self.calldata_mode)
            return self._record(sender, address, method, calldata, gas, "revert", error="no contract at address")
        try:
            gas, result = contract.call(sender, method, calldata)
        except _Revert as exc:
            gas = revert_gas(calldata, self.schedule, self.calldata_mode)
            return self._record(sender, address, method, calldata, gas, "revert", error=str(exc))
        return self._record(sender, address, method, calldata, gas, "ok", result=result)

    @property
    def total_gas(self):
        return sum(r.gas for r in self.log)

    def state_hash(self) -> str:
        h = hashlib.sha256()
        for addr in sorted(self.contracts):
            h.update(self.contracts[addr].digest().encode())
        for acct in sorted(self.gas_by_account):
            h.update(f"{acct}:{self.gas_by_account[acct]}".encode())
        h.update(str(self.total_gas).encode())
        return h.hexdigest()

    # -- log export / replay --

    def export_log(self, fh_or_path):
        lines = [json.dumps(r.to_record(), sort_keys=True) for r in self.log]
        text = "\n".join(lines) + ("\n" if lines else "")
        if hasattr(fh_or_path, "write"):
            fh_or_path.write(text)
        else:
            with open(fh_or_path, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def replay(cls, source, schedule: GasSchedule = DEFAULT_SCHEDULE, calldata_mode="uniform") -> "SimChain":
        """Re-apply an exported log from genesis; raises if any receipt differs."""
        if hasattr(source, "read"):
            text = source.read()
        elif isinstance(source, str) and "\n" not in source and not source.lstrip().startswith("{"):
            with open(source) as fh:
                text = fh.read()
        else:
            text = source
        chain = cls(schedule, calldata_mode)
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            data = bytes.fromhex(rec["calldata"])
            if rec["kind"].startswith("deploy:"):
                r = chain.deploy(rec["kind"][len("deploy:") :], data, rec["sender"])
            else:
                r = chain.call(rec["sender"], rec["contract"], rec["kind"], data)
            if r.contract != rec["contract"] or r.gas != rec["gas"] or r.status != rec["status"]:
                raise ArgumentError(f"replay diverged at log line {lineno}")
        return chain


# ---- protocol-level helpers ----


def deploy_hashsum(chain: SimChain, participants, claimed_sum: int, sender="server") -> Receipt:
    init = b"".join(_addr_bytes(a) for a in participants) + (int(claimed_sum) % R_SCALAR).to_bytes(WORD, "big")
    return chain.deploy("hashsum", init, sender)


def deploy_verifier(chain: SimChain, vk: VerifyingKey, sender="server") -> Receipt:
    return chain.deploy("verifier", vk.to_bytes(), sender)


def submit_hash(chain: SimChain, contract_h: str, sender: str, h: int) -> Receipt:
    return chain.call(sender, contract_h, "submit", (int(h) % R_SCALAR).to_bytes(WORD, "big"))


def finalize_hash_sum(chain: SimChain, contract_h: str, sender="server") -> Receipt:
    return chain.call(sender, contract_h, "finalize", b"")


def proof_calldata(public, proof: Proof) -> bytes:
    return proof.to_bytes() + b"".join(int(x).to_bytes(WORD, "big") for x in public)


def verify_proof_onchain(chain: SimChain, contract_p: str, sender: str, public, proof: Proof) -> Receipt:
    return chain.call(sender, contract_p, "verify", proof_calldata(public, proof))


@dataclass
class BaselineResult:
    aggregate: list
    total_gas: int
    deploy_gas: int
    receipts: list = field(default_factory=list)


def baseline_round(chain: SimChain, weights, sender_prefix="client") -> BaselineResult:
    """Traditional DFL round: m uploads of P words, then one on-chain averaging pass.

    The reported total covers uploads and aggregation; the contract deploy is
    reported separately.
    """
    weights = [[int(v) for v in row] for row in weights]
    if not weights or not weights[0]:
        raise ArgumentError("baseline needs m >= 1 vectors of length P >= 1")
    m, P = len(weights), len(weights[0])
    if any(len(row) != P for row in weights):
        raise ArgumentError("weight vectors differ in length")
    dep = chain.deploy("baseline", m.to_bytes(4, "big") + P.to_bytes(4, "big"), "server")
    receipts = []
    for k, row in enumerate(weights):
        data = b"".join(v.to_bytes(WORD, "big") for v in row)
        receipts.append(chain.call(address_of(f"{sender_prefix}:{k}"), dep.contract, "upload", data))
    agg = chain.call("server", dep.contract, "aggregate", b"")
    receipts.append(agg)
    if not all(r.ok for r in receipts):
        raise ArgumentError("baseline round reverted: " + "; ".join(r.error for r in receipts if not r.ok))
    return BaselineResult(agg.result, sum(r.gas for r in receipts), dep.gas, receipts)
