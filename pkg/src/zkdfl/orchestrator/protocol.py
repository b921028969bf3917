"""One verifiable aggregation round, end to end.

Order of events: select clients, train locally, encode, hash (client side),
server builds the witness and proves, contracts are deployed (verifier reused
per circuit shape), every client checks its own digest in the public list and
submits it to the hash-sum contract, the claimed sum is finalized, the proof
is verified on chain, and finally each client re-hashes the broadcast
quotient vector against the public w_hash before adopting it.

Any failed check raises RoundAborted naming the stage and the party.
"""

from __future__ import annotations

import random
import resource
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .. import agg_circuit, groth16, ledger
from ..curve.field import R_SCALAR
from ..errors import ArgumentError, RoundAborted, UnsatisfiedCircuit
from ..fl import DEFAULT_CODEC, FixedPointCodec, MlpModel, TrainConfig, client_update, model_layers, param_count
from ..fl.aggregate import fed_avg, num_selected, select_clients
from ..fl.model import unflatten
from ..mimc7 import default_params, hash_encoded, hash_quotients
from ..qap import Qap

TAMPER_POINTS = (
    "client_weights",  # server alters an encoded client vector after its digest is public
    "published_hash",  # server publishes a wrong H^k
    "claimed_sum",  # server claims a wrong H_sum to the hash-sum contract
    "proof_bytes",  # proof corrupted in transit
    "public_w_hash",  # server publishes a wrong w_hash
    "broadcast_quotients",  # server broadcasts a different averaged vector
)
EXTRA_TAMPERS = ("omit_client",)


@dataclass
class RoundConfig:
    clients: int = 10  # K
    fraction: float = 1.0  # C
    model: str = "model1"
    train: TrainConfig = field(default_factory=TrainConfig)
    seed: int = 0
    codec: FixedPointCodec = DEFAULT_CODEC
    prove: bool = True  # False: accounting mode, no setup/prove, verifier gas from the schedule
    layers: tuple = None  # explicit architecture, overrides ``model``

    def __post_init__(self):
        if self.clients < 1:
            raise ArgumentError("need at least one client")
        if not 0 < self.fraction <= 1:
            raise ArgumentError("client fraction must lie in (0, 1]")
        if self.layers is None:
            model_layers(self.model)  # validates the name

    @property
    def m(self):
        return num_selected(self.clients, self.fraction)

    def architecture(self):
        return list(self.layers) if self.layers is not None else model_layers(self.model)


@dataclass
class Tamper:
    point: str
    seed: int = 0

    def __post_init__(self):
        if self.point not in TAMPER_POINTS + EXTRA_TAMPERS:
            raise ArgumentError(f"unknown tamper point {self.point!r}")
        self.rng = random.Random(self.seed)

    def delta(self, bound=1 << 20):
        return self.rng.randrange(1, bound) * self.rng.choice((1, -1))


@dataclass
class RoundRecord:
    round_index: int
    model: str
    m: int
    P: int
    selected: list
    accuracy: float
    constraints: int
    prove_ms: float
    setup_ms: float
    peak_memory_mb: float
    gas: dict
    gas_baseline: int
    verified: dict
    gas_estimated: bool = False
    public: list = field(default_factory=list, repr=False)
    proof: groth16.Proof = field(default=None, repr=False)
    vk: groth16.VerifyingKey = field(default=None, repr=False)
    global_weights: np.ndarray = field(default=None, repr=False)
    client_weights: list = field(default_factory=list, repr=False)
    float_average: np.ndarray = field(default=None, repr=False)

    @property
    def all_verified(self):
        return all(v is not False for v in self.verified.values())


class Session:
    """State that persists across rounds: global model, keys per shape, chain, contracts."""

    def __init__(self, layers, chain: ledger.SimChain = None, seed=0):
        self.layers = list(layers)
        self.model = MlpModel.init(self.layers, seed)
        self.chain = chain if chain is not None else ledger.SimChain()
        self.keys = {}  # (m, P) -> (pk, vk)
        self.verifiers = {}  # (m, P) -> contract address
        self.round_index = 0
        self.seed = seed

    def keys_for(self, m, P, seed):
        if (m, P) not in self.keys:
            cs = agg_circuit.build_circuit(m, P)
            qap = Qap(cs)
            del cs
            self.keys[(m, P)] = groth16.setup(qap, seed=seed)
        return self.keys[(m, P)]


def client_address(k: int) -> str:
    return ledger.address_of(f"client:{k}")


def _abort(stage, party, detail):
    raise RoundAborted(stage, party, detail)


def _peak_mb():
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def _train_all(model, clients, selected, cfg: TrainConfig):
    def one(k):
        return client_update(model, clients[k], cfg)

    workers = max(1, min(len(selected), 8))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, selected))


def run_round(
    cfg: RoundConfig,
    clients,
    chain: ledger.SimChain = None,
    *,
    session: Session = None,
    test=None,
    tamper: Tamper = None,
) -> RoundRecord:
    """Execute one protocol round; returns the record or raises RoundAborted."""
    layers = cfg.architecture()
    if session is None:
        session = Session(layers, chain, seed=cfg.seed)
    elif chain is not None and chain is not session.chain:
        raise ArgumentError("session already owns a different chain")
    if session.layers != layers:
        raise ArgumentError("session architecture differs from the round configuration")
    chain = session.chain
    if len(clients) != cfg.clients:
        raise ArgumentError(f"expected {cfg.clients} client datasets, got {len(clients)}")
    params = default_params()
    P = param_count(layers)
    rnd = session.round_index
    rseed = (cfg.seed * 1_000_003 + rnd) & 0xFFFFFFFF
    first_log = len(chain.log)

    # 1-3: selection, local training, encoding and client-side digests
    selected = select_clients(cfg.clients, cfg.fraction, rseed)
    m = len(selected)
    tcfg = replace(cfg.train, seed=rseed)
    updates = _train_all(session.model, clients, selected, tcfg)
    encoded = [cfg.codec.encode(w) for w in updates]
    own_hash = [hash_encoded(row, params) for row in encoded]

    # 4: server statement and witness
    public, q, _ = agg_circuit.statement_values(encoded, params)
    published = list(public)
    server_encoded = encoded
    if tamper and tamper.point == "client_weights":
        k = tamper.rng.randrange(m)
        j = tamper.rng.randrange(P)
        server_encoded = [list(row) for row in encoded]
        server_encoded[k][j] += tamper.delta()

    constraints = agg_circuit.constraint_count(m, P, params)
    proof = vk = None
    prove_ms = setup_ms = 0.0
    verified = {}
    if cfg.prove:
        t0 = time.perf_counter()
        pk, vk = session.keys_for(m, P, seed=rseed ^ 0xC125)
        setup_ms = (time.perf_counter() - t0) * 1000
        _, witness = agg_circuit.assign_witness(server_encoded, params)
        if tamper and tamper.point == "omit_client":
            k = tamper.rng.randrange(m)
            off = agg_circuit.witness_offsets(m, P)
            rest = [row for i, row in enumerate(encoded) if i != k]
            q_bad, rem_bad = agg_circuit.aggregate_encoded(rest) if rest else ([0] * P, [0] * P)
            witness[off["q"] : off["q"] + P] = q_bad
            witness[off["rem"] : off["rem"] + P] = [r % R_SCALAR for r in rem_bad]
        t0 = time.perf_counter()
        try:
            proof = groth16.prove(pk, public, witness, seed=rseed ^ 0x9F00F)
        except UnsatisfiedCircuit as exc:
            _abort("prove", "server", f"assignment violates constraint {exc.index}; proving refused")
        prove_ms = (time.perf_counter() - t0) * 1000
        del witness
        verified["prove"] = True

    # 5: publication (the server may lie here)
    claimed_sum = public[m + 1]
    if tamper and tamper.point == "published_hash":
        k = tamper.rng.randrange(m)
        published[k] = (published[k] + tamper.delta()) % R_SCALAR
    if tamper and tamper.point == "public_w_hash":
        published[m] = (published[m] + tamper.delta()) % R_SCALAR
    if tamper and tamper.point == "claimed_sum":
        claimed_sum = (claimed_sum + tamper.delta()) % R_SCALAR
    if tamper and tamper.point == "proof_bytes" and proof is not None:
        raw = bytearray(proof.to_bytes())
        raw[tamper.rng.randrange(len(raw))] ^= 1 << tamper.rng.randrange(8)
        proof_bytes = bytes(raw)
    else:
        proof_bytes = proof.to_bytes() if proof is not None else None

    # 6: contracts
    addrs = [client_address(k) for k in selected]
    rh = ledger.deploy_hashsum(chain, addrs, claimed_sum)
    if not rh.ok:
        _abort("deploy", "server", rh.error)
    p_addr = None
    if cfg.prove:
        p_addr = session.verifiers.get((m, P))
        if p_addr is None:
            rp = ledger.deploy_verifier(chain, vk)
            if not rp.ok:
                _abort("deploy", "server", rp.error)
            p_addr = session.verifiers[(m, P)] = rp.contract

    # 7: clients check their own digest at their index, then submit it
    for i, k in enumerate(selected):
        if published[i] != own_hash[i]:
            _abort("client_hash_check", f"client {k}", f"published H^{i + 1} differs from the client's own digest")
        r = ledger.submit_hash(chain, rh.contract, addrs[i], own_hash[i])
        if not r.ok:
            _abort("contract_h", f"client {k}", r.error)
    fin = ledger.finalize_hash_sum(chain, rh.contract)
    if not fin.ok or not fin.result:
        _abort("contract_h", "contract_h", "sum of submitted digests differs from the claimed H_sum")
    verified["contract_h"] = True

    # 8: proof verification on chain
    if cfg.prove:
        calldata = proof_bytes + b"".join(int(x).to_bytes(32, "big") for x in published)
        rv = chain.call(addrs[0], p_addr, "verify", calldata)
        if not rv.ok or not rv.result:
            _abort("contract_p", "contract_p", rv.error or "proof rejected")
        verified["contract_p"] = True
    else:
        verified["contract_p"] = None

    # 9: broadcast and client-side adoption
    broadcast = list(q)
    if tamper and tamper.point == "broadcast_quotients":
        j = tamper.rng.randrange(P)
        broadcast[j] = max(0, broadcast[j] + tamper.delta())
        if broadcast[j] == q[j]:
            broadcast[j] += 1
    adopted = None
    for i, k in enumerate(selected):
        if len(broadcast) != P or any(not 0 <= v < (1 << agg_circuit.Q_BITS) for v in broadcast):
            _abort("client_w_hash", f"client {k}", "broadcast vector has the wrong shape or range")
        if hash_quotients(broadcast, params) != published[m]:
            _abort("client_w_hash", f"client {k}", "digest of the broadcast vector differs from w_hash")
        w_next = agg_circuit.decode_quotients(broadcast, cfg.codec)
        if adopted is not None and not np.array_equal(adopted, w_next):
            _abort("client_w_hash", f"client {k}", "clients decoded different global models")
        adopted = w_next
    verified["client_w_hash"] = True
    session.model = unflatten(adopted, layers)
    session.round_index += 1

    # 10: bookkeeping
    receipts = chain.log[first_log:]
    gas = {"deploy": 0, "contract_h": 0, "contract_p": 0}
    for r in receipts:
        if r.kind.startswith("deploy:"):
            gas["deploy"] += r.gas
        elif r.contract == rh.contract:
            gas["contract_h"] += r.gas
        else:
            gas["contract_p"] += r.gas
    estimated = not cfg.prove
    if estimated:
        est = ledger.zkdfl_round_gas(m, chain.schedule)
        if (m, P) not in session.verifiers:
            gas["deploy"] += est["deploy_p"]
            session.verifiers[(m, P)] = None
        gas["contract_p"] += est["verify"]
    gas["total"] = gas["deploy"] + gas["contract_h"] + gas["contract_p"]

    acc = float("nan")
    if test is not None and len(test):
        acc = session.model.accuracy(test.x, test.y)
    sizes = [len(clients[k]) for k in selected]
    return RoundRecord(
        round_index=rnd,
        model=cfg.model if cfg.layers is None else "custom",
        m=m,
        P=P,
        selected=selected,
        accuracy=acc,
        constraints=constraints,
        prove_ms=prove_ms,
        setup_ms=setup_ms,
        peak_memory_mb=_peak_mb(),
        gas=gas,
        gas_baseline=ledger.baseline_round_gas(m, P, chain.schedule),
        verified=verified,
        gas_estimated=estimated,
        public=list(published),
        proof=proof,
        vk=vk,
        global_weights=adopted,
        client_weights=updates,
        float_average=fed_avg(updates, sizes),
    )
