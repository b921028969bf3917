"""Simulated chain, gas schedule, Contract_h, Contract_p and the baseline contract."""

import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zkdfl import groth16, ledger
from zkdfl.curve.field import R_SCALAR
from zkdfl.errors import ArgumentError
from zkdfl.ledger import DEFAULT_SCHEDULE as S
from zkdfl.ledger import SimChain
from zkdfl.qap import to_qap
from zkdfl.r1cs import ConstraintSystem

PEOPLE = [ledger.address_of(f"client:{k}") for k in range(10)]


def identity_statement(n_public):
    """n public inputs each constrained by x * 1 = x; one witness to keep the QAP non-trivial."""
    cs = ConstraintSystem()
    xs = [cs.alloc_public(i + 1) for i in range(n_public)]
    w = cs.alloc_witness(7)
    for x in xs:
        cs.enforce(x, cs.one, x)
    cs.enforce(w, w, 49)
    return to_qap(cs)


@pytest.fixture(scope="module")
def m10_proof():
    n_pub = 12
    pk, vk = groth16.setup(identity_statement(n_pub), seed=8)
    public = list(range(1, n_pub + 1))
    return vk, public, groth16.prove(pk, public, [7], seed=9)


# ---- schedule ----


def test_schedule_positive():
    with pytest.raises(ArgumentError):
        ledger.GasSchedule(SLOAD=0)


def test_calldata_modes():
    assert ledger.calldata_gas(b"\x00\x01") == 32
    assert ledger.calldata_gas(b"\x00\x01", mode="content") == 4 + 16
    with pytest.raises(ArgumentError):
        ledger.calldata_gas(b"", mode="other")


# ---- deploy ----


def test_empty_deploy_costs_contract_constant():
    chain = SimChain()
    assert chain.deploy("baseline", b"").gas == 300000


def test_two_deploys_get_distinct_addresses():
    chain = SimChain()
    a = ledger.deploy_hashsum(chain, PEOPLE[:2], 0)
    b = ledger.deploy_hashsum(chain, PEOPLE[:2], 0)
    assert a.ok and b.ok and a.contract != b.contract


def test_verifier_deploy_gas_is_byte_count_arithmetic(m10_proof):
    vk, _, _ = m10_proof
    chain = SimChain()
    r = ledger.deploy_verifier(chain, vk)
    raw = vk.to_bytes()
    assert len(raw) == ledger.vk_bytes_len(12)
    assert r.gas == 300000 + 16 * len(raw)


def test_verifier_rejects_bad_key_bytes():
    chain = SimChain()
    r = chain.deploy("verifier", b"\x01" * 100)
    assert not r.ok and r.gas == 300000 + 1600


# ---- Contract_h ----


def hashsum_round(hashes, claimed, chain=None):
    chain = chain or SimChain()
    dep = ledger.deploy_hashsum(chain, PEOPLE[: len(hashes)], claimed)
    subs = [ledger.submit_hash(chain, dep.contract, PEOPLE[k], h) for k, h in enumerate(hashes)]
    return chain, dep.contract, subs


def test_first_submission_of_zero():
    chain, addr, subs = hashsum_round([0], 0)
    assert subs[0].ok and chain.contracts[addr].running_sum == 0
    assert subs[0].gas == ledger.submit_gas(True)


def test_duplicate_submission_reverts_and_keeps_sum():
    chain, addr, _ = hashsum_round([5, 6], 11)
    before = chain.contracts[addr].running_sum
    dup = ledger.submit_hash(chain, addr, PEOPLE[0], 99)
    assert not dup.ok and dup.gas > 0
    assert dup.gas == ledger.revert_gas(32)
    assert chain.contracts[addr].running_sum == before == 11


def test_unknown_sender_reverts():
    chain, addr, _ = hashsum_round([5], 5)
    assert not ledger.submit_hash(chain, addr, ledger.address_of("mallory"), 1).ok


def test_m10_sum_matches_offchain_oracle():
    rng = random.Random(30)
    hs = [rng.randrange(R_SCALAR) for _ in range(10)]
    chain, addr, subs = hashsum_round(hs, sum(hs) % R_SCALAR)
    assert all(s.ok for s in subs)
    assert chain.contracts[addr].running_sum == sum(hs) % R_SCALAR
    assert [s.gas for s in subs] == [ledger.submit_gas(True)] + [ledger.submit_gas(False)] * 9


def test_finalize_outcomes():
    hs = [3, 4, 5]
    chain, addr, _ = hashsum_round(hs, 12)
    r = ledger.finalize_hash_sum(chain, addr)
    assert r.ok and r.result is True and r.gas == ledger.finalize_gas()
    assert not ledger.finalize_hash_sum(chain, addr).ok
    assert not ledger.submit_hash(chain, addr, PEOPLE[0], 1).ok

    chain, addr, _ = hashsum_round([3, 4 + 1, 5], 12)
    r = ledger.finalize_hash_sum(chain, addr)
    assert r.ok and r.result is False

    chain, addr, _ = hashsum_round([3, 4], 12)
    chain.contracts[addr].participants.append(PEOPLE[9])
    assert not ledger.finalize_hash_sum(chain, addr).ok


def test_finalize_before_all_submissions_reverts():
    chain = SimChain()
    dep = ledger.deploy_hashsum(chain, PEOPLE[:3], 0)
    ledger.submit_hash(chain, dep.contract, PEOPLE[0], 0)
    assert not ledger.finalize_hash_sum(chain, dep.contract).ok


# ---- Contract_p ----


def test_verify_gas_exact_for_m10(m10_proof):
    vk, public, proof = m10_proof
    chain = SimChain()
    addr = ledger.deploy_verifier(chain, vk).contract
    r = ledger.verify_proof_onchain(chain, addr, "server", public, proof)
    assert r.ok and r.result is True
    expected = 21000 + 16 * (256 + 32 * 12) + 12 * 6000 + 12 * 150 + 45000 + 4 * 34000
    assert r.gas == expected == ledger.verify_gas(12) == 286040
    assert chain.contracts[addr].public_inputs == public
    assert chain.contracts[addr].storage["accepted"] == 1


def test_mutated_proof_rejected_with_same_gas(m10_proof):
    vk, public, proof = m10_proof
    chain = SimChain()
    addr = ledger.deploy_verifier(chain, vk).contract
    good = ledger.proof_calldata(public, proof)
    rng = random.Random(31)
    for _ in range(5):
        data = bytearray(good)
        data[rng.randrange(256)] ^= 1 << rng.randrange(8)
        r = chain.call("server", addr, "verify", bytes(data))
        assert r.ok and r.result is False and r.gas == ledger.verify_gas(12)
    assert chain.contracts[addr].storage["accepted"] == 0
    bad_pub = list(public)
    bad_pub[0] += 1
    r = ledger.verify_proof_onchain(chain, addr, "server", bad_pub, proof)
    assert r.result is False and r.gas == ledger.verify_gas(12)


def test_omitted_public_inputs_revert(m10_proof):
    vk, _, proof = m10_proof
    chain = SimChain()
    addr = ledger.deploy_verifier(chain, vk).contract
    r = ledger.verify_proof_onchain(chain, addr, "server", [], proof)
    assert not r.ok and r.gas == ledger.revert_gas(256)


def test_call_to_missing_contract_reverts():
    chain = SimChain()
    r = chain.call("a", ledger.address_of("nowhere"), "verify", b"")
    assert not r.ok and r.gas == 21000 + 2100


# ---- baseline ----


def test_baseline_single_client_single_param():
    res = ledger.baseline_round(SimChain(), [[12345]])
    assert res.aggregate == [12345]
    assert res.total_gas == ledger.baseline_round_gas(1, 1)


def test_baseline_floor_average_and_gas_formula():
    rng = random.Random(32)
    w = [[rng.randrange(1 << 41) for _ in range(7)] for _ in range(4)]
    res = ledger.baseline_round(SimChain(), w)
    assert res.aggregate == [sum(col) // 4 for col in zip(*w)]
    per_client = 21000 + 16 * 32 * 7 + 7 * 20000
    agg = 7 * (4 * (2100 + 3) + 5 + 5000)
    assert res.total_gas == 4 * per_client + agg
    assert res.deploy_gas == 300000 + 16 * 8


def test_baseline_model1_m10_in_window():
    g = ledger.baseline_round_gas(10, 669)
    assert 100e6 <= g <= 250e6


def test_baseline_linear_in_parameters():
    ratio = ledger.baseline_round_gas(10, 4029) / ledger.baseline_round_gas(10, 669)
    assert abs(ratio / (4029 / 669) - 1) <= 0.05


def test_baseline_affine_in_m_times_p():
    base = ledger.baseline_round_gas
    # for fixed P the cost is affine in m with per-client slope independent of m
    assert base(3, 50) - base(2, 50) == base(9, 50) - base(8, 50)


def test_baseline_length_mismatch():
    with pytest.raises(ArgumentError):
        ledger.baseline_round(SimChain(), [[1, 2], [3]])


def test_baseline_empty_pool_contract():
    chain = SimChain()
    addr = chain.deploy("baseline", b"").contract
    for k in range(3):
        assert chain.call(PEOPLE[k], addr, "upload", (k + 1).to_bytes(32, "big") * 2).ok
    agg = chain.call("server", addr, "aggregate")
    assert agg.ok and agg.result == [2, 2]


# ---- chain invariants ----


def run_mixed_log(seed):
    rng = random.Random(seed)
    chain = SimChain()
    hs = [rng.randrange(R_SCALAR) for _ in range(4)]
    claimed = sum(hs) % R_SCALAR if rng.random() < 0.5 else rng.randrange(R_SCALAR)
    hashsum_round(hs, claimed, chain)
    addr = chain.log[0].contract
    ledger.submit_hash(chain, addr, PEOPLE[rng.randrange(4)], 1)  # duplicate
    ledger.finalize_hash_sum(chain, addr)
    ledger.baseline_round(chain, [[rng.randrange(1000) for _ in range(3)] for _ in range(2)])
    return chain


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_replay_reproduces_state_and_gas(seed):
    chain = run_mixed_log(seed)
    buf = io.StringIO()
    chain.export_log(buf)
    again = SimChain.replay(io.StringIO(buf.getvalue()))
    assert again.state_hash() == chain.state_hash()
    assert again.total_gas == chain.total_gas
    assert again.gas_by_account == chain.gas_by_account


def test_replay_detects_tampered_log(tmp_path):
    chain = run_mixed_log(1)
    path = tmp_path / "tx.jsonl"
    chain.export_log(path)
    lines = path.read_text().splitlines()
    lines[1] = lines[1].replace('"gas": ', '"gas": 1')
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ArgumentError):
        SimChain.replay(str(path))


def test_every_receipt_charges_gas_and_totals_add_up():
    chain = run_mixed_log(2)
    assert all(r.gas > 0 for r in chain.log)
    assert chain.total_gas == sum(r.gas for r in chain.log)
    assert sum(chain.gas_by_account.values()) == chain.total_gas
    assert sum(chain.gas_by_contract.values()) == chain.total_gas


def test_zkdfl_round_gas_independent_of_parameter_count():
    # the model takes only m: the statement size P never reaches the chain
    g = ledger.zkdfl_round_gas(10)
    assert g["total"] == 1_236_649
    assert g["deploy_p"] == ledger.deploy_gas(ledger.vk_bytes_len(12))
    assert 0.5e6 <= g["total"] <= 5e6
    assert ledger.baseline_round_gas(10, 669) / g["total"] >= 50
