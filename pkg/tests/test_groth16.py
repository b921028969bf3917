"""Groth16 setup, prover and verifier."""

import random

import pytest

import oracles
from zkdfl import groth16
from zkdfl.curve import G1, G2, G1Point, pairing
from zkdfl.curve.field import R_SCALAR
from zkdfl.errors import ArgumentError, UnsatisfiedCircuit
from zkdfl.qap import to_qap
from zkdfl.r1cs import ConstraintSystem


def squaring_qap():
    cs = ConstraintSystem()
    x = cs.alloc_public(3)
    y = cs.alloc_witness(9)
    cs.enforce(x, x, y)
    return to_qap(cs)


def cubic_qap():
    """x^3 + x + 5 = out with x private and out public."""
    cs = ConstraintSystem()
    out = cs.alloc_public(35)
    x = cs.alloc_witness(3)
    x2 = cs.alloc_witness(9)
    x3 = cs.alloc_witness(27)
    cs.enforce(x, x, x2)
    cs.enforce(x2, x, x3)
    cs.enforce(x3 + x + 5, cs.one, out)
    return to_qap(cs)


@pytest.fixture(scope="module")
def squaring_keys():
    return groth16.setup(squaring_qap(), seed=1)


@pytest.fixture(scope="module")
def cubic_keys():
    qap = cubic_qap()
    pk, vk = groth16.setup(qap, seed=2)
    proof = groth16.prove(pk, [35], [3, 9, 27], seed=3)
    return pk, vk, proof


def test_completeness_on_squaring_circuit(squaring_keys):
    pk, vk = squaring_keys
    proof = groth16.prove(pk, [3], [9], seed=7)
    assert groth16.verify(vk, [3], proof)


def test_same_seed_gives_byte_identical_keys():
    pk1, vk1 = groth16.setup(squaring_qap(), seed=42)
    pk2, vk2 = groth16.setup(squaring_qap(), seed=42)
    assert vk1.to_bytes() == vk2.to_bytes()
    assert pk1.to_bytes() == pk2.to_bytes()
    _, vk3 = groth16.setup(squaring_qap(), seed=43)
    assert vk3.to_bytes() != vk1.to_bytes()


def test_crs_matches_toxic_waste_via_interpolation_oracle():
    qap = cubic_qap()
    pk, vk, tw = groth16.setup(qap, seed=5, return_toxic=True)
    assert vk.alpha_g1 == G1 * tw.alpha
    assert vk.beta_g2 == G2 * tw.beta
    assert vk.gamma_g2 == G2 * tw.gamma
    assert vk.delta_g2 == G2 * tw.delta
    xs = qap.domain.elements()
    gamma_inv = pow(tw.gamma, -1, R_SCALAR)

    def at_tau(ev):
        coeffs = oracles.lagrange_interpolate(xs, ev)
        return sum(c * pow(tw.tau, i, R_SCALAR) for i, c in enumerate(coeffs)) % R_SCALAR

    for j in range(qap.num_public + 1):
        u, v, w = (at_tau(ev) for ev in qap.evaluations(j))
        expected = (tw.beta * u + tw.alpha * v + w) * gamma_inv % R_SCALAR
        assert vk.ic[j] == G1 * expected


def test_alpha_beta_matches_fresh_pairing(squaring_keys):
    _, vk = squaring_keys
    assert vk.alpha_beta == pairing(vk.alpha_g1, vk.beta_g2)


def test_two_seeds_give_distinct_accepted_proofs(cubic_keys):
    pk, vk, p1 = cubic_keys
    p2 = groth16.prove(pk, [35], [3, 9, 27], seed=4)
    assert p1.to_bytes() != p2.to_bytes()
    assert groth16.verify(vk, [35], p1) and groth16.verify(vk, [35], p2)


def test_perturbed_witness_refused_with_constraint_index(cubic_keys):
    pk, _, _ = cubic_keys
    with pytest.raises(UnsatisfiedCircuit) as info:
        groth16.prove(pk, [35], [3, 10, 27])
    assert info.value.index == 0
    with pytest.raises(UnsatisfiedCircuit) as info:
        groth16.prove(pk, [35], [3, 9, 28])
    assert info.value.index == 1


def test_incremented_public_input_rejected(cubic_keys):
    _, vk, proof = cubic_keys
    assert not groth16.verify(vk, [36], proof)


def test_random_a_forgeries_rejected_100_trials(cubic_keys):
    _, vk, proof = cubic_keys
    rng = random.Random(77)
    accepted = 0
    for _ in range(100):
        forged = groth16.Proof(G1 * rng.randrange(1, R_SCALAR), proof.b, proof.c)
        accepted += groth16.verify(vk, [35], forged)
    assert accepted == 0


def test_swapped_and_degenerate_proofs_rejected(cubic_keys):
    _, vk, proof = cubic_keys
    assert not groth16.verify(vk, [35], groth16.Proof(proof.c, proof.b, proof.a))
    assert not groth16.verify(vk, [35], groth16.Proof(G1Point.infinity(), proof.b, proof.c))


def test_proof_from_other_setup_rejected(cubic_keys):
    _, _, proof = cubic_keys
    _, other_vk = groth16.setup(cubic_qap(), seed=99)
    assert not groth16.verify(other_vk, [35], proof)


def test_public_length_mismatch_is_argument_error(cubic_keys):
    pk, vk, proof = cubic_keys
    with pytest.raises(ArgumentError):
        groth16.verify(vk, [], proof)
    with pytest.raises(ArgumentError):
        groth16.verify(vk, [35, 1], proof)
    with pytest.raises(ArgumentError):
        groth16.prove(pk, [35], [3, 9])


def test_noncanonical_public_input_is_argument_error(cubic_keys):
    _, vk, proof = cubic_keys
    with pytest.raises(ArgumentError):
        groth16.verify(vk, [35 + R_SCALAR], proof)


def test_setup_rejects_degenerate_input():
    with pytest.raises(ArgumentError):
        groth16.setup(ConstraintSystem())
    with pytest.raises(ArgumentError):
        to_qap(ConstraintSystem())


def test_proof_and_vk_serialization_roundtrip(cubic_keys):
    _, vk, proof = cubic_keys
    raw = proof.to_bytes()
    assert len(raw) == groth16.PROOF_BYTES == 256
    assert raw[:64] == proof.a.to_bytes() and raw[192:] == proof.c.to_bytes()
    back = groth16.Proof.from_bytes(raw)
    assert back.to_bytes() == raw
    vk2 = groth16.VerifyingKey.from_bytes(vk.to_bytes())
    assert vk2 == vk
    assert groth16.verify(vk2, [35], back)
    with pytest.raises(ArgumentError):
        groth16.Proof.from_bytes(raw[:-1])
    with pytest.raises(ArgumentError):
        groth16.VerifyingKey.from_bytes(vk.to_bytes()[:-5])


def test_ic_has_one_entry_per_public_plus_one(cubic_keys):
    _, vk, _ = cubic_keys
    assert len(vk.ic) == 2 and vk.num_public == 1
    assert len(vk.to_bytes()) == 64 + 3 * 128 + 4 + 64 * 2
