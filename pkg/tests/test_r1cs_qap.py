"""Constraint systems and the R1CS to QAP reduction."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from systems import is_zero, oracle_divide, random_system, trim
from zkdfl.curve.field import R_SCALAR
from zkdfl.errors import ArgumentError, OrderingError
from zkdfl.qap import to_qap
from zkdfl.r1cs import KIND_PUBLIC, KIND_WITNESS, ConstraintSystem, LinearCombination, alloc, enforce, is_satisfied


def squaring_system(x=5, y=25):
    cs = ConstraintSystem()
    xv = cs.alloc_public(x)
    yv = cs.alloc_witness(y)
    cs.enforce(xv, xv, yv)
    return cs


# ---- allocation and constraints ----


def test_first_public_alloc_gets_index_one():
    cs = ConstraintSystem()
    assert alloc(cs, KIND_PUBLIC).index == 1
    assert cs.num_constraints == 0


def test_public_after_witness_is_an_ordering_error():
    cs = ConstraintSystem()
    alloc(cs, KIND_PUBLIC)
    alloc(cs, KIND_WITNESS)
    with pytest.raises(OrderingError):
        alloc(cs, KIND_PUBLIC)


def test_unknown_kind_rejected():
    with pytest.raises(ArgumentError):
        ConstraintSystem().alloc("constant")


def test_enforce_constants_holds_for_any_assignment():
    cs = ConstraintSystem()
    x = cs.alloc_witness(17)
    enforce(cs, 3, 4, 12)
    assert cs.num_constraints == 1
    assert is_satisfied(cs, [1, 17]) and is_satisfied(cs, [1, 99])
    del x


def test_squaring_example():
    assert is_satisfied(squaring_system(), [1, 5, 25])
    assert not is_satisfied(squaring_system(), [1, 5, 24])
    assert squaring_system(5, 25).is_satisfied()
    assert not squaring_system(5, 24).is_satisfied()


def test_empty_system_accepts_unit_assignment():
    assert is_satisfied(ConstraintSystem(), [1])


def test_assignment_length_mismatch_is_argument_error():
    with pytest.raises(ArgumentError):
        is_satisfied(squaring_system(), [1, 5])
    with pytest.raises(ArgumentError):
        is_satisfied(squaring_system(), [2, 5, 25])


def test_unallocated_variable_rejected():
    cs = ConstraintSystem()
    other = ConstraintSystem()
    other.alloc_witness()
    v = other.alloc_witness()
    with pytest.raises(ArgumentError):
        cs.enforce(v, v, v)


def test_enforce_increments_count_by_one():
    cs = squaring_system()
    before = cs.num_constraints
    cs.enforce(cs.one, cs.one, cs.one)
    assert cs.num_constraints == before + 1


def test_linear_combination_merges_and_drops_zeros():
    cs = ConstraintSystem()
    x = cs.alloc_witness()
    lc = LinearCombination.of([(x, 3), (x, R_SCALAR - 3), (cs.one, 2)])
    assert dict(lc.items()) == {0: 2}


def test_100_random_systems_satisfied_and_perturbation_breaks_them():
    rng = random.Random(100)
    for _ in range(100):
        cs = random_system(rng, rng.randint(1, 4), rng.randint(1, 12))
        z = cs.assignment()
        assert is_satisfied(cs, z)
        i = rng.randrange(1 + cs.num_public, len(z))
        z[i] = (z[i] + rng.randrange(1, R_SCALAR)) % R_SCALAR
        assert not is_satisfied(cs, z)


# ---- QAP ----


def test_qap_squaring_divisible_only_when_satisfied():
    qap = to_qap(squaring_system())
    quot, rem = oracle_divide(qap, [1, 5, 25])
    assert is_zero(rem)
    q2, r2 = qap.divide([1, 5, 25])
    assert is_zero(r2) and trim(q2) == trim(quot)
    assert trim(qap.quotient([1, 5, 25])) == trim(quot)
    _, rem_bad = oracle_divide(qap, [1, 5, 24])
    assert not is_zero(rem_bad)
    assert not is_zero(qap.divide([1, 5, 24])[1])


def test_target_degree_is_domain_size():
    cs = squaring_system()
    for _ in range(3):
        cs.enforce(cs.one, cs.one, cs.one)
    qap = to_qap(cs)
    assert qap.degree == 4
    t = qap.target_coeffs()
    assert len(t) - 1 == 4
    for x in qap.domain.elements():
        assert qap.target_at(x) == 0


def test_qap_of_empty_system_rejected():
    with pytest.raises(ArgumentError):
        to_qap(ConstraintSystem())


@settings(max_examples=30)
@given(st.integers(0, 2**32), st.integers(1, 32), st.booleans())
def test_qap_divisibility_iff_r1cs_satisfied(seed, n_constraints, perturb):
    rng = random.Random(seed)
    cs = random_system(rng, rng.randint(1, 3), n_constraints)
    z = cs.assignment()
    if perturb:
        i = rng.randrange(1, len(z))
        z[i] = (z[i] + 1) % R_SCALAR
    qap = to_qap(cs)
    _, rem = oracle_divide(qap, z)
    assert is_zero(rem) == is_satisfied(cs, z)
    assert is_zero(qap.divide(z)[1]) == is_satisfied(cs, z)


def test_qap_is_deterministic():
    a = to_qap(random_system(random.Random(3), 2, 9))
    b = to_qap(random_system(random.Random(3), 2, 9))
    tau = 123456789
    assert a.evaluate_at(tau) == b.evaluate_at(tau)
    for j in range(a.num_variables):
        assert a.evaluations(j) == b.evaluations(j)


def test_evaluate_at_matches_interpolated_polynomials():
    cs = random_system(random.Random(4), 2, 5)
    qap = to_qap(cs)
    xs = qap.domain.elements()
    tau = 987654321
    ua, va, wa, t_tau = qap.evaluate_at(tau)
    for j in range(qap.num_variables):
        for got, ev in zip((ua[j], va[j], wa[j]), qap.evaluations(j)):
            coeffs = oracles.lagrange_interpolate(xs, ev)
            assert got == sum(c * pow(tau, i, R_SCALAR) for i, c in enumerate(coeffs)) % R_SCALAR
    assert t_tau == (pow(tau, len(xs), R_SCALAR) - 1) % R_SCALAR
