"""Fields, groups, MSM, FFT and pairing over BN254."""

import importlib
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from zkdfl.curve import (
    G1,
    G2,
    Domain,
    Fr,
    G1Point,
    G2Point,
    Gt,
    fft,
    fr_ops,
    g1_msm,
    g2_msm,
    pairing,
    pairing_check,
    root_of_unity,
)
from zkdfl.curve.field import Q_BASE, R_SCALAR, batch_inverse
from zkdfl.errors import ArgumentError, FieldError

msm_mod = importlib.import_module("zkdfl.curve.msm")

fr_values = st.integers(min_value=0, max_value=R_SCALAR - 1)


def as_pair(pt):
    return None if pt.inf else (pt.x, pt.y)


# ---- Fr ----


def test_fr_examples():
    assert fr_ops(1, 0, "add") == 1
    assert fr_ops(7, fr_ops(7, 0, "inv"), "mul") == 1
    assert fr_ops(2, 7, "pow") == 128


def test_fr_inverse_of_zero_is_an_error():
    with pytest.raises(FieldError):
        fr_ops(0, 0, "inv")
    with pytest.raises(FieldError):
        Fr(R_SCALAR).inv()


def test_fr_add_matches_bigint_oracle_1000_pairs():
    rng = random.Random(11)
    for _ in range(1000):
        a, b = rng.randrange(R_SCALAR), rng.randrange(R_SCALAR)
        assert fr_ops(a, b, "add") == (a + b) % R_SCALAR
        assert fr_ops(a, b, "sub") == (a - b) % R_SCALAR
        assert fr_ops(a, b, "mul") == a * b % R_SCALAR


@given(fr_values, fr_values, fr_values)
def test_fr_field_axioms(a, b, c):
    a, b, c = Fr(a), Fr(b), Fr(c)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert 0 <= int(a - b) < R_SCALAR
    if a:
        assert a * a.inv() == 1


@given(fr_values)
def test_fr_serialization_roundtrip(a):
    assert Fr.from_bytes32(Fr(a).to_bytes32()) == a


def test_fr_rejects_noncanonical_bytes():
    with pytest.raises(ArgumentError):
        Fr.from_bytes32(R_SCALAR.to_bytes(32, "big"))


def test_batch_inverse():
    vals = [3, 5, 7, R_SCALAR - 1]
    assert batch_inverse(vals) == [pow(v, -1, R_SCALAR) for v in vals]
    with pytest.raises(FieldError):
        batch_inverse([1, 0])


# ---- groups ----


def test_generators_on_curve_and_order_r():
    assert G1 == G1Point(1, 2)
    assert G1.is_on_curve() and G2.is_on_curve() and G2.in_subgroup()
    assert G1.mul_unreduced(R_SCALAR).inf
    assert G2.mul_unreduced(R_SCALAR).inf


def test_off_curve_points_rejected():
    with pytest.raises(ArgumentError):
        G1Point(1, 3)
    with pytest.raises(ArgumentError):
        G2Point((1, 0), (1, 0))


@settings(max_examples=25)
@given(fr_values, fr_values)
def test_group_law_g1_matches_affine_oracle(a, b):
    assert as_pair(G1 * (a + b)) == as_pair(G1 * a + G1 * b)
    assert as_pair(G1 * a) == oracles.g1_mul((1, 2), a)


@settings(max_examples=8)
@given(fr_values, fr_values)
def test_group_law_g2_matches_affine_oracle(a, b):
    assert G2 * (a + b) == G2 * a + G2 * b
    got = G2 * a
    assert as_pair(got) == oracles.g2_mul((G2.x, G2.y), a)


@settings(max_examples=20)
@given(fr_values)
def test_point_serialization_roundtrip(a):
    p1 = G1 * a
    assert G1Point.from_bytes(p1.to_bytes()) == p1
    p2 = G2 * (a % 1000)
    assert G2Point.from_bytes(p2.to_bytes()) == p2


def test_infinity_encodes_as_zero_bytes():
    assert G1Point.infinity().to_bytes() == bytes(64)
    assert G2Point.infinity().to_bytes() == bytes(128)
    assert G1Point.from_bytes(bytes(64)).inf
    assert G2Point.from_bytes(bytes(128)).inf


def test_g2_coordinate_order_is_c0_then_c1():
    raw = G2.to_bytes()
    assert int.from_bytes(raw[0:32], "big") == G2.x[0]
    assert int.from_bytes(raw[32:64], "big") == G2.x[1]
    assert int.from_bytes(raw[64:96], "big") == G2.y[0]
    assert int.from_bytes(raw[96:128], "big") == G2.y[1]


def test_g2_twist_point_outside_subgroup_rejected():
    # a point on the twist but not in the order-r subgroup: hash-and-increment x
    b2 = G2Point.generator()
    from zkdfl.curve.field import XI, f2_add, f2_inv, f2_mul, f2_sqr

    twist_b = f2_mul((3, 0), f2_inv(XI))
    x = (1, 0)
    while True:
        rhs = f2_add(f2_mul(f2_sqr(x), x), twist_b)
        y = _fq2_sqrt(rhs)
        if y is not None:
            break
        x = (x[0] + 1, 0)
    pt = G2Point(x, y)
    assert pt.is_on_curve() and not pt.in_subgroup()
    with pytest.raises(ArgumentError):
        G2Point.from_bytes(pt.to_bytes())
    assert b2.in_subgroup()


def _fq2_sqrt(a):
    # square root in Fq2 for q = 3 mod 4 (textbook algorithm 9 of Adj and Rodriguez-Henriquez)
    from zkdfl.curve.field import f2_mul, f2_pow

    q = Q_BASE
    a1 = f2_pow(a, (q - 3) // 4)
    alpha = f2_mul(a1, f2_mul(a1, a))
    x0 = f2_mul(a1, a)
    if alpha == (q - 1, 0):
        x = f2_mul((0, 1), x0)
    else:
        b = f2_pow(((1 + alpha[0]) % q, alpha[1]), (q - 1) // 2)
        x = f2_mul(b, x0)
    return x if f2_mul(x, x) == (a[0] % q, a[1] % q) else None


# ---- MSM ----


def test_msm_examples():
    assert g1_msm([G1], [0]).inf
    assert g1_msm([G1, G1], [1, 1]) == G1 * 2
    assert g1_msm([], []).inf
    with pytest.raises(ArgumentError):
        g1_msm([G1, G1], [1])


@pytest.mark.parametrize("pure", [False, True])
def test_g1_msm_100_random_pairs_matches_naive_sum(pure):
    rng = random.Random(5)
    pts = [G1 * rng.randrange(1, R_SCALAR) for _ in range(100)]
    pts[7] = G1Point.infinity()
    scalars = [rng.randrange(R_SCALAR) for _ in range(100)]
    scalars[3] = 0
    scalars[4] = R_SCALAR - 1
    expected = None
    for p, s in zip(pts, scalars):
        expected = oracles.g1_add(expected, oracles.g1_mul(as_pair(p), s) if not p.inf else None)
    prev = msm_mod._FORCE_PURE
    msm_mod.set_pure(pure)
    try:
        assert as_pair(g1_msm(pts, scalars)) == expected
    finally:
        msm_mod.set_pure(prev)


@pytest.mark.parametrize("pure", [False, True])
def test_g2_msm_matches_fold(pure):
    rng = random.Random(6)
    pts = [G2 * rng.randrange(1, 10**6) for _ in range(12)]
    scalars = [rng.randrange(R_SCALAR) for _ in range(12)]
    expected = G2Point.infinity()
    for p, s in zip(pts, scalars):
        expected = expected + p * s
    prev = msm_mod._FORCE_PURE
    msm_mod.set_pure(pure)
    try:
        assert g2_msm(pts, scalars) == expected
    finally:
        msm_mod.set_pure(prev)


def test_mul_batch_matches_single_multiplications():
    scalars = [0, 1, 2, 12345, R_SCALAR - 1]
    out = msm_mod.mul_batch(G1, scalars)
    assert out == [G1 * s for s in scalars]


# ---- FFT ----


def test_fft_examples():
    assert fft([1, 0, 0, 0]) == [1, 1, 1, 1]
    rng = random.Random(1)
    v = [rng.randrange(R_SCALAR) for _ in range(8)]
    assert fft(fft(v), inverse=True) == v


def test_fft_matches_naive_dft_length_16():
    rng = random.Random(2)
    v = [rng.randrange(R_SCALAR) for _ in range(16)]
    assert fft(v) == oracles.naive_dft(v, root_of_unity(16))


def test_fft_rejects_bad_lengths():
    with pytest.raises(ArgumentError):
        fft([1, 2, 3])
    with pytest.raises(ArgumentError):
        root_of_unity(1 << 29)


def test_root_of_unity_has_exact_order():
    for k in (1, 4, 10, 28):
        w = root_of_unity(1 << k)
        assert pow(w, 1 << k, R_SCALAR) == 1
        assert pow(w, 1 << (k - 1), R_SCALAR) != 1


def test_domain_coset_roundtrip_and_vanishing():
    d = Domain(8)
    coeffs = list(range(1, 9))
    assert d.coset_ifft(d.coset_fft(coeffs)) == coeffs
    for x in d.elements():
        assert d.vanishing(x) == 0


# ---- pairing ----


def test_pairing_degenerate_inputs():
    assert pairing(G1Point.infinity(), G2).is_one()
    assert pairing(G1, G2Point.infinity()).is_one()


def test_pairing_bilinearity_small():
    e = pairing(G1, G2)
    assert pairing(G1 * 2, G2) == e * e
    assert not e.is_one()
    assert (e ** R_SCALAR).is_one()


def test_pairing_matches_independent_oracle():
    for a, b in ((1, 1), (987654321, 123456789)):
        p, q = G1 * a, G2 * b
        ref = oracles.pairing_oracle(as_pair(p), (q.x, q.y))
        assert oracles.tower_to_flat(pairing(p, q).value) == ref


def test_pairing_exponent_oracle_20_random():
    rng = random.Random(9)
    base = pairing(G1, G2)
    for _ in range(20):
        a, b = rng.randrange(1, R_SCALAR), rng.randrange(1, R_SCALAR)
        assert pairing(G1 * a, G2 * b) == base ** (a * b)


def test_pairing_check_product():
    a, b = 31337, 4242
    assert pairing_check([(G1 * a, G2 * b), (-(G1 * (a * b)), G2)])
    assert not pairing_check([(G1 * a, G2 * b), (-(G1 * (a * b + 1)), G2)])


def test_pairing_rejects_off_curve():
    bad = G1Point(1, 3, check=False)
    with pytest.raises(ArgumentError):
        pairing(bad, G2)


def test_gt_inverse_is_conjugate():
    e = pairing(G1 * 5, G2)
    assert (e * e.inverse()).is_one()
    assert Gt.one().is_one()
