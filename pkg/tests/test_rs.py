from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import check_duality_random, check_lagrange_random
from rsrepair.errors import (
    AlphaNotInS,
    AlphaStarInS,
    DuplicatePoint,
    InvalidCode,
    MessageDegreeTooHigh,
    TooLargeToEnumerate,
)
from rsrepair.gf import make_tower
from rsrepair.rs import (
    PolyF,
    RsCode,
    encode,
    encode_many,
    formal_derivative,
    grs_dual_multipliers,
    lagrange_coeff,
    lagrange_interpolate,
    mds_distance,
    poly_eval,
    vanishing_poly,
)

F256 = make_tower(8, 4).field
F16 = make_tower(4, 1).field


def power_sum(p: PolyF, x: int) -> int:
    f = p.field
    acc = 0
    for i, c in enumerate(p.coeffs):
        acc ^= f.mul(c, f.pow(x, i))
    return acc


# --- polynomials ------------------------------------------------------------

def test_zero_polynomial():
    z = PolyF(F256, [0, 0])
    assert z.coeffs == ()
    assert z.degree == -1
    assert poly_eval(z, 0x53) == 0
    assert z.to_hex() == "0"
    assert PolyF.from_hex(F256, "0").is_zero


def test_poly_eval_examples():
    a = 0x53
    assert poly_eval(PolyF(F256, [a, 1]), a) == 0


@settings(max_examples=200)
@given(st.lists(st.integers(0, 255), max_size=12), st.integers(0, 255))
def test_poly_eval_matches_power_sum(coeffs, x):
    p = PolyF(F256, coeffs)
    assert poly_eval(p, x) == power_sum(p, x)
    assert int(p.evaluate_many(np.array([x]))[0]) == power_sum(p, x)


@settings(max_examples=100)
@given(st.lists(st.integers(0, 255), max_size=10), st.integers(0, 255), st.integers(0, 255))
def test_shift_composes_with_translation(coeffs, a, x):
    p = PolyF(F256, coeffs)
    assert p.shift(a)(x) == p(x ^ a)


def test_hex_round_trip_and_arithmetic():
    p = PolyF(F256, [1, 0x1D, 0, 7])
    assert p.to_hex() == "1 1d 0 7"
    assert PolyF.from_hex(F256, p.to_hex()) == p
    q = PolyF(F256, [3, 1])
    assert ((p * q) + p * q).is_zero
    quot, rem = (p * q).divmod_linear(3)
    assert rem == 0 and quot == p


def test_formal_derivative_examples():
    x2 = PolyF(F16, [0, 0, 1])
    assert formal_derivative(x2).is_zero
    x3_x = PolyF(F16, [0, 1, 0, 1])
    assert formal_derivative(x3_x) == PolyF(F16, [1, 0, 1])


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_derivative_of_vanishing_poly_at_a_root(size):
    rnd = random.Random(size)
    T = rnd.sample(range(256), size)
    p = vanishing_poly(F256, T)
    a = T[0]
    expect = F256.prod(a ^ b for b in T[1:])
    assert formal_derivative(p)(a) == expect


def test_vanishing_poly_examples():
    assert vanishing_poly(F256, []) == PolyF.constant(F256, 1)
    assert vanishing_poly(F256, [9]) == PolyF(F256, [9, 1])
    p = vanishing_poly(F256, [3, 5, 7])
    assert p.degree == 3 and p.coeffs[-1] == 1
    assert [p(a) for a in (3, 5, 7)] == [0, 0, 0]
    assert p(8) != 0
    with pytest.raises(DuplicatePoint):
        vanishing_poly(F256, [3, 3])


# --- interpolation ----------------------------------------------------------

def test_lagrange_interpolate_examples():
    assert lagrange_interpolate(F256, [(4, 9)]) == PolyF.constant(F256, 9)
    assert lagrange_interpolate(F256, [(4, 4), (77, 77)]) == PolyF.x(F256)
    with pytest.raises(DuplicatePoint):
        lagrange_interpolate(F256, [(4, 1), (4, 2)])


def test_lagrange_coeff_examples():
    assert lagrange_coeff(F256, [5], 5, 9) == 1
    a, b, s = 5, 11, 200
    assert lagrange_coeff(F256, [a, b], a, s) == F256.div(s ^ b, a ^ b)
    with pytest.raises(AlphaNotInS):
        lagrange_coeff(F256, [a, b], 3, s)
    with pytest.raises(AlphaStarInS):
        lagrange_coeff(F256, [a, b], a, b)


def test_lagrange_oracle_1000_random_cases():
    assert check_lagrange_random(1000, seed=11) == 1000


def test_lagrange_ratio_independent_of_helper_set():
    """mu_{S,a}(a*) p'(a*) / p(a), p vanishing on A \\ S, depends only on a and a*."""
    rnd = random.Random(5)
    for _ in range(50):
        A = rnd.sample(range(256), 10)
        k = 4
        a, star = A[0], A[-1]
        ratios = set()
        for _ in range(2):
            S = [a] + rnd.sample(A[1:-1], k - 1)
            pbar = vanishing_poly(F256, [x for x in A if x not in S])
            mu = lagrange_coeff(F256, S, a, star)
            ratios.add(F256.div(F256.mul(mu, formal_derivative(pbar)(star)), pbar(a)))
        assert len(ratios) == 1


# --- codes ------------------------------------------------------------------

def test_dual_multiplier_examples():
    assert grs_dual_multipliers(F256, [7]) == (1,)
    a, b = 7, 100
    assert grs_dual_multipliers(F256, [a, b]) == (F256.inv(a ^ b), F256.inv(a ^ b))
    with pytest.raises(DuplicatePoint):
        grs_dual_multipliers(F256, [a, a])


def test_duality_oracle_1000_random_cases():
    assert check_duality_random(1000, seed=12) == 1000


@settings(max_examples=100)
@given(st.integers(2, 16), st.integers(0, 2**32 - 1))
def test_rs_times_dual_grs_is_zero(n, seed):
    rng = np.random.default_rng(seed)
    tower = make_tower(8, 4)
    A = tuple(int(x) for x in rng.choice(256, n, replace=False))
    k = int(rng.integers(1, n))
    code = RsCode(tower, A, k)
    dual = RsCode(tower, A, n - k, grs_dual_multipliers(tower.field, A))
    c = encode_many(code, rng.integers(0, 256, (1, k)))[0]
    e = encode_many(dual, rng.integers(0, 256, (1, n - k)))[0]
    acc = 0
    for x, y in zip(c, e):
        acc ^= tower.field.mul(int(x), int(y))
    assert acc == 0


def test_code_validation():
    tower = make_tower(4, 2)
    with pytest.raises(DuplicatePoint):
        RsCode(tower, (1, 2, 2), 1)
    with pytest.raises(InvalidCode):
        RsCode(tower, (1, 2, 3), 0)
    with pytest.raises(InvalidCode):
        RsCode(tower, (1, 2, 3), 4)
    with pytest.raises(InvalidCode):
        RsCode(tower, (1, 2, 3), 2, (1, 0, 1))


def test_encode_examples():
    tower = make_tower(4, 2)
    code = RsCode(tower, tuple(range(16)), 4)
    assert encode(code, []) == [0] * 16
    assert encode(code, [9]) == [9] * 16
    with pytest.raises(MessageDegreeTooHigh):
        encode(code, [1, 2, 3, 4, 5])


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_any_k_symbols_decode_to_the_message(seed):
    rng = np.random.default_rng(seed)
    tower = make_tower(8, 4)
    A = tuple(int(x) for x in rng.choice(256, 12, replace=False))
    k = int(rng.integers(1, 12))
    lam = tuple(int(x) for x in rng.integers(1, 256, 12))
    code = RsCode(tower, A, k, lam)
    msg = [int(x) for x in rng.integers(0, 256, k)]
    word = encode(code, msg)
    assert word == encode_many(code, np.array([msg]))[0].tolist()
    pick = rng.choice(12, k, replace=False)
    pts = [(A[i], tower.field.div(word[i], lam[i])) for i in pick]
    assert list(lagrange_interpolate(tower.field, pts).coeffs) == list(PolyF(tower.field, msg).coeffs)


@pytest.mark.parametrize(
    "m,k,expected",
    [(2, 2, 3), (3, 4, 5), (2, 4, 1), (3, 1, 8), (4, 3, 14)],
)
def test_mds_distance(m, k, expected):
    code = RsCode(make_tower(m, 1), tuple(range(2**m)), k)
    assert mds_distance(code) == expected == code.n - code.k + 1


def test_mds_distance_budget():
    code = RsCode(make_tower(8, 4), tuple(range(20)), 4)
    with pytest.raises(TooLargeToEnumerate):
        mds_distance(code)


def test_mds_distance_on_random_grs_codes():
    rnd = random.Random(3)
    for n, k in itertools.product([5, 7], [1, 2, 3]):
        tower = make_tower(3, 1)
        A = tuple(rnd.sample(range(8), n))
        lam = tuple(rnd.randrange(1, 8) for _ in range(n))
        assert mds_distance(RsCode(tower, A, k, lam)) == n - k + 1
