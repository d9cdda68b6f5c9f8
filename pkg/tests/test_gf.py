from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import check_dual_basis, check_trace_exhaustive, towers_up_to
from rsrepair.errors import DegreeNotDividing, NoDefaultModulus, NonIrreducibleModulus, NotInSpan
from rsrepair.gf import (
    DEFAULT_MODULI,
    FieldSpec,
    SubfieldSpan,
    coords_over_span,
    dual_basis,
    from_hex,
    gf2_rank,
    gf2_ranks,
    is_irreducible,
    make_tower,
    rank_over_subfield,
    subfield_ranks,
    to_hex,
    trace,
)

TOWERS = [(2, 1), (4, 2), (4, 1), (6, 3), (6, 2), (8, 4), (8, 2), (8, 1), (9, 3), (12, 4), (12, 6)]


@pytest.fixture(scope="module")
def gf256():
    return make_tower(8, 4, 0x11D)


# --- moduli and construction -----------------------------------------------

@pytest.mark.parametrize("m", sorted(DEFAULT_MODULI))
def test_default_moduli_are_primitive(m):
    f = FieldSpec(m, DEFAULT_MODULI[m])
    assert is_irreducible(f.modulus)
    assert f.x_is_primitive
    assert f.generator == (2 if m > 1 else 1)  # x = 1 in GF(2)


def test_gf256_default_modulus_is_1_x2_x3_x4_x8():
    assert DEFAULT_MODULI[8] == (1 | 1 << 2 | 1 << 3 | 1 << 4 | 1 << 8)


def test_make_tower_256_over_16(gf256):
    assert (gf256.m, gf256.d, gf256.t, gf256.q) == (8, 4, 2, 16)
    assert gf256.basis == (1, 2)


def test_make_tower_trivial_extension():
    tower = make_tower(4, 4)
    assert tower.t == 1
    assert tower.basis == (1,)
    assert tower.dual == (1,)


def test_make_tower_16_over_4_dual_identity():
    check_dual_basis(make_tower(4, 2))


def test_make_tower_errors():
    with pytest.raises(NonIrreducibleModulus):
        make_tower(8, 4, 0x105)  # (x^4 + x + 1)^2
    with pytest.raises(DegreeNotDividing):
        make_tower(8, 3)
    with pytest.raises(NoDefaultModulus):
        make_tower(17, 1)


def test_non_primitive_x_uses_smallest_primitive_generator():
    # x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
    f = FieldSpec(4, 0x1F)
    assert not f.x_is_primitive
    assert f.generator == 3
    assert f.is_primitive(f.generator)


def test_hex_round_trip():
    assert to_hex(0x11D) == "11d"
    assert from_hex("11D") == 0x11D
    assert from_hex("0x1f") == 0x1F


# --- arithmetic -------------------------------------------------------------

@settings(max_examples=200)
@given(st.sampled_from([2, 4, 8, 12, 16]), st.data())
def test_field_axioms(m, data):
    f = FieldSpec(m, DEFAULT_MODULI[m])
    a, b, c = (data.draw(st.integers(0, f.size - 1)) for _ in range(3))
    assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
    assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)
    assert f.mul(a, b) == f.mul(b, a)
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, f.size - 1) == 1
        assert f.pow(a, -1) == f.inv(a)


@settings(max_examples=50)
@given(st.sampled_from([3, 8, 12]), st.integers(0, 2**32 - 1))
def test_vector_arithmetic_matches_scalar(m, seed):
    f = FieldSpec(m, DEFAULT_MODULI[m])
    rng = np.random.default_rng(seed)
    a = rng.integers(0, f.size, 64)
    b = rng.integers(1, f.size, 64)
    assert f.vmul(a, b).tolist() == [f.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert f.vdiv(a, b).tolist() == [f.div(int(x), int(y)) for x, y in zip(a, b)]
    assert f.vpow(a, 5).tolist() == [f.pow(int(x), 5) for x in a]
    assert f.vinv(b).tolist() == [f.inv(int(y)) for y in b]


def test_gf2_rank():
    assert gf2_rank([]) == 0
    assert gf2_rank([0b011, 0b110, 0b101]) == 2
    assert gf2_ranks(np.array([[1, 2, 3], [1, 1, 0]]), 2).tolist() == [2, 1]


# --- trace ------------------------------------------------------------------

def test_trace_gf4_examples():
    tower = make_tower(2, 1)
    omega = 2  # omega^2 = omega + 1
    assert tower.field.mul(omega, omega) == omega ^ 1
    assert trace(tower, 0) == 0
    assert trace(tower, 1) == 0
    assert trace(tower, omega) == 1


@pytest.mark.parametrize("tower", list(towers_up_to(12)), ids=lambda t: f"{t.m}/{t.d}")
def test_trace_linear_surjective_and_fixed_field(tower):
    check_trace_exhaustive(tower, np.random.default_rng(tower.m * 100 + tower.d))


@pytest.mark.parametrize("tower", list(towers_up_to(12)), ids=lambda t: f"{t.m}/{t.d}")
def test_dual_basis_delta_identity(tower):
    check_dual_basis(tower)


# --- dual basis -------------------------------------------------------------

def test_dual_basis_of_256_over_16(gf256):
    v = dual_basis(gf256, gf256.basis)
    for i in range(2):
        for j in range(2):
            assert trace(gf256, gf256.field.mul(v[i], gf256.basis[j])) == (i == j)


@pytest.mark.parametrize("m,d", TOWERS)
def test_dual_of_dual_returns_the_basis(m, d):
    tower = make_tower(m, d)
    assert dual_basis(tower, dual_basis(tower, tower.basis)) == tower.basis


@settings(max_examples=50)
@given(st.sampled_from(TOWERS), st.integers(0, 2**32 - 1))
def test_dual_basis_of_random_basis(md, seed):
    tower = make_tower(*md)
    rng = np.random.default_rng(seed)
    while True:
        z = [int(x) for x in rng.integers(1, tower.field.size, tower.t)]
        if rank_over_subfield(tower, z) == tower.t:
            break
    v = dual_basis(tower, z)
    for i in range(tower.t):
        for j in range(tower.t):
            assert trace(tower, tower.field.mul(v[i], z[j])) == (i == j)
    # reconstruction identity f = sum tr(z_i f) v_i
    x = int(rng.integers(0, tower.field.size))
    acc = 0
    for zi, vi in zip(z, v):
        acc ^= tower.field.mul(trace(tower, tower.field.mul(zi, x)), vi)
    assert acc == x


# --- ranks and spans --------------------------------------------------------

def test_rank_examples(gf256):
    g = gf256.field.generator
    assert rank_over_subfield(gf256, [0]) == 0
    assert rank_over_subfield(gf256, []) == 0
    assert gf256.field.pow(g, 16) != g
    assert rank_over_subfield(gf256, [1, g]) == 2
    c = gf256.subfield_generator
    beta = 0x57
    assert rank_over_subfield(gf256, [beta, gf256.field.mul(c, beta)]) == 1


@settings(max_examples=200)
@given(st.sampled_from(TOWERS), st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_rank_bounds_and_scalar_invariance(md, seed, size):
    tower = make_tower(*md)
    f = tower.field
    rng = np.random.default_rng(seed)
    S = [int(x) for x in rng.integers(0, f.size, size)]
    r = rank_over_subfield(tower, S)
    assert r <= min(len(S), tower.t)
    if S:
        b = int(rng.choice(tower.subfield_elements[1:])) if tower.q > 2 else 1
        T = list(S)
        T[0] = f.mul(T[0], b)
        assert rank_over_subfield(tower, T) == r
        assert subfield_ranks(tower, np.array([S]))[0] == r


def test_coords_examples(gf256):
    assert coords_over_span(gf256, [0x57], 0x57) == [1]
    assert coords_over_span(gf256, list(gf256.basis), gf256.basis[1]) == [0, 1]
    with pytest.raises(NotInSpan):
        coords_over_span(gf256, [1], 2)


@settings(max_examples=200)
@given(st.sampled_from(TOWERS), st.integers(0, 2**32 - 1))
def test_coords_round_trip(md, seed):
    tower = make_tower(*md)
    f = tower.field
    rng = np.random.default_rng(seed)
    span = SubfieldSpan(tower)
    for x in rng.integers(1, f.size, 2):
        span.add(int(x))
    sub = tower.subfield_elements
    c = [int(rng.choice(sub)) for _ in span.elements]
    v = 0
    for ci, e in zip(c, span.elements):
        v ^= f.mul(ci, e)
    assert coords_over_span(tower, span.elements, v) == c
