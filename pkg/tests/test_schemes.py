from __future__ import annotations

import numpy as np
import pytest

from rsrepair.bounds import linear_lower_bound
from rsrepair.errors import (
    AMustBeWholeField,
    InvalidDimensions,
    KEqualsN,
    KTooLarge,
    NTooLarge,
    OddExtension,
)
from rsrepair.gf import make_tower, rank_over_subfield
from rsrepair.repair import repair_batch, validate
from rsrepair.rs import PolyF, RsCode, encode_many
from rsrepair.schemes import (
    HDFS_ROOTS,
    HDFS_TABLE_BITS,
    ConstructionId,
    build,
    default_points,
    hdfs_scheme,
    naive_scheme,
    trace_scheme,
    two_coset_scheme,
)


def round_trip(code, scheme, words=40, seed=0):
    rng = np.random.default_rng(seed)
    w = encode_many(code, rng.integers(0, code.field.size, (words, code.k)))
    for a in code.points:
        assert np.array_equal(repair_batch(scheme, w, a).reconstructed, w[:, code.index(a)])


# --- trace ------------------------------------------------------------------

@pytest.mark.parametrize(
    "m,d,k,subsymbols,bits,naive_bits",
    [(8, 4, 240, 255, 1020, 1920), (4, 2, 12, 15, 30, 48), (4, 1, 8, 15, 15, 32)],
)
def test_trace_examples(m, d, k, subsymbols, bits, naive_bits):
    tower = make_tower(m, d)
    scheme = trace_scheme(tower, k)
    report = validate(scheme)
    assert report.bandwidth_subsymbols == subsymbols
    assert report.bandwidth_bits == bits
    assert k * tower.t * d == naive_bits
    round_trip(scheme.code, scheme, words=10)


@pytest.mark.parametrize("m,d", [(2, 1), (4, 2), (4, 1), (6, 3), (6, 2), (8, 4)])
def test_trace_structure(m, d):
    tower = make_tower(m, d)
    n = 2**m
    scheme = trace_scheme(tower, n - n // tower.q)
    f = tower.field
    report = validate(scheme)
    for a in scheme.code.points[:8]:
        polys = scheme.polys[a]
        assert [p.degree for p in polys] == [tower.q ** (tower.t - 1) - 1] * tower.t
        assert tuple(p(a) for p in polys) == tower.basis
        dims = report.per_star[a].dims
        assert dims.sum() == n - 1 and set(dims.tolist()) - {0} == {1}
        # values lie on the line B / (alpha - alpha*)
        for b in scheme.code.points[:8]:
            if b != a:
                vals = [p(b) for p in polys]
                line = [f.mul(v, b ^ a) for v in vals]
                assert all(tower.in_subfield(x) for x in line)


def test_trace_gap_to_linear_bound_below_one_sub_symbol():
    # only where |B| >= 4; see the acceptance gate for |B| = 2
    for m, d in [(4, 2), (6, 2), (6, 3), (8, 4), (8, 2), (12, 4), (12, 6)]:
        n, q = 2**m, 2**d
        gap = (n - 1) - linear_lower_bound(n, n - n // q, q)
        assert 0 <= gap < 1


def test_trace_errors():
    tower = make_tower(4, 2)
    with pytest.raises(KTooLarge):
        trace_scheme(tower, 13)
    with pytest.raises(AMustBeWholeField):
        trace_scheme(tower, 4, points=range(15))


# --- two cosets -------------------------------------------------------------

def test_two_coset_256_n30():
    code, scheme = two_coset_scheme(make_tower(8, 4), 30, 28)
    report = validate(scheme)
    assert report.bandwidth_bits <= 180 < 224
    assert report.bandwidth_subsymbols == 3 * 30 // 2 - 2
    assert 8 * 28 // 2 == 112
    round_trip(code, scheme, words=20)


@pytest.mark.parametrize("m,n,k", [(4, 6, 4), (4, 4, 2), (8, 30, 28), (8, 12, 3), (6, 14, 10)])
def test_two_coset_rank_pattern(m, n, k):
    tower = make_tower(m, m // 2)
    code, scheme = two_coset_scheme(tower, n, k)
    report = validate(scheme)
    f = tower.field
    for a in code.points:
        dims = report.per_star[a].dims
        for b in code.points:
            if b == a:
                continue
            same_coset = tower.in_subfield(f.div(b, a))
            assert dims[code.index(b)] == (2 if same_coset else 1)
    assert report.bandwidth_bits <= 3 * m * n / 4
    round_trip(code, scheme, words=10)


def test_two_coset_points():
    tower = make_tower(8, 4)
    code, _ = two_coset_scheme(tower, 30, 28)
    h = tower.subfield_generator
    f = tower.field
    assert code.points[:15] == tuple(f.pow(h, i) for i in range(15))
    assert code.points[15:] == tuple(f.mul(f.generator, f.pow(h, i)) for i in range(15))


def test_two_coset_errors():
    with pytest.raises(OddExtension):
        two_coset_scheme(make_tower(9, 3), 6, 4)
    with pytest.raises(OddExtension):
        two_coset_scheme(make_tower(8, 2), 6, 4)
    with pytest.raises(NTooLarge):
        two_coset_scheme(make_tower(4, 2), 8, 4)
    with pytest.raises(KTooLarge):
        two_coset_scheme(make_tower(4, 2), 6, 5)
    with pytest.raises(InvalidDimensions):
        two_coset_scheme(make_tower(4, 2), 5, 2)


# --- naive ------------------------------------------------------------------

def test_naive_hdfs_code_is_80_bits():
    code, _ = hdfs_scheme()
    report = validate(naive_scheme(code))
    assert report.bandwidth_bits == 80
    assert report.max_locality == 10


@pytest.mark.parametrize("m,d,n,k", [(4, 2, 8, 5), (8, 4, 20, 7), (6, 1, 10, 3), (4, 4, 9, 4)])
def test_naive_bandwidth_is_kt(m, d, n, k):
    tower = make_tower(m, d)
    code = RsCode(tower, default_points(tower, n), k)
    scheme = naive_scheme(code)
    report = validate(scheme)
    assert report.bandwidth_subsymbols == k * tower.t
    for a in code.points:
        dims = report.per_star[a].dims
        helpers = [b for b in code.points if b != a][:k]
        assert [int(dims[code.index(b)]) for b in helpers] == [tower.t] * k
        assert int(dims.sum()) == k * tower.t
    round_trip(code, scheme, words=5)


def test_naive_k_equals_n_minus_1():
    tower = make_tower(4, 2)
    code = RsCode(tower, tuple(range(1, 7)), 5)
    scheme = naive_scheme(code)
    for a in code.points:
        assert scheme.polys[a] == tuple(PolyF.constant(tower.field, z) for z in tower.basis)
    assert validate(scheme).max_locality == 5


def test_naive_requires_k_below_n():
    with pytest.raises(KEqualsN):
        naive_scheme(RsCode(make_tower(4, 2), tuple(range(5)), 5))


# --- HDFS (14, 10) ----------------------------------------------------------

def test_hdfs_parity_checks():
    code, _ = hdfs_scheme()
    f = code.field
    rng = np.random.default_rng(0)
    words = encode_many(code, rng.integers(0, 256, (20, 10)))
    for w in words:
        for j in range(4):
            acc = 0
            for a, c in zip(code.points, w):
                acc ^= f.mul(int(c), f.pow(a, j))
            assert acc == 0


def test_hdfs_table():
    code, scheme = hdfs_scheme()
    f = code.field
    z = f.generator
    assert code.points == tuple(f.pow(z, i) for i in range(14))
    assert len(HDFS_ROOTS) == 14
    p1, p2 = scheme.polys[1]
    assert p1 == PolyF.from_roots(f, [z, f.pow(z, 2), f.pow(z, 5)])
    assert p2 == PolyF.from_roots(f, [f.pow(z, 3), f.pow(z, 8), f.pow(z, 6)])
    report = validate(scheme)
    assert report.per_star[1].bits == 64
    assert report.per_star[f.pow(z, 2)].bits == 60
    assert tuple(report.bits_by_point()) == HDFS_TABLE_BITS
    assert report.bandwidth_bits == 64 < 65 < 80
    round_trip(code, scheme, words=20)


def test_hdfs_star_values_span():
    code, scheme = hdfs_scheme()
    for a in code.points:
        assert rank_over_subfield(code.tower, [p(a) for p in scheme.polys[a]]) == 2


# --- dispatch ---------------------------------------------------------------

def test_build_dispatch():
    tower = make_tower(4, 2)
    assert {c.value for c in ConstructionId} == {"trace", "two_coset", "naive", "hdfs14_10"}
    code, scheme = build("trace", tower, k=12)
    assert validate(scheme).bandwidth_subsymbols == 15
    code, scheme = build("two_coset", tower, 6, 4)
    assert code.n == 6
    code, scheme = build("naive", tower, 10, 4)
    assert validate(scheme).bandwidth_subsymbols == 8
    code, scheme = build("hdfs14_10")
    assert code.n == 14
    with pytest.raises(ValueError):
        build("nope", tower, 4, 2)
    with pytest.raises(InvalidDimensions):
        build("naive", tower, k=2)
