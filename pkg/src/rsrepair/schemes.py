"""Named repair-scheme constructions."""

from __future__ import annotations

import enum

from .errors import (
    AMustBeWholeField,
    InvalidDimensions,
    KEqualsN,
    KTooLarge,
    NTooLarge,
    OddExtension,
)
from .gf import FieldTower, make_tower
from .repair import RepairScheme
from .rs import PolyF, RsCode, grs_dual_multipliers, vanishing_poly


class ConstructionId(str, enum.Enum):
    TRACE = "trace"
    TWO_COSET = "two_coset"
    NAIVE = "naive"
    HDFS14_10 = "hdfs14_10"


# ---------------------------------------------------------------------------
# Full-length codes: trace polynomials
# ---------------------------------------------------------------------------

def trace_base_polys(tower: FieldTower) -> tuple[PolyF, ...]:
    """h_zeta(Y) = tr(zeta Y) / Y = sum_i zeta^(q^i) Y^(q^i - 1), one per basis element."""
    f = tower.field
    out = []
    for zeta in tower.basis:
        coeffs = [0] * tower.q ** (tower.t - 1)
        z = zeta
        qi = 1
        for _ in range(tower.t):
            coeffs[qi - 1] ^= z
            z = tower.frobenius(z)
            qi *= tower.q
        out.append(PolyF(f, coeffs))
    return tuple(out)


def trace_scheme(tower: FieldTower, k: int, points=None) -> RepairScheme:
    """Bandwidth n - 1 sub-symbols for RS(F, k), k <= n (1 - 1/|B|).

    P(alpha*) = { tr(zeta (X - alpha*)) / (X - alpha*) : zeta in Z }.
    """
    n = tower.field.size
    if points is not None and sorted(points) != list(range(n)):
        raise AMustBeWholeField("the trace construction evaluates on all of F")
    if k > n - n // tower.q:
        raise KTooLarge(f"k={k} exceeds n(1 - 1/|B|) = {n - n // tower.q}")
    code = RsCode(tower, tuple(range(n)) if points is None else tuple(points), k)
    return RepairScheme.translates(code, trace_base_polys(tower))


# ---------------------------------------------------------------------------
# Two cosets of B* inside a quadratic extension
# ---------------------------------------------------------------------------

def two_coset_points(tower: FieldTower, n: int) -> tuple[int, ...]:
    f = tower.field
    h = tower.subfield_generator
    g = f.generator
    half = [f.pow(h, i) for i in range(n // 2)]
    return tuple(half) + tuple(f.mul(g, b) for b in half)


def two_coset_scheme(tower: FieldTower, n: int, k: int) -> tuple[RsCode, RepairScheme]:
    """n/2 points of B* and n/2 of gamma B*; linear polynomials {1, X} or {1, X/gamma}."""
    if tower.m % 2:
        raise OddExtension(f"m={tower.m} is odd")
    if tower.t != 2:
        raise OddExtension(f"needs d = m/2, got d={tower.d} for m={tower.m}")
    if n % 2 or n < 4:
        raise InvalidDimensions(f"n must be even and >= 4, got {n}")
    if n > 2 * (tower.q - 1):
        raise NTooLarge(f"n={n} exceeds 2(|B| - 1) = {2 * (tower.q - 1)}")
    if k > n - 2:
        raise KTooLarge(f"k={k} exceeds n - 2 = {n - 2}")
    f = tower.field
    points = two_coset_points(tower, n)
    code = RsCode(tower, points, k)
    one = PolyF.constant(f, 1)
    x = PolyF.x(f)
    x_over_gamma = x * f.inv(f.generator)
    polys = {}
    for i, a in enumerate(points):
        polys[a] = (one, x) if i >= n // 2 else (one, x_over_gamma)
    return code, RepairScheme(code, polys)


# ---------------------------------------------------------------------------
# Naive: download k whole symbols
# ---------------------------------------------------------------------------

def naive_helpers(code: RsCode, alpha_star: int) -> list[int]:
    return [a for a in code.points if a != alpha_star][: code.k]


def naive_scheme(code: RsCode) -> RepairScheme:
    """p_i = zeta_i v(X) / v(alpha*), v vanishing off the k helpers and alpha*."""
    if code.k >= code.n:
        raise KEqualsN("the naive scheme needs k < n")
    f = code.field
    polys = {}
    for a_star in code.points:
        helpers = set(naive_helpers(code, a_star))
        v = vanishing_poly(f, [a for a in code.points if a != a_star and a not in helpers])
        scale = f.inv(v(a_star))
        polys[a_star] = tuple(v * f.mul(z, scale) for z in code.tower.basis)
    return RepairScheme(code, polys)


# ---------------------------------------------------------------------------
# The (14, 10) HDFS-RAID code
# ---------------------------------------------------------------------------

HDFS_MODULUS = 0x11D

# Per erased point zeta^i: exponents of the roots of the two monic cubics.
HDFS_ROOTS: tuple[tuple[tuple[int, int, int], tuple[int, int, int]], ...] = (
    ((1, 2, 5), (3, 8, 6)),
    ((2, 3, 6), (4, 9, 7)),
    ((3, 9, 6), (3, 13, 12)),
    ((2, 9, 6), (2, 13, 12)),
    ((2, 9, 6), (2, 13, 12)),
    ((1, 3, 9), (3, 4, 11)),
    ((1, 2, 10), (1, 5, 12)),
    ((1, 2, 8), (1, 6, 12)),
    ((2, 9, 6), (2, 13, 12)),
    ((1, 2, 5), (3, 8, 6)),
    ((1, 2, 5), (1, 6, 13)),
    ((2, 9, 6), (2, 13, 12)),
    ((1, 2, 5), (1, 6, 13)),
    ((1, 2, 5), (3, 8, 6)),
)

HDFS_TABLE_BITS: tuple[int, ...] = (64, 64, 60, 60, 60, 64, 64, 64, 60, 64, 64, 60, 64, 64)


def hdfs_code() -> RsCode:
    """GRS(A, 10, lambda) over GF(2^8)/GF(2^4) with A = {1, z, ..., z^13}.

    Its codewords are the c with c(1) = c(z) = c(z^2) = c(z^3) = 0, so it is
    the dual of RS(A, 4) and lambda is A's dual multiplier vector.
    """
    tower = make_tower(8, 4, HDFS_MODULUS)
    f = tower.field
    points = tuple(f.pow(f.generator, i) for i in range(14))
    return RsCode(tower, points, 10, grs_dual_multipliers(f, points))


def hdfs_scheme() -> tuple[RsCode, RepairScheme]:
    code = hdfs_code()
    f = code.field
    g = f.generator
    polys = {}
    for a_star, rows in zip(code.points, HDFS_ROOTS):
        polys[a_star] = tuple(
            PolyF.from_roots(f, [f.pow(g, e) for e in exps]) for exps in rows
        )
    return code, RepairScheme(code, polys)


# ---------------------------------------------------------------------------

def default_points(tower: FieldTower, n: int) -> tuple[int, ...]:
    """All of F when n = |F|, else 1, g, ..., g^(n-1)."""
    f = tower.field
    if n == f.size:
        return tuple(range(n))
    if n > f.size - 1:
        raise InvalidDimensions(f"n={n} exceeds the field size {f.size}")
    return tuple(f.pow(f.generator, i) for i in range(n))


def build(
    construction: ConstructionId | str,
    tower: FieldTower | None = None,
    n: int | None = None,
    k: int | None = None,
) -> tuple[RsCode, RepairScheme]:
    """Dispatch on a construction name; returns the code and its scheme."""
    cid = ConstructionId(construction)
    if cid is ConstructionId.HDFS14_10:
        return hdfs_scheme()
    if tower is None or k is None:
        raise InvalidDimensions(f"{cid.value} needs a tower and k")
    if cid is ConstructionId.TRACE:
        scheme = trace_scheme(tower, k)
        return scheme.code, scheme
    if n is None:
        raise InvalidDimensions(f"{cid.value} needs n")
    if cid is ConstructionId.TWO_COSET:
        return two_coset_scheme(tower, n, k)
    code = RsCode(tower, default_points(tower, n), k)
    return code, naive_scheme(code)
