"""Binary extension fields GF(2^m), a subfield GF(2^d), and linear algebra over it.

Field elements are plain ints: bit ``i`` is the coefficient of ``x^i`` in the
residue modulo the field's modulus.  Subfield elements are kept as their
embedded images in the big field, so there is only one multiplication.

Scalar arithmetic is table-free (carry-less multiply + reduction).  Bulk
numpy arithmetic goes through log/antilog arrays that are built lazily on
the first vectorised call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegreeNotDividing,
    NoDefaultModulus,
    NonIrreducibleModulus,
    NotInSpan,
    SingularGram,
)

FieldElem = int

# Primitive polynomials, bit i = coefficient of x^i.  m = 8 is
# 1 + x^2 + x^3 + x^4 + x^8, the HDFS-RAID field.
DEFAULT_MODULI: dict[int, int] = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def to_hex(x: int) -> str:
    return format(x, "x")


def from_hex(s: str) -> int:
    return int(s, 16)


# ---------------------------------------------------------------------------
# GF(2)[x] helpers (polynomials packed into ints)
# ---------------------------------------------------------------------------

def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _poly2_mod(a: int, mod: int) -> int:
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def _poly2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly2_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(poly: int) -> bool:
    """Rabin's irreducibility test for a polynomial over GF(2)."""
    m = poly.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True

    def x_pow_2i(i: int) -> int:
        y = 0b10
        for _ in range(i):
            y = _poly2_mod(_clmul(y, y), poly)
        return y

    if x_pow_2i(m) != _poly2_mod(0b10, poly):
        return False
    for r in _prime_factors(m):
        h = x_pow_2i(m // r) ^ 0b10
        if _poly2_gcd(poly, h) != 1:
            return False
    return True


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank over GF(2) of bit-packed vectors."""
    pivots: dict[int, int] = {}
    rank = 0
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = v
                rank += 1
                break
            v ^= p
    return rank


def gf2_ranks(rows: np.ndarray, nbits: int) -> np.ndarray:
    """Row-wise GF(2) rank of an (N, K) array of bit-packed vectors."""
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[0]
    pivots = np.zeros((n, nbits), dtype=np.int64)
    for j in range(rows.shape[1]):
        v = rows[:, j].copy()
        for bit in range(nbits - 1, -1, -1):
            has = ((v >> bit) & 1).astype(bool)
            if not has.any():
                continue
            piv = pivots[:, bit]
            free = piv == 0
            reduce_ = has & ~free
            v[reduce_] ^= piv[reduce_]
            new = has & free
            piv[new] = v[new]
            v[new] = 0
    return np.count_nonzero(pivots, axis=1)


# ---------------------------------------------------------------------------
# GF(2^m)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(2^m) defined by an irreducible ``modulus`` of degree ``m``."""

    m: int
    modulus: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.modulus.bit_length() - 1 != self.m:
            raise NonIrreducibleModulus(
                f"modulus {to_hex(self.modulus)} does not have degree {self.m}"
            )
        if not is_irreducible(self.modulus):
            raise NonIrreducibleModulus(f"modulus {to_hex(self.modulus)} is reducible")

    @property
    def size(self) -> int:
        return 1 << self.m

    @cached_property
    def x_is_primitive(self) -> bool:
        return self.is_primitive(_poly2_mod(0b10, self.modulus))

    @cached_property
    def generator(self) -> FieldElem:
        """``x`` when it is primitive, else the smallest primitive element."""
        if self.x_is_primitive:
            return _poly2_mod(0b10, self.modulus)
        for g in range(2, self.size):
            if self.is_primitive(g):
                return g
        raise AssertionError("finite field without a primitive element")

    def is_primitive(self, g: FieldElem) -> bool:
        order = self.size - 1
        if g == 0:
            return False
        if self.pow(g, order) != 1:
            return False
        return all(self.pow(g, order // p) != 1 for p in _prime_factors(order))

    # -- scalar arithmetic ---------------------------------------------------

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        top = 1 << self.m
        mod = self.modulus
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def pow(self, a: FieldElem, e: int) -> FieldElem:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        e %= self.size - 1
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: FieldElem) -> FieldElem:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^m)")
        return self.pow(a, self.size - 2)

    def div(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.mul(a, self.inv(b))

    def prod(self, values: Iterable[FieldElem]) -> FieldElem:
        r = 1
        for v in values:
            r = self.mul(r, v)
        return r

    # -- vectorised arithmetic ---------------------------------------------

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        # exp has zeros past 2(N-1); log(0) points there, so exp[log a + log b]
        # is 0 whenever either factor is 0 and no masking is needed.
        n1 = self.size - 1
        exp = np.zeros(4 * n1 + 1, dtype=np.int64)
        g = self.generator
        x = 1
        for i in range(n1):
            exp[i] = x
            x = self.mul(x, g)
        exp[n1:2 * n1] = exp[:n1]
        log = np.empty(self.size, dtype=np.int64)
        log[exp[:n1]] = np.arange(n1)
        log[0] = 2 * n1
        return log, exp

    def vlog(self, a: np.ndarray) -> np.ndarray:
        return self._tables[0][a]

    def vmul(self, a, b) -> np.ndarray:
        log, exp = self._tables
        return exp[log[np.asarray(a)] + log[np.asarray(b)]]

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in GF(2^m)")
        log, exp = self._tables
        n1 = self.size - 1
        return exp[(n1 - log[a]) % n1]

    def vdiv(self, a, b) -> np.ndarray:
        return self.vmul(a, self.vinv(b))

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a)
        if e == 0:
            return np.ones_like(a)
        log, exp = self._tables
        n1 = self.size - 1
        out = exp[(log[a] * (e % n1)) % n1]
        return np.where(a == 0, 0, out)

    def vprod(self, a: np.ndarray, axis: int = -1) -> np.ndarray:
        """Product along ``axis``; zeros propagate."""
        a = np.asarray(a)
        log, exp = self._tables
        n1 = self.size - 1
        zero = np.any(a == 0, axis=axis)
        s = np.where(a == 0, 0, log[a]).sum(axis=axis) % n1
        return np.where(zero, 0, exp[s])

    def horner(self, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
        """Evaluate polynomials at points.

        ``coeffs`` is (P, L) low-degree first; ``xs`` broadcasts against a
        leading polynomial axis.  Returns (P, *xs.shape).
        """
        coeffs = np.asarray(coeffs, dtype=np.int64)
        xs = np.asarray(xs, dtype=np.int64)
        log, exp = self._tables
        lx = log[xs]
        shape = (coeffs.shape[0],) + xs.shape
        acc = np.zeros(shape, dtype=np.int64)
        extra = (None,) * xs.ndim
        for j in range(coeffs.shape[1] - 1, -1, -1):
            acc = exp[log[acc] + lx]
            acc ^= coeffs[(slice(None), j) + extra]
        return acc


def xor_reduce(a: np.ndarray, axis: int = -1) -> np.ndarray:
    return np.bitwise_xor.reduce(a, axis=axis)


# ---------------------------------------------------------------------------
# Tower F over B
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldTower:
    """F = GF(2^m) over B = GF(2^d), with a B-basis of F and its trace-dual."""

    field: FieldSpec
    d: int
    basis: tuple[FieldElem, ...]
    dual: tuple[FieldElem, ...]

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def t(self) -> int:
        return self.field.m // self.d

    @property
    def q(self) -> int:
        return 1 << self.d

    @cached_property
    def subfield_generator(self) -> FieldElem:
        """A primitive element of B."""
        f = self.field
        return f.pow(f.generator, (f.size - 1) // (self.q - 1))

    @cached_property
    def subfield_gf2_basis(self) -> tuple[FieldElem, ...]:
        """1, b, ..., b^(d-1): a GF(2)-basis of B."""
        b = self.subfield_generator
        return tuple(self.field.pow(b, i) for i in range(self.d))

    @cached_property
    def subfield_elements(self) -> tuple[FieldElem, ...]:
        b = self.subfield_generator
        return (0,) + tuple(sorted(self.field.pow(b, i) for i in range(self.q - 1)))

    def frobenius(self, x: FieldElem) -> FieldElem:
        """x -> x^q."""
        for _ in range(self.d):
            x = self.field.mul(x, x)
        return x

    def in_subfield(self, x: FieldElem) -> bool:
        return self.frobenius(x) == x

    def blow_up(self, x: FieldElem) -> list[int]:
        """GF(2)-spanning set of the B-line through x."""
        return [self.field.mul(b, x) for b in self.subfield_gf2_basis]

    def __str__(self) -> str:
        return f"GF(2^{self.m})/GF(2^{self.d})"


def _trace(field: FieldSpec, d: int, x: FieldElem) -> FieldElem:
    acc = x
    for _ in range(field.m // d - 1):
        for _ in range(d):
            x = field.mul(x, x)
        acc ^= x
    return acc


def _subfield_inverse_matrix(field: FieldSpec, mat: list[list[int]]) -> list[list[int]]:
    """Gauss-Jordan inverse; entries are field elements (here all in B)."""
    n = len(mat)
    a = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise SingularGram("trace Gram matrix is singular: elements are not a basis")
        a[col], a[piv] = a[piv], a[col]
        inv = field.inv(a[col][col])
        a[col] = [field.mul(inv, v) for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [v ^ field.mul(c, w) for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _dual_basis(field: FieldSpec, d: int, basis: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
    t = field.m // d
    if len(basis) != t:
        raise SingularGram(f"need {t} elements for a basis, got {len(basis)}")
    gram = [[_trace(field, d, field.mul(a, b)) for b in basis] for a in basis]
    ginv = _subfield_inverse_matrix(field, gram)
    out = []
    for i in range(t):
        v = 0
        for j in range(t):
            v ^= field.mul(ginv[i][j], basis[j])
        out.append(v)
    return tuple(out)


def make_tower(
    m: int,
    d: int,
    modulus: int | None = None,
    basis: Sequence[FieldElem] | None = None,
) -> FieldTower:
    """Build GF(2^m) over GF(2^d).

    Without ``modulus`` the built-in table is used (m <= 16).  The default
    basis is 1, g, ..., g^(t-1) for the primitive element g.
    """
    if d < 1 or m < 1 or m % d:
        raise DegreeNotDividing(f"d={d} does not divide m={m}")
    if modulus is None:
        if m not in DEFAULT_MODULI:
            raise NoDefaultModulus(f"no built-in modulus for m={m}; pass one explicitly")
        modulus = DEFAULT_MODULI[m]
    field = FieldSpec(m, modulus)
    t = m // d
    if basis is None:
        basis = tuple(field.pow(field.generator, i) for i in range(t))
    basis = tuple(basis)
    return FieldTower(field, d, basis, _dual_basis(field, d, basis))


# ---------------------------------------------------------------------------
# Operations on a tower
# ---------------------------------------------------------------------------

def trace(tower: FieldTower, beta: FieldElem) -> FieldElem:
    """tr_{F/B}(beta) = beta + beta^q + ... + beta^(q^(t-1))."""
    return _trace(tower.field, tower.d, beta)


def trace_array(tower: FieldTower, values) -> np.ndarray:
    f = tower.field
    values = np.asarray(values, dtype=np.int64)
    acc = values.copy()
    qi = 1
    for _ in range(tower.t - 1):
        qi *= tower.q
        acc ^= f.vpow(values, qi)
    return acc


def dual_basis(tower: FieldTower, basis: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
    """The basis V with tr(V[i] * basis[j]) = [i == j]."""
    return _dual_basis(tower.field, tower.d, basis)


def rank_over_subfield(tower: FieldTower, elements: Iterable[FieldElem]) -> int:
    """dim_B span_B(elements), via the GF(2)-rank of the B-blow-up."""
    vecs = [v for x in elements for v in tower.blow_up(x)]
    r = gf2_rank(vecs)
    assert r % tower.d == 0
    return r // tower.d


def subfield_ranks(tower: FieldTower, values) -> np.ndarray:
    """Row-wise ``rank_over_subfield`` of an (N, r) array."""
    values = np.asarray(values, dtype=np.int64)
    n, r = values.shape
    betas = np.array(tower.subfield_gf2_basis, dtype=np.int64)
    blown = tower.field.vmul(values[:, :, None], betas[None, None, :]).reshape(n, r * tower.d)
    return gf2_ranks(blown, tower.m) // tower.d


class SubfieldSpan:
    """An incrementally grown B-subspace of F that can report B-coordinates.

    Generators are kept only when they enlarge the span, so ``elements`` is
    always B-independent.
    """

    def __init__(self, tower: FieldTower, elements: Iterable[FieldElem] = ()):
        self.tower = tower
        self.elements: list[FieldElem] = []
        self._pivots: dict[int, tuple[int, int]] = {}
        for x in elements:
            self.add(x)

    def __len__(self) -> int:
        return len(self.elements)

    def _reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            p = self._pivots.get(v.bit_length() - 1)
            if p is None:
                break
            v ^= p[0]
            combo ^= p[1]
        return v, combo

    def __contains__(self, x: FieldElem) -> bool:
        return self._reduce(x)[0] == 0

    def add(self, x: FieldElem) -> bool:
        if x in self:
            return False
        j = len(self.elements)
        d = self.tower.d
        for l, v in enumerate(self.tower.blow_up(x)):
            v, combo = self._reduce(v)
            combo ^= 1 << (j * d + l)
            assert v, "B-blow-up of an element outside the span is independent"
            self._pivots[v.bit_length() - 1] = (v, combo)
        self.elements.append(x)
        return True

    def coords(self, x: FieldElem) -> list[FieldElem]:
        """c with x = sum c[j] * elements[j], every c[j] in B."""
        v, combo = self._reduce(x)
        if v:
            raise NotInSpan(f"{to_hex(x)} is not in the B-span")
        # pivots store combos of the *reduced* vectors, so combo expresses x
        # directly in terms of the blow-up vectors b_l * elements[j].
        d = self.tower.d
        betas = self.tower.subfield_gf2_basis
        out = []
        for j in range(len(self.elements)):
            c = 0
            for l in range(d):
                if combo >> (j * d + l) & 1:
                    c ^= betas[l]
            out.append(c)
        return out


def coords_over_span(
    tower: FieldTower, basis: Sequence[FieldElem], v: FieldElem
) -> list[FieldElem]:
    """B-coordinates of ``v`` in a B-independent ``basis``."""
    span = SubfieldSpan(tower)
    for x in basis:
        if not span.add(x):
            raise NotInSpan("basis elements are B-dependent")
    return span.coords(v)
