"""Polynomials over F, Lagrange interpolation, and (generalised) Reed-Solomon codes."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlphaNotInS,
    AlphaStarInS,
    DuplicatePoint,
    InvalidCode,
    MessageDegreeTooHigh,
    TooLargeToEnumerate,
)
from .gf import FieldElem, FieldSpec, FieldTower, from_hex, to_hex


class PolyF:
    """Dense polynomial over GF(2^m), lowest degree first, no trailing zeros.

    The zero polynomial has no coefficients and ``degree == -1``.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable[FieldElem] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs: tuple[FieldElem, ...] = tuple(c)

    @classmethod
    def constant(cls, field: FieldSpec, c: FieldElem) -> PolyF:
        return cls(field, [c])

    @classmethod
    def x(cls, field: FieldSpec) -> PolyF:
        return cls(field, [0, 1])

    @classmethod
    def from_roots(cls, field: FieldSpec, roots: Iterable[FieldElem]) -> PolyF:
        return vanishing_poly(field, roots)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyF):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"PolyF([{', '.join(map(to_hex, self.coeffs))}])"

    def __call__(self, x: FieldElem) -> FieldElem:
        mul = self.field.mul
        acc = 0
        for c in reversed(self.coeffs):
            acc = mul(acc, x) ^ c
        return acc

    def __add__(self, other: PolyF) -> PolyF:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return PolyF(self.field, [x ^ (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __sub__ = __add__

    def __mul__(self, other: PolyF | int) -> PolyF:
        mul = self.field.mul
        if isinstance(other, int):
            return PolyF(self.field, [mul(c, other) for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return PolyF(self.field)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] ^= mul(a, b)
        return PolyF(self.field, out)

    __rmul__ = __mul__

    def divmod_linear(self, root: FieldElem) -> tuple[PolyF, FieldElem]:
        """Synthetic division by (X - root)."""
        mul = self.field.mul
        out = []
        acc = 0
        for c in reversed(self.coeffs):
            acc = mul(acc, root) ^ c
            out.append(acc)
        rem = out.pop() if out else 0
        return PolyF(self.field, reversed(out)), rem

    def derivative(self) -> PolyF:
        return formal_derivative(self)

    def shift(self, a: FieldElem) -> PolyF:
        """p(X + a).

        In characteristic 2, C(e, j) is odd exactly when the bits of j are a
        subset of the bits of e (Lucas), so only those terms survive.
        """
        f = self.field
        out = [0] * len(self.coeffs)
        powers = [1]
        for _ in range(len(self.coeffs)):
            powers.append(f.mul(powers[-1], a))
        for e, c in enumerate(self.coeffs):
            if not c:
                continue
            j = e
            while True:
                out[j] ^= f.mul(c, powers[e - j])
                if j == 0:
                    break
                j = (j - 1) & e
        return PolyF(f, out)

    def evaluate_many(self, xs) -> np.ndarray:
        coeffs = np.array([self.coeffs or (0,)], dtype=np.int64)
        return self.field.horner(coeffs, np.asarray(xs))[0]

    def to_hex(self) -> str:
        return " ".join(to_hex(c) for c in self.coeffs) or "0"

    @classmethod
    def from_hex(cls, field: FieldSpec, text: str) -> PolyF:
        return cls(field, [from_hex(tok) for tok in text.split()])


def coefficient_matrix(polys: Sequence[PolyF], width: int | None = None) -> np.ndarray:
    """Stack polynomials into a zero-padded (len(polys), width) int array."""
    width = width or max((len(p) for p in polys), default=1) or 1
    out = np.zeros((len(polys), width), dtype=np.int64)
    for i, p in enumerate(polys):
        out[i, : len(p)] = p.coeffs
    return out


def poly_eval(p: PolyF, alpha: FieldElem) -> FieldElem:
    return p(alpha)


def formal_derivative(p: PolyF) -> PolyF:
    # i * c_i vanishes for even i in characteristic 2
    return PolyF(p.field, [c if i % 2 else 0 for i, c in enumerate(p.coeffs)][1:])


def _check_distinct(points: Sequence[FieldElem]) -> None:
    if len(set(points)) != len(points):
        seen = set()
        dup = next(x for x in points if x in seen or seen.add(x))
        raise DuplicatePoint(f"point {to_hex(dup)} appears more than once")


def vanishing_poly(field: FieldSpec, roots: Iterable[FieldElem]) -> PolyF:
    """Monic polynomial whose roots are exactly ``roots``."""
    roots = list(roots)
    _check_distinct(roots)
    mul = field.mul
    c = [1]
    for r in roots:
        nxt = [0] * (len(c) + 1)
        for i, a in enumerate(c):
            nxt[i + 1] ^= a
            nxt[i] ^= mul(a, r)
        c = nxt
    return PolyF(field, c)


def lagrange_interpolate(
    field: FieldSpec, points: Sequence[tuple[FieldElem, FieldElem]]
) -> PolyF:
    """The unique polynomial of degree < len(points) through ``points``."""
    xs = [x for x, _ in points]
    _check_distinct(xs)
    if not points:
        return PolyF(field)
    master = vanishing_poly(field, xs)
    dmaster = formal_derivative(master)
    acc = [0] * len(points)
    for x, y in points:
        if not y:
            continue
        basis, _ = master.divmod_linear(x)
        scale = field.div(y, dmaster(x))
        for i, c in enumerate(basis.coeffs):
            acc[i] ^= field.mul(c, scale)
    return PolyF(field, acc)


def lagrange_coeff(
    field: FieldSpec,
    support: Iterable[FieldElem],
    alpha: FieldElem,
    alpha_star: FieldElem,
) -> FieldElem:
    """prod_{b in S \\ alpha} (alpha* - b) / (alpha - b).

    For every f of degree < |S|: f(alpha*) = sum_{a in S} coeff(S, a, alpha*) f(a).
    """
    support = list(support)
    _check_distinct(support)
    if alpha not in support:
        raise AlphaNotInS(f"{to_hex(alpha)} is not in S")
    if alpha_star in support:
        raise AlphaStarInS(f"{to_hex(alpha_star)} is in S")
    num = den = 1
    for b in support:
        if b != alpha:
            num = field.mul(num, alpha_star ^ b)
            den = field.mul(den, alpha ^ b)
    return field.div(num, den)


def _dual_multipliers_array(field: FieldSpec, points: Sequence[FieldElem]) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    n = len(pts)
    out = np.empty(n, dtype=np.int64)
    chunk = max(1, (1 << 22) // max(n, 1))
    for s in range(0, n, chunk):
        diff = pts[s:s + chunk, None] ^ pts[None, :]
        diff[np.arange(diff.shape[0]), np.arange(s, s + diff.shape[0])] = 1
        out[s:s + chunk] = field.vprod(diff, axis=1)
    return field.vinv(out)


def grs_dual_multipliers(field: FieldSpec, points: Sequence[FieldElem]) -> tuple[FieldElem, ...]:
    """lambda_i = prod_{j != i} (alpha_i - alpha_j)^-1, so RS(A,k)^perp = GRS(A,n-k,lambda)."""
    points = list(points)
    _check_distinct(points)
    return tuple(int(v) for v in _dual_multipliers_array(field, points))


@dataclass(frozen=True, eq=False)
class RsCode:
    """RS(A, k), or GRS(A, k, lambda) when ``multipliers`` is given."""

    tower: FieldTower
    points: tuple[FieldElem, ...]
    k: int
    multipliers: tuple[FieldElem, ...] | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        size = self.tower.field.size
        if any(not 0 <= a < size for a in pts):
            raise InvalidCode("evaluation point outside the field")
        _check_distinct(pts)
        if not 1 <= self.k <= len(pts):
            raise InvalidCode(f"need 1 <= k <= n, got k={self.k}, n={len(pts)}")
        if self.multipliers is not None:
            lam = tuple(self.multipliers)
            if len(lam) != len(pts) or any(v == 0 for v in lam):
                raise InvalidCode("GRS multipliers must be n nonzero field elements")
            object.__setattr__(self, "multipliers", lam)
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(pts)})

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def field(self) -> FieldSpec:
        return self.tower.field

    def index(self, alpha: FieldElem) -> int:
        return self._index[alpha]

    def __contains__(self, alpha: FieldElem) -> bool:
        return alpha in self._index

    @cached_property
    def points_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.int64)

    @cached_property
    def dual_multipliers(self) -> np.ndarray:
        """GRS multipliers of RS(A, k)^perp; they depend on A only."""
        return _dual_multipliers_array(self.field, self.points)

    @cached_property
    def multipliers_array(self) -> np.ndarray:
        if self.multipliers is None:
            return np.ones(self.n, dtype=np.int64)
        return np.asarray(self.multipliers, dtype=np.int64)

    def same_points(self, other: RsCode) -> bool:
        return self.field == other.field and self.points == other.points


def encode(code: RsCode, message: PolyF | Sequence[FieldElem]) -> list[FieldElem]:
    """Codeword (lambda_i f(alpha_i))_i of a message polynomial of degree < k."""
    if not isinstance(message, PolyF):
        message = PolyF(code.field, message)
    if message.degree >= code.k:
        raise MessageDegreeTooHigh(f"message degree {message.degree} >= k={code.k}")
    mul = code.field.mul
    lam = code.multipliers or (1,) * code.n
    return [mul(l, message(a)) for l, a in zip(lam, code.points)]


def encode_many(code: RsCode, messages) -> np.ndarray:
    """Encode an (S, k) array of message coefficients into an (S, n) array."""
    messages = np.asarray(messages, dtype=np.int64)
    if messages.ndim != 2 or messages.shape[1] > code.k:
        raise MessageDegreeTooHigh(f"messages must be (S, <= {code.k}) arrays")
    f = code.field
    out = f.horner(messages, code.points_array)
    if code.multipliers is not None:
        out = f.vmul(out, code.multipliers_array[None, :])
    return out


def minimum_distance(field: FieldSpec, generator_rows: Sequence[Sequence[FieldElem]],
                     budget: int = 1 << 20) -> int:
    """Minimum Hamming weight of a nonzero F-combination of ``generator_rows``.

    Brute force over all |F|^k messages; zero combinations are skipped so
    the rows need not be independent.
    """
    rows = np.asarray(generator_rows, dtype=np.int64)
    k, n = rows.shape
    if field.size ** k > budget:
        raise TooLargeToEnumerate(f"|F|^k = {field.size}^{k} exceeds {budget}")
    best = n + 1
    total = field.size ** k
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        msgs = (idx[:, None] >> (field.m * np.arange(k))[None, :]) & (field.size - 1)
        words = np.bitwise_xor.reduce(field.vmul(msgs[:, :, None], rows[None, :, :]), axis=1)
        weights = np.count_nonzero(words, axis=1)
        weights = weights[weights > 0]
        if weights.size:
            best = min(best, int(weights.min()))
    return best


def generator_rows(code: RsCode) -> list[list[FieldElem]]:
    return [encode(code, PolyF(code.field, [0] * i + [1])) for i in range(code.k)]


def mds_distance(code: RsCode, budget: int = 1 << 20) -> int:
    """Minimum distance of the code by enumeration; n - k + 1 for any (G)RS code."""
    if code.field.size ** code.k > budget:
        raise TooLargeToEnumerate(f"|F|^k = {code.field.size}^{code.k} exceeds {budget}")
    return minimum_distance(code.field, generator_rows(code), budget)
