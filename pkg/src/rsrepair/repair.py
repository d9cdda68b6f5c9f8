"""Linear repair schemes for RS codes, represented by dual polynomials.

A scheme assigns to each evaluation point ``alpha*`` a list of ``t``
polynomials of degree < n - k.  Their values at ``alpha*`` must span F over
B; the B-dimension of their values at every other ``alpha`` is the number of
sub-symbols that node has to send.  Repair itself follows the trace-query
framework: ask each surviving node for a few traces of its symbol, combine
them into tr(zeta_i f(alpha*)) for a basis zeta, and undo the trace with the
dual basis.

In characteristic 2 the sign in p(alpha*) = -zeta disappears, so the code
reads p(alpha*) = zeta throughout.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import InitVar, dataclass, field
from functools import cached_property
from typing import Any, Iterator, Sequence, TextIO

import numpy as np

from .errors import (
    DegreeTooHigh,
    InvalidScheme,
    NotADualCodeword,
    PointNotInCode,
    RankDeficientAtStar,
    RepairError,
    SchemeFormatError,
)
from .gf import (
    FieldElem,
    SubfieldSpan,
    dual_basis,
    from_hex,
    make_tower,
    rank_over_subfield,
    subfield_ranks,
    to_hex,
    trace_array,
    xor_reduce,
)
from .rs import PolyF, RsCode, coefficient_matrix, lagrange_interpolate

_BLOCK_ELEMS = 1 << 21


class _ShiftedPolys(Mapping):
    """alpha* -> (h_1(X - alpha*), ..., h_t(X - alpha*)), expanded on access."""

    def __init__(self, points: Sequence[FieldElem], base: tuple[PolyF, ...]):
        self._points = tuple(points)
        self._keys = frozenset(self._points)
        self._base = base
        self._cache: dict[FieldElem, tuple[PolyF, ...]] = {}

    def __getitem__(self, alpha_star: FieldElem) -> tuple[PolyF, ...]:
        if alpha_star not in self._keys:
            raise KeyError(alpha_star)
        got = self._cache.get(alpha_star)
        if got is None:
            got = tuple(h.shift(alpha_star) for h in self._base)
            self._cache[alpha_star] = got
        return got

    def __iter__(self) -> Iterator[FieldElem]:
        return iter(self._points)

    def __len__(self) -> int:
        return len(self._points)


@dataclass(frozen=True, eq=False)
class RepairScheme:
    """P(alpha*) for every alpha* in the code's evaluation set.

    ``shift_base`` marks a translation-invariant family, P(alpha*) =
    {h(X - alpha*)}; ``polys`` is then generated lazily and evaluations come
    from one table of h over the whole field.
    """

    code: RsCode
    polys: Mapping[FieldElem, tuple[PolyF, ...]]
    shift_base: tuple[PolyF, ...] | None = None
    check: InitVar[bool] = True
    _plans: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self, check: bool) -> None:
        if check:
            check_structure(self)

    @classmethod
    def translates(cls, code: RsCode, base: Sequence[PolyF], check: bool = True) -> RepairScheme:
        base = tuple(base)
        return cls(code, _ShiftedPolys(code.points, base), base, check)

    @property
    def t(self) -> int:
        return self.code.tower.t

    @property
    def tower(self):
        return self.code.tower

    @cached_property
    def _coeff_tensor(self) -> np.ndarray:
        polys = [p for a in self.code.points for p in self.polys[a]]
        width = max(1, max(len(p) for p in polys))
        return coefficient_matrix(polys, width).reshape(self.code.n, self.t, width)

    @cached_property
    def _base_table(self) -> np.ndarray:
        f = self.code.field
        return f.horner(coefficient_matrix(self.shift_base), np.arange(f.size))

    def evaluations(self, alpha_star: FieldElem, use_shift: bool = True) -> np.ndarray:
        """(t, n) array of p_i(alpha) over the code's points, in order."""
        if self.shift_base is not None and use_shift:
            return self._base_table[:, self.code.points_array ^ alpha_star]
        i = self.code.index(alpha_star)
        return self.code.field.horner(self._coeff_tensor[i], self.code.points_array)

    def star_values(self, use_shift: bool = True) -> np.ndarray:
        """(n, t) array of p_i(alpha*) for each alpha*."""
        code = self.code
        if self.shift_base is not None and use_shift:
            return np.broadcast_to(self._base_table[:, 0], (code.n, self.t))
        f = code.field
        coeffs = self._coeff_tensor
        log, exp = f._tables
        lx = log[code.points_array][:, None]
        acc = np.zeros((code.n, self.t), dtype=np.int64)
        for j in range(coeffs.shape[2] - 1, -1, -1):
            acc = exp[log[acc] + lx] ^ coeffs[:, :, j]
        return acc

    def degrees(self, alpha_star: FieldElem) -> list[int]:
        if self.shift_base is not None:
            return [h.degree for h in self.shift_base]
        return [p.degree for p in self.polys[alpha_star]]


def check_structure(scheme: RepairScheme, use_shift: bool = True) -> None:
    """Coverage, degree < n - k, and full rank at every alpha*."""
    code = scheme.code
    t = scheme.t
    if set(scheme.polys.keys()) != set(code.points):
        raise InvalidScheme("scheme must give polynomials for exactly the code's points")
    if scheme.shift_base is not None and len(scheme.shift_base) != t:
        raise InvalidScheme(f"need {t} base polynomials, got {len(scheme.shift_base)}")
    limit = code.n - code.k
    for a in code.points:
        if scheme.shift_base is None and len(scheme.polys[a]) != t:
            raise InvalidScheme(
                f"alpha*={to_hex(a)} has {len(scheme.polys[a])} polynomials, need {t}"
            )
        for i, deg in enumerate(scheme.degrees(a)):
            if deg >= limit:
                raise DegreeTooHigh(a, i, deg, limit)
        if scheme.shift_base is not None:
            break
    ranks = subfield_ranks(scheme.tower, scheme.star_values(use_shift))
    bad = np.flatnonzero(ranks < t)
    if bad.size:
        raise RankDeficientAtStar(code.points[bad[0]], int(ranks[bad[0]]), t)


# ---------------------------------------------------------------------------
# Validation report
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StarReport:
    """Bandwidth profile for one erased point.

    ``dims`` is aligned with the code's points; the entry for alpha* itself
    is 0 since that node is never queried.
    """

    alpha_star: FieldElem
    dims: np.ndarray
    subsymbols: int
    bits: int
    locality: int

    def to_dict(self, with_dims: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {"alpha_star": to_hex(self.alpha_star)}
        if with_dims:
            out["dims"] = [int(v) for v in self.dims]
        out.update(subsymbols=self.subsymbols, bits=self.bits, locality=self.locality)
        return out


@dataclass(frozen=True, eq=False)
class SchemeReport:
    code: RsCode
    per_star: dict[FieldElem, StarReport]
    bandwidth_subsymbols: int
    bandwidth_bits: int
    max_locality: int

    @property
    def t(self) -> int:
        return self.code.tower.t

    def bits_by_point(self) -> list[int]:
        return [self.per_star[a].bits for a in self.code.points]

    def subsymbols_by_point(self) -> list[int]:
        return [self.per_star[a].subsymbols for a in self.code.points]

    def to_dict(self, with_dims: bool = True) -> dict[str, Any]:
        tower = self.code.tower
        return {
            "field": {"m": tower.m, "d": tower.d, "modulus": to_hex(tower.field.modulus)},
            "n": self.code.n,
            "k": self.code.k,
            "t": tower.t,
            "points": [to_hex(a) for a in self.code.points],
            "per_star": [self.per_star[a].to_dict(with_dims) for a in self.code.points],
            "bandwidth_subsymbols": self.bandwidth_subsymbols,
            "bandwidth_bits": self.bandwidth_bits,
            "max_locality": self.max_locality,
        }


def _star_report(code: RsCode, alpha_star: FieldElem, ranks: np.ndarray) -> StarReport:
    dims = ranks.astype(np.int64, copy=True)
    dims[code.index(alpha_star)] = 0
    sub = int(dims.sum())
    return StarReport(alpha_star, dims, sub, sub * code.tower.d, int(np.count_nonzero(dims)))


def _rank_rows(scheme: RepairScheme, alpha_stars: Sequence[FieldElem], use_shift: bool) -> Iterator[tuple[FieldElem, np.ndarray]]:
    code = scheme.code
    tower = code.tower
    if scheme.shift_base is not None and use_shift:
        table = subfield_ranks(tower, scheme._base_table.T)
        for a in alpha_stars:
            yield a, table[code.points_array ^ a]
        return
    per = max(1, _BLOCK_ELEMS // (code.n * scheme.t))
    for s in range(0, len(alpha_stars), per):
        block = alpha_stars[s:s + per]
        evals = np.stack([scheme.evaluations(a, use_shift=False) for a in block])
        ranks = subfield_ranks(tower, evals.transpose(0, 2, 1).reshape(-1, scheme.t))
        for a, row in zip(block, ranks.reshape(len(block), code.n)):
            yield a, row


def validate(scheme: RepairScheme, use_shift: bool = True) -> SchemeReport:
    """Check a scheme and compute its per-point bandwidth.

    Raises DegreeTooHigh or RankDeficientAtStar for invalid schemes.
    """
    check_structure(scheme, use_shift)
    code = scheme.code
    per_star = {
        a: _star_report(code, a, ranks)
        for a, ranks in _rank_rows(scheme, list(code.points), use_shift)
    }
    worst = max(r.subsymbols for r in per_star.values())
    return SchemeReport(
        code=code,
        per_star=per_star,
        bandwidth_subsymbols=worst,
        bandwidth_bits=worst * code.tower.d,
        max_locality=max(r.locality for r in per_star.values()),
    )


# ---------------------------------------------------------------------------
# Multipliers (the mu coefficients) and the inverse map
# ---------------------------------------------------------------------------

def _point_index(code: RsCode, alpha_star: FieldElem) -> int:
    if alpha_star not in code:
        raise PointNotInCode(f"{to_hex(alpha_star)} is not an evaluation point")
    return code.index(alpha_star)


def _mu_array(scheme: RepairScheme, alpha_star: FieldElem) -> tuple[np.ndarray, np.ndarray]:
    code = scheme.code
    f = code.field
    star = _point_index(code, alpha_star)
    evals = scheme.evaluations(alpha_star)
    lam = code.dual_multipliers
    ratio = f.vdiv(lam, np.full_like(lam, lam[star]))
    mu = f.vmul(evals, ratio[None, :])
    mu[:, star] = 0
    return evals[:, star].copy(), mu


def _check_star(scheme: RepairScheme, alpha_star: FieldElem) -> None:
    code = scheme.code
    limit = code.n - code.k
    polys = scheme.polys[alpha_star] if scheme.shift_base is None else scheme.shift_base
    if len(polys) != scheme.t:
        raise InvalidScheme(f"alpha*={to_hex(alpha_star)} needs {scheme.t} polynomials")
    for i, p in enumerate(polys):
        if p.degree >= limit:
            raise DegreeTooHigh(alpha_star, i, p.degree, limit)
    zeta = [int(v) for v in scheme.evaluations(alpha_star)[:, code.index(alpha_star)]]
    r = rank_over_subfield(scheme.tower, zeta)
    if r < scheme.t:
        raise RankDeficientAtStar(alpha_star, r, scheme.t)


def multipliers(
    scheme: RepairScheme, alpha_star: FieldElem
) -> tuple[tuple[FieldElem, ...], dict[tuple[FieldElem, int], FieldElem]]:
    """Basis Z and coefficients mu with zeta_i f(alpha*) = sum_alpha mu[alpha, i] f(alpha).

    mu[alpha, i] = p_i(alpha) * lambda_alpha / lambda_alpha*, with lambda the
    dual-code multipliers of the evaluation set.
    """
    _point_index(scheme.code, alpha_star)
    _check_star(scheme, alpha_star)
    zeta, mu = _mu_array(scheme, alpha_star)
    out = {}
    for j, a in enumerate(scheme.code.points):
        if a == alpha_star:
            continue
        for i in range(scheme.t):
            out[a, i] = int(mu[i, j])
    return tuple(int(z) for z in zeta), out


def from_mu(
    code: RsCode,
    data: Mapping[FieldElem, tuple[Sequence[FieldElem], Mapping[tuple[FieldElem, int], FieldElem]]],
    check: bool = True,
) -> RepairScheme:
    """Rebuild P(alpha*) from (Z, mu) for every alpha*.

    The vector with ``zeta`` at alpha* and mu at the other points is a dual
    codeword; dividing out the dual multipliers and interpolating gives p.
    """
    f = code.field
    lam = [int(v) for v in code.dual_multipliers]
    polys = {}
    for a_star, (zeta, mu) in data.items():
        star = _point_index(code, a_star)
        row = []
        for i, z in enumerate(zeta):
            for j in range(code.k):
                lhs = f.mul(z, f.pow(a_star, j))
                rhs = 0
                for a in code.points:
                    if a != a_star:
                        rhs ^= f.mul(mu.get((a, i), 0), f.pow(a, j))
                if lhs != rhs:
                    raise NotADualCodeword(
                        f"mu for alpha*={to_hex(a_star)}, zeta index {i} fails on X^{j}"
                    )
            pts = []
            for idx, a in enumerate(code.points):
                c = z if idx == star else mu.get((a, i), 0)
                pts.append((a, f.div(f.mul(c, lam[star]), lam[idx])))
            p = lagrange_interpolate(f, pts)
            if p.degree >= code.n - code.k:
                raise NotADualCodeword(f"interpolated degree {p.degree} >= n - k")
            row.append(p)
        polys[a_star] = tuple(row)
    return RepairScheme(code, polys, check=check)


# ---------------------------------------------------------------------------
# Repair execution
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RepairPlan:
    """Everything about repairing alpha* that does not depend on the data.

    Query q goes to node ``node_index[q]`` and asks for tr(gammas[q] f(alpha)).
    tr(zeta_i f(alpha*)) = sum_q weights[i, q] * response[q].
    """

    alpha_star: FieldElem
    star_index: int
    zeta: tuple[FieldElem, ...]
    nu: tuple[FieldElem, ...]
    node_index: np.ndarray
    gammas: np.ndarray
    weights: np.ndarray
    dims: np.ndarray

    @property
    def downloaded(self) -> int:
        return int(self.gammas.size)


def plan_repair(scheme: RepairScheme, alpha_star: FieldElem) -> RepairPlan:
    cached = scheme._plans.get(alpha_star)
    if cached is not None:
        return cached
    code = scheme.code
    tower = code.tower
    star = _point_index(code, alpha_star)
    _check_star(scheme, alpha_star)
    zeta, mu = _mu_array(scheme, alpha_star)
    zeta_t = tuple(int(z) for z in zeta)
    nu = dual_basis(tower, zeta_t)
    t = scheme.t

    node_index, gammas, wcols = [], [], []
    dims = np.zeros(code.n, dtype=np.int64)
    for j in range(code.n):
        if j == star:
            continue
        col = [int(v) for v in mu[:, j]]
        if not any(col):
            continue
        # greedy B-basis in zeta order keeps transcripts reproducible
        span = SubfieldSpan(tower)
        for v in col:
            span.add(v)
        coords = [span.coords(v) for v in col]
        dims[j] = len(span)
        for g_idx, g in enumerate(span.elements):
            node_index.append(j)
            gammas.append(g)
            wcols.append([coords[i][g_idx] for i in range(t)])
    plan = RepairPlan(
        alpha_star=alpha_star,
        star_index=star,
        zeta=zeta_t,
        nu=nu,
        node_index=np.asarray(node_index, dtype=np.int64),
        gammas=np.asarray(gammas, dtype=np.int64),
        weights=np.asarray(wcols, dtype=np.int64).reshape(-1, t).T.copy(),
        dims=dims,
    )
    scheme._plans[alpha_star] = plan
    return plan


@dataclass(frozen=True, eq=False)
class BatchRepair:
    plan: RepairPlan
    responses: np.ndarray      # (S, Q) trace values in B
    recovered_message: np.ndarray  # (S,) f(alpha*)
    reconstructed: np.ndarray  # (S,) lambda* f(alpha*), the erased symbols

    @property
    def downloaded_per_stripe(self) -> np.ndarray:
        return np.full(self.responses.shape[0], self.responses.shape[1], dtype=np.int64)


def repair_batch(scheme: RepairScheme, codewords, alpha_star: FieldElem) -> BatchRepair:
    """Repair position alpha* in each row of an (S, n) array of codewords.

    Column alpha* is never read.
    """
    code = scheme.code
    f = code.field
    tower = code.tower
    plan = plan_repair(scheme, alpha_star)
    words = np.asarray(codewords, dtype=np.int64)
    if words.ndim == 1:
        words = words[None, :]
    if words.shape[1] != code.n:
        raise ValueError(f"codewords must have length n={code.n}")

    held = words[:, plan.node_index]
    if code.multipliers is not None:
        # node alpha knows lambda_alpha and can answer about f(alpha) directly
        held = f.vdiv(held, code.multipliers_array[plan.node_index][None, :])
    responses = trace_array(tower, f.vmul(plan.gammas[None, :], held))

    partial = f.vmul(plan.weights[None, :, :], responses[:, None, :])
    star_traces = xor_reduce(partial, axis=2) if partial.shape[2] else np.zeros(partial.shape[:2], dtype=np.int64)
    nu = np.asarray(plan.nu, dtype=np.int64)
    message = xor_reduce(f.vmul(star_traces, nu[None, :]), axis=1)
    symbol = message
    if code.multipliers is not None:
        symbol = f.vmul(message, code.multipliers_array[plan.star_index])
    return BatchRepair(plan, responses, message, symbol)


@dataclass(frozen=True, eq=False)
class RepairTranscript:
    alpha_star: FieldElem
    queries: dict[FieldElem, list[FieldElem]]
    responses: dict[FieldElem, list[FieldElem]]
    reconstructed: FieldElem
    message_value: FieldElem
    downloaded_subsymbols: int
    subsymbol_bits: int

    @property
    def downloaded_bits(self) -> int:
        return self.downloaded_subsymbols * self.subsymbol_bits

    @property
    def locality(self) -> int:
        return sum(1 for q in self.queries.values() if q)

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha_star": to_hex(self.alpha_star),
            "queries": {to_hex(a): [to_hex(g) for g in q] for a, q in self.queries.items() if q},
            "responses": {to_hex(a): [to_hex(r) for r in v] for a, v in self.responses.items() if v},
            "reconstructed": to_hex(self.reconstructed),
            "downloaded_subsymbols": self.downloaded_subsymbols,
            "downloaded_bits": self.downloaded_bits,
            "locality": self.locality,
        }


def transcripts(scheme: RepairScheme, batch: BatchRepair) -> list[RepairTranscript]:
    code = scheme.code
    plan = batch.plan
    points = code.points
    bounds = np.flatnonzero(np.diff(plan.node_index)) + 1
    groups = np.split(np.arange(plan.downloaded), bounds) if plan.downloaded else []
    queried = {points[int(plan.node_index[g[0]])]: g for g in groups}
    queries = {
        a: ([int(x) for x in plan.gammas[queried[a]]] if a in queried else [])
        for a in points if a != plan.alpha_star
    }
    out = []
    for s in range(batch.responses.shape[0]):
        row = batch.responses[s]
        resp = {
            a: ([int(x) for x in row[queried[a]]] if a in queried else [])
            for a in queries
        }
        out.append(RepairTranscript(
            alpha_star=plan.alpha_star,
            queries=queries,
            responses=resp,
            reconstructed=int(batch.reconstructed[s]),
            message_value=int(batch.recovered_message[s]),
            downloaded_subsymbols=int(row.size),
            subsymbol_bits=code.tower.d,
        ))
    return out


def repair(scheme: RepairScheme, codeword: Sequence[FieldElem], alpha_star: FieldElem) -> RepairTranscript:
    """Run the trace-query repair of position alpha* on one codeword."""
    _point_index(scheme.code, alpha_star)
    return transcripts(scheme, repair_batch(scheme, np.asarray(codeword)[None, :], alpha_star))[0]


# ---------------------------------------------------------------------------
# Scheme file format
# ---------------------------------------------------------------------------

def write_scheme(scheme: RepairScheme, fp: TextIO) -> None:
    """``m d modulus n k`` header, n point lines, then t polynomial lines per point."""
    code = scheme.code
    tower = code.tower
    fp.write(f"{tower.m} {tower.d} {to_hex(tower.field.modulus)} {code.n} {code.k}\n")
    for a in code.points:
        fp.write(to_hex(a) + "\n")
    for a in code.points:
        for p in scheme.polys[a]:
            fp.write(p.to_hex() + "\n")


def read_scheme(fp: TextIO, check: bool = True) -> RepairScheme:
    lines = [ln.strip() for ln in fp if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise SchemeFormatError("empty scheme file")
    head = lines[0].split()
    if len(head) != 5:
        raise SchemeFormatError("header must be: m d modulus_hex n k")
    try:
        m, d = int(head[0]), int(head[1])
        modulus = from_hex(head[2])
        n, k = int(head[3]), int(head[4])
        tower = make_tower(m, d, modulus)
        t = tower.t
        if len(lines) != 1 + n + n * t:
            raise SchemeFormatError(
                f"expected {1 + n + n * t} non-comment lines, found {len(lines)}"
            )
        points = [from_hex(s) for s in lines[1:1 + n]]
        code = RsCode(tower, points, k)
        body = lines[1 + n:]
        polys = {
            a: tuple(PolyF.from_hex(tower.field, body[i * t + j]) for j in range(t))
            for i, a in enumerate(points)
        }
    except RepairError:
        raise
    except ValueError as exc:
        raise SchemeFormatError(str(exc)) from exc
    return RepairScheme(code, polys, check=check)
