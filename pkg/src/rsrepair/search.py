"""Exhaustive search for low-bandwidth repair schemes on small codes.

Candidates are fixed polynomials of degree < n - k, independent of alpha*.
A tuple of t candidates yields one B-rank per evaluation point, and those
ranks serve every alpha* at once: the tuple is admissible for alpha* when
its rank there is t, and it then costs the sum of the ranks elsewhere.  So
each tuple is ranked exactly once and scored against all alpha* in a single
vectorized pass.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import InvalidDimensions, NoValidTuple, SearchSpaceTooLarge, WrongCode
from .gf import FieldTower, make_tower, subfield_ranks, to_hex
from .repair import RepairScheme, SchemeReport
from .rs import PolyF, RsCode, coefficient_matrix
from .schemes import HDFS_TABLE_BITS, hdfs_code

_BLOCK_ELEMS = 1 << 20
_NONE = np.iinfo(np.int64).max


@dataclass(frozen=True)
class SearchConfig:
    """``roots_in_A_only``: monic polynomials of degree max_degree with
    distinct roots in A.  Otherwise every nonzero polynomial of degree
    <= max_degree.  ``scalars`` also scales polynomials 2..t by coset
    representatives of F*/B*, which the monic search never reaches.
    """

    roots_in_A_only: bool = True
    max_degree: int | None = None
    per_star_budget: int | None = None
    parallel: bool = False
    jobs: int = 1
    scalars: bool = False


@dataclass(frozen=True)
class Candidate:
    poly: PolyF
    label: tuple[int, ...]  # root indices into A, or the little-endian coefficient digits

    def to_dict(self) -> dict[str, Any]:
        return {"label": list(self.label), "poly": self.poly.to_hex()}


@dataclass(frozen=True)
class SearchResult:
    scheme: RepairScheme = field(compare=False)
    choices: tuple[tuple[int, ...], ...]  # per alpha*: candidate indices
    scalars: tuple[tuple[int, ...], ...]  # per alpha*: multiplier per polynomial
    per_star_subsymbols: tuple[int, ...]
    per_star_bits: tuple[int, ...]
    candidates_per_star: int
    tuples_per_star: int
    elapsed: float = field(compare=False)

    @property
    def code(self) -> RsCode:
        return self.scheme.code

    @property
    def candidates_examined(self) -> int:
        return self.tuples_per_star * self.code.n

    @property
    def max_bits(self) -> int:
        return max(self.per_star_bits)

    def to_dict(self) -> dict[str, Any]:
        code = self.code
        return {
            "n": code.n,
            "k": code.k,
            "candidates_per_star": self.candidates_per_star,
            "tuples_per_star": self.tuples_per_star,
            "per_star": [
                {
                    "alpha_star": to_hex(a),
                    "choice": list(c),
                    "scalars": [to_hex(s) for s in sc],
                    "subsymbols": sub,
                    "bits": bits,
                }
                for a, c, sc, sub, bits in zip(
                    code.points, self.choices, self.scalars,
                    self.per_star_subsymbols, self.per_star_bits,
                )
            ],
            "max_bits": self.max_bits,
            "elapsed_s": round(self.elapsed, 3),
        }


def enumerate_candidates(code: RsCode, cfg: SearchConfig) -> list[Candidate]:
    f = code.field
    limit = code.n - code.k - 1
    deg = limit if cfg.max_degree is None else cfg.max_degree
    if deg > limit or deg < 0:
        raise InvalidDimensions(f"max_degree must lie in [0, {limit}], got {deg}")
    if cfg.roots_in_A_only:
        return [
            Candidate(PolyF.from_roots(f, [code.points[i] for i in idx]), idx)
            for idx in itertools.combinations(range(code.n), deg)
        ]
    count = f.size ** (deg + 1) - 1
    _check_budget(count, cfg)
    out = []
    for i in range(1, count + 1):
        digits = []
        v = i
        for _ in range(deg + 1):
            v, r = divmod(v, f.size)
            digits.append(r)
        out.append(Candidate(PolyF(f, digits), tuple(digits)))
    return out


def _coset_reps(tower: FieldTower) -> list[int]:
    f = tower.field
    return [f.pow(f.generator, i) for i in range((f.size - 1) // (tower.q - 1))]


def _check_budget(count: int, cfg: SearchConfig) -> None:
    if cfg.per_star_budget is not None and count > cfg.per_star_budget:
        raise SearchSpaceTooLarge(f"{count} tuples per alpha* exceeds budget {cfg.per_star_budget}")


def _best_in_range(
    m: int, d: int, modulus: int,
    values: np.ndarray, reps: np.ndarray, base: np.ndarray, scal: np.ndarray,
    start: int, stop: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Cheapest admissible tuple index per alpha* among global tuples [start, stop)."""
    tower = make_tower(m, d, modulus)
    f = tower.field
    t = base.shape[1]
    n = values.shape[1]
    best_cost = np.full(n, _NONE, dtype=np.int64)
    best_idx = np.full(n, -1, dtype=np.int64)
    per = max(1, _BLOCK_ELEMS // (n * t))
    ns = scal.shape[0]
    for lo in range(start, stop, per):
        hi = min(stop, lo + per)
        g = np.arange(lo, hi)
        cand = base[g // ns]
        vals = values[cand]  # (B, t, n)
        if ns > 1:
            vals = f.vmul(vals, reps[scal[g % ns]][:, :, None])
        ranks = subfield_ranks(tower, vals.transpose(0, 2, 1).reshape(-1, t)).reshape(-1, n)
        cost = np.where(ranks == t, ranks.sum(axis=1, keepdims=True) - t, _NONE)
        arg = np.argmin(cost, axis=0)
        got = cost[arg, np.arange(n)]
        better = got < best_cost
        best_cost[better] = got[better]
        best_idx[better] = g[arg[better]]
    return best_cost, best_idx


def exhaustive_search(code: RsCode, tower: FieldTower | None = None, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Per alpha*, the admissible tuple of minimum bandwidth; ties go to the
    first tuple in lexicographic order of candidate indices, then scalars.
    """
    started = time.perf_counter()
    tower = code.tower if tower is None else tower
    f = tower.field
    t = tower.t
    cands = enumerate_candidates(code, cfg)
    reps = _coset_reps(tower) if cfg.scalars and t > 1 else [1]
    n_scal = len(reps) ** (t - 1)
    n_tuples = math.comb(len(cands) + t - 1, t) * n_scal
    _check_budget(n_tuples, cfg)

    width = max(len(c.poly) for c in cands) or 1
    values = f.horner(coefficient_matrix([c.poly for c in cands], width), code.points_array)
    base = np.array(list(itertools.combinations_with_replacement(range(len(cands)), t)), dtype=np.int64)
    scal = np.array([(0,) + s for s in itertools.product(range(len(reps)), repeat=t - 1)], dtype=np.int64)
    reps_arr = np.asarray(reps, dtype=np.int64)
    args = (tower.m, tower.d, f.modulus, values, reps_arr, base, scal)

    jobs = max(1, cfg.jobs) if cfg.parallel else 1
    if jobs == 1:
        best_cost, best_idx = _best_in_range(*args, 0, n_tuples)
    else:
        chunks = np.linspace(0, n_tuples, min(n_tuples, jobs * 4) + 1).astype(np.int64)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_best_in_range, *args, int(a), int(b))
                for a, b in zip(chunks[:-1], chunks[1:]) if b > a
            ]
            parts = [fut.result() for fut in futures]
        best_cost = np.full(code.n, _NONE, dtype=np.int64)
        best_idx = np.full(code.n, -1, dtype=np.int64)
        for cost, idx in parts:  # chunks are in order, so strict < keeps the first minimum
            better = cost < best_cost
            best_cost[better] = cost[better]
            best_idx[better] = idx[better]

    missing = np.flatnonzero(best_idx < 0)
    if missing.size:
        raise NoValidTuple(
            f"no candidate tuple has full rank at alpha*={to_hex(code.points[missing[0]])}"
        )
    polys, choices, scalars = {}, [], []
    for a, g in zip(code.points, best_idx):
        idx = tuple(int(i) for i in base[g // n_scal])
        mult = tuple(int(reps[j]) for j in scal[g % n_scal])
        choices.append(idx)
        scalars.append(mult)
        polys[a] = tuple(cands[i].poly * s for i, s in zip(idx, mult))
    scheme = RepairScheme(code, polys)
    sub = tuple(int(c) for c in best_cost)
    return SearchResult(
        scheme=scheme,
        choices=tuple(choices),
        scalars=tuple(scalars),
        per_star_subsymbols=sub,
        per_star_bits=tuple(s * tower.d for s in sub),
        candidates_per_star=len(cands),
        tuples_per_star=n_tuples,
        elapsed=time.perf_counter() - started,
    )


@dataclass(frozen=True)
class TableComparison:
    result_bits: tuple[int, ...]
    table_bits: tuple[int, ...]
    improvements: tuple[int, ...]  # positions where the result beats the table
    regressions: tuple[int, ...]  # positions where the result is worse

    @property
    def ok(self) -> bool:
        return not self.regressions

    def to_dict(self) -> dict[str, Any]:
        return {
            "result_bits": list(self.result_bits),
            "table_bits": list(self.table_bits),
            "improvements": list(self.improvements),
            "regressions": list(self.regressions),
            "ok": self.ok,
        }


def verify_against_table(result: SearchResult | SchemeReport) -> TableComparison:
    """Compare per-position bits with the built-in (14, 10) table."""
    code = result.code
    ref = hdfs_code()
    if not (
        code.k == ref.k
        and code.points == ref.points
        and code.tower.m == ref.tower.m
        and code.tower.d == ref.tower.d
        and code.field.modulus == ref.field.modulus
    ):
        raise WrongCode("table comparison needs the built-in (14, 10) code")
    bits = tuple(result.per_star_bits) if isinstance(result, SearchResult) else tuple(result.bits_by_point())
    return TableComparison(
        result_bits=bits,
        table_bits=HDFS_TABLE_BITS,
        improvements=tuple(i for i, (r, t) in enumerate(zip(bits, HDFS_TABLE_BITS)) if r < t),
        regressions=tuple(i for i, (r, t) in enumerate(zip(bits, HDFS_TABLE_BITS)) if r > t),
    )
