"""Striped storage cluster: n servers, each holding one symbol of m codewords.

Bit accounting covers both directions.  Downstream is what survivors send to
the replacement node.  Upstream is the announcement of the failed point to
every server, one symbol of F (t sub-symbols) each.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import InvalidDimensions, PointNotInCode
from .gf import FieldElem, to_hex
from .repair import RepairScheme, repair_batch
from .rs import RsCode, encode_many


@dataclass(frozen=True, eq=False)
class ClusterConfig:
    code: RsCode
    scheme: RepairScheme
    m_stripes: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m_stripes < 1:
            raise InvalidDimensions(f"m_stripes must be >= 1, got {self.m_stripes}")
        if not self.scheme.code.same_points(self.code):
            raise InvalidDimensions("scheme was built for a different evaluation set")

    @property
    def tower(self):
        return self.code.tower


@dataclass(eq=False)
class Cluster:
    config: ClusterConfig
    messages: np.ndarray  # (m_stripes, k)
    servers: np.ndarray  # (n, m_stripes); row i is server i's stripe column
    original: np.ndarray = field(repr=False)

    @property
    def code(self) -> RsCode:
        return self.config.code

    def conserved(self) -> bool:
        return bool(np.array_equal(self.servers, self.original))


def provision(cfg: ClusterConfig) -> Cluster:
    """Random messages from ``seed``, encoded and laid out one column per stripe."""
    code = cfg.code
    rng = np.random.default_rng(cfg.seed)
    messages = rng.integers(0, code.field.size, size=(cfg.m_stripes, code.k), dtype=np.int64)
    words = encode_many(code, messages)
    servers = np.ascontiguousarray(words.T)
    return Cluster(cfg, messages, servers, servers.copy())


@dataclass(frozen=True)
class RepairReport:
    failed: FieldElem
    m_stripes: int
    subsymbols_per_stripe: int
    downstream_bits: int
    upstream_bits: int
    naive_downstream_bits: int
    verified: bool

    @property
    def ratio_to_naive(self) -> float:
        return self.downstream_bits / self.naive_downstream_bits

    def to_dict(self) -> dict[str, Any]:
        return {
            "failed": to_hex(self.failed),
            "m_stripes": self.m_stripes,
            "subsymbols_per_stripe": self.subsymbols_per_stripe,
            "downstream_bits": self.downstream_bits,
            "upstream_bits": self.upstream_bits,
            "naive_downstream_bits": self.naive_downstream_bits,
            "verified": self.verified,
        }


def fail_and_repair(cluster: Cluster, alpha_star: FieldElem, jobs: int = 1) -> RepairReport:
    """Wipe server alpha*, rebuild it stripe by stripe, and account the traffic."""
    code = cluster.code
    if alpha_star not in code:
        raise PointNotInCode(f"{to_hex(alpha_star)} is not an evaluation point")
    tower = code.tower
    scheme = cluster.config.scheme
    idx = code.index(alpha_star)
    lost = cluster.servers[idx].copy()
    cluster.servers[idx] = 0

    words = cluster.servers.T
    M = words.shape[0]
    bounds = np.linspace(0, M, min(M, max(1, jobs)) + 1).astype(np.int64)
    spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def run(span: tuple[int, int]):
        return repair_batch(scheme, words[span[0]:span[1]], alpha_star)

    if len(spans) == 1:
        batches = [run(spans[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            batches = list(pool.map(run, spans))

    rebuilt = np.concatenate([b.reconstructed for b in batches])
    downloaded = np.concatenate([b.downloaded_per_stripe for b in batches])
    cluster.servers[idx] = rebuilt
    return RepairReport(
        failed=alpha_star,
        m_stripes=M,
        subsymbols_per_stripe=int(downloaded[0]),
        downstream_bits=int(downloaded.sum()) * tower.d,
        upstream_bits=code.n * tower.t * tower.d,
        naive_downstream_bits=M * code.k * tower.t * tower.d,
        verified=bool(np.array_equal(rebuilt, lost)),
    )


def campaign(cluster: Cluster, failures: Sequence[FieldElem], jobs: int = 1) -> list[RepairReport]:
    """Sequential single failures, each repaired before the next."""
    return [fail_and_repair(cluster, a, jobs) for a in failures]


def summarize(reports: Sequence[RepairReport]) -> dict[str, Any]:
    if not reports:
        return {"failures": 0, "all_verified": True, "max_downstream_bits": 0, "mean_downstream_bits": 0.0}
    down = [r.downstream_bits for r in reports]
    return {
        "failures": len(reports),
        "all_verified": all(r.verified for r in reports),
        "max_downstream_bits": max(down),
        "mean_downstream_bits": sum(down) / len(down),
        "upstream_bits": reports[0].upstream_bits,
        "naive_downstream_bits": reports[0].naive_downstream_bits,
    }
