"""Lower bounds on linear repair bandwidth, in sub-symbols of B."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

from .errors import InvalidDimensions, LocalityTooSmall

CEIL_SLACK = 1e-9


def ceil_slack(x: float) -> int:
    """Ceiling that forgives float noise of up to 1e-9 above an integer."""
    return math.ceil(x - CEIL_SLACK)


def linear_lower_bound(n: int, k: int, q: int) -> float:
    """(n - 1) log_q((n - 1) / (n - k)) for any linear repair scheme."""
    if not (1 <= k < n):
        raise InvalidDimensions(f"need 1 <= k < n, got n={n}, k={k}")
    if q < 2:
        raise InvalidDimensions(f"subfield size must be >= 2, got {q}")
    return (n - 1) * math.log((n - 1) / (n - k), q)


def cutset_bound(t: int, d: int, k: int) -> float:
    """t d / (d + 1 - k) when d helpers respond."""
    if d < k:
        raise LocalityTooSmall(f"locality d={d} is below k={k}")
    return t * d / (d + 1 - k)


def trivial_bound(k: int, t: int) -> int:
    return k + t - 1


@dataclass(frozen=True)
class BoundsReport:
    n: int
    k: int
    t: int
    d_locality: int
    subfield_size: int
    subsymbol_bits: int
    linear_lb_subsymbols: float
    linear_lb_bits: float
    linear_lb_ceiling: int
    cutset_lb_subsymbols: float
    cutset_lb_ceiling: int
    trivial_lb_subsymbols: int
    naive_subsymbols: int
    binding: str
    scheme_subsymbols: int | None = None
    scheme_bits: int | None = None
    optimal: bool = False

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def bounds_report(
    n: int,
    k: int,
    m: int,
    d: int,
    locality: int | None = None,
    achieved_subsymbols: int | None = None,
) -> BoundsReport:
    """All three bounds for an (n, k) code over GF(2^m) / GF(2^d).

    ``binding`` is "cutset" when t >= n - k and "trivial" otherwise.  The
    ``optimal`` flag means the achieved bandwidth equals the ceiling of the
    linear bound.
    """
    if m % d:
        raise InvalidDimensions(f"d={d} does not divide m={m}")
    t = m // d
    q = 1 << d
    loc = n - 1 if locality is None else locality
    lin = linear_lower_bound(n, k, q)
    cut = cutset_bound(t, loc, k)
    lin_ceil = ceil_slack(lin)
    return BoundsReport(
        n=n,
        k=k,
        t=t,
        d_locality=loc,
        subfield_size=q,
        subsymbol_bits=d,
        linear_lb_subsymbols=lin,
        linear_lb_bits=lin * d,
        linear_lb_ceiling=lin_ceil,
        cutset_lb_subsymbols=cut,
        cutset_lb_ceiling=ceil_slack(cut),
        trivial_lb_subsymbols=trivial_bound(k, t),
        naive_subsymbols=k * t,
        binding="cutset" if t >= n - k else "trivial",
        scheme_subsymbols=achieved_subsymbols,
        scheme_bits=None if achieved_subsymbols is None else achieved_subsymbols * d,
        optimal=achieved_subsymbols is not None and achieved_subsymbols == lin_ceil,
    )


def bounds_for_scheme(report, locality: int | None = None) -> BoundsReport:
    """bounds_report for a validated SchemeReport."""
    tower = report.code.tower
    return bounds_report(
        report.code.n, report.code.k, tower.m, tower.d,
        locality=locality, achieved_subsymbols=report.bandwidth_subsymbols,
    )
