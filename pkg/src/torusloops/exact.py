"""Exact enumeration on small tori and the partition-function identity.

Two genuinely independent enumerations back the identity check:

  * enumerate_crsf walks all 2^(nm) step fields (one direction bit per
    vertex) and runs the cycle census on each, accumulating the exact
    distribution of (N, class) and the integer sum of 2^N.

  * exact_mnlp_partition walks all 3^(nm) vertex assignments to
    {absent, East, North}. An assignment is a configuration of
    vertex-disjoint monotone cycles iff every occupied vertex's outgoing
    edge lands on an occupied vertex and every occupied vertex receives
    exactly one incoming edge. Each configuration contributes 2^(-edges),
    where the edge count equals the occupied-vertex count. The weights are
    accumulated as an exact dyadic rational.

The expected value of 2^N over fields equals the monotone-loop partition
function, and the oriented-forest count is 2^(nm) times that value; both
are checked as exact integer identities, never in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .census import exact_div_str
from .torus import Direction, HomologyClass, StructureError, TorusDims

DEFAULT_FIELD_CAP = 24  # 2^(nm) fields
DEFAULT_CONFIG_CAP = 16  # 3^(nm) loop configurations

_ENUM_CHUNK = 1 << 20
_CONFIG_CHUNK = 1 << 18


class CapExceededError(RuntimeError):
    """Enumeration refused: the torus is larger than the safety cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(
            f"{what} over {size} vertices refused (cap {cap}); rerun with cap >= {size}"
        )
        self.required_cap = size


@dataclass(frozen=True)
class DyadicRational:
    """Exact numerator / 2^log2_denominator; canonical form has an odd
    numerator or a zero exponent. Addition and comparison never round."""

    numerator: int
    log2_denominator: int

    def __post_init__(self):
        if self.log2_denominator < 0:
            raise ValueError("log2_denominator must be nonnegative")
        num, e = self.numerator, self.log2_denominator
        while e > 0 and num % 2 == 0:
            num //= 2
            e -= 1
        if num == 0:
            e = 0
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "log2_denominator", e)

    @classmethod
    def from_int(cls, value: int) -> "DyadicRational":
        return cls(value, 0)

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        e = max(self.log2_denominator, other.log2_denominator)
        num = (self.numerator << (e - self.log2_denominator)) + (
            other.numerator << (e - other.log2_denominator)
        )
        return DyadicRational(num, e)

    def _cross(self, other: "DyadicRational") -> tuple[int, int]:
        e = max(self.log2_denominator, other.log2_denominator)
        return (
            self.numerator << (e - self.log2_denominator),
            other.numerator << (e - other.log2_denominator),
        )

    def __lt__(self, other):
        a, b = self._cross(other)
        return a < b

    def __le__(self, other):
        a, b = self._cross(other)
        return a <= b

    def scaled_by_pow2(self, k: int) -> int:
        """Exact integer value of self * 2^k; k must clear the denominator."""
        if k < self.log2_denominator:
            raise ValueError(f"2^{k} does not clear denominator 2^{self.log2_denominator}")
        return self.numerator << (k - self.log2_denominator)

    def __float__(self) -> float:
        return self.numerator / (1 << self.log2_denominator)

    def decimal_str(self, places: int = 6) -> str:
        return exact_div_str(self.numerator, 1 << self.log2_denominator, places)

    def to_json(self) -> dict:
        return {"numerator": self.numerator, "log2_denominator": self.log2_denominator}


@dataclass(frozen=True)
class ExactReport:
    dims: TorusDims
    field_count: int
    sum_two_pow_n: int
    expectation_two_pow_n: DyadicRational
    census_distribution: dict[tuple[int, HomologyClass], int]
    z_mnlp: DyadicRational | None = None


@dataclass(frozen=True)
class IdentityReport:
    report: ExactReport
    expectation_equals_z: bool
    oriented_count_equals: bool  # sum over fields of 2^N == 2^(nm) * Z

    @property
    def holds(self) -> bool:
        return self.expectation_equals_z and self.oriented_count_equals


def enumerate_crsf(dims: TorusDims, cap: int = DEFAULT_FIELD_CAP) -> ExactReport:
    """Exact census distribution over all 2^(nm) step fields."""
    nm = dims.size
    if nm > cap:
        raise CapExceededError("field enumeration", nm, cap)
    total = 1 << nm
    distribution: dict[tuple[int, HomologyClass], int] = {}
    n_counts = np.zeros(nm + 1, dtype=np.int64)
    for start in range(0, total, _ENUM_CHUNK):
        stop = min(total, start + _ENUM_CHUNK)
        size = stop - start
        n_arr = np.empty(size, np.int64)
        p_arr = np.empty(size, np.int64)
        q_arr = np.empty(size, np.int64)
        ok_arr = np.empty(size, np.uint8)
        _kernels.enum_bits_range(dims.n, dims.m, start, stop, n_arr, p_arr, q_arr, ok_arr)
        if not ok_arr.all():
            raise StructureError("field enumeration produced an inconsistent census")
        n_counts += np.bincount(n_arr, minlength=nm + 1)
        key = (n_arr * (nm + 1) + p_arr) * (nm + 1) + q_arr
        for packed, count in zip(*np.unique(key, return_counts=True)):
            packed = int(packed)
            npq, q = divmod(packed, nm + 1)
            ncyc, p = divmod(npq, nm + 1)
            hom = HomologyClass(p, q)
            distribution[(ncyc, hom)] = distribution.get((ncyc, hom), 0) + int(count)
    sum_two_pow_n = sum(int(c) << k for k, c in enumerate(n_counts.tolist()))
    return ExactReport(
        dims=dims,
        field_count=total,
        sum_two_pow_n=sum_two_pow_n,
        expectation_two_pow_n=DyadicRational(sum_two_pow_n, nm),
        census_distribution=distribution,
    )


def exact_mnlp_partition(dims: TorusDims, cap: int = DEFAULT_CONFIG_CAP) -> DyadicRational:
    """Sum of 2^(-edges) over all vertex-disjoint monotone-cycle configurations.

    Plain enumeration of all 3^(nm) vertex states in vectorized chunks; shares
    nothing with the census engine beyond the torus step geometry.
    """
    nm = dims.size
    if nm > cap:
        raise CapExceededError("configuration enumeration", nm, cap)
    east_to = np.array([dims.step(v, Direction.EAST) for v in range(nm)])
    north_to = np.array([dims.step(v, Direction.NORTH) for v in range(nm)])
    total = 3**nm
    pow3 = 3 ** np.arange(nm, dtype=np.int64)
    size_counts = np.zeros(nm + 1, dtype=np.int64)
    chunk = max(1, _CONFIG_CHUNK // max(nm, 1))
    for lo in range(0, total, chunk):
        hi = min(total, lo + chunk)
        states = np.arange(lo, hi, dtype=np.int64)
        digit = (states[:, None] // pow3[None, :]) % 3  # 0 absent, 1 East, 2 North
        east = digit == 1
        north = digit == 2
        occupied = digit > 0
        edges_ok = np.ones(hi - lo, dtype=bool)
        indeg = np.zeros((hi - lo, nm), dtype=np.int8)
        for v in range(nm):
            edges_ok &= ~east[:, v] | occupied[:, east_to[v]]
            edges_ok &= ~north[:, v] | occupied[:, north_to[v]]
            indeg[:, east_to[v]] += east[:, v]
            indeg[:, north_to[v]] += north[:, v]
        valid = edges_ok & np.all(~occupied | (indeg == 1), axis=1)
        size_counts += np.bincount(occupied.sum(axis=1)[valid], minlength=nm + 1)
    numerator = sum(int(c) << (nm - k) for k, c in enumerate(size_counts.tolist()))
    return DyadicRational(numerator, nm)


def verify_identity(dims: TorusDims, cap: int = DEFAULT_CONFIG_CAP) -> IdentityReport:
    """Check E[2^N] == Z and the oriented-forest count 2^(nm) * Z, exactly."""
    nm = dims.size
    if nm > cap:
        raise CapExceededError("identity check", nm, cap)
    report = enumerate_crsf(dims, cap=max(cap, DEFAULT_FIELD_CAP))
    z = exact_mnlp_partition(dims, cap=cap)
    report = replace(report, z_mnlp=z)
    return IdentityReport(
        report=report,
        expectation_equals_z=report.expectation_two_pow_n == z,
        oriented_count_equals=report.sum_two_pow_n == z.scaled_by_pow2(nm),
    )


def report_to_json(report: ExactReport, identity: IdentityReport | None = None) -> dict:
    """JSON-ready dict; exact values as numerator/log2_denominator, never floats."""
    dist = [
        {"cycles": ncyc, "p": hom.p, "q": hom.q, "fields": count}
        for (ncyc, hom), count in sorted(
            report.census_distribution.items(), key=lambda kv: (kv[0][0], kv[0][1].p, kv[0][1].q)
        )
    ]
    out = {
        "n": report.dims.n,
        "m": report.dims.m,
        "field_count": report.field_count,
        "sum_two_pow_N": report.sum_two_pow_n,
        "expectation_two_pow_N": report.expectation_two_pow_n.to_json(),
        "z_mnlp": report.z_mnlp.to_json() if report.z_mnlp is not None else None,
        "census_distribution": dist,
    }
    if identity is not None:
        out["identity_holds"] = identity.holds
    return out
