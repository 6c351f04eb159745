"""Complete orbit structure of a step field: every cycle, in O(nm) time.

All cycles of one field share a single homology class (disjoint simple
closed curves on the torus are homologous), so a census is summarized by
the count N, the shared class (p, q), and the common length np + mq.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .sampler import StepField
from .torus import HomologyClass, StructureError, TorusDims, make_homology

# pos entries are int32; larger tori would need a different marking array
MAX_CENSUS_VERTICES = 2**31 - 1


@dataclass(frozen=True)
class Cycle:
    anchor: int  # minimum vertex index on the cycle
    length: int  # edge count = np + mq
    h_steps: int  # East edges = np
    v_steps: int  # North edges = mq
    homology: HomologyClass


@dataclass(frozen=True)
class CycleCensus:
    dims: TorusDims
    cycles: tuple[Cycle, ...]  # sorted by anchor ascending

    @property
    def total_cycles(self) -> int:
        return len(self.cycles)

    @property
    def homology(self) -> HomologyClass:
        return self.cycles[0].homology

    @property
    def class_counts(self) -> dict[HomologyClass, int]:
        counts: dict[HomologyClass, int] = {}
        for c in self.cycles:
            counts[c.homology] = counts.get(c.homology, 0) + 1
        return counts

    @property
    def lengths(self) -> list[int]:
        return [c.length for c in self.cycles]


@dataclass(frozen=True)
class SummaryRecord:
    total_cycles: int
    homology: HomologyClass
    min_length: int
    max_length: int
    total_length: int

    @property
    def mean_length(self) -> Fraction:
        return Fraction(self.total_length, self.total_cycles)

    def mean_length_str(self, places: int = 6) -> str:
        return exact_div_str(self.total_length, self.total_cycles, places)


def exact_div_str(num: int, den: int, places: int = 6) -> str:
    """Decimal rendering of num/den to fixed precision, integer arithmetic only."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    sign = "-" if num < 0 else ""
    num = abs(num)
    scale = 10**places
    q, r = divmod(num * scale, den)
    if 2 * r >= den:
        q += 1
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def _cycles_from_arrays(dims: TorusDims, k, anchors, lengths, hsteps) -> CycleCensus:
    cycles = []
    for i in range(k):
        h = int(hsteps[i])
        length = int(lengths[i])
        hom = make_homology(dims, h, length - h)  # raises StructureError on bad counts
        cycles.append(Cycle(int(anchors[i]), length, h, length - h, hom))
    if not cycles:
        raise StructureError("no cycle found; a map on a finite set always has one")
    cycles.sort(key=lambda c: c.anchor)
    shared = cycles[0].homology
    for c in cycles[1:]:
        if c.homology != shared:
            raise StructureError(f"cycles with distinct classes {shared} and {c.homology}")
    return CycleCensus(dims, tuple(cycles))


def find_cycles(field: StepField) -> CycleCensus:
    """Identify all periodic orbits of the field's induced map.

    Iterative three-state pointer chase (unvisited / on-current-path /
    finished); each vertex is touched a bounded constant number of times and
    the auxiliary state is one int32 per vertex.
    """
    dims = field.dims
    if dims.size > MAX_CENSUS_VERTICES:
        raise ValueError(f"torus with {dims.size} vertices exceeds the census index range")
    cap = max(dims.n, dims.m)
    pos = np.full(dims.size, -1, np.int32)
    anchors = np.empty(cap, np.int64)
    lengths = np.empty(cap, np.int64)
    hsteps = np.empty(cap, np.int64)
    k = _kernels.census_core(field.directions, dims.n, dims.m, pos, anchors, lengths, hsteps)
    return _cycles_from_arrays(dims, k, anchors, lengths, hsteps)


def census_summary(census: CycleCensus) -> SummaryRecord:
    lens = census.lengths
    return SummaryRecord(
        total_cycles=census.total_cycles,
        homology=census.homology,
        min_length=min(lens),
        max_length=max(lens),
        total_length=sum(lens),
    )


def jsonl_record(census: CycleCensus, seed: int, trial: int) -> str:
    """One census as a JSON line; key order is fixed for byte-deterministic output."""
    hom = census.homology
    record = {
        "n": census.dims.n,
        "m": census.dims.m,
        "seed": seed,
        "trial": trial,
        "N": census.total_cycles,
        "p": hom.p,
        "q": hom.q,
        "lengths": census.lengths,
    }
    return json.dumps(record, separators=(",", ":"))
