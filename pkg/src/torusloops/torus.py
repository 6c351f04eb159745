"""Torus geometry: dimensions, vertex addressing, steps, homology classes.

Vertices of the n x m torus are integers in [0, n*m), row-major with y as
the slow axis: index = y*n + x. A step goes East to ((x+1) mod n, y) or
North to (x, (y+1) mod m). These encodings (East=0, North=1, row-major)
are normative for all file formats.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from enum import IntEnum


class StructureError(RuntimeError):
    """An invariant of the cycle structure was violated (internal bug)."""


class Direction(IntEnum):
    EAST = 0
    NORTH = 1


@dataclass(frozen=True)
class TorusDims:
    """Periods of the torus: n horizontal, m vertical."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"torus dims must be >= 1, got ({self.n}, {self.m})")
        if self.n * self.m > sys.maxsize:
            raise ValueError(f"vertex count {self.n}*{self.m} overflows the index range")

    @property
    def size(self) -> int:
        return self.n * self.m

    def vertex_index(self, x: int, y: int) -> int:
        if not (0 <= x < self.n and 0 <= y < self.m):
            raise ValueError(f"coordinates ({x}, {y}) out of range for {self.n}x{self.m}")
        return y * self.n + x

    def coords(self, v: int) -> tuple[int, int]:
        if not (0 <= v < self.size):
            raise ValueError(f"vertex {v} out of range for {self.n}x{self.m}")
        return v % self.n, v // self.n

    def step(self, v: int, direction: Direction) -> int:
        x, y = self.coords(v)
        if direction == Direction.EAST:
            return y * self.n + (x + 1) % self.n
        return ((y + 1) % self.m) * self.n + x


@dataclass(frozen=True)
class HomologyClass:
    """Winding numbers (p, q): a cycle crosses every vertical line p times
    and every horizontal line q times. Coprime, with gcd(k, 0) = k so the
    degenerate classes (1,0) and (0,1) are admitted."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"winding numbers must be nonnegative, got ({self.p}, {self.q})")
        if (self.p, self.q) == (0, 0):
            raise ValueError("homology class (0, 0) is not a cycle class")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"winding numbers ({self.p}, {self.q}) are not coprime")

    def __iter__(self):
        return iter((self.p, self.q))


def make_homology(dims: TorusDims, h_steps: int, v_steps: int) -> HomologyClass:
    """Homology class of a cycle with h_steps East and v_steps North edges.

    Every (p, q)-cycle has exactly n*p horizontal and m*q vertical edges, so
    both divisions must be exact; a remainder means the census is broken.
    """
    if h_steps < 0 or v_steps < 0 or (h_steps, v_steps) == (0, 0):
        raise ValueError(f"invalid step counts ({h_steps}, {v_steps})")
    p, rp = divmod(h_steps, dims.n)
    q, rq = divmod(v_steps, dims.m)
    if rp or rq:
        raise StructureError(
            f"step counts ({h_steps}, {v_steps}) are not multiples of ({dims.n}, {dims.m})"
        )
    return HomologyClass(p, q)
