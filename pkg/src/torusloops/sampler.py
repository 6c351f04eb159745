"""Seeded, bit-exact generation of quenched step fields.

Each vertex independently points East or North with probability 1/2. The
direction bit is derived from a counter-based hash so that any (seed, trial,
vertex) triple yields the same bit on every platform, in any order, which
makes parallel generation and lazy evaluation trivially reproducible:

    bit(v) = bit0 of mix64(mix64(mix64(seed ^ GAMMA) ^ trial) ^ v)

where mix64 is the SplitMix64 finalizer. East iff the bit is 0.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .torus import Direction, TorusDims

_MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer on 64-bit wrapping arithmetic (normative)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _M1) & _MASK64
    z = ((z ^ (z >> 27)) * _M2) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SampleKey:
    """(seed, trial) fully determines a field; no hidden global state."""

    seed: int
    trial: int

    def __post_init__(self):
        for name in ("seed", "trial"):
            v = int(getattr(self, name))  # accept numpy integers
            if not (0 <= v < 1 << 64):
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v}")
            object.__setattr__(self, name, v)

    def vertex_hash_base(self) -> int:
        return mix64(mix64(self.seed ^ GAMMA) ^ self.trial)


@dataclass(frozen=True)
class StepField:
    """A quenched map: one direction per vertex, row-major vertex order."""

    dims: TorusDims
    directions: np.ndarray  # uint8, 0 = East, 1 = North

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=np.uint8)
        if d.shape != (self.dims.size,):
            raise ValueError(f"need {self.dims.size} directions, got shape {d.shape}")
        d = d.copy()
        d.flags.writeable = False
        object.__setattr__(self, "directions", d)

    def direction(self, v: int) -> Direction:
        return Direction(int(self.directions[v]))

    def phi(self, v: int) -> int:
        """The induced map: where vertex v steps to."""
        return self.dims.step(v, self.direction(v))


def sample_field(dims: TorusDims, key: SampleKey) -> StepField:
    """Pure function of (dims, key); cross-implementation bit-exact."""
    base = np.uint64(key.vertex_hash_base())
    z = np.arange(dims.size, dtype=np.uint64) ^ base
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return StepField(dims, (z & np.uint64(1)).astype(np.uint8))


def field_from_bits(dims: TorusDims, bits) -> StepField:
    """Field with directions given explicitly; bit 0 means East."""
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
    if arr.shape != (dims.size,):
        raise ValueError(f"need {dims.size} bits for {dims.n}x{dims.m}, got {arr.size}")
    if arr.max(initial=0) > 1:
        raise ValueError("bits must be 0 or 1")
    return StepField(dims, arr)


def field_from_code(dims: TorusDims, code: int) -> StepField:
    """Field whose direction bits are the binary digits of code (bit v = vertex v)."""
    if not (0 <= code < 1 << dims.size):
        raise ValueError(f"code {code} out of range for {dims.size} vertices")
    bits = np.array([(code >> v) & 1 for v in range(dims.size)], dtype=np.uint8)
    return field_from_bits(dims, bits)


def dump_field(field: StepField, fp: io.TextIOBase) -> None:
    """Write the CRSF1 text format: header then m rows of E/N characters."""
    dims = field.dims
    fp.write(f"CRSF1 {dims.n} {dims.m}\n")
    chars = np.where(field.directions == 0, "E", "N")
    for y in range(dims.m):
        fp.write("".join(chars[y * dims.n : (y + 1) * dims.n]) + "\n")


def save_field(field: StepField, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        dump_field(field, fp)


def load_field(path) -> StepField:
    """Load a CRSF1 file, validating header and row shapes."""
    with open(path, "r", encoding="utf-8") as fp:
        header = fp.readline().split()
        if len(header) != 3 or header[0] != "CRSF1":
            raise ValueError(f"{path}: not a CRSF1 field file")
        n, m = int(header[1]), int(header[2])
        dims = TorusDims(n, m)
        dirs = np.empty(dims.size, dtype=np.uint8)
        for y in range(m):
            row = fp.readline().rstrip("\n")
            if len(row) != n:
                raise ValueError(f"{path}: row {y} has length {len(row)}, expected {n}")
            for x, ch in enumerate(row):
                if ch == "E":
                    dirs[y * n + x] = 0
                elif ch == "N":
                    dirs[y * n + x] = 1
                else:
                    raise ValueError(f"{path}: invalid character {ch!r} in row {y}")
    return StepField(dims, dirs)
