"""Bit-parallel sets of bounded counter vectors.

A subset of {0..bound}^d is one Python integer: vector v sits at bit
sum(v[i] * stride[i]).  Each axis is padded to twice its length, so adding
or subtracting a delta is a single shift whose stray bits land outside the
valid region and are cleared by masking.  This keeps the exhaustive table
computations (reach/derivability closures over every configuration) fast
without any third-party dependency.
"""

from __future__ import annotations

from itertools import product


class VectorLattice:
    def __init__(self, dimension: int, bound: int):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        if bound < 0:
            raise ValueError("bound must be a natural number")
        self.dimension = dimension
        self.bound = bound
        self.width = 2 * (bound + 1)
        strides = []
        s = 1
        for _ in range(dimension):
            strides.append(s)
            s *= self.width
        self.strides = tuple(reversed(strides))  # strides[-1] == 1
        self.nbits = self.width ** dimension
        self.valid = self._build_valid()
        self._regions: dict[tuple[int, str, int], int] = {}

    def _build_valid(self) -> int:
        row = (1 << (self.bound + 1)) - 1
        mask = row
        for stride in reversed(self.strides[:-1]):
            acc = 0
            for v in range(self.bound + 1):
                acc |= mask << (v * stride)
            mask = acc
        return mask

    def index(self, vec) -> int:
        return sum(v * s for v, s in zip(vec, self.strides))

    def vector(self, idx: int) -> tuple[int, ...]:
        out = []
        for s in self.strides:
            out.append(idx // s)
            idx %= s
        return tuple(out)

    def single(self, vec) -> int:
        if len(vec) != self.dimension or any(v < 0 or v > self.bound for v in vec):
            raise ValueError(f"vector {tuple(vec)} outside the lattice")
        return 1 << self.index(vec)

    def members(self, mask: int) -> list[tuple[int, ...]]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.vector(low.bit_length() - 1))
            mask ^= low
        return out

    def shift(self, mask: int, delta) -> int:
        """{v + delta : v in mask} intersected with the valid region."""
        off = sum(z * s for z, s in zip(delta, self.strides))
        if off >= 0:
            return (mask << off) & self.valid
        return (mask >> -off) & self.valid

    def region(self, counter: int, op: str, value: int) -> int:
        """Vectors whose 1-indexed `counter` satisfies `op value`."""
        key = (counter, op, value)
        cached = self._regions.get(key)
        if cached is not None:
            return cached
        if op == ">=":
            allowed = range(min(value, self.bound + 1), self.bound + 1)
        elif op == "<=":
            allowed = range(0, min(value, self.bound) + 1)
        else:
            allowed = range(value, value + 1) if 0 <= value <= self.bound else range(0)
        axis = counter - 1
        mask = 0
        ranges = [range(self.bound + 1)] * self.dimension
        ranges[axis] = allowed
        for vec in product(*ranges):
            mask |= 1 << self.index(vec)
        self._regions[key] = mask
        return mask

    def doubled(self, mask: int) -> int:
        """d=1: {2v : v in mask, 2v <= bound}."""
        out = 0
        for (v,) in self.members(mask):
            if 2 * v <= self.bound:
                out |= 1 << (2 * v)
        return out

    def halved(self, mask: int) -> int:
        """d=1: {v/2 : v in mask, v even}."""
        out = 0
        for (v,) in self.members(mask):
            if v % 2 == 0:
                out |= 1 << (v // 2)
        return out

    def sums(self, a: int, b: int) -> int:
        """{x + y : x in a, y in b} intersected with the valid region."""
        if a == 0 or b == 0:
            return 0
        if a.bit_count() > b.bit_count():
            a, b = b, a
        out = 0
        for vec in self.members(a):
            out |= b << self.index(vec)
        return out & self.valid

    def diffs(self, a: int, b: int) -> int:
        """{x - y : x in a, y in b, componentwise >= 0} in the valid region."""
        if a == 0 or b == 0:
            return 0
        if b.bit_count() <= a.bit_count():
            out = 0
            for vec in self.members(b):
                off = self.index(vec)
                out |= a >> off
            return out & self.valid
        # Iterate the smaller side a over a bit-reversed b: the window ending
        # at index(x) then holds exactly {x - y : y in b}.
        rev = int(format(b, f"0{self.nbits}b")[::-1], 2)
        out = 0
        top = self.nbits - 1
        for vec in self.members(a):
            out |= rev >> (top - self.index(vec))
        return out & self.valid
