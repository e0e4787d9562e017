"""Permutations of {0, ..., N-1} stored as image tables."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence

from bitprobe.dat import DecisionAssignmentTree


class Parity(IntEnum):
    EVEN = 0
    ODD = 1

    def __xor__(self, other: int) -> Parity:
        return Parity(int(self) ^ int(other))

    def __str__(self) -> str:
        return self.name.lower()


class NotBijective(ValueError):
    """Two distinct inputs share an output."""

    def __init__(self, x: int, y: int, output: int, width: int | None = None):
        self.x, self.y, self.output = x, y, output
        fmt = (lambda v: format(v, f"0{width}b")) if width else str
        super().__init__(f"inputs {fmt(x)} and {fmt(y)} both map to {fmt(output)}")


def _merge_count(seq: list[int]) -> tuple[list[int], int]:
    n = len(seq)
    if n < 2:
        return seq, 0
    left, a = _merge_count(seq[: n // 2])
    right, b = _merge_count(seq[n // 2 :])
    merged = []
    count = a + b
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            count += len(left) - i
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, count


def count_inversions(seq: Sequence[int]) -> int:
    """Number of pairs i < j with seq[i] > seq[j], by merge sort."""
    return _merge_count(list(seq))[1]


def count_inversions_naive(seq: Sequence[int]) -> int:
    """Quadratic pair scan; kept as an oracle for :func:`count_inversions`."""
    n = len(seq)
    return sum(1 for i in range(n) for j in range(i + 1, n) if seq[i] > seq[j])


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"not a permutation of 0..{len(image) - 1}: {list(image)}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, size: int) -> Permutation:
        return cls(tuple(range(size)))

    @classmethod
    def transposition(cls, size: int, a: int, b: int) -> Permutation:
        image = list(range(size))
        image[a], image[b] = b, a
        return cls(tuple(image))

    @classmethod
    def from_cycles(cls, size: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        image = list(range(size))
        for cyc in cycles:
            for k, x in enumerate(cyc):
                image[x] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(image))

    @property
    def size(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __len__(self) -> int:
        return len(self.image)

    def inversion_count(self) -> int:
        return count_inversions(self.image)

    def parity(self) -> Parity:
        return Parity(self.inversion_count() & 1)

    def compose(self, other: Permutation) -> Permutation:
        """``self ∘ other``: apply ``other`` first."""
        if self.size != other.size:
            raise ValueError(f"size mismatch: {self.size} vs {other.size}")
        return Permutation(tuple(self.image[y] for y in other.image))

    def inverse(self) -> Permutation:
        inv = [0] * self.size
        for x, y in enumerate(self.image):
            inv[y] = x
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles, each starting at its minimum, sorted by minimum."""
        seen = [False] * self.size
        out = []
        for start in range(self.size):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.image[x]
            out.append(tuple(cyc))
        return out

    def is_full_cycle(self) -> bool:
        return len(self.cycles()) == 1

    def one_line(self) -> str:
        return "[" + ",".join(map(str, self.image)) + "]"

    def cycle_notation(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())

    def __str__(self) -> str:
        return self.one_line()


def inversion_count(p: Permutation) -> int:
    return p.inversion_count()


def parity(p: Permutation) -> Parity:
    return p.parity()


def compose(p: Permutation, q: Permutation) -> Permutation:
    return p.compose(q)


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def cycle_decomposition(p: Permutation) -> list[tuple[int, ...]]:
    return p.cycles()


def is_full_cycle(p: Permutation) -> bool:
    return p.is_full_cycle()


def from_dat(dat: DecisionAssignmentTree) -> Permutation:
    """The function computed by ``dat`` as a permutation of the code space.

    Raises NotBijective with the first colliding pair of inputs.
    """
    seen: dict[int, int] = {}
    table = []
    for x in range(1 << dat.width):
        y = dat.apply(x)
        if y in seen:
            raise NotBijective(seen[y], x, y, dat.width)
        seen[y] = x
        table.append(y)
    return Permutation(tuple(table))
