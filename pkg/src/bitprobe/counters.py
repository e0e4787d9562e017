"""Reference counters and exact read/write statistics."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Union

from bitprobe.dat import (
    BitString,
    DecisionAssignmentTree,
    Inner,
    Leaf,
    Node,
    execute,
)
from bitprobe.permutation import Permutation, from_dat

BGPS4_IMAGE = (1, 4, 3, 0, 5, 13, 7, 15, 10, 12, 2, 8, 14, 9, 6, 11)


class NotFullCycle(ValueError):
    pass


@dataclass(frozen=True)
class CounterCode:
    """Encoding table ``enc[v]`` = integer value of the code for ``v``."""

    width: int
    enc: tuple[int, ...]

    def __post_init__(self):
        enc = tuple(self.enc)
        if sorted(enc) != list(range(1 << self.width)):
            raise ValueError("encoding table is not a bijection onto the code space")
        object.__setattr__(self, "enc", enc)

    @property
    def dec(self) -> tuple[int, ...]:
        out = [0] * len(self.enc)
        for v, x in enumerate(self.enc):
            out[x] = v
        return tuple(out)

    def encode(self, v: int) -> BitString:
        return BitString(self.width, self.enc[v])

    def decode(self, code: BitString) -> int:
        return self.dec[code.value]

    def inc(self) -> Permutation:
        """Inc(x) = Enc(Dec(x) + 1), with Enc(2^n - 1) wrapping to Enc(0)."""
        n = len(self.enc)
        dec = self.dec
        return Permutation(tuple(self.enc[(dec[x] + 1) % n] for x in range(n)))

    def codes(self) -> list[str]:
        return [str(self.encode(v)) for v in range(len(self.enc))]


@dataclass(frozen=True)
class ProbeStats:
    worst_reads: int
    worst_writes: int
    avg_reads: Fraction
    avg_writes: Fraction

    def to_dict(self) -> dict:
        return {
            "worst_reads": self.worst_reads,
            "worst_writes": self.worst_writes,
            "avg_reads": _ratio(self.avg_reads),
            "avg_writes": _ratio(self.avg_writes),
        }


def _ratio(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def standard_binary_dat(n: int) -> DecisionAssignmentTree:
    """+1 mod 2^n: probe from the least significant bit up to the first 0."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def node(k: int) -> Node:
        # Coordinates k+1..n-1 were all read as 1.
        tail = tuple((c, 0) for c in range(k + 1, n))
        carry = Leaf(((k, 1),) + tail)
        if k == 0:
            return Inner(0, carry, Leaf(((0, 0),) + tail))
        return Inner(k, carry, node(k - 1))

    return DecisionAssignmentTree(n, node(n - 1))


def _gray_successor_flip(code: int, n: int) -> int:
    """Bit position (LSB = 0) flipped by the reflected Gray code increment."""
    if bin(code).count("1") % 2 == 0:
        return 0
    low = (code & -code).bit_length() - 1
    return min(low + 1, n - 1)


def gray_code_dat(n: int) -> DecisionAssignmentTree:
    """Full-depth tree for the binary reflected Gray code; each leaf flips one bit."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def node(coord: int, prefix: int) -> Node:
        if coord == n:
            pos = _gray_successor_flip(prefix, n)
            c = n - 1 - pos
            return Leaf(((c, 1 - ((prefix >> pos) & 1)),))
        return Inner(coord, node(coord + 1, prefix << 1), node(coord + 1, (prefix << 1) | 1))

    return DecisionAssignmentTree(n, node(0, 0))


def bgps4_permutation() -> Permutation:
    """Increment permutation of the 4-bit, 3-read counter of Brodal et al."""
    return Permutation(BGPS4_IMAGE)


@lru_cache(maxsize=None)
def bgps4_dat() -> DecisionAssignmentTree:
    """A depth-3 tree realizing :func:`bgps4_permutation`.

    The tree was recovered by target-constrained search; among the search
    results it is the one whose leaf order matches the usual a..h face
    labelling of this counter.
    """
    text = resources.files("bitprobe.data").joinpath("bgps4.json").read_text()
    return DecisionAssignmentTree.loads(text)


_REFERENCE = {"binary": standard_binary_dat, "gray": gray_code_dat}


def reference_dat(name: str, n: int) -> DecisionAssignmentTree:
    if name == "bgps4":
        if n != 4:
            raise ValueError("the bgps4 counter exists only for 4 bits")
        return bgps4_dat()
    try:
        return _REFERENCE[name](n)
    except KeyError:
        raise ValueError(f"unknown counter {name!r}") from None


def probe_stats(dat: DecisionAssignmentTree) -> ProbeStats:
    """Exact statistics over all 2^n inputs."""
    n_inputs = 1 << dat.width
    reads = writes = worst_r = worst_w = 0
    for x in range(n_inputs):
        run = execute(dat, x)
        reads += run.probes_read
        writes += run.bits_written
        worst_r = max(worst_r, run.probes_read)
        worst_w = max(worst_w, run.bits_written)
    return ProbeStats(worst_r, worst_w, Fraction(reads, n_inputs), Fraction(writes, n_inputs))


def decode_table(
    source: Union[DecisionAssignmentTree, Permutation],
    zero_code: Union[BitString, str, int] = 0,
) -> CounterCode:
    """Counter whose Enc(0) is ``zero_code`` and Enc(v+1) = Inc(Enc(v))."""
    if isinstance(source, DecisionAssignmentTree):
        width = source.width
        inc = from_dat(source)
    else:
        inc = source
        width = inc.size.bit_length() - 1
        if inc.size != 1 << width:
            raise ValueError(f"permutation size {inc.size} is not a power of two")
    if isinstance(zero_code, str):
        zero_code = BitString.parse(zero_code)
    start = zero_code.value if isinstance(zero_code, BitString) else int(zero_code)
    if isinstance(zero_code, BitString) and zero_code.width != width:
        raise ValueError(f"zero code has width {zero_code.width}, expected {width}")
    if not inc.is_full_cycle():
        raise NotFullCycle("increment is not a single cycle through all codes")
    enc = [start]
    for _ in range(inc.size - 1):
        enc.append(inc(enc[-1]))
    return CounterCode(width, tuple(enc))
