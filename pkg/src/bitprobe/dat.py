"""Decision assignment trees over n-bit codes.

Coordinates are 0-based and MSB-first: coordinate 0 is the leftmost bit of a
written code, so a code's integer value is its standard binary reading.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union


class DATError(ValueError):
    """Raised for malformed trees or inputs that do not fit a tree."""


class WriteDisciplineError(DATError):
    """An assignment touches a coordinate that is free in the face."""


def _bit(value: int, width: int, coord: int) -> int:
    return (value >> (width - 1 - coord)) & 1


def _pos(width: int, coord: int) -> int:
    return 1 << (width - 1 - coord)


@dataclass(frozen=True)
class BitString:
    width: int
    value: int

    def __post_init__(self):
        if self.width < 1:
            raise DATError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise DATError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def parse(cls, text: str) -> BitString:
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise DATError(f"not a bit string: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> BitString:
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise DATError(f"bit values must be 0 or 1, got {b!r}")
            value = (value << 1) | b
        return cls(len(bits), value)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(_bit(self.value, self.width, i) for i in range(self.width))

    def __getitem__(self, coord: int) -> int:
        if not 0 <= coord < self.width:
            raise IndexError(coord)
        return _bit(self.value, self.width, coord)

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")


@dataclass(frozen=True)
class Leaf:
    """Leaf node; ``assignments`` is a sorted tuple of (coordinate, value)."""

    assignments: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((int(c), int(v)) for c, v in self.assignments))
        coords = [c for c, _ in pairs]
        if len(set(coords)) != len(coords):
            raise DATError(f"leaf assigns a coordinate twice: {pairs}")
        if any(v not in (0, 1) for _, v in pairs):
            raise DATError(f"assigned values must be 0 or 1: {pairs}")
        object.__setattr__(self, "assignments", pairs)


@dataclass(frozen=True)
class Inner:
    probe: int
    zero: Node
    one: Node


Node = Union[Inner, Leaf]


@dataclass(frozen=True)
class Face:
    """Subcube of the hypercube. ``fixed`` maps coordinate to bit value."""

    width: int
    fixed: tuple[tuple[int, int], ...] = ()
    mask: int = field(init=False, repr=False, compare=False)
    base: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.fixed, Mapping):
            pairs = self.fixed.items()
        else:
            pairs = self.fixed
        pairs = tuple(sorted((int(c), int(v)) for c, v in pairs))
        mask = base = 0
        for c, v in pairs:
            if not 0 <= c < self.width:
                raise DATError(f"coordinate {c} out of range for width {self.width}")
            if v not in (0, 1):
                raise DATError(f"fixed values must be 0 or 1, got {v}")
            if mask & _pos(self.width, c):
                raise DATError(f"coordinate {c} fixed twice")
            mask |= _pos(self.width, c)
            base |= v * _pos(self.width, c)
        object.__setattr__(self, "fixed", pairs)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "base", base)

    @classmethod
    def from_pattern(cls, pattern: str) -> Face:
        """Build a face from a pattern such as ``"**01"`` (``*`` marks free)."""
        fixed = [(i, int(ch)) for i, ch in enumerate(pattern) if ch != "*"]
        return cls(len(pattern), tuple(fixed))

    @property
    def dimension(self) -> int:
        return self.width - len(self.fixed)

    @property
    def free(self) -> tuple[int, ...]:
        fixed = dict(self.fixed)
        return tuple(c for c in range(self.width) if c not in fixed)

    def __len__(self) -> int:
        return 1 << self.dimension

    def __contains__(self, x: int) -> bool:
        return (x & self.mask) == self.base

    def vertex(self, j: int) -> int:
        """The j-th vertex of the face in lexicographic order."""
        x = self.base
        free = self.free
        k = len(free)
        for t, c in enumerate(free):
            if (j >> (k - 1 - t)) & 1:
                x |= _pos(self.width, c)
        return x

    def vertices(self) -> list[int]:
        # Free coordinates listed MSB-first, so counting through them keeps order.
        return [self.vertex(j) for j in range(len(self))]

    def intersects(self, other: Face) -> bool:
        common = self.mask & other.mask
        return (self.base & common) == (other.base & common)

    def pattern(self) -> str:
        fixed = dict(self.fixed)
        return "".join(str(fixed[c]) if c in fixed else "*" for c in range(self.width))

    def __str__(self) -> str:
        return self.pattern()


@dataclass(frozen=True)
class LeafInfo:
    index: int
    path: tuple[tuple[int, int], ...]
    leaf: Leaf

    @property
    def depth(self) -> int:
        return len(self.path)


@dataclass(frozen=True)
class Execution:
    output: BitString
    probes: tuple[tuple[int, int], ...]
    bits_written: int

    @property
    def probes_read(self) -> int:
        return len(self.probes)


@dataclass(frozen=True)
class DecisionAssignmentTree:
    width: int
    root: Node

    def __post_init__(self):
        if self.width < 1:
            raise DATError(f"width must be >= 1, got {self.width}")
        self._validate(self.root, frozenset())

    def _validate(self, node: Node, probed: frozenset[int]) -> None:
        if isinstance(node, Leaf):
            for c, _ in node.assignments:
                if not 0 <= c < self.width:
                    raise DATError(f"assigned coordinate {c} out of range")
            return
        if not isinstance(node, Inner):
            raise DATError(f"not a tree node: {node!r}")
        if not 0 <= node.probe < self.width:
            raise DATError(f"probe coordinate {node.probe} out of range")
        if node.probe in probed:
            raise DATError(f"coordinate {node.probe} probed twice on one path")
        inner = probed | {node.probe}
        self._validate(node.zero, inner)
        self._validate(node.one, inner)

    def leaves(self) -> list[LeafInfo]:
        """Leaves in depth-first order, zero child before one child."""
        out: list[LeafInfo] = []

        def walk(node: Node, path: tuple[tuple[int, int], ...]) -> None:
            if isinstance(node, Leaf):
                out.append(LeafInfo(len(out), path, node))
            else:
                walk(node.zero, path + ((node.probe, 0),))
                walk(node.one, path + ((node.probe, 1),))

        walk(self.root, ())
        return out

    @property
    def max_depth(self) -> int:
        return max(info.depth for info in self.leaves())

    def is_balanced(self) -> bool:
        return len({info.depth for info in self.leaves()}) == 1

    def apply(self, x: int) -> int:
        """Integer-level execution without tracing."""
        node = self.root
        w = self.width
        while isinstance(node, Inner):
            node = node.one if (x >> (w - 1 - node.probe)) & 1 else node.zero
        for c, v in node.assignments:
            p = _pos(w, c)
            x = (x | p) if v else (x & ~p)
        return x

    def table(self) -> list[int]:
        return [self.apply(x) for x in range(1 << self.width)]

    def canonical(self) -> DecisionAssignmentTree:
        """Drop assignments that give a probed coordinate its known value."""

        def walk(node: Node, known: dict[int, int]) -> Node:
            if isinstance(node, Leaf):
                return Leaf(tuple((c, v) for c, v in node.assignments if known.get(c) != v))
            return Inner(
                node.probe,
                walk(node.zero, {**known, node.probe: 0}),
                walk(node.one, {**known, node.probe: 1}),
            )

        return DecisionAssignmentTree(self.width, walk(self.root, {}))

    def to_dict(self) -> dict:
        def enc(node: Node) -> dict:
            if isinstance(node, Leaf):
                return {"leaf": [[c, v] for c, v in node.assignments]}
            return {"probe": node.probe, "zero": enc(node.zero), "one": enc(node.one)}

        return {"bits": self.width, "root": enc(self.root)}

    def dumps(self) -> str:
        """Canonical compact JSON text (no trailing newline)."""
        return json.dumps(self.canonical().to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> DecisionAssignmentTree:
        if not isinstance(data, Mapping) or set(data) != {"bits", "root"}:
            raise DATError('DAT document must have exactly the keys "bits" and "root"')
        width = data["bits"]
        if not isinstance(width, int) or isinstance(width, bool):
            raise DATError('"bits" must be an integer')

        def dec(obj) -> Node:
            if not isinstance(obj, Mapping):
                raise DATError(f"node must be an object, got {obj!r}")
            if set(obj) == {"leaf"}:
                pairs = obj["leaf"]
                if not isinstance(pairs, list) or not all(
                    isinstance(p, list) and len(p) == 2 and all(_is_int(t) for t in p)
                    for p in pairs
                ):
                    raise DATError(f"leaf must be a list of [coord, value] pairs: {pairs!r}")
                return Leaf(tuple((c, v) for c, v in pairs))
            if set(obj) == {"probe", "zero", "one"}:
                if not _is_int(obj["probe"]):
                    raise DATError('"probe" must be an integer')
                return Inner(obj["probe"], dec(obj["zero"]), dec(obj["one"]))
            raise DATError(f"unrecognised node keys: {sorted(obj)}")

        return cls(width, dec(data["root"]))

    @classmethod
    def loads(cls, text: str) -> DecisionAssignmentTree:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DATError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data).canonical()


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _as_bitstring(dat: DecisionAssignmentTree, x: Union[BitString, str, int]) -> BitString:
    if isinstance(x, str):
        x = BitString.parse(x)
    elif isinstance(x, int):
        x = BitString(dat.width, x)
    if x.width != dat.width:
        raise DATError(f"input has width {x.width}, tree expects {dat.width}")
    return x


def execute(dat: DecisionAssignmentTree, x: Union[BitString, str, int]) -> Execution:
    """Run ``dat`` on ``x``, recording the probe sequence and bits changed."""
    x = _as_bitstring(dat, x)
    value = x.value
    node = dat.root
    probes = []
    while isinstance(node, Inner):
        b = x[node.probe]
        probes.append((node.probe, b))
        node = node.one if b else node.zero
    out = value
    written = 0
    for c, v in node.assignments:
        p = _pos(dat.width, c)
        if _bit(value, dat.width, c) != v:
            written += 1
        out = (out | p) if v else (out & ~p)
    return Execution(BitString(dat.width, out), tuple(probes), written)


def balance(dat: DecisionAssignmentTree, depth: int | None = None) -> DecisionAssignmentTree:
    """Equivalent tree whose leaves all sit at ``depth`` (default: max depth).

    A shallow leaf is deepened by probing the lowest-index coordinate not yet
    probed on its path and copying its assignments into both children.
    """
    target = dat.max_depth if depth is None else depth
    if not dat.max_depth <= target <= dat.width:
        raise DATError(f"cannot balance a depth-{dat.max_depth} tree to depth {target}")

    def walk(node: Node, known: dict[int, int]) -> Node:
        if isinstance(node, Inner):
            return Inner(
                node.probe,
                walk(node.zero, {**known, node.probe: 0}),
                walk(node.one, {**known, node.probe: 1}),
            )
        if len(known) == target:
            return node
        c = min(set(range(dat.width)) - set(known))
        children = []
        for b in (0, 1):
            kept = tuple((a, v) for a, v in node.assignments if not (a == c and v == b))
            children.append(walk(Leaf(kept), {**known, c: b}))
        return Inner(c, children[0], children[1])

    return DecisionAssignmentTree(dat.width, walk(dat.root, {}))


def leaf_face(dat: DecisionAssignmentTree, leaf: Union[int, LeafInfo]) -> Face:
    """The face of inputs routed to ``leaf`` (a leaf index or LeafInfo)."""
    if isinstance(leaf, int):
        leaf = dat.leaves()[leaf]
    return Face(dat.width, leaf.path)


@dataclass(frozen=True)
class Violation:
    leaf: int
    coordinate: int

    def __str__(self) -> str:
        return f"leaf {self.leaf} writes unprobed coordinate {self.coordinate}"


def check_write_discipline(dat: DecisionAssignmentTree) -> list[Violation]:
    out = []
    for info in dat.leaves():
        probed = {c for c, _ in info.path}
        out.extend(Violation(info.index, c) for c, _ in info.leaf.assignments if c not in probed)
    return out


def image_face(face: Face, assignments: Iterable[tuple[int, int]]) -> Face:
    """Translate ``face`` by overwriting fixed coordinates with ``assignments``."""
    fixed = dict(face.fixed)
    for c, v in assignments:
        if c not in fixed:
            raise WriteDisciplineError(f"assignment to free coordinate {c} of face {face}")
        fixed[c] = v
    return Face(face.width, tuple(fixed.items()))
