"""Parity machinery for increment trees.

A balanced tree of depth l splits the hypercube into 2^l leaf faces of size
2^(n-l); a bijective tree moves each face by a translation. Listing vertices
face by face (lexicographically inside each face) over the source faces gives
the Before permutation, over the image faces the After permutation, and
Inc = After ∘ Before⁻¹.
"""
from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from bitprobe.counters import CounterCode
from bitprobe.dat import (
    DecisionAssignmentTree,
    Face,
    Inner,
    Leaf,
    Node,
    balance,
    image_face,
)
from bitprobe.permutation import Parity, Permutation, from_dat

log = logging.getLogger(__name__)


class TheoremViolation(AssertionError):
    """A proven identity failed; this always means an implementation bug."""


class DecompositionMismatch(TheoremViolation):
    pass


class Contradiction(TheoremViolation):
    def __init__(self, verdict: LowerBoundVerdict):
        self.verdict = verdict
        super().__init__(
            f"bijective full-cycle tree of depth {verdict.depth} <= {verdict.threshold}: "
            + verdict.evidence()
        )


class FaceIntersection(ValueError):
    pass


def face_label(i: int) -> str:
    return chr(ord("a") + i) if i < 26 else str(i)


def parse_face_order(text: str, count: int) -> list[int]:
    """Parse ``"a,c,b"`` or ``"0,2,1"`` into a permutation of leaf indices."""
    order = []
    for tok in (t.strip() for t in text.split(",")):
        if tok.isdigit():
            order.append(int(tok))
        elif len(tok) == 1 and tok.isalpha():
            order.append(ord(tok.lower()) - ord("a"))
        else:
            raise ValueError(f"bad face label {tok!r}")
    if sorted(order) != list(range(count)):
        raise ValueError(f"face order must list each of the {count} faces exactly once")
    return order


@dataclass(frozen=True)
class FaceDecomposition:
    width: int
    depth: int
    source_faces: tuple[Face, ...]
    image_faces: tuple[Face, ...]
    labels: tuple[str, ...] = ()

    @property
    def face_size(self) -> int:
        return 1 << (self.width - self.depth)

    def reordered(self, order: Sequence[int]) -> FaceDecomposition:
        if sorted(order) != list(range(len(self.source_faces))):
            raise ValueError("order must be a permutation of the face indices")
        pick = lambda seq: tuple(seq[i] for i in order)  # noqa: E731
        return FaceDecomposition(
            self.width, self.depth, pick(self.source_faces), pick(self.image_faces), pick(self.labels)
        )


def face_decomposition(
    dat: DecisionAssignmentTree, order: Optional[Sequence[int]] = None
) -> FaceDecomposition:
    """Leaf faces of the balanced tree and their images, in leaf order.

    ``order`` optionally rearranges the faces (a permutation of leaf indices
    in depth-first, zero-first order).
    """
    from_dat(dat)  # raises NotBijective
    tree = balance(dat)
    infos = tree.leaves()
    sources = tuple(Face(tree.width, info.path) for info in infos)
    images = tuple(image_face(f, info.leaf.assignments) for f, info in zip(sources, infos))
    labels = tuple(face_label(i) for i in range(len(infos)))
    decomp = FaceDecomposition(tree.width, infos[0].depth, sources, images, labels)
    return decomp if order is None else decomp.reordered(order)


def _enumerate(faces: Sequence[Face]) -> Permutation:
    return Permutation(tuple(v for f in faces for v in f.vertices()))


def before_after(decomp: FaceDecomposition) -> tuple[Permutation, Permutation]:
    """Before(i*s + j) = j-th vertex of source face i; After likewise for images.

    ``s`` is the face size 2^(n-l).
    """
    return _enumerate(decomp.source_faces), _enumerate(decomp.image_faces)


@dataclass(frozen=True)
class AnalysisReport:
    decomposition: FaceDecomposition
    inc: Permutation
    before: Permutation
    after: Permutation
    inc_inversions: int
    before_inversions: int
    after_inversions: int

    @property
    def inc_parity(self) -> Parity:
        return Parity(self.inc_inversions & 1)

    @property
    def before_parity(self) -> Parity:
        return Parity(self.before_inversions & 1)

    @property
    def after_parity(self) -> Parity:
        return Parity(self.after_inversions & 1)

    @property
    def consistent(self) -> bool:
        return self.inc_parity == self.before_parity ^ self.after_parity


def verify_decomposition(
    dat: DecisionAssignmentTree, order: Optional[Sequence[int]] = None
) -> AnalysisReport:
    """Check Inc(Before(k)) = After(k) for every k and collect parities."""
    inc = from_dat(dat)
    decomp = face_decomposition(dat, order)
    before, after = before_after(decomp)
    for k in range(inc.size):
        if inc(before(k)) != after(k):
            raise DecompositionMismatch(
                f"Inc(Before({k})) = {inc(before(k))} but After({k}) = {after(k)}"
            )
    report = AnalysisReport(
        decomp,
        inc,
        before,
        after,
        inc.inversion_count(),
        before.inversion_count(),
        after.inversion_count(),
    )
    if not report.consistent:
        raise DecompositionMismatch("parity of Inc differs from parity(Before) xor parity(After)")
    return report


def common_free(a: Face, b: Face) -> tuple[int, ...]:
    fb = set(b.free)
    return tuple(c for c in a.free if c in fb)


def cross_face_inversions(a: Face, b: Face) -> int:
    """Number of pairs (u, v), u in ``a``, v in ``b``, with u > v.

    With ``a`` enumerated before ``b`` these are exactly the inversions that
    straddle the two faces.
    """
    if a.intersects(b):
        raise FaceIntersection(f"faces {a} and {b} intersect")
    vs = sorted(b.vertices())
    return sum(bisect.bisect_left(vs, u) for u in a.vertices())


def lower_bound_threshold(n: int) -> int:
    """Largest depth ruled out for n-bit counters: ceil(n/2) - 1."""
    return (n + 1) // 2 - 1


@dataclass(frozen=True)
class LowerBoundVerdict:
    width: int
    depth: int
    threshold: int
    bijective: bool
    full_cycle: bool
    report: Optional[AnalysisReport] = None

    @property
    def contradiction(self) -> bool:
        return self.bijective and self.full_cycle and self.depth <= self.threshold

    @property
    def status(self) -> str:
        return "contradiction" if self.contradiction else "consistent"

    def evidence(self) -> str:
        parts = [f"depth {self.depth} (threshold {self.threshold})"]
        parts.append("bijective" if self.bijective else "not bijective")
        if self.bijective:
            parts.append("full cycle" if self.full_cycle else "not a full cycle")
        if self.report is not None:
            r = self.report
            parts.append(
                f"Before {r.before_parity}, After {r.after_parity}, Inc {r.inc_parity}"
            )
        return "; ".join(parts)


def _judge(verdict: LowerBoundVerdict) -> LowerBoundVerdict:
    if verdict.contradiction:
        raise Contradiction(verdict)
    return verdict


def lower_bound_check(dat: DecisionAssignmentTree) -> LowerBoundVerdict:
    """Verdict on whether ``dat`` is compatible with the n/2 read bound.

    Raises Contradiction if ``dat`` is a bijective full-cycle tree at or below
    the threshold depth; that cannot happen for a correct implementation.
    """
    n = dat.width
    depth = dat.max_depth
    threshold = lower_bound_threshold(n)
    try:
        inc = from_dat(dat)
    except ValueError:
        return _judge(LowerBoundVerdict(n, depth, threshold, False, False))
    report = verify_decomposition(dat)
    return _judge(LowerBoundVerdict(n, depth, threshold, True, inc.is_full_cycle(), report))


def even_column_count(dat: DecisionAssignmentTree, k: int) -> int:
    """How many inputs produce an output with bit 1 at coordinate ``k``.

    Each leaf face contributes none, all or half of its vertices, so the count
    is even when every face has dimension >= 2. With 1-dimensional faces it is
    still even for disciplined trees on n >= 2 bits (such leaves pair up with a
    sibling of the same free coordinate) but not in general: the 1-bit
    identity tree gives 1.
    """
    if dat.max_depth > dat.width - 1:
        raise ValueError(f"tree depth {dat.max_depth} leaves no free coordinate in some face")
    if not 0 <= k < dat.width:
        raise ValueError(f"coordinate {k} out of range")
    shift = dat.width - 1 - k
    return sum((dat.apply(x) >> shift) & 1 for x in range(1 << dat.width))


@dataclass(frozen=True)
class WraparoundVerdict:
    status: str  # "wraps", "fails" or "precondition"
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "wraps"


def wraparound_check(dat: DecisionAssignmentTree, code: CounterCode) -> WraparoundVerdict:
    """Does a shallow tree that increments every non-maximal value wrap to Enc(0)?"""
    n = dat.width
    if code.width != n:
        return WraparoundVerdict("precondition", f"code width {code.width} != tree width {n}")
    if dat.max_depth > n - 2:
        return WraparoundVerdict(
            "precondition", f"depth {dat.max_depth} exceeds n - 2 = {n - 2}"
        )
    last = len(code.enc) - 1
    for v in range(last):
        got = dat.apply(code.enc[v])
        if got != code.enc[v + 1]:
            return WraparoundVerdict(
                "precondition", f"Inc(Enc({v})) = {got:0{n}b}, expected {code.enc[v + 1]:0{n}b}"
            )
    top = dat.apply(code.enc[last])
    if top == code.enc[0]:
        return WraparoundVerdict("wraps", f"Inc(Enc({last})) = Enc(0) = {top:0{n}b}")
    return WraparoundVerdict("fails", f"Inc(Enc({last})) = {top:0{n}b} != Enc(0) = {code.enc[0]:0{n}b}")


@dataclass
class FalsificationReport:
    width: int
    depth: Optional[int]
    trees_examined: int = 0
    instances: list[tuple[DecisionAssignmentTree, CounterCode, WraparoundVerdict]] = field(
        default_factory=list
    )
    note: str = ""

    @property
    def vacuous(self) -> bool:
        return not self.instances

    @property
    def wrapped(self) -> int:
        return sum(v.holds for _, _, v in self.instances)

    def summary(self) -> str:
        if self.vacuous:
            why = f" ({self.note})" if self.note else ""
            return (
                f"n={self.width}: vacuous, no qualifying partial counter among "
                f"{self.trees_examined} trees{why}"
            )
        return (
            f"n={self.width}: {len(self.instances)} qualifying instances, "
            f"{self.wrapped} wrap to Enc(0)"
        )


def _shallow_trees(n: int, depth: int, stats: dict) -> Iterator[DecisionAssignmentTree]:
    """Balanced depth-``depth`` trees with arbitrary (unrestricted) leaves.

    Partial counters are injective except at the encoding of the maximum, so
    branches whose images already collide more than once are cut.
    """
    N = 1 << n
    full = N - 1
    counts = [0] * N
    excess = [0]

    def leaf_options(mask: int, base: int):
        for amask in range(N):
            # Only iterate values over amask; fixed coordinates must change.
            sub = amask
            while True:
                aval = sub
                if (aval & amask & mask) == (~base & amask & mask):
                    yield amask, aval
                if sub == 0:
                    break
                sub = (sub - 1) & amask

    def gen(mask: int, base: int, level: int, probed: frozenset) -> Iterator[Node]:
        if level == depth:
            verts = [x for x in range(N) if (x & mask) == base]
            for amask, aval in leaf_options(mask, base):
                outs = [(x & (full ^ amask)) | aval for x in verts]
                added = 0
                for y in outs:
                    if counts[y]:
                        added += 1
                    counts[y] += 1
                excess[0] += added
                if excess[0] <= 1:
                    yield Leaf(
                        tuple(
                            (c, (aval >> (n - 1 - c)) & 1)
                            for c in range(n)
                            if (amask >> (n - 1 - c)) & 1
                        )
                    )
                else:
                    stats["pruned"] = stats.get("pruned", 0) + 1
                excess[0] -= added
                for y in outs:
                    counts[y] -= 1
            return
        for c in range(n):
            if c in probed:
                continue
            p = 1 << (n - 1 - c)
            for zero in gen(mask | p, base, level + 1, probed | {c}):
                for one in gen(mask | p, base | p, level + 1, probed | {c}):
                    yield Inner(c, zero, one)

    for root in gen(0, 0, 0, frozenset()):
        yield DecisionAssignmentTree(n, root)


def falsify_wraparound(n: int) -> FalsificationReport:
    """Search every depth-(n-2) tree for partial counters and check wraparound."""
    if n - 2 < 0:
        report = FalsificationReport(n, None, note="depth <= n - 2 is impossible")
        log.warning("wraparound harness %s", report.summary())
        return report
    depth = n - 2
    N = 1 << n
    report = FalsificationReport(n, depth)
    stats: dict = {}
    for dat in _shallow_trees(n, depth, stats):
        report.trees_examined += 1
        f = dat.table()
        for x0 in range(N):
            path = [x0]
            seen = {x0}
            for _ in range(N - 1):
                y = f[path[-1]]
                if y in seen:
                    break
                seen.add(y)
                path.append(y)
            if len(path) == N:
                code = CounterCode(n, tuple(path))
                report.instances.append((dat, code, wraparound_check(dat, code)))
    if report.vacuous:
        report.note = "no tree of this depth increments all non-maximal values"
        log.warning("wraparound harness %s", report.summary())
    else:
        log.info("wraparound harness %s", report.summary())
    return report
