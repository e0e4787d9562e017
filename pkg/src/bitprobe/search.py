"""Exhaustive search over canonical balanced decision assignment trees.

Every tree of depth <= d has a balanced depth-d equivalent, so only balanced
trees are enumerated. Leaves of a bijective tree write probed coordinates only,
which makes every leaf a translation of its face by an XOR delta inside the
probed mask. Trees are built depth-first, zero child first; leaves are
assigned as soon as they are reached, with pruning on

* ``overlap``: the translated face hits an already covered vertex,
* ``short_cycle``: a full cycle is required and a shorter cycle has closed,
* ``writes``: the leaf changes more than ``max_writes`` bits,
* ``target``: the leaf cannot reproduce the target permutation on its face,
* ``dead_end``: a pending sibling leaf has no disjoint translation left,
* ``theorem``: full cycles below ceil(n/2) reads are skipped outright.
"""
from __future__ import annotations

import json
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional

from bitprobe.dat import DecisionAssignmentTree, Inner, Leaf, Node
from bitprobe.permutation import Permutation

log = logging.getLogger(__name__)

MAX_WIDTH = 6


class SearchLimitExceeded(RuntimeError):
    def __init__(self, explored: int, found: int, unit: tuple[int, ...]):
        self.explored, self.found, self.unit = explored, found, unit
        super().__init__(
            f"node budget exhausted after {explored} nodes "
            f"({found} trees found, in work unit {list(unit)})"
        )


@dataclass(frozen=True)
class SearchSpec:
    width: int
    max_depth: int
    require_full_cycle: bool = True
    max_writes: Optional[int] = None
    target_permutation: Optional[Permutation] = None
    use_theorem_pruning: bool = True

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in 1..{MAX_WIDTH}, got {self.width}")
        if not 1 <= self.max_depth <= self.width:
            raise ValueError(f"depth must be in 1..{self.width}, got {self.max_depth}")
        if self.target_permutation is not None and self.target_permutation.size != 1 << self.width:
            raise ValueError("target permutation size does not match 2^width")
        if self.max_writes is not None and self.max_writes < 0:
            raise ValueError("max_writes must be nonnegative")


@dataclass
class SearchResult:
    spec: SearchSpec
    dats: list[DecisionAssignmentTree] = field(default_factory=list)
    explored: int = 0
    pruned: Counter = field(default_factory=Counter)
    complete: int = 0

    @property
    def found(self) -> bool:
        return bool(self.dats)

    @property
    def outcome(self) -> str:
        return "found" if self.dats else "none_exist"

    def summary(self) -> dict:
        return {
            "bits": self.spec.width,
            "depth": self.spec.max_depth,
            "outcome": self.outcome,
            "found": len(self.dats),
            "explored": self.explored,
            "complete_candidates": self.complete,
            "pruned": dict(sorted(self.pruned.items())),
        }


class _Engine:
    def __init__(self, spec: SearchSpec, max_nodes: Optional[int]):
        self.spec = spec
        self.n = spec.width
        self.N = 1 << spec.width
        self.max_nodes = max_nodes
        self.image = [-1] * self.N
        self.covered = 0
        self.explored = 0
        self.complete = 0
        self.pruned: Counter = Counter()
        self.pending: list[tuple[int, int, int]] = []
        self.unit: tuple[int, ...] = ()
        self._verts: dict[tuple[int, int], list[int]] = {}
        self._sets: dict[tuple[int, int], int] = {}
        self.target = spec.target_permutation.image if spec.target_permutation else None

    def verts(self, mask: int, base: int) -> list[int]:
        key = (mask, base)
        if key not in self._verts:
            self._verts[key] = [x for x in range(self.N) if (x & mask) == base]
            s = 0
            for x in self._verts[key]:
                s |= 1 << x
            self._sets[key] = s
        return self._verts[key]

    def vset(self, mask: int, base: int) -> int:
        self.verts(mask, base)
        return self._sets[(mask, base)]

    def tick(self) -> None:
        self.explored += 1
        if self.max_nodes is not None and self.explored > self.max_nodes:
            raise SearchLimitExceeded(self.explored, 0, self.unit)

    def closes_short_cycle(self, xs: list[int]) -> bool:
        img = self.image
        for x in xs:
            y = img[x]
            steps = 1
            while y != -1 and y != x:
                y = img[y]
                steps += 1
            if y == x and steps < self.N:
                return True
        return False

    def deltas(self, mask: int, base: int) -> Iterator[int]:
        if self.target is not None:
            x0 = base
            d = x0 ^ self.target[x0]
            if d & ~mask or any(self.target[x] != x ^ d for x in self.verts(mask, base)):
                self.pruned["target"] += 1
                return
            yield d
            return
        sub = mask
        out = []
        while True:
            out.append(sub)
            if sub == 0:
                break
            sub = (sub - 1) & mask
        yield from reversed(out)

    def has_room(self, mask: int, base: int) -> bool:
        sub = mask
        while True:
            if not self.vset(mask, base ^ sub) & self.covered:
                return True
            if sub == 0:
                return False
            sub = (sub - 1) & mask

    def leaf(self, mask: int, base: int) -> Iterator[Leaf]:
        spec = self.spec
        for d in self.deltas(mask, base):
            self.tick()
            if spec.max_writes is not None and bin(d).count("1") > spec.max_writes:
                self.pruned["writes"] += 1
                continue
            iset = self.vset(mask, base ^ d)
            if iset & self.covered:
                self.pruned["overlap"] += 1
                continue
            xs = self.verts(mask, base)
            self.covered |= iset
            for x in xs:
                self.image[x] = x ^ d
            if spec.require_full_cycle and self.closes_short_cycle(xs):
                self.pruned["short_cycle"] += 1
            elif any(
                lvl == spec.max_depth and not self.has_room(m, b) for m, b, lvl in self.pending
            ):
                self.pruned["dead_end"] += 1
            else:
                n = self.n
                yield Leaf(
                    tuple(
                        (c, ((base ^ d) >> (n - 1 - c)) & 1)
                        for c in range(n)
                        if (d >> (n - 1 - c)) & 1
                    )
                )
            for x in xs:
                self.image[x] = -1
            self.covered &= ~iset

    def node(self, mask: int, base: int, level: int, fixed: dict) -> Iterator[Node]:
        if level == self.spec.max_depth:
            yield from self.leaf(mask, base)
            return
        n = self.n
        path = tuple(sorted(fixed.items()))
        choices = self.forced.get(path)
        coords = [c for c in range(n) if c not in fixed] if choices is None else [choices]
        for c in coords:
            self.tick()
            p = 1 << (n - 1 - c)
            one_key = (mask | p, base | p, level + 1)
            self.pending.append(one_key)
            for zero in self.node(mask | p, base, level + 1, {**fixed, c: 0}):
                self.pending.pop()
                for one in self.node(mask | p, base | p, level + 1, {**fixed, c: 1}):
                    yield Inner(c, zero, one)
                self.pending.append(one_key)
            self.pending.pop()

    def run(self, unit: tuple[int, ...], limit: Optional[int]) -> list[DecisionAssignmentTree]:
        self.unit = unit
        self.forced = {(): unit[0]}
        if len(unit) > 1:
            self.forced[((unit[0], 0),)] = unit[1]
        found = []
        try:
            for root in self.node(0, 0, 0, {}):
                self.complete += 1
                found.append(DecisionAssignmentTree(self.n, root))
                if limit is not None and len(found) >= limit:
                    break
        except SearchLimitExceeded as exc:
            raise SearchLimitExceeded(exc.explored, len(found), unit) from None
        return found


def work_units(spec: SearchSpec) -> list[tuple[int, ...]]:
    """Independent slices of the search: (root probe[, zero-child probe])."""
    n = spec.width
    roots = range(n) if spec.target_permutation is not None else [0]
    units = []
    for r in roots:
        if spec.max_depth == 1:
            units.append((r,))
        else:
            units.extend((r, c) for c in range(n) if c != r)
    return units


def _run_unit(args) -> tuple[list[DecisionAssignmentTree], int, int, dict]:
    spec, unit, limit, max_nodes = args
    eng = _Engine(spec, max_nodes)
    dats = eng.run(unit, limit)
    return dats, eng.explored, eng.complete, dict(eng.pruned)


def _key(dat: DecisionAssignmentTree) -> str:
    # Engine output is already canonical, so this equals dat.dumps().
    return json.dumps(dat.to_dict(), separators=(",", ":"))


def search(
    spec: SearchSpec,
    limit: Optional[int] = None,
    workers: int = 1,
    max_nodes: Optional[int] = None,
) -> SearchResult:
    """Enumerate trees meeting ``spec``.

    Without a target permutation the root probe is fixed to coordinate 0:
    relabelling coordinates maps any counter to one that reads coordinate 0
    first. ``limit`` caps the number of trees returned; ``max_nodes`` caps
    the search nodes per work unit. Results are sorted by their JSON text and
    do not depend on ``workers``.
    """
    result = SearchResult(spec)
    if (
        spec.use_theorem_pruning
        and spec.require_full_cycle
        and spec.max_depth < (spec.width + 1) // 2
    ):
        result.pruned["theorem"] += 1
        return result
    units = work_units(spec)
    jobs = [(spec, u, limit, max_nodes) for u in units]
    if workers > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_unit, jobs))
    else:
        outputs = [_run_unit(job) for job in jobs]
    found: list[DecisionAssignmentTree] = []
    for unit, (dats, explored, complete, pruned) in zip(units, outputs):
        log.debug("unit %s: %d found, %d explored", unit, len(dats), explored)
        found.extend(dats)
        result.explored += explored
        result.complete += complete
        result.pruned.update(pruned)
    if limit is not None:
        found = found[:limit]
    result.dats = sorted(found, key=_key)
    return result


@dataclass(frozen=True)
class MinDepthResult:
    width: int
    depth: int
    witness: DecisionAssignmentTree
    certificates: dict[int, SearchResult]


def min_depth(n: int, max_nodes: Optional[int] = None, workers: int = 1) -> MinDepthResult:
    """Smallest depth admitting a full-cycle counter, found by exhaustion.

    Runs without theorem pruning, so shallower depths are certified empty by
    the search itself.
    """
    certificates = {}
    for d in range(1, n + 1):
        spec = SearchSpec(n, d, require_full_cycle=True, use_theorem_pruning=False)
        res = search(spec, limit=1, workers=workers, max_nodes=max_nodes)
        if res.found:
            return MinDepthResult(n, d, res.dats[0], certificates)
        certificates[d] = res
    raise AssertionError(f"no full-cycle counter of any depth for n={n}")
