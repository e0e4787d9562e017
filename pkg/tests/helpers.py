"""Random generators and brute-force oracles shared by the test modules."""
from __future__ import annotations

import itertools
import random

from bitprobe.dat import DecisionAssignmentTree, Face, Inner, Leaf


def random_dat(rng: random.Random, n: int, max_depth: int, disciplined: bool = True,
               balanced: bool = False) -> DecisionAssignmentTree:
    def node(known: dict, depth: int):
        stop = depth == max_depth or (not balanced and depth > 0 and rng.random() < 0.3)
        if stop:
            pool = sorted(known) if disciplined else list(range(n))
            pairs = []
            for c in pool:
                if rng.random() < 0.5:
                    v = rng.randint(0, 1)
                    if known.get(c) != v:
                        pairs.append((c, v))
            return Leaf(tuple(pairs))
        c = rng.choice([c for c in range(n) if c not in known])
        return Inner(c, node({**known, c: 0}, depth + 1), node({**known, c: 1}, depth + 1))

    return DecisionAssignmentTree(n, node({}, 0))


def random_disjoint_pair(rng: random.Random, n: int, min_common_free: int = 2) -> tuple[Face, Face]:
    """Two disjoint faces of equal dimension sharing >= min_common_free free coordinates."""
    while True:
        coords = list(range(n))
        rng.shuffle(coords)
        k = rng.randint(min_common_free, n - 1)
        rest = coords[k:]
        sep = rest[0]
        a = {sep: 0}
        b = {sep: 1}
        for c in rest[1:]:
            kind = rng.choice(["a", "b", "both"])
            if kind in ("a", "both"):
                a[c] = rng.randint(0, 1)
            if kind in ("b", "both"):
                b[c] = rng.randint(0, 1)
        if len(a) == len(b):
            fa, fb = Face(n, tuple(a.items())), Face(n, tuple(b.items()))
            return (fa, fb) if rng.random() < 0.5 else (fb, fa)


def brute_cross_inversions(a: Face, b: Face) -> int:
    vb = [v for v in range(1 << b.width) if v in b]
    return sum(1 for u in range(1 << a.width) if u in a for v in vb if u > v)


def realizable(image: tuple[int, ...], n: int, depth: int) -> bool:
    """Can some depth-``depth`` tree compute ``image``? Checked face by face."""

    def ok(fixed: dict) -> bool:
        if len(fixed) == depth:
            face = Face(n, tuple(fixed.items()))
            xs = face.vertices()
            delta = xs[0] ^ image[xs[0]]
            return not (delta & ~face.mask) and all(image[x] == x ^ delta for x in xs)
        return any(
            ok({**fixed, c: 0}) and ok({**fixed, c: 1}) for c in range(n) if c not in fixed
        )

    return ok({})


def full_cycles(size: int):
    """Every cyclic permutation of range(size), as image tuples."""
    for rest in itertools.permutations(range(1, size)):
        order = (0,) + rest
        image = [0] * size
        for i, x in enumerate(order):
            image[x] = order[(i + 1) % size]
        yield tuple(image)


def all_depth1_tables(n: int):
    """Tables of every depth-1 tree, leaves unrestricted (any coordinate, any value)."""
    N = 1 << n
    options = []
    for amask in range(N):
        sub = amask
        while True:
            options.append((amask, sub))
            if sub == 0:
                break
            sub = (sub - 1) & amask
    for c in range(n):
        p = 1 << (n - 1 - c)
        for (m0, v0), (m1, v1) in itertools.product(options, repeat=2):
            yield tuple(
                ((x & ~m1) | v1) if x & p else ((x & ~m0) | v0) for x in range(N)
            )
