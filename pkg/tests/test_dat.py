import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from bitprobe.counters import bgps4_dat, gray_code_dat, standard_binary_dat
from bitprobe.dat import (
    BitString,
    DATError,
    DecisionAssignmentTree,
    Face,
    Inner,
    Leaf,
    WriteDisciplineError,
    balance,
    check_write_discipline,
    execute,
    image_face,
    leaf_face,
)

from helpers import random_dat

FACE_TABLE = {
    "a": ({0, 4}, {1, 5}),
    "b": ({8, 12}, {10, 14}),
    "c": ({2, 6}, {3, 7}),
    "d": ({10, 14}, {2, 6}),
    "e": ({1, 9}, {4, 12}),
    "f": ({3, 11}, {0, 8}),
    "g": ({5, 7}, {13, 15}),
    "h": ({13, 15}, {9, 11}),
}


def test_bitstring_roundtrip():
    b = BitString.parse("0101")
    assert b.value == 5
    assert b.bits == (0, 1, 0, 1)
    assert b[1] == 1 and b[0] == 0
    assert str(BitString.from_bits(b.bits)) == "0101"


@given(st.integers(1, 12).flatmap(lambda w: st.tuples(st.just(w), st.integers(0, (1 << w) - 1))))
def test_bitstring_value_bits_roundtrip(wv):
    w, v = wv
    b = BitString(w, v)
    assert BitString.from_bits(b.bits) == b
    assert BitString.parse(str(b)) == b


def test_bitstring_rejects_bad_input():
    with pytest.raises(DATError):
        BitString(0, 0)
    with pytest.raises(DATError):
        BitString(2, 4)
    with pytest.raises(DATError):
        BitString.parse("01x")


@pytest.mark.parametrize(
    "dat, code, expected",
    [
        (standard_binary_dat(4), "0011", "0100"),
        (standard_binary_dat(4), "1111", "0000"),
        (bgps4_dat(), "0101", "1101"),
        (bgps4_dat(), "1010", "0010"),
    ],
)
def test_execute_examples(dat, code, expected):
    assert str(execute(dat, code).output) == expected


def test_execute_counts():
    run = execute(standard_binary_dat(4), "0111")
    assert str(run.output) == "1000"
    assert run.probes_read == 4
    assert run.bits_written == 4
    assert run.probes == ((3, 1), (2, 1), (1, 1), (0, 0))


def test_execute_width_mismatch():
    with pytest.raises(DATError):
        execute(standard_binary_dat(3), "0101")


def test_rejects_reprobe_and_zero_width():
    with pytest.raises(DATError):
        DecisionAssignmentTree(2, Inner(0, Leaf(), Inner(0, Leaf(), Leaf())))
    with pytest.raises(DATError):
        DecisionAssignmentTree(0, Leaf())
    with pytest.raises(DATError):
        DecisionAssignmentTree(2, Inner(2, Leaf(), Leaf()))


def test_canonical_drops_noop_assignments():
    dat = DecisionAssignmentTree(2, Inner(0, Leaf(((0, 0), (1, 1))), Leaf(((0, 0),))))
    canon = dat.canonical()
    assert canon.root.zero.assignments == ((1, 1),)
    assert canon.root.one.assignments == ((0, 0),)
    assert canon.table() == dat.table()


def test_leaf_sorts_pairs_and_rejects_duplicates():
    assert Leaf(((2, 1), (0, 0))).assignments == ((0, 0), (2, 1))
    with pytest.raises(DATError):
        Leaf(((1, 0), (1, 1)))


def test_balance_gray_unchanged():
    g = gray_code_dat(3)
    assert balance(g) == g


def test_balance_binary_n2():
    b = standard_binary_dat(2)
    bal = balance(b)
    assert bal.is_balanced() and bal.max_depth == 2
    assert len(bal.leaves()) == 4
    assert bal.table() == b.table()


def test_balance_single_leaf():
    dat = DecisionAssignmentTree(3, Leaf())
    assert balance(dat) == dat


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(0, 10_000), st.booleans())
def test_balance_preserves_function(n, seed, disciplined):
    rng = random.Random(seed)
    dat = random_dat(rng, n, rng.randint(0, n), disciplined=disciplined)
    bal = balance(dat)
    assert bal.table() == dat.table()
    assert bal.is_balanced()
    assert bal.max_depth == dat.max_depth


def test_leaf_face_root_leaf():
    face = leaf_face(DecisionAssignmentTree(3, Leaf()), 0)
    assert face.fixed == () and face.dimension == 3 and len(face) == 8


def test_leaf_face_binary_lsb():
    dat = standard_binary_dat(3)
    face = leaf_face(dat, 0)
    assert face.fixed == ((2, 0),)
    assert face.dimension == 2
    assert face.pattern() == "**0"


def test_bgps_leaf_faces_match_published_tables():
    dat = bgps4_dat()
    faces = [set(leaf_face(dat, i).vertices()) for i in range(len(dat.leaves()))]
    assert sorted(map(sorted, faces)) == sorted(sorted(src) for src, _ in FACE_TABLE.values())
    assert {0, 4} in faces


def test_write_discipline():
    assert check_write_discipline(standard_binary_dat(5)) == []
    bad = DecisionAssignmentTree(2, Inner(0, Leaf(((1, 1),)), Leaf()))
    v = check_write_discipline(bad)
    assert len(v) == 1 and (v[0].leaf, v[0].coordinate) == (0, 1)


def test_image_face_examples():
    a = Face(4, ((0, 0), (2, 0), (3, 0)))
    assert a.vertices() == [0b0000, 0b0100]
    assert image_face(a, [(3, 1)]).vertices() == [0b0001, 0b0101]
    assert image_face(a, []) == a
    f = Face(4, ((1, 0), (2, 1), (3, 1)))
    assert f.vertices() == [0b0011, 0b1011]
    assert image_face(f, [(2, 0), (3, 0)]).vertices() == [0b0000, 0b1000]


def test_image_face_rejects_free_coordinate():
    with pytest.raises(WriteDisciplineError):
        image_face(Face.from_pattern("0*00"), [(1, 1)])


@given(st.integers(1, 10).flatmap(
    lambda n: st.tuples(st.just(n), st.dictionaries(st.integers(0, n - 1), st.integers(0, 1)))))
def test_face_enumeration_matches_membership(nf):
    n, fixed = nf
    face = Face(n, fixed)
    members = [x for x in range(1 << n) if x in face]
    assert face.vertices() == members
    assert len(face) == 1 << face.dimension
    assert all(all((x >> (n - 1 - c)) & 1 == v for c, v in fixed.items()) for x in members)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10_000))
def test_leaf_execution_is_face_translation(n, seed):
    rng = random.Random(seed)
    dat = random_dat(rng, n, rng.randint(1, n))
    for info in dat.leaves():
        face = leaf_face(dat, info)
        img = image_face(face, info.leaf.assignments)
        assert sorted(dat.apply(x) for x in face.vertices()) == img.vertices()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10_000))
def test_balanced_leaf_faces_partition_cube(n, seed):
    rng = random.Random(seed)
    dat = random_dat(rng, n, rng.randint(0, n), balanced=True)
    faces = [leaf_face(dat, info) for info in dat.leaves()]
    l = dat.max_depth
    assert len(faces) == 1 << l
    assert all(f.dimension == n - l for f in faces)
    covered = sorted(v for f in faces for v in f.vertices())
    assert covered == list(range(1 << n))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10_000), st.booleans())
def test_json_roundtrip(n, seed, disciplined):
    rng = random.Random(seed)
    dat = random_dat(rng, n, rng.randint(0, n), disciplined=disciplined)
    text = dat.dumps()
    again = DecisionAssignmentTree.loads(text)
    assert again.dumps() == text
    assert again.table() == dat.table()


def test_json_format():
    doc = json.loads(standard_binary_dat(1).dumps())
    assert doc == {"bits": 1, "root": {"probe": 0, "zero": {"leaf": [[0, 1]]}, "one": {"leaf": [[0, 0]]}}}


@pytest.mark.parametrize(
    "text",
    [
        "{",
        '{"bits": 2}',
        '{"bits": 2, "root": {"leaf": [[0]]}}',
        '{"bits": 2, "root": {"probe": 5, "zero": {"leaf": []}, "one": {"leaf": []}}}',
        '{"bits": true, "root": {"leaf": []}}',
        '{"bits": 2, "root": {"leaf": [[0, 2]]}}',
    ],
)
def test_loads_rejects_malformed(text):
    with pytest.raises(DATError):
        DecisionAssignmentTree.loads(text)
