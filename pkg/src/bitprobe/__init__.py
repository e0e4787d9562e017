"""Increment procedures for space-optimal counters in the bit-probe model."""
from bitprobe.dat import (
    BitString,
    DecisionAssignmentTree,
    Face,
    Inner,
    Leaf,
    balance,
    check_write_discipline,
    execute,
    image_face,
    leaf_face,
)
from bitprobe.permutation import NotBijective, Parity, Permutation, from_dat

__all__ = [
    "BitString",
    "DecisionAssignmentTree",
    "Face",
    "Inner",
    "Leaf",
    "NotBijective",
    "Parity",
    "Permutation",
    "balance",
    "check_write_discipline",
    "execute",
    "from_dat",
    "image_face",
    "leaf_face",
]
