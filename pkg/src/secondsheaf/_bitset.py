"""Subsets of ``range(n)`` stored as Python ints."""


def members(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def from_members(items):
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def count(mask):
    return bin(mask).count("1")


def is_subset(a, b):
    return a & ~b == 0


def full(n):
    return (1 << n) - 1
