"""Shared helpers for the test suite."""

from __future__ import annotations

import random

from balancegate import AnfFunction, RegisterLayout

# multi-register shapes with pairwise coprime lengths, total width <= 14
COPRIME_SHAPES = [
    (("a", 3), ("b", 4)),
    (("a", 3), ("b", 5)),
    (("a", 4), ("b", 5)),
    (("a", 3), ("b", 7)),
    (("a", 4), ("b", 7)),
    (("a", 5), ("b", 7)),
    (("a", 4), ("b", 9)),
    (("a", 2), ("b", 3), ("c", 5)),
    (("a", 3), ("b", 4), ("c", 5)),
    (("a", 3), ("b", 4), ("c", 7)),
]


def geffe_layout() -> RegisterLayout:
    return RegisterLayout.from_lengths([("a", 2), ("b", 3), ("c", 5)])


def family_layout() -> RegisterLayout:
    return RegisterLayout.from_lengths([("a", 7), ("b", 8), ("c", 9)])


def random_function(
    rng: random.Random, layout: RegisterLayout, max_terms: int = 6
) -> AnfFunction:
    width = layout.total_length
    terms = set()
    for _ in range(rng.randint(0, max_terms)):
        terms.add(rng.randrange(1, 1 << width))
    return AnfFunction(layout, frozenset(terms))


def isolated_term_function(
    rng: random.Random, length: int, max_extra_terms: int = 7
) -> tuple[AnfFunction, int]:
    """A function with one standalone linear monomial whose variable stays out
    of every other monomial; returns (function, isolated bit)."""
    j = rng.randrange(length)
    other_bits = [b for b in range(length) if b != j]
    terms = {1 << j}
    for _ in range(rng.randint(0, max_extra_terms)):
        k = rng.randint(1, min(4, length - 1))
        mask = 0
        for b in rng.sample(other_bits, k):
            mask |= 1 << b
        terms.add(mask)
    return AnfFunction(RegisterLayout.single(length), frozenset(terms)), j


def naive_ones_count(f: AnfFunction) -> int:
    """Plain-loop oracle: walk every assignment with all segments nonzero."""
    layout = f.layout
    width = layout.total_length
    terms = sorted(f.terms)
    segments = [
        (reg.offset, (1 << reg.length) - 1) for reg in layout.registers
    ]
    total = 0
    for x in range(1 << width):
        if any((x >> off) & m == 0 for off, m in segments):
            continue
        acc = 0
        for t in terms:
            if x & t == t:
                acc ^= 1
        total += acc
    return total
