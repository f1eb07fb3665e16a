"""
Reference values for the length-42 extended QR code, and a relabelling
helper for externally supplied generators of its automorphism group.

The four generators below are in a 1-based labelling produced by some
computer-algebra run; that labelling is unrelated to ours (cyclic
coordinate i <-> field element i, extended coordinate <-> infinity).
:func:`projective_relabeling` finds a bijection carrying them into the
standard PSL(2, p) action, if one exists.
"""

from __future__ import annotations

import random
from math import lcm

from .groups import Permutation, PermutationGroup, psl2

REFERENCE_WEIGHTS_42 = {
    0: 1, 10: 1722, 12: 10619, 14: 49815, 16: 157563, 18: 341530,
    20: 487326, 22: 487326, 24: 341530, 26: 157563, 28: 49815,
    30: 10619, 32: 1722, 42: 1,
}

REFERENCE_GENERATORS_42 = [
    [(3, 30, 29, 31), (4, 9, 18, 7), (5, 24, 25, 17), (6, 22, 38, 42), (8, 34, 11, 28),
     (10, 36, 16, 33), (12, 32, 23, 21), (13, 15, 14, 41), (19, 20, 39, 27), (26, 35, 40, 37)],
    [(3, 8, 6, 33, 15, 29, 11, 38, 36, 41), (4, 35, 27, 21, 5, 18, 37, 20, 32, 25),
     (7, 26, 39, 23, 17, 9, 40, 19, 12, 24), (10, 14, 31, 28, 42, 16, 13, 30, 34, 22)],
    [(1, 32), (2, 21), (3, 36), (5, 10), (6, 26), (7, 38), (8, 20), (9, 22), (11, 25),
     (12, 23), (13, 33), (14, 28), (15, 39), (16, 27), (17, 30), (18, 37), (19, 31),
     (24, 41), (29, 34), (40, 42)],
    [(2, 32, 23, 12, 36, 29, 37, 14, 24, 10, 8, 15, 40, 6, 4, 31, 41, 18, 26, 19),
     (3, 42, 11, 34, 9, 28, 20, 17, 30, 33, 39, 7, 16, 22, 25, 38, 35, 27, 5, 21)],
]

# triples named in 1-based labels; expected to lie in different orbits
REFERENCE_TRIPLES_42 = [(1, 2, 3), (1, 3, 8)]


def reference_group() -> PermutationGroup:
    gens = [Permutation.from_cycles(42, [[x - 1 for x in c] for c in cycles])
            for cycles in REFERENCE_GENERATORS_42]
    return PermutationGroup(42, gens)


def element_order(g: Permutation) -> int:
    return lcm(*(len(c) for c in g.cycles())) if g.cycles() else 1


def _element_of_order(group: PermutationGroup, q: int, tries: int = 2000) -> Permutation | None:
    rng = random.Random(0)
    g = Permutation.identity(group.degree)
    for _ in range(tries):
        g = g * rng.choice(group.generators)
        o = element_order(g)
        if o % q == 0:
            return g ** (o // q)
    return None


def projective_relabeling(group: PermutationGroup, p: int) -> Permutation | None:
    """Bijection S (our label -> their label) with S g S^-1 in PSL(2, p) for
    every generator g; ``None`` if no such relabelling was found."""
    if group.degree != p + 1:
        return None
    c = _element_of_order(group, p)
    if c is None:
        return None
    fixed = [x for x in range(p + 1) if c[x] == x]
    if len(fixed) != 1:
        return None
    inf = fixed[0]
    z0 = next(x for x in range(p + 1) if x != inf)
    target = psl2(p)
    for j in range(1, p):
        step = c ** j
        img, z = [], z0
        for _ in range(p):
            img.append(z)
            z = step[z]
        img.append(inf)
        s = Permutation(tuple(img))
        s_inv = s.inverse()
        if all(target.contains(s * g * s_inv) for g in group.generators):
            return s
    return None
