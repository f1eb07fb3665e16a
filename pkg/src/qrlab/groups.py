"""
Permutation groups: Moebius maps on the projective line, PSL(2, p),
deterministic Schreier-Sims, orbits on k-subsets and design invariance.

Permutations act on the right: ``(p * q)[i] == q[p[i]]``, i.e. apply p
first, then q.
"""

from __future__ import annotations

import bisect
from itertools import combinations
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityExceeded, InvalidArgument, ParseError

MAX_SUBSET_ORBIT_TABLE = 5_000_000


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise InvalidArgument("images do not form a bijection")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __getitem__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        o = other.images
        return Permutation(tuple(o[x] for x in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def __pow__(self, e: int) -> "Permutation":
        if e < 0:
            return self.inverse() ** (-e)
        out, base = Permutation.identity(self.degree), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def moved_points(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def map_mask(self, mask: int) -> int:
        out = 0
        img = self.images
        while mask:
            low = mask & -mask
            out |= 1 << img[low.bit_length() - 1]
            mask ^= low
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc) or "()"


# ------------------------------------------------------------ Moebius maps


@dataclass(frozen=True)
class MoebiusMap:
    """y -> (a + b y) / (c + d y) over F_p, with bc - ad = 1 mod p.

    Written as a matrix acting on (y, 1) this is [[b, a], [d, c]], whose
    determinant is bc - ad.
    """

    a: int
    b: int
    c: int
    d: int
    p: int

    def __post_init__(self):
        p = self.p
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % p)
        if self.determinant() != 1:
            raise InvalidArgument(f"determinant {self.determinant()} != 1 mod {p}")

    def determinant(self) -> int:
        return (self.b * self.c - self.a * self.d) % self.p

    def __call__(self, y: int | None) -> int | None:
        """Image of y; ``None`` stands for the point at infinity."""
        p = self.p
        if y is None:
            if self.d:
                return self.b * pow(self.d, -1, p) % p
            return None
        num = (self.a + self.b * y) % p
        den = (self.c + self.d * y) % p
        if den == 0:
            return 0 if num == 0 else None
        return num * pow(den, -1, p) % p

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self first, then other, matching Permutation multiplication."""
        # matrices act on column vectors (y, 1): M_total = M_other @ M_self
        p = self.p
        b1, a1, d1, c1 = self.b, self.a, self.d, self.c
        b2, a2, d2, c2 = other.b, other.a, other.d, other.c
        nb = b2 * b1 + a2 * d1
        na = b2 * a1 + a2 * c1
        nd = d2 * b1 + c2 * d1
        nc = d2 * a1 + c2 * c1
        return MoebiusMap(na % p, nb % p, nc % p, nd % p, p)


def moebius_to_permutation(m: MoebiusMap, p: int | None = None) -> Permutation:
    """Permutation of 0..p where i < p is the field element i and p is infinity."""
    p = m.p if p is None else p
    if p != m.p:
        raise InvalidArgument("map defined over a different prime")
    img = []
    for y in list(range(p)) + [None]:
        z = m(y)
        img.append(p if z is None else z)
    return Permutation(tuple(img))


def translation(p: int) -> MoebiusMap:
    return MoebiusMap(1, 1, 1, 0, p)


def negative_inversion(p: int) -> MoebiusMap:
    return MoebiusMap(-1, 0, 0, 1, p)


# --------------------------------------------------------- Schreier-Sims


@dataclass
class _Level:
    base: int
    transversal: dict[int, Permutation]  # orbit point -> element taking base there


@dataclass
class PermutationGroup:
    degree: int
    generators: list[Permutation]
    _base: list[int] | None = field(default=None, init=False, repr=False)
    _strong: list[Permutation] = field(default_factory=list, init=False, repr=False)
    _levels: list[_Level] = field(default_factory=list, init=False, repr=False)

    def __post_init__(self):
        for g in self.generators:
            if g.degree != self.degree:
                raise InvalidArgument("generator degree mismatch")

    # -- stabiliser chain
    @property
    def chain_built(self) -> bool:
        return self._base is not None

    def _level_gens(self, i: int) -> list[Permutation]:
        fixed = self._base[:i]
        return [s for s in self._strong if all(s[b] == b for b in fixed)]

    def _make_level(self, i: int) -> _Level:
        b = self._base[i]
        gens = self._level_gens(i)
        ident = Permutation.identity(self.degree)
        trans = {b: ident}
        queue = [b]
        for x in queue:
            u = trans[x]
            for s in gens:
                y = s[x]
                if y not in trans:
                    trans[y] = u * s
                    queue.append(y)
        return _Level(b, trans)

    def _sift(self, g: Permutation, start: int = 0) -> tuple[Permutation, int]:
        for j in range(start, len(self._levels)):
            lvl = self._levels[j]
            x = g[lvl.base]
            u = lvl.transversal.get(x)
            if u is None:
                return g, j
            g = g * u.inverse()
        return g, len(self._levels)

    def _new_base_point(self, h: Permutation) -> int:
        # moved point of h with the largest orbit under the strong generators so far
        gens = self._strong + [h]
        best, best_size = None, -1
        for x in h.moved_points():
            size = len(_orbit(x, gens))
            if size > best_size:
                best, best_size = x, size
        return best

    def build_chain(self) -> None:
        """Deterministic Schreier-Sims (no randomisation)."""
        if self._base is not None:
            return
        self._base, self._strong = [], []
        for g in self.generators:
            if g.is_identity() or g in self._strong:
                continue
            self._strong.append(g)
            if all(g[b] == b for b in self._base):
                self._base.append(self._new_base_point(g))
        self._levels = [self._make_level(i) for i in range(len(self._base))]
        i = len(self._base) - 1
        while i >= 0:
            self._levels[i] = lvl = self._make_level(i)
            gens = self._level_gens(i)
            restart = None
            for x, u in list(lvl.transversal.items()):
                for s in gens:
                    us = u * s
                    h = us * lvl.transversal[us[lvl.base]].inverse()
                    if h.is_identity():
                        continue
                    res, j = self._sift(h, i + 1)
                    if res.is_identity():
                        continue
                    self._strong.append(res)
                    if j == len(self._base):
                        self._base.append(self._new_base_point(res))
                        self._levels.append(None)
                    for l in range(i + 1, j + 1):
                        self._levels[l] = self._make_level(l)
                    restart = j
                    break
                if restart is not None:
                    break
            if restart is None:
                i -= 1
            else:
                i = restart

    @property
    def base(self) -> list[int]:
        self.build_chain()
        return list(self._base)

    @property
    def strong_generators(self) -> list[Permutation]:
        self.build_chain()
        return list(self._strong)

    def basic_orbit_sizes(self) -> list[int]:
        self.build_chain()
        return [len(l.transversal) for l in self._levels]

    def order(self) -> int:
        out = 1
        for s in self.basic_orbit_sizes():
            out *= s
        return out

    def contains(self, perm: Permutation) -> bool:
        if perm.degree != self.degree:
            raise InvalidArgument("degree mismatch")
        self.build_chain()
        res, _ = self._sift(perm)
        return res.is_identity()

    def orbit(self, x: int) -> set[int]:
        return _orbit(x, self.generators)

    def elements(self, limit: int = 100_000) -> set[Permutation]:
        """All elements by closure under the generators (small groups only)."""
        ident = Permutation.identity(self.degree)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for s in self.generators:
                    h = g * s
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
                        if len(seen) > limit:
                            raise CapacityExceeded(f"group has more than {limit} elements")
            frontier = nxt
        return seen


def _orbit(x: int, gens: Sequence[Permutation]) -> set[int]:
    seen = {x}
    queue = [x]
    for y in queue:
        for s in gens:
            z = s[y]
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return seen


def group_order(g: PermutationGroup) -> int:
    return g.order()


def contains(g: PermutationGroup, perm: Permutation) -> bool:
    return g.contains(perm)


def psl2(p: int) -> PermutationGroup:
    """PSL(2, p) on the projective line, generated by y+1 and -1/y."""
    if p < 3 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise InvalidArgument(f"{p} is not an odd prime")
    gens = [moebius_to_permutation(translation(p)), moebius_to_permutation(negative_inversion(p))]
    return PermutationGroup(p + 1, gens)


def symmetric_group(n: int) -> PermutationGroup:
    if n < 2:
        return PermutationGroup(n, [])
    cycle = Permutation(tuple(list(range(1, n)) + [0]))
    swap = Permutation.from_cycles(n, [(0, 1)])
    return PermutationGroup(n, [cycle, swap])


# ------------------------------------------------------- subset orbits


@dataclass(frozen=True)
class OrbitPartition:
    s: int
    orbits: tuple[tuple[tuple[int, ...], int], ...]  # (colex-least subset, size)
    membership: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def orbit_index(self, subset) -> int:
        """Index into ``orbits`` of the orbit containing ``subset``."""
        if len(subset) != self.s or len(set(subset)) != self.s:
            raise InvalidArgument(f"expected {self.s} distinct points")
        rank = sum(comb(x, i + 1) for i, x in enumerate(sorted(subset)))
        return self.membership[rank]

    @property
    def sizes(self) -> list[int]:
        return [size for _, size in self.orbits]

    def __len__(self):
        return len(self.orbits)


def _all_subsets(n: int, s: int) -> np.ndarray:
    """All s-subsets of range(n) as rows, in colex order."""
    rows = sorted(combinations(range(n), s), key=lambda c: c[::-1])
    return np.array(rows, dtype=np.intp).reshape(len(rows), s)


def orbits_on_subsets(g: PermutationGroup, s: int) -> OrbitPartition:
    """Orbits on s-subsets via union-find over colex ranks."""
    n = g.degree
    if not 0 <= s <= n:
        raise InvalidArgument("subset size outside 0..n")
    total = comb(n, s)
    if total > MAX_SUBSET_ORBIT_TABLE:
        raise CapacityExceeded(f"C({n},{s}) = {total} subsets is too many")
    subsets = _all_subsets(n, s)
    tab = np.array([[comb(x, i) for i in range(s + 1)] for x in range(n + 1)], dtype=np.int64)
    cols = np.arange(1, s + 1)

    parent = list(range(total))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gen in g.generators:
        img = np.sort(np.asarray(gen.images, dtype=np.intp)[subsets], axis=1)
        target = tab[img, cols].sum(axis=1) if s else np.zeros(total, dtype=np.int64)
        for a, b in zip(range(total), target.tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
    sizes: dict[int, int] = {}
    for x in range(total):
        r = find(x)
        sizes[r] = sizes.get(r, 0) + 1
    # union by smaller root keeps each root at the orbit's colex-least member
    roots = sorted(sizes)
    orbits = tuple((tuple(int(v) for v in subsets[r]), sizes[r]) for r in roots)
    index = {r: i for i, r in enumerate(roots)}
    return OrbitPartition(s, orbits, tuple(index[find(x)] for x in range(total)))


def is_s_homogeneous(g: PermutationGroup, s: int) -> bool:
    return len(orbits_on_subsets(g, s)) == 1


def preserves_design(perm: Permutation, d) -> bool:
    """True iff perm maps every block of the design onto a block."""
    if perm.degree != d.v:
        raise InvalidArgument("permutation degree differs from design point count")
    blocks = d.blocks
    for blk in blocks:
        img = perm.map_mask(blk)
        i = bisect.bisect_left(blocks, img)
        if i == len(blocks) or blocks[i] != img:
            return False
    return True


# --------------------------------------------------------- file format


def format_permutations(perms: Iterable[Permutation]) -> str:
    return "".join(" ".join(map(str, p.images)) + "\n" for p in perms)


def parse_permutations(text: str) -> list[Permutation]:
    out = []
    degree = None
    for i, ln in enumerate(text.splitlines(), start=1):
        ln = ln.strip()
        if not ln:
            continue
        try:
            imgs = [int(x) for x in ln.split()]
        except ValueError:
            raise ParseError("non-integer image", i) from None
        if degree is not None and len(imgs) != degree:
            raise ParseError(f"degree {len(imgs)} differs from earlier lines ({degree})", i)
        degree = len(imgs)
        try:
            out.append(Permutation(tuple(imgs)))
        except InvalidArgument as exc:
            raise ParseError(str(exc), i) from None
    return out


def read_permutations(path: str | Path) -> list[Permutation]:
    return parse_permutations(Path(path).read_text())


def write_permutations(perms: Iterable[Permutation], path: str | Path) -> None:
    Path(path).write_text(format_permutations(perms))
