"""
Automorphism group of a block design by partition refinement and
individualisation.

Point colourings are refined on the bipartite point/block incidence
structure (block colour = counts of its points per point colour; point
colour = previous colour plus counts of its blocks per block colour) until
stable. Colour labels come from sorting signatures, so refinement commutes
with relabelling the points; a discrete colouring reached from the
individualised sequence (b_1..b_m) therefore determines the only
candidate automorphism extending (b_1..b_m) -> (y_1..y_m).

The group is collected level by level from the deepest base point up. At
level i every point of the target cell that is not already in the orbit
of b_i under the generators found so far is tried; one automorphism per new
orbit point is enough. The product of the final orbit lengths is the group
order, and the generators form a strong generating set for the base.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass

import numpy as np

from .designs import Design
from .errors import InvalidArgument
from .groups import Permutation, PermutationGroup, _orbit

log = logging.getLogger(__name__)


@dataclass
class _Node:
    colors: np.ndarray   # canonical point colours 0..c-1
    trace: bytes         # isomorphism-invariant digest of the refinement run

    @property
    def n_colors(self) -> int:
        return int(self.colors.max()) + 1

    def is_discrete(self) -> bool:
        return self.n_colors == len(self.colors)

    def cell(self, color: int) -> list[int]:
        return np.flatnonzero(self.colors == color).tolist()


def _relabel(sig: np.ndarray) -> np.ndarray:
    _, inv = np.unique(sig, axis=0, return_inverse=True)
    return inv.reshape(-1)


class _Refiner:
    def __init__(self, design: Design, block_colors: np.ndarray | None = None):
        M = design.incidence_matrix()
        self.b, self.v = M.shape
        self.inc_block, self.inc_point = np.nonzero(M)
        self.block_init = np.zeros(self.b, dtype=np.int64) if block_colors is None else block_colors
        self.calls = 0

    def refine(self, colors: np.ndarray) -> _Node:
        self.calls += 1
        h = hashlib.blake2b(digest_size=16)
        colors = _relabel(colors[:, None])
        ib, ip = self.inc_block, self.inc_point
        while True:
            nc = int(colors.max()) + 1
            per_block = np.bincount(ib * nc + colors[ip], minlength=self.b * nc)
            bsig = np.column_stack([self.block_init, per_block.reshape(self.b, nc)])
            bu, bcol = np.unique(bsig, axis=0, return_inverse=True)
            bcol = bcol.reshape(-1)
            nb = len(bu)
            per_point = np.bincount(ip * nb + bcol[ib], minlength=self.v * nb)
            psig = np.column_stack([colors, per_point.reshape(self.v, nb)])
            pu, new = np.unique(psig, axis=0, return_inverse=True)
            h.update(bu.tobytes())
            h.update(pu.tobytes())
            if len(pu) == nc:
                return _Node(colors, h.digest() + np.bincount(colors).tobytes())
            colors = new.reshape(-1)

    @staticmethod
    def individualize(colors: np.ndarray, x: int) -> np.ndarray:
        mark = np.zeros(len(colors), dtype=np.int64)
        mark[x] = 1
        return _relabel(np.column_stack([colors, mark]))


def intersection_signature(design: Design) -> np.ndarray:
    """Block colours from the multiset of sizes |B n B'| over all other blocks."""
    M = design.incidence_matrix()
    X = M @ M.T
    k = design.k
    hist = np.column_stack([(X == s).sum(axis=1) for s in range(k + 1)])
    return _relabel(hist)


def _target_cell(node: _Node) -> int:
    """First smallest non-singleton colour class."""
    sizes = np.bincount(node.colors)
    best = None
    for c, s in enumerate(sizes):
        if s > 1 and (best is None or s < sizes[best]):
            best = c
    return best


@dataclass
class AutomorphismResult:
    group: PermutationGroup
    base: list[int]
    orbit_sizes: list[int]
    refinements: int

    @property
    def order(self) -> int:
        out = 1
        for s in self.orbit_sizes:
            out *= s
        return out


def design_automorphism_group(d: Design, *, use_intersections: bool = True) -> AutomorphismResult:
    """Full automorphism group of a design (as point permutations)."""
    if not d.blocks:
        raise InvalidArgument("design has no blocks")
    v = d.v
    block_set = set(d.blocks)

    block_colors = None
    ref = _Refiner(d)
    root = ref.refine(np.zeros(v, dtype=np.int64))
    if use_intersections and not root.is_discrete():
        sig = intersection_signature(d)
        if sig.max() > 0:
            ref = _Refiner(d, sig)
            root = ref.refine(np.zeros(v, dtype=np.int64))

    # first path
    path = [root]
    base: list[int] = []
    cells: list[int] = []
    while not path[-1].is_discrete():
        node = path[-1]
        c = _target_cell(node)
        x = node.cell(c)[0]
        cells.append(c)
        base.append(x)
        path.append(ref.refine(ref.individualize(node.colors, x)))
    leaf = path[-1]
    ref_order = np.argsort(leaf.colors)   # colour -> reference point

    def leaf_map(node: _Node) -> Permutation | None:
        perm = np.empty(v, dtype=np.int64)
        perm[ref_order] = np.argsort(node.colors)
        g = Permutation(tuple(perm.tolist()))
        if all(g.map_mask(b) in block_set for b in d.blocks):
            return g
        return None

    def search(depth: int, node: _Node) -> Permutation | None:
        if node.trace != path[depth].trace:
            return None
        if depth == len(base):
            return leaf_map(node)
        for y in node.cell(cells[depth]):
            child = ref.refine(ref.individualize(node.colors, y))
            g = search(depth + 1, child)
            if g is not None:
                return g
        return None

    gens: list[Permutation] = []
    orbit_sizes = [1] * len(base)
    for i in range(len(base) - 1, -1, -1):
        fixing = [g for g in gens if all(g[b] == b for b in base[:i])]
        orbit = _orbit(base[i], fixing)
        for y in path[i].cell(cells[i]):
            if y in orbit:
                continue
            child = ref.refine(ref.individualize(path[i].colors, y))
            g = search(i + 1, child)
            if g is not None:
                gens.append(g)
                fixing.append(g)
                orbit = _orbit(base[i], fixing)
        orbit_sizes[i] = len(orbit)
        log.info("level %d: base point %d, orbit %d, refinements so far %d",
                 i, base[i], len(orbit), ref.calls)

    group = PermutationGroup(v, gens)
    return AutomorphismResult(group, base, orbit_sizes, ref.calls)
