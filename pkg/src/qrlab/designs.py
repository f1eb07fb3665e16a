"""
Block designs built from codeword supports: exhaustive t-design checks,
derived and residual designs, linear span, and the plain-text exchange
format.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .codes import CodewordSet, LinearCode
from .errors import InvalidArgument, ParseError
from .gf2core import support


@dataclass(frozen=True)
class Design:
    """Points 0..v-1 and a sorted tuple of distinct blocks (bit masks)."""

    v: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(sorted(int(b) for b in self.blocks))
        if len(set(blocks)) != len(blocks):
            raise InvalidArgument("repeated block")
        sizes = {b.bit_count() for b in blocks}
        if len(sizes) > 1:
            raise InvalidArgument(f"blocks of differing sizes {sorted(sizes)}")
        if any(b >> self.v for b in blocks):
            raise InvalidArgument("block point outside 0..v-1")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_point_sets(cls, v: int, blocks: Iterable[Iterable[int]]) -> "Design":
        masks = []
        for blk in blocks:
            m = 0
            for x in blk:
                if not 0 <= x < v:
                    raise InvalidArgument(f"point {x} outside 0..{v - 1}")
                m |= 1 << x
            masks.append(m)
        return cls(v, tuple(masks))

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int:
        return self.blocks[0].bit_count() if self.blocks else 0

    def point_sets(self) -> list[list[int]]:
        return [support(b) for b in self.blocks]

    def incidence_matrix(self) -> np.ndarray:
        """``(b, v)`` 0/1 matrix, one row per block."""
        out = np.zeros((self.b, self.v), dtype=np.int32)
        for i, blk in enumerate(self.point_sets()):
            out[i, blk] = 1
        return out

    def replication(self) -> np.ndarray:
        return self.incidence_matrix().sum(axis=0)


@dataclass(frozen=True)
class DesignParams:
    t: int
    v: int
    k: int
    b: int
    r: int
    lam: int

    def lambda_s(self, s: int):
        """lambda_s = lambda * C(v-s, t-s) / C(k-s, t-s), as a (num, den) pair."""
        return self.lam * comb(self.v - s, self.t - s), comb(self.k - s, self.t - s)

    def __str__(self):
        return f"{self.t}-({self.v},{self.k},{self.lam})"


@dataclass(frozen=True)
class IncidenceProfile:
    """For each coverage count c, how many t-subsets lie in exactly c blocks."""

    t: int
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def incidences(self) -> int:
        return sum(c * m for c, m in self.counts.items())

    def is_constant(self) -> bool:
        return len(self.counts) == 1


@dataclass(frozen=True)
class DesignCheck:
    is_design: bool
    params: DesignParams | None
    profile: IncidenceProfile
    replication: dict[int, int]  # blocks-per-point -> number of points


# ---------------------------------------------------------------- building


def design_from_codewords(words: CodewordSet, v: int) -> Design:
    """Blocks are the supports of the given codewords."""
    if any(w.length != v for w in words):
        raise InvalidArgument("codeword length differs from v")
    masks = [w.value for w in words]
    if len(set(masks)) != len(masks):
        raise InvalidArgument("distinct codewords share a support")
    return Design(v, tuple(masks))


def _delete_point(mask: int, x: int) -> int:
    low = mask & ((1 << x) - 1)
    return low | ((mask >> (x + 1)) << x)


def _check_point(d: Design, x: int):
    if not 0 <= x < d.v:
        raise InvalidArgument(f"point {x} outside 0..{d.v - 1}")


def derived_design(d: Design, x: int) -> Design:
    """Blocks through x with x removed; points above x shift down by one."""
    _check_point(d, x)
    bit = 1 << x
    return Design(d.v - 1, tuple(_delete_point(b, x) for b in d.blocks if b & bit))


def residual_at_point(d: Design, x: int) -> Design:
    """Blocks avoiding x, on the remaining v-1 points."""
    _check_point(d, x)
    bit = 1 << x
    return Design(d.v - 1, tuple(_delete_point(b, x) for b in d.blocks if not b & bit))


def linear_span(d: Design) -> LinearCode:
    return LinearCode.from_rows(d.v, d.blocks)


# ---------------------------------------------------------------- checking


def _colex_table(v: int, t: int) -> np.ndarray:
    tab = np.zeros((v + 1, t + 1), dtype=np.int64)
    for x in range(v + 1):
        for i in range(t + 1):
            tab[x, i] = comb(x, i)
    return tab


def colex_rank(subset: Sequence[int]) -> int:
    """Rank of a sorted subset in colexicographic order."""
    return sum(comb(x, i + 1) for i, x in enumerate(sorted(subset)))


def colex_unrank(rank: int, t: int) -> list[int]:
    out = []
    for i in range(t, 0, -1):
        x = i - 1
        while comb(x + 1, i) <= rank:
            x += 1
        out.append(x)
        rank -= comb(x, i)
    return out[::-1]


def coverage_counts(d: Design, t: int, chunk: int = 1 << 14) -> np.ndarray:
    """Number of blocks containing each t-subset, indexed by colex rank."""
    k = d.k
    counts = np.zeros(comb(d.v, t), dtype=np.int64)
    if not d.blocks:
        return counts
    tab = _colex_table(d.v, t)
    pos = np.array(list(combinations(range(k), t)), dtype=np.intp).reshape(-1, t)
    cols = np.arange(1, t + 1)
    pts = np.array(d.point_sets(), dtype=np.intp)
    for s in range(0, len(pts), chunk):
        sub = pts[s:s + chunk][:, pos]            # (blocks, C(k,t), t), ascending
        ranks = tab[sub, cols].sum(axis=2)
        counts += np.bincount(ranks.ravel(), minlength=len(counts))
    return counts


def verify_design(d: Design, t: int) -> DesignCheck:
    """Exhaustive check that every t-subset lies in the same number of blocks.

    Counting is block-side: each block bumps the colex ranks of its C(k, t)
    sub-t-subsets, so the cost is b * C(k, t).
    """
    k = d.k
    if t < 1:
        raise InvalidArgument("strength must be at least 1")
    if d.blocks and t > k:
        raise InvalidArgument(f"strength {t} exceeds block size {k}")
    counts = coverage_counts(d, t)
    profile = IncidenceProfile(t, dict(sorted(Counter(counts.tolist()).items())))
    rep = Counter(d.replication().tolist()) if d.blocks else Counter({0: d.v})
    replication = dict(sorted(rep.items()))
    params = None
    if profile.is_constant() and len(replication) == 1:
        (lam,) = profile.counts
        (r,) = replication
        params = DesignParams(t, d.v, k, d.b, r, lam)
    return DesignCheck(params is not None, params, profile, replication)


def params_consistency(p: DesignParams) -> bool:
    """Arithmetic necessary conditions: bk = vr and integral lambda_s matching b, r."""
    if p.b * p.k != p.v * p.r:
        return False
    if not 0 <= p.t <= p.k <= p.v:
        return False
    for s in range(p.t + 1):
        num, den = p.lambda_s(s)
        if den == 0 or num % den:
            return False
        if s == 0 and num // den != p.b:
            return False
        if s == 1 and num // den != p.r:
            return False
    return True


# ------------------------------------------------------------ file format


def format_design(d: Design) -> str:
    lines = [f"{d.v} {d.k} {d.b}"]
    lines += [" ".join(map(str, blk)) for blk in d.point_sets()]
    return "\n".join(lines) + "\n"


def parse_design(text: str) -> Design:
    """Parse ``v k b`` followed by b lines of k ascending point indices."""
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise ParseError("empty design file", 1)
    try:
        v, k, b = (int(x) for x in lines[0].split())
    except ValueError:
        raise ParseError("header must be three integers 'v k b'", 1) from None
    if v < 0 or k < 0 or b < 0 or k > v:
        raise ParseError("invalid header values", 1)
    body = lines[1:]
    if len(body) != b:
        raise ParseError(f"header announces {b} blocks, found {len(body)}", len(lines))
    blocks = []
    for i, ln in enumerate(body, start=2):
        try:
            pts = [int(x) for x in ln.split()]
        except ValueError:
            raise ParseError("non-integer point", i) from None
        if len(pts) != k:
            raise ParseError(f"block has {len(pts)} points, expected {k}", i)
        if pts != sorted(set(pts)):
            raise ParseError("points must be strictly ascending", i)
        if pts and not (0 <= pts[0] and pts[-1] < v):
            raise ParseError(f"point outside 0..{v - 1}", i)
        blocks.append(pts)
    try:
        return Design.from_point_sets(v, blocks)
    except InvalidArgument as exc:
        raise ParseError(str(exc)) from None


def read_design(path: str | Path) -> Design:
    return parse_design(Path(path).read_text())


def write_design(d: Design, path: str | Path) -> None:
    Path(path).write_text(format_design(d))
