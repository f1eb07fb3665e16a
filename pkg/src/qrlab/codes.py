"""
Binary linear codes: construction (cyclic, quadratic residue, extension,
dual), exhaustive weight enumeration, MacWilliams transform, the
Assmus-Mattson criterion and low-weight codeword search by disjoint
information sets.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, prod
from typing import Iterator, NamedTuple

import numpy as np

from . import cache
from .errors import (CapacityExceeded, InconsistentInput, InternalConsistencyError,
                     InvalidArgument, UnsupportedParameter)
from .gf2core import (BinaryPolynomial, BitMatrix, BitVector, FieldContext,
                      FieldElement, element_of_order, limbs_to_int, rref)

log = logging.getLogger(__name__)

MAX_ENUMERATION_DIM = 28


# ------------------------------------------------------------------ types


@dataclass(frozen=True)
class LinearCode:
    """An [n, k] binary linear code given by a full-rank k x n generator."""

    n: int
    k: int
    generator: BitMatrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.generator.cols != self.n:
            raise InvalidArgument("generator width differs from n")
        if self.generator.n_rows != self.k:
            raise InvalidArgument("generator height differs from k")
        if self.k and self._echelon[0].rows[self.k - 1] == 0:
            raise InvalidArgument("generator matrix is rank deficient")

    @classmethod
    def from_rows(cls, n: int, rows, name: str = "") -> "LinearCode":
        """Code spanned by ``rows`` (ints or BitVectors); dependent rows are dropped."""
        ints = [r.value if isinstance(r, BitVector) else int(r) for r in rows]
        red, piv = rref(BitMatrix(tuple(ints), n))
        return cls(n, len(piv), BitMatrix(red.rows[:len(piv)], n), name)

    @cached_property
    def _echelon(self):
        return rref(self.generator)

    def rref(self) -> BitMatrix:
        """Canonical generator: the reduced row-echelon basis."""
        return self._echelon[0]

    @property
    def size(self) -> int:
        return 1 << self.k

    def encode(self, message: int) -> int:
        out = 0
        rows = self.generator.rows
        while message:
            low = message & -message
            out ^= rows[low.bit_length() - 1]
            message ^= low
        return out

    def contains(self, word: int | BitVector) -> bool:
        if isinstance(word, BitVector):
            if word.length != self.n:
                return False
            word = word.value
        red, piv = self._echelon
        for row, c in zip(red.rows, piv):
            if (word >> c) & 1:
                word ^= row
        return word == 0

    def same_code(self, other: "LinearCode") -> bool:
        return self.n == other.n and self.k == other.k and self.rref() == other.rref()

    @cached_property
    def digest(self) -> str:
        return cache.matrix_hash(self.n, self.generator.rows)

    def __str__(self):
        label = f"{self.name} " if self.name else ""
        return f"{label}[{self.n},{self.k}]"


@dataclass(frozen=True)
class QRCodeSpec:
    p: int
    residues: tuple[int, ...]
    m: int
    generator_poly: BinaryPolynomial
    alpha: FieldElement


@dataclass(frozen=True)
class WeightDistribution:
    n: int
    counts: dict[int, int]

    def __post_init__(self):
        clean = {int(w): int(a) for w, a in sorted(self.counts.items()) if a}
        if any(a < 0 for a in clean.values()):
            raise InconsistentInput("negative count in weight distribution")
        if any(not 0 <= w <= self.n for w in clean):
            raise InconsistentInput("weight outside 0..n")
        object.__setattr__(self, "counts", clean)

    def __getitem__(self, w: int) -> int:
        return self.counts.get(w, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def weights(self) -> list[int]:
        return list(self.counts)

    def nonzero_weights(self) -> list[int]:
        return [w for w in self.counts if w > 0]

    def minimum_distance(self) -> int | None:
        nz = self.nonzero_weights()
        return nz[0] if nz else None

    def pairs(self) -> list[tuple[int, int]]:
        return list(self.counts.items())

    def magma_string(self) -> str:
        body = ", ".join(f"<{w}, {a}>" for w, a in self.counts.items())
        return f"[ {body} ]"


@dataclass(frozen=True)
class CodewordSet:
    weight: int
    length: int
    words: tuple[BitVector, ...]

    @classmethod
    def from_ints(cls, weight: int, length: int, values) -> "CodewordSet":
        given = [int(v) for v in values]
        vals = sorted(set(given))
        if len(vals) != len(given):
            raise InvalidArgument("duplicate codewords")
        for v in vals:
            if v.bit_count() != weight:
                raise InvalidArgument(f"word of weight {v.bit_count()} in a weight-{weight} set")
        return cls(weight, length, tuple(BitVector(length, v) for v in vals))

    def values(self) -> list[int]:
        return [w.value for w in self.words]

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


class AssmusMattsonResult(NamedTuple):
    applies: bool
    nonzero_dual_weights_le: int


# ----------------------------------------------------------- constructions


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def quadratic_residues(p: int) -> tuple[int, ...]:
    return tuple(sorted({x * x % p for x in range(1, p)}))


def multiplicative_order(a: int, p: int) -> int:
    e, x = 1, a % p
    while x != 1:
        x = x * a % p
        e += 1
    return e


def cyclic_code(n: int, g: BinaryPolynomial, name: str = "") -> LinearCode:
    """Cyclic code of length n generated by g; rows are x^i g(x)."""
    if g.is_zero():
        raise InvalidArgument("zero generator polynomial")
    xn1 = BinaryPolynomial.from_exponents([0, n])
    if not (xn1 % g).is_zero():
        raise InvalidArgument(f"{g} does not divide x^{n} - 1")
    deg = int(g.degree)
    rows = tuple(g.coeffs << i for i in range(n - deg))
    return LinearCode(n, n - deg, BitMatrix(rows, n), name)


def qr_code(p: int) -> tuple[QRCodeSpec, LinearCode]:
    """Binary quadratic residue code of prime length p (p = +-1 mod 8)."""
    if not _is_prime(p) or p == 2:
        raise InvalidArgument(f"{p} is not an odd prime")
    if p % 8 not in (1, 7):
        raise UnsupportedParameter(f"2 is not a quadratic residue mod {p}")
    residues = quadratic_residues(p)
    m = multiplicative_order(2, p)
    ctx = FieldContext.of_degree(m)
    alpha = element_of_order(ctx, p)

    # coefficients of prod (x - alpha^r) as field values, low degree first
    poly = [1]
    for r in residues:
        root = (alpha ** r).value
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] ^= c
            if c:
                nxt[i] ^= (FieldElement(c, ctx) * FieldElement(root, ctx)).value
        poly = nxt
    if any(c not in (0, 1) for c in poly):
        raise InternalConsistencyError("QR generator has coefficients outside GF(2)")
    g = BinaryPolynomial(sum(c << i for i, c in enumerate(poly)))
    if g.degree != (p - 1) // 2:
        raise InternalConsistencyError("QR generator has the wrong degree")
    spec = QRCodeSpec(p, residues, m, g, alpha)
    return spec, cyclic_code(p, g, name=f"QR({p})")


def extend(code: LinearCode) -> LinearCode:
    """Append an overall parity bit at index n."""
    n = code.n
    rows = tuple(r | ((r.bit_count() & 1) << n) for r in code.generator.rows)
    name = f"ext {code.name}" if code.name else ""
    return LinearCode(n + 1, code.k, BitMatrix(rows, n + 1), name)


def puncture(code: LinearCode, position: int) -> LinearCode:
    if not 0 <= position < code.n:
        raise InvalidArgument("position out of range")
    keep = [c for c in range(code.n) if c != position]
    return LinearCode.from_rows(code.n - 1, code.generator.select_columns(keep).rows)


def dual(code: LinearCode) -> LinearCode:
    """Orthogonal complement under the standard dot product mod 2."""
    n = code.n
    red, piv = code._echelon
    red_rows = red.rows[:len(piv)]
    pivset = set(piv)
    rows = []
    for f in range(n):
        if f in pivset:
            continue
        v = 1 << f
        for row, c in zip(red_rows, piv):
            if (row >> f) & 1:
                v |= 1 << c
        rows.append(v)
    name = f"dual {code.name}" if code.name else ""
    return LinearCode(n, n - code.k, BitMatrix(tuple(rows), n), name)


# ------------------------------------------------------ full enumeration


def _gray_table(rows: np.ndarray) -> np.ndarray:
    """All 2^a combinations of ``rows`` in binary-reflected Gray order.

    Step i XORs row ctz(i) into the running word, so the table is produced
    by a single cumulative XOR over the flipped rows.
    """
    a, L = rows.shape
    out = np.zeros((1 << a, L), dtype=np.uint64)
    if a:
        i = np.arange(1, 1 << a, dtype=np.int64)
        ctz = np.log2(i & -i).astype(np.intp)
        np.bitwise_xor.accumulate(rows[ctz], axis=0, out=out[1:])
    return out


def _codeword_chunks(code: LinearCode, chunk_rows: int = 1 << 20) -> Iterator[np.ndarray]:
    """Every codeword exactly once, as ``(N, limbs)`` uint64 blocks."""
    limbs = code.generator.to_limbs()
    k = code.k
    a = min(k, 16)
    low = _gray_table(limbs[:a])
    high = _gray_table(limbs[a:])
    step = max(1, chunk_rows >> a)
    for j in range(0, len(high), step):
        block = high[j:j + step, None, :] ^ low[None, :, :]
        yield block.reshape(-1, limbs.shape[1])


def _weights(block: np.ndarray) -> np.ndarray:
    return np.bitwise_count(block).sum(axis=1, dtype=np.int64)


def _check_capacity(code: LinearCode):
    if code.k > MAX_ENUMERATION_DIM:
        raise CapacityExceeded(
            f"dimension {code.k} exceeds the enumeration bound {MAX_ENUMERATION_DIM}; "
            "use low_weight_codewords")


def _map_chunks(code: LinearCode, fn, threads: int | None):
    chunks = _codeword_chunks(code)
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, chunks))
    return [fn(c) for c in chunks]


def weight_distribution(code: LinearCode, *, use_cache: bool = True,
                        threads: int | None = None) -> WeightDistribution:
    """Exact weight distribution by enumerating all 2^k codewords."""
    _check_capacity(code)
    params = {"n": code.n, "k": code.k}
    if use_cache:
        hit = cache.load(code.digest, "weights", params)
        if hit is not None:
            return WeightDistribution(code.n, {int(w): a for w, a in hit.items()})

    def count(block):
        return np.bincount(_weights(block), minlength=code.n + 1)

    totals = sum(_map_chunks(code, count, threads))
    wd = WeightDistribution(code.n, {w: int(a) for w, a in enumerate(totals) if a})
    if wd.total != code.size:
        raise InternalConsistencyError("enumeration missed codewords")
    if use_cache:
        cache.store(code.digest, "weights", params, {str(w): a for w, a in wd.counts.items()})
    return wd


def codewords_of_weight(code: LinearCode, w: int, *, use_cache: bool = True,
                        threads: int | None = None) -> CodewordSet:
    """All codewords of weight exactly ``w``, sorted by integer value."""
    _check_capacity(code)
    if not 0 <= w <= code.n:
        raise InvalidArgument("weight outside 0..n")
    params = {"n": code.n, "k": code.k, "w": w}
    if use_cache:
        hit = cache.load(code.digest, f"words{w}", params)
        if hit is not None:
            return CodewordSet.from_ints(w, code.n, [int(h, 16) for h in hit])

    def pick(block):
        return block[_weights(block) == w]

    found = [limbs_to_int(row) for part in _map_chunks(code, pick, threads) for row in part]
    out = CodewordSet.from_ints(w, code.n, found)
    if use_cache:
        cache.store(code.digest, f"words{w}", params, [format(v, "x") for v in out.values()])
    return out


# ---------------------------------------------------------- MacWilliams


def krawtchouk(j: int, w: int, n: int) -> int:
    return sum((-1) ** i * comb(w, i) * comb(n - w, j - i) for i in range(j + 1))


def macwilliams_transform(wd: WeightDistribution, k: int) -> WeightDistribution:
    """Dual weight distribution: A'_j = 2^-k sum_w A_w K_j(w; n)."""
    if wd.total != 1 << k:
        raise InconsistentInput(f"distribution sums to {wd.total}, not 2^{k}")
    n = wd.n
    out = {}
    for j in range(n + 1):
        s = sum(a * krawtchouk(j, w, n) for w, a in wd.counts.items())
        q, r = divmod(s, 1 << k)
        if r or q < 0:
            raise InconsistentInput(f"transform gives non-integral or negative A'_{j}")
        if q:
            out[j] = q
    return WeightDistribution(n, out)


def assmus_mattson_check(n: int, d: int, t: int,
                         dual_wd: WeightDistribution) -> AssmusMattsonResult:
    """Count nonzero dual weights in 1..n-t; the theorem applies if <= d-t."""
    if not 1 <= t < d:
        raise InvalidArgument("need 1 <= t < d")
    count = sum(1 for w in dual_wd.nonzero_weights() if w <= n - t)
    return AssmusMattsonResult(count <= d - t, count)


# ------------------------------------------------- low-weight enumeration


@dataclass(frozen=True)
class InformationSet:
    columns: tuple[int, ...]
    rank: int
    rows: tuple[int, ...]  # basis of the code, reduced on ``columns``


@dataclass
class LowWeightResult:
    by_weight: dict[int, CodewordSet]
    info_sets: list[InformationSet]
    message_weight: int      # largest message weight enumerated per set
    lower_bound: int         # every unseen codeword has weight >= this
    target: int              # all codewords of weight <= target are listed

    @property
    def minimum_weight(self) -> int | None:
        nz = [w for w in self.by_weight if w > 0]
        return min(nz) if nz else None


def _partition(code: LinearCode, column_order: list[int]) -> list[InformationSet]:
    sets = []
    remaining = list(column_order)
    while remaining:
        red, piv = rref(code.generator, remaining)
        if not piv:
            break
        sets.append(InformationSet(tuple(piv), len(piv), red.rows))
        taken = set(piv)
        remaining = [c for c in remaining if c not in taken]
    return sets


def information_sets(code: LinearCode, tries: int = 64, seed: int = 0) -> list[InformationSet]:
    """Greedy disjoint information sets.

    The natural column order is tried first; if it does not give a
    partition into as many full-rank sets as n // k allows, seeded column
    shuffles are tried and the best partition kept.
    """
    if code.k == 0:
        return []
    want = code.n // code.k

    def score(sets):
        return (sum(s.rank == code.k for s in sets), sum(s.rank for s in sets[:want + 1]))

    best = _partition(code, list(range(code.n)))
    rng = random.Random(seed)
    order = list(range(code.n))
    for _ in range(tries):
        if score(best)[0] >= want:
            break
        rng.shuffle(order)
        cand = _partition(code, order)
        if score(cand) > score(best):
            best = cand
    return best


def _combination_xors(rows: np.ndarray, w: int,
                      max_chunk: int = 1 << 21) -> Iterator[np.ndarray]:
    """XORs of every w-subset of ``rows``, yielded in blocks."""
    k, L = rows.shape
    if w == 0:
        yield np.zeros((1, L), dtype=np.uint64)
        return
    if w > k:
        return

    def build(start, r, prefix):
        vals = rows[start:] ^ prefix
        last = np.arange(start, k)
        for _ in range(r - 1):
            vs, ls = [], []
            for i in range(start + 1, k):
                cut = np.searchsorted(last, i)
                if cut:
                    vs.append(vals[:cut] ^ rows[i])
                    ls.append(np.full(cut, i))
            vals, last = np.concatenate(vs), np.concatenate(ls)
        return vals

    def rec(start, r, prefix):
        size = comb(k - start, r)
        if size == 0:
            return
        if r == 0:
            yield prefix[None, :].copy()
        elif size <= max_chunk:
            yield build(start, r, prefix)
        else:
            for i in range(start, k - r + 1):
                yield from rec(i + 1, r - 1, prefix ^ rows[i])

    yield from rec(0, w, np.zeros(L, dtype=np.uint64))


def low_weight_search(code: LinearCode, w_max: int, *, stop_at_minimum: bool = False,
                      max_work: int = 2 * 10 ** 8, progress=None) -> LowWeightResult:
    """All codewords of weight <= w_max via disjoint information sets.

    For each set the code is re-encoded systematically on that set and all
    messages of weight 0, 1, 2, ... are enumerated round-robin. After
    message weight w has been finished on every set, an unseen codeword has
    weight at least sum_j max(0, w + 1 - (k - rank_j)), since its
    restriction to each set carries most of its message weight. The search
    stops once that bound exceeds the target.

    With ``stop_at_minimum`` the target shrinks to the smallest nonzero
    weight seen so far, which certifies the minimum distance and returns
    exactly the minimum-weight words. ``progress`` (a callable taking a
    string) is told about each finished message weight.
    """
    if w_max < 0:
        raise InvalidArgument("w_max must be nonnegative")
    k = code.k
    sets = information_sets(code)
    found: dict[int, set[int]] = {0: {0}}
    target = w_max
    w = -1
    bound = 0
    L = code.generator.to_limbs().shape[1]

    def lower_bound(wdone):
        return sum(max(0, wdone + 1 - (k - s.rank)) for s in sets)

    def current_target():
        if stop_at_minimum:
            nz = [x for x in found if x > 0]
            if nz:
                return min(w_max, min(nz))
        return w_max

    while True:
        target = current_target()
        bound = lower_bound(w) if w >= 0 else 0
        if w >= k or bound > target or k == 0:
            break
        nxt = w + 1
        work = len(sets) * comb(k, nxt)
        if work > max_work:
            raise CapacityExceeded(
                f"completeness for weight <= {target} needs message weight > {w}; "
                f"next level costs {work} combinations (cap {max_work}); "
                f"information-set ranks {[s.rank for s in sets]}, current bound {bound}")
        for s in sets:
            rows = BitMatrix(s.rows, code.n).to_limbs().reshape(k, L)
            for block in _combination_xors(rows, nxt):
                wts = _weights(block)
                keep = wts <= current_target()
                for row, wt in zip(block[keep], wts[keep]):
                    found.setdefault(int(wt), set()).add(limbs_to_int(row))
        w = nxt
        log.info("message weight %d done; bound %d; smallest weights %s",
                 w, lower_bound(w), sorted(found)[:4])
        if progress is not None:
            progress(f"message weight {w} done, lower bound {lower_bound(w)}, "
                     f"target {current_target()}")

    by_weight = {wt: CodewordSet.from_ints(wt, code.n, vals)
                 for wt, vals in sorted(found.items()) if wt <= target}
    return LowWeightResult(by_weight, sets, max(w, 0), bound, target)


def low_weight_codewords(code: LinearCode, w_max: int, **kw) -> dict[int, CodewordSet]:
    """Codewords of weight <= w_max, grouped by weight (empty weights omitted)."""
    return low_weight_search(code, w_max, **kw).by_weight


def minimum_weight_codewords(code: LinearCode, w_cap: int | None = None) -> CodewordSet:
    """Certified minimum-weight codewords (searching weights up to ``w_cap``)."""
    res = low_weight_search(code, code.n if w_cap is None else w_cap, stop_at_minimum=True)
    d = res.minimum_weight
    if d is None:
        raise CapacityExceeded(f"no nonzero codeword of weight <= {res.target}")
    return res.by_weight[d]
