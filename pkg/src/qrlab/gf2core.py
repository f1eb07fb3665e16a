"""
Arithmetic over GF(2): bit vectors, bit matrices, polynomials and GF(2^m).

Everything here is bit-packed into Python integers. Bit ``i`` of an integer
is coordinate ``i`` of a vector, or the coefficient of ``x^i`` of a
polynomial. Python ints are arbitrary-precision limb arrays already, so no
manual 64-bit limb handling is done except when handing data to numpy
(see :meth:`BitMatrix.to_limbs`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument

LIMB_BITS = 64
_LIMB_MASK = (1 << LIMB_BITS) - 1


def n_limbs(length: int) -> int:
    return max(1, -(-length // LIMB_BITS))


def int_to_limbs(value: int, count: int) -> list[int]:
    return [(value >> (LIMB_BITS * j)) & _LIMB_MASK for j in range(count)]


def limbs_to_int(limbs: Iterable[int]) -> int:
    out = 0
    for j, w in enumerate(limbs):
        out |= int(w) << (LIMB_BITS * j)
    return out


def support(value: int) -> list[int]:
    """Indices of the set bits of ``value``, ascending."""
    out = []
    while value:
        low = value & -value
        out.append(low.bit_length() - 1)
        value ^= low
    return out


# ---------------------------------------------------------------- vectors


@dataclass(frozen=True, order=True)
class BitVector:
    """Immutable vector in GF(2)^length."""

    length: int
    value: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise InvalidArgument("negative length")
        if self.value < 0 or self.value >> self.length:
            raise InvalidArgument("bits set beyond vector length")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitVector":
        value = 0
        for i, b in enumerate(bits):
            if b:
                value |= 1 << i
        return cls(len(bits), value)

    @classmethod
    def from_support(cls, length: int, positions: Iterable[int]) -> "BitVector":
        value = 0
        for i in positions:
            if not 0 <= i < length:
                raise InvalidArgument(f"position {i} outside 0..{length - 1}")
            value |= 1 << i
        return cls(length, value)

    @property
    def words(self) -> list[int]:
        return int_to_limbs(self.value, n_limbs(self.length))

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def support(self) -> list[int]:
        return support(self.value)

    def bits(self) -> list[int]:
        return [(self.value >> i) & 1 for i in range(self.length)]

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if other.length != self.length:
            raise InvalidArgument("length mismatch")
        return BitVector(self.length, self.value ^ other.value)

    def dot(self, other: "BitVector") -> int:
        return (self.value & other.value).bit_count() & 1

    def __str__(self):
        return "".join(str(b) for b in self.bits())


# ----------------------------------------------------------- polynomials


@dataclass(frozen=True, order=True)
class BinaryPolynomial:
    """Polynomial over GF(2); bit ``i`` of ``coeffs`` is the coefficient of x^i."""

    coeffs: int = 0

    def __post_init__(self):
        if self.coeffs < 0:
            raise InvalidArgument("negative coefficient mask")

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "BinaryPolynomial":
        c = 0
        for e in exponents:
            c ^= 1 << e
        return cls(c)

    @classmethod
    def x_power(cls, n: int) -> "BinaryPolynomial":
        return cls(1 << n)

    @property
    def degree(self) -> float | int:
        """Degree, or ``-inf`` for the zero polynomial."""
        if self.coeffs == 0:
            return float("-inf")
        return self.coeffs.bit_length() - 1

    def is_zero(self) -> bool:
        return self.coeffs == 0

    def exponents(self) -> list[int]:
        return support(self.coeffs)

    def reciprocal(self) -> "BinaryPolynomial":
        if self.coeffs == 0:
            return self
        d = self.degree
        return BinaryPolynomial.from_exponents(d - e for e in self.exponents())

    def __add__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(self.coeffs ^ other.coeffs)

    __sub__ = __add__

    def __mul__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(_clmul(self.coeffs, other.coeffs))

    def __divmod__(self, other: "BinaryPolynomial"):
        q, r = _poly_divmod(self.coeffs, other.coeffs)
        return BinaryPolynomial(q), BinaryPolynomial(r)

    def __floordiv__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(_poly_mod(self.coeffs, other.coeffs))

    def __call__(self, bit: int) -> int:
        """Evaluate at 0 or 1."""
        if bit == 0:
            return self.coeffs & 1
        return self.coeffs.bit_count() & 1

    def __str__(self):
        if self.coeffs == 0:
            return "0"
        terms = []
        for e in reversed(self.exponents()):
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return " + ".join(terms)


def _clmul(a: int, b: int) -> int:
    if a.bit_length() > b.bit_length():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def _poly_divmod(a: int, m: int) -> tuple[int, int]:
    if m == 0:
        raise InvalidArgument("division by the zero polynomial")
    dm = m.bit_length()
    q = 0
    while a.bit_length() >= dm:
        shift = a.bit_length() - dm
        q |= 1 << shift
        a ^= m << shift
    return q, a


def _poly_mod(a: int, m: int) -> int:
    return _poly_divmod(a, m)[1]


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _mulmod(a: int, b: int, m: int) -> int:
    return _poly_mod(_clmul(a, b), m)


def poly_gcd(a: BinaryPolynomial, b: BinaryPolynomial) -> BinaryPolynomial:
    return BinaryPolynomial(_poly_gcd(a.coeffs, b.coeffs))


def poly_mul_mod(a: BinaryPolynomial, b: BinaryPolynomial,
                 modulus: BinaryPolynomial) -> BinaryPolynomial:
    """Return ``a * b mod modulus``."""
    if modulus.is_zero():
        raise InvalidArgument("zero modulus")
    return BinaryPolynomial(_mulmod(a.coeffs, b.coeffs, modulus.coeffs))


def is_irreducible(f: BinaryPolynomial) -> bool:
    """Irreducibility over GF(2).

    Uses the classical criterion: f of degree n has no factor of degree i
    iff gcd(x^(2^i) - x, f) = 1, checked for i = 1..n//2.
    """
    if f.is_zero() or f.degree < 1:
        raise InvalidArgument("irreducibility is undefined for constants")
    n = int(f.degree)
    m = f.coeffs
    x = 0b10
    power = x  # x^(2^i) mod f
    for _ in range(n // 2):
        power = _mulmod(power, power, m)
        if _poly_gcd(m, power ^ x) != 1:
            return False
    return True


def find_irreducible(m: int) -> BinaryPolynomial:
    """Smallest irreducible polynomial of degree ``m``, comparing coefficient
    masks as integers (constant term is the least significant bit)."""
    if m < 1:
        raise InvalidArgument("degree must be at least 1")
    for c in range(1 << m, 1 << (m + 1)):
        f = BinaryPolynomial(c)
        if is_irreducible(f):
            return f
    raise AssertionError("unreachable: irreducibles exist in every degree")


# ---------------------------------------------------------- field GF(2^m)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldContext:
    m: int
    modulus: BinaryPolynomial

    def __post_init__(self):
        if self.modulus.degree != self.m:
            raise InvalidArgument("modulus degree must equal m")
        if not is_irreducible(self.modulus):
            raise InvalidArgument(f"{self.modulus} is reducible")

    @classmethod
    def of_degree(cls, m: int) -> "FieldContext":
        return cls(m, find_irreducible(m))

    @property
    def order(self) -> int:
        return 1 << self.m

    def element(self, value: int | BinaryPolynomial) -> "FieldElement":
        if isinstance(value, BinaryPolynomial):
            value = value.coeffs
        return FieldElement(_poly_mod(value, self.modulus.coeffs), self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)


@dataclass(frozen=True)
class FieldElement:
    value: int
    ctx: FieldContext

    def __post_init__(self):
        if self.value < 0 or self.value >> self.ctx.m:
            raise InvalidArgument("element not reduced modulo the field modulus")

    def _check(self, other: "FieldElement"):
        if other.ctx != self.ctx:
            raise InvalidArgument("elements from different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.value ^ other.value, self.ctx)

    __sub__ = __add__

    def __neg__(self) -> "FieldElement":
        return self

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(_mulmod(self.value, other.value, self.ctx.modulus.coeffs), self.ctx)

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        m = self.ctx.modulus.coeffs
        result, base = 1, self.value
        while e:
            if e & 1:
                result = _mulmod(result, base, m)
            base = _mulmod(base, base, m)
            e >>= 1
        return FieldElement(result, self.ctx)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self ** (self.ctx.order - 2)

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def multiplicative_order(self) -> int:
        if self.value == 0:
            raise InvalidArgument("zero has no multiplicative order")
        order = self.ctx.order - 1
        for q in _prime_factors(order):
            while order % q == 0 and (self ** (order // q)).is_one():
                order //= q
        return order

    def __str__(self):
        return str(BinaryPolynomial(self.value))


def element_of_order(ctx: FieldContext, n: int) -> FieldElement:
    """Deterministic element of exact multiplicative order ``n``.

    Candidates beta = 1, x, x+1, x^2, ... are scanned in order of their
    coefficient masks; the first beta whose power beta^((2^m-1)/n) has
    exact order n gives the answer.
    """
    group_order = ctx.order - 1
    if n < 1 or group_order % n:
        raise InvalidArgument(f"{n} does not divide 2^{ctx.m} - 1")
    cofactor = group_order // n
    primes = _prime_factors(n)
    for value in range(1, ctx.order):
        gamma = FieldElement(value, ctx) ** cofactor
        if all(not (gamma ** (n // q)).is_one() for q in primes):
            return gamma
    raise AssertionError("unreachable: the multiplicative group is cyclic")


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class BitMatrix:
    """Matrix over GF(2) stored as a tuple of row masks."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for r in self.rows:
            if r < 0 or r >> self.cols:
                raise InvalidArgument("row wider than the matrix")

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "BitMatrix":
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise InvalidArgument("ragged rows")
        return cls(tuple(BitVector.from_bits(r).value for r in data), cols)

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], cols: int) -> "BitMatrix":
        if any(v.length != cols for v in vectors):
            raise InvalidArgument("vector lengths differ from column count")
        return cls(tuple(v.value for v in vectors), cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls((0,) * rows, cols)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.rows[i])

    def to_array(self) -> np.ndarray:
        out = np.zeros((len(self.rows), self.cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in support(r):
                out[i, j] = 1
        return out

    def to_limbs(self) -> np.ndarray:
        """Rows as a ``(rows, limbs)`` uint64 array, least significant limb first."""
        L = n_limbs(self.cols)
        return np.array([int_to_limbs(r, L) for r in self.rows],
                        dtype=np.uint64).reshape(len(self.rows), L)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.rows):
            for j in support(r):
                out[j] |= 1 << i
        return BitMatrix(tuple(out), len(self.rows))

    def select_columns(self, columns: Sequence[int]) -> "BitMatrix":
        out = []
        for r in self.rows:
            v = 0
            for new, old in enumerate(columns):
                if (r >> old) & 1:
                    v |= 1 << new
            out.append(v)
        return BitMatrix(tuple(out), len(columns))

    def rank(self) -> int:
        return len(rref(self)[1])

    def __str__(self):
        return "\n".join(str(self.row(i)) for i in range(self.n_rows))


def rref(mat: BitMatrix, column_order: Sequence[int] | None = None):
    """Reduced row-echelon form and pivot columns.

    Columns are scanned in ``column_order`` (default 0, 1, ...); zero rows
    are dropped from the bottom but kept in the returned matrix so its shape
    matches the input.
    """
    rows = list(mat.rows)
    order = range(mat.cols) if column_order is None else column_order
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == len(rows):
            break
        bit = 1 << c
        for i in range(r, len(rows)):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
    return BitMatrix(tuple(rows), mat.cols), pivots
