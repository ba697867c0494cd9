"""Exact scalar arithmetic, fractional mode indices and partition enumeration.

Everything downstream (mode products, filtrations, linear algebra) works over
exact rationals.  We use :class:`fractions.Fraction` as the scalar type: it is
arbitrary precision and always normalized to lowest terms with a positive
denominator, which is exactly the invariant required here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

try:  # exact rationals with C-speed arithmetic, if available
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    _mpq = None


class _CachedHashFraction(Fraction):
    """Fraction that memoizes its hash.

    Fraction.__hash__ computes a modular inverse on every call, which
    dominates profiles when fractions are used as dict-key components in hot
    loops.  Instances are produced only through :func:`pooled_fraction`, so
    equal values are usually the identical object and dict lookups skip the
    equality check entirely.
    """

    __slots__ = ("_hash",)

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = super().__hash__()
            self._hash = h
            return h


_FRACTION_POOL: dict[tuple[int, int], Fraction] = {}


def pooled_fraction(value):
    """An exact rational that is cheap to hash and compare as a dict key.

    With gmpy2 present this is an mpq (hashing and arithmetic are C-speed);
    otherwise it is a shared hash-caching Fraction from the pool.  Either way
    the value compares and hashes identically to the plain Fraction.
    """
    if _mpq is not None:
        if isinstance(value, Fraction):
            # go through ints: a Fraction built from an mpq carries mpz
            # components that gmpy2 refuses to convert directly
            return _mpq(int(value.numerator), int(value.denominator))
        return _mpq(value)
    value = Fraction(value)
    key = (value.numerator, value.denominator)
    out = _FRACTION_POOL.get(key)
    if out is None:
        out = _CachedHashFraction(value)
        _FRACTION_POOL[key] = out
    return out


def rational_binomial(a, i: int):
    """Generalized binomial coefficient a(a-1)...(a-i+1) / i!.

    Defined for any rational a and nonnegative integer i, with the empty
    product convention for i = 0.
    """
    if i < 0:
        raise ValueError("binomial lower index must be nonnegative, got %r" % (i,))
    return _binomial_cached(pooled_fraction(a), i)


@lru_cache(maxsize=None)
def _binomial_cached(a, i: int):
    num = pooled_fraction(1)
    for j in range(i):
        num *= a - j
    return num / factorial(i)


@dataclass(frozen=True, order=False)
class ModeIndex:
    """A mode index base + sector/period with integer base and sector in [0, T-1].

    Two indices with the same rational value and the same period compare equal;
    the (base, sector) split is canonical because 0 <= sector < period.
    """

    base: int
    sector: int
    period: int

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be a positive integer")
        if not 0 <= self.sector < self.period:
            raise ValueError(
                "sector %r out of range for period %r" % (self.sector, self.period)
            )

    @classmethod
    def from_value(cls, value: Fraction | int, period: int) -> "ModeIndex":
        """Split a rational value n + p/T into its canonical (n, p, T) form."""
        value = Fraction(value)
        scaled = value * period
        if scaled.denominator != 1:
            raise ValueError(
                "%s is not a multiple of 1/%d" % (value, period)
            )
        base, sector = divmod(int(scaled), period)
        return cls(base, sector, period)

    @property
    def value(self) -> Fraction:
        return self.base + Fraction(self.sector, self.period)

    def __add__(self, other: int) -> "ModeIndex":
        return ModeIndex(self.base + other, self.sector, self.period)

    def __sub__(self, other: int) -> "ModeIndex":
        return ModeIndex(self.base - other, self.sector, self.period)

    def __lt__(self, other: "ModeIndex") -> bool:
        return self.value < other.value

    def __le__(self, other: "ModeIndex") -> bool:
        return self.value <= other.value

    def __str__(self) -> str:
        return str(self.value)


def mode_value(m: ModeIndex) -> Fraction:
    """Rational value base + sector/period of a mode index."""
    return m.value


def as_half_weight(value: Fraction | int, period: int) -> Fraction:
    """Validate that value lies in (1/T)*N and return it as a Fraction."""
    value = Fraction(value)
    if value < 0 or (value * period).denominator != 1:
        raise ValueError(
            "%s is not a nonnegative multiple of 1/%d" % (value, period)
        )
    return value


def half_partitions(
    target: Fraction | int, allowed_parts: Sequence[Fraction | int]
) -> list[tuple[Fraction, ...]]:
    """All multisets of allowed parts summing exactly to target.

    Parts must be strictly positive.  Each multiset is returned as a tuple
    sorted descending; the list of multisets is in lexicographic order, so the
    output is canonical and reproducible.
    """
    target = Fraction(target)
    parts = sorted({pooled_fraction(p) for p in allowed_parts}, reverse=True)
    if any(p <= 0 for p in parts):
        raise ValueError("allowed parts must be strictly positive")

    out: list[tuple[Fraction, ...]] = []

    def extend(prefix: list[Fraction], remaining: Fraction, start: int) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for idx in range(start, len(parts)):
            p = parts[idx]
            if p > remaining:
                continue
            prefix.append(p)
            extend(prefix, remaining - p, idx)
            prefix.pop()

    if target >= 0:
        extend([], target, 0)
    return out


def partitions_of(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Integer partitions of n with parts <= max_part, descending parts.

    Emitted in descending-lexicographic order; this order is what the vertex
    algebra backends use for basis labels, so it must stay stable.
    """
    if n < 0:
        return
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(max_part, n)
    for first in range(top, 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def product_series_coefficients(
    parts: Iterable[Fraction | int], cutoff: Fraction, period: int
) -> dict[Fraction, int]:
    """Coefficients of prod_p (1 - q^p)^{-1} up to q^cutoff on the (1/T)N grid.

    Independent oracle for partition counting: expands the generating product
    term by term instead of enumerating multisets.
    """
    cutoff = Fraction(cutoff)
    grid = [Fraction(i, period) for i in range(int(cutoff * period) + 1)]
    coeffs = {w: 0 for w in grid}
    coeffs[ZERO] = 1
    for p in sorted(Fraction(x) for x in parts):
        if p > cutoff:
            break
        # multiply by 1/(1 - q^p): running convolution in increasing weight
        for w in grid:
            prev = w - p
            if prev >= 0 and coeffs[prev]:
                coeffs[w] += coeffs[prev]
    return coeffs
