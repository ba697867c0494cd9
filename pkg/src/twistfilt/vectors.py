"""Finite linear combinations of hashable basis labels over exact rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterator, Mapping

_EXACT_TYPES: tuple = (Fraction, int)
try:  # gmpy2 rationals are accepted as-is when available
    from gmpy2 import mpq as _mpq

    _EXACT_TYPES = (Fraction, int, type(_mpq()))
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    pass


class LinComb:
    """A finite formal sum of labeled basis vectors with Fraction coefficients.

    Zero coefficients are never stored.  Instances are treated as immutable;
    all arithmetic returns new objects.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Hashable, Fraction] | None = None):
        clean: dict = {}
        if terms:
            for label, coeff in terms.items():
                if not isinstance(coeff, _EXACT_TYPES):
                    coeff = Fraction(coeff)
                if coeff:
                    clean[label] = coeff
        self.terms = clean

    @classmethod
    def unit(cls, label: Hashable) -> "LinComb":
        return cls({label: Fraction(1)})

    @classmethod
    def zero(cls) -> "LinComb":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Hashable, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, label: Hashable) -> Fraction:
        return self.terms.get(label, Fraction(0))

    def __add__(self, other: "LinComb") -> "LinComb":
        out = dict(self.terms)
        for label, coeff in other.terms.items():
            new = out.get(label, 0) + coeff
            if new:
                out[label] = new
            else:
                out.pop(label, None)
        result = LinComb.__new__(LinComb)
        result.terms = out
        return result

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __neg__(self) -> "LinComb":
        result = LinComb.__new__(LinComb)
        result.terms = {label: -coeff for label, coeff in self.terms.items()}
        return result

    def scale(self, scalar: Fraction | int) -> "LinComb":
        if not isinstance(scalar, _EXACT_TYPES):
            scalar = Fraction(scalar)
        if not scalar:
            return LinComb()
        result = LinComb.__new__(LinComb)
        result.terms = {label: scalar * coeff for label, coeff in self.terms.items()}
        return result

    def __mul__(self, scalar) -> "LinComb":
        return self.scale(scalar)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LinComb) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("LinComb is not hashable")

    def sorted_terms(self) -> list[tuple[Hashable, Fraction]]:
        """Terms in a canonical label order, for deterministic reporting."""
        return sorted(self.terms.items(), key=lambda item: repr(item[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "LinComb(0)"
        bits = ["%s*%r" % (coeff, label) for label, coeff in self.sorted_terms()]
        return "LinComb(%s)" % " + ".join(bits)
