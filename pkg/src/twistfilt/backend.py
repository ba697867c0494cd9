"""Graded vertex algebra backends with a finite-order automorphism.

A backend owns a canonical weight-graded basis, the mode products u_n v, the
translation operator D(v) = v_{-2}1, and the sector decomposition under the
automorphism.  The free boson (Heisenberg) backend is the workhorse: basis
vectors are partitions (k_1 >= ... >= k_r >= 1) labeling h(-k_1)...h(-k_r)1,
with <h,h> = 1 and, for period 2, the automorphism h -> -h.

Composite mode products are computed by recursion on the leftmost oscillator
factor through Borcherds' iterate formula, so every structure constant comes
out of the generator commutation relations and nothing is tabulated by hand.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Sequence

from .arith import rational_binomial, partitions_of
from .errors import (
    CutoffExceededError,
    NonHomogeneousError,
    UnsupportedPeriodError,
)
from .vectors import LinComb


class VABackend:
    """Contract shared by all vertex algebra backends.

    Subclasses provide the basis enumeration, weights, sectors and the core
    product on basis labels; linear extensions, cutoff policing and the
    automorphism action live here.
    """

    period: int
    max_weight: int | None
    vacuum_label: Hashable

    def basis(self, weight: int) -> Sequence[Hashable]:
        raise NotImplementedError

    def weight(self, label: Hashable) -> int:
        raise NotImplementedError

    def sector(self, label: Hashable) -> int:
        raise NotImplementedError

    def product_mode_label(self, u_label, n: int, v_label) -> LinComb:
        raise NotImplementedError

    # -- linear extensions ------------------------------------------------

    def vacuum(self) -> LinComb:
        return LinComb.unit(self.vacuum_label)

    def product_mode(self, u: LinComb, n: int, v: LinComb) -> LinComb:
        """u_n v, extended bilinearly over the terms of u and v."""
        out = LinComb.zero()
        for u_label, cu in u:
            for v_label, cv in v:
                result_weight = self.weight(u_label) + self.weight(v_label) - n - 1
                if result_weight < 0:
                    continue
                if self.max_weight is not None and result_weight > self.max_weight:
                    raise CutoffExceededError(
                        "product weight %d exceeds backend cutoff %d"
                        % (result_weight, self.max_weight)
                    )
                out = out + self.product_mode_label(u_label, n, v_label).scale(cu * cv)
        return out

    def translate(self, v: LinComb) -> LinComb:
        """The canonical translation operator D(v) = v_{-2}1."""
        return self.product_mode(v, -2, self.vacuum())

    def translate_power(self, v: LinComb, k: int) -> LinComb:
        for _ in range(k):
            v = self.translate(v)
        return v

    def sector_decompose(self, v: LinComb) -> list[LinComb]:
        """The unique splitting of v into automorphism eigencomponents."""
        parts: list[dict] = [dict() for _ in range(self.period)]
        for label, coeff in v:
            parts[self.sector(label)][label] = coeff
        return [LinComb(p) for p in parts]

    def automorphism_apply(self, v: LinComb) -> LinComb:
        """Apply the automorphism; the eigenvalue is rational only for T <= 2."""
        if self.period > 2:
            raise UnsupportedPeriodError(
                "period %d eigenvalues are irrational; use sector_decompose"
                % self.period
            )
        out = {}
        for label, coeff in v:
            sign = -1 if (self.period == 2 and self.sector(label) == 1) else 1
            out[label] = sign * coeff
        return LinComb(out)

    # -- grading helpers --------------------------------------------------

    def element_weight(self, v: LinComb):
        """Weight of a homogeneous element (None for the zero vector)."""
        weights = {self.weight(label) for label, _ in v}
        if not weights:
            return None
        if len(weights) > 1:
            raise NonHomogeneousError("mixed weights %s" % sorted(weights))
        return weights.pop()

    def element_sector(self, v: LinComb):
        """Sector of an element supported in one eigencomponent."""
        sectors = {self.sector(label) for label, _ in v}
        if not sectors:
            return None
        if len(sectors) > 1:
            raise NonHomogeneousError("mixed sectors %s" % sorted(sectors))
        return sectors.pop()

    def weight_components(self, v: LinComb) -> dict[int, LinComb]:
        split: dict = {}
        for label, coeff in v:
            split.setdefault(self.weight(label), {})[label] = coeff
        return {w: LinComb(t) for w, t in sorted(split.items())}

    def top_product_index(self, u: LinComb, v: LinComb) -> int | None:
        """Largest t >= 0 with u_t v != 0, or None if all of them vanish.

        Modes above the conical weight bound wt(u)+wt(v)-1 land in negative
        weight and vanish, so the scan is finite.  Used to pick minimal
        annihilation indices in iterate formulas.
        """
        if u.is_zero() or v.is_zero():
            return None
        key = (
            tuple(sorted(u.terms.items(), key=lambda kv: repr(kv[0]))),
            tuple(sorted(v.terms.items(), key=lambda kv: repr(kv[0]))),
        )
        cache = getattr(self, "_top_cache", None)
        if cache is None:
            cache = self._top_cache = {}
        if key in cache:
            return cache[key]
        bound = max(
            self.weight(a) + self.weight(b) - 1 for a, _ in u for b, _ in v
        )
        result = None
        for t in range(bound, -1, -1):
            if self.product_mode(u, t, v):
                result = t
                break
        cache[key] = result
        return result


class HeisenbergBackend(VABackend):
    """Free boson vertex algebra with <h,h> = 1.

    Basis labels are partitions as descending integer tuples; () is the
    vacuum and (1,) is the generator h = h(-1)1.  For period 2 the
    automorphism acts as h -> -h, so the sector is the parity of the number
    of parts.
    """

    def __init__(self, period: int = 2, max_weight: int | None = None):
        if period not in (1, 2):
            raise UnsupportedPeriodError(
                "Heisenberg backend supports period 1 or 2, got %d" % period
            )
        self.period = period
        self.max_weight = max_weight
        self.vacuum_label = ()
        self.h_label = (1,)
        self._basis_cache: dict[int, list[tuple[int, ...]]] = {}
        self._prod_cache: dict[tuple, LinComb] = {}

    def basis(self, weight: int) -> list[tuple[int, ...]]:
        if weight < 0:
            return []
        if weight not in self._basis_cache:
            self._basis_cache[weight] = list(partitions_of(weight))
        return self._basis_cache[weight]

    def weight(self, label: tuple[int, ...]) -> int:
        return sum(label)

    def sector(self, label: tuple[int, ...]) -> int:
        return len(label) % self.period

    def generator(self) -> LinComb:
        return LinComb.unit(self.h_label)

    # -- oscillator action ------------------------------------------------

    def h_mode(self, j: int, v: LinComb) -> LinComb:
        """Action of the oscillator h_j: creation for j < 0, contraction for
        j > 0 via [h_m, h_n] = m delta_{m+n,0}, and h_0 = 0."""
        if j == 0:
            return LinComb.zero()
        out = LinComb.zero()
        for label, coeff in v:
            if j < 0:
                new = tuple(sorted(label + (-j,), reverse=True))
                out = out + LinComb({new: coeff})
            else:
                mult = label.count(j)
                if mult:
                    removed = list(label)
                    removed.remove(j)
                    out = out + LinComb({tuple(removed): coeff * mult * j})
        return out

    def product_mode_label(self, u_label, n: int, v_label) -> LinComb:
        key = (u_label, n, v_label)
        cached = self._prod_cache.get(key)
        if cached is not None:
            return cached

        if u_label == ():
            result = LinComb.unit(v_label) if n == -1 else LinComb.zero()
        else:
            result = self._iterate(u_label, n, v_label)
        self._prod_cache[key] = result
        return result

    def _iterate(self, u_label, n: int, v_label) -> LinComb:
        """(h_{-k} b)_n v via the iterate formula, recursing on b."""
        k = u_label[0]
        rest = u_label[1:]
        m0 = -k
        rest_weight = sum(rest)
        v_weight = sum(v_label)
        total = LinComb.zero()

        # h_{m0-i} (rest_{n+i} v): the inner product dies once its weight
        # drops below zero, which bounds i.
        i_max = rest_weight + v_weight - n - 1
        for i in range(0, max(i_max, -1) + 1):
            inner = self.product_mode_label(rest, n + i, v_label)
            if inner.is_zero():
                continue
            term = self.h_mode(m0 - i, inner)
            total = total + term.scale(((-1) ** i) * rational_binomial(m0, i))

        # rest_{m0+n-i} (h_i v): h_i annihilates v for i above its largest part.
        sign = (-1) ** k
        for i in range(1, v_weight + 1):
            hv = self.h_mode(i, LinComb.unit(v_label))
            if hv.is_zero():
                continue
            term = LinComb.zero()
            for label, coeff in hv:
                term = term + self.product_mode_label(rest, m0 + n - i, label).scale(coeff)
            total = total - term.scale(sign * ((-1) ** i) * rational_binomial(m0, i))
        return total

    def translate(self, v: LinComb) -> LinComb:
        """D acts as a derivation shifting each oscillator h(-k) to k h(-k-1)."""
        out = LinComb.zero()
        for label, coeff in v:
            if self.max_weight is not None and label and sum(label) + 1 > self.max_weight:
                raise CutoffExceededError(
                    "translate weight %d exceeds backend cutoff %d"
                    % (sum(label) + 1, self.max_weight)
                )
            for idx, part in enumerate(label):
                shifted = label[:idx] + (part + 1,) + label[idx + 1 :]
                new = tuple(sorted(shifted, reverse=True))
                out = out + LinComb({new: coeff * part})
        return out
