"""Exact subspace arithmetic over the rationals.

All filtration computations reduce to questions about subspaces of a single
weight slice, which is a finite-dimensional vector space with a fixed ordered
basis of labels.  Subspaces are stored in reduced row echelon form over
:class:`fractions.Fraction`, so dimensions, memberships and intersections are
exact and deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .vectors import LinComb

ZERO = Fraction(0)
ONE = Fraction(1)


class Subspace:
    """A subspace of the span of an ordered label basis, in echelon form.

    Rows are kept fully reduced (leading ones, zeros above and below each
    pivot) and ordered by pivot column, so two equal subspaces have equal
    row lists.
    """

    def __init__(self, labels: Sequence[Hashable], vectors: Iterable[LinComb] = ()):
        self.labels = tuple(labels)
        self._index = {label: i for i, label in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("ambient basis labels must be distinct")
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []
        for vec in vectors:
            self.add_vector(vec)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def ambient_dim(self) -> int:
        return len(self.labels)

    def _coeff_row(self, vec: LinComb) -> list[Fraction]:
        row = [ZERO] * len(self.labels)
        for label, coeff in vec:
            idx = self._index.get(label)
            if idx is None:
                raise ValueError("label %r is not in the ambient basis" % (label,))
            row[idx] = coeff
        return row

    def _reduce_row(self, row: list[Fraction]) -> list[Fraction]:
        for pivot, existing in zip(self.pivots, self.rows):
            factor = row[pivot]
            if factor:
                row = [a - factor * b for a, b in zip(row, existing)]
        return row

    def add_vector(self, vec: LinComb) -> bool:
        """Insert a vector; returns True when it enlarged the subspace."""
        row = self._reduce_row(self._coeff_row(vec))
        pivot = next((i for i, a in enumerate(row) if a), None)
        if pivot is None:
            return False
        lead = row[pivot]
        row = [a / lead for a in row]
        # eliminate the new pivot from the existing rows, keep pivot order
        for k, existing in enumerate(self.rows):
            factor = existing[pivot]
            if factor:
                self.rows[k] = [a - factor * b for a, b in zip(existing, row)]
        pos = next((k for k, p in enumerate(self.pivots) if p > pivot), len(self.pivots))
        self.rows.insert(pos, row)
        self.pivots.insert(pos, pivot)
        return True

    def residual(self, vec: LinComb) -> LinComb:
        """The part of vec not contained in the subspace (zero iff member)."""
        row = self._reduce_row(self._coeff_row(vec))
        return LinComb({self.labels[i]: a for i, a in enumerate(row) if a})

    def contains(self, vec: LinComb) -> bool:
        return self.residual(vec).is_zero()

    def basis_vectors(self) -> list[LinComb]:
        return [
            LinComb({self.labels[i]: a for i, a in enumerate(row) if a})
            for row in self.rows
        ]

    def copy(self) -> "Subspace":
        out = Subspace(self.labels)
        out.rows = [list(r) for r in self.rows]
        out.pivots = list(self.pivots)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.labels == other.labels
            and self.rows == other.rows
        )

    def __le__(self, other: "Subspace") -> bool:
        return self.contained_in(other)[0]

    def contained_in(self, other: "Subspace") -> tuple[bool, LinComb | None]:
        """Containment test; on failure returns a witness basis vector."""
        if self.labels != other.labels:
            raise ValueError("subspaces live in different ambient spaces")
        for vec in self.basis_vectors():
            if not other.contains(vec):
                return False, vec
        return True, None

    def sum(self, other: "Subspace") -> "Subspace":
        if self.labels != other.labels:
            raise ValueError("subspaces live in different ambient spaces")
        out = self.copy()
        for vec in other.basis_vectors():
            out.add_vector(vec)
        return out

    def intersection(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelonize [u|u] for u in self and [v|0] for v in
        other; rows with vanishing left half carry an intersection basis in
        the right half."""
        if self.labels != other.labels:
            raise ValueError("subspaces live in different ambient spaces")
        n = len(self.labels)
        stacked: list[list[Fraction]] = []
        for row in self.rows:
            stacked.append(list(row) + list(row))
        for row in other.rows:
            stacked.append(list(row) + [ZERO] * n)
        reduced = _echelonize(stacked)
        out = Subspace(self.labels)
        for row in reduced:
            if any(row[:n]):
                continue
            vec = LinComb({self.labels[i]: a for i, a in enumerate(row[n:]) if a})
            if vec:
                out.add_vector(vec)
        return out

    def quotient_dim(self, sub: "Subspace") -> int:
        """dim(self / sub), requiring sub to actually sit inside self."""
        ok, witness = sub.contained_in(self)
        if not ok:
            raise ValueError(
                "quotient by a non-subspace; witness %r" % (witness,)
            )
        return self.dim - sub.dim

    def __repr__(self) -> str:
        return "Subspace(dim=%d, ambient=%d)" % (self.dim, self.ambient_dim)


def _echelonize(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Plain Gauss-Jordan on a list of rows; returns the nonzero RREF rows."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    out: list[list[Fraction]] = []
    pivots: list[int] = []
    for row in rows:
        for pivot, existing in zip(pivots, out):
            factor = row[pivot]
            if factor:
                row = [a - factor * b for a, b in zip(row, existing)]
        pivot = next((i for i, a in enumerate(row) if a), None)
        if pivot is None:
            continue
        lead = row[pivot]
        row = [a / lead for a in row]
        for k, existing in enumerate(out):
            factor = existing[pivot]
            if factor:
                out[k] = [a - factor * b for a, b in zip(existing, row)]
        pos = next((k for k, p in enumerate(pivots) if p > pivot), len(pivots))
        out.insert(pos, row)
        pivots.insert(pos, pivot)
    return out


class GradedSubspace:
    """A weight-graded subspace: one echelonized slice per weight.

    The ambient is a map weight -> ordered label list.  All stored vectors
    are homogeneous, so sums, intersections and containments decompose into
    independent slice computations.
    """

    def __init__(self, ambient: dict):
        self.ambient = dict(ambient)
        self.slices: dict = {w: Subspace(labels) for w, labels in ambient.items()}

    def weights(self) -> list:
        return sorted(self.slices)

    def slice(self, weight) -> Subspace:
        return self.slices[weight]

    def add_vector(self, weight, vec: LinComb) -> bool:
        return self.slices[weight].add_vector(vec)

    def dims(self) -> dict:
        return {w: s.dim for w, s in sorted(self.slices.items())}

    def total_dim(self) -> int:
        return sum(s.dim for s in self.slices.values())

    def min_weight(self):
        """Smallest weight with a nonzero slice, or None."""
        nonzero = [w for w, s in self.slices.items() if s.dim]
        return min(nonzero) if nonzero else None

    def contains(self, weight, vec: LinComb) -> bool:
        return self.slices[weight].contains(vec)

    def contained_in(self, other: "GradedSubspace"):
        """Slice-wise containment; returns (ok, weight, witness)."""
        for w in self.weights():
            ok, witness = self.slices[w].contained_in(other.slices[w])
            if not ok:
                return False, w, witness
        return True, None, None

    def equals(self, other: "GradedSubspace") -> bool:
        return all(
            self.slices[w].rows == other.slices[w].rows for w in self.slices
        )

    def quotient_dims(self, sub: "GradedSubspace") -> dict:
        """Per-weight dim(self/sub); raises with a witness if sub escapes."""
        ok, w, witness = sub.contained_in(self)
        if not ok:
            raise ValueError(
                "quotient by a non-subspace at weight %s; witness %r" % (w, witness)
            )
        return {
            w: self.slices[w].dim - sub.slices[w].dim for w in sorted(self.slices)
        }

    def basis_vectors(self) -> list:
        out = []
        for w in self.weights():
            out.extend(self.slices[w].basis_vectors())
        return out

    def __repr__(self) -> str:
        return "GradedSubspace(%s)" % self.dims()


def span_dimensions(
    labels_by_weight: dict, vectors: Iterable[LinComb], weight_of
) -> dict:
    """Dimension of the span of homogeneous vectors, sliced by weight.

    `weight_of` maps a label to its weight; every vector must be weight
    homogeneous.  Returns {weight: dim} including zero-dimensional slices
    for weights present in labels_by_weight.
    """
    spaces = {w: Subspace(labels) for w, labels in labels_by_weight.items()}
    for vec in vectors:
        if vec.is_zero():
            continue
        weights = {weight_of(label) for label, _ in vec}
        if len(weights) != 1:
            raise ValueError("span_dimensions needs homogeneous vectors")
        spaces[weights.pop()].add_vector(vec)
    return {w: space.dim for w, space in sorted(spaces.items())}
