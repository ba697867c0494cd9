"""Structure-constant tables: a generic finite-data backend and module.

A table file is a JSON document describing a graded algebra with a period-T
automorphism through explicit structure constants:

    {
      "period": 2,
      "cutoff": 3,
      "vacuum": "vac",
      "weights": {"vac": 0, "h": 1, ...},
      "sectors": {"vac": 0, "h": 1, ...},
      "products": [
        {"u": "h", "n": 1, "v": "h", "terms": [["vac", 1, 1]]},
        ...
      ]
    }

Coefficients are exact integer pairs [label, numerator, denominator].
Products absent from the table are zero; the vacuum acts implicitly as the
identity through its -1 mode.  Loading validates the data: conical weights,
grading and sector additivity of every entry, vacuum axioms, and the
commutator rule on every tabulated triple within the cutoff.

Twisted modules over a table backend reuse the same shape with rational
mode indices encoded as (base, sector) pairs and rational weights as "p/q"
strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Hashable

from .arith import rational_binomial
from .backend import VABackend
from .errors import TableValidationError
from .report import fraction_str
from .twisted import TwistedModule, _as_mode, _mode_coset
from .vectors import LinComb


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise TableValidationError(message)


def _parse_terms(raw, labels, where: str) -> LinComb:
    terms = {}
    for entry in raw:
        _require(
            isinstance(entry, (list, tuple)) and len(entry) == 3,
            "%s: term %r is not a [label, numerator, denominator] triple"
            % (where, entry),
        )
        label, num, den = entry
        _require(label in labels, "%s: unknown result label %r" % (where, label))
        _require(
            isinstance(num, int) and isinstance(den, int) and den != 0,
            "%s: non-integer coefficient pair %r/%r" % (where, num, den),
        )
        terms[label] = terms.get(label, Fraction(0)) + Fraction(num, den)
    return LinComb(terms)


class TableBackend(VABackend):
    """Backend whose products are read from a validated structure table."""

    def __init__(self, data: dict):
        self.period = data["period"]
        self.max_weight = data["cutoff"]
        self.vacuum_label = data["vacuum"]
        self._weights = {label: int(w) for label, w in data["weights"].items()}
        self._sectors = {label: int(s) for label, s in data["sectors"].items()}
        # basis order = insertion order of the weights mapping, per weight
        self._basis: dict[int, list[str]] = {}
        for label, w in self._weights.items():
            self._basis.setdefault(w, []).append(label)
        self._table: dict[tuple, LinComb] = {}
        for entry in data.get("products", []):
            where = "product (%r)_%r (%r)" % (entry["u"], entry["n"], entry["v"])
            key = (entry["u"], int(entry["n"]), entry["v"])
            _require(key not in self._table, "%s: duplicate entry" % where)
            self._table[key] = _parse_terms(entry["terms"], self._weights, where)

    def basis(self, weight: int) -> list[str]:
        return list(self._basis.get(weight, []))

    def weight(self, label: str) -> int:
        return self._weights[label]

    def sector(self, label: str) -> int:
        return self._sectors[label]

    def product_mode_label(self, u_label, n: int, v_label) -> LinComb:
        if u_label == self.vacuum_label:
            return LinComb.unit(v_label) if n == -1 else LinComb.zero()
        return self._table.get((u_label, n, v_label), LinComb.zero())


def load_table_backend(source) -> TableBackend:
    """Build and validate a backend from a dict, JSON text or file path."""
    data = _load_json(source)
    for field in ("period", "cutoff", "vacuum", "weights", "sectors"):
        _require(field in data, "missing field %r" % field)
    _require(
        isinstance(data["period"], int) and data["period"] >= 1,
        "period must be a positive integer",
    )
    _require(
        isinstance(data["cutoff"], int) and data["cutoff"] >= 0,
        "cutoff must be a nonnegative integer",
    )
    weights = data["weights"]
    sectors = data["sectors"]
    _require(set(weights) == set(sectors), "weights and sectors label different sets")
    vacuum = data["vacuum"]
    _require(vacuum in weights, "vacuum label %r is not declared" % vacuum)
    for label, w in weights.items():
        _require(
            isinstance(w, int) and 0 <= w <= data["cutoff"],
            "label %r has weight %r outside [0, cutoff]" % (label, w),
        )
        _require(
            isinstance(sectors[label], int) and 0 <= sectors[label] < data["period"],
            "label %r has sector %r outside [0, period)" % (label, sectors[label]),
        )
    zero_weight = [label for label, w in weights.items() if w == 0]
    _require(
        zero_weight == [vacuum],
        "weight-0 space must be spanned by the vacuum alone, got %r" % zero_weight,
    )
    _require(sectors[vacuum] == 0, "vacuum must lie in sector 0")

    backend = TableBackend(data)
    _validate_entries(backend)
    _validate_commutator(backend)
    return backend


def _load_json(source) -> dict:
    if isinstance(source, dict):
        return source
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return json.loads(source)
    with open(source, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _validate_entries(backend: TableBackend) -> None:
    for (u, n, v), result in backend._table.items():
        where = "product (%r)_%d (%r)" % (u, n, v)
        _require(u in backend._weights, "%s: unknown label %r" % (where, u))
        _require(v in backend._weights, "%s: unknown label %r" % (where, v))
        expected_weight = backend.weight(u) + backend.weight(v) - n - 1
        expected_sector = (backend.sector(u) + backend.sector(v)) % backend.period
        _require(
            result.is_zero() or expected_weight >= 0,
            "%s: nonzero product below weight 0" % where,
        )
        for label, _ in result:
            _require(
                backend.weight(label) == expected_weight,
                "%s: grading violation, term %r has weight %d, expected %d"
                % (where, label, backend.weight(label), expected_weight),
            )
            _require(
                backend.sector(label) == expected_sector,
                "%s: sector violation, term %r has sector %d, expected %d"
                % (where, label, backend.sector(label), expected_sector),
            )
        if u == backend.vacuum_label:
            expect = LinComb.unit(v) if n == -1 else LinComb.zero()
            _require(
                result == expect,
                "%s: vacuum axiom violation (identity acts only through mode -1)"
                % where,
            )
        if v == backend.vacuum_label:
            if n >= 0:
                _require(
                    result.is_zero(),
                    "%s: creation axiom violation (nonnegative mode on the vacuum)"
                    % where,
                )
            elif n == -1:
                _require(
                    result == LinComb.unit(u),
                    "%s: creation axiom violation (mode -1 on the vacuum must "
                    "return the element)" % where,
                )


def _validate_commutator(backend: TableBackend) -> None:
    """Check u_m v_n w - v_n u_m w = sum_i C(m,i) (u_i v)_{m+n-i} w on every
    tabulated triple whose intermediate weights stay within the cutoff."""
    cutoff = backend.max_weight
    labels = [l for w in range(cutoff + 1) for l in backend.basis(w)]
    for u in labels:
        for v in labels:
            for w in labels:
                wu, wv, ww = (backend.weight(x) for x in (u, v, w))
                if wu + wv - 1 > cutoff:
                    # some products u_i v escape the table; not verifiable
                    continue
                for m in range(-cutoff - 1, cutoff + 1):
                    for n in range(-cutoff - 1, cutoff + 1):
                        # both association orders must stay within the cutoff
                        if not (0 <= wu + wv + ww - m - n - 2 <= cutoff):
                            continue
                        if wv + ww - n - 1 > cutoff or wu + ww - m - 1 > cutoff:
                            continue
                        U, V, W = (LinComb.unit(x) for x in (u, v, w))
                        lhs = backend.product_mode(
                            U, m, backend.product_mode(V, n, W)
                        ) - backend.product_mode(V, n, backend.product_mode(U, m, W))
                        rhs = LinComb.zero()
                        for i in range(0, wu + wv):
                            prod = backend.product_mode(U, i, V)
                            if prod:
                                rhs = rhs + backend.product_mode(
                                    prod, m + n - i, W
                                ).scale(rational_binomial(m, i))
                        _require(
                            lhs == rhs,
                            "commutator rule fails on triple (%r, %r, %r) at "
                            "modes m=%d, n=%d" % (u, v, w, m, n),
                        )


def export_table(backend: VABackend, cutoff: int, label_str=None) -> dict:
    """Dump a backend's structure constants up to a weight cutoff."""
    if label_str is None:
        label_str = _default_label_str(backend)
    labels = [l for w in range(cutoff + 1) for l in backend.basis(w)]
    data = {
        "period": backend.period,
        "cutoff": cutoff,
        "vacuum": label_str(backend.vacuum_label),
        "weights": {label_str(l): backend.weight(l) for l in labels},
        "sectors": {label_str(l): backend.sector(l) for l in labels},
        "products": [],
    }
    for u in labels:
        if u == backend.vacuum_label:
            continue  # implicit identity action
        for v in labels:
            wu, wv = backend.weight(u), backend.weight(v)
            for n in range(wu + wv - 1, wu + wv - 2 - cutoff, -1):
                if not 0 <= wu + wv - n - 1 <= cutoff:
                    continue
                result = backend.product_mode_label(u, n, v)
                if result.is_zero():
                    continue
                data["products"].append(
                    {
                        "u": label_str(u),
                        "n": n,
                        "v": label_str(v),
                        "terms": [
                            [label_str(label), int(coeff.numerator), int(coeff.denominator)]
                            for label, coeff in result.sorted_terms()
                        ],
                    }
                )
    return data


def _default_label_str(backend: VABackend):
    def convert(label: Hashable) -> str:
        if label == backend.vacuum_label:
            return "vac"
        if isinstance(label, tuple):
            return ",".join(fraction_str(part) for part in label)
        return str(label)

    return convert


class TwistedTableModule(TwistedModule):
    """Twisted module whose mode actions are read from a table.

    The document shape mirrors the backend table, with rational weights as
    "p/q" strings and mode indices as [base, sector] pairs meaning
    base + sector/T:

        {
          "period": 2,
          "cutoff": "3/2",
          "vacuum": "w0",
          "weights": {"w0": "0", "w1": "1/2", ...},
          "actions": [
            {"u": "h", "mode": [-1, 1], "w": "w0", "terms": [["w1", 1, 1]]},
            ...
          ]
        }
    """

    def __init__(self, backend: VABackend, data: dict):
        self.backend = backend
        self.period = backend.period
        _require(
            data.get("period") == backend.period,
            "module table period %r does not match backend period %d"
            % (data.get("period"), backend.period),
        )
        self.max_weight = Fraction(data["cutoff"])
        self.vacuum_label = data["vacuum"]
        self._weights = {
            label: Fraction(w) for label, w in data["weights"].items()
        }
        _require(
            self.vacuum_label in self._weights,
            "module vacuum %r is not declared" % self.vacuum_label,
        )
        for label, w in self._weights.items():
            _require(
                w >= 0 and (w * self.period).denominator == 1,
                "module label %r has weight %s outside (1/%d)N"
                % (label, w, self.period),
            )
        self._basis: dict[Fraction, list[str]] = {}
        for label, w in self._weights.items():
            self._basis.setdefault(w, []).append(label)
        self._table: dict[tuple, LinComb] = {}
        for entry in data.get("actions", []):
            base, sector = entry["mode"]
            mode = Fraction(int(base)) + Fraction(int(sector), self.period)
            where = "action (%r)_%s (%r)" % (entry["u"], fraction_str(mode), entry["w"])
            _require(
                _mode_coset(mode, self.period) == backend.sector(entry["u"]),
                "%s: mode coset does not match the sector of %r"
                % (where, entry["u"]),
            )
            key = (entry["u"], mode, entry["w"])
            _require(key not in self._table, "%s: duplicate entry" % where)
            result = _parse_terms(entry["terms"], self._weights, where)
            expected = (
                backend.weight(entry["u"]) + self._weights[entry["w"]] - mode - 1
            )
            _require(
                result.is_zero() or expected >= 0,
                "%s: nonzero action below weight 0" % where,
            )
            for label, _ in result:
                _require(
                    self._weights[label] == expected,
                    "%s: grading violation, term %r has weight %s, expected %s"
                    % (where, label, fraction_str(self._weights[label]),
                       fraction_str(expected)),
                )
            self._table[key] = result

    def basis(self, weight) -> list[str]:
        return list(self._basis.get(Fraction(weight), []))

    def weight(self, label: str) -> Fraction:
        return self._weights[label]

    def module_mode_label(self, u_label, m, w_label) -> LinComb:
        m = _as_mode(m, self.period)
        if u_label == self.backend.vacuum_label:
            return LinComb.unit(w_label) if m == -1 else LinComb.zero()
        return self._table.get((u_label, m, w_label), LinComb.zero())


def export_module_table(
    module: TwistedModule,
    cutoff: Fraction,
    algebra_cutoff: int | None = None,
    label_str=None,
    module_label_str=None,
) -> dict:
    """Dump a twisted module's mode actions up to a weight cutoff.

    `cutoff` bounds module weights (inputs and results); `algebra_cutoff`
    bounds the weight of acting algebra elements and defaults to the module
    cutoff rounded down.
    """
    backend = module.backend
    T = module.period
    if label_str is None:
        label_str = _default_label_str(backend)
    if module_label_str is None:
        module_label_str = _default_module_label_str(module)
    cutoff = Fraction(cutoff)
    if algebra_cutoff is None:
        algebra_cutoff = int(cutoff)
    v_labels = [l for w in range(algebra_cutoff + 1) for l in backend.basis(w)]
    grid = [Fraction(i, T) for i in range(int(cutoff * T) + 1)]
    w_labels = [l for w in grid for l in module.basis(w)]
    data = {
        "period": T,
        "cutoff": fraction_str(cutoff),
        "vacuum": module_label_str(module.vacuum_label),
        "weights": {
            module_label_str(l): fraction_str(module.weight(l)) for l in w_labels
        },
        "actions": [],
    }
    for u in v_labels:
        if u == backend.vacuum_label:
            continue
        r = backend.sector(u)
        for w in w_labels:
            # modes with result weight in [0, cutoff]: b + r/T in [lo, hi]
            hi = backend.weight(u) + module.weight(w) - 1 - Fraction(r, T)
            lo = hi - cutoff
            if hi.denominator != 1:
                continue  # coset never meets the grading grid
            for b in range(int(hi), int(hi) - int(hi - lo) - 1, -1):
                if b < lo:
                    continue
                mode = b + Fraction(r, T)
                result = module.module_mode_label(u, mode, w)
                if result.is_zero():
                    continue
                data["actions"].append(
                    {
                        "u": label_str(u),
                        "mode": [b, r],
                        "w": module_label_str(w),
                        "terms": [
                            [module_label_str(label), int(c.numerator), int(c.denominator)]
                            for label, c in result.sorted_terms()
                        ],
                    }
                )
    return data


def _default_module_label_str(module: TwistedModule):
    def convert(label: Hashable) -> str:
        if label == module.vacuum_label:
            return "vac"
        if isinstance(label, tuple):
            return ",".join(fraction_str(part) for part in label)
        return str(label)

    return convert


def trivial_backend_data(period: int = 1) -> dict:
    """The one-dimensional commutative algebra V = C1 as a table."""
    return {
        "period": period,
        "cutoff": 0,
        "vacuum": "vac",
        "weights": {"vac": 0},
        "sectors": {"vac": 0},
        "products": [],
    }


def trivial_module_data(weights, period: int = 1) -> dict:
    """A module over V = C1 with the given weight multiset; the identity is
    the only action, so no explicit entries are needed."""
    weights = [Fraction(w) for w in weights]
    if Fraction(0) not in weights:
        weights = [Fraction(0)] + weights
    labels = {"w%d" % i: w for i, w in enumerate(sorted(weights))}
    return {
        "period": period,
        "cutoff": fraction_str(max(weights)),
        "vacuum": "w0",
        "weights": {label: fraction_str(w) for label, w in labels.items()},
        "actions": [],
    }
