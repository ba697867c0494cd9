import json
from fractions import Fraction

import pytest

from twistfilt.errors import TableValidationError
from twistfilt.tables import (
    TwistedTableModule,
    export_module_table,
    export_table,
    load_table_backend,
    trivial_backend_data,
    trivial_module_data,
)
from twistfilt.vectors import LinComb


@pytest.fixture(scope="module")
def heis_table(backend_t2):
    return export_table(backend_t2, 3)


def test_trivial_backend_loads():
    bk = load_table_backend(trivial_backend_data())
    assert bk.basis(0) == ["vac"]
    assert bk.product_mode(bk.vacuum(), -1, bk.vacuum()) == bk.vacuum()


def test_trivial_module_loads():
    bk = load_table_backend(trivial_backend_data(period=2))
    mod = TwistedTableModule(bk, trivial_module_data([0, 1, 2], period=2))
    assert mod.basis(Fraction(0)) == ["w0"]
    assert mod.module_mode(bk.vacuum(), -1, mod.vacuum()) == mod.vacuum()


def test_export_reload_roundtrip(backend_t2, heis_table):
    reloaded = load_table_backend(json.dumps(heis_table))
    convert = {}
    for w in range(0, 4):
        for label, name in zip(backend_t2.basis(w), reloaded.basis(w)):
            convert[label] = name
    for w in range(0, 4):
        assert [convert[l] for l in backend_t2.basis(w)] == reloaded.basis(w)
    for wu in (1, 2, 3):
        for u in backend_t2.basis(wu):
            for wv in range(0, 4):
                for v in backend_t2.basis(wv):
                    for n in range(wu + wv - 1, wu + wv - 5, -1):
                        if not 0 <= wu + wv - n - 1 <= 3:
                            continue
                        want = backend_t2.product_mode_label(u, n, v)
                        got = reloaded.product_mode_label(
                            convert[u], n, convert[v]
                        )
                        translated = LinComb(
                            {convert[l]: c for l, c in want}
                        )
                        assert got == translated, (u, n, v)


def test_corrupted_coefficient_is_rejected(heis_table):
    bad = json.loads(json.dumps(heis_table))
    for row in bad["products"]:
        if row["u"] != "vac" and row["terms"] and row["n"] >= 0:
            row["terms"][0][1] *= 3
            where = (row["u"], row["n"], row["v"])
            break
    with pytest.raises(TableValidationError) as err:
        load_table_backend(bad)
    assert "commutator" in str(err.value) or "axiom" in str(err.value)


def test_vacuum_axiom_corruption_is_rejected(heis_table):
    bad = json.loads(json.dumps(heis_table))
    bad["products"].append(
        {"u": "vac", "n": 0, "v": "1", "terms": [["1", 1, 1]]}
    )
    with pytest.raises(TableValidationError):
        load_table_backend(bad)


def test_grading_violation_is_rejected(heis_table):
    bad = json.loads(json.dumps(heis_table))
    for row in bad["products"]:
        if row["terms"]:
            row["n"] += 1  # result weight no longer matches the terms
            break
    with pytest.raises(TableValidationError):
        load_table_backend(bad)


def test_module_table_roundtrip(module_t2):
    table = export_module_table(module_t2, Fraction(5, 2))
    bk_table = export_table(module_t2.backend, 2)
    bk = load_table_backend(bk_table)
    mod = TwistedTableModule(bk, table)
    # compare all tabulated actions against the generating module
    grid = [Fraction(i, 2) for i in range(0, 6)]
    name_v = {}
    for w in range(0, 3):
        for label, name in zip(module_t2.backend.basis(w), bk.basis(w)):
            name_v[label] = name
    name_w = {}
    for w in grid:
        for label, name in zip(module_t2.basis(w), mod.basis(w)):
            name_w[label] = name
    checked = 0
    for wu in (1, 2):
        for u in module_t2.backend.basis(wu):
            r = module_t2.backend.sector(u)
            for ww in grid:
                for w_label in module_t2.basis(ww):
                    hi = wu + ww - 1 - Fraction(r, 2)
                    if hi.denominator != 1:
                        continue
                    for b in range(int(hi), int(hi) - 4, -1):
                        mode = b + Fraction(r, 2)
                        result_weight = wu + ww - mode - 1
                        if not 0 <= result_weight <= Fraction(5, 2):
                            continue
                        want = module_t2.module_mode_label(u, mode, w_label)
                        got = mod.module_mode_label(
                            name_v[u], mode, name_w[w_label]
                        )
                        assert got == LinComb(
                            {name_w[l]: c for l, c in want}
                        ), (u, mode, w_label)
                        checked += 1
    assert checked > 40


def test_module_table_rejects_off_grid_weight():
    bk = load_table_backend(trivial_backend_data(period=1))
    with pytest.raises(TableValidationError):
        TwistedTableModule(bk, trivial_module_data([Fraction(1, 2)], period=1))
