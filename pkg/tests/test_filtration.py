from fractions import Fraction

import pytest

from twistfilt.errors import InsufficientCutoffError
from twistfilt.filtration import (
    algebra_depth_filtration,
    algebra_single_mode_span,
    check_small_lemmas,
    cofiniteness_report,
    module_depth_filtration,
    module_single_mode_span,
    verify_relations,
)

HALF = Fraction(1, 2)
CUT = Fraction(9, 2)


def test_module_depth_filtration_dims(module_t2):
    EW = module_depth_filtration(module_t2, CUT)
    assert list(EW.full.dims().values()) == [1, 1, 1, 2, 2, 3, 4, 5, 6, 8]
    assert list(EW.dims(1).values()) == [0, 0, 0, 1, 1, 2, 3, 4, 5, 7]
    assert list(EW.dims(2).values()) == [0, 0, 0, 0, 0, 1, 2, 3, 4, 6]
    # the unreduced enumeration spans the same family
    unreduced = module_depth_filtration(module_t2, CUT, reduced=False)
    for n in range(1, 5):
        assert EW.at(n).equals(unreduced.at(n)), n


def test_algebra_depth_filtration_periodicity(backend_t2):
    EV = algebra_depth_filtration(backend_t2, 6)
    C2 = algebra_single_mode_span(backend_t2, 2, 6)
    C3 = algebra_single_mode_span(backend_t2, 3, 6)
    assert EV.at(1).equals(EV.at(2))
    assert EV.at(3).equals(EV.at(4))
    assert EV.at(1).equals(C2)
    assert EV.at(3).equals(C3)
    assert not EV.at(2).equals(EV.at(3))


def test_single_mode_span_first_slice(module_t2):
    C2 = module_single_mode_span(module_t2, 2, CUT)
    assert C2.slice(Fraction(3, 2)).dim == 1
    assert C2.min_weight() == Fraction(3, 2)
    EW = module_depth_filtration(module_t2, CUT)
    assert EW.at(1).equals(C2)


def test_verify_relations_all_pass(relations_report_t2):
    failures = relations_report_t2.section.failures()
    assert not failures, [f.name for f in failures]
    assert relations_report_t2.all_passed


def test_verify_relations_reports_minimal_containment_index(relations_report_t2):
    certs = {
        c["n"]: c
        for c in relations_report_t2.section.certificates
        if c.get("check") == "depth-in-single-mode"
    }
    assert certs[2]["empirical_min_m"] == 1
    for n in (3, 4):
        assert (
            certs[n]["empirical_min_m"]
            <= certs[n]["bound_small_exponent"]
            <= certs[n]["bound_large_exponent"]
        )


def test_verify_relations_weight_bounds(module_t2):
    EW = module_depth_filtration(module_t2, CUT)
    T = 2
    for n in range(1, 8):
        mw = EW.at(n).min_weight()
        if mw is not None:
            assert mw >= Fraction(n, T)
    for n in (2, 3, 4, 5):
        mw = module_single_mode_span(module_t2, n, CUT).min_weight()
        if mw is not None:
            assert mw >= n - Fraction(2 * T - 1, T)


def test_dropped_vector_breaks_containment(module_t2):
    # removing one vector from C_2 must break E_1 <= C_2 with a witness
    C2 = module_single_mode_span(module_t2, 2, CUT)
    EW = module_depth_filtration(module_t2, CUT)
    w = Fraction(3, 2)
    damaged = module_single_mode_span(module_t2, 2, CUT)
    damaged.slices[w].rows.clear()
    damaged.slices[w].pivots.clear()
    ok, weight, witness = EW.at(1).contained_in(damaged)
    assert not ok and weight == w and witness is not None
    ok, _, _ = EW.at(1).contained_in(C2)
    assert ok


def test_cofiniteness_quotients(module_t2):
    report = cofiniteness_report(module_t2, 4, CUT)
    # one-dimensional quotient per weight for the depth-2 subspace
    assert [row["dim"] for row in report["quotients"][2]] == [1] * 10
    statuses = {row["status"] for rows in report["quotients"].values() for row in rows}
    assert statuses <= {"complete", "truncated"}


def test_cofiniteness_requires_enough_cutoff(module_t2):
    with pytest.raises(InsufficientCutoffError):
        cofiniteness_report(module_t2, 9, Fraction(3, 2))


def test_small_lemmas(module_t2):
    section = check_small_lemmas(module_t2, Fraction(11, 2))
    failures = section.failures()
    assert not failures, [f.name for f in failures]
    names = [o.name for o in section.outcomes]
    assert any(n.startswith("depth2-product-membership[s=3") for n in names)
    assert any(n.startswith("depth2-product-on-C2") for n in names)


def test_period_one_relations(module_t1):
    report = verify_relations(module_t1, n_max=4, cutoff=Fraction(5))
    failures = report.section.failures()
    assert not failures, [f.name for f in failures]
    quotients = cofiniteness_report(module_t1, 2, Fraction(5))
    assert [row["dim"] for row in quotients["quotients"][2]] == [1] * 6
