"""Acceptance gate: the eleven headline properties, checked exactly.

Each test prints a single PASS/FAIL line (run pytest with -s or look at
captured output) and asserts with zero tolerance.
"""

import json
from fractions import Fraction

import pytest

from twistfilt.arith import half_partitions
from twistfilt.cli import main
from twistfilt.filtration import (
    algebra_depth_filtration,
    algebra_single_mode_span,
    module_depth_filtration,
    module_single_mode_span,
)
from twistfilt.grstruct import (
    GrAlgebra,
    GrModule,
    ZhuPoisson,
    check_generating_spanning,
    check_twisted_vpa_module_axioms,
    check_vpa_axioms,
)
from twistfilt.twisted import (
    check_iterate_consistency,
    check_twisted_commutator,
)
from twistfilt.vectors import LinComb

HALF = Fraction(1, 2)


def _verdict(name, ok):
    print("[%s] %s" % ("PASS" if ok else "FAIL", name))
    assert ok, name


def test_criterion_01_twisted_fock_graded_dimensions(module_t2):
    want = [1, 1, 1, 2, 2, 3, 4, 5, 6, 8]
    got = [len(module_t2.basis(Fraction(i, 2))) for i in range(10)]
    parts = [Fraction(2 * k - 1, 2) for k in range(1, 10)]
    oracle = [len(half_partitions(Fraction(i, 2), parts)) for i in range(10)]
    _verdict(
        "criterion-01 twisted Fock graded dimensions",
        got == want and oracle == want,
    )


def test_criterion_02_first_depth_level_equals_depth2_span(module_t2):
    cut = Fraction(9, 2)
    EW = module_depth_filtration(module_t2, cut)
    C2 = module_single_mode_span(module_t2, 2, cut)
    _verdict(
        "criterion-02 E_1(W) = C_2(W) slice-by-slice up to 9/2",
        EW.at(1).equals(C2),
    )


def test_criterion_03_algebra_block_identities(backend_t2):
    EV = algebra_depth_filtration(backend_t2, 6)
    C2 = algebra_single_mode_span(backend_t2, 2, 6)
    C3 = algebra_single_mode_span(backend_t2, 3, 6)
    ok = (
        EV.at(1).equals(C2)
        and EV.at(2).equals(C2)
        and EV.at(3).equals(C3)
        and EV.at(4).equals(C3)
    )
    _verdict("criterion-03 E_1=E_2=C_2(V) and E_3=E_4=C_3(V) up to weight 6", ok)


def test_criterion_04_containments_with_index_bounds(
    relations_report_t2, module_t2
):
    section = relations_report_t2.section
    T = 2
    cut = Fraction(9, 2)
    by_name = {o.name: o for o in section.outcomes}
    ok = True
    # inclusion (a): C_n inside E_{(n-2)T+1} for n = 2..5 (n=5 recomputed)
    for n in (2, 3, 4):
        ok = ok and by_name["single-mode-in-depth[n=%d]" % n].passed
    EW = module_depth_filtration(module_t2, cut)
    C5 = module_single_mode_span(module_t2, 5, cut)
    contained, _, _ = C5.contained_in(EW.at((5 - 2) * T + 1))
    ok = ok and contained
    # inclusion (b): E_m inside C_n at the stated bounds m = 6 (n=3) and
    # m = 24 (n=4), and the empirical minimal m never exceeds the bound
    ok = ok and by_name["depth-in-single-mode[n=3,m=6]"].passed
    ok = ok and by_name["depth-in-single-mode[n=4,m=24]"].passed
    certs = {
        c["n"]: c
        for c in section.certificates
        if c.get("check") == "depth-in-single-mode"
    }
    for n in (3, 4):
        bound = min(
            certs[n]["bound_small_exponent"], certs[n]["bound_large_exponent"]
        )
        ok = ok and certs[n]["empirical_min_m"] is not None
        ok = ok and certs[n]["empirical_min_m"] <= bound
    _verdict("criterion-04 containments with index bounds", ok)


def test_criterion_05_weight_bounds(relations_report_t2):
    section = relations_report_t2.section
    ok = all(
        o.passed
        for o in section.outcomes
        if o.name.startswith("module-depth-weight-bound")
        or o.name.startswith("single-mode-weight-bound")
    )
    _verdict("criterion-05 weight lower bounds", ok)


def test_criterion_06_mode_calculus_regression(module_t2):
    bk = module_t2.backend
    us = [l for w in (1, 2, 3) for l in bk.basis(w)]
    ws = [
        l
        for w in [Fraction(i, 2) for i in range(0, 7)]
        for l in module_t2.basis(w)
    ]
    ok = True
    for u_label in us:
        for v_label in us:
            sector = (bk.sector(u_label) + bk.sector(v_label)) % 2
            for w_label in ws:
                for m in range(-3, 4):
                    for n in range(-3, 4):
                        outcome = check_twisted_commutator(
                            module_t2,
                            LinComb.unit(u_label),
                            m,
                            LinComb.unit(v_label),
                            n,
                            LinComb.unit(w_label),
                        )
                        ok = ok and outcome.passed
                        mode = n + Fraction(sector, 2)
                        outcome = check_iterate_consistency(
                            module_t2,
                            LinComb.unit(u_label),
                            m,
                            LinComb.unit(v_label),
                            mode,
                            LinComb.unit(w_label),
                        )
                        ok = ok and outcome.passed
                if not ok:
                    break
    _verdict("criterion-06 mode calculus regression over the full grid", ok)


def test_criterion_07_graded_axiom_suites(backend_t2, module_t2):
    gr = GrAlgebra(backend_t2, 3)
    grw = GrModule(module_t2, Fraction(7, 2), algebra=GrAlgebra(backend_t2, 4))
    ok = (
        check_vpa_axioms(gr, max_weight=Fraction(7, 2)).all_passed
        and check_twisted_vpa_module_axioms(
            grw, max_weight=Fraction(7, 2)
        ).all_passed
    )
    _verdict("criterion-07 graded axiom suites up to weight 7/2", ok)


def test_criterion_08_quotient_poisson_algebra(backend_t2):
    zp = ZhuPoisson(backend_t2, 6)
    dims_ok = list(zp.quotient_dims().values()) == [1] * 7
    _verdict(
        "criterion-08 quotient Poisson algebra",
        dims_ok and zp.check_axioms().all_passed,
    )


def test_criterion_09_ordered_spanning(module_t2):
    section = check_generating_spanning(module_t2, Fraction(7, 2))
    _verdict("criterion-09 ordered generating-set spanning", section.all_passed)


def test_criterion_10_period_one_degeneration(backend_t1, module_t1):
    from twistfilt.filtration import verify_relations

    report = verify_relations(module_t1, n_max=4, cutoff=Fraction(5))
    gr = GrAlgebra(backend_t1, 4)
    ok = (
        report.all_passed
        and check_vpa_axioms(gr).all_passed
        and ZhuPoisson(backend_t1, 5).check_axioms().all_passed
    )
    _verdict("criterion-10 period-1 degeneration", ok)


def test_criterion_11_deterministic_reports(tmp_path):
    args = [
        "check",
        "--suite",
        "all",
        "--backend",
        "heisenberg-T2",
        "--cutoff",
        "7/2",
        "--n-max",
        "3",
    ]
    out1 = tmp_path / "one.json"
    out2 = tmp_path / "two.json"
    code1 = main(args + ["--jobs", "1", "--out", str(out1)])
    code2 = main(args + ["--jobs", "8", "--out", str(out2)])
    identical = out1.read_bytes() == out2.read_bytes()
    _verdict(
        "criterion-11 byte-identical reports across parallelism",
        code1 == 0 and code2 == 0 and identical,
    )
