from fractions import Fraction

import pytest

from twistfilt.arith import half_partitions
from twistfilt.errors import SectorMismatchError
from twistfilt.twisted import (
    check_iterate_consistency,
    check_translation_compat,
    check_twisted_commutator,
)
from twistfilt.vectors import LinComb

HALF = Fraction(1, 2)


def _labels(backend, weights):
    return [l for w in weights for l in backend.basis(w)]


def _module_labels(module, weights):
    return [l for w in weights for l in module.basis(w)]


def test_twisted_fock_dims_match_half_partition_oracle(module_t2):
    parts = [Fraction(2 * k - 1, 2) for k in range(1, 10)]
    for i in range(0, 10):
        w = Fraction(i, 2)
        assert len(module_t2.basis(w)) == len(half_partitions(w, parts))


def test_oscillator_relations(module_t2):
    h = module_t2.backend.generator()
    vac = module_t2.vacuum()
    created = module_t2.module_mode(h, Fraction(-1, 2), vac)
    assert created == LinComb.unit((HALF,))
    # [h_mu, h_nu] = mu delta_{mu+nu,0}: contraction returns mu * vacuum
    back = module_t2.module_mode(h, Fraction(1, 2), created)
    assert back == vac.scale(HALF)
    assert module_t2.module_mode(h, Fraction(3, 2), created).is_zero()


def test_mode_coset_enforced(module_t2):
    h = module_t2.backend.generator()
    vac = module_t2.vacuum()
    with pytest.raises(SectorMismatchError):
        module_t2.module_mode(h, -1, vac)  # integer mode, odd sector
    assert module_t2.module_mode(h, -1, vac, strict=False).is_zero()


def test_annihilation_depth_examples(module_t2):
    bk = module_t2.backend
    h = bk.generator()
    vac = module_t2.vacuum()
    assert module_t2.annihilation_depth(h, vac) == 1
    deep = LinComb.unit((HALF,))
    assert module_t2.annihilation_depth(h, deep) == 2
    assert module_t2.annihilation_depth(bk.vacuum(), deep) == 0


def test_twisted_commutator_grid(module_t2):
    bk = module_t2.backend
    us = _labels(bk, (1, 2))
    ws = _module_labels(module_t2, [Fraction(i, 2) for i in range(0, 5)])
    for u_label in us:
        for v_label in us:
            for w_label in ws:
                for m in range(-2, 2):
                    for n in range(-2, 2):
                        outcome = check_twisted_commutator(
                            module_t2,
                            LinComb.unit(u_label),
                            m,
                            LinComb.unit(v_label),
                            n,
                            LinComb.unit(w_label),
                        )
                        assert outcome.passed, (
                            u_label, v_label, w_label, outcome.witness
                        )


def test_translation_compatibility(module_t2):
    bk = module_t2.backend
    for u_label in _labels(bk, (1, 2, 3)):
        for w_label in _module_labels(
            module_t2, [Fraction(i, 2) for i in range(0, 5)]
        ):
            for n in range(-1, 3):
                outcome = check_translation_compat(
                    module_t2, LinComb.unit(u_label), n, LinComb.unit(w_label)
                )
                assert outcome.passed, (u_label, n, w_label, outcome.witness)


def test_iterate_consistency_three_ways(module_t2):
    bk = module_t2.backend
    us = _labels(bk, (1, 2))
    vs = _labels(bk, (1, 2))
    ws = _module_labels(module_t2, [Fraction(i, 2) for i in range(0, 4)])
    for u_label in us:
        for v_label in vs:
            sector = (bk.sector(u_label) + bk.sector(v_label)) % 2
            for w_label in ws:
                for m in range(-2, 1):
                    for base in range(-2, 2):
                        n = base + Fraction(sector, 2)
                        outcome = check_iterate_consistency(
                            module_t2,
                            LinComb.unit(u_label),
                            m,
                            LinComb.unit(v_label),
                            n,
                            LinComb.unit(w_label),
                        )
                        assert outcome.passed, (
                            u_label, m, v_label, n, w_label, outcome.witness
                        )


def test_iterate_value_independent_of_depth_and_spread(module_t2):
    bk = module_t2.backend
    h = bk.generator()
    hh = LinComb.unit((1, 1))
    for w_label in _module_labels(module_t2, [0, HALF, 1]):
        w = LinComb.unit(w_label)
        for m in (-2, -1):
            for base in (-1, 0, 1):
                n = base + Fraction(bk.sector((1, 1)) + 1, 2)
                reference = module_t2.iterate_mode(h, m, hh, n, w)
                depth = module_t2.annihilation_depth(h, w)
                for extra_depth, extra_spread in ((1, 0), (0, 1), (2, 3)):
                    top = bk.top_product_index(h, hh)
                    # a valid spread k needs u_{m+k+j} v = 0 for all j >= 0,
                    # i.e. k >= top + 1 - m
                    spread = (0 if top is None else top + 1) - m + extra_spread
                    got = module_t2.iterate_mode(
                        h, m, hh, n, w,
                        depth=depth + extra_depth,
                        spread=spread,
                    )
                    assert got == reference


def test_period_one_module_is_the_adjoint_module(module_t1):
    bk = module_t1.backend
    labels = [l for w in range(0, 4) for l in bk.basis(w)]
    for u_label in labels:
        u = LinComb.unit(u_label)
        for v_label in labels:
            v = LinComb.unit(v_label)
            for n in range(-3, 3):
                assert module_t1.module_mode(u, n, v) == bk.product_mode(u, n, v)


def test_grading_of_module_action(module_t2):
    bk = module_t2.backend
    for u_label in _labels(bk, (1, 2)):
        r = bk.sector(u_label)
        for w_label in _module_labels(module_t2, [0, HALF, 1, Fraction(3, 2)]):
            for base in range(-3, 3):
                mode = base + Fraction(r, 2)
                out = module_t2.module_mode(
                    LinComb.unit(u_label), mode, LinComb.unit(w_label)
                )
                if out.is_zero():
                    continue
                expected = (
                    bk.weight(u_label)
                    + module_t2.weight(w_label)
                    - mode
                    - 1
                )
                assert module_t2.element_weight(out) == expected
