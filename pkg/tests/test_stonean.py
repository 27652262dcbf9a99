"""Stone equation, equivalence battery, bottom adjunction, decomposition."""

import numpy as np
import pytest

from stonean_lab import fixtures
from stonean_lab.core import (
    boolean_skeleton,
    dense_elements,
    is_directly_indecomposable,
    product_algebra,
    validate,
)
from stonean_lab.errors import ContractError, PreconditionError
from stonean_lab.filters import FilterSet, I_FILTER, generate_ifilter, mask_of
from stonean_lab.homs import are_isomorphic, is_hom
from stonean_lab.stonean import (
    adjoin_bottom,
    boolean_retraction_check,
    decompose,
    is_stonean,
    lift_hom,
    squotient_iso_check,
    stone_witness,
    stonean_equivalence_battery,
    weak_distributivity_check,
)


def test_is_stonean(g3, l3, b4):
    assert is_stonean(g3)
    assert not is_stonean(l3)
    assert stone_witness(l3) == 1
    assert is_stonean(b4)


def test_equivalence_battery(g3, l3, b2):
    assert stonean_equivalence_battery(g3).values == (True, True, True)
    batt = stonean_equivalence_battery(l3)
    assert batt.values == (False, False, False)
    # every condition fails first at the involutive midpoint a
    assert batt.witnesses == ((1,), (1,), (1,))
    assert stonean_equivalence_battery(b2).values == (True, True, True)


def test_battery_agrees_on_corpus(corpus5):
    for alg in corpus5:
        batt = stonean_equivalence_battery(alg)  # raises on disagreement
        assert batt.values[0] == is_stonean(alg)


def test_adjoin_bottom(h2, h2xh2, trivial, g3, b2):
    sh2 = adjoin_bottom(h2)
    assert are_isomorphic(sh2, g3) is not None
    assert are_isomorphic(adjoin_bottom(trivial), b2) is not None
    s22 = adjoin_bottom(h2xh2)
    assert s22.size == 5
    assert is_stonean(s22)
    assert is_directly_indecomposable(s22)


def test_adjoin_bottom_dense_part_is_image():
    for alg in (fixtures.h2(), fixtures.h3(), fixtures.h2xh2(), fixtures.g3()):
        s = adjoin_bottom(alg)
        assert validate(s).ok
        assert dense_elements(s).elements == tuple(range(1, alg.size + 1))


def test_lift_hom(h2, h2xh2, trivial):
    ident = lift_hom(h2, h2, np.arange(2))
    assert list(ident) == [0, 1, 2]

    collapse = lift_hom(h2, trivial, np.zeros(2, dtype=int))
    sh2 = adjoin_bottom(h2)
    striv = adjoin_bottom(trivial)
    assert is_hom(sh2, striv, collapse, bounded=True)
    assert list(collapse) == [0, 1, 1]

    proj = lift_hom(h2xh2, h2, np.array([0, 0, 1, 1]))  # first coordinate
    assert is_hom(adjoin_bottom(h2xh2), sh2, proj, bounded=True)
    with pytest.raises(ContractError):
        lift_hom(h2, h2, np.array([1, 0]))  # not a hom


def test_decompose_examples(g3, b4):
    assert decompose(g3, 1) == (2, 1)
    assert decompose(g3, 0) == (0, 2)
    assert decompose(b4, 1) == (1, 3)


def test_decompose_requires_stonean(l3):
    with pytest.raises(PreconditionError):
        decompose(l3, 1)


def test_decompose_is_bijection_onto_filter_pairs(stonean5):
    from stonean_lab.triples import functor_T_object

    for alg in stonean5:
        t = functor_T_object(alg)
        b_pos = {int(e): i for i, e in enumerate(t.b_embedding)}
        d_pos = {int(e): i for i, e in enumerate(t.d_embedding)}
        pairs = set()
        for x in range(alg.size):
            b, d = decompose(alg, x)
            bl, dl = b_pos[b], d_pos[d]
            assert dl in t.phi[bl]
            assert alg.meet[b, d] == x
            pairs.add((bl, dl))
        expected = {
            (bl, dl)
            for bl in range(t.B.size)
            for dl in range(t.D.size)
            if dl in t.phi[bl]
        }
        assert pairs == expected


def test_non_stonean_has_unfactorable_element(l3):
    # contrapositive of: pointwise Boolean*dense factorization forces Stonean
    skel = boolean_skeleton(l3).elements
    dense = dense_elements(l3).elements
    products = {int(l3.mult[b, d]) for b in skel for d in dense}
    assert 1 not in products


def test_weak_distributivity(g3, b4, h2xh2):
    assert weak_distributivity_check(g3).ok
    assert weak_distributivity_check(b4).ok
    assert weak_distributivity_check(adjoin_bottom(h2xh2)).ok


def test_squotient_iso(h2, h2xh2):
    assert squotient_iso_check(h2, generate_ifilter(h2, []))
    assert squotient_iso_check(h2, generate_ifilter(h2, [0]))
    coord = FilterSet(h2xh2, mask_of([2, 3]), I_FILTER)
    assert squotient_iso_check(h2xh2, coord)


def test_boolean_retraction(g3, b2, b4):
    rep = boolean_retraction_check(g3)
    assert rep.ok and rep.notes == ("qualifying=1",)
    assert boolean_retraction_check(b2).notes == ("qualifying=1",)
    assert boolean_retraction_check(b4).notes == ("qualifying=1",)


def test_boolean_retraction_cap():
    big = product_algebra([fixtures.g3(), fixtures.g3()])  # 9 elements
    rep = boolean_retraction_check(big)
    assert rep.ok
    assert any("skipped" in note for note in rep.notes)
