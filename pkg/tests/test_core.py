"""Core algebra representation, validation and the basic queries."""

import pytest

from stonean_lab import fixtures
from stonean_lab.core import (
    FiniteAlgebra,
    algebras_equal,
    boolean_skeleton,
    dense_elements,
    decode_product_index,
    encode_product_index,
    identity_battery,
    is_boolean_algebra,
    is_directly_indecomposable,
    is_distributive_lattice,
    leq,
    neg,
    product_algebra,
    validate,
)
from stonean_lab.errors import (
    MalformedAlgebraError,
    PreconditionError,
    UnsupportedOperationError,
)
from stonean_lab.stonean import adjoin_bottom


def test_validate_fixtures_ok():
    for name, alg in fixtures.all_fixtures().items():
        rep = validate(alg)
        assert rep.ok, (name, rep.violations)


def test_validate_detects_broken_integrality(g3):
    bad = g3.mult.copy()
    bad[1, 1] = 2  # a * a = top
    alg = FiniteAlgebra(
        name="G3bad",
        size=3,
        element_names=g3.element_names,
        meet=g3.meet,
        join=g3.join,
        mult=bad,
        res=g3.res,
        top=2,
        bottom=0,
    )
    rep = validate(alg)
    assert not rep.ok
    laws = dict(rep.violations)
    assert laws["integrality"] == (1, 1)
    assert "residuation" in laws


def test_structural_errors_are_not_law_violations(g3):
    with pytest.raises(MalformedAlgebraError):
        FiniteAlgebra(
            name="broken",
            size=3,
            element_names=("a", "b", "c"),
            meet=[[0, 0], [0, 1]],  # wrong shape
            join=g3.join,
            mult=g3.mult,
            res=g3.res,
            top=2,
            bottom=0,
        )
    with pytest.raises(MalformedAlgebraError):
        FiniteAlgebra(
            name="broken",
            size=3,
            element_names=("a", "b", "c"),
            meet=[[0, 0, 0], [0, 1, 1], [0, 1, 7]],  # out of range
            join=g3.join,
            mult=g3.mult,
            res=g3.res,
            top=2,
            bottom=0,
        )
    with pytest.raises(MalformedAlgebraError):
        FiniteAlgebra(
            name="broken",
            size=2,
            element_names=("x", "x"),  # duplicate names
            meet=[[0, 0], [0, 1]],
            join=[[0, 1], [1, 1]],
            mult=[[0, 0], [0, 1]],
            res=[[1, 1], [0, 1]],
            top=1,
            bottom=0,
        )


def test_leq(g3):
    assert leq(g3, 0, 1)
    assert not leq(g3, 1, 0)
    assert leq(g3, 1, 1)
    with pytest.raises(MalformedAlgebraError):
        leq(g3, 0, 7)


def test_leq_agrees_with_residual(g3, l3, b4):
    for alg in (g3, l3, b4):
        for x in range(alg.size):
            for y in range(alg.size):
                assert leq(alg, x, y) == (alg.res[x, y] == alg.top)


def test_neg(g3, l3, h2):
    assert neg(g3, 1) == 0
    assert neg(g3, 0) == 2
    assert neg(l3, 1) == 1  # involutive point of the three-element MV chain
    with pytest.raises(UnsupportedOperationError):
        neg(h2, 0)


def test_boolean_skeleton(g3, b4, l3):
    assert boolean_skeleton(g3).elements == (0, 2)
    assert boolean_skeleton(b4).elements == (0, 1, 2, 3)
    assert boolean_skeleton(l3).elements == (0, 2)
    sub = boolean_skeleton(g3)
    assert is_boolean_algebra(sub.algebra)
    assert list(sub.embedding) == [0, 2]


def test_dense_elements(g3, b4, h2):
    assert dense_elements(g3).elements == (1, 2)
    assert dense_elements(b4).elements == (3,)
    # the dense part of S(A) is exactly the image of A
    sh2 = adjoin_bottom(h2)
    assert dense_elements(sh2).elements == (1, 2)
    with pytest.raises(UnsupportedOperationError):
        dense_elements(h2)


def test_directly_indecomposable(g3, b4, b2, trivial):
    assert is_directly_indecomposable(g3)
    assert not is_directly_indecomposable(b4)
    assert is_directly_indecomposable(b2)
    with pytest.raises(PreconditionError):
        is_directly_indecomposable(fixtures.trivial(bounded=True))


def test_identity_battery_ok_everywhere():
    for name, alg in fixtures.all_fixtures().items():
        rep = identity_battery(alg)
        assert rep.ok, (name, rep.violations)


def test_identity_battery_covers_expected_clauses(g3):
    # bounded algebra: all three clause families must run
    rep = identity_battery(g3)
    assert rep.ok
    # unbounded algebra: bounded/Boolean clauses are skipped, the rest run
    assert identity_battery(fixtures.h2()).ok


def test_distributivity(g3, b4):
    assert is_distributive_lattice(g3)
    assert is_distributive_lattice(b4)


def test_product_roundtrip(b2, g3):
    p = product_algebra([b2, g3])
    assert p.size == 6
    assert validate(p).ok
    assert p.bounded
    for i in range(p.size):
        coords = decode_product_index([2, 3], i)
        assert encode_product_index([2, 3], coords) == i
    # mixed boundedness loses the bottom
    q = product_algebra([b2, fixtures.h2()])
    assert not q.bounded
    assert validate(q).ok


def test_b4_is_b2_squared(b2, b4):
    assert algebras_equal(b4, product_algebra([b2, b2], name="B4"))


def test_frozen_tables(g3):
    with pytest.raises(ValueError):
        g3.meet[0, 0] = 1
