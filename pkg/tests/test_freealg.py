"""Free algebra assembly, the factor index formula, and the term-closure
oracle that cross-validates it."""

from math import comb

import pytest

from stonean_lab import fixtures
from stonean_lab.core import boolean_skeleton, validate
from stonean_lab.errors import ContractError, PreconditionError, SizeLimitError
from stonean_lab.freealg import (
    assemble_free,
    free_by_term_closure,
    goedel_hoop_chain,
    goedel_stalk_frees,
    k_index,
    triple_of_free,
)
from stonean_lab.homs import all_homs, are_isomorphic
from tests.conftest import long_test


def test_k_index_values():
    assert [k_index(2, j) for j in (1, 2, 3, 4)] == [0, 1, 1, 2]
    assert [k_index(1, j) for j in (1, 2)] == [0, 1]
    assert k_index(0, 1) == 0
    with pytest.raises(PreconditionError):
        k_index(2, 5)
    with pytest.raises(PreconditionError):
        k_index(2, 0)


def test_k_index_histogram():
    for n in range(6):
        ks = [k_index(n, j) for j in range(1, 2**n + 1)]
        for k in range(n + 1):
            assert ks.count(k) == comb(n, k)


def test_term_closure_examples(b2, h2):
    fb = free_by_term_closure([b2], 1)
    assert fb.algebra.size == 4  # free Boolean algebra on one generator
    assert validate(fb.algebra).ok

    fg = free_by_term_closure([fixtures.g3(), fixtures.g4()], 1)
    assert fg.algebra.size == 6

    fh = free_by_term_closure([h2], 1)
    assert fh.algebra.size == 2


def test_term_closure_size_cap(b2):
    with pytest.raises(SizeLimitError) as exc:
        free_by_term_closure([fixtures.g4()], 2, size_cap=10)
    assert exc.value.reached > 10


def test_term_closure_mixed_boundedness(b2, h2):
    with pytest.raises(ContractError):
        free_by_term_closure([b2, h2], 1)


def test_universal_property_n1(h2):
    # the marked generator realizes every target value through exactly one hom
    K = [fixtures.g3(), fixtures.g4()]
    free = free_by_term_closure(K, 1)
    g = free.generators[0]
    for target in K:
        homs = all_homs(free.algebra, target, bounded=True)
        images = sorted(int(f[g]) for f in homs)
        assert images == list(range(target.size))


def test_assemble_free_goedel_n1(trivial, h2):
    A = assemble_free(1, [trivial, h2])
    assert A.size == 6
    oracle = free_by_term_closure([fixtures.g3(), fixtures.g4()], 1)
    assert are_isomorphic(A, oracle.algebra) is not None
    # Boolean skeleton is the free Boolean algebra on one generator
    assert len(boolean_skeleton(A).elements) == 4


def test_assemble_free_n0(trivial, b2):
    A = assemble_free(0, [trivial])
    assert are_isomorphic(A, b2) is not None


def test_assemble_free_rejects_boolean_variety(trivial):
    with pytest.raises(ContractError):
        assemble_free(1, [trivial, fixtures.trivial()])


def test_assemble_free_size_cap(trivial, h2):
    with pytest.raises(SizeLimitError):
        assemble_free(1, [trivial, h2], size_cap=5)


def test_triple_of_free_n1(trivial, h2):
    t = triple_of_free(1, [trivial, h2])  # validates internally
    assert t.B.size == 4
    assert t.D.size == 2


def test_triple_of_free_n0(trivial):
    t = triple_of_free(0, [trivial])
    assert t.B.size == 2
    assert t.D.size == 1
    assert t.phi_masks() == (1, 1)


def test_goedel_stalk_sizes():
    assert [a.size for a in goedel_stalk_frees(1)] == [1, 2]
    assert goedel_hoop_chain(2).size == 2
    assert not goedel_hoop_chain(3).bounded


@long_test
def test_free_goedel_n2_agreement():
    stalks = goedel_stalk_frees(2)
    A = assemble_free(2, stalks)
    oracle = free_by_term_closure([fixtures.g3(), fixtures.g4()], 2)
    # no literature constant asserted: only agreement between the two routes
    assert A.size == oracle.algebra.size
    assert are_isomorphic(A, oracle.algebra) is not None
    t = triple_of_free(2, stalks)
    assert t.B.size == 16
