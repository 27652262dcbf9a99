"""Enumeration of all bounded residuated lattices up to isomorphism, and
the isomorphism search itself."""

import numpy as np
import pytest

from stonean_lab import _kernels, fixtures
from stonean_lab.core import product_algebra, validate
from stonean_lab.corpus import enumerate_algebras, iter_corpus, size_limit
from stonean_lab.errors import ConfigurationError
from stonean_lab.homs import are_isomorphic, is_hom
from stonean_lab.stonean import adjoin_bottom, is_stonean


def test_pinned_counts():
    assert len(enumerate_algebras(2)) == 1
    assert len(enumerate_algebras(3)) == 2
    assert len(enumerate_algebras(3, stonean=True)) == 1


def test_size3_classes_are_g3_and_l3(g3, l3):
    algs = enumerate_algebras(3)
    found_g3 = [A for A in algs if are_isomorphic(g3, A) is not None]
    found_l3 = [A for A in algs if are_isomorphic(l3, A) is not None]
    assert len(found_g3) == 1 and len(found_l3) == 1
    assert found_g3[0] is not found_l3[0]
    stonean = enumerate_algebras(3, stonean=True)
    assert are_isomorphic(g3, stonean[0]) is not None


def test_emitted_algebras_revalidate(corpus5):
    for alg in corpus5:
        assert validate(alg).ok
        assert alg.bottom == 0 and alg.top == alg.size - 1


@pytest.mark.parametrize("n", [4, 5])
def test_no_two_emitted_are_isomorphic(n):
    algs = enumerate_algebras(n)
    for i in range(len(algs)):
        for j in range(i + 1, len(algs)):
            assert are_isomorphic(algs[i], algs[j]) is None


def test_every_small_algebra_is_covered():
    # spot check: assorted constructions of size <= 5 all appear
    probes = [
        fixtures.b2(),
        fixtures.g3(),
        fixtures.l3(),
        fixtures.g4(),
        fixtures.b4(),
        product_algebra([fixtures.b2(), fixtures.g3()]),
        adjoin_bottom(fixtures.h2xh2()),
        adjoin_bottom(fixtures.g4()),
    ]
    for A in probes:
        hits = [B for B in enumerate_algebras(A.size) if are_isomorphic(A, B) is not None]
        assert len(hits) == 1, A.name


def test_unbounded_emission():
    algs = enumerate_algebras(3, bounded=False)
    assert all(not A.bounded for A in algs)
    assert len(algs) == 2


def test_stonean_filter_consistency(corpus5):
    def key(A):
        return np.stack([A.meet, A.join, A.mult, A.res]).tobytes()

    by_flag = {key(A) for A in iter_corpus(5, stonean=True)}
    for alg in corpus5:
        assert (key(alg) in by_flag) == is_stonean(alg)


def test_limit_enforced(monkeypatch):
    monkeypatch.delenv("STONEAN_LAB_LIMIT", raising=False)
    assert size_limit() == 6
    with pytest.raises(ConfigurationError):
        enumerate_algebras(9)
    monkeypatch.setenv("STONEAN_LAB_LIMIT", "not-a-number")
    with pytest.raises(ConfigurationError):
        size_limit()


def test_iso_examples(g3, b4, b2, h2):
    assert are_isomorphic(g3, adjoin_bottom(h2)) is not None
    assert are_isomorphic(g3, b4) is None  # sizes differ
    w = are_isomorphic(b4, product_algebra([b2, b2]))
    assert w is not None


def test_iso_is_equivalence(corpus5):
    sample = corpus5[:10]
    for A in sample:
        w = are_isomorphic(A, A)
        assert w is not None
        # reflexivity finds the identity first (lexicographically least)
        assert list(w) == list(range(A.size))
    A, B = fixtures.b4(), product_algebra([fixtures.b2(), fixtures.b2()])
    w = are_isomorphic(A, B)
    inv = np.argsort(w)
    # symmetry: the inverse of a witness is a witness
    for label in ("meet", "join", "mult", "res"):
        ta, tb = getattr(A, label), getattr(B, label)
        assert (inv[tb] == ta[inv[:, None], inv[None, :]]).all()


def test_iso_witness_is_hom(g3, h2):
    S = adjoin_bottom(h2)
    w = are_isomorphic(S, g3)
    assert is_hom(S, g3, w, bounded=True)


@pytest.mark.skipif(len(_kernels.available_backends()) < 2, reason="single backend")
def test_enumeration_backend_parity():
    from stonean_lab.corpus import _canonical_algebras_of_size

    for n in (3, 4, 5):
        assert _canonical_algebras_of_size(n, backend="numba") == _canonical_algebras_of_size(
            n, backend="numpy"
        )
