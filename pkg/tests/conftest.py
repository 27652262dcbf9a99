import itertools
import os

import pytest

from stonean_lab import fixtures
from stonean_lab.corpus import enumerate_algebras

LONG = os.environ.get("STONEAN_LAB_LONG", "") not in ("", "0")
long_test = pytest.mark.skipif(not LONG, reason="set STONEAN_LAB_LONG=1 to run")


def enumerate_triples(B, D):
    """Every valid triple over (B, D): the connecting map is determined by
    one filter per atom (the value at the atom's complement), so scan all
    such assignments and keep the ones passing triple validation."""
    from stonean_lab.filters import FilterSet, I_FILTER, all_ifilters
    from stonean_lab.reconstruct import atoms_of
    from stonean_lab.triples import Triple, validate_triple

    lattice = all_ifilters(D)
    atoms = atoms_of(B)
    L = B.leq_matrix
    out = []
    for choice in itertools.product(lattice.filters, repeat=len(atoms)):
        phi = []
        for b in range(B.size):
            mask = (1 << D.size) - 1
            for x, F in zip(atoms, choice):
                if not L[x, b]:
                    mask &= F.mask
            phi.append(FilterSet(D, mask, I_FILTER))
        t = Triple(B=B, D=D, phi=tuple(phi))
        if validate_triple(t).ok:
            out.append(t)
    return out


@pytest.fixture(scope="session")
def g3():
    return fixtures.g3()


@pytest.fixture(scope="session")
def g4():
    return fixtures.g4()


@pytest.fixture(scope="session")
def l3():
    return fixtures.l3()


@pytest.fixture(scope="session")
def b2():
    return fixtures.b2()


@pytest.fixture(scope="session")
def b4():
    return fixtures.b4()


@pytest.fixture(scope="session")
def h2():
    return fixtures.h2()


@pytest.fixture(scope="session")
def h3():
    return fixtures.h3()


@pytest.fixture(scope="session")
def h2xh2():
    return fixtures.h2xh2()


@pytest.fixture(scope="session")
def trivial():
    return fixtures.trivial()


def corpus_upto(n_max: int, **flags):
    out = []
    for n in range(2, n_max + 1):
        out.extend(enumerate_algebras(n, **flags))
    return out


@pytest.fixture(scope="session")
def corpus5():
    return corpus_upto(5)


@pytest.fixture(scope="session")
def stonean5():
    return corpus_upto(5, stonean=True)
