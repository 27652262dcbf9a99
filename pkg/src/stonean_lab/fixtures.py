"""Canonical small algebras used throughout the library and its tests.

All tables are spelled out from the defining recipes: chains carry the
Goedel residuum (x -> y is top when x <= y, else y) unless noted, and L3
is the three-element chain with a*a = bottom (the stock non-Stonean
witness).  H-prefixed algebras are bottom-free.
"""

from __future__ import annotations

from functools import lru_cache

from .core import FiniteAlgebra, product_algebra


def _goedel_chain(name: str, names: tuple[str, ...], bounded: bool) -> FiniteAlgebra:
    n = len(names)
    rng = range(n)
    meet = [[min(i, j) for j in rng] for i in rng]
    join = [[max(i, j) for j in rng] for i in rng]
    res = [[n - 1 if i <= j else j for j in rng] for i in rng]
    return FiniteAlgebra(
        name=name,
        size=n,
        element_names=names,
        meet=meet,
        join=join,
        mult=meet,
        res=res,
        top=n - 1,
        bottom=0 if bounded else None,
    )


@lru_cache(maxsize=None)
def trivial(bounded: bool = False) -> FiniteAlgebra:
    return FiniteAlgebra(
        name="TRIV" if not bounded else "TRIVB",
        size=1,
        element_names=("top",),
        meet=[[0]],
        join=[[0]],
        mult=[[0]],
        res=[[0]],
        top=0,
        bottom=0 if bounded else None,
    )


@lru_cache(maxsize=None)
def b2() -> FiniteAlgebra:
    return _goedel_chain("B2", ("bot", "top"), bounded=True)


@lru_cache(maxsize=None)
def b4() -> FiniteAlgebra:
    alg = product_algebra([b2(), b2()], name="B4")
    return alg


@lru_cache(maxsize=None)
def g3() -> FiniteAlgebra:
    return _goedel_chain("G3", ("bot", "a", "top"), bounded=True)


@lru_cache(maxsize=None)
def g4() -> FiniteAlgebra:
    return _goedel_chain("G4", ("bot", "a", "b", "top"), bounded=True)


@lru_cache(maxsize=None)
def l3() -> FiniteAlgebra:
    # three-element chain with a * a = bot; negation is involutive on a
    return FiniteAlgebra(
        name="L3",
        size=3,
        element_names=("bot", "a", "top"),
        meet=[[0, 0, 0], [0, 1, 1], [0, 1, 2]],
        join=[[0, 1, 2], [1, 1, 2], [2, 2, 2]],
        mult=[[0, 0, 0], [0, 0, 1], [0, 1, 2]],
        res=[[2, 2, 2], [1, 2, 2], [0, 1, 2]],
        top=2,
        bottom=0,
    )


@lru_cache(maxsize=None)
def h2() -> FiniteAlgebra:
    return _goedel_chain("H2", ("d", "top"), bounded=False)


@lru_cache(maxsize=None)
def h3() -> FiniteAlgebra:
    return _goedel_chain("H3", ("d1", "d2", "top"), bounded=False)


@lru_cache(maxsize=None)
def h2xh2() -> FiniteAlgebra:
    return product_algebra([h2(), h2()], name="H2xH2")


def all_fixtures() -> dict[str, FiniteAlgebra]:
    return {
        "TRIV": trivial(),
        "B2": b2(),
        "B4": b4(),
        "G3": g3(),
        "G4": g4(),
        "L3": l3(),
        "H2": h2(),
        "H3": h3(),
        "H2xH2": h2xh2(),
    }
