"""Exhaustive enumeration of finite bounded residuated lattices up to
isomorphism, plus the isomorphism search used across the package.

Strategy: enumerate bounded lattices on n points (downset-by-downset, with
index order a linear extension, bottom 0, top n-1), complete each with every
commutative integral associative product table, derive the residuum as the
feasibility test, and keep one canonical representative per isomorphism
class (minimal table stack over all bijections fixing bottom and top).
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache

import numpy as np

from . import _kernels
from .core import FiniteAlgebra, is_distributive_lattice, validate
from .errors import ConfigurationError, InvariantError
from .homs import are_isomorphic  # re-exported; spec places iso search here
from .stonean import is_stonean

__all__ = [
    "DEFAULT_SIZE_LIMIT",
    "are_isomorphic",
    "enumerate_algebras",
    "iter_corpus",
    "size_limit",
]

DEFAULT_SIZE_LIMIT = 6
_LIMIT_ENV = "STONEAN_LAB_LIMIT"


def size_limit() -> int:
    raw = os.environ.get(_LIMIT_ENV, "").strip()
    if not raw:
        return DEFAULT_SIZE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{_LIMIT_ENV} must be an integer, got {raw!r}")


def _downset_choices(down: list[int], i: int, n: int) -> list[int]:
    """Candidate strict-downsets for element i given downsets of 0..i-1:
    subsets of {0..i-1} containing bottom and downward closed."""
    if i == n - 1:
        return [(1 << i) - 1]  # top lies above everything
    prev = list(range(i))
    out = []
    for bits in range(1 << (i - 1)):
        mask = (bits << 1) | 1  # bottom always in
        ok = True
        for j in prev:
            if mask >> j & 1 and (down[j] & ~(1 << j)) & ~mask:
                ok = False
                break
        if ok:
            out.append(mask)
    return out


def _lattice_tables(down: list[int], n: int):
    """Meet/join tables from downset masks, or None when glb/lub is missing."""
    up = [0] * n
    for x in range(n):
        for y in range(n):
            if down[y] >> x & 1:
                up[x] |= 1 << y
    meet = np.empty((n, n), dtype=np.int32)
    join = np.empty((n, n), dtype=np.int32)
    for x in range(n):
        for y in range(n):
            common = down[x] & down[y]
            m = -1
            for z in range(n):
                if common >> z & 1 and down[z] == common:
                    m = z
                    break
            if m < 0:
                return None
            meet[x, y] = m
            commonu = up[x] & up[y]
            j = -1
            for z in range(n):
                if commonu >> z & 1 and up[z] == commonu:
                    j = z
                    break
            if j < 0:
                return None
            join[x, y] = j
    return meet, join


def _all_lattices(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """All lattices on 0..n-1 (bottom 0, top n-1) up to isomorphism, as
    canonical (meet, join) pairs in deterministic order."""
    perms = _middle_perms(n)
    seen = {}
    down = [1]  # element 0: just itself

    def rec(i: int):
        if i == n:
            tabs = _lattice_tables(down, n)
            if tabs is None:
                return
            meet, join = tabs
            stack = np.stack([meet, join, meet, join])
            canon = _kernels.canonical_tables(stack, perms)
            key = canon[:2].astype(np.uint8).tobytes()
            if key not in seen:
                seen[key] = (np.ascontiguousarray(canon[0]), np.ascontiguousarray(canon[1]))
            return
        for mask in _downset_choices(down, i, n):
            down.append(mask | 1 << i)
            rec(i + 1)
            down.pop()

    if n == 1:
        one = np.zeros((1, 1), dtype=np.int32)
        return [(one, one)]
    rec(1)
    return [seen[k] for k in sorted(seen)]


def _middle_perms(n: int) -> np.ndarray:
    """All bijections fixing bottom 0 and top n-1, as an array."""
    mids = list(range(1, n - 1))
    perms = []
    for p in itertools.permutations(mids):
        perms.append([0, *p, n - 1] if n >= 2 else [0])
    return np.array(perms, dtype=np.int32)


def _leq_from_meet(meet: np.ndarray) -> np.ndarray:
    return meet == np.arange(meet.shape[0], dtype=np.int32)[:, None]


def _canonical_algebras_of_size(n: int, backend: str | None = None) -> list[bytes]:
    """Canonical (meet, join, mult, res) stacks for every bounded RL of
    size n, as sorted raw bytes."""
    perms = _middle_perms(n)
    found = {}
    for meet, join in _all_lattices(n):
        leq = _leq_from_meet(meet)
        mults = _kernels.complete_monoids(meet, leq, backend_name=backend)
        for mult in mults:
            res = _kernels.derive_residuum(leq, np.ascontiguousarray(mult), backend_name=backend)
            if res is None:
                continue
            stack = np.stack([meet, join, mult, res]).astype(np.int32)
            canon = _kernels.canonical_tables(stack, perms, backend_name=backend)
            found[canon.astype(np.uint8).tobytes()] = True
    return sorted(found)


def _algebra_from_stack(key: bytes, n: int, index: int, bounded: bool) -> FiniteAlgebra:
    stack = np.frombuffer(key, dtype=np.uint8).reshape(4, n, n).astype(np.int32)
    alg = FiniteAlgebra(
        name=f"rl{n}_{index:03d}" if bounded else f"url{n}_{index:03d}",
        size=n,
        element_names=tuple(f"e{i}" for i in range(n)),
        meet=stack[0],
        join=stack[1],
        mult=stack[2],
        res=stack[3],
        top=n - 1,
        bottom=0 if bounded else None,
    )
    rep = validate(alg)
    if not rep.ok:
        raise InvariantError(f"enumerated algebra invalid: {rep.violations}")
    return alg


@lru_cache(maxsize=None)
def enumerate_algebras(
    n: int,
    *,
    stonean: bool = False,
    distributive: bool = False,
    bounded: bool = True,
) -> tuple[FiniteAlgebra, ...]:
    """One representative per isomorphism class of bounded residuated
    lattices of size exactly n, optionally filtered.  With bounded=False the
    same algebras are emitted with the bottom left unnamed (the tables do
    not change; only bounded-signature operations do)."""
    if n > size_limit():
        raise ConfigurationError(
            f"size {n} exceeds the enumeration limit {size_limit()} "
            f"(override with {_LIMIT_ENV})"
        )
    if n < 1:
        raise ConfigurationError("size must be at least 1")
    if stonean and not bounded:
        raise ConfigurationError("the Stonean filter needs bounded algebras")
    keys = _canonical_algebras_of_size(n)
    out = []
    for key in keys:
        alg = _algebra_from_stack(key, n, len(out), bounded=True)
        if stonean and not is_stonean(alg):
            continue
        if distributive and not is_distributive_lattice(alg):
            continue
        if not bounded:
            alg = _algebra_from_stack(key, n, len(out), bounded=False)
        out.append(alg)
    # renumber after filtering so names are contiguous
    out = tuple(
        _rename(alg, f"{'rl' if bounded else 'url'}{n}_{i:03d}") for i, alg in enumerate(out)
    )
    return out


def _rename(alg: FiniteAlgebra, name: str) -> FiniteAlgebra:
    return FiniteAlgebra(
        name=name,
        size=alg.size,
        element_names=alg.element_names,
        meet=alg.meet,
        join=alg.join,
        mult=alg.mult,
        res=alg.res,
        top=alg.top,
        bottom=alg.bottom,
    )


def iter_corpus(
    n_max: int,
    *,
    stonean: bool = False,
    distributive: bool = False,
    bounded: bool = True,
):
    """Representatives of every isomorphism class of size 2..n_max."""
    for n in range(2, n_max + 1):
        yield from enumerate_algebras(
            n, stonean=stonean, distributive=distributive, bounded=bounded
        )
