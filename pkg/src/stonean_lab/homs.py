"""Homomorphism checking, exhaustive hom enumeration and isomorphism search.

Hom enumeration backtracks over images of a generating set and replays the
derivation of every other element, which keeps the candidate space at
|C|^(number of generators) instead of |C|^|A|.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .core import FiniteAlgebra, ValidationReport
from .errors import ContractError

_OPS = ("meet", "join", "mult", "res")


def validate_hom(
    A: FiniteAlgebra, C: FiniteAlgebra, f, *, bounded: bool
) -> ValidationReport:
    """Check a map element-wise against all four operations and the
    constants; `bounded` additionally requires bottom preservation."""
    f = np.asarray(f, dtype=np.int32)
    violations: list[tuple[str, tuple[int, ...]]] = []
    if f.shape != (A.size,) or f.min() < 0 or f.max() >= C.size:
        raise ContractError("map has wrong shape or range")
    if f[A.top] != C.top:
        violations.append(("preserves-top", (int(A.top),)))
    if bounded:
        if not (A.bounded and C.bounded):
            raise ContractError("bounded hom check needs bounded algebras")
        if f[A.bottom] != C.bottom:
            violations.append(("preserves-bottom", (int(A.bottom),)))
    for label in _OPS:
        ta, tc = getattr(A, label), getattr(C, label)
        bad = np.argwhere(f[ta] != tc[f[:, None], f[None, :]])
        if bad.size:
            violations.append((f"preserves-{label}", tuple(int(v) for v in bad[0])))
    return ValidationReport.from_violations(violations)


def is_hom(A: FiniteAlgebra, C: FiniteAlgebra, f, *, bounded: bool) -> bool:
    return validate_hom(A, C, f, bounded=bounded).ok


@lru_cache(maxsize=None)
def _generating_plan(A: FiniteAlgebra, bounded: bool):
    """Greedy generating set plus a derivation schedule.

    The schedule is a list of (element, rule) pairs covering every element,
    where rule is ("top",), ("bottom",), ("gen", k) or (op, x, y) with x, y
    already derived earlier.
    """
    plan: list[tuple[int, tuple]] = [(A.top, ("top",))]
    known = {A.top}
    if bounded and A.bounded and A.bottom != A.top:
        plan.append((A.bottom, ("bottom",)))
        known.add(A.bottom)
    gens: list[int] = []

    def close():
        changed = True
        while changed:
            changed = False
            for x in sorted(known):
                for y in sorted(known):
                    for label in _OPS:
                        v = int(getattr(A, label)[x, y])
                        if v not in known:
                            plan.append((v, (label, x, y)))
                            known.add(v)
                            changed = True

    close()
    while len(known) < A.size:
        nxt = min(set(range(A.size)) - known)
        gens.append(nxt)
        plan.append((nxt, ("gen", len(gens) - 1)))
        known.add(nxt)
        close()
    return tuple(gens), tuple(plan)


def generating_set(A: FiniteAlgebra, *, bounded: bool | None = None) -> tuple[int, ...]:
    if bounded is None:
        bounded = A.bounded
    return _generating_plan(A, bounded)[0]


def all_homs(
    A: FiniteAlgebra, C: FiniteAlgebra, *, bounded: bool
) -> list[np.ndarray]:
    """Every homomorphism A -> C, in lexicographic order of generator images."""
    if bounded and not (A.bounded and C.bounded):
        raise ContractError("bounded hom enumeration needs bounded algebras")
    gens, plan = _generating_plan(A, bounded)
    out = []
    for images in itertools.product(range(C.size), repeat=len(gens)):
        f = np.full(A.size, -1, dtype=np.int32)
        for target, rule in plan:
            if rule[0] == "top":
                f[target] = C.top
            elif rule[0] == "bottom":
                f[target] = C.bottom
            elif rule[0] == "gen":
                f[target] = images[rule[1]]
            else:
                label, x, y = rule
                f[target] = getattr(C, label)[f[x], f[y]]
        if is_hom(A, C, f, bounded=bounded):
            out.append(f)
    return out


# --- isomorphism search ----------------------------------------------------


def _refine_colors(A: FiniteAlgebra) -> np.ndarray:
    n = A.size
    colors = np.zeros(n, dtype=np.int64)
    colors[A.top] = 1
    if A.bounded:
        colors[A.bottom] = 2
    tables = [getattr(A, label) for label in _OPS]
    for _ in range(n):
        sigs = []
        for x in range(n):
            neigh = sorted(
                (
                    int(colors[y]),
                    *(int(colors[t[x, y]]) for t in tables),
                    *(int(colors[t[y, x]]) for t in tables),
                )
                for y in range(n)
            )
            sigs.append((int(colors[x]), tuple(neigh)))
        palette = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = np.array([palette[s] for s in sigs], dtype=np.int64)
        if (new == colors).all():
            break
        colors = new
    return colors


def are_isomorphic(A: FiniteAlgebra, C: FiniteAlgebra):
    """A bijection commuting with all four tables and the constants, or
    None.  Deterministic: the lexicographically least witness is returned."""
    if A.size != C.size or A.bounded != C.bounded:
        return None
    n = A.size
    ca, cc = _refine_colors(A), _refine_colors(C)
    if sorted(ca) != sorted(cc):
        return None
    cand = [
        [y for y in range(n) if cc[y] == ca[x]]
        for x in range(n)
    ]
    tables = [(getattr(A, label), getattr(C, label)) for label in _OPS]
    f = np.full(n, -1, dtype=np.int32)
    used = np.zeros(n, dtype=bool)

    def consistent(x: int) -> bool:
        for ta, tc in tables:
            for y in range(x + 1):
                if f[y] < 0:
                    continue
                v = ta[x, y]
                if v <= x and f[v] >= 0 and tc[f[x], f[y]] != f[v]:
                    return False
                w = ta[y, x]
                if w <= x and f[w] >= 0 and tc[f[y], f[x]] != f[w]:
                    return False
        return True

    def dfs(x: int):
        if x == n:
            g = f.copy()
            ok = all((tc[g[:, None], g[None, :]] == g[ta]).all() for ta, tc in tables)
            if ok and g[A.top] == C.top and (not A.bounded or g[A.bottom] == C.bottom):
                return g
            return None
        for y in cand[x]:
            if used[y]:
                continue
            f[x] = y
            used[y] = True
            if consistent(x):
                got = dfs(x + 1)
                if got is not None:
                    return got
            used[y] = False
            f[x] = -1
        return None

    return dfs(0)
