"""Implicative filters, lattice filters, congruence quotients, the
Chinese-remainder solver and central-filter machinery.

Filter members are stored as bit-vectors (python ints), so intersection,
union and comparison are single integer operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import FiniteAlgebra, validate
from .errors import (
    ContractError,
    InfeasibleConstraintsError,
    InvariantError,
    PreconditionError,
)

I_FILTER = "i-filter"
LATTICE_FILTER = "lattice-filter"


@dataclass(frozen=True)
class FilterSet:
    algebra: FiniteAlgebra
    mask: int
    kind: str

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.algebra.size) if self.mask >> i & 1)

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> int(x) & 1)

    @property
    def is_whole(self) -> bool:
        return self.mask == (1 << self.algebra.size) - 1

    def __repr__(self):
        return f"FilterSet({self.algebra.name}, {{{','.join(map(str, self.members))}}}, {self.kind})"


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << int(e)
    return m


def is_ifilter_mask(A: FiniteAlgebra, mask: int) -> bool:
    if not mask >> A.top & 1:
        return False
    res = A.res
    for x in range(A.size):
        if not mask >> x & 1:
            continue
        for y in range(A.size):
            if mask >> int(res[x, y]) & 1 and not mask >> y & 1:
                return False
    return True


def is_lattice_filter_mask(A: FiniteAlgebra, mask: int) -> bool:
    if not mask >> A.top & 1:
        return False
    L = A.leq_matrix
    members = [x for x in range(A.size) if mask >> x & 1]
    for x in members:
        for y in range(A.size):
            if L[x, y] and not mask >> y & 1:
                return False
        for y in members:
            if not mask >> int(A.meet[x, y]) & 1:
                return False
    return True


def generate_ifilter(A: FiniteAlgebra, seed: Iterable[int]) -> FilterSet:
    """Least i-filter containing the seed: modus-ponens worklist fixpoint."""
    mask = mask_of(seed) | 1 << A.top
    res = A.res
    changed = True
    while changed:
        changed = False
        for x in range(A.size):
            if not mask >> x & 1:
                continue
            for y in range(A.size):
                if mask >> int(res[x, y]) & 1 and not mask >> y & 1:
                    mask |= 1 << y
                    changed = True
    return FilterSet(A, mask, I_FILTER)


def generate_lattice_filter(A: FiniteAlgebra, seed: Iterable[int]) -> FilterSet:
    """Least lattice filter containing the seed: close under binary meets,
    then upward."""
    mask = mask_of(seed) | 1 << A.top
    changed = True
    while changed:
        changed = False
        members = [x for x in range(A.size) if mask >> x & 1]
        for x in members:
            for y in members:
                m = int(A.meet[x, y])
                if not mask >> m & 1:
                    mask |= 1 << m
                    changed = True
        L = A.leq_matrix
        for x in range(A.size):
            if mask >> x & 1:
                for y in range(A.size):
                    if L[x, y] and not mask >> y & 1:
                        mask |= 1 << y
                        changed = True
    return FilterSet(A, mask, LATTICE_FILTER)


def principal_lattice_filter(A: FiniteAlgebra, x: int) -> FilterSet:
    """[x): the upward closure of a single element."""
    ups = np.flatnonzero(A.leq_matrix[x])
    return FilterSet(A, mask_of(ups), LATTICE_FILTER)


@dataclass(frozen=True)
class FilterLattice:
    filters: tuple[FilterSet, ...]
    meet: np.ndarray  # index table: filters[meet[i,j]] = filters[i] & filters[j]
    join: np.ndarray

    def index_of(self, fs: FilterSet) -> int:
        for i, f in enumerate(self.filters):
            if f.mask == fs.mask:
                return i
        raise KeyError("filter not in lattice")

    @property
    def is_distributive(self) -> bool:
        lhs = self.meet[:, self.join]
        rhs = self.join[self.meet[:, :, None], self.meet[:, None, :]]
        return bool((lhs == rhs).all())


def _subset_scan(A: FiniteAlgebra, predicate) -> list[int]:
    n = A.size
    top_bit = 1 << A.top
    out = []
    for raw in range(1 << n):
        mask = raw
        if not mask & top_bit:
            continue
        if predicate(A, mask):
            out.append(mask)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


def all_ifilters(A: FiniteAlgebra) -> FilterLattice:
    """Every i-filter, with meet (intersection) and join (generated) tables."""
    masks = _subset_scan(A, is_ifilter_mask)
    filters = tuple(FilterSet(A, m, I_FILTER) for m in masks)
    index = {m: i for i, m in enumerate(masks)}
    k = len(masks)
    meet = np.empty((k, k), dtype=np.int32)
    join = np.empty((k, k), dtype=np.int32)
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            meet[i, j] = index[mi & mj]
            join[i, j] = index[generate_ifilter(A, _bits(mi | mj)).mask]
    return FilterLattice(filters, meet, join)


def all_lattice_filters(A: FiniteAlgebra) -> FilterLattice:
    masks = _subset_scan(A, is_lattice_filter_mask)
    filters = tuple(FilterSet(A, m, LATTICE_FILTER) for m in masks)
    index = {m: i for i, m in enumerate(masks)}
    k = len(masks)
    meet = np.empty((k, k), dtype=np.int32)
    join = np.empty((k, k), dtype=np.int32)
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            meet[i, j] = index[mi & mj]
            join[i, j] = index[generate_lattice_filter(A, _bits(mi | mj)).mask]
    return FilterLattice(filters, meet, join)


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class QuotientResult:
    quotient: FiniteAlgebra
    projection: np.ndarray  # parent index -> class index


def biimplication(A: FiniteAlgebra, x: int, y: int) -> int:
    return int(A.mult[A.res[x, y], A.res[y, x]])


def quotient(A: FiniteAlgebra, F: FilterSet) -> QuotientResult:
    """A modulo the congruence induced by an i-filter; classes are indexed
    by ascending least member."""
    if F.kind != I_FILTER:
        raise ContractError("quotient requires an i-filter")
    if F.algebra is not A:
        raise ContractError("filter belongs to a different algebra")
    n = A.size
    related = np.zeros((n, n), dtype=bool)
    for x in range(n):
        for y in range(n):
            related[x, y] = biimplication(A, x, y) in F
    reps = []
    proj = np.full(n, -1, dtype=np.int32)
    for x in range(n):
        if proj[x] >= 0:
            continue
        cls = np.flatnonzero(related[x])
        idx = len(reps)
        reps.append(x)
        proj[cls] = idx
    k = len(reps)
    tables = {}
    for label in ("meet", "join", "mult", "res"):
        t = getattr(A, label)
        tables[label] = proj[t[np.ix_(reps, reps)]]
    q = FiniteAlgebra(
        name=f"{A.name}/F",
        size=k,
        element_names=tuple(f"[{A.element_names[r]}]" for r in reps),
        top=int(proj[A.top]),
        bottom=int(proj[A.bottom]) if A.bounded else None,
        **tables,
    )
    rep = validate(q)
    if not rep.ok:
        raise InvariantError(f"quotient failed validation: {rep.violations}")
    top_class = mask_of(np.flatnonzero(proj == proj[A.top]))
    if top_class != F.mask:
        raise InvariantError("top class of the quotient differs from the filter")
    return QuotientResult(q, proj)


def crt_solve(A: FiniteAlgebra, constraints: Sequence[tuple[int, FilterSet]]) -> int:
    """An element congruent to a_i modulo F_i for all i, provided the
    constraints are pairwise compatible; candidates are tried in ascending
    index order, so the least solution is returned."""
    if not constraints:
        raise PreconditionError("need at least one constraint")
    for _, F in constraints:
        if F.kind != I_FILTER or F.algebra is not A:
            raise ContractError("constraints need i-filters of the same algebra")
    for i in range(len(constraints)):
        for j in range(i + 1, len(constraints)):
            ai, Fi = constraints[i]
            aj, Fj = constraints[j]
            joined = generate_ifilter(A, _bits(Fi.mask | Fj.mask))
            if biimplication(A, ai, aj) not in joined:
                raise InfeasibleConstraintsError(i, j)
    for x in range(A.size):
        if all(biimplication(A, x, a) in F for a, F in constraints):
            return x
    raise InvariantError("compatible constraints admit no solution; CRT broken")


def is_central_filter(A: FiniteAlgebra, G: FilterSet) -> Optional[FilterSet]:
    """A complement G' splitting every lattice filter F both ways, or None.

    Centrality is verified extensionally against all lattice filters rather
    than through the neutral-element characterization."""
    if not is_lattice_filter_mask(A, G.mask):
        raise ContractError("G must be a lattice filter")
    lattice = all_lattice_filters(A)
    for Gp in lattice.filters:
        if _central_pair(A, lattice, G.mask, Gp.mask):
            return Gp
    return None


def _central_pair(A: FiniteAlgebra, lattice: FilterLattice, g: int, gp: int) -> bool:
    for F in lattice.filters:
        f = F.mask
        meet_join = generate_lattice_filter(A, _bits((f & g) | (f & gp))).mask
        if meet_join != f:
            return False
        join_g = generate_lattice_filter(A, _bits(f | g)).mask
        join_gp = generate_lattice_filter(A, _bits(f | gp)).mask
        if join_g & join_gp != f:
            return False
    return True


def rho(D: FiniteAlgebra, G: FilterSet, d: int) -> int:
    """The unique z with [d) meet G = [z), defined when G is central."""
    if is_central_filter(D, G) is None:
        raise PreconditionError("rho needs a central lattice filter")
    return rho_of_mask(D, G.mask, d)


def rho_of_mask(D: FiniteAlgebra, g_mask: int, d: int) -> int:
    """Core of `rho` without the centrality re-check; callers must have
    established centrality themselves."""
    inter = principal_lattice_filter(D, d).mask & g_mask
    members = _bits(inter)
    L = D.leq_matrix
    z = None
    for x in members:
        if all(L[x, y] for y in members):
            z = x
            break
    if z is None or principal_lattice_filter(D, z).mask != inter:
        raise InvariantError("[d) meet G is not principal despite centrality")
    return z
