"""Finite residuated lattices as validated operation tables.

An algebra is four n-by-n tables (meet, join, mult, res) over element ids
0..n-1 plus a top and an optional bottom.  The lattice order is always
derived from the meet table; it is never stored independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

import numpy as np

from . import _kernels
from .errors import (
    InvariantError,
    MalformedAlgebraError,
    PreconditionError,
    UnsupportedOperationError,
)


def _as_table(raw, n: int, label: str) -> np.ndarray:
    arr = np.asarray(raw, dtype=np.int32)
    if arr.shape != (n, n):
        raise MalformedAlgebraError(f"{label} table must be {n}x{n}, got {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise MalformedAlgebraError(f"{label} table has entries outside [0, {n})")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """A finite (bounded, commutative, integral) residuated lattice.

    Construction checks structure only (shapes, ranges, name uniqueness);
    whether the tables satisfy the laws is `validate`'s job.
    """

    name: str
    size: int
    element_names: tuple[str, ...]
    meet: np.ndarray
    join: np.ndarray
    mult: np.ndarray
    res: np.ndarray
    top: int
    bottom: Optional[int] = None

    def __post_init__(self):
        n = self.size
        if n <= 0:
            raise MalformedAlgebraError("size must be positive")
        names = tuple(str(s) for s in self.element_names)
        if len(names) != n or len(set(names)) != n:
            raise MalformedAlgebraError("need exactly n distinct element names")
        object.__setattr__(self, "element_names", names)
        for label in ("meet", "join", "mult", "res"):
            object.__setattr__(self, label, _as_table(getattr(self, label), n, label))
        if not (0 <= self.top < n):
            raise MalformedAlgebraError("top index out of range")
        if self.bottom is not None and not (0 <= self.bottom < n):
            raise MalformedAlgebraError("bottom index out of range")

    @property
    def bounded(self) -> bool:
        return self.bottom is not None

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        lm = self.meet == np.arange(self.size, dtype=np.int32)[:, None]
        lm.setflags(write=False)
        return lm

    def index(self, name: str) -> int:
        try:
            return self.element_names.index(name)
        except ValueError:
            raise MalformedAlgebraError(f"no element named {name!r} in {self.name}") from None

    def __repr__(self):
        kind = "bounded" if self.bounded else "unbounded"
        return f"FiniteAlgebra({self.name!r}, n={self.size}, {kind})"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[tuple[str, tuple[int, ...]], ...]
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.ok != (len(self.violations) == 0):
            raise InvariantError("ok flag inconsistent with violation list")

    @classmethod
    def from_violations(cls, violations, notes=()) -> "ValidationReport":
        vio = tuple((law, tuple(int(v) for v in wit)) for law, wit in violations)
        return cls(ok=not vio, violations=vio, notes=tuple(notes))


class Subalgebra(NamedTuple):
    elements: tuple[int, ...]
    algebra: FiniteAlgebra
    embedding: np.ndarray  # local index -> parent index


def _check_elem(A: FiniteAlgebra, *xs: int) -> None:
    for x in xs:
        if not (0 <= int(x) < A.size):
            raise MalformedAlgebraError(f"element id {x} out of range for {A.name}")


def leq(A: FiniteAlgebra, x: int, y: int) -> bool:
    """Lattice order: x <= y iff meet(x, y) = x."""
    _check_elem(A, x, y)
    return bool(A.leq_matrix[x, y])


def neg(A: FiniteAlgebra, x: int) -> int:
    """Negation x -> bottom; only for bounded algebras."""
    if not A.bounded:
        raise UnsupportedOperationError(f"{A.name} has no bottom; negation undefined")
    _check_elem(A, x)
    return int(A.res[x, A.bottom])


def negation_table(A: FiniteAlgebra) -> np.ndarray:
    if not A.bounded:
        raise UnsupportedOperationError(f"{A.name} has no bottom; negation undefined")
    return A.res[:, A.bottom].copy()


def validate(A: FiniteAlgebra) -> ValidationReport:
    """Scan every residuated-lattice law, reporting the first witness per
    violated law in lexicographic index order."""
    L = A.leq_matrix
    meet, join, mult, res = A.meet, A.join, A.mult, A.res
    n = A.size
    ids = np.arange(n, dtype=np.int32)
    checks: list[tuple[str, tuple[int, ...] | None]] = []

    checks.append(("meet-commutative", _kernels.noncommutative_witness(meet)))
    checks.append(("join-commutative", _kernels.noncommutative_witness(join)))
    checks.append(("meet-associative", _kernels.nonassociative_witness(meet)))
    checks.append(("join-associative", _kernels.nonassociative_witness(join)))
    checks.append(("meet-idempotent", _first(np.diagonal(meet) != ids)))
    checks.append(("join-idempotent", _first(np.diagonal(join) != ids)))
    checks.append(("absorption-meet-join", _first(meet[ids[:, None], join] != ids[:, None])))
    checks.append(("absorption-join-meet", _first(join[ids[:, None], meet] != ids[:, None])))
    checks.append(("top-maximum", _first(join[:, A.top] != A.top)))
    if A.bounded:
        checks.append(("bottom-minimum", _first(meet[:, A.bottom] != A.bottom)))
    checks.append(("mult-commutative", _kernels.noncommutative_witness(mult)))
    checks.append(("mult-associative", _kernels.nonassociative_witness(mult)))
    checks.append(("mult-unit", _first(mult[:, A.top] != ids)))
    checks.append(("integrality", _kernels.integrality_witness(L, mult, meet)))
    checks.append(("residuation", _kernels.residuation_witness(L, mult, res)))

    return ValidationReport.from_violations(
        [(law, wit) for law, wit in checks if wit is not None]
    )


def _first(mask: np.ndarray):
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    return tuple(int(v) for v in hits[0])


def is_boolean_algebra(A: FiniteAlgebra) -> bool:
    """Bounded RL in which every element is complemented.  Product then
    coincides with meet and residuation with material implication, so this
    is exactly being a Boolean algebra."""
    if not A.bounded or not validate(A).ok:
        return False
    ng = negation_table(A)
    ids = np.arange(A.size)
    return bool(
        (A.join[ids, ng] == A.top).all() and (A.meet[ids, ng] == A.bottom).all()
    )


def boolean_skeleton(A: FiniteAlgebra) -> Subalgebra:
    """B(A): the complemented elements, with the induced Boolean algebra."""
    if not A.bounded:
        raise UnsupportedOperationError("Boolean skeleton needs a bounded algebra")
    ng = negation_table(A)
    ids = np.arange(A.size)
    mask = (A.join[ids, ng] == A.top) & (A.meet[ids, ng] == A.bottom)
    elements = tuple(int(i) for i in np.flatnonzero(mask))
    sub = subalgebra(A, elements, name=f"B({A.name})")
    if not is_boolean_algebra(sub.algebra):
        raise InvariantError(f"skeleton of {A.name} failed Boolean validation")
    return sub


def dense_elements(A: FiniteAlgebra) -> Subalgebra:
    """D(A) = {x : neg x = bottom}, with the induced bottom-free subalgebra."""
    if not A.bounded:
        raise UnsupportedOperationError("dense elements need a bounded algebra")
    ng = negation_table(A)
    elements = tuple(int(i) for i in np.flatnonzero(ng == A.bottom))
    if A.top not in elements:
        raise InvariantError("top must be dense")
    # i-filter sanity: upward closed and closed under modus ponens
    memb = np.zeros(A.size, dtype=bool)
    memb[list(elements)] = True
    for x in elements:
        for y in range(A.size):
            if memb[A.res[x, y]] and not memb[y]:
                raise InvariantError("dense set is not closed under modus ponens")
    return subalgebra(A, elements, name=f"D({A.name})", keep_bottom=False)


def subalgebra(
    A: FiniteAlgebra,
    elements: Iterable[int],
    name: str,
    keep_bottom: bool = True,
) -> Subalgebra:
    """Induced algebra on a subset; raises if the subset is not closed."""
    elems = tuple(sorted(set(int(e) for e in elements)))
    _check_elem(A, *elems)
    pos = {e: i for i, e in enumerate(elems)}
    if A.top not in pos:
        raise InvariantError(f"subalgebra of {A.name} must contain top")
    k = len(elems)
    tables = {}
    for label in ("meet", "join", "mult", "res"):
        table = getattr(A, label)
        local = np.empty((k, k), dtype=np.int32)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                v = int(table[a, b])
                if v not in pos:
                    raise InvariantError(
                        f"{label}({A.element_names[a]}, {A.element_names[b]}) "
                        f"leaves the subset"
                    )
                local[i, j] = pos[v]
        tables[label] = local
    bottom = None
    if keep_bottom and A.bounded and A.bottom in pos:
        bottom = pos[A.bottom]
    alg = FiniteAlgebra(
        name=name,
        size=k,
        element_names=tuple(A.element_names[e] for e in elems),
        top=pos[A.top],
        bottom=bottom,
        **tables,
    )
    return Subalgebra(elems, alg, np.array(elems, dtype=np.int32))


def is_directly_indecomposable(A: FiniteAlgebra) -> bool:
    """Equivalent, for bounded residuated lattices, to a two-element skeleton."""
    if not A.bounded:
        raise UnsupportedOperationError("direct indecomposability needs bounds")
    if A.size < 2:
        raise PreconditionError("the one-element algebra is excluded")
    return len(boolean_skeleton(A).elements) == 2


def is_distributive_lattice(A: FiniteAlgebra) -> bool:
    lhs = A.meet[:, A.join]                                  # x ^ (y v z)
    rhs = A.join[A.meet[:, :, None], A.meet[:, None, :]]     # (x^y) v (x^z)
    return bool((lhs == rhs).all())


def identity_battery(A: FiniteAlgebra) -> ValidationReport:
    """Exhaustively re-check the stock identities of residuated lattices,
    of bounded ones, and of Boolean elements.  A clean result cross-checks
    the implementation; a violation on a validated algebra is a bug."""
    n = A.size
    meet, join, mult, res = A.meet, A.join, A.mult, A.res
    L = A.leq_matrix
    top = A.top
    violations: list[tuple[str, tuple[int, ...]]] = []

    def check(law: str, pred, witnesses):
        for w in witnesses:
            if not pred(*w):
                violations.append((law, w))
                return

    pairs = [(x, y) for x in range(n) for y in range(n)]
    triples = [(x, y, z) for x in range(n) for y in range(n) for z in range(n)]

    check("L1.i.order-residual", lambda x, y: L[x, y] == (res[x, y] == top), pairs)
    check("L1.ii.top-unit-res", lambda x: res[top, x] == x, [(x,) for x in range(n)])
    check(
        "L1.iii.suffixing",
        lambda x, y, z: res[res[x, y], res[res[y, z], res[x, z]]] == top,
        triples,
    )
    check("L1.iv.weakening", lambda x, y: res[x, res[y, x]] == top, pairs)
    check(
        "L1.v.exchange",
        lambda x, y, z: res[mult[x, y], z] == res[x, res[y, z]],
        triples,
    )
    check(
        "L1.vi.join-res",
        lambda x, y, z: res[join[x, y], z] == meet[res[x, z], res[y, z]],
        triples,
    )
    check(
        "L1.vii.meet-res",
        lambda x, y, z: res[x, meet[y, z]] == meet[res[x, y], res[x, z]],
        triples,
    )
    check(
        "L1.viii.mult-join-dist",
        lambda x, y, z: mult[x, join[y, z]] == join[mult[x, y], mult[x, z]],
        triples,
    )

    if A.bounded:
        ng = negation_table(A)
        check("BND.a.antitone", lambda x, y: not L[x, y] or L[ng[y], ng[x]], pairs)
        check("BND.b.dni", lambda x: L[x, ng[ng[x]]], [(x,) for x in range(n)])
        check(
            "BND.c.triple-neg",
            lambda x: ng[x] == ng[ng[ng[x]]],
            [(x,) for x in range(n)],
        )
        check(
            "BND.d.contraposition",
            lambda x, y: res[x, ng[y]] == res[y, ng[x]],
            pairs,
        )
        check(
            "BND.e.dn-antecedent",
            lambda x, y: res[x, ng[y]] == res[ng[ng[x]], ng[y]],
            pairs,
        )
        check(
            "BND.f.neg-stable",
            lambda x, y: ng[ng[res[x, ng[y]]]] == res[x, ng[y]],
            pairs,
        )
        check(
            "BND.g.de-morgan-join",
            lambda x, y: ng[join[x, y]] == meet[ng[x], ng[y]],
            pairs,
        )

        booleans = boolean_skeleton(A).elements
        b_pairs = [(a, x) for a in booleans for x in range(n)]
        check(
            "BOOL.1.neg-closed",
            lambda a: ng[a] in booleans and ng[ng[a]] == a,
            [(a,) for a in booleans],
        )
        check(
            "BOOL.2.join-criterion",
            lambda x: join[x, ng[x]] != top or x in booleans,
            [(x,) for x in range(n)],
        )
        check("BOOL.a.mult-is-meet", lambda a, x: mult[a, x] == meet[a, x], b_pairs)
        check(
            "BOOL.b.res-is-join",
            lambda a, x: res[a, x] == join[ng[a], x],
            b_pairs,
        )
        check(
            "BOOL.c.decomposition",
            lambda a, x: x == join[meet[x, a], meet[x, ng[a]]],
            b_pairs,
        )
        check(
            "BOOL.d.cancellation",
            lambda b, x, y: not (
                L[ng[b], meet[x, y]] and meet[b, x] == meet[b, y]
            )
            or x == y,
            [(b, x, y) for b in booleans for x in range(n) for y in range(n)],
        )

    return ValidationReport.from_violations(violations)


def product_algebra(factors: list[FiniteAlgebra], name: str | None = None) -> FiniteAlgebra:
    """Direct product; element i decodes to a tuple in row-major factor
    order (last factor varies fastest)."""
    if not factors:
        raise PreconditionError("product of no factors is not represented")
    sizes = [f.size for f in factors]
    total = int(np.prod(sizes))
    strides = np.ones(len(factors), dtype=np.int64)
    for i in range(len(factors) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    codes = np.empty((total, len(factors)), dtype=np.int64)
    rem = np.arange(total, dtype=np.int64)
    for i, s in enumerate(sizes):
        codes[:, i] = rem // strides[i] % s
    names = [
        ",".join(factors[i].element_names[codes[e, i]] for i in range(len(factors)))
        for e in range(total)
    ]
    tables = {}
    for label in ("meet", "join", "mult", "res"):
        acc = np.zeros((total, total), dtype=np.int64)
        for i, f in enumerate(factors):
            t = getattr(f, label).astype(np.int64)
            acc += t[codes[:, i][:, None], codes[:, i][None, :]] * strides[i]
        tables[label] = acc.astype(np.int32)
    top = int(sum(f.top * s for f, s in zip(factors, strides)))
    bounded = all(f.bounded for f in factors)
    bottom = int(sum(f.bottom * s for f, s in zip(factors, strides))) if bounded else None
    return FiniteAlgebra(
        name=name or "x".join(f.name for f in factors),
        size=total,
        element_names=tuple(names),
        top=top,
        bottom=bottom,
        **tables,
    )


def decode_product_index(sizes: list[int], index: int) -> tuple[int, ...]:
    out = []
    for s in reversed(sizes):
        out.append(index % s)
        index //= s
    return tuple(reversed(out))


def encode_product_index(sizes: list[int], coords: Iterable[int]) -> int:
    idx = 0
    for s, c in zip(sizes, coords):
        idx = idx * s + c
    return idx


def algebras_equal(A: FiniteAlgebra, B: FiniteAlgebra) -> bool:
    """Bit-exact equality of carriers and tables (names included)."""
    return (
        A.size == B.size
        and A.element_names == B.element_names
        and A.top == B.top
        and A.bottom == B.bottom
        and all(
            (getattr(A, t) == getattr(B, t)).all()
            for t in ("meet", "join", "mult", "res")
        )
    )
