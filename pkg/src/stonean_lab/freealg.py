"""Finitely generated free algebras: the product-of-stalks assembly for
varieties of Stonean residuated lattices, the index formula for the factor
list, the associated triple, and an independent term-closure oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .core import (
    FiniteAlgebra,
    decode_product_index,
    encode_product_index,
    product_algebra,
    validate,
)
from .errors import ContractError, InvariantError, PreconditionError, SizeLimitError
from .filters import FilterSet, I_FILTER, mask_of
from .fixtures import b2, trivial
from .stonean import adjoin_bottom
from .triples import Triple, TripleMorphism, functor_T_object, is_triple_iso, validate_triple

DEFAULT_SIZE_CAP = 10_000


def k_index(n: int, j: int) -> int:
    """Least k with C(n,0)+...+C(n,k) >= j, for 1 <= j <= 2^n."""
    if not 1 <= j <= 2**n:
        raise PreconditionError(f"j must lie in [1, 2^{n}]")
    acc = 0
    for k in range(n + 1):
        acc += comb(n, k)
        if acc >= j:
            return k
    raise InvariantError("partial binomial sums never reached j")


def _factor_plan(n: int) -> list[int]:
    return [k_index(n, j) for j in range(1, 2**n + 1)]


def assemble_free(
    n: int, stalk_frees: list[FiniteAlgebra], size_cap: int = DEFAULT_SIZE_CAP
) -> FiniteAlgebra:
    """Product over j of S(stalk_frees[k_j]): the free algebra on n
    generators when stalk_frees[k] is the free companion algebra on k."""
    if len(stalk_frees) != n + 1:
        raise ContractError(f"need stalk frees for k = 0..{n}")
    if n >= 1 and all(f.size == 1 for f in stalk_frees[1:]):
        raise ContractError(
            "stalk list describes the Boolean variety; its free algebra is "
            "the closed form B2^(2^n), not a product of stalks"
        )
    total = 1
    for k in range(n + 1):
        total *= (stalk_frees[k].size + 1) ** comb(n, k)
    if total > size_cap:
        raise SizeLimitError(total, size_cap)
    factors = [adjoin_bottom(stalk_frees[k]) for k in _factor_plan(n)]
    return product_algebra(factors, name=f"Free({n})")


def triple_of_free(
    n: int, stalk_frees: list[FiniteAlgebra], size_cap: int = DEFAULT_SIZE_CAP
) -> Triple:
    """The triple (B2^(2^n), product of stalk frees, coordinate phi); also
    verified isomorphic to the triple of the assembled free algebra."""
    A = assemble_free(n, stalk_frees, size_cap)  # validates inputs and cap
    plan = _factor_plan(n)
    m = len(plan)
    B = product_algebra([b2()] * m, name=f"B2^{m}")
    d_factors = [stalk_frees[k] for k in plan]
    D = (
        product_algebra(d_factors, name=f"FreeDense({n})")
        if m > 1
        else d_factors[0]
    )
    d_sizes = [f.size for f in d_factors]
    phi = []
    for b in range(B.size):
        bits = decode_product_index([2] * m, b)
        members = []
        for d in range(D.size):
            coords = decode_product_index(d_sizes, d) if m > 1 else (d,)
            if all(
                bits[j] == 1 or coords[j] == d_factors[j].top for j in range(m)
            ):
                members.append(d)
        phi.append(FilterSet(D, mask_of(members), I_FILTER))
    t = Triple(B=B, D=D, phi=tuple(phi))
    rep = validate_triple(t)
    if not rep.ok:
        raise InvariantError(f"free triple fails validation: {rep.violations}")

    TA = functor_T_object(A)
    s_sizes = [f.size + 1 for f in d_factors]       # stalk sizes after adjoining o
    s_tops = [f.top + 1 for f in d_factors]         # old top shifts by one
    b_pos = {int(e): i for i, e in enumerate(TA.b_embedding)}
    d_pos = {int(e): i for i, e in enumerate(TA.d_embedding)}
    h = np.empty(B.size, dtype=np.int32)
    for b in range(B.size):
        bits = decode_product_index([2] * m, b)
        coords = [s_tops[j] if bits[j] else 0 for j in range(m)]
        h[b] = b_pos[encode_product_index(s_sizes, coords)]
    k = np.empty(D.size, dtype=np.int32)
    for d in range(D.size):
        coords = decode_product_index(d_sizes, d) if m > 1 else (d,)
        k[d] = d_pos[encode_product_index(s_sizes, [c + 1 for c in coords])]
    if not is_triple_iso(t, TA, TripleMorphism(h, k)):
        raise InvariantError("free triple does not match the assembled algebra")
    return t


@dataclass(frozen=True, eq=False)
class FreeResult:
    algebra: FiniteAlgebra
    generators: tuple[int, ...]


def free_by_term_closure(
    generators_of_variety: list[FiniteAlgebra], n: int, size_cap: int = DEFAULT_SIZE_CAP
) -> FreeResult:
    """Free algebra on n generators in the variety generated by the given
    algebras: close the projection tuples inside the product over all
    n-tuples of all members.  Breadth-first, deterministic order."""
    K = list(generators_of_variety)
    if not K:
        raise ContractError("need at least one generating algebra")
    bounded = K[0].bounded
    if any(A.bounded != bounded for A in K):
        raise ContractError("generating algebras must share boundedness")

    coord_tables: list[FiniteAlgebra] = []
    coord_assignments: list[tuple[int, ...]] = []
    for A in K:
        for assignment in itertools.product(range(A.size), repeat=n):
            coord_tables.append(A)
            coord_assignments.append(assignment)
    width = len(coord_tables)

    def vec(values) -> bytes:
        return np.asarray(values, dtype=np.int16).tobytes()

    def unvec(b: bytes) -> np.ndarray:
        return np.frombuffer(b, dtype=np.int16)

    index: dict[bytes, int] = {}
    order: list[bytes] = []

    def add(b: bytes) -> int:
        if b in index:
            return index[b]
        if len(order) >= size_cap:
            raise SizeLimitError(len(order) + 1, size_cap)
        index[b] = len(order)
        order.append(b)
        return index[b]

    add(vec([A.top for A in coord_tables]))
    if bounded:
        add(vec([A.bottom for A in coord_tables]))
    gen_ids = tuple(
        add(vec([assignment[g] for assignment in coord_assignments]))
        for g in range(n)
    )

    # one fancy-index application per op over grouped coordinates
    groups: list[tuple[slice, FiniteAlgebra]] = []
    start = 0
    for A in K:
        count = A.size**n
        groups.append((slice(start, start + count), A))
        start += count

    def apply(label: str, xb: bytes, yb: bytes) -> bytes:
        x, y = unvec(xb), unvec(yb)
        out = np.empty(width, dtype=np.int16)
        for sl, A in groups:
            out[sl] = getattr(A, label)[x[sl], y[sl]]
        return out.tobytes()

    i = 0
    while i < len(order):
        xb = order[i]
        for j in range(i + 1):
            yb = order[j]
            for label in ("meet", "join", "mult", "res"):
                add(apply(label, xb, yb))
                add(apply(label, yb, xb))
        i += 1

    size = len(order)
    tables = {}
    for label in ("meet", "join", "mult", "res"):
        t = np.empty((size, size), dtype=np.int32)
        for a in range(size):
            for b_ in range(size):
                t[a, b_] = index[apply(label, order[a], order[b_])]
        tables[label] = t
    alg = FiniteAlgebra(
        name=f"FreeClosure({n})",
        size=size,
        element_names=tuple(f"w{i}" for i in range(size)),
        top=0,
        bottom=1 if bounded else None,
        **tables,
    )
    rep = validate(alg)
    if not rep.ok:
        raise InvariantError(f"closure algebra invalid: {rep.violations}")
    return FreeResult(alg, gen_ids)


# --- variety registry for the oracle-backed CLI path ------------------------


def goedel_hoop_chain(m: int) -> FiniteAlgebra:
    """Bottom-free Goedel chain on m elements (m-1 dense generators + top)."""
    from .fixtures import _goedel_chain

    names = tuple(f"d{i}" for i in range(m - 1)) + ("top",)
    return _goedel_chain(f"HC{m}", names, bounded=False)


def goedel_stalk_frees(n: int, size_cap: int = DEFAULT_SIZE_CAP) -> list[FiniteAlgebra]:
    """Free Goedel-hoop algebras on 0..n generators, by term closure over
    the chain with k+1 elements (a k-generated Goedel hoop chain has at
    most k+1 elements)."""
    out = [trivial()]
    for k in range(1, n + 1):
        out.append(free_by_term_closure([goedel_hoop_chain(k + 1)], k, size_cap).algebra)
    return out
