"""Build a Stonean algebra back from a triple.

For a finite Boolean component the Stone space is just the discrete set of
atoms, every section is continuous, and the algebra of global sections is
the direct product of the per-atom stalks: bottom-adjoined quotients of D
by the filters attached to the atom complements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    FiniteAlgebra,
    ValidationReport,
    encode_product_index,
    is_boolean_algebra,
    is_directly_indecomposable,
    negation_table,
    product_algebra,
)
from .errors import (
    ContractError,
    InvariantError,
    PreconditionError,
    UnsupportedOperationError,
)
from .filters import FilterSet, QuotientResult, crt_solve, quotient
from .stonean import adjoin_bottom, is_stonean
from .triples import Triple, TripleMorphism, functor_T_object, is_triple_iso, validate_triple


def atoms_of(B: FiniteAlgebra) -> list[int]:
    """Minimal nonzero elements; checks that every element is the join of
    the atoms below it."""
    if not is_boolean_algebra(B):
        raise ContractError(f"{B.name} is not a Boolean algebra")
    L = B.leq_matrix
    atoms = []
    for x in range(B.size):
        if x == B.bottom:
            continue
        below = [y for y in range(B.size) if L[y, x] and y not in (x, B.bottom)]
        if not below:
            atoms.append(x)
    for b in range(B.size):
        acc = B.bottom
        for x in atoms:
            if L[x, b]:
                acc = int(B.join[acc, x])
        if acc != b:
            raise InvariantError(f"element {b} is not the join of its atoms")
    return atoms


@dataclass(frozen=True, eq=False)
class StalkSystem:
    triple: Triple
    atoms: tuple[int, ...]
    stalk_filters: tuple[FilterSet, ...]
    quotients: tuple[QuotientResult, ...]
    stalks: tuple[FiniteAlgebra, ...]


def build_stalks(t: Triple) -> StalkSystem:
    """Per-atom filters F_x = phi(complement of x), quotients D/F_x, and
    bottom-adjoined stalks."""
    rep = validate_triple(t)
    if not rep.ok:
        raise PreconditionError(f"invalid triple: {rep.violations}")
    ngb = negation_table(t.B)
    atoms = atoms_of(t.B)
    stalk_filters = tuple(t.phi[int(ngb[x])] for x in atoms)
    quotients = tuple(quotient(t.D, F) for F in stalk_filters)
    stalks = tuple(adjoin_bottom(q.quotient) for q in quotients)
    for st in stalks:
        if not (is_stonean(st) and is_directly_indecomposable(st)):
            raise InvariantError(f"stalk {st.name} is not directly indecomposable Stonean")
    return StalkSystem(t, tuple(atoms), stalk_filters, quotients, stalks)


@dataclass(frozen=True, eq=False)
class GlobalSections:
    algebra: FiniteAlgebra
    h: np.ndarray  # B-local -> local index in T(algebra).B
    k: np.ndarray  # D-local -> local index in T(algebra).D
    stalk_system: StalkSystem
    triple: Triple  # functor_T_object(algebra)


def global_sections(t: Triple) -> GlobalSections:
    """The reconstructed Stonean algebra with the isomorphism witness
    (h, k) between t and the triple of the reconstruction."""
    rep = validate_triple(t)
    if not rep.ok:
        raise PreconditionError(f"invalid triple: {rep.violations}")
    if t.B.size < 2:
        raise UnsupportedOperationError("reconstruction needs a nontrivial Boolean part")
    system = build_stalks(t)
    stalks = list(system.stalks)
    A = product_algebra(stalks, name="Sections")
    TA = functor_T_object(A)
    sizes = [st.size for st in stalks]
    L = t.B.leq_matrix
    b_pos = {int(e): i for i, e in enumerate(TA.b_embedding)}
    d_pos = {int(e): i for i, e in enumerate(TA.d_embedding)}
    h = np.empty(t.B.size, dtype=np.int32)
    for a in range(t.B.size):
        coords = [
            stalks[i].top if L[x, a] else 0
            for i, x in enumerate(system.atoms)
        ]
        h[a] = b_pos[encode_product_index(sizes, coords)]
    k = np.empty(t.D.size, dtype=np.int32)
    for d in range(t.D.size):
        coords = [int(system.quotients[i].projection[d]) + 1 for i in range(len(stalks))]
        k[d] = d_pos[encode_product_index(sizes, coords)]
    if not is_triple_iso(t, TA, TripleMorphism(h, k)):
        raise InvariantError("global sections do not reproduce the triple")
    return GlobalSections(A, h, k, system, TA)


def intersection_property_check(t: Triple) -> ValidationReport:
    """For every b: the intersection of the stalk filters at atoms below b
    is phi(neg b); at the top this is the global intersection {top}."""
    system = build_stalks(t)
    ngb = negation_table(t.B)
    L = t.B.leq_matrix
    full = (1 << t.D.size) - 1
    violations = []
    for b in range(t.B.size):
        inter = full
        for i, x in enumerate(system.atoms):
            if L[x, b]:
                inter &= system.stalk_filters[i].mask
        if inter != t.phi[int(ngb[b])].mask:
            violations.append(("intersection-property", (b,)))
    return ValidationReport.from_violations(violations)


def section_extension(t: Triple, Y, f: dict[int, int]) -> int:
    """A single d in D restricting to the prescribed positive stalk values
    on the atom subset Y; solved through the congruence CRT.  Values of f
    are stalk element indices and must be dense there (nonzero)."""
    system = build_stalks(t)
    atom_index = {x: i for i, x in enumerate(system.atoms)}
    constraints = []
    for y in sorted(Y):
        if y not in atom_index:
            raise ContractError(f"{y} is not an atom of the Boolean part")
        i = atom_index[y]
        val = f[y]
        if not (1 <= val < system.stalks[i].size):
            raise PreconditionError("section must be positive (dense) on Y")
        cls = val - 1  # stalk index back to quotient class
        proj = system.quotients[i].projection
        rep = int(np.flatnonzero(proj == cls)[0])
        constraints.append((rep, system.stalk_filters[i]))
    if not constraints:
        return int(t.D.top)
    return crt_solve(t.D, constraints)
