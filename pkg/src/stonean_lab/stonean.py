"""Stonean-specific structure: the Stone equation, the equivalence battery,
bottom adjunction, element decomposition and the retraction checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    FiniteAlgebra,
    ValidationReport,
    boolean_skeleton,
    dense_elements,
    negation_table,
    validate,
)
from .errors import ContractError, InvariantError, PreconditionError, UnsupportedOperationError
from .filters import FilterSet, I_FILTER, is_ifilter_mask, quotient
from .homs import are_isomorphic, is_hom, validate_hom

RETRACTION_SIZE_CAP = 8


def is_stonean(A: FiniteAlgebra) -> bool:
    """The Stone equation: neg x v neg neg x = top, for every x."""
    if not A.bounded:
        raise UnsupportedOperationError("the Stone equation needs a bottom")
    ng = negation_table(A)
    return bool((A.join[ng, ng[ng]] == A.top).all())


def stone_witness(A: FiniteAlgebra) -> int | None:
    """First element falsifying the Stone equation, if any."""
    ng = negation_table(A)
    bad = np.flatnonzero(A.join[ng, ng[ng]] != A.top)
    return int(bad[0]) if bad.size else None


@dataclass(frozen=True)
class EquivalenceBattery:
    """Outcome of the three independent Stonean characterizations, with the
    first falsifying witness of each failing condition."""

    stone_equation: bool
    pseudocomplement_demorgan: bool
    skeleton_contains_negations: bool
    witnesses: tuple[tuple[int, ...], ...] = ((), (), ())

    @property
    def values(self) -> tuple[bool, bool, bool]:
        return (
            self.stone_equation,
            self.pseudocomplement_demorgan,
            self.skeleton_contains_negations,
        )


def stonean_equivalence_battery(A: FiniteAlgebra) -> EquivalenceBattery:
    """Evaluate the three equivalent Stonean characterizations independently
    and insist they agree; disagreement would falsify the implementation."""
    if not A.bounded:
        raise UnsupportedOperationError("battery needs a bounded algebra")
    ng = negation_table(A)
    ids = np.arange(A.size)

    bad1 = np.flatnonzero(A.join[ng, ng[ng]] != A.top)
    cond1 = bad1.size == 0
    wit1 = () if cond1 else (int(bad1[0]),)

    bad_pseudo = np.flatnonzero(A.meet[ids, ng] != A.bottom)
    bad_dm = np.argwhere(ng[A.meet] != A.join[ng[:, None], ng[None, :]])
    cond2 = bad_pseudo.size == 0 and bad_dm.size == 0
    if bad_pseudo.size:
        wit2 = (int(bad_pseudo[0]),)
    elif bad_dm.size:
        wit2 = tuple(int(v) for v in bad_dm[0])
    else:
        wit2 = ()

    skel = set(boolean_skeleton(A).elements)
    bad3 = [x for x in range(A.size) if int(ng[x]) not in skel]
    cond3 = not bad3
    wit3 = () if cond3 else (bad3[0],)

    batt = EquivalenceBattery(cond1, cond2, cond3, (wit1, wit2, wit3))
    if not (cond1 == cond2 == cond3):
        raise InvariantError(f"Stonean characterizations disagree on {A.name}: {batt.values}")
    return batt


def adjoin_bottom(A: FiniteAlgebra) -> FiniteAlgebra:
    """S(A): adjoin a fresh bottom o below everything, absorbing for the
    product, with the three-case residuum extension.  A fresh o is added
    even when A already has a bottom.  Old element i becomes i + 1."""
    n = A.size
    m = n + 1
    names = ["o"]
    while names[0] in A.element_names:
        names[0] += "_"
    names += list(A.element_names)

    def lift(table):
        t = np.zeros((m, m), dtype=np.int32)
        t[1:, 1:] = table + 1
        return t

    meet = lift(A.meet)
    join = lift(A.join)
    join[0, :] = np.arange(m)
    join[:, 0] = np.arange(m)
    join[0, 0] = 0
    mult = lift(A.mult)
    res = lift(A.res)
    res[0, :] = A.top + 1          # o -> y = top
    res[1:, 0] = 0                 # x -> o = o for x in A
    res[0, 0] = A.top + 1
    out = FiniteAlgebra(
        name=f"S({A.name})",
        size=m,
        element_names=tuple(names),
        meet=meet,
        join=join,
        mult=mult,
        res=res,
        top=A.top + 1,
        bottom=0,
    )
    rep = validate(out)
    if not rep.ok:
        raise InvariantError(f"S({A.name}) failed validation: {rep.violations}")
    if not is_stonean(out):
        raise InvariantError(f"S({A.name}) is not Stonean")
    if dense_elements(out).elements != tuple(range(1, m)):
        raise InvariantError(f"dense part of S({A.name}) is not the image of {A.name}")
    return out


def lift_hom(A: FiniteAlgebra, C: FiniteAlgebra, h) -> np.ndarray:
    """Extend a residuated-lattice hom A -> C to S(A) -> S(C), sending the
    fresh bottom to the fresh bottom."""
    h = np.asarray(h, dtype=np.int32)
    rep = validate_hom(A, C, h, bounded=False)
    if not rep.ok:
        raise ContractError(f"not a homomorphism: {rep.violations}")
    lifted = np.concatenate(([0], h + 1)).astype(np.int32)
    SA, SC = adjoin_bottom(A), adjoin_bottom(C)
    if not is_hom(SA, SC, lifted, bounded=True):
        raise InvariantError("lifted map is not a bounded homomorphism")
    return lifted


def decompose(A: FiniteAlgebra, x: int) -> tuple[int, int]:
    """Split x as (neg neg x) * (neg neg x -> x): Boolean part and the
    unique dense witness above neg x."""
    if not is_stonean(A):
        raise PreconditionError(f"{A.name} is not Stonean")
    ng = negation_table(A)
    b = int(ng[ng[x]])
    d = int(A.res[b, x])
    skel = boolean_skeleton(A).elements
    dense = dense_elements(A).elements
    if b not in skel or d not in dense:
        raise InvariantError("decomposition parts land outside B(A) x D(A)")
    if A.mult[b, d] != x or A.meet[b, d] != x:
        raise InvariantError("decomposition does not recompose")
    if not A.leq_matrix[ng[x], d]:
        raise InvariantError("dense witness is not above neg x")
    for alt in dense:
        if alt != d and A.mult[b, alt] == x and A.leq_matrix[ng[x], alt]:
            raise InvariantError("dense witness above neg x is not unique")
    return b, d


def weak_distributivity_check(A: FiniteAlgebra) -> ValidationReport:
    """y v (neg neg z ^ x) = (y v neg neg z) ^ (y v x), over all triples."""
    if not is_stonean(A):
        raise PreconditionError(f"{A.name} is not Stonean")
    ng = negation_table(A)
    dn = ng[ng]
    lhs = A.join[:, A.meet[dn]]                     # [y, z, x]
    rhs = A.meet[A.join[:, dn][:, :, None], A.join[:, None, :]]
    bad = np.argwhere(lhs != rhs)
    violations = []
    if bad.size:
        y, z, x = (int(v) for v in bad[0])
        violations.append(("weak-distributivity", (y, z, x)))
    return ValidationReport.from_violations(violations)


def squotient_iso_check(A: FiniteAlgebra, F: FilterSet) -> bool:
    """S(A/F) vs S(A)/F, the latter with F read inside S(A); isomorphism
    is established by search."""
    if F.algebra is not A or F.kind != I_FILTER:
        raise ContractError("need an i-filter of A")
    left = adjoin_bottom(quotient(A, F).quotient)
    SA = adjoin_bottom(A)
    shifted = FilterSet(SA, F.mask << 1, I_FILTER)
    if not is_ifilter_mask(SA, shifted.mask):
        raise InvariantError("filter image is not an i-filter of S(A)")
    right = quotient(SA, shifted).quotient
    return are_isomorphic(left, right) is not None


def boolean_retraction_check(A: FiniteAlgebra) -> ValidationReport:
    """Enumerate all increasing idempotent homomorphisms of A onto its
    skeleton and verify each one is double negation (and that double
    negation itself qualifies).  Sizes beyond the cap return a skipped
    report, since the candidate space is |B(A)|^|A|."""
    if not A.bounded:
        raise UnsupportedOperationError("retraction check needs a bounded algebra")
    if not is_stonean(A):
        raise PreconditionError(f"{A.name} is not Stonean")
    if A.size > RETRACTION_SIZE_CAP:
        return ValidationReport.from_violations(
            [], notes=(f"skipped: size {A.size} exceeds cap {RETRACTION_SIZE_CAP}",)
        )
    ng = negation_table(A)
    dn = ng[ng].astype(np.int32)
    skel = boolean_skeleton(A).elements
    L = A.leq_matrix
    candidates = []
    for x in range(A.size):
        if x == A.top:
            candidates.append([A.top])
        elif x == A.bottom:
            candidates.append([A.bottom])
        else:
            candidates.append([b for b in skel if L[x, b]])
    violations = []
    qualifying = 0
    for images in itertools.product(*candidates):
        f = np.array(images, dtype=np.int32)
        if not (f[f] == f).all():
            continue
        if not is_hom(A, A, f, bounded=True):
            continue
        qualifying += 1
        if not (f == dn).all():
            bad = int(np.flatnonzero(f != dn)[0])
            violations.append(("retraction-differs-from-double-negation", (bad,)))
    if qualifying == 0:
        violations.append(("double-negation-not-a-retraction", (0,)))
    return ValidationReport.from_violations(violations, notes=(f"qualifying={qualifying}",))
