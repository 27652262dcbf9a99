"""Triples (Boolean algebra, residuated lattice, connecting filter map),
their morphisms, the functor from Stonean algebras, hom reconstruction and
the bridge to product-style triples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    FiniteAlgebra,
    ValidationReport,
    boolean_skeleton,
    dense_elements,
    is_boolean_algebra,
    is_distributive_lattice,
    negation_table,
    validate,
)
from .errors import (
    ContractError,
    InvariantError,
    PreconditionError,
    ProductTripleAxiomError,
)
from .filters import (
    FilterSet,
    I_FILTER,
    biimplication,
    generate_ifilter,
    is_central_filter,
    is_ifilter_mask,
    mask_of,
    rho_of_mask,
    _bits,
)
from .homs import validate_hom
from .stonean import decompose, is_stonean


@dataclass(frozen=True, eq=False)
class Triple:
    """(B, D, phi) with phi a bounded-lattice hom from B into the i-filter
    lattice of D.  Triples built by the functor carry their provenance:
    embeddings of B and D into the source algebra."""

    B: FiniteAlgebra
    D: FiniteAlgebra
    phi: tuple[FilterSet, ...]
    b_embedding: Optional[np.ndarray] = None
    d_embedding: Optional[np.ndarray] = None
    source: Optional[FiniteAlgebra] = None

    def phi_masks(self) -> tuple[int, ...]:
        return tuple(f.mask for f in self.phi)

    def __repr__(self):
        return f"Triple(B={self.B.name}, D={self.D.name})"


@dataclass(frozen=True, eq=False)
class TripleMorphism:
    h: np.ndarray
    k: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, TripleMorphism)
            and np.array_equal(self.h, other.h)
            and np.array_equal(self.k, other.k)
        )

    __hash__ = None

    def __repr__(self):
        return f"TripleMorphism(h={self.h.tolist()}, k={self.k.tolist()})"


def triples_equal(t1: Triple, t2: Triple) -> bool:
    """Same component tables and exactly the same connecting filters."""
    from .core import algebras_equal

    return (
        algebras_equal(t1.B, t2.B)
        and algebras_equal(t1.D, t2.D)
        and t1.phi_masks() == t2.phi_masks()
    )


def validate_triple(t: Triple) -> ValidationReport:
    violations: list[tuple[str, tuple[int, ...]]] = []
    if not is_boolean_algebra(t.B):
        violations.append(("B-not-boolean", (0,)))
    if not validate(t.D).ok:
        violations.append(("D-not-residuated-lattice", (0,)))
    if len(t.phi) != t.B.size:
        violations.append(("phi-wrong-length", (len(t.phi),)))
        return ValidationReport.from_violations(violations)
    for b, f in enumerate(t.phi):
        if f.algebra is not t.D or not is_ifilter_mask(t.D, f.mask):
            violations.append(("phi-not-ifilter", (b,)))
    if not violations:
        full = (1 << t.D.size) - 1
        if t.phi[t.B.bottom].mask != 1 << t.D.top:
            violations.append(("phi-bottom", (int(t.B.bottom),)))
        if t.phi[t.B.top].mask != full:
            violations.append(("phi-top", (int(t.B.top),)))
        for a in range(t.B.size):
            for b in range(t.B.size):
                if t.phi[t.B.meet[a, b]].mask != t.phi[a].mask & t.phi[b].mask:
                    violations.append(("phi-meet", (a, b)))
                joined = generate_ifilter(t.D, _bits(t.phi[a].mask | t.phi[b].mask))
                if t.phi[t.B.join[a, b]].mask != joined.mask:
                    violations.append(("phi-join", (a, b)))
    seen = set()
    deduped = []
    for law, wit in violations:
        if law not in seen:
            seen.add(law)
            deduped.append((law, wit))
    return ValidationReport.from_violations(deduped)


def functor_T_object(A: FiniteAlgebra) -> Triple:
    """T(A) = (B(A), D(A), phi_A) with phi_A(a) = [neg a) meet D(A)."""
    if not A.bounded or not is_stonean(A):
        raise PreconditionError(f"{A.name} is not a Stonean residuated lattice")
    skel = boolean_skeleton(A)
    dal = dense_elements(A)
    ng = negation_table(A)
    L = A.leq_matrix
    phi = []
    for a in skel.elements:
        members = [i for i, d in enumerate(dal.elements) if L[ng[a], d]]
        phi.append(FilterSet(dal.algebra, mask_of(members), I_FILTER))
    t = Triple(
        B=skel.algebra,
        D=dal.algebra,
        phi=tuple(phi),
        b_embedding=skel.embedding,
        d_embedding=dal.embedding,
        source=A,
    )
    rep = validate_triple(t)
    if not rep.ok:
        raise InvariantError(f"T({A.name}) fails triple validation: {rep.violations}")
    return t


def functor_T_morphism(A1: FiniteAlgebra, A2: FiniteAlgebra, f) -> TripleMorphism:
    """T(f): restrict a bounded hom between Stonean algebras to the skeleton
    and the dense part, in triple-local coordinates."""
    f = np.asarray(f, dtype=np.int32)
    rep = validate_hom(A1, A2, f, bounded=True)
    if not rep.ok:
        raise ContractError(f"not a bounded homomorphism: {rep.violations}")
    t1, t2 = functor_T_object(A1), functor_T_object(A2)
    b_pos = {int(e): i for i, e in enumerate(t2.b_embedding)}
    d_pos = {int(e): i for i, e in enumerate(t2.d_embedding)}
    try:
        h = np.array([b_pos[int(f[e])] for e in t1.b_embedding], dtype=np.int32)
        k = np.array([d_pos[int(f[e])] for e in t1.d_embedding], dtype=np.int32)
    except KeyError:
        raise InvariantError("hom image leaves skeleton or dense part") from None
    m = TripleMorphism(h, k)
    rep = validate_morphism(t1, t2, m)
    if not rep.ok:
        raise InvariantError(f"T(f) fails morphism axioms: {rep.violations}")
    return m


def validate_morphism(t1: Triple, t2: Triple, m: TripleMorphism) -> ValidationReport:
    """M1-M3, with M3 additionally cross-checked as well-definedness of the
    induced quotient maps d/phi1(a) -> k(d)/phi2(h(a))."""
    violations: list[tuple[str, tuple[int, ...]]] = []
    rep_h = validate_hom(t1.B, t2.B, m.h, bounded=True)
    if not rep_h.ok:
        violations.append(("M1-h-not-boolean-hom", rep_h.violations[0][1]))
    rep_k = validate_hom(t1.D, t2.D, m.k, bounded=False)
    if not rep_k.ok:
        violations.append(("M2-k-not-rl-hom", rep_k.violations[0][1]))
    if violations:
        return ValidationReport.from_violations(violations)
    for a in range(t1.B.size):
        image = mask_of(int(m.k[d]) for d in _bits(t1.phi[a].mask))
        target = t2.phi[int(m.h[a])].mask
        if image & ~target:
            violations.append(("M3-filter-image", (a,)))
            break
    wd_ok = True
    for a in range(t1.B.size):
        fa1, fa2 = t1.phi[a], t2.phi[int(m.h[a])]
        for d1 in range(t1.D.size):
            for d2 in range(t1.D.size):
                if biimplication(t1.D, d1, d2) in fa1:
                    if biimplication(t2.D, int(m.k[d1]), int(m.k[d2])) not in fa2:
                        wd_ok = False
    m3_ok = not any(law.startswith("M3") for law, _ in violations)
    if wd_ok != m3_ok:
        raise InvariantError("M3 and quotient well-definedness disagree")
    return ValidationReport.from_violations(violations)


def identity_morphism(t: Triple) -> TripleMorphism:
    return TripleMorphism(
        np.arange(t.B.size, dtype=np.int32), np.arange(t.D.size, dtype=np.int32)
    )


def compose_morphisms(m1: TripleMorphism, m2: TripleMorphism) -> TripleMorphism:
    """m2 after m1."""
    return TripleMorphism(m2.h[m1.h], m2.k[m1.k])


def is_triple_iso(t1: Triple, t2: Triple, m: TripleMorphism) -> bool:
    """Bijective components plus filter-image equality (I3)."""
    if not validate_morphism(t1, t2, m).ok:
        return False
    if sorted(int(v) for v in m.h) != list(range(t2.B.size)):
        return False
    if sorted(int(v) for v in m.k) != list(range(t2.D.size)):
        return False
    for a in range(t1.B.size):
        image = mask_of(int(m.k[d]) for d in _bits(t1.phi[a].mask))
        if image != t2.phi[int(m.h[a])].mask:
            return False
    return True


def reconstruct_hom(A1: FiniteAlgebra, A2: FiniteAlgebra, m: TripleMorphism) -> np.ndarray:
    """The unique bounded hom f with T(f) = (h, k), built pointwise as
    f(x) = h(neg neg x) * k(dense witness of x)."""
    t1, t2 = functor_T_object(A1), functor_T_object(A2)
    rep = validate_morphism(t1, t2, m)
    if not rep.ok:
        raise PreconditionError(f"not a triple morphism: {rep.violations}")
    lem = lemma_checks(A1, A2, m)
    if not lem.ok:
        raise InvariantError(f"morphism exchange identities fail: {lem.violations}")
    b_pos = {int(e): i for i, e in enumerate(t1.b_embedding)}
    d_pos = {int(e): i for i, e in enumerate(t1.d_embedding)}
    f = np.empty(A1.size, dtype=np.int32)
    for x in range(A1.size):
        b, d = decompose(A1, x)
        hb = t2.b_embedding[int(m.h[b_pos[b]])]
        kd = t2.d_embedding[int(m.k[d_pos[d]])]
        f[x] = A2.mult[hb, kd]
    rep = validate_hom(A1, A2, f, bounded=True)
    if not rep.ok:
        raise InvariantError(f"reconstructed map is not a hom: {rep.violations}")
    if functor_T_morphism(A1, A2, f) != m:
        raise InvariantError("T(reconstructed hom) differs from the morphism")
    return f


def lemma_checks(A1: FiniteAlgebra, A2: FiniteAlgebra, m: TripleMorphism) -> ValidationReport:
    """Two identities every triple morphism satisfies, quantified
    exhaustively: agreement of products with a Boolean factor, and
    k(a v d) = h(a) v k(d)."""
    t1, t2 = functor_T_object(A1), functor_T_object(A2)
    rep = validate_morphism(t1, t2, m)
    if not rep.ok:
        raise PreconditionError(f"not a triple morphism: {rep.violations}")
    d_pos = {int(e): i for i, e in enumerate(t1.d_embedding)}
    violations: list[tuple[str, tuple[int, ...]]] = []
    done = False
    for bl, a in enumerate(t1.b_embedding):
        ha = t2.b_embedding[int(m.h[bl])]
        for d in t1.d_embedding:
            kd = t2.d_embedding[int(m.k[d_pos[int(d)]])]
            for e in t1.d_embedding:
                ke = t2.d_embedding[int(m.k[d_pos[int(e)]])]
                if A1.mult[a, d] == A1.mult[a, e] and A2.mult[ha, kd] != A2.mult[ha, ke]:
                    violations.append(("lemma-product-agreement", (int(a), int(d), int(e))))
                    done = True
                    break
            if done:
                break
        if done:
            break
    for bl, a in enumerate(t1.b_embedding):
        ha = t2.b_embedding[int(m.h[bl])]
        for d in t1.d_embedding:
            join_ad = int(A1.join[a, d])
            k_join = t2.d_embedding[int(m.k[d_pos[join_ad]])]
            kd = t2.d_embedding[int(m.k[d_pos[int(d)]])]
            if k_join != A2.join[ha, kd]:
                violations.append(("lemma-join-exchange", (int(a), int(d))))
                break
    return ValidationReport.from_violations(violations)


# --- product-triple bridge ---------------------------------------------------


def phi_from_vee(B: FiniteAlgebra, C: FiniteAlgebra, vee) -> Triple:
    """Triple from a product-style (B, C, vee) structure: the connecting
    filter at b collects the fixed points of joining with neg b."""
    vee = np.asarray(vee, dtype=np.int32)
    if vee.shape != (B.size, C.size):
        raise ContractError("vee must be a |B| x |C| table")
    _check_vee_axioms(B, C, vee)
    ngb = negation_table(B)
    phi = []
    for b in range(B.size):
        members = [d for d in range(C.size) if vee[ngb[b], d] == d]
        phi.append(FilterSet(C, mask_of(members), I_FILTER))
    t = Triple(B=B, D=C, phi=tuple(phi))
    rep = validate_triple(t)
    if not rep.ok:
        raise InvariantError(f"vee-induced triple invalid: {rep.violations}")
    return t


def _check_vee_axioms(B: FiniteAlgebra, C: FiniteAlgebra, vee) -> None:
    ngb = negation_table(B)
    for b in range(B.size):
        if vee[b, C.top] != C.top:
            raise ProductTripleAxiomError("V1", (b, int(C.top)))
        for c in range(C.size):
            for c2 in range(C.size):
                for label in ("meet", "join", "mult", "res"):
                    tc = getattr(C, label)
                    if vee[b, tc[c, c2]] != tc[vee[b, c], vee[b, c2]]:
                        raise ProductTripleAxiomError("V1", (b, c, c2))
    for c in range(C.size):
        for b in range(B.size):
            for b2 in range(B.size):
                if vee[B.meet[b, b2], c] != C.meet[vee[b, c], vee[b2, c]]:
                    raise ProductTripleAxiomError("V1", (b, b2, c))
                if vee[B.join[b, b2], c] != C.join[vee[b, c], vee[b2, c]]:
                    raise ProductTripleAxiomError("V1", (b, b2, c))
    for c in range(C.size):
        if vee[B.bottom, c] != c or vee[B.top, c] != C.top:
            raise ProductTripleAxiomError("V2", (c,))
    for b in range(B.size):
        for b2 in range(B.size):
            for c in range(C.size):
                for c2 in range(C.size):
                    lhs = C.join[vee[b, c], vee[b2, c2]]
                    mid = vee[B.join[b, b2], C.join[c, c2]]
                    rhs = vee[b, vee[b2, C.join[c, c2]]]
                    if lhs != mid or mid != rhs:
                        raise ProductTripleAxiomError("V3", (b, b2, c, c2))
    for b in range(B.size):
        for c in range(C.size):
            for c2 in range(C.size):
                lhs = C.mult[vee[b, c], c2]
                rhs = C.meet[vee[ngb[b], c2], vee[b, C.mult[c, c2]]]
                if lhs != rhs:
                    raise ProductTripleAxiomError("V4", (b, c, c2))


def vee_from_phi(t: Triple) -> np.ndarray:
    """Recover the join-style operator from a triple whose connecting
    filters are central lattice filters of a distributive D."""
    if not is_distributive_lattice(t.D):
        raise PreconditionError("vee recovery needs a distributive D")
    for b in range(t.B.size):
        lat = FilterSet(t.D, t.phi[b].mask, "lattice-filter")
        if is_central_filter(t.D, lat) is None:
            raise PreconditionError(f"phi({b}) is not a central lattice filter")
    ngb = negation_table(t.B)
    vee = np.empty((t.B.size, t.D.size), dtype=np.int32)
    for b in range(t.B.size):
        target = t.phi[int(ngb[b])].mask
        for d in range(t.D.size):
            vee[b, d] = rho_of_mask(t.D, target, d)
    if t.source is not None:
        # on functor-built triples the operator must be the plain join of A
        A = t.source
        for b in range(t.B.size):
            a = int(t.b_embedding[b])
            for dl, d in enumerate(t.d_embedding):
                if int(t.d_embedding[vee[b, dl]]) != int(A.join[a, int(d)]):
                    raise InvariantError("rho disagrees with join on a functor triple")
    return vee
