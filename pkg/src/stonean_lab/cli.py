"""Batch command-line interface.

Exit codes: 0 success, 1 property falsified or request infeasible,
2 usage or format errors.  Output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .alg_io import parse_algebra, parse_triple, serialize_algebra, serialize_filter
from .core import FiniteAlgebra, validate
from .errors import (
    ConfigurationError,
    ContractError,
    InfeasibleConstraintsError,
    MalformedAlgebraError,
    ParseError,
    PreconditionError,
    SizeLimitError,
    StoneanLabError,
    UnsupportedOperationError,
)
from .filters import (
    FilterSet,
    I_FILTER,
    all_ifilters,
    all_lattice_filters,
    crt_solve,
    is_ifilter_mask,
    mask_of,
    quotient,
)
from .freealg import (
    assemble_free,
    free_by_term_closure,
    goedel_stalk_frees,
    triple_of_free,
)
from .fixtures import g3, g4
from .homs import are_isomorphic
from .reconstruct import global_sections
from .stonean import adjoin_bottom, decompose, is_stonean, stone_witness
from .terms import Equation, satisfies, parse as parse_term
from .triples import functor_T_object, validate_triple


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedAlgebraError(f"cannot read {path}: {exc.strerror}") from exc


def _load_algebra(path: str) -> FiniteAlgebra:
    return parse_algebra(_read(path))


def _element(A: FiniteAlgebra, token: str) -> int:
    if token in A.element_names:
        return A.index(token)
    if token.isdigit() and int(token) < A.size:
        return int(token)
    raise MalformedAlgebraError(f"no element {token!r} in {A.name}")


def _filter_from_spec(A: FiniteAlgebra, spec: str) -> FilterSet:
    try:
        idx = [int(tok) for tok in spec.replace(",", " ").split()]
    except ValueError:
        raise MalformedAlgebraError(f"bad filter spec {spec!r}")
    mask = mask_of(idx)
    if not is_ifilter_mask(A, mask):
        raise ContractError(f"{sorted(set(idx))} is not an i-filter of {A.name}")
    return FilterSet(A, mask, I_FILTER)


def cmd_validate(args) -> int:
    rep = validate(_load_algebra(args.file))
    if rep.ok:
        print("ok")
        return 0
    for law, wit in rep.violations:
        print(f"violation {law} witness={wit}")
    return 1


def cmd_stonean(args) -> int:
    A = _load_algebra(args.file)
    if args.action == "check":
        if is_stonean(A):
            print("stonean")
            return 0
        w = stone_witness(A)
        print(f"not stonean witness x={A.element_names[w]}")
        return 1
    if args.action == "decompose":
        if args.element is None:
            raise MalformedAlgebraError("decompose needs an element")
        b, d = decompose(A, _element(A, args.element))
        print(f"b={A.element_names[b]} d={A.element_names[d]}")
        return 0
    if args.action == "adjoin":
        sys.stdout.write(serialize_algebra(adjoin_bottom(A)))
        return 0
    raise MalformedAlgebraError(f"unknown stonean action {args.action!r}")


def cmd_filters(args) -> int:
    A = _load_algebra(args.file)
    lat = all_lattice_filters(A) if args.lattice else all_ifilters(A)
    for fs in lat.filters:
        print(serialize_filter(fs))
    return 0


def cmd_quotient(args) -> int:
    A = _load_algebra(args.file)
    F = _filter_from_spec(A, args.filter)
    result = quotient(A, F)
    sys.stdout.write(serialize_algebra(result.quotient))
    print("projection " + " ".join(str(int(v)) for v in result.projection))
    return 0


def cmd_crt(args) -> int:
    A = _load_algebra(args.file)
    constraints = []
    for pair in args.pair:
        elem_tok, _, filter_spec = pair.partition(":")
        if not filter_spec:
            raise MalformedAlgebraError(f"bad pair {pair!r}; use ELEM:IDX[,IDX...]")
        constraints.append((_element(A, elem_tok), _filter_from_spec(A, filter_spec)))
    try:
        x = crt_solve(A, constraints)
    except InfeasibleConstraintsError as exc:
        print(f"infeasible at pair {exc.pair}")
        return 1
    print(f"solution {A.element_names[x]}")
    return 0


def cmd_triple(args) -> int:
    t = parse_triple(_read(args.file))
    rep = validate_triple(t)
    if rep.ok:
        print("ok")
        return 0
    for law, wit in rep.violations:
        print(f"violation {law} witness={wit}")
    return 1


def cmd_reconstruct(args) -> int:
    t = parse_triple(_read(args.file))
    rep = validate_triple(t)
    if not rep.ok:
        for law, wit in rep.violations:
            print(f"violation {law} witness={wit}")
        return 1
    gs = global_sections(t)
    sys.stdout.write(serialize_algebra(gs.algebra))
    print("h " + " ".join(str(int(v)) for v in gs.h))
    print("k " + " ".join(str(int(v)) for v in gs.k))
    return 0


def cmd_roundtrip(args) -> int:
    A = _load_algebra(args.file)
    if not A.bounded or not is_stonean(A):
        print("not stonean; no triple roundtrip")
        return 1
    t = functor_T_object(A)
    gs = global_sections(t)
    witness = are_isomorphic(gs.algebra, A)
    if witness is None:
        print("roundtrip failed: sections not isomorphic to input")
        return 1
    print(f"sections size {gs.algebra.size}")
    for i, v in enumerate(witness):
        print(f"iso {gs.algebra.element_names[i]} -> {A.element_names[int(v)]}")
    return 0


def cmd_check_eq(args) -> int:
    A = _load_algebra(args.file)
    eq = parse_term(args.equation)
    if not isinstance(eq, Equation):
        raise MalformedAlgebraError("expected an equation with '='")
    result = satisfies(A, eq)
    if result.holds:
        print("satisfied")
        return 0
    model = " ".join(
        f"{v}={A.element_names[x]}" for v, x in sorted(result.countermodel.items())
    )
    print(model if model else "falsified")
    return 1


def cmd_free(args) -> int:
    n = args.n
    if args.variety == "boolean":
        print(
            "boolean variety: the product hypothesis fails (all companion "
            f"frees are trivial); Free(n) is the closed form B2^(2^{n})"
        )
        return 1
    if args.variety == "product":
        print(
            "product variety: the companion free algebras are nontrivial "
            "cancellative hoops, which are infinite; not representable here"
        )
        return 1
    if args.variety != "goedel":
        raise MalformedAlgebraError(f"unknown variety {args.variety!r}")
    stalks = goedel_stalk_frees(n)
    A = assemble_free(n, stalks)
    print(f"assembled Free_goedel({n}): size {A.size}")
    if args.oracle:
        oracle = free_by_term_closure([g3(), g4()], n)
        print(f"term-closure oracle: size {oracle.algebra.size}")
        agree = are_isomorphic(A, oracle.algebra) is not None
        print(f"isomorphic: {'yes' if agree else 'no'}")
        triple_of_free(n, stalks)
        print("triple: ok")
        if not agree:
            return 1
    return 0


def _enumerate_size(task):
    n, stonean, distributive = task
    return [
        serialize_algebra(A)
        for A in corpus_mod.enumerate_algebras(n, stonean=stonean, distributive=distributive)
    ]


def cmd_enumerate(args) -> int:
    sizes = list(range(2, args.n + 1))
    tasks = [(n, args.stonean, args.distributive) for n in sizes]
    if args.jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(args.jobs) as pool:
            per_size = pool.map(_enumerate_size, tasks)
    else:
        per_size = [_enumerate_size(t) for t in tasks]
    manifest = []
    total = 0
    for n, texts in zip(sizes, per_size):
        manifest.append(f"size {n}: {len(texts)}")
        total += len(texts)
        if args.out:
            outdir = Path(args.out)
            outdir.mkdir(parents=True, exist_ok=True)
            for text in texts:
                name = text.splitlines()[0].split()[1]
                (outdir / f"{name}.alg").write_text(text)
    manifest.append(f"total: {total}")
    if args.out:
        Path(args.out, "manifest.txt").write_text("\n".join(manifest) + "\n")
    print("\n".join(manifest))
    return 0


def cmd_iso(args) -> int:
    A = _load_algebra(args.file1)
    B = _load_algebra(args.file2)
    witness = are_isomorphic(A, B)
    if witness is None:
        print("not isomorphic")
        return 1
    for i, v in enumerate(witness):
        print(f"{A.element_names[i]} -> {B.element_names[int(v)]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stonean-lab",
        description="Finite-model computations for Stonean residuated lattices",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for randomized backends")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for corpus-wide work")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check the residuated-lattice laws")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("stonean", help="Stonean checks and constructions")
    sp.add_argument("action", choices=["check", "decompose", "adjoin"])
    sp.add_argument("file")
    sp.add_argument("element", nargs="?")
    sp.set_defaults(fn=cmd_stonean)

    sp = sub.add_parser("filters", help="list all i-filters (or lattice filters)")
    sp.add_argument("file")
    sp.add_argument("--lattice", action="store_true")
    sp.set_defaults(fn=cmd_filters)

    sp = sub.add_parser("quotient", help="quotient by an i-filter")
    sp.add_argument("file")
    sp.add_argument("--filter", required=True, help="comma-separated member indices")
    sp.set_defaults(fn=cmd_quotient)

    sp = sub.add_parser("crt", help="solve simultaneous congruence constraints")
    sp.add_argument("file")
    sp.add_argument(
        "--pair", action="append", required=True, help="ELEM:IDX[,IDX...] (repeatable)"
    )
    sp.set_defaults(fn=cmd_crt)

    sp = sub.add_parser("triple", help="validate a triple file")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_triple)

    sp = sub.add_parser("reconstruct", help="algebra of sections of a triple")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_reconstruct)

    sp = sub.add_parser("roundtrip", help="triple then sections; report isomorphism")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_roundtrip)

    sp = sub.add_parser("check-eq", help="check an equation on an algebra")
    sp.add_argument("file")
    sp.add_argument("equation")
    sp.set_defaults(fn=cmd_check_eq)

    sp = sub.add_parser("free", help="free algebra assembly and oracle")
    sp.add_argument("--variety", default="goedel")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(fn=cmd_free)

    sp = sub.add_parser("enumerate", help="enumerate algebras up to isomorphism")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--stonean", action="store_true")
    sp.add_argument("--distributive", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_enumerate)

    sp = sub.add_parser("iso", help="isomorphism witness between two algebras")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp.set_defaults(fn=cmd_iso)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (
        ParseError,
        MalformedAlgebraError,
        ConfigurationError,
        ContractError,
        UnsupportedOperationError,
        PreconditionError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SizeLimitError, InfeasibleConstraintsError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except StoneanLabError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        raise


if __name__ == "__main__":
    sys.exit(main())
