"""Terms and equations over the residuated-lattice signature: parser,
printer, evaluation on finite algebras, and the dense-translation bridge
between a variety and its bottom-free companion.

ASCII grammar, loosest to tightest: `=` (equations, top level only),
`->` (right associative), `v`, `^`, `*` (left associative), prefix `~`
and `-` for negation, parentheses, constants `T` and `F`, variables
[a-z][a-z0-9_]* (the bare name `v` is taken by join).  Negation and
biimplication are sugar: ~t parses to (t -> F).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

import numpy as np

from .core import FiniteAlgebra
from .errors import ContractError, ParseError, UnsupportedOperationError
from .stonean import adjoin_bottom


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    symbol: str  # "T" or "F"


@dataclass(frozen=True)
class BinOp(Term):
    op: str  # one of -> v ^ *
    left: Term
    right: Term


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term


TOP = Const("T")
BOT = Const("F")

_PREC = {"->": 1, "v": 2, "^": 3, "*": 4}
_RIGHT_ASSOC = {"->"}

_TOKEN_RE = re.compile(
    r"(?P<arrow>->)|(?P<op>[*^=()~-])|(?P<name>[a-zA-Z][a-zA-Z0-9_]*)|(?P<ws>\s+)|(?P<bad>.)"
)


def _tokenize(text: str):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        if m.lastgroup == "ws":
            continue
        if m.lastgroup == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", col=m.start() + 1)
        tokens.append((m.lastgroup, m.group(), m.start() + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, text, strict=False, declared=None):
        self.tokens = tokens
        self.text = text
        self.i = 0
        self.strict = strict
        self.declared = set(declared) if declared is not None else None

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text) + 1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, message, col=None):
        raise ParseError(message, col=col if col is not None else self.peek()[2])

    def parse_impl(self) -> Term:
        left = self.parse_join()
        kind, tok, _ = self.peek()
        if kind == "arrow":
            self.take()
            right = self.parse_impl()  # right associative
            return BinOp("->", left, right)
        return left

    def _parse_left_chain(self, op: str, sub) -> Term:
        node = sub()
        while True:
            kind, tok, _ = self.peek()
            if (kind == "name" and tok == op) or (kind == "op" and tok == op):
                self.take()
                node = BinOp(op, node, sub())
            else:
                return node

    def parse_join(self) -> Term:
        return self._parse_left_chain("v", self.parse_meet)

    def parse_meet(self) -> Term:
        return self._parse_left_chain("^", self.parse_mult)

    def parse_mult(self) -> Term:
        return self._parse_left_chain("*", self.parse_unary)

    def parse_unary(self) -> Term:
        kind, tok, col = self.peek()
        if kind == "op" and tok in ("~", "-"):
            self.take()
            return BinOp("->", self.parse_unary(), BOT)
        return self.parse_atom()

    def parse_atom(self) -> Term:
        kind, tok, col = self.take()
        if kind == "op" and tok == "(":
            inner = self.parse_impl()
            k2, t2, c2 = self.take()
            if t2 != ")":
                self.error("expected ')'", c2)
            return inner
        if kind == "name":
            if tok == "T":
                return TOP
            if tok == "F":
                return BOT
            if tok == "v":
                self.error("'v' is the join operator, not a variable", col)
            if not re.fullmatch(r"[a-z][a-z0-9_]*", tok):
                self.error(f"bad identifier {tok!r}", col)
            if self.strict and self.declared is not None and tok not in self.declared:
                self.error(f"undeclared variable {tok!r}", col)
            return Var(tok)
        self.error("expected a term", col)


def parse(text: str, strict: bool = False, declared=None) -> Union[Term, Equation]:
    """Parse a term, or an equation when a top-level '=' is present."""
    tokens = _tokenize(text)
    split = [i for i, (k, t, _) in enumerate(tokens) if k == "op" and t == "="]
    if len(split) > 1:
        raise ParseError("only one '=' allowed", col=tokens[split[1]][2])
    if split:
        i = split[0]
        lhs = _Parser(tokens[:i], text, strict, declared)
        rhs = _Parser(tokens[i + 1 :], text, strict, declared)
        left = lhs.parse_impl()
        if lhs.i != len(lhs.tokens):
            lhs.error("trailing input before '='")
        right = rhs.parse_impl()
        if rhs.i != len(rhs.tokens):
            rhs.error("trailing input")
        return Equation(left, right)
    p = _Parser(tokens, text, strict, declared)
    term = p.parse_impl()
    if p.i != len(p.tokens):
        p.error("trailing input")
    return term


def term_to_str(t: Term) -> str:
    def go(node: Term, parent_prec: int, right_side: bool) -> str:
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Const):
            return node.symbol
        p = _PREC[node.op]
        left = go(node.left, p, False)
        right = go(node.right, p, True)
        if node.op in _RIGHT_ASSOC:
            if isinstance(node.left, BinOp) and _PREC[node.left.op] <= p:
                left = f"({left})"
            if isinstance(node.right, BinOp) and _PREC[node.right.op] < p:
                right = f"({right})"
        else:
            if isinstance(node.left, BinOp) and _PREC[node.left.op] < p:
                left = f"({left})"
            if isinstance(node.right, BinOp) and _PREC[node.right.op] <= p:
                right = f"({right})"
        return f"{left} {node.op} {right}"

    return go(t, 0, False)


def equation_to_str(eq: Equation) -> str:
    return f"{term_to_str(eq.lhs)} = {term_to_str(eq.rhs)}"


def variables(obj: Union[Term, Equation]) -> tuple[str, ...]:
    out: set[str] = set()

    def walk(t: Term):
        if isinstance(t, Var):
            out.add(t.name)
        elif isinstance(t, BinOp):
            walk(t.left)
            walk(t.right)

    if isinstance(obj, Equation):
        walk(obj.lhs)
        walk(obj.rhs)
    else:
        walk(obj)
    return tuple(sorted(out))


def mentions_bottom(obj: Union[Term, Equation]) -> bool:
    def walk(t: Term) -> bool:
        if isinstance(t, Const):
            return t.symbol == "F"
        if isinstance(t, BinOp):
            return walk(t.left) or walk(t.right)
        return False

    if isinstance(obj, Equation):
        return walk(obj.lhs) or walk(obj.rhs)
    return walk(obj)


def _table(A: FiniteAlgebra, op: str) -> np.ndarray:
    return {"^": A.meet, "v": A.join, "*": A.mult, "->": A.res}[op]


def evaluate(A: FiniteAlgebra, t: Term, assignment: Mapping[str, int]) -> int:
    """Fold the term over the operation tables."""
    if isinstance(t, Var):
        return int(assignment[t.name])
    if isinstance(t, Const):
        if t.symbol == "T":
            return int(A.top)
        if not A.bounded:
            raise UnsupportedOperationError("term mentions F but the algebra has no bottom")
        return int(A.bottom)
    return int(_table(A, t.op)[evaluate(A, t.left, assignment), evaluate(A, t.right, assignment)])


def _eval_grid(A: FiniteAlgebra, t: Term, var_order: tuple[str, ...], grids):
    if isinstance(t, Var):
        return grids[var_order.index(t.name)]
    if isinstance(t, Const):
        if t.symbol == "F" and not A.bounded:
            raise UnsupportedOperationError("term mentions F but the algebra has no bottom")
        v = A.top if t.symbol == "T" else A.bottom
        shape = grids[0].shape if grids else ()
        return np.full(shape, v, dtype=np.int32)
    lt = _eval_grid(A, t.left, var_order, grids)
    rt = _eval_grid(A, t.right, var_order, grids)
    return _table(A, t.op)[lt, rt]


@dataclass(frozen=True)
class SatisfactionResult:
    holds: bool
    countermodel: Optional[dict[str, int]]

    def __bool__(self):
        return self.holds


def satisfies(A: FiniteAlgebra, eq: Equation) -> SatisfactionResult:
    """Universally quantified table check; the first countermodel in
    lexicographic order (variables sorted by name) is reported."""
    vs = variables(eq)
    if not vs:
        l = evaluate(A, eq.lhs, {})
        r = evaluate(A, eq.rhs, {})
        return SatisfactionResult(l == r, None if l == r else {})
    grids = np.indices((A.size,) * len(vs)).astype(np.int32)
    lhs = _eval_grid(A, eq.lhs, vs, list(grids))
    rhs = _eval_grid(A, eq.rhs, vs, list(grids))
    bad = np.argwhere(lhs != rhs)
    if bad.size == 0:
        return SatisfactionResult(True, None)
    witness = {v: int(x) for v, x in zip(vs, bad[0])}
    return SatisfactionResult(False, witness)


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, BinOp):
        return BinOp(t.op, substitute(t.left, mapping), substitute(t.right, mapping))
    return t


def translate_dense(eq: Equation) -> Equation:
    """For an equation tau = T, substitute every variable x by
    (~~x -> x); this mirrors satisfaction between a variety and its
    bottom-free companion."""
    if eq.rhs != TOP:
        raise ContractError("dense translation is defined for equations of the form tau = T")
    mapping = {
        name: BinOp("->", BinOp("->", BinOp("->", Var(name), BOT), BOT), Var(name))
        for name in variables(eq)
    }
    return Equation(substitute(eq.lhs, mapping), TOP)


def star_equation_check(A: FiniteAlgebra, eq: Equation) -> tuple[bool, bool]:
    """Satisfaction of the same bottom-free equation on A and on S(A)."""
    if A.bounded:
        raise ContractError("star check expects a bottom-free algebra")
    if mentions_bottom(eq):
        raise UnsupportedOperationError("equation mentions F; not checkable on A")
    return (satisfies(A, eq).holds, satisfies(adjoin_bottom(A), eq).holds)
