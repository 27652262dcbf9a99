"""Line-oriented text formats for algebras, triples and filters.

Algebra files: header lines (algebra, size, elements, top, optional
bottom) followed by the four tables in the fixed order meet, join, mult,
res, each as a keyword line plus n rows of n indices.  '#' starts a
comment anywhere; blank lines are ignored.  Serialization is bit-exact:
decimal indices, single spaces, newline-terminated rows.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .core import FiniteAlgebra
from .errors import ParseError
from .filters import FilterSet, I_FILTER, mask_of
from .triples import Triple


def serialize_algebra(A: FiniteAlgebra) -> str:
    lines = [
        f"algebra {A.name}",
        f"size {A.size}",
        "elements " + " ".join(A.element_names),
        f"top {A.top}",
    ]
    if A.bounded:
        lines.append(f"bottom {A.bottom}")
    for label in ("meet", "join", "mult", "res"):
        lines.append(label)
        table = getattr(A, label)
        for i in range(A.size):
            lines.append(" ".join(str(int(v)) for v in table[i]))
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


class _LineReader:
    def __init__(self, text: str):
        self.lines = list(_content_lines(text))
        self.i = 0

    def peek(self):
        return self.lines[self.i] if self.i < len(self.lines) else (0, "")

    def take(self, what: str):
        if self.i >= len(self.lines):
            raise ParseError(f"unexpected end of file, expected {what}")
        lineno, line = self.lines[self.i]
        self.i += 1
        return lineno, line

    @property
    def exhausted(self) -> bool:
        return self.i >= len(self.lines)


def _parse_algebra_block(rd: _LineReader) -> FiniteAlgebra:
    lineno, line = rd.take("'algebra <name>'")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "algebra":
        raise ParseError("expected 'algebra <name>'", line=lineno)
    name = parts[1]

    lineno, line = rd.take("'size <n>'")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "size" or not parts[1].isdigit():
        raise ParseError("expected 'size <n>'", line=lineno)
    n = int(parts[1])

    lineno, line = rd.take("'elements ...'")
    parts = line.split()
    if parts[0] != "elements" or len(parts) != n + 1:
        raise ParseError(f"expected 'elements' with {n} names", line=lineno)
    names = tuple(parts[1:])

    lineno, line = rd.take("'top <i>'")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "top" or not parts[1].isdigit():
        raise ParseError("expected 'top <index>'", line=lineno)
    top = int(parts[1])

    bottom = None
    lineno_b, line_b = rd.peek()
    if line_b.split() and line_b.split()[0] == "bottom":
        rd.take("'bottom <i>'")
        parts = line_b.split()
        if len(parts) != 2 or not parts[1].isdigit():
            raise ParseError("expected 'bottom <index>'", line=lineno_b)
        bottom = int(parts[1])

    tables = {}
    for label in ("meet", "join", "mult", "res"):
        lineno, line = rd.take(f"'{label}'")
        if line != label:
            raise ParseError(f"expected table keyword {label!r}", line=lineno)
        rows = []
        for _ in range(n):
            lineno, line = rd.take(f"{label} row")
            entries = line.split()
            if len(entries) != n or not all(e.lstrip("-").isdigit() for e in entries):
                raise ParseError(f"expected {n} indices in {label} row", line=lineno)
            rows.append([int(e) for e in entries])
        tables[label] = np.array(rows, dtype=np.int32)
    return FiniteAlgebra(
        name=name, size=n, element_names=names, top=top, bottom=bottom, **tables
    )


def parse_algebra(text: str) -> FiniteAlgebra:
    rd = _LineReader(text)
    alg = _parse_algebra_block(rd)
    if not rd.exhausted:
        raise ParseError("trailing content after algebra", line=rd.peek()[0])
    return alg


def serialize_triple(t: Triple, name: str = "triple0") -> str:
    parts = [f"triple {name}\n", serialize_algebra(t.B), serialize_algebra(t.D)]
    for b in range(t.B.size):
        idx = " ".join(str(i) for i in t.phi[b].members)
        parts.append(f"phi {b} : {idx}\n")
    return "".join(parts)


def parse_triple(text: str) -> Triple:
    rd = _LineReader(text)
    lineno, line = rd.take("'triple <name>'")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "triple":
        raise ParseError("expected 'triple <name>'", line=lineno)
    B = _parse_algebra_block(rd)
    D = _parse_algebra_block(rd)
    phi = [None] * B.size
    for b in range(B.size):
        lineno, line = rd.take("'phi <b> : ...'")
        head, _, tail = line.partition(":")
        hp = head.split()
        if len(hp) != 2 or hp[0] != "phi" or not hp[1].isdigit():
            raise ParseError("expected 'phi <b-index> : <indices>'", line=lineno)
        idx = int(hp[1])
        if not 0 <= idx < B.size or phi[idx] is not None:
            raise ParseError(f"bad or repeated phi index {idx}", line=lineno)
        members = [int(v) for v in tail.split()]
        if any(not 0 <= v < D.size for v in members):
            raise ParseError("phi member out of range", line=lineno)
        phi[idx] = FilterSet(D, mask_of(members), I_FILTER)
    if not rd.exhausted:
        raise ParseError("trailing content after triple", line=rd.peek()[0])
    return Triple(B=B, D=D, phi=tuple(phi))


def serialize_filter(fs: FilterSet) -> str:
    return f"{fs.algebra.name} : " + " ".join(str(i) for i in fs.members)
