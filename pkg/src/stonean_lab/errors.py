"""Exception types shared across the package.

The split matters for the CLI: usage/format problems exit 2, falsified
properties and infeasible requests exit 1, internal invariant failures are
bugs and propagate as ordinary tracebacks.
"""


class StoneanLabError(Exception):
    """Base class for all package errors."""


class MalformedAlgebraError(StoneanLabError):
    """Structurally broken input: bad table dimensions, out-of-range entries,
    duplicate element names.  Distinct from a law violation, which is data."""


class UnsupportedOperationError(StoneanLabError):
    """Operation needs structure the algebra lacks (typically a bottom)."""


class PreconditionError(StoneanLabError):
    """A documented precondition of an operation does not hold."""


class ContractError(StoneanLabError):
    """Caller handed in an object violating its declared contract
    (e.g. a lattice filter where an i-filter is required)."""


class InfeasibleConstraintsError(StoneanLabError):
    """Congruence constraint system has no solution; names the violating pair."""

    def __init__(self, i: int, j: int, message: str | None = None):
        self.pair = (i, j)
        super().__init__(message or f"incompatible constraints at pair ({i}, {j})")


class InvariantError(StoneanLabError):
    """An internally guaranteed property failed; indicates a bug, not bad data."""


class ConfigurationError(StoneanLabError):
    """Requested work exceeds the configured limits."""


class SizeLimitError(StoneanLabError):
    """A construction grew past its size cap; carries the size reached."""

    def __init__(self, reached: int, cap: int):
        self.reached = reached
        self.cap = cap
        super().__init__(f"size limit exceeded: reached {reached} with cap {cap}")


class ProductTripleAxiomError(ContractError):
    """A (B, C, vee) product-triple axiom failed; names the axiom."""

    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"product-triple axiom {axiom} fails at {witness}")


class ParseError(StoneanLabError):
    """Syntax error in a term, equation or algebra file."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, col {col})")
