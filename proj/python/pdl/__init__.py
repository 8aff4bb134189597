from ._pdl import (
    FormatError,
    ParseError,
    axiom_name,
    check,
    derive_axiom,
    modelcheck,
    parse_formula,
    parse_program,
    parse_sequent,
    prove,
)

__all__ = [
    "FormatError",
    "ParseError",
    "axiom_name",
    "check",
    "derive_axiom",
    "modelcheck",
    "parse_formula",
    "parse_program",
    "parse_sequent",
    "prove",
]
