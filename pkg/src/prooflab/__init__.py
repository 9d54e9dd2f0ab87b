"""prooflab: a workbench for proof-theoretic consequence over atomic rule bases.

Layers, bottom up: formulas (syntax), higher-level atomic rules and
derivability (atomic_system), two inductive consequence evaluators plus
counterexample search and an intuitionistic prover (base_semantics), argument
structures with discharge (arguments), reductions between structures
(reductions), and reducibility-based validity (validity).  The cli module
exposes all of it as subcommands.
"""

from prooflab.syntax import (
    Absurdity,
    Atom,
    BOT,
    Conj,
    Disj,
    Formula,
    Impl,
    atoms_of,
    format_formula,
    neg,
    parse_formula,
    substitute,
)

__all__ = [
    "Absurdity",
    "Atom",
    "BOT",
    "Conj",
    "Disj",
    "Formula",
    "Impl",
    "atoms_of",
    "format_formula",
    "neg",
    "parse_formula",
    "substitute",
]
