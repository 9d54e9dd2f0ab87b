#!/usr/bin/env python3
"""Walk through the non-monotonicity of consequence over a base.

The sequent p |- q holds over the empty base under all three relations:
there is no way to make p good, so the premise is never cashed in.  Add
the axiom p. and the same sequent fails everywhere.  The script prints the
clause-by-clause trace for the two evaluator-style relations and the
verdict plus witness for the argument-backed one.
"""

from prooflab.arguments import pretty
from prooflab.atomic_system import Base, axiom, format_base
from prooflab.base_semantics import SemanticsKind, format_sequent, models, parse_sequent
from prooflab.validity import models_alpha

SEQUENT = parse_sequent("p |- q")
BASES = (Base(frozenset()), Base(frozenset({axiom("p")})))


def show(base: Base) -> None:
    shown = ", ".join(format_base(base).splitlines()) or "(empty)"
    print(f"--- base: {shown}")
    for kind in SemanticsKind:
        res = models(kind, base, SEQUENT)
        print(f"{kind.value:>10}: {'holds' if res.holds else 'fails'}")
        for clause, prem, formula, value in res.trace.entries:
            print(f"            [{clause}] {prem} :: {formula} -> {value}")
    alpha = models_alpha(base, SEQUENT)
    print(f"{'argument':>10}: {alpha.verdict.status.value} ({alpha.verdict.reason})")
    if alpha.witness is not None:
        for line in pretty(alpha.witness.structure).splitlines():
            print(f"            {line}")


def main() -> None:
    print(f"sequent under test: {format_sequent(SEQUENT)}\n")
    for base in BASES:
        show(base)
        print()
    print(
        "adding the very rule that would make the premise good flips the "
        "verdict: consequence over a base is not monotone in the base."
    )


if __name__ == "__main__":
    main()
