"""Validity of arguments over a base, and consequence defined through it.

An argument is a structure together with justifications: reductions beyond
the standard detour set.  Validity is judged relative to a base B:

  * a closed argument with atomic conclusion is valid when it reduces,
    under its justifications, to a derivation in B;
  * a closed argument with compound conclusion is valid when it reduces to
    a canonical argument (root step an introduction) whose immediate
    sub-arguments are valid;
  * an open argument is valid when every way of closing it — replacing
    each assumption by a closed valid argument for it, possibly with
    extended justifications — yields a valid closed argument.

The open clause quantifies over all closed valid arguments, which no finite
run can enumerate, so the checker works relative to a supplied set of
closing instances (or a provider that builds them) and says so in its
verdict; a definite failure on one instance is still a definite failure.

Consequence: Γ is taken to the conclusion over B when some argument from
assumptions Γ is valid over B.  The evaluator rides on the equivalence with
the clause-defined consequence relation: it evaluates that relation first
and then synthesizes and rechecks a concrete witness argument, so a
positive answer always comes with an argument in hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from prooflab.arguments import (
    ArgumentStructure,
    Inference,
    StructureError,
    assumption,
    assumptions,
    conclusion,
    derivation_to_structure,
    impl_intro,
    instantiate,
    is_atomic_derivation,
    is_canonical,
    is_closed,
    or_intro_left,
    or_intro_right,
    and_intro,
    structure_of_inference,
    sub_structures,
)
from prooflab.atomic_system import Base, derive
from prooflab.base_semantics import (
    Evaluator,
    SemanticsKind,
    Sequent,
    format_sequent,
    models,
)
from prooflab.reductions import (
    DEFAULT_BUDGET,
    Reduction,
    closure,
    constant_reduction,
    search_reduct,
    standard_reductions,
)
from prooflab.syntax import (
    Absurdity,
    Atom,
    Conj,
    Disj,
    Formula,
    Impl,
    format_formula,
)

__all__ = [
    "Argument",
    "Status",
    "ValidityVerdict",
    "Suite",
    "Instantiation",
    "SuiteProvider",
    "check_valid",
    "AlphaResult",
    "models_alpha",
    "synthesize_witness",
    "semantic_suite_provider",
    "compare_consequence_notions",
]


class Status(Enum):
    VALID = "valid"
    INVALID = "invalid"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ValidityVerdict:
    status: Status
    reason: str
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Argument:
    """A structure with its justifications; the standard reductions are
    always in force and need not be listed."""

    structure: ArgumentStructure
    justifications: tuple[Reduction, ...] = ()

    def reductions(self) -> tuple[Reduction, ...]:
        extra = tuple(
            r for r in self.justifications if r not in standard_reductions()
        )
        return standard_reductions() + extra


@dataclass(frozen=True)
class Instantiation:
    """One way of closing an open argument: a closed argument for each
    assumption, plus any justifications those arguments bring along."""

    assignment: tuple[tuple[Formula, "Argument"], ...]
    note: str = ""


@dataclass(frozen=True)
class Suite:
    """The closing instances an open argument is checked against.  An empty
    suite is only meaningful when the caller can vouch that no closed valid
    argument for some assumption exists (vacuous_reason says why)."""

    instances: tuple[Instantiation, ...] = ()
    vacuous_reason: str = ""


SuiteProvider = Callable[[ArgumentStructure], Suite]


def _merge_reductions(*groups: Sequence[Reduction]) -> tuple[Reduction, ...]:
    out: list[Reduction] = []
    for group in groups:
        for red in group:
            if red not in out:
                out.append(red)
    return tuple(out)


def check_valid(
    arg: Argument,
    base: Base,
    *,
    suite: Suite | None = None,
    suite_provider: SuiteProvider | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ValidityVerdict:
    """Decide validity over the base, as far as the budget and the supplied
    closing instances allow."""
    if is_closed(arg.structure):
        return _check_closed(arg, base, suite_provider, budget)
    return _check_open(arg, base, suite, suite_provider, budget)


def _check_closed(
    arg: Argument,
    base: Base,
    provider: SuiteProvider | None,
    budget: int,
) -> ValidityVerdict:
    struct = arg.structure
    reds = arg.reductions()
    goal = conclusion(struct)
    if isinstance(goal, (Atom, Absurdity)):
        out = search_reduct(
            struct, lambda d: is_atomic_derivation(d, base), reds, budget=budget
        )
        if out.status == "yes":
            return ValidityVerdict(
                Status.VALID,
                f"reduces to a derivation of {format_formula(goal)} in the base"
                f" ({len(out.path)} steps)",
            )
        if out.status == "no":
            return ValidityVerdict(
                Status.INVALID,
                "no reduct is a derivation in the base; the whole reduction "
                f"closure ({out.visited} structures) was enumerated",
            )
        return ValidityVerdict(Status.INCONCLUSIVE, out.note)

    clo = closure(struct, reds, budget=budget)
    notes: list[str] = []
    saw_inconclusive = False
    for cand in clo.structures:
        if not is_canonical(cand):
            continue
        verdicts = []
        for sub in sub_structures(cand):
            sub_arg = Argument(structure=sub, justifications=arg.justifications)
            verdicts.append(
                check_valid(
                    sub_arg,
                    base,
                    suite_provider=provider,
                    budget=budget,
                )
            )
        if all(v.status is Status.VALID for v in verdicts):
            return ValidityVerdict(
                Status.VALID,
                "reduces to a canonical argument for "
                f"{format_formula(goal)} with valid sub-arguments",
            )
        if any(v.status is Status.INCONCLUSIVE for v in verdicts):
            saw_inconclusive = True
        notes.extend(
            v.reason for v in verdicts if v.status is not Status.VALID
        )
    if clo.complete and not clo.skipped and not saw_inconclusive:
        return ValidityVerdict(
            Status.INVALID,
            "no canonical reduct with valid sub-arguments; the whole "
            f"reduction closure ({clo.visited} structures) was enumerated",
            notes=tuple(notes[:4]),
        )
    why = []
    if not clo.complete:
        why.append("reduction budget exhausted")
    if clo.skipped:
        why.append("positions crossed by discharges were not rewritten")
    if saw_inconclusive:
        why.append("a sub-argument could not be settled")
    return ValidityVerdict(
        Status.INCONCLUSIVE, "; ".join(why) or "no decision", notes=tuple(notes[:4])
    )


def _check_open(
    arg: Argument,
    base: Base,
    suite: Suite | None,
    provider: SuiteProvider | None,
    budget: int,
) -> ValidityVerdict:
    struct = arg.structure
    if suite is None and provider is not None:
        suite = provider(struct)
    if suite is None:
        return ValidityVerdict(
            Status.INCONCLUSIVE,
            "open argument and no closing instances supplied",
        )
    open_forms = assumptions(struct)
    if not suite.instances:
        if suite.vacuous_reason:
            return ValidityVerdict(
                Status.VALID,
                f"no way of closing it exists: {suite.vacuous_reason}",
            )
        return ValidityVerdict(
            Status.INCONCLUSIVE,
            "open argument checked against an empty set of closing instances",
        )
    notes: list[str] = []
    effective = 0
    for k, inst in enumerate(suite.instances):
        sigma = dict(inst.assignment)
        missing = sorted(
            format_formula(f) for f in open_forms - set(sigma.keys())
        )
        if missing:
            return ValidityVerdict(
                Status.INCONCLUSIVE,
                f"closing instance {k} misses assumptions {missing}",
            )
        bad = [
            f
            for f, closing in sigma.items()
            if f in open_forms and not is_closed(closing.structure)
        ]
        if bad:
            return ValidityVerdict(
                Status.INCONCLUSIVE,
                f"closing instance {k} supplies open arguments",
            )
        # only closings by arguments that are themselves valid count: an
        # instance built from an invalid one proves nothing either way
        outside = False
        for f, closing in sigma.items():
            if f not in open_forms:
                continue
            v = _check_closed(
                Argument(closing.structure, closing.justifications),
                base,
                provider,
                budget,
            )
            if v.status is Status.INVALID:
                notes.append(
                    f"closing instance {k} skipped: its argument for "
                    f"{format_formula(f)} is not valid"
                )
                outside = True
                break
            if v.status is Status.INCONCLUSIVE:
                return ValidityVerdict(
                    Status.INCONCLUSIVE,
                    f"closing instance {k}: validity of the argument for "
                    f"{format_formula(f)} could not be settled",
                )
        if outside:
            continue
        effective += 1
        closed_struct = instantiate(
            struct, {f: a.structure for f, a in sigma.items() if f in open_forms}
        )
        joined = _merge_reductions(
            arg.justifications,
            *[a.justifications for f, a in sigma.items() if f in open_forms],
        )
        verdict = _check_closed(
            Argument(structure=closed_struct, justifications=joined),
            base,
            provider,
            budget,
        )
        if verdict.status is Status.INVALID:
            return ValidityVerdict(
                Status.INVALID,
                f"closing instance {k} yields an invalid closed argument: "
                + verdict.reason,
            )
        if verdict.status is Status.INCONCLUSIVE:
            return ValidityVerdict(
                Status.INCONCLUSIVE,
                f"closing instance {k} could not be settled: " + verdict.reason,
            )
        if inst.note:
            notes.append(inst.note)
    if effective == 0:
        return ValidityVerdict(
            Status.INCONCLUSIVE,
            "no supplied closing instance was built from valid arguments",
            notes=tuple(notes),
        )
    return ValidityVerdict(
        Status.VALID,
        f"all {effective} usable closing instances yield valid closed "
        "arguments",
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# witnesses and the consequence evaluator


def _closed_holds(ev: Evaluator, f: Formula) -> bool:
    return ev.entails(frozenset(), f)


def _closed_witness(base: Base, ev: Evaluator, f: Formula, justs: list[Reduction]) -> ArgumentStructure:
    """A canonical closed argument for a formula that holds over the base;
    justifications collected along the way end up in justs."""
    if isinstance(f, Atom):
        res = derive(base, frozenset(), f.name)
        if not res.derivable:
            raise StructureError(
                f"no derivation of {f.name} although it was claimed to hold"
            )
        return derivation_to_structure(res.tree, base)
    if isinstance(f, Absurdity):
        raise StructureError("absurdity cannot hold over a consistent base")
    if isinstance(f, Conj):
        return and_intro(
            _closed_witness(base, ev, f.left, justs),
            _closed_witness(base, ev, f.right, justs),
        )
    if isinstance(f, Disj):
        if _closed_holds(ev, f.left):
            return or_intro_left(_closed_witness(base, ev, f.left, justs), f.right)
        return or_intro_right(_closed_witness(base, ev, f.right, justs), f.left)
    if isinstance(f, Impl):
        stub = structure_of_inference(
            Inference(subs=(assumption(f.left),), conclusion=f.right)
        )
        if _closed_holds(ev, f.left):
            target = _closed_witness(base, ev, f.right, justs)
            justs.append(
                constant_reduction(
                    [f.left],
                    f.right,
                    target,
                    name=f"close[{format_formula(f)}]",
                )
            )
        return impl_intro(stub, f.left)
    raise StructureError(f"no witness for {format_formula(f)}")


def semantic_suite_provider(base: Base, budget: int = DEFAULT_BUDGET) -> SuiteProvider:
    """Closes open arguments with witnesses read off the semantics: one
    instance mapping each assumption to a canonical argument for it, or a
    vacuous suite when some assumption has no closed valid argument."""
    ev = Evaluator(SemanticsKind.STANDARD, base, None, record=False)

    def provide(struct: ArgumentStructure) -> Suite:
        sigma: list[tuple[Formula, Argument]] = []
        for f in sorted(assumptions(struct), key=format_formula):
            if not _closed_holds(ev, f):
                return Suite(
                    instances=(),
                    vacuous_reason=(
                        f"{format_formula(f)} has no closed valid argument "
                        "over this base"
                    ),
                )
            justs: list[Reduction] = []
            witness = _closed_witness(base, ev, f, justs)
            sigma.append((f, Argument(witness, tuple(justs))))
        return Suite(instances=(Instantiation(assignment=tuple(sigma)),))

    return provide


def synthesize_witness(
    base: Base, sequent: Sequent, *, strict: bool = False
) -> tuple[Argument, Suite | None]:
    """An argument for the sequent read off the semantics, assuming the
    underlying consequence holds.  With strict=True only the standard
    reductions may be used, and synthesis refuses where that is not enough."""
    ev = Evaluator(SemanticsKind.STANDARD, base, None, record=False)
    justs: list[Reduction] = []
    if sequent.premises:
        prems = sorted(sequent.premises, key=format_formula)
        struct = structure_of_inference(
            Inference(
                subs=tuple(assumption(g) for g in prems),
                conclusion=sequent.conclusion,
            )
        )
        if all(_closed_holds(ev, g) for g in prems):
            if strict:
                raise StructureError(
                    "a one-step argument from live premises needs a "
                    "justification beyond the standard reductions"
                )
            target = _closed_witness(base, ev, sequent.conclusion, justs)
            justs.append(
                constant_reduction(
                    prems,
                    sequent.conclusion,
                    target,
                    name="close[premises]",
                )
            )
            suite = None  # provider will close it
        else:
            suite = None
        return Argument(struct, tuple(justs)), suite
    if strict:
        probe: list[Reduction] = []
        struct = _closed_witness(base, ev, sequent.conclusion, probe)
        if probe:
            raise StructureError(
                "the witness needs justifications beyond the standard "
                "reductions"
            )
        return Argument(struct, ()), None
    struct = _closed_witness(base, ev, sequent.conclusion, justs)
    return Argument(struct, tuple(justs)), None


@dataclass(frozen=True)
class AlphaResult:
    verdict: ValidityVerdict
    witness: Argument | None
    holds: bool | None  # None when the verdict is inconclusive


def models_alpha(
    base: Base,
    sequent: Sequent,
    *,
    budget: int = DEFAULT_BUDGET,
    strict: bool = False,
) -> AlphaResult:
    """Consequence through valid arguments: the premises are taken to the
    conclusion when some argument with those assumptions is valid over the
    base.  Evaluates the clause-defined consequence first; a positive
    answer is then backed by a synthesized argument that is rechecked."""
    std = models(SemanticsKind.STANDARD, base, sequent, trace=False)
    if not std.holds:
        return AlphaResult(
            verdict=ValidityVerdict(
                Status.INVALID,
                "the underlying consequence fails, so no argument from these "
                "assumptions is valid over this base",
            ),
            witness=None,
            holds=False,
        )
    try:
        arg, suite = synthesize_witness(base, sequent, strict=strict)
    except StructureError as exc:
        return AlphaResult(
            verdict=ValidityVerdict(Status.INCONCLUSIVE, str(exc)),
            witness=None,
            holds=None,
        )
    verdict = check_valid(
        arg,
        base,
        suite=suite,
        suite_provider=semantic_suite_provider(base, budget),
        budget=budget,
    )
    holds = {
        Status.VALID: True,
        Status.INVALID: False,
        Status.INCONCLUSIVE: None,
    }[verdict.status]
    return AlphaResult(verdict=verdict, witness=arg, holds=holds)


def compare_consequence_notions(
    base: Base,
    sequents: Sequence[Sequent],
    *,
    budget: int = DEFAULT_BUDGET,
) -> list[dict]:
    """Side-by-side table: the quantified-disjunction variant against the
    argument-based notion, per sequent over one base."""
    rows = []
    for seq in sequents:
        variant = models(SemanticsKind.SANDQVIST, base, seq, trace=False)
        alpha = models_alpha(base, seq, budget=budget)
        agree = None if alpha.holds is None else variant.holds == alpha.holds
        rows.append(
            {
                "sequent": format_sequent(seq),
                "sandqvist": variant.holds,
                "alpha": alpha.verdict.status.value,
                "agree": agree,
            }
        )
    return rows
