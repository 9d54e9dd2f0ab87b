"""Two inductive consequence relations over a base of atomic rules.

The standard relation grounds atoms in derivability and treats the
disjunction clause disjunctively; the variant relation replaces the
disjunction clause with second-order elimination over a finite atom universe
(every atom C entailed by both disjuncts must itself hold).  Both relations
read a nonempty premise set materially over the same base, which is what
makes them non-monotonic: {p} entails q over the empty base vacuously and
stops entailing it once the base proves p.

The universe for the variant clause is truncated to the atoms of the base
and the sequent plus one fresh atom; a note in every trace records this.
The trailing formula of the variant disjunction clause is read as the
quantified atom itself (the natural reading; traces carry a note).

Also here: counterexample search over bases, a bounded monotone variant of
the relations, the export-principle harness, and a decision procedure for
intuitionistic propositional derivability (the contraction-free four-case
calculus) used to compare proof-theoretic consequence with derivability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

from prooflab.atomic_system import (
    AtomicRule,
    Base,
    InconsistentBaseError,
    atoms_of_base,
    axiom,
    check_consistency,
    derivable_atoms,
    format_rule,
    star_translate,
)
from prooflab.syntax import (
    Absurdity,
    Atom,
    BOT,
    Conj,
    Disj,
    Formula,
    FormulaSyntaxError,
    Impl,
    atoms_of,
    format_formula,
    parse_formula,
)

__all__ = [
    "Sequent",
    "parse_sequent",
    "format_sequent",
    "SemanticsKind",
    "EvalTrace",
    "EvalResult",
    "models",
    "Evaluator",
    "fresh_atom",
    "SearchBounds",
    "SearchResult",
    "search_counterexample",
    "MonotoneResult",
    "models_monotone_bounded",
    "ExportReport",
    "export_principle_holds",
    "il_derives",
    "base_completeness_witness",
]


@dataclass(frozen=True)
class Sequent:
    premises: frozenset[Formula] = field(default_factory=frozenset)
    conclusion: Formula = BOT

    def __post_init__(self) -> None:
        object.__setattr__(self, "premises", frozenset(self.premises))

    def __str__(self) -> str:
        return format_sequent(self)


def parse_sequent(text: str) -> Sequent:
    if text.count("|-") != 1:
        raise FormulaSyntaxError("expected exactly one '|-'", text, 0)
    left, right = text.split("|-")
    premises = frozenset(
        parse_formula(part) for part in left.split(",") if part.strip()
    )
    return Sequent(premises=premises, conclusion=parse_formula(right))


def format_sequent(s: Sequent) -> str:
    left = ", ".join(sorted(format_formula(g) for g in s.premises))
    return f"{left} |- {format_formula(s.conclusion)}" if left else f"|- {format_formula(s.conclusion)}"


def atoms_of_sequent(s: Sequent) -> frozenset[str]:
    out = atoms_of(s.conclusion)
    for g in s.premises:
        out |= atoms_of(g)
    return out


class SemanticsKind(Enum):
    STANDARD = "standard"
    SANDQVIST = "sandqvist"


def fresh_atom(used: Iterable[str]) -> str:
    taken = set(used)
    if "c" not in taken:
        return "c"
    i = 1
    while f"c{i}" in taken:
        i += 1
    return f"c{i}"


@dataclass
class EvalTrace:
    kind: str
    universe: tuple[str, ...] | None
    notes: tuple[str, ...]
    entries: list[tuple[str, str, str, bool]] = field(default_factory=list)
    # entry: (clause, premises rendered, formula rendered, result)


@dataclass(frozen=True)
class EvalResult:
    holds: bool
    trace: EvalTrace


_VARIANT_NOTES = (
    "atom universe truncated to atoms(base) | atoms(sequent) | {one fresh atom}",
    "disjunction clause: the final consequent is read as the quantified atom C",
)


class Evaluator:
    """Clause-directed evaluation for one base; memoized on (premises, goal).

    Reusable across sequents whose atoms lie inside the universe it was
    created with; models() constructs a fresh one per call.
    """

    def __init__(
        self,
        kind: SemanticsKind,
        base: Base,
        universe: tuple[str, ...] | None,
        record: bool = True,
    ) -> None:
        self.kind = kind
        self.base = base
        self.derivable = derivable_atoms(base)
        self.universe = universe
        self.record = record
        self.memo: dict[tuple[frozenset[Formula], Formula], bool] = {}
        self.trace = EvalTrace(
            kind=kind.value,
            universe=universe,
            notes=_VARIANT_NOTES if kind is SemanticsKind.SANDQVIST else (),
        )

    def _log(self, clause: str, premises: frozenset[Formula], goal: Formula, result: bool) -> None:
        if self.record:
            rendered = ", ".join(sorted(format_formula(g) for g in premises))
            self.trace.entries.append((clause, rendered, format_formula(goal), result))

    def entails(self, premises: frozenset[Formula], goal: Formula) -> bool:
        key = (premises, goal)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        # every clause strictly shrinks the formula multiset, so plain
        # memoized recursion terminates without an in-progress guard
        if premises:
            result = (
                not all(self.entails(frozenset(), g) for g in premises)
            ) or self.entails(frozenset(), goal)
            self._log("premises", premises, goal, result)
        else:
            result = self._closed(goal)
        self.memo[key] = result
        return result

    def _closed(self, goal: Formula) -> bool:
        none: frozenset[Formula] = frozenset()
        if isinstance(goal, Atom):
            result = goal.name in self.derivable
            self._log("atom", none, goal, result)
            return result
        if isinstance(goal, Absurdity):
            result = "bot" in self.derivable
            self._log("bot", none, goal, result)
            return result
        if isinstance(goal, Conj):
            result = self.entails(none, goal.left) and self.entails(none, goal.right)
            self._log("conj", none, goal, result)
            return result
        if isinstance(goal, Impl):
            result = self.entails(frozenset({goal.left}), goal.right)
            self._log("impl", none, goal, result)
            return result
        assert isinstance(goal, Disj)
        if self.kind is SemanticsKind.STANDARD:
            result = self.entails(none, goal.left) or self.entails(none, goal.right)
            self._log("disj", none, goal, result)
            return result
        assert self.universe is not None
        result = True
        for name in self.universe:
            c = Atom(name)
            if (
                self.entails(frozenset({goal.left}), c)
                and self.entails(frozenset({goal.right}), c)
                and not self.entails(none, c)
            ):
                result = False
                break
        self._log("disj-elim", none, goal, result)
        return result


def _universe_for(kind: SemanticsKind, base: Base, sequent: Sequent) -> tuple[str, ...] | None:
    if kind is not SemanticsKind.SANDQVIST:
        return None
    used = atoms_of_base(base) | atoms_of_sequent(sequent)
    return tuple(sorted(used)) + (fresh_atom(used),)


def models(
    kind: SemanticsKind, base: Base, sequent: Sequent, *, trace: bool = True
) -> EvalResult:
    """Does the sequent hold over the base under the chosen relation?"""
    ev = Evaluator(kind, base, _universe_for(kind, base, sequent), record=trace)
    holds = ev.entails(sequent.premises, sequent.conclusion)
    return EvalResult(holds=holds, trace=ev.trace)


# ---------------------------------------------------------------------------
# counterexample search


@dataclass(frozen=True)
class SearchBounds:
    max_atoms: int = 3
    max_rules: int = 4
    max_level: int = 2


@dataclass(frozen=True)
class SearchResult:
    counterexample: Base | None
    examined: int
    bounds: SearchBounds
    note: str


def search_counterexample(
    kind: SemanticsKind, sequent: Sequent, bounds: SearchBounds = SearchBounds()
) -> SearchResult:
    """Smallest refuting base within bounds, or none.

    Axiom-only bases over the sequent's atoms are exhaustive for both
    relations at any bounds: no clause ever extends the base, so a verdict
    depends only on which of the sequent's atoms are derivable, every such
    derivability profile is realized by the axiom set itself, and for the
    variant clause an extra base atom is either derivable (its instances are
    vacuously satisfied) or indistinguishable from the fresh atom.  Rules of
    higher level therefore cannot refute anything the axiom sets cannot.
    """
    names = sorted(atoms_of_sequent(sequent))[: bounds.max_atoms]
    examined = 0
    limit = min(bounds.max_rules, len(names))
    for size in range(0, limit + 1):
        for chosen in combinations(names, size):
            b = Base(rules=frozenset(axiom(n) for n in chosen))
            examined += 1
            if not models(kind, b, sequent, trace=False).holds:
                return SearchResult(
                    counterexample=b,
                    examined=examined,
                    bounds=bounds,
                    note="axiom bases over the sequent's atoms are exhaustive here",
                )
    return SearchResult(
        counterexample=None,
        examined=examined,
        bounds=bounds,
        note="none found within bounds",
    )


# ---------------------------------------------------------------------------
# bounded monotone variant


@dataclass(frozen=True)
class MonotoneResult:
    holds: bool
    failing_extension: Base | None
    checked: int


def _subsets(items: tuple) -> Iterator[tuple]:
    for size in range(len(items) + 1):
        yield from combinations(items, size)


def models_monotone_bounded(
    kind: SemanticsKind,
    base: Base,
    sequent: Sequent,
    universe: Iterable[AtomicRule],
) -> MonotoneResult:
    """Quantify the premise clause over every consistent extension of the
    base inside the given finite rule universe."""
    extra = tuple(sorted(frozenset(universe) - base.rules, key=format_rule))
    checked = 0
    for subset in _subsets(extra):
        rules = base.rules | frozenset(subset)
        if not check_consistency(rules):
            continue
        checked += 1
        ext = Base(rules=rules)
        if not models(kind, ext, sequent, trace=False).holds:
            return MonotoneResult(holds=False, failing_extension=ext, checked=checked)
    return MonotoneResult(holds=True, failing_extension=None, checked=checked)


# ---------------------------------------------------------------------------
# export principle


@dataclass(frozen=True)
class ExportReport:
    kind: SemanticsKind
    left_holds: bool
    right_sequent: Sequent
    counterexample: Base | None
    examined: int
    verdict: str  # "confirmed-failure" | "no-counterexample-in-bounds"


def export_principle_holds(
    kind: SemanticsKind,
    base: Base,
    sequent: Sequent,
    assumed: Iterable[AtomicRule] = (),
    bounds: SearchBounds = SearchBounds(),
) -> ExportReport:
    """Test exporting a base and assumed rules into the object language.

    Left side: the sequent over the base joined with the assumed rules.
    Right side: premises extended with the star translations of the assumed
    rules and of the base, claimed over every base; refuted by searching for
    a counterexample base within bounds.  The verdict is confirmed-failure
    exactly when the left side holds and the right side has a refuting base.
    """
    assumed = frozenset(assumed)
    combined = Base(rules=base.rules | assumed)
    left = models(kind, combined, sequent, trace=False).holds
    stars = frozenset(star_translate(r) for r in assumed) | frozenset(
        star_translate(r) for r in base.rules
    )
    right_seq = Sequent(
        premises=sequent.premises | stars, conclusion=sequent.conclusion
    )
    search = search_counterexample(kind, right_seq, bounds)
    failed = left and search.counterexample is not None
    return ExportReport(
        kind=kind,
        left_holds=left,
        right_sequent=right_seq,
        counterexample=search.counterexample,
        examined=search.examined,
        verdict="confirmed-failure" if failed else "no-counterexample-in-bounds",
    )


# ---------------------------------------------------------------------------
# intuitionistic derivability (contraction-free four-case calculus)


@lru_cache(maxsize=65536)
def _ipc(gamma: frozenset, goal: Formula) -> bool:
    if BOT in gamma:
        return True
    if isinstance(goal, (Atom, Absurdity)) and goal in gamma:
        return True
    if isinstance(goal, Conj):
        return _ipc(gamma, goal.left) and _ipc(gamma, goal.right)
    if isinstance(goal, Impl):
        return _ipc(gamma | {goal.left}, goal.right)
    for f in gamma:
        if isinstance(f, Conj):
            return _ipc(gamma - {f} | {f.left, f.right}, goal)
        if isinstance(f, Disj):
            rest = gamma - {f}
            return _ipc(rest | {f.left}, goal) and _ipc(rest | {f.right}, goal)
        if isinstance(f, Impl):
            a = f.left
            if isinstance(a, (Atom, Absurdity)):
                if a in gamma:
                    return _ipc(gamma - {f} | {f.right}, goal)
            elif isinstance(a, Conj):
                return _ipc(
                    gamma - {f} | {Impl(a.left, Impl(a.right, f.right))}, goal
                )
            elif isinstance(a, Disj):
                return _ipc(
                    gamma - {f} | {Impl(a.left, f.right), Impl(a.right, f.right)},
                    goal,
                )
    if isinstance(goal, Disj):
        if _ipc(gamma, goal.left) or _ipc(gamma, goal.right):
            return True
    for f in gamma:
        if isinstance(f, Impl) and isinstance(f.left, Impl):
            rest = gamma - {f}
            if _ipc(rest | {Impl(f.left.right, f.right)}, f.left) and _ipc(
                rest | {f.right}, goal
            ):
                return True
    return False


def il_derives(premises: Iterable[Formula], conclusion: Formula) -> bool:
    """Intuitionistic propositional derivability, decided without loops:
    every rule of the four-case calculus strictly shrinks its sequent."""
    return _ipc(frozenset(premises), conclusion)


# ---------------------------------------------------------------------------
# base-completeness witness


def base_completeness_witness(kind: str = "standard") -> dict:
    """The vacuous consequence p over the empty base entails q, yet q is not
    intuitionistically derivable from p; any calculus closed under
    substitution that answered yes to p derives q would be inconsistent."""
    p, q = Atom("p"), Atom("q")
    seq = Sequent(premises=frozenset({p}), conclusion=q)
    empty = Base()
    if kind in ("standard", "sandqvist"):
        entailed = models(SemanticsKind(kind), empty, seq, trace=False).holds
    elif kind == "alpha":
        from prooflab.validity import models_alpha  # deferred: avoids a module cycle

        entailed = models_alpha(empty, seq).verdict.status.value == "valid"
    else:
        raise ValueError(f"unknown semantics kind: {kind!r}")
    derivable = il_derives((p,), q)
    monotone = models_monotone_bounded(
        SemanticsKind.STANDARD, empty, seq, universe={axiom("p")}
    )
    return {
        "kind": kind,
        "sequent": format_sequent(seq),
        "base": "empty",
        "models": entailed,
        "il_derives": derivable,
        "verdict": "not-base-complete" if entailed and not derivable else "inconclusive",
        "monotone_bounded_universe_p": monotone.holds,
    }
