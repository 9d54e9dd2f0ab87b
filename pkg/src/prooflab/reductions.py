"""Reductions on argument structures and the reachability search.

A reduction is a named partial rewrite: a domain predicate plus a
transformation that must preserve the conclusion and may only shrink the
assumptions.  The standard set removes introduction/elimination detours
(conjunction, disjunction, implication) and unwinds the two derived steps
(weakening an implication's antecedent by a conjunct, projecting a
disjunction) when their major premise is in introduced form.  Justifications
may add pointer reductions (one fixed structure to another) and constant
reductions (every instance of a one-step inference to one fixed closed
structure).

Rewrites apply at any position whose subtree is self-contained: no discharge
reaches from inside it to a node above it.  A discharge crossing the
boundary would need the rewrite to track where the bound leaf ends up, so
such positions are skipped; the search reports that a closure computed with
skips is not a proof of unreachability.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from prooflab.arguments import (
    ArgumentStructure,
    AssumptionDischarge,
    AxiomDischarge,
    DischargeItem,
    Inference,
    Path,
    RuleDischarge,
    StructureError,
    _splice_leaves,
    and_elim,
    assumption,
    assumptions,
    conclusion,
    is_closed,
    iter_nodes,
    match_and_elim,
    match_and_intro,
    match_impl_elim,
    match_impl_intro,
    match_or_elim,
    match_or_intro,
    match_or_project,
    match_weaken,
    replace,
    structure_of_inference,
    sub_structures,
)
from prooflab.syntax import Formula, format_formula

__all__ = [
    "Reduction",
    "CONJ_DETOUR",
    "DISJ_DETOUR",
    "IMP_DETOUR",
    "WEAKEN_DETOUR",
    "PROJECT_DETOUR",
    "standard_reductions",
    "pointer_reduction",
    "constant_reduction",
    "extract",
    "ReductionStep",
    "reduce_step",
    "successors",
    "SearchOutcome",
    "search_reduct",
    "reduces_to",
    "closure",
    "ClosureResult",
]


@dataclass(eq=False, frozen=True)
class Reduction:
    name: str
    applies: Callable[[ArgumentStructure], bool]
    rewrite: Callable[[ArgumentStructure], ArgumentStructure]

    def __repr__(self) -> str:
        return f"<reduction {self.name}>"


# ---------------------------------------------------------------------------
# the standard detour conversions


def _root_entry_leaves(struct: ArgumentStructure, child: int) -> list[Path]:
    """Leaves under the given child that the root step discharges, as paths
    relative to that child."""
    out = []
    for item, target in struct.discharge:
        if target == () and isinstance(item, AssumptionDischarge):
            if item.leaf[:1] == (child,):
                out.append(item.leaf[1:])
    return out


def _conj_applies(d: ArgumentStructure) -> bool:
    side = match_and_elim(d)
    return side is not None and match_and_intro(sub_structures(d)[0])


def _conj_rewrite(d: ArgumentStructure) -> ArgumentStructure:
    side = match_and_elim(d)
    return sub_structures(sub_structures(d)[0])[side - 1]


def _disj_applies(d: ArgumentStructure) -> bool:
    return match_or_elim(d) and match_or_intro(sub_structures(d)[0])


def _disj_rewrite(d: ArgumentStructure) -> ArgumentStructure:
    major = sub_structures(d)[0]
    inner = sub_structures(major)[0]
    g = major.root.formula  # the disjunction
    case = 1 if conclusion(inner) == g.left else 2
    case_sub = sub_structures(d)[case]
    grafts = {path: inner for path in _root_entry_leaves(d, case)}
    return _splice_leaves(case_sub, grafts)


def _imp_applies(d: ArgumentStructure) -> bool:
    return match_impl_elim(d) and match_impl_intro(sub_structures(d)[0])


def _imp_rewrite(d: ArgumentStructure) -> ArgumentStructure:
    major, minor = sub_structures(d)
    body = sub_structures(major)[0]
    grafts = {path: minor for path in _root_entry_leaves(major, 0)}
    return _splice_leaves(body, grafts)


def _weaken_applies(d: ArgumentStructure) -> bool:
    return match_weaken(d) and match_impl_intro(sub_structures(d)[0])


def _weaken_rewrite(d: ArgumentStructure) -> ArgumentStructure:
    intro = sub_structures(d)[0]
    body = sub_structures(intro)[0]
    f = d.root.formula  # Impl(Conj(a, c), b)
    paths = _root_entry_leaves(intro, 0)
    stub = and_elim(assumption(f.left), 1)
    new_body = _splice_leaves(body, {path: stub for path in paths})
    ext = tuple(
        (AssumptionDischarge(leaf=(0,) + path + (0,)), ()) for path in paths
    )
    return structure_of_inference(
        Inference(subs=(new_body,), conclusion=f, extension=ext)
    )


def _project_applies(d: ArgumentStructure) -> bool:
    if not (match_or_project(d) and match_or_intro(sub_structures(d)[0])):
        return False
    major = sub_structures(d)[0]
    return conclusion(sub_structures(major)[0]) == major.root.formula.left


def _project_rewrite(d: ArgumentStructure) -> ArgumentStructure:
    return sub_structures(sub_structures(d)[0])[0]


CONJ_DETOUR = Reduction("conj-detour", _conj_applies, _conj_rewrite)
DISJ_DETOUR = Reduction("disj-detour", _disj_applies, _disj_rewrite)
IMP_DETOUR = Reduction("imp-detour", _imp_applies, _imp_rewrite)
WEAKEN_DETOUR = Reduction("weaken-detour", _weaken_applies, _weaken_rewrite)
PROJECT_DETOUR = Reduction("project-detour", _project_applies, _project_rewrite)

_STANDARD = (CONJ_DETOUR, DISJ_DETOUR, IMP_DETOUR, WEAKEN_DETOUR, PROJECT_DETOUR)


def standard_reductions() -> tuple[Reduction, ...]:
    """Always the same five objects, so membership tests stay meaningful."""
    return _STANDARD


# ---------------------------------------------------------------------------
# justification-supplied reductions


def pointer_reduction(
    source: ArgumentStructure, target: ArgumentStructure, name: str = "pointer"
) -> Reduction:
    """Rewrites exactly one structure to another with the same conclusion
    and no new assumptions."""
    if conclusion(target) != conclusion(source):
        raise StructureError("pointer reduction changes the conclusion")
    if not assumptions(target) <= assumptions(source):
        raise StructureError("pointer reduction introduces assumptions")
    return Reduction(name, lambda d: d == source, lambda d: target)


def constant_reduction(
    premises: Sequence[Formula],
    concl: Formula,
    target: ArgumentStructure,
    name: str = "constant",
) -> Reduction:
    """Rewrites every instance of the one-step inference with the given
    premises and conclusion to one fixed closed structure."""
    if conclusion(target) != concl:
        raise StructureError("constant reduction changes the conclusion")
    if not is_closed(target):
        raise StructureError(
            "constant reduction needs a closed target, got assumptions "
            f"{sorted(format_formula(f) for f in assumptions(target))}"
        )
    want = tuple(premises)

    def applies(d: ArgumentStructure) -> bool:
        if d.root.formula != concl or len(d.root.children) != len(want):
            return False
        if any(t == () for _, t in d.discharge):
            return False
        return all(
            conclusion(sub) == f for sub, f in zip(sub_structures(d), want)
        )

    return Reduction(name, applies, lambda d: target)


# ---------------------------------------------------------------------------
# applying reductions in place


def extract(struct: ArgumentStructure, at: Path) -> ArgumentStructure | None:
    """The subtree at a position as a structure of its own, or None when a
    discharge escapes it."""
    entries = []
    for item, target in struct.discharge:
        src = _item_source(item)
        src_in = src[: len(at)] == at
        tgt_in = target[: len(at)] == at
        if src_in and not tgt_in:
            return None
        if src_in:
            entries.append((_strip_item(item, len(at)), target[len(at):]))
    return ArgumentStructure(root=struct.node_at(at), discharge=tuple(entries))


def _item_source(item: DischargeItem) -> Path:
    return item.leaf if hasattr(item, "leaf") else item.node


def _strip_item(item: DischargeItem, n: int) -> DischargeItem:
    if isinstance(item, AssumptionDischarge):
        return AssumptionDischarge(leaf=item.leaf[n:])
    if isinstance(item, AxiomDischarge):
        return AxiomDischarge(leaf=item.leaf[n:])
    return RuleDischarge(node=item.node[n:], rule=item.rule)


@dataclass(frozen=True)
class ReductionStep:
    position: Path
    rule: str
    result: ArgumentStructure


def reduce_step(
    struct: ArgumentStructure, reductions: Sequence[Reduction]
) -> ReductionStep | None:
    """First applicable rewrite, scanning positions outermost-first and
    leftmost, reductions in the given order."""
    for path, node in iter_nodes(struct):
        sub = extract(struct, path)
        if sub is None:
            continue
        for red in reductions:
            if red.applies(sub):
                return ReductionStep(
                    position=path,
                    rule=red.name,
                    result=replace(struct, path, red.rewrite(sub)),
                )
    return None


def successors(
    struct: ArgumentStructure, reductions: Sequence[Reduction]
) -> tuple[list[ReductionStep], bool]:
    """All one-step rewrites, plus whether any position was skipped because
    a discharge escapes it."""
    out: list[ReductionStep] = []
    skipped = False
    for path, node in iter_nodes(struct):
        sub = extract(struct, path)
        if sub is None:
            skipped = True
            continue
        for red in reductions:
            if red.applies(sub):
                out.append(
                    ReductionStep(
                        position=path,
                        rule=red.name,
                        result=replace(struct, path, red.rewrite(sub)),
                    )
                )
    return out, skipped


@dataclass(frozen=True)
class SearchOutcome:
    status: str  # "yes" | "no" | "inconclusive"
    path: tuple[tuple[Path, str], ...] | None
    witness: ArgumentStructure | None
    visited: int
    note: str = ""


@dataclass(frozen=True)
class ClosureResult:
    structures: tuple[ArgumentStructure, ...]  # BFS order, start included
    complete: bool
    skipped: bool
    visited: int


DEFAULT_BUDGET = 10_000


def closure(
    start: ArgumentStructure,
    reductions: Sequence[Reduction],
    budget: int = DEFAULT_BUDGET,
) -> ClosureResult:
    """Every structure reachable by rewriting, breadth-first, up to the
    budget on distinct structures."""
    seen = {start}
    order = [start]
    queue = deque([start])
    skipped_any = False
    complete = True
    while queue:
        cur = queue.popleft()
        succ, skipped = successors(cur, reductions)
        skipped_any |= skipped
        for step in succ:
            if step.result in seen:
                continue
            if len(seen) >= budget:
                complete = False
                queue.clear()
                break
            seen.add(step.result)
            order.append(step.result)
            queue.append(step.result)
    return ClosureResult(
        structures=tuple(order),
        complete=complete,
        skipped=skipped_any,
        visited=len(order),
    )


def search_reduct(
    start: ArgumentStructure,
    goal: ArgumentStructure | Callable[[ArgumentStructure], bool],
    reductions: Sequence[Reduction],
    budget: int = DEFAULT_BUDGET,
) -> SearchOutcome:
    """Breadth-first search for a reduct: a fixed structure or anything
    satisfying a predicate.  "no" means the whole closure was enumerated
    with no skipped positions; otherwise a failed search is inconclusive."""
    if callable(goal):
        pred = goal
    else:
        pred = lambda d: d == goal
    parents: dict[ArgumentStructure, tuple[ArgumentStructure, Path, str] | None] = {
        start: None
    }
    queue = deque([start])
    skipped_any = False
    visited = 0
    while queue:
        cur = queue.popleft()
        visited += 1
        if pred(cur):
            steps = []
            node = cur
            while parents[node] is not None:
                prev, pos, name = parents[node]
                steps.append((pos, name))
                node = prev
            return SearchOutcome(
                status="yes",
                path=tuple(reversed(steps)),
                witness=cur,
                visited=visited,
            )
        succ, skipped = successors(cur, reductions)
        skipped_any |= skipped
        for step in succ:
            if step.result in parents:
                continue
            if len(parents) >= budget:
                return SearchOutcome(
                    status="inconclusive",
                    path=None,
                    witness=None,
                    visited=visited,
                    note=f"budget of {budget} distinct structures exhausted",
                )
            parents[step.result] = (cur, step.position, step.rule)
            queue.append(step.result)
    if skipped_any:
        return SearchOutcome(
            status="inconclusive",
            path=None,
            witness=None,
            visited=visited,
            note="some positions were crossed by discharges and not rewritten",
        )
    return SearchOutcome(status="no", path=None, witness=None, visited=visited)


def reduces_to(
    start: ArgumentStructure,
    target: ArgumentStructure,
    reductions: Sequence[Reduction],
    budget: int = DEFAULT_BUDGET,
) -> SearchOutcome:
    """Reflexive-transitive reachability of one structure from another."""
    return search_reduct(start, target, reductions, budget=budget)
