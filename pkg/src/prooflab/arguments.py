"""Argument structures: labelled trees with a discharge function.

A structure is a finite rooted tree of formula-labelled nodes together with
a discharge map f.  Top-nodes (leaves) split into axiomatic and
non-axiomatic; f may send

  (a) a non-axiomatic leaf (an assumption occurrence),
  (b) an axiomatic leaf labelled by an atom (an assumed atomic axiom), or
  (c) the edge set joining an atom-labelled node to all its children, all
      atom-labelled too (an assumed atomic rule application, which carries
      the rule it stands for),

to a node strictly nearer the root.  Following the letter of the defining
clause, no assumption leaf may be discharged at the parent node of such an
edge set, nor at that edge set's own target; the validator enforces this and
validate() additionally flags the readings the clause leaves open (an
axiomatic leaf discharged there).

Nodes are addressed by paths (tuples of child indexes from the root), so
discharge needs no index bookkeeping: instances and rewrites shift paths and
the pretty-printer invents display indexes at the end.

Assumptions are the labels of undischarged non-axiomatic leaves; a structure
is closed when it has none.  An instance replaces every assumption leaf by a
structure with the matching conclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from prooflab.atomic_system import (
    AtomicRule,
    Base,
    DerivationNode,
    axiom,
    format_rule,
    parse_rule,
)
from prooflab.syntax import (
    Absurdity,
    Atom,
    BOT,
    Conj,
    Disj,
    Formula,
    Impl,
    formula_from_obj,
    formula_to_obj,
    format_formula,
)

__all__ = [
    "Path",
    "Node",
    "AssumptionDischarge",
    "AxiomDischarge",
    "RuleDischarge",
    "DischargeItem",
    "ArgumentStructure",
    "StructureError",
    "leaf",
    "assumption",
    "axiom_leaf",
    "conclusion",
    "assumptions",
    "assumption_paths",
    "is_closed",
    "sub_structures",
    "root_discharges",
    "instantiate",
    "replace",
    "Inference",
    "root_inference",
    "structure_of_inference",
    "RuleSchema",
    "SCHEMATA",
    "and_intro",
    "or_intro_left",
    "or_intro_right",
    "impl_intro",
    "and_elim",
    "or_elim",
    "impl_elim",
    "weaken",
    "or_project",
    "rule_step",
    "match_and_intro",
    "match_or_intro",
    "match_impl_intro",
    "match_and_elim",
    "match_or_elim",
    "match_impl_elim",
    "match_weaken",
    "match_or_project",
    "is_canonical",
    "derivation_to_structure",
    "is_atomic_derivation",
    "validate",
    "structure_to_obj",
    "structure_from_obj",
    "pretty",
]

Path = tuple[int, ...]


class StructureError(ValueError):
    pass


def _atomic_formula(f: Formula) -> bool:
    return isinstance(f, (Atom, Absurdity))


def _atom_name(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Absurdity):
        return "bot"
    raise StructureError(f"not an atomic label: {format_formula(f)}")


@dataclass(frozen=True, slots=True)
class Node:
    formula: Formula
    children: tuple["Node", ...] = ()
    axiomatic: bool = False


@dataclass(frozen=True, slots=True)
class AssumptionDischarge:
    leaf: Path


@dataclass(frozen=True, slots=True)
class AxiomDischarge:
    leaf: Path


@dataclass(frozen=True, slots=True)
class RuleDischarge:
    node: Path
    rule: AtomicRule


DischargeItem = AssumptionDischarge | AxiomDischarge | RuleDischarge


def _source(item: DischargeItem) -> Path:
    return item.leaf if isinstance(item, (AssumptionDischarge, AxiomDischarge)) else item.node


def _entry_key(entry: tuple[DischargeItem, Path]):
    item, target = entry
    rank = {AssumptionDischarge: 0, AxiomDischarge: 1, RuleDischarge: 2}[type(item)]
    extra = format_rule(item.rule) if isinstance(item, RuleDischarge) else ""
    return (_source(item), rank, extra, target)


def _is_proper_prefix(short: Path, long: Path) -> bool:
    return len(short) < len(long) and long[: len(short)] == short


@dataclass(frozen=True)
class ArgumentStructure:
    root: Node
    discharge: tuple[tuple[DischargeItem, Path], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "discharge", tuple(sorted(self.discharge, key=_entry_key))
        )
        _validate_hard(self)

    def node_at(self, path: Path) -> Node:
        node = self.root
        for i in path:
            node = node.children[i]
        return node

    def __str__(self) -> str:
        return pretty(self)


def iter_nodes(struct: ArgumentStructure) -> Iterator[tuple[Path, Node]]:
    def walk(node: Node, path: Path) -> Iterator[tuple[Path, Node]]:
        yield path, node
        for i, child in enumerate(node.children):
            yield from walk(child, path + (i,))

    yield from walk(struct.root, ())


def _validate_hard(struct: ArgumentStructure) -> None:
    nodes = dict(iter_nodes(struct))
    for path, node in nodes.items():
        if node.axiomatic and node.children:
            raise StructureError(f"axiomatic mark on an inner node at {path}")
    seen_sources: set[tuple[type, Path]] = set()
    for item, target in struct.discharge:
        src = _source(item)
        if src not in nodes:
            raise StructureError(f"discharge source {src} is not a node")
        if target not in nodes:
            raise StructureError(f"discharge target {target} is not a node")
        if not _is_proper_prefix(target, src):
            raise StructureError(
                f"discharge target {target} is not strictly below {src}"
            )
        key = (type(item), src)
        if key in seen_sources:
            raise StructureError(f"node {src} discharged twice")
        seen_sources.add(key)
        node = nodes[src]
        if isinstance(item, AssumptionDischarge):
            if node.children or node.axiomatic:
                raise StructureError(
                    f"assumption discharge at {src} needs a non-axiomatic leaf"
                )
        elif isinstance(item, AxiomDischarge):
            if node.children or not node.axiomatic:
                raise StructureError(
                    f"axiom discharge at {src} needs an axiomatic leaf"
                )
            if not _atomic_formula(node.formula):
                raise StructureError(
                    f"axiom discharge at {src} needs an atomic label"
                )
        else:
            if not node.children:
                raise StructureError(f"rule discharge at {src} needs children")
            if not _atomic_formula(node.formula):
                raise StructureError(f"rule discharge at {src} needs an atomic node")
            if any(not _atomic_formula(c.formula) for c in node.children):
                raise StructureError(
                    f"rule discharge at {src} needs atomic children"
                )
            if item.rule.conclusion != _atom_name(node.formula):
                raise StructureError(
                    f"rule discharge at {src}: rule concludes "
                    f"{item.rule.conclusion}, node is {format_formula(node.formula)}"
                )
            want = sorted(p.conclusion for p in item.rule.premises)
            got = sorted(_atom_name(c.formula) for c in node.children)
            if want != got:
                raise StructureError(
                    f"rule discharge at {src}: premises {want} vs children {got}"
                )
    # the defining clause forbids discharging an assumption at the parent
    # node of a discharged edge set or at that edge set's target
    blocked = set()
    for item, target in struct.discharge:
        if isinstance(item, RuleDischarge):
            blocked.add(item.node)
            blocked.add(target)
    for item, target in struct.discharge:
        if isinstance(item, AssumptionDischarge) and target in blocked:
            raise StructureError(
                f"assumption discharged at {target}, which anchors a "
                "discharged rule application"
            )


def validate(struct: ArgumentStructure) -> list[str]:
    """Hard checks ran at construction; returns the soft warnings."""
    warnings: list[str] = []
    blocked = set()
    for item, target in struct.discharge:
        if isinstance(item, RuleDischarge):
            blocked.add(item.node)
            blocked.add(target)
    for item, target in struct.discharge:
        if isinstance(item, AxiomDischarge) and target in blocked:
            warnings.append(
                f"axiom leaf {item.leaf} discharged at {target}, a node "
                "anchoring a discharged rule application; the defining "
                "clause leaves this reading open"
            )
    return warnings


# ---------------------------------------------------------------------------
# basic accessors and builders


def leaf(f: Formula, axiomatic: bool = False) -> Node:
    return Node(formula=f, axiomatic=axiomatic)


def assumption(f: Formula) -> ArgumentStructure:
    """The single-node structure: its own conclusion and only assumption."""
    return ArgumentStructure(root=leaf(f))


def axiom_leaf(f: Formula) -> ArgumentStructure:
    return ArgumentStructure(root=leaf(f, axiomatic=True))


def conclusion(struct: ArgumentStructure) -> Formula:
    return struct.root.formula


def _discharged_leaves(struct: ArgumentStructure) -> set[Path]:
    return {
        item.leaf
        for item, _ in struct.discharge
        if isinstance(item, AssumptionDischarge)
    }


def assumption_paths(struct: ArgumentStructure) -> dict[Path, Formula]:
    """Undischarged non-axiomatic leaves, in preorder."""
    discharged = _discharged_leaves(struct)
    return {
        path: node.formula
        for path, node in iter_nodes(struct)
        if not node.children and not node.axiomatic and path not in discharged
    }


def assumptions(struct: ArgumentStructure) -> frozenset[Formula]:
    return frozenset(assumption_paths(struct).values())


def is_closed(struct: ArgumentStructure) -> bool:
    return not assumption_paths(struct)


def root_discharges(struct: ArgumentStructure) -> tuple[DischargeItem, ...]:
    return tuple(item for item, target in struct.discharge if target == ())


def sub_structures(struct: ArgumentStructure) -> tuple[ArgumentStructure, ...]:
    """Immediate sub-structures; discharges pointing at the root are
    stripped, so their leaves come out open again."""
    out = []
    for i, child in enumerate(struct.root.children):
        entries = []
        for item, target in struct.discharge:
            src = _source(item)
            if src[:1] == (i,) and target[:1] == (i,):
                entries.append((_shift_item(item, -1, i), target[1:]))
        out.append(ArgumentStructure(root=child, discharge=tuple(entries)))
    return tuple(out)


def _shift_item(item: DischargeItem, direction: int, index: int) -> DischargeItem:
    if direction > 0:
        mod = lambda p: (index,) + p
    else:
        mod = lambda p: p[1:]
    if isinstance(item, AssumptionDischarge):
        return AssumptionDischarge(leaf=mod(item.leaf))
    if isinstance(item, AxiomDischarge):
        return AxiomDischarge(leaf=mod(item.leaf))
    return RuleDischarge(node=mod(item.node), rule=item.rule)


def _shift_entries(
    entries: Sequence[tuple[DischargeItem, Path]], index: int
) -> list[tuple[DischargeItem, Path]]:
    return [
        (_shift_item(item, 1, index), (index,) + target) for item, target in entries
    ]


def _prefix_entries(
    entries: Sequence[tuple[DischargeItem, Path]], prefix: Path
) -> list[tuple[DischargeItem, Path]]:
    out = list(entries)
    for i in reversed(prefix):
        out = _shift_entries(out, i)
    return out


def _with_subtree(node: Node, path: Path, new: Node) -> Node:
    if not path:
        return new
    i = path[0]
    children = list(node.children)
    children[i] = _with_subtree(children[i], path[1:], new)
    return Node(
        formula=node.formula, children=tuple(children), axiomatic=node.axiomatic
    )


def _splice_leaves(
    struct: ArgumentStructure, grafts: Mapping[Path, ArgumentStructure]
) -> ArgumentStructure:
    """Replace the leaves at the given paths; existing paths are unchanged
    because splicing happens at leaves."""
    root = struct.root
    entries = list(struct.discharge)
    for path, sub in grafts.items():
        node = struct.node_at(path)
        if node.children:
            raise StructureError(f"splice target {path} is not a leaf")
        root = _with_subtree(root, path, sub.root)
        entries.extend(_prefix_entries(sub.discharge, path))
    return ArgumentStructure(root=root, discharge=tuple(entries))


def instantiate(
    struct: ArgumentStructure, sigma: Mapping[Formula, ArgumentStructure]
) -> ArgumentStructure:
    """Replace every assumption leaf by the structure its label maps to."""
    targets = assumption_paths(struct)
    missing = sorted(
        format_formula(f) for f in set(targets.values()) - set(sigma.keys())
    )
    if missing:
        raise StructureError(f"instantiation misses assumptions: {missing}")
    for f, sub in sigma.items():
        if f in targets.values() and conclusion(sub) != f:
            raise StructureError(
                f"instance for {format_formula(f)} concludes "
                f"{format_formula(conclusion(sub))}"
            )
    grafts = {path: sigma[f] for path, f in targets.items()}
    return _splice_leaves(struct, grafts)


def replace(
    struct: ArgumentStructure, at: Path, replacement: ArgumentStructure
) -> ArgumentStructure:
    """Swap the subtree at a position for a structure with the same
    conclusion.  Discharges from inside the hole to surviving nodes would
    dangle and are rejected; discharges wholly inside the hole vanish with
    it, everything outside is preserved."""
    old = struct.node_at(at)
    if conclusion(replacement) != old.formula:
        raise StructureError(
            f"replacement concludes {format_formula(conclusion(replacement))}, "
            f"hole is {format_formula(old.formula)}"
        )
    kept = []
    for item, target in struct.discharge:
        src = _source(item)
        src_in = src == at or _is_proper_prefix(at, src)
        tgt_in = target == at or _is_proper_prefix(at, target)
        if src_in and not tgt_in:
            raise StructureError(
                f"discharge from {src} to {target} would dangle"
            )
        if not src_in:
            # target == at is fine: the hole's root survives as the
            # replacement's root; strictly deeper targets cannot occur
            # without the source being inside too
            kept.append((item, target))
    kept.extend(_prefix_entries(replacement.discharge, at))
    return ArgumentStructure(
        root=_with_subtree(struct.root, at, replacement.root),
        discharge=tuple(kept),
    )


# ---------------------------------------------------------------------------
# inferences and rule schemata


@dataclass(frozen=True)
class Inference:
    """One step: immediate sub-structures, a conclusion, and the discharge
    entries the step itself adds (sources given relative to the whole
    one-step structure)."""

    subs: tuple[ArgumentStructure, ...]
    conclusion: Formula
    extension: tuple[tuple[DischargeItem, Path], ...] = ()


def root_inference(struct: ArgumentStructure) -> Inference:
    ext = tuple(
        (item, target) for item, target in struct.discharge if target == ()
    )
    return Inference(
        subs=sub_structures(struct), conclusion=struct.root.formula, extension=ext
    )


def structure_of_inference(inf: Inference, axiomatic: bool = False) -> ArgumentStructure:
    """The structure an inference is uniquely associated to."""
    entries: list[tuple[DischargeItem, Path]] = []
    for i, sub in enumerate(inf.subs):
        entries.extend(_shift_entries(sub.discharge, i))
    entries.extend(inf.extension)
    return ArgumentStructure(
        root=Node(
            formula=inf.conclusion,
            children=tuple(sub.root for sub in inf.subs),
            axiomatic=axiomatic and not inf.subs,
        ),
        discharge=tuple(entries),
    )


def and_intro(left: ArgumentStructure, right: ArgumentStructure) -> ArgumentStructure:
    return structure_of_inference(
        Inference(
            subs=(left, right),
            conclusion=Conj(conclusion(left), conclusion(right)),
        )
    )


def or_intro_left(sub: ArgumentStructure, right: Formula) -> ArgumentStructure:
    return structure_of_inference(
        Inference(subs=(sub,), conclusion=Disj(conclusion(sub), right))
    )


def or_intro_right(sub: ArgumentStructure, left: Formula) -> ArgumentStructure:
    return structure_of_inference(
        Inference(subs=(sub,), conclusion=Disj(left, conclusion(sub)))
    )


def impl_intro(sub: ArgumentStructure, antecedent: Formula) -> ArgumentStructure:
    """Discharges every open occurrence of the antecedent; vacuous is fine."""
    ext = tuple(
        (AssumptionDischarge(leaf=(0,) + path), ())
        for path, f in assumption_paths(sub).items()
        if f == antecedent
    )
    return structure_of_inference(
        Inference(
            subs=(sub,),
            conclusion=Impl(antecedent, conclusion(sub)),
            extension=ext,
        )
    )


def and_elim(sub: ArgumentStructure, side: int) -> ArgumentStructure:
    f = conclusion(sub)
    if not isinstance(f, Conj):
        raise StructureError("and_elim needs a conjunction")
    return structure_of_inference(
        Inference(subs=(sub,), conclusion=f.left if side == 1 else f.right)
    )


def impl_elim(major: ArgumentStructure, minor: ArgumentStructure) -> ArgumentStructure:
    f = conclusion(major)
    if not isinstance(f, Impl) or f.left != conclusion(minor):
        raise StructureError("impl_elim needs a matching implication")
    return structure_of_inference(Inference(subs=(major, minor), conclusion=f.right))


def or_elim(
    major: ArgumentStructure,
    left_case: ArgumentStructure,
    right_case: ArgumentStructure,
) -> ArgumentStructure:
    f = conclusion(major)
    if not isinstance(f, Disj):
        raise StructureError("or_elim needs a disjunction")
    c = conclusion(left_case)
    if conclusion(right_case) != c:
        raise StructureError("or_elim cases conclude different formulas")
    ext = [
        (AssumptionDischarge(leaf=(1,) + path), ())
        for path, g in assumption_paths(left_case).items()
        if g == f.left
    ]
    ext += [
        (AssumptionDischarge(leaf=(2,) + path), ())
        for path, g in assumption_paths(right_case).items()
        if g == f.right
    ]
    return structure_of_inference(
        Inference(
            subs=(major, left_case, right_case),
            conclusion=c,
            extension=tuple(ext),
        )
    )


def weaken(sub: ArgumentStructure, extra: Formula) -> ArgumentStructure:
    f = conclusion(sub)
    if not isinstance(f, Impl):
        raise StructureError("weaken needs an implication")
    return structure_of_inference(
        Inference(subs=(sub,), conclusion=Impl(Conj(f.left, extra), f.right))
    )


def or_project(sub: ArgumentStructure) -> ArgumentStructure:
    f = conclusion(sub)
    if not isinstance(f, Disj):
        raise StructureError("or_project needs a disjunction")
    return structure_of_inference(Inference(subs=(sub,), conclusion=f.left))


def rule_step(rule: AtomicRule, subs: Sequence[ArgumentStructure]) -> ArgumentStructure:
    """One application of an atomic rule, children in premise order."""
    if len(subs) != len(rule.premises):
        raise StructureError("premise count mismatch")
    for p, sub in zip(rule.premises, subs):
        got = conclusion(sub)
        if _atom_name(got) != p.conclusion:
            raise StructureError(
                f"premise {p.conclusion} proved as {format_formula(got)}"
            )
    f: Formula = BOT if rule.conclusion == "bot" else Atom(rule.conclusion)
    return structure_of_inference(Inference(subs=tuple(subs), conclusion=f))


# matchers ------------------------------------------------------------------


def match_and_intro(struct: ArgumentStructure) -> bool:
    f = struct.root.formula
    kids = struct.root.children
    return (
        isinstance(f, Conj)
        and len(kids) == 2
        and kids[0].formula == f.left
        and kids[1].formula == f.right
        and not root_discharges(struct)
    )


def match_or_intro(struct: ArgumentStructure) -> bool:
    f = struct.root.formula
    kids = struct.root.children
    return (
        isinstance(f, Disj)
        and len(kids) == 1
        and kids[0].formula in (f.left, f.right)
        and not root_discharges(struct)
    )


def match_impl_intro(struct: ArgumentStructure) -> bool:
    f = struct.root.formula
    kids = struct.root.children
    if not (isinstance(f, Impl) and len(kids) == 1 and kids[0].formula == f.right):
        return False
    for item in root_discharges(struct):
        if not isinstance(item, AssumptionDischarge):
            return False
        if struct.node_at(item.leaf).formula != f.left:
            return False
    return True


def match_and_elim(struct: ArgumentStructure) -> int | None:
    kids = struct.root.children
    if len(kids) != 1 or root_discharges(struct):
        return None
    g = kids[0].formula
    if not isinstance(g, Conj):
        return None
    if struct.root.formula == g.left:
        return 1
    if struct.root.formula == g.right:
        return 2
    return None


def match_impl_elim(struct: ArgumentStructure) -> bool:
    kids = struct.root.children
    if len(kids) != 2 or root_discharges(struct):
        return False
    g = kids[0].formula
    return (
        isinstance(g, Impl)
        and g.left == kids[1].formula
        and g.right == struct.root.formula
    )


def match_or_elim(struct: ArgumentStructure) -> bool:
    kids = struct.root.children
    if len(kids) != 3:
        return False
    g = kids[0].formula
    if not isinstance(g, Disj):
        return False
    c = struct.root.formula
    if kids[1].formula != c or kids[2].formula != c:
        return False
    for item, target in struct.discharge:
        if target != ():
            continue
        if not isinstance(item, AssumptionDischarge):
            return False
        label = struct.node_at(item.leaf).formula
        if item.leaf[:1] == (1,) and label == g.left:
            continue
        if item.leaf[:1] == (2,) and label == g.right:
            continue
        return False
    return True


def match_weaken(struct: ArgumentStructure) -> bool:
    f = struct.root.formula
    kids = struct.root.children
    return (
        isinstance(f, Impl)
        and isinstance(f.left, Conj)
        and len(kids) == 1
        and kids[0].formula == Impl(f.left.left, f.right)
        and not root_discharges(struct)
    )


def match_or_project(struct: ArgumentStructure) -> bool:
    kids = struct.root.children
    if len(kids) != 1 or root_discharges(struct):
        return False
    g = kids[0].formula
    return isinstance(g, Disj) and g.left == struct.root.formula


def is_canonical(struct: ArgumentStructure) -> bool:
    """Root step is an introduction: conjunction, disjunction, implication."""
    return (
        match_and_intro(struct)
        or match_or_intro(struct)
        or match_impl_intro(struct)
    )


@dataclass(frozen=True)
class RuleSchema:
    name: str
    matcher: Callable[[ArgumentStructure], object]
    builder: Callable[..., ArgumentStructure]


SCHEMATA: dict[str, RuleSchema] = {
    s.name: s
    for s in [
        RuleSchema("and_intro", match_and_intro, and_intro),
        RuleSchema("or_intro", match_or_intro, or_intro_left),
        RuleSchema("impl_intro", match_impl_intro, impl_intro),
        RuleSchema("and_elim", match_and_elim, and_elim),
        RuleSchema("or_elim", match_or_elim, or_elim),
        RuleSchema("impl_elim", match_impl_elim, impl_elim),
        RuleSchema("weaken", match_weaken, weaken),
        RuleSchema("or_project", match_or_project, or_project),
    ]
}


# ---------------------------------------------------------------------------
# atomic derivations as structures


def derivation_to_structure(
    tree: DerivationNode, base: Base | frozenset[AtomicRule]
) -> ArgumentStructure:
    """Encode a derivation tree: applications of base rules are plain steps,
    applications of assumed rules are discharged at the node that made them
    available (edge sets for proper rules, axiom leaves for axioms)."""
    base_rules = base.rules if isinstance(base, Base) else base
    entries: list[tuple[DischargeItem, Path]] = []

    def build(node: DerivationNode, path: Path, env: dict[AtomicRule, Path]) -> Node:
        formula: Formula = BOT if node.conclusion == "bot" else Atom(node.conclusion)
        if not node.rule.premises:
            if node.rule not in base_rules:
                if node.rule not in env:
                    raise StructureError(
                        f"axiom {format_rule(node.rule)} is neither in the "
                        "base nor assumed anywhere below"
                    )
                entries.append((AxiomDischarge(leaf=path), env[node.rule]))
            return Node(formula=formula, axiomatic=True)
        children = []
        for i, (prem, child) in enumerate(zip(node.rule.premises, node.children)):
            inner = dict(env)
            for s in prem.discharged:
                inner[s] = path
            children.append(build(child, path + (i,), inner))
        if node.rule not in base_rules:
            if node.rule not in env:
                raise StructureError(
                    f"rule {format_rule(node.rule)} is neither in the base "
                    "nor assumed anywhere below"
                )
            entries.append((RuleDischarge(node=path, rule=node.rule), env[node.rule]))
        return Node(formula=formula, children=tuple(children))

    root = build(tree, (), {})
    return ArgumentStructure(root=root, discharge=tuple(entries))


def is_atomic_derivation(
    struct: ArgumentStructure, base: Base | frozenset[AtomicRule]
) -> bool:
    """Replay a structure as a derivation over the base: every label atomic,
    every leaf an available axiom, every step an available rule, where
    availability flows from the base and from discharged rule premises."""
    base_rules = base.rules if isinstance(base, Base) else base
    axiom_items = {
        item.leaf: target
        for item, target in struct.discharge
        if isinstance(item, AxiomDischarge)
    }
    rule_items = {
        item.node: (item.rule, target)
        for item, target in struct.discharge
        if isinstance(item, RuleDischarge)
    }
    if any(
        isinstance(item, AssumptionDischarge) for item, _ in struct.discharge
    ):
        return False

    def ok(node: Node, path: Path, env: dict[AtomicRule, set[Path]]) -> bool:
        if not _atomic_formula(node.formula):
            return False
        name = _atom_name(node.formula)
        if not node.children:
            if not node.axiomatic:
                return False
            ax = axiom(name)
            if path in axiom_items:
                target = axiom_items[path]
                return ax in env and target in env[ax]
            return ax in base_rules
        if path in rule_items:
            rule, target = rule_items[path]
            if rule not in env or target not in env[rule]:
                return False
            candidates = [rule]
        else:
            candidates = [
                r
                for r in base_rules
                if r.conclusion == name and len(r.premises) == len(node.children)
            ]
        for rule in candidates:
            if rule.conclusion != name or len(rule.premises) != len(node.children):
                continue
            if _match_children(node, path, rule, env):
                return True
        return False

    def _match_children(
        node: Node, path: Path, rule: AtomicRule, env: dict[AtomicRule, set[Path]]
    ) -> bool:
        # assign premises to children by conclusion name, backtracking over
        # ties because different premises may open different rule sets
        order = list(range(len(rule.premises)))

        def assign(i: int, used: set[int]) -> bool:
            if i == len(node.children):
                return True
            child = node.children[i]
            if not _atomic_formula(child.formula):
                return False
            cname = _atom_name(child.formula)
            for j in order:
                if j in used or rule.premises[j].conclusion != cname:
                    continue
                inner = {r: set(paths) for r, paths in env.items()}
                for s in rule.premises[j].discharged:
                    inner.setdefault(s, set()).add(path)
                if ok(child, path + (i,), inner) and assign(i + 1, used | {j}):
                    return True
            return False

        return assign(0, set())

    return ok(struct.root, (), {})


# ---------------------------------------------------------------------------
# serialization and pretty printing


def _node_to_obj(node: Node) -> object:
    out: dict = {"formula": formula_to_obj(node.formula)}
    if node.axiomatic:
        out["axiomatic"] = True
    if node.children:
        out["children"] = [_node_to_obj(c) for c in node.children]
    return out


def _node_from_obj(obj: dict) -> Node:
    return Node(
        formula=formula_from_obj(obj["formula"]),
        children=tuple(_node_from_obj(c) for c in obj.get("children", [])),
        axiomatic=bool(obj.get("axiomatic", False)),
    )


def structure_to_obj(struct: ArgumentStructure) -> object:
    entries = []
    for item, target in struct.discharge:
        e: dict = {"target": list(target)}
        if isinstance(item, AssumptionDischarge):
            e["kind"] = "assume"
            e["path"] = list(item.leaf)
        elif isinstance(item, AxiomDischarge):
            e["kind"] = "axiom"
            e["path"] = list(item.leaf)
        else:
            e["kind"] = "rule"
            e["path"] = list(item.node)
            e["rule"] = format_rule(item.rule)
        entries.append(e)
    return {"root": _node_to_obj(struct.root), "discharge": entries}


def structure_from_obj(obj: dict) -> ArgumentStructure:
    entries: list[tuple[DischargeItem, Path]] = []
    for e in obj.get("discharge", []):
        path = tuple(e["path"])
        target = tuple(e["target"])
        if e["kind"] == "assume":
            entries.append((AssumptionDischarge(leaf=path), target))
        elif e["kind"] == "axiom":
            entries.append((AxiomDischarge(leaf=path), target))
        elif e["kind"] == "rule":
            entries.append(
                (RuleDischarge(node=path, rule=parse_rule(e["rule"])), target)
            )
        else:
            raise StructureError(f"unknown discharge kind: {e['kind']!r}")
    return ArgumentStructure(root=_node_from_obj(obj["root"]), discharge=tuple(entries))


def pretty(struct: ArgumentStructure) -> str:
    """Indented tree, conclusion first.  Discharge sources show as [k],
    their targets as (k); axiomatic leaves are starred."""
    index: dict[Path, list[str]] = {}
    for k, (item, target) in enumerate(struct.discharge, start=1):
        index.setdefault(_source(item), []).append(f"[{k}]")
        index.setdefault(target, []).append(f"({k})")

    lines: list[str] = []

    def walk(node: Node, path: Path, depth: int) -> None:
        marks = "".join(index.get(path, []))
        star = "*" if node.axiomatic else ""
        lines.append("  " * depth + format_formula(node.formula) + star + marks)
        for i, child in enumerate(node.children):
            walk(child, path + (i,), depth + 1)

    walk(struct.root, (), 0)
    return "\n".join(lines)
