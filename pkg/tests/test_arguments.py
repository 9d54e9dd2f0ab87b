"""Tests for argument structures, discharge validation, and the
derivation encoding."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prooflab.arguments import (
    ArgumentStructure,
    AssumptionDischarge,
    AxiomDischarge,
    Node,
    RuleDischarge,
    StructureError,
    and_elim,
    and_intro,
    assumption,
    assumption_paths,
    assumptions,
    axiom_leaf,
    conclusion,
    derivation_to_structure,
    impl_elim,
    impl_intro,
    instantiate,
    is_atomic_derivation,
    is_canonical,
    is_closed,
    iter_nodes,
    leaf,
    match_and_elim,
    match_and_intro,
    match_impl_elim,
    match_impl_intro,
    match_or_elim,
    match_or_intro,
    match_or_project,
    match_weaken,
    or_elim,
    or_intro_left,
    or_intro_right,
    or_project,
    pretty,
    replace,
    root_discharges,
    root_inference,
    rule_step,
    structure_from_obj,
    structure_of_inference,
    structure_to_obj,
    sub_structures,
    validate,
    weaken,
)
from prooflab.atomic_system import Base, derive, parse_base_text, parse_rule
from prooflab.syntax import Atom, BOT, Conj, Disj, Impl, parse_formula

p, q, r, s = Atom("p"), Atom("q"), Atom("r"), Atom("s")


# ---------------------------------------------------------------------------
# construction and accessors


def test_assumption_is_open():
    d = assumption(p)
    assert conclusion(d) == p
    assert assumptions(d) == {p}
    assert not is_closed(d)


def test_axiom_leaf_is_closed():
    d = axiom_leaf(p)
    assert conclusion(d) == p
    assert assumptions(d) == frozenset()
    assert is_closed(d)


def test_and_intro_shape():
    d = and_intro(assumption(p), assumption(q))
    assert conclusion(d) == Conj(p, q)
    assert assumptions(d) == {p, q}
    assert match_and_intro(d)
    assert is_canonical(d)
    assert not match_impl_intro(d)


def test_impl_intro_discharges_matching_leaves():
    d = impl_intro(and_intro(assumption(p), assumption(p)), p)
    assert conclusion(d) == Impl(p, Conj(p, p))
    assert is_closed(d)
    assert len(root_discharges(d)) == 2
    assert match_impl_intro(d)
    assert is_canonical(d)


def test_impl_intro_vacuous_discharge():
    d = impl_intro(assumption(q), p)
    assert conclusion(d) == Impl(p, q)
    assert assumptions(d) == {q}
    assert root_discharges(d) == ()
    assert match_impl_intro(d)


def test_impl_intro_leaves_other_assumptions_open():
    d = impl_intro(impl_elim(assumption(Impl(p, q)), assumption(p)), p)
    assert assumptions(d) == {Impl(p, q)}
    assert is_closed(impl_intro(d, Impl(p, q)))


def test_or_elim_discharges_cases():
    cases = or_elim(
        assumption(Disj(p, q)),
        or_intro_left(assumption(p), q),
        or_intro_right(assumption(q), p),
    )
    assert conclusion(cases) == Disj(p, q)
    assert assumptions(cases) == {Disj(p, q)}
    assert match_or_elim(cases)
    assert not is_canonical(cases)


def test_elim_shapes():
    d1 = and_elim(assumption(Conj(p, q)), 1)
    assert conclusion(d1) == p
    assert match_and_elim(d1) == 1
    d2 = and_elim(assumption(Conj(p, q)), 2)
    assert conclusion(d2) == q
    assert match_and_elim(d2) == 2
    mp = impl_elim(assumption(Impl(p, q)), assumption(p))
    assert conclusion(mp) == q
    assert match_impl_elim(mp)
    assert not is_canonical(mp)


def test_weaken_shape():
    d = weaken(assumption(Impl(p, q)), r)
    assert conclusion(d) == Impl(Conj(p, r), q)
    assert match_weaken(d)
    assert not match_impl_intro(d)


def test_or_project_shape():
    d = or_project(assumption(Disj(p, q)))
    assert conclusion(d) == p
    assert match_or_project(d)
    assert match_and_elim(d) is None


def test_builder_argument_checks():
    with pytest.raises(StructureError):
        and_elim(assumption(p), 1)
    with pytest.raises(StructureError):
        impl_elim(assumption(Impl(p, q)), assumption(q))
    with pytest.raises(StructureError):
        or_elim(assumption(p), assumption(r), assumption(r))
    with pytest.raises(StructureError):
        or_elim(assumption(Disj(p, q)), assumption(r), assumption(s))
    with pytest.raises(StructureError):
        weaken(assumption(p), q)
    with pytest.raises(StructureError):
        or_project(assumption(p))


# ---------------------------------------------------------------------------
# discharge validation


def test_discharge_target_must_be_strictly_below():
    with pytest.raises(StructureError):
        ArgumentStructure(
            root=leaf(p), discharge=((AssumptionDischarge(leaf=()), ()),)
        )


def test_discharge_paths_must_exist():
    with pytest.raises(StructureError):
        ArgumentStructure(
            root=Node(formula=q, children=(leaf(p),)),
            discharge=((AssumptionDischarge(leaf=(3,)), ()),),
        )


def test_assumption_discharge_rejects_axiomatic_leaf():
    with pytest.raises(StructureError):
        ArgumentStructure(
            root=Node(formula=q, children=(leaf(p, axiomatic=True),)),
            discharge=((AssumptionDischarge(leaf=(0,)), ()),),
        )


def test_axiom_discharge_rejects_compound_label():
    with pytest.raises(StructureError):
        ArgumentStructure(
            root=Node(formula=q, children=(leaf(Conj(p, q), axiomatic=True),)),
            discharge=((AxiomDischarge(leaf=(0,)), ()),),
        )


def test_duplicate_discharge_rejected():
    with pytest.raises(StructureError):
        ArgumentStructure(
            root=Node(formula=Impl(p, p), children=(leaf(p),)),
            discharge=(
                (AssumptionDischarge(leaf=(0,)), ()),
                (AssumptionDischarge(leaf=(0,)), ()),
            ),
        )


def test_rule_discharge_shape_checks():
    rule = parse_rule("(p => q)")
    good = ArgumentStructure(
        root=Node(
            formula=r,
            children=(
                Node(formula=q, children=(leaf(p, axiomatic=True),)),
            ),
        ),
        discharge=((RuleDischarge(node=(0,), rule=rule), ()),),
    )
    assert good.node_at((0,)).formula == q
    with pytest.raises(StructureError):
        ArgumentStructure(
            root=Node(formula=r, children=(Node(formula=s, children=(leaf(p),)),)),
            discharge=((RuleDischarge(node=(0,), rule=rule), ()),),
        )
    with pytest.raises(StructureError):
        ArgumentStructure(
            root=Node(formula=r, children=(leaf(q),)),
            discharge=((RuleDischarge(node=(0,), rule=rule), ()),),
        )


def test_assumption_may_not_land_on_rule_discharge_anchor():
    # an assumption leaf discharged at the parent node of a discharged edge
    # set is ruled out, and likewise at that edge set's target
    rule = parse_rule("(p => q)")
    with pytest.raises(StructureError):
        ArgumentStructure(
            root=Node(
                formula=r,
                children=(
                    Node(formula=q, children=(leaf(p, axiomatic=True),)),
                    leaf(r),
                ),
            ),
            discharge=(
                (RuleDischarge(node=(0,), rule=rule), ()),
                (AssumptionDischarge(leaf=(1,)), ()),
            ),
        )


def test_axiom_on_rule_discharge_anchor_is_flagged_not_rejected():
    rule = parse_rule("(p => q)")
    d = ArgumentStructure(
        root=Node(
            formula=r,
            children=(
                Node(formula=q, children=(leaf(p, axiomatic=True),)),
                leaf(s, axiomatic=True),
            ),
        ),
        discharge=(
            (RuleDischarge(node=(0,), rule=rule), ()),
            (AxiomDischarge(leaf=(1,)), ()),
        ),
    )
    notes = validate(d)
    assert len(notes) == 1
    assert "leaves this reading open" in notes[0]
    assert validate(and_intro(assumption(p), assumption(q))) == []


# ---------------------------------------------------------------------------
# sub-structures, inferences, instances, replacement


def small_formulas():
    return st.sampled_from(
        [p, q, r, Conj(p, q), Disj(p, q), Impl(p, q), BOT]
    )


def structures():
    base = st.sampled_from([p, q, r, Impl(p, q)]).map(assumption)

    def extend(children):
        return st.one_of(
            st.tuples(children, children).map(lambda t: and_intro(*t)),
            st.tuples(children, small_formulas()).map(
                lambda t: or_intro_left(t[0], t[1])
            ),
            st.tuples(children, small_formulas()).map(
                lambda t: impl_intro(t[0], t[1])
            ),
        )

    return st.recursive(base, extend, max_leaves=6)


@settings(max_examples=120)
@given(structures())
def test_inference_roundtrip(d):
    assert structure_of_inference(root_inference(d)) == d


@settings(max_examples=120)
@given(structures())
def test_sub_structures_reopen_discharged_leaves(d):
    for i, sub in enumerate(sub_structures(d)):
        assert sub.root == d.root.children[i]
        reopened = {
            item.leaf[1:]
            for item, target in d.discharge
            if target == () and item.leaf[:1] == (i,)
        }
        assert reopened <= set(assumption_paths(sub))


@settings(max_examples=100)
@given(structures())
def test_instantiate_identity(d):
    sigma = {f: assumption(f) for f in assumptions(d)}
    assert instantiate(d, sigma) == d


@settings(max_examples=100)
@given(structures())
def test_instantiate_rewrites_assumptions(d):
    c0 = Atom("c0")
    sigma = {f: and_elim(assumption(Conj(f, c0)), 1) for f in assumptions(d)}
    inst = instantiate(d, sigma)
    assert conclusion(inst) == conclusion(d)
    assert assumptions(inst) == {Conj(f, c0) for f in assumptions(d)}


def test_instantiate_requires_total_map():
    d = and_intro(assumption(p), assumption(q))
    with pytest.raises(StructureError):
        instantiate(d, {p: assumption(p)})
    with pytest.raises(StructureError):
        instantiate(d, {p: assumption(p), q: assumption(r)})


def test_instantiate_keeps_axiomatic_leaves():
    d = and_intro(axiom_leaf(p), assumption(p))
    inst = instantiate(d, {p: axiom_leaf(p)})
    assert inst.node_at((0,)).axiomatic
    assert inst.node_at((1,)).axiomatic


def test_replace_subtree():
    d = and_intro(assumption(p), assumption(q))
    out = replace(d, (0,), and_elim(assumption(Conj(p, r)), 1))
    assert conclusion(out) == Conj(p, q)
    assert assumptions(out) == {Conj(p, r), q}


def test_replace_rejects_conclusion_mismatch():
    d = and_intro(assumption(p), assumption(q))
    with pytest.raises(StructureError):
        replace(d, (0,), assumption(r))


def test_replace_rejects_dangling_discharge():
    d = impl_intro(assumption(p), p)
    with pytest.raises(StructureError):
        replace(d, (0,), axiom_leaf(p))


def test_replace_at_root_swaps_everything():
    d = and_intro(assumption(p), assumption(q))
    e = and_intro(axiom_leaf(p), axiom_leaf(q))
    assert replace(d, (), e) == e


def test_replace_keeps_outside_discharges():
    d = and_intro(impl_intro(assumption(p), p), assumption(q))
    out = replace(d, (1,), axiom_leaf(q))
    assert conclusion(out) == Conj(Impl(p, p), q)
    assert is_closed(out)
    assert len(out.discharge) == 1


def test_replace_rejects_discharged_leaf_as_hole():
    # the discharged leaf itself sits inside the hole while its target
    # survives, so the discharge would dangle
    d = impl_intro(impl_elim(assumption(Impl(p, q)), assumption(p)), p)
    with pytest.raises(StructureError):
        replace(d, (0, 1), axiom_leaf(p))


# ---------------------------------------------------------------------------
# atomic derivations


def test_rule_step_builds_atomic_tree():
    rule = parse_rule("(p, q => r)")
    d = rule_step(rule, [axiom_leaf(p), axiom_leaf(q)])
    assert conclusion(d) == r
    assert is_closed(d)
    with pytest.raises(StructureError):
        rule_step(rule, [axiom_leaf(p)])
    with pytest.raises(StructureError):
        rule_step(rule, [axiom_leaf(p), axiom_leaf(s)])


def test_derivation_roundtrip_simple_chain():
    base = parse_base_text("p.\n(p => q)\n(q => r)\n")
    res = derive(base, frozenset(), "r")
    d = derivation_to_structure(res.tree, base)
    assert conclusion(d) == r
    assert is_closed(d)
    assert d.discharge == ()
    assert is_atomic_derivation(d, base)


def test_derivation_with_assumed_axiom_discharge():
    # ([p => p] => s): concluding s after establishing p from the assumed
    # axiom p; the p-leaf is discharged at the application node
    base = parse_base_text("([p => p] => s)\n")
    res = derive(base, frozenset(), "s")
    assert res.derivable
    d = derivation_to_structure(res.tree, base)
    assert conclusion(d) == s
    assert len(d.discharge) == 1
    item, target = d.discharge[0]
    assert isinstance(item, AxiomDischarge)
    assert target == ()
    assert is_atomic_derivation(d, base)


def test_derivation_with_assumed_rule_discharge():
    base = parse_base_text("([(p => q) => t] => u)\np.\n(q => t)\n")
    res = derive(base, frozenset(), "u")
    assert res.derivable
    d = derivation_to_structure(res.tree, base)
    assert is_closed(d)
    kinds = [type(item).__name__ for item, _ in d.discharge]
    assert "RuleDischarge" in kinds
    assert is_atomic_derivation(d, base)


def test_atomic_replay_rejects_out_of_scope_use():
    # using the assumed axiom p outside the premise that introduced it
    base = parse_base_text("([p => p] => s)\n(s, p => t)\n")
    bad = ArgumentStructure(
        root=Node(
            formula=Atom("t"),
            children=(
                Node(formula=s, children=(leaf(p, axiomatic=True),)),
                leaf(p, axiomatic=True),
            ),
        ),
        discharge=(
            (AxiomDischarge(leaf=(0, 0)), (0,)),
            (AxiomDischarge(leaf=(1,)), ()),
        ),
    )
    assert not is_atomic_derivation(bad, base)
    good = ArgumentStructure(
        root=Node(formula=s, children=(leaf(p, axiomatic=True),)),
        discharge=((AxiomDischarge(leaf=(0,)), ()),),
    )
    assert is_atomic_derivation(good, base)


def test_atomic_replay_rejects_open_or_compound():
    base = parse_base_text("p.\n")
    assert not is_atomic_derivation(assumption(p), base)
    assert not is_atomic_derivation(and_intro(axiom_leaf(p), axiom_leaf(p)), base)
    assert is_atomic_derivation(axiom_leaf(p), base)
    assert not is_atomic_derivation(axiom_leaf(q), base)


def test_atomic_replay_matches_engine_on_sample_bases():
    texts = [
        "p.\n(p => q)\n(q => r)\n",
        "a.\n(a => x)\n(x => g)\n(g => x)\n",
        "([p => q] => r)\nq.\n",
        "([(p => q) => t] => u)\np.\n(q => t)\n",
        "(bot => z)\n([z => w] => w)\n",
    ]
    from prooflab.atomic_system import atoms_of_base, derivable_atoms

    for text in texts:
        base = parse_base_text(text)
        for atom_name in sorted(atoms_of_base(base) | {"bot"}):
            res = derive(base, frozenset(), atom_name)
            if res.derivable:
                d = derivation_to_structure(res.tree, base)
                assert is_atomic_derivation(d, base), (text, atom_name)
        assert derivable_atoms(base, frozenset()) == {
            a
            for a in atoms_of_base(base)
            if derive(base, frozenset(), a).derivable
        }


# ---------------------------------------------------------------------------
# serialization and printing


def test_obj_roundtrip():
    rule = parse_rule("(p => q)")
    d = ArgumentStructure(
        root=Node(
            formula=r,
            children=(Node(formula=q, children=(leaf(p, axiomatic=True),)),),
        ),
        discharge=(
            (RuleDischarge(node=(0,), rule=rule), ()),
            (AxiomDischarge(leaf=(0, 0)), (0,)),
        ),
    )
    blob = json.dumps(structure_to_obj(d), sort_keys=True)
    assert structure_from_obj(json.loads(blob)) == d


@settings(max_examples=80)
@given(structures())
def test_obj_roundtrip_generated(d):
    assert structure_from_obj(structure_to_obj(d)) == d


def test_pretty_marks_discharges():
    d = impl_intro(assumption(p), p)
    text = pretty(d)
    assert "p -> p(1)" in text
    assert "p[1]" in text
    text2 = pretty(axiom_leaf(q))
    assert "q*" in text2


def test_iter_nodes_preorder():
    d = and_intro(assumption(p), assumption(q))
    paths = [path for path, _ in iter_nodes(d)]
    assert paths == [(), (0,), (1,)]
