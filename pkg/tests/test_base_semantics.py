"""Consequence evaluators, counterexample search, export harness, IL prover."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import (
    enum_derivable_atoms,
    heyting_entails,
    heyting_valid,
    ref_standard,
    ref_variant,
)
from prooflab.atomic_system import Base, axiom, check_consistency, parse_base_text
from prooflab.base_semantics import (
    EvalResult,
    ExportReport,
    SearchBounds,
    SemanticsKind,
    Sequent,
    base_completeness_witness,
    export_principle_holds,
    format_sequent,
    fresh_atom,
    il_derives,
    models,
    models_monotone_bounded,
    parse_sequent,
    search_counterexample,
)
from prooflab.syntax import Atom, BOT, Impl, parse_formula

STD = SemanticsKind.STANDARD
SDQ = SemanticsKind.SANDQVIST


def seq(text: str) -> Sequent:
    return parse_sequent(text)


def base(text: str) -> Base:
    return parse_base_text(text)


EMPTY = Base()


# ---------------------------------------------------------------------------
# sequent syntax


def test_sequent_parsing():
    s = seq("p, q -> r |- s")
    assert s.premises == {parse_formula("p"), parse_formula("q -> r")}
    assert s.conclusion == Atom("s")
    assert parse_sequent(format_sequent(s)) == s
    assert seq("|- p").premises == frozenset()
    with pytest.raises(Exception):
        parse_sequent("p |- q |- r")


# ---------------------------------------------------------------------------
# the two evaluators


def test_atoms_ground_in_derivability():
    assert models(STD, base("p."), seq("|- p")).holds
    assert not models(STD, EMPTY, seq("|- p")).holds
    assert models(STD, base("p.\n(p => q)"), seq("|- q")).holds


def test_premises_read_materially():
    # vacuous: p is not derivable over the empty base
    assert models(STD, EMPTY, seq("p |- q")).holds
    assert models(SDQ, EMPTY, seq("p |- q")).holds


def test_non_monotonicity_witness():
    grown = base("p.")
    assert not models(STD, grown, seq("p |- q")).holds
    assert not models(SDQ, grown, seq("p |- q")).holds


def test_conjunction_and_implication_clauses():
    b = base("p.\nq.")
    assert models(STD, b, seq("|- p & q")).holds
    assert not models(STD, base("p."), seq("|- p & q")).holds
    assert models(STD, base("(p => q)"), seq("|- p -> q")).holds
    assert not models(STD, base("p."), seq("|- p -> q")).holds


def test_disjunction_clauses_diverge_in_shape():
    b = base("p.")
    std = models(STD, b, seq("|- p | q"))
    sdq = models(SDQ, b, seq("|- p | q"))
    assert std.holds and sdq.holds
    assert sdq.trace.universe is not None
    assert any("fresh" in note for note in sdq.trace.notes)
    assert any("quantified atom C" in note for note in sdq.trace.notes)


def test_excluded_middle_holds_on_every_consistent_base():
    for b in [EMPTY, base("p."), base("(p => q)"), base("(p => bot)")]:
        assert models(STD, b, seq("|- p | ~p")).holds
        assert models(SDQ, b, seq("|- p | ~p")).holds


def test_bot_never_holds_on_a_consistent_base():
    assert not models(STD, EMPTY, seq("|- bot")).holds
    assert not models(SDQ, base("p."), seq("|- bot")).holds


def test_fresh_atom_avoids_collisions():
    assert fresh_atom({"p", "q"}) == "c"
    assert fresh_atom({"c", "c1"}) == "c2"


# oracle agreement ----------------------------------------------------------

formula_pool = [
    "p", "q", "bot", "~p", "p & q", "p | q", "p -> q", "q -> p",
    "p | ~p", "~~p", "~~p -> p", "(p -> q) -> q", "p & (p -> q)",
    "p | q -> q | p", "~(p & q)", "p -> q | p",
]

base_pool = [
    "", "p.", "q.", "p.\nq.", "(p => q)", "p.\n(p => q)",
    "(p => bot)", "(q => p)", "p.\n(q => bot)", "([p => q] => r)\nq.",
]


@pytest.mark.parametrize("btext", base_pool)
def test_standard_matches_classical_collapse(btext):
    b = parse_base_text(btext)
    derivable = enum_derivable_atoms(b.rules, {"p", "q", "r", "bot"}, 6)
    for left in [None, "p", "~p", "p -> q"]:
        for right in formula_pool:
            premises = frozenset({parse_formula(left)}) if left else frozenset()
            s = Sequent(premises=premises, conclusion=parse_formula(right))
            expect = ref_standard(premises, s.conclusion, derivable)
            assert models(STD, b, s, trace=False).holds == expect, (btext, left, right)


@pytest.mark.parametrize("btext", base_pool)
def test_variant_matches_direct_transcription(btext):
    b = parse_base_text(btext)
    derivable = enum_derivable_atoms(b.rules, {"p", "q", "r", "bot"}, 6)
    for right in formula_pool:
        s = Sequent(conclusion=parse_formula(right))
        got = models(SDQ, b, s, trace=False)
        universe = frozenset(got.trace.universe or ())
        expect = ref_variant(s.premises, s.conclusion, derivable, universe)
        assert got.holds == expect, (btext, right)


def test_evaluation_is_stable_under_memoization():
    b = base("p.\n(p => q)")
    s = seq("p -> q |- q | r")
    first = models(STD, b, s)
    second = models(STD, b, s)
    assert first.holds == second.holds


# ---------------------------------------------------------------------------
# counterexample search


def test_search_finds_the_smallest_refuting_base():
    res = search_counterexample(STD, seq("p |- q"))
    assert res.counterexample is not None
    assert res.counterexample.rules == {axiom("p")}


def test_search_exhausts_cleanly_on_classical_tautologies():
    for text in ["|- ((p -> q) -> p) -> p", "|- ~~p -> p", "|- p | ~p"]:
        for kind in (STD, SDQ):
            res = search_counterexample(kind, seq(text), SearchBounds(3, 4, 2))
            assert res.counterexample is None, (text, kind)
            assert res.examined >= 1


def test_search_respects_rule_bound():
    res = search_counterexample(STD, seq("p |- q"), SearchBounds(max_rules=0))
    assert res.counterexample is None


# ---------------------------------------------------------------------------
# bounded monotone variant


def test_monotone_bounded_kills_vacuous_consequence():
    res = models_monotone_bounded(STD, EMPTY, seq("p |- q"), universe={axiom("p")})
    assert not res.holds
    assert res.failing_extension is not None
    assert res.failing_extension.rules == {axiom("p")}


def test_monotone_bounded_accepts_stable_consequence():
    res = models_monotone_bounded(
        STD, EMPTY, seq("p & q |- p"), universe={axiom("p"), axiom("q")}
    )
    assert res.holds
    assert res.checked == 4


# ---------------------------------------------------------------------------
# export principle


def test_export_fails_on_the_vacuous_consequence():
    report = export_principle_holds(STD, EMPTY, seq("p |- q"))
    assert report.left_holds
    assert report.verdict == "confirmed-failure"
    assert report.counterexample is not None
    assert report.counterexample.rules == {axiom("p")}


def test_export_unrefuted_when_left_fails():
    report = export_principle_holds(STD, base("p."), seq("p |- q"))
    assert not report.left_holds
    assert report.verdict == "no-counterexample-in-bounds"


def test_export_right_sequent_carries_star_translations():
    report = export_principle_holds(STD, base("(p => q)"), seq("|- q"))
    assert parse_formula("p -> q") in report.right_sequent.premises


# ---------------------------------------------------------------------------
# intuitionistic derivability


il_theorems = [
    "p -> p",
    "p -> q -> p",
    "(p -> q -> r) -> (p -> q) -> p -> r",
    "bot -> p",
    "p -> ~~p",
    "(p -> q) -> ~q -> ~p",
    "p & q -> p",
    "p -> q -> p & q",
    "p -> p | q",
    "(p -> r) -> (q -> r) -> p | q -> r",
]

il_non_theorems = [
    "((p -> q) -> p) -> p",
    "~~p -> p",
    "p | ~p",
    "(~p -> q | r) -> (~p -> q) | (~p -> r)",
    "(p -> q) | (q -> p)",
]


@pytest.mark.parametrize("text", il_theorems)
def test_il_theorems(text):
    f = parse_formula(text)
    assert il_derives((), f)
    assert heyting_valid(f)


@pytest.mark.parametrize("text", il_non_theorems)
def test_il_non_theorems(text):
    f = parse_formula(text)
    assert not il_derives((), f)
    assert not heyting_valid(f)


def test_il_with_premises():
    assert il_derives((parse_formula("p"), parse_formula("p -> q")), Atom("q"))
    assert not il_derives((parse_formula("p"),), Atom("q"))
    assert il_derives((BOT,), Atom("q"))


names = st.sampled_from(["p", "q"])
small_formulas = st.recursive(
    st.one_of(names.map(Atom), st.just(BOT)),
    lambda sub: st.one_of(
        st.builds(lambda a, b: parse_formula(f"({a}) & ({b})"), sub.map(str), sub.map(str)),
        st.builds(lambda a, b: parse_formula(f"({a}) | ({b})"), sub.map(str), sub.map(str)),
        st.builds(lambda a, b: parse_formula(f"({a}) -> ({b})"), sub.map(str), sub.map(str)),
    ),
    max_leaves=6,
)


@settings(max_examples=40, deadline=None)
@given(small_formulas)
def test_il_sound_for_small_frames(f):
    # anything the calculus proves must be valid in every small frame
    if il_derives((), f):
        assert heyting_valid(f)


# ---------------------------------------------------------------------------
# base-completeness witness


@pytest.mark.parametrize("kind", ["standard", "sandqvist"])
def test_base_completeness_witness(kind):
    report = base_completeness_witness(kind)
    assert report["models"] is True
    assert report["il_derives"] is False
    assert report["verdict"] == "not-base-complete"
    assert report["monotone_bounded_universe_p"] is False
