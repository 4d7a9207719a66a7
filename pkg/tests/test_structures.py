"""Finite structures: evaluation, closure, substructures, serialization."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locus.catalog import example_sentence, mono3_model, mono3_sentence, psi1
from locus.structures import (
    FiniteStructure,
    SignatureMismatch,
    StructureError,
    closure,
    closure_step,
    eval_formula_partial,
    generated_substructure,
    satisfies,
    satisfies_bruteforce,
    structure_from_json,
    structure_to_json,
)
from locus.syntax import (
    App,
    Eq,
    Less,
    Not,
    Or,
    Rel,
    Signature,
    UniversalSentence,
    Var,
)

EX = example_sentence()


def _example_witness() -> FiniteStructure:
    # two elements, the predicate holds on the bottom one, the
    # constant sits on top, i collapses everything to the bottom
    return FiniteStructure(2, EX.signature, {"i": (0, 0)}, {"P": frozenset({(0,)})}, {"a": 1})


def test_tables_validated():
    with pytest.raises(StructureError):
        FiniteStructure(2, EX.signature, {"i": (0, 5)}, {"P": frozenset()}, {"a": 0})
    with pytest.raises(StructureError):
        FiniteStructure(2, EX.signature, {"i": (0,)}, {"P": frozenset()}, {"a": 0})
    with pytest.raises(StructureError):
        FiniteStructure(2, EX.signature, {"i": (0, 0)}, {"P": frozenset({(2,)})}, {"a": 0})


def test_satisfies_example_witness():
    assert satisfies(_example_witness(), EX)


def test_satisfies_rejects_wrong_signature():
    m = mono3_model()
    with pytest.raises(SignatureMismatch):
        satisfies(m, EX)


def test_empty_structure_satisfies_constant_free_sentences():
    m = FiniteStructure(0, mono3_sentence().signature, {"g": ()}, {}, {})
    assert satisfies(m, mono3_sentence())
    p = psi1()
    empty = FiniteStructure(0, p.signature, {"I": ()}, {"P": frozenset()}, {})
    assert satisfies(empty, p)


def test_three_valued_evaluation_short_circuits():
    m = _example_witness()

    class Partial:
        def constant(self, name):
            return None

        def function(self, name, args):
            return None

        def relation(self, name, args):
            return m.relation_holds(name, args)

    # knowing only P, a disjunction with a true known branch decides
    f = Or((Rel("P", (Var("x"),)), Eq(App("i", (Var("x"),)), Var("x"))))
    assert eval_formula_partial(f, {"x": 0}, Partial()) is True
    # but a false known branch leaves the undecided side pending
    assert eval_formula_partial(f, {"x": 1}, Partial()) is None


def test_satisfies_matches_bruteforce_on_random_tables():
    sig = mono3_sentence().signature
    sentence = mono3_sentence()
    hits = 0
    for g0 in range(3):
        for g1 in range(3):
            for g2 in range(3):
                m = FiniteStructure(3, sig, {"g": (g0, g1, g2)}, {}, {})
                a = satisfies(m, sentence)
                assert a == satisfies_bruteforce(m, sentence)
                hits += a
    assert hits > 0


@settings(max_examples=60, deadline=None)
@given(
    size=st.integers(1, 3),
    data=st.data(),
)
def test_satisfies_matches_bruteforce_on_random_example_models(size, data):
    i_table = tuple(data.draw(st.integers(0, size - 1)) for _ in range(size))
    p_set = frozenset(
        (e,) for e in range(size) if data.draw(st.booleans())
    )
    a_val = data.draw(st.integers(0, size - 1))
    m = FiniteStructure(size, EX.signature, {"i": i_table}, {"P": p_set}, {"a": a_val})
    assert satisfies(m, EX) == satisfies_bruteforce(m, EX)


# ---------------------------------------------------------------------------
# Closure


def test_closure_step_adds_images_and_constants():
    m = _example_witness()
    assert closure_step(m, ()) == frozenset({1})  # just the constant
    assert closure_step(m, {1}) == frozenset({0, 1})


def test_closure_depth_of_example_witness_is_two():
    m = _example_witness()
    closed, depth = closure(m, ())
    assert closed == frozenset({0, 1})
    assert depth == 2  # constant first, then its i-image


def test_closure_depth_one_when_already_closed():
    m = mono3_model()
    closed, depth = closure(m, {0, 2, 4})
    assert closed == frozenset({0, 2, 4})
    assert depth == 1


def test_generated_substructure_reindexes_in_order():
    m = mono3_model()
    sub, order = generated_substructure(m, {3})
    assert order == (2, 3)
    assert sub.size == 2
    assert sub.functions["g"] == (0, 0)


def test_generated_substructure_of_model_still_satisfies():
    # hereditarity of a genuine universal sentence, spot-checked
    m = mono3_model()
    for xs in ({1}, {3, 5}, {0, 1, 2}):
        sub, _ = generated_substructure(m, xs)
        assert satisfies(sub, mono3_sentence())


def test_structure_json_round_trip():
    m = _example_witness()
    doc = structure_to_json(m)
    assert structure_from_json(doc, EX.signature) == m


def test_relation_membership_order():
    sig = Signature((), (("R", 2),), ())
    m = FiniteStructure(2, sig, {}, {"R": frozenset({(0, 1)})}, {})
    s = UniversalSentence(sig, ("x", "y"), Not(Rel("R", (Var("y"), Var("x")))))
    # R(0,1) holds, so the sentence fails at (x,y)=(1,0)
    assert not satisfies(m, s)
