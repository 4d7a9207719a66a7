"""Closure-depth certification: hereditarity, depth surveys, regimes."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locus.catalog import example_sentence, linear_sentence, mono3_sentence, psi1
from locus.locality import (
    EXHAUSTIVE_SUBSET_LIMIT,
    certify,
    check_condition_a,
    max_closure_depth,
    survey_models,
)
from locus.spectrum import iter_models
from locus.structures import FiniteStructure, closure
from locus.syntax import Rel, Signature, UniversalSentence, Var


def test_example_consistent_at_declared_two():
    report = certify(example_sentence(), 2, 4, sentence_id="example")
    assert report.verdict == "consistent"
    assert report.condition_a_ok
    assert report.max_depth == 2
    assert report.complete


def test_example_refuted_at_declared_one():
    report = certify(example_sentence(), 1, 3)
    assert report.verdict == "refuted"
    assert report.max_depth == 2
    w = report.depth_witness
    assert w is not None
    # the witness re-validates independently: closing its subset in its
    # model really takes two rounds
    _, depth = closure(w.model, w.subset)
    assert depth == 2


def test_refutation_monotone_in_size_bound():
    assert certify(example_sentence(), 1, 3).verdict == "refuted"
    assert certify(example_sentence(), 1, 4).verdict == "refuted"


def test_psi1_depth_one():
    report = certify(psi1(), 1, 4)
    assert report.verdict == "consistent"
    assert report.max_depth == 1


def test_max_closure_depth_entry_point():
    depth, witness = max_closure_depth(example_sentence(), 3)
    assert depth == 2
    assert witness is not None
    _, redepth = closure(witness.model, witness.subset)
    assert redepth == 2


def test_condition_a_canary_passes_for_universal_sentences():
    # universal sentences are preserved under substructures, so the
    # hereditarity check can only fail through an implementation bug
    assert check_condition_a(example_sentence(), 3) is None
    assert check_condition_a(mono3_sentence(), 3) is None


def test_survey_reports_hereditarity_failures_when_they_exist():
    # pair a structure with a sentence it does not satisfy everywhere:
    # the subset {1} generates a substructure violating "Q holds of
    # everything", and the survey must surface it
    sig = Signature((), (("Q", 1),), ())
    all_q = UniversalSentence(sig, ("x",), Rel("Q", (Var("x"),)))
    m = FiniteStructure(2, sig, {}, {"Q": frozenset({(0,)})}, {})
    _, _, _, counterexample, count, _ = survey_models([(m, all_q)])
    assert count == 1
    assert counterexample is not None
    assert counterexample.subset in ((1,), (0, 1))


def test_depth_by_size_recorded():
    report = certify(example_sentence(), 2, 4)
    assert set(report.depth_by_size) <= {0, 1, 2, 3, 4}
    assert max(report.depth_by_size.values()) == report.max_depth


def test_budget_exhaustion_marks_incomplete():
    report = certify(example_sentence(), 2, 5, node_budget=3)
    assert not report.complete
    assert report.verdict == "consistent"  # nothing surveyed, nothing refuted
    assert report.models_checked == 0


def test_determinism_for_fixed_seed():
    a = certify(example_sentence(), 2, 4, seed=11, samples=8)
    b = certify(example_sentence(), 2, 4, seed=11, samples=8)
    assert a.to_json_dict() == b.to_json_dict()


def test_survey_models_on_supplied_models():
    sentence = mono3_sentence()
    models = [(m, sentence) for m in iter_models(sentence, 3)]
    max_depth, witness, by_size, counterexample, count, sampled = survey_models(models)
    assert max_depth <= 1
    assert counterexample is None
    assert count == len(models)
    assert sampled == set()


def test_declared_steps_must_be_positive():
    with pytest.raises(ValueError):
        certify(example_sentence(), 0, 3)


@settings(max_examples=40, deadline=None)
@given(size=st.integers(0, 5), data=st.data())
def test_function_free_closure_depth_at_most_one(size, data):
    # with no functions, one round (constants only) always closes
    sig = Signature((), (("Q", 1),), ())
    q = frozenset((e,) for e in range(size) if data.draw(st.booleans()))
    m = FiniteStructure(size, sig, {}, {"Q": q}, {})
    for r in range(size + 1):
        import itertools

        for subset in itertools.combinations(range(size), min(r, size)):
            _, depth = closure(m, subset)
            assert depth <= 1


def test_exhaustive_regime_below_subset_limit():
    report = certify(linear_sentence(), 1, EXHAUSTIVE_SUBSET_LIMIT)
    assert report.sampled_sizes == ()
    assert report.verdict == "consistent"


def test_json_report_shape():
    doc = certify(example_sentence(), 2, 3, sentence_id="ex").to_json_dict()
    assert doc["sentence"] == "ex"
    assert doc["condition_a"]["verdict"] == "pass"
    assert doc["verdict"] == "consistent"
    assert doc["subset_regime"]["exhaustive_up_to"] == EXHAUSTIVE_SUBSET_LIMIT
