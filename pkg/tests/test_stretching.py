"""Indiscernibles: detection, flavor flags, prefixes, verification."""

import pytest

from locus.catalog import (
    example_sentence,
    linear_sentence,
    load_model,
    mono3_model,
    mono3_sentence,
)
from locus.ordinals import from_int, parse_ordinal
from locus.stretching import (
    PatternCapacityError,
    classify,
    enumerate_terms,
    find_indiscernibles,
    prefix_embedding,
    stretch_prefix,
    verify_stretch,
)
from locus.structures import FiniteStructure, satisfies, structure_from_json, structure_to_json
from locus.syntax import Signature

BARE = Signature((), (), ())


def _chain(size: int) -> FiniteStructure:
    return FiniteStructure(size, BARE, {}, {}, {})


def test_pure_order_full_tuple_qualifies():
    witnesses = find_indiscernibles(_chain(3), 3, 1)
    assert [w.indices for w in witnesses] == [(0, 1, 2)]
    flags = witnesses[0].flags
    assert flags.order_indiscernible and flags.monotonic and flags.special and flags.remarkable
    assert flags.semi_monotonic is None


def test_example_minimal_model_single_generator():
    ex = example_sentence()
    m = FiniteStructure(2, ex.signature, {"i": (0, 0)}, {"P": frozenset({(0,)})}, {"a": 1})
    witnesses = find_indiscernibles(m, 1, 2)
    assert (1,) in [w.indices for w in witnesses]
    # at one generator the equal-length comparison is vacuous, so the
    # tuple qualifies purely by generating the universe
    assert all(w.flags.order_indiscernible for w in witnesses)


def test_atomic_type_mismatch_rejected():
    ex = example_sentence()
    # i fixes 0 but moves 1, so (0, 1) cannot be indiscernible
    m = FiniteStructure(3, ex.signature, {"i": (0, 2, 1)}, {"P": frozenset({(0,)})}, {"a": 1})
    assert all(w.indices != (0, 1) for w in find_indiscernibles(m, 2, 2))


def test_non_generating_tuple_rejected():
    m = mono3_model()
    # (1, 3) closes to {0, 1, 2, 3}, not the whole universe
    assert all(w.indices != (1, 3) for w in find_indiscernibles(m, 2, 1))


def test_mono3_flags_golden():
    m = load_model("mono3")
    flags = classify(m, (1, 3, 5), 1)
    assert flags.order_indiscernible is True
    assert flags.monotonic is True
    assert flags.special is True
    assert flags.remarkable is False
    assert flags.semi_monotonic is None


def test_mono3_fixture_flags_match_record():
    from locus.catalog import model_record

    record = model_record("mono3")
    expected = record["expected_flags"]
    flags = classify(load_model("mono3"), tuple(record["indiscernibles"]), 1)
    assert flags.order_indiscernible == expected["order_indiscernible"]
    assert flags.monotonic == expected["monotonic"]
    assert flags.special == expected["special"]
    assert flags.remarkable == expected["remarkable"]


def test_special_fails_when_terms_jump_the_next_generator():
    sig = Signature((("g", 1),), (), ())
    # g maps the first generator above the second
    m = FiniteStructure(4, sig, {"g": (3, 3, 3, 3)}, {}, {})
    witnesses = find_indiscernibles(m, 2, 1)
    for w in witnesses:
        assert w.flags.special is False


def test_term_enumeration_bound():
    sig = Signature((("f", 3),), (), ())
    with pytest.raises(ValueError, match="exceeded"):
        enumerate_terms(sig, 3, 3, limit=50)


# ---------------------------------------------------------------------------
# Prefixes


def test_prefix_pattern_determinism():
    m = load_model("mono3")
    a = stretch_prefix(m, (1, 3, 5), [from_int(0), from_int(1)], 1)
    b = stretch_prefix(m, (1, 3, 5), [from_int(0), parse_ordinal("w")], 1)
    assert a.structure == b.structure
    assert a.rep_terms == b.rep_terms
    assert a.labels != b.labels  # ordinal names differ, nothing else


def test_prefix_of_pure_order_is_chain():
    p = stretch_prefix(_chain(3), (0, 1, 2), [parse_ordinal(t) for t in ("0", "w", "w*2")], 1)
    assert p.structure.size == 3
    assert p.labels == ("x[0]", "x[w]", "x[w*2]")
    assert p.generator_elements == (0, 1, 2)


def test_prefix_universe_is_generated_closure():
    m = load_model("mono3")
    p = stretch_prefix(m, (1, 3, 5), [from_int(0)], 1)
    # one generator pulls in its g-image and nothing else
    assert p.structure.size == 2
    assert p.labels == ("g(x[0])", "x[0]")
    assert p.closure_depth == 1
    assert satisfies(p.structure, mono3_sentence())


def test_empty_index_set_gives_constant_hull():
    m = load_model("mono3")
    p = stretch_prefix(m, (1, 3, 5), [], 1)
    assert p.structure.size == 0  # no constants in this signature
    ex = example_sentence()
    m2 = FiniteStructure(2, ex.signature, {"i": (0, 0)}, {"P": frozenset({(0,)})}, {"a": 1})
    p2 = stretch_prefix(m2, (1,), [], 2)
    assert p2.structure.size == 2  # the constant and its i-image
    assert set(p2.labels) == {"a", "i(a)"}


def test_nested_prefixes_embed():
    m = load_model("mono3")
    small = stretch_prefix(m, (1, 3, 5), [parse_ordinal("w")], 1)
    large = stretch_prefix(
        m, (1, 3, 5), [from_int(0), parse_ordinal("w"), parse_ordinal("w^2")], 1
    )
    mapping = prefix_embedding(small, large)
    assert len(mapping) == small.structure.size
    assert len(set(mapping)) == len(mapping)
    # the shared index w lands on the middle generator
    w_pos = small.labels.index("x[w]")
    assert mapping[w_pos] == large.generator_elements[1]


def test_embedding_requires_index_containment():
    m = load_model("mono3")
    a = stretch_prefix(m, (1, 3, 5), [parse_ordinal("w")], 1)
    b = stretch_prefix(m, (1, 3, 5), [from_int(0), from_int(1)], 1)
    with pytest.raises(ValueError, match="not in the larger index set"):
        prefix_embedding(a, b)


def test_capacity_error():
    m = load_model("mono3")
    with pytest.raises(PatternCapacityError):
        stretch_prefix(m, (1, 3, 5), [from_int(i) for i in range(4)], 1)


def test_prefix_json_shape():
    m = load_model("mono3")
    p = stretch_prefix(m, (1, 3, 5), [from_int(0), parse_ordinal("w")], 1)
    doc = p.to_json_dict()
    assert doc["indices"] == ["0", "w"]
    assert doc["size"] == p.structure.size
    assert doc["labels"] == list(p.labels)


# ---------------------------------------------------------------------------
# Verification


def test_verify_mono3_at_full_budget():
    report = verify_stretch(mono3_sentence(), load_model("mono3"), (1, 3, 5), 3)
    assert report.verdict == "verified-to-budget"
    assert report.generator_count == 3
    assert report.sufficiency_bound == 2
    assert report.exhaustive
    assert report.sizes_checked == (0, 1, 2, 3)
    assert "operational" in report.caveat


def test_verify_reports_refutation_after_mutation():
    m = load_model("mono3")
    doc = structure_to_json(m)
    g = list(doc["functions"]["g"])
    g[1] = 3  # break idempotence below the first generator
    doc["functions"]["g"] = g
    bad = structure_from_json(doc, m.signature)
    report = verify_stretch(mono3_sentence(), bad, (1, 3, 5), 3)
    assert report.verdict == "refuted"
    assert report.failing_size is not None
    assert report.failing_labels is not None


def test_verify_budget_over_generators_raises():
    with pytest.raises(PatternCapacityError):
        verify_stretch(mono3_sentence(), load_model("mono3"), (1, 3, 5), 4)


def test_verify_pure_order():
    s = linear_sentence()
    m = FiniteStructure(4, s.signature, {}, {}, {})
    report = verify_stretch(s, m, (0, 1, 2, 3), 4)
    assert report.verdict == "verified-to-budget"
    assert report.sufficiency_bound == 2
    assert report.exhaustive


def test_verify_example_prefixes_satisfy():
    ex = example_sentence()
    m = FiniteStructure(2, ex.signature, {"i": (0, 0)}, {"P": frozenset({(0,)})}, {"a": 1})
    report = verify_stretch(ex, m, (1,), 1)
    assert report.verdict == "verified-to-budget"
    assert report.sizes_checked == (0, 1)


def test_monotonic_flag_means_pointwise_order_coherence():
    # the documented consequence of the monotonic flag, checked on the
    # shipped fixture: pointwise-larger index substitutions never
    # decrease any term value
    import itertools

    from locus.stretching import enumerate_terms, eval_term_on

    m = load_model("mono3")
    indices = (1, 3, 5)
    for length in (1, 2, 3):
        terms = enumerate_terms(m.signature, length, 2)
        subs = list(itertools.combinations(indices, length))
        for a in subs:
            for b in subs:
                if all(x <= y for x, y in zip(a, b)):
                    for t in terms:
                        assert eval_term_on(m, t, a) <= eval_term_on(m, t, b)
