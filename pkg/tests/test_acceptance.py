"""Acceptance gate: ten end-to-end checks, one pass/fail line each.

Run with ``python3 -m pytest tests/test_acceptance.py -s`` to see the
per-criterion lines; each also enforces its wall-clock budget where
one applies.
"""

import itertools
import random
import time

from locus.catalog import (
    BUILDERS,
    _segment_layout,
    linear_sentence,
    load_model,
    load_sentence,
    mono3_model,
    mono3_sentence,
    psi3,
)
from locus.locality import certify
from locus.ordinals import parse_ordinal
from locus.schmerl import extract_partitions, psi3_oracle, ramsey_sanity
from locus.spectrum import finite_spectrum, iter_models_naive
from locus.stretching import prefix_embedding, stretch_prefix, verify_stretch
from locus.structures import FiniteStructure, satisfies
from locus.syntax import compute_N, term_metrics, union_sentence


def _criterion(number, budget, check):
    start = time.perf_counter()
    ok = False
    try:
        check()
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        window = "" if budget is None else f" ({elapsed:.1f}s of {budget}s)"
        print(f"criterion {number:02d}: {'PASS' if ok else 'FAIL'}{window}")
    if budget is not None:
        assert elapsed < budget, f"criterion {number} exceeded {budget}s"


def test_criterion_01_example_spectrum_is_two_through_eight():
    def check():
        result = finite_spectrum(load_sentence("example"), 8)
        assert result.complete
        assert result.members == set(range(2, 9))

    _criterion(1, 60, check)


def test_criterion_02_example_closure_depth_is_two():
    def check():
        report = certify(load_sentence("example"), 2, 5)
        assert report.condition_a_ok
        assert report.max_depth == 2
        assert report.complete
        assert report.verdict == "consistent"

    _criterion(2, 120, check)


def test_criterion_03_skeleton_closure_depth_is_one():
    def check():
        report = certify(load_sentence("psi1"), 1, 6)
        assert report.max_depth == 1
        assert report.complete
        assert report.verdict == "consistent"

    _criterion(3, 60, check)


def test_criterion_04_inhomogeneity_oracle_matches_satisfaction():
    def check():
        sentence = psi3(1)
        i_table, lasts = _segment_layout((2,) * 6)
        size = len(i_table)
        outcomes = {True: 0, False: 0}
        for seed in range(50):
            rng = random.Random(seed)
            # pool width 1 forces a constant f (never splits); wider
            # pools almost always split, so both outcomes occur
            pool = rng.sample(range(size), 1 + seed % 4)
            m = FiniteStructure.build(
                size,
                sentence.signature,
                functions={"I": i_table, "f": lambda *args: rng.choice(pool)},
                relations={"P": [(e,) for e in lasts]},
            )
            oracle = psi3_oracle(m, 1, require_partition_model=False)
            assert oracle == satisfies(m, sentence), f"seed {seed} disagrees"
            outcomes[oracle] += 1
        assert outcomes[True] and outcomes[False], "one-sided sample"

    _criterion(4, 120, check)


def test_criterion_05_extracted_partitions_respect_coding_bounds():
    def check():
        for model_id in ("segment_pairs", "segment_triples_split"):
            m = load_model(model_id)
            family = extract_partitions(m, 1)
            p_elems = sorted(e for e in range(m.size) if m.relation_holds("P", (e,)))
            i_table = [m.function_value("I", (e,)) for e in range(m.size)]
            p_set = set(p_elems)
            for idx, nu in enumerate(p_elems):
                segment_length = i_table.count(nu)
                assert family.class_count(idx) < segment_length, (model_id, nu)
            # wherever the coding clause speaks (I-images strictly
            # increasing), the f-value must avoid the markers
            for args in itertools.product(range(m.size), repeat=4):
                images = [i_table[y] for y in args[1:]]
                if images[0] < images[1] < images[2]:
                    assert m.function_value("f", args) not in p_set, (model_id, args)

    _criterion(5, None, check)


def test_criterion_06_generator_bound_matches_documented_derivation():
    def check():
        import json

        from locus import catalog

        sentence = load_sentence("example")
        assert compute_N(sentence, 2) == 6
        doc = json.loads(catalog._data_text("nphi_example.json"))
        v, vprime = term_metrics(sentence, 2)
        assert doc["generator_bound"] == 6
        assert doc["term_variable_bound"] == v
        assert doc["atom_variable_bound"] == vprime
        assert doc["quantifier_count"] == len(sentence.variables)

    _criterion(6, None, check)


def test_criterion_07_union_spectra_are_spectrum_unions():
    def check():
        pairs = [
            ("example", "exactly_three", {2, 3, 4, 5}),
            ("psi1", "pair_swap", {0, 1, 2, 3, 4, 5}),
            ("chain3", "pair_swap", {0, 2, 3, 4, 5}),
        ]
        for left_id, right_id, expected in pairs:
            left, right = load_sentence(left_id), load_sentence(right_id)
            union = finite_spectrum(union_sentence(left, right), 5)
            parts = (
                finite_spectrum(left, 5).members | finite_spectrum(right, 5).members
            )
            assert union.complete
            assert union.members == parts == expected, (left_id, right_id)

    _criterion(7, 120, check)


def test_criterion_08_ramsey_thresholds():
    def check():
        assert ramsey_sanity(6, 2, 3) is True
        assert ramsey_sanity(5, 2, 3) is False

    _criterion(8, 30, check)


def test_criterion_09_stretching_coherence():
    def check():
        # function fixture: three generators folding onto a 6-element model
        m = mono3_model()
        sentence = mono3_sentence()
        gens = (1, 3, 5)
        finite = [parse_ordinal(t) for t in ("0", "1", "2")]
        infinite = [parse_ordinal(t) for t in ("5", "w", "w*2")]
        a = stretch_prefix(m, gens, finite, 1)
        b = stretch_prefix(m, gens, infinite, 1)
        assert a.structure == b.structure
        assert a.labels != b.labels
        small = stretch_prefix(m, gens, [parse_ordinal("5"), parse_ordinal("w")], 1)
        mapping = prefix_embedding(small, b)
        assert len(set(mapping)) == small.structure.size

        report = verify_stretch(sentence, m, gens, len(gens))
        assert report.verdict == "verified-to-budget"
        assert report.exhaustive

        table = list(m.functions["g"])
        table[1] = 2
        broken = FiniteStructure(m.size, m.signature, {"g": tuple(table)}, {}, {})
        mutated = verify_stretch(sentence, broken, gens, len(gens))
        assert mutated.verdict == "refuted"

        # order-only fixture: a bare three-element chain
        order_sentence = linear_sentence().with_declared_steps(1)
        chain = FiniteStructure(3, order_sentence.signature, {}, {}, {})
        all_elems = (0, 1, 2)
        c = stretch_prefix(chain, all_elems, finite, 1)
        d = stretch_prefix(chain, all_elems, infinite, 1)
        assert c.structure == d.structure
        nested = prefix_embedding(
            stretch_prefix(chain, all_elems, finite[:2], 1), c
        )
        assert nested == (0, 1)
        order_report = verify_stretch(order_sentence, chain, all_elems, 3)
        assert order_report.verdict == "verified-to-budget"
        assert order_report.exhaustive

    _criterion(9, None, check)


def test_criterion_10_pruned_search_matches_naive_enumeration():
    def check():
        # the 4-ary coding signatures make blind enumeration at sizes
        # past 1 physically infeasible, so they are cross-checked on
        # the sizes the naive oracle can actually cover
        full = ("example", "psi1", "mono3", "linear", "exactly_three", "chain3", "pair_swap")
        capped = ("psi2_n1", "psi3_n1", "theta_n1")
        for name in full + capped:
            cap = 4 if name in full else 1
            sentence = BUILDERS[name]()
            pruned = finite_spectrum(
                sentence, cap, allow_unbounded_arity=name in capped
            ).members
            naive = {
                size
                for size in range(cap + 1)
                if any(True for _ in iter_models_naive(sentence, size))
            }
            assert pruned == naive, (name, pruned, naive)

    _criterion(10, 300, check)
