"""Partition property: quotient evaluator vs a full-enumeration oracle,
witness machinery, model-side partition semantics."""

import itertools

import pytest

from locus.catalog import build_segment_model, load_model, psi1, psi2, psi3, theta
from locus.schmerl import (
    InfeasibleParameters,
    PartitionFamily,
    WitnessSet,
    check_witness,
    extract_partitions,
    holds_P,
    is_homogeneous,
    psi3_oracle,
    ramsey_sanity,
    set_partitions,
)
from locus.structures import FiniteStructure, satisfies
from locus.syntax import conjoin


# ---------------------------------------------------------------------------
# Independent oracle: enumerate every legal full family directly, no
# tail-restriction quotient, and search witnesses by set cardinality.


def _admits(lookups, k: int, n: int, alpha: int) -> bool:
    for xs in itertools.combinations(range(k), alpha):
        if all(
            len({lookups[nu][s] for s in itertools.combinations(xs[i + 1 :], n)}) <= 1
            for i, nu in enumerate(xs)
        ):
            return True
    return False


def _oracle_holds(k: int, n: int, alphas) -> dict:
    subsets = list(itertools.combinations(range(k), n))
    per_nu = []
    for p in set_partitions(subsets):
        if len(p) < k:
            per_nu.append({s: i for i, cls in enumerate(p) for s in cls})
    if subsets and not per_nu:
        return {a: True for a in alphas}  # no legal family at all
    options = [per_nu or [{}]] * k
    results = {a: True for a in alphas}
    pending = set(alphas)
    for lookups in itertools.product(*options):
        for a in list(pending):
            if not _admits(lookups, k, n, a):
                results[a] = False
                pending.discard(a)
        if not pending:
            break
    return results


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_quotient_matches_oracle_small(k, n):
    expected = _oracle_holds(k, n, range(k + 2))
    for alpha, want in expected.items():
        result = holds_P(k, n, alpha)
        assert result.holds == want, (k, n, alpha, result)
        assert result.conclusive


def test_quotient_matches_oracle_k4_n1():
    expected = _oracle_holds(4, 1, [2, 3, 4])
    for alpha, want in expected.items():
        result = holds_P(4, 1, alpha)
        assert result.holds == want, (alpha, result)


# ---------------------------------------------------------------------------
# Goldens


def test_golden_boundaries():
    assert holds_P(4, 2, 4).holds is False
    assert holds_P(4, 2, 3).holds is True
    assert holds_P(4, 1, 3).holds is False
    assert holds_P(4, 1, 2).holds is True


def test_exhaustive_family_counts():
    # the tail-restriction quotient leaves very few families
    assert holds_P(4, 2, 3).families_checked == 5
    assert holds_P(4, 1, 2).families_checked == 10


def test_counterexamples_are_legal_and_witnessless():
    for k, n, alpha in ((4, 2, 4), (4, 1, 3)):
        family = holds_P(k, n, alpha).counterexample
        assert family is not None
        assert family.base_size == k and family.tuple_size == n
        for nu in range(k):
            assert family.class_count(nu) < k
        assert not any(
            check_witness(xs, family)
            for xs in itertools.combinations(range(k), alpha)
        )


def test_vacuous_side_condition():
    # k=1, n=1: one subset but partitions need fewer than one class, so
    # the family set is empty and the property holds vacuously
    result = holds_P(1, 1, 2, mode="sampled")
    assert result.holds is True and result.conclusive


def test_parameter_guards():
    with pytest.raises(ValueError):
        holds_P(4, 0, 2)
    with pytest.raises(ValueError):
        holds_P(-1, 1, 2)
    with pytest.raises(ValueError):
        holds_P(4, 1, 2, mode="psychic")
    with pytest.raises(InfeasibleParameters):
        holds_P(11, 1, 3)
    with pytest.raises(InfeasibleParameters):
        holds_P(4, 4, 3)
    with pytest.raises(InfeasibleParameters):
        holds_P(6, 1, 3, mode="exhaustive")


def test_sampled_shortcuts():
    big_alpha = holds_P(8, 1, 9)
    assert (big_alpha.holds, big_alpha.conclusive, big_alpha.mode) == (False, True, "shortcut")
    assert big_alpha.counterexample is not None
    short_tails = holds_P(8, 2, 3)
    assert (short_tails.holds, short_tails.conclusive, short_tails.mode) == (True, True, "shortcut")


def test_sampled_counterexample_revalidates():
    result = holds_P(6, 1, 4, samples=50)
    if result.counterexample is not None:
        family = result.counterexample
        assert not any(
            check_witness(xs, family) for xs in itertools.combinations(range(6), 4)
        )
    else:
        assert not result.conclusive
        assert result.note == "no counterexample found"


def test_sampled_deterministic_per_seed():
    a = holds_P(6, 1, 4, seed=3, samples=25)
    b = holds_P(6, 1, 4, seed=3, samples=25)
    assert a.to_json_dict() == b.to_json_dict()


# ---------------------------------------------------------------------------
# Witness machinery


def test_witness_set_validation():
    assert len(WitnessSet((0, 2, 5))) == 3
    with pytest.raises(ValueError):
        WitnessSet((2, 2))
    with pytest.raises(ValueError):
        WitnessSet((3, 1))


def test_is_homogeneous_vacuous_below_tuple_size():
    classes = (frozenset({(0, 1, 2)}), frozenset({(0, 1, 3)}))
    assert is_homogeneous([0, 1], classes, 3)
    assert is_homogeneous([0, 1, 2], classes, 3)


def test_is_homogeneous_missing_subset_error():
    classes = (frozenset({(0, 1)}),)
    with pytest.raises(ValueError):
        is_homogeneous([0, 1, 2], classes, 2)


def test_seven_point_splitting_family():
    # base 7, triples: one partition splits two triples of the tail
    # above 0, so the six-element selection through 0 fails while one
    # avoiding the split survives
    all_triples = list(itertools.combinations(range(7), 3))
    labels = [{s: 0 for s in all_triples} for _ in range(7)]
    labels[0][(3, 4, 5)] = 1
    family = PartitionFamily.from_labels(7, 3, labels)
    assert not check_witness((0, 1, 2, 3, 4, 5), family)
    assert check_witness((0, 1, 2, 4, 5, 6), family)
    # only C_0 splits, so selections avoiding 0 never see it
    assert check_witness(WitnessSet((1, 2, 3, 4, 5, 6)), family)


def test_partition_family_validation():
    with pytest.raises(ValueError):
        PartitionFamily(2, 1, ())  # wrong partition count
    with pytest.raises(ValueError):
        PartitionFamily(2, 1, ((frozenset({(0,)}),), (frozenset({(0,)}),)))  # misses (1,)
    with pytest.raises(ValueError):
        PartitionFamily(
            2,
            1,
            (
                (frozenset({(0,), (1,)}), frozenset({(1,)})),
                (frozenset({(0,), (1,)}),),
            ),
        )  # duplicate


def test_partition_family_json_round_trip():
    family = holds_P(4, 1, 3).counterexample
    assert PartitionFamily.from_json_dict(family.to_json_dict()) == family


def test_set_partitions_bell_numbers():
    for items, bell in (([], 1), ([1], 1), ([1, 2], 2), ([1, 2, 3], 5), ("abcd", 15)):
        parts = list(set_partitions(items))
        assert len(parts) == bell
        for p in parts:
            flat = [x for cls in p for x in cls]
            assert sorted(flat) == sorted(items)
            assert len(flat) == len(set(flat))


# ---------------------------------------------------------------------------
# Ramsey oracle


def test_ramsey_goldens():
    assert ramsey_sanity(6, 2, 3) is True
    assert ramsey_sanity(5, 2, 3) is False


def test_ramsey_edges():
    assert ramsey_sanity(3, 2, 1) is True  # singletons are trivially homogeneous
    assert ramsey_sanity(2, 2, 3) is False  # not enough points
    assert ramsey_sanity(3, 1, 3) is True  # one color only


def test_ramsey_witness_coloring_cross_checks_is_homogeneous():
    # the pentagon 2-coloring on 5 points has no monochromatic triangle;
    # rechecking through is_homogeneous ties the two machineries together
    pairs = list(itertools.combinations(range(5), 2))
    color = {p: (1 if (p[1] - p[0]) in (1, 4) else 0) for p in pairs}
    classes = (
        frozenset(p for p in pairs if color[p] == 0),
        frozenset(p for p in pairs if color[p] == 1),
    )
    assert not any(
        is_homogeneous(tri, classes, 2) for tri in itertools.combinations(range(5), 3)
    )


# ---------------------------------------------------------------------------
# Model-side semantics


def test_extract_partitions_segment_pairs():
    m = load_model("segment_pairs")
    family = extract_partitions(m, 1)
    assert family.base_size == 6 and family.tuple_size == 3
    assert [family.class_count(nu) for nu in range(6)] == [1, 1, 1, 1, 1, 1]


def test_extract_partitions_split_model():
    m = load_model("segment_triples_split")
    family = extract_partitions(m, 1)
    counts = [family.class_count(nu) for nu in range(6)]
    assert counts[0] == 2
    assert all(c < 3 for c in counts)  # below each segment length


def test_extract_partitions_precondition():
    skeleton = load_model("singleton_segments")  # psi1-only signature
    with pytest.raises(Exception):
        extract_partitions(skeleton, 1)


def test_psi3_oracle_matches_evaluator_on_crafted_models():
    pairs = load_model("segment_pairs")
    split = load_model("segment_triples_split")
    assert psi3_oracle(pairs, 1) is False
    assert satisfies(pairs, psi3(1)) is False
    assert psi3_oracle(split, 1) is True
    assert satisfies(split, psi3(1)) is True


def test_psi3_oracle_precondition_flag():
    pairs = load_model("segment_pairs")
    with pytest.raises(ValueError):
        psi3_oracle(pairs, 2)  # wrong n fails the segment/coding check
    # relaxing the requirement skips the validation entirely
    assert psi3_oracle(pairs, 1, require_partition_model=False) is False


def test_psi3_oracle_vacuous_below_threshold():
    small = build_segment_model((2, 2, 2), 1)
    assert len([e for e in range(small.size) if small.relation_holds("P", (e,))]) == 3
    assert psi3_oracle(small, 1) is True
    assert satisfies(small, psi3(1)) is True


def test_psi3_oracle_relaxed_nu_is_stricter_or_equal():
    # quantifying nu over the whole tuple only adds chances to split,
    # so the relaxed reading can only flip False to True
    split = load_model("segment_triples_split")
    strict = psi3_oracle(split, 1)
    relaxed = psi3_oracle(split, 1, relax_nu_to_all=True)
    assert (not strict) or relaxed


def test_theta_model_passes_all_three_layers():
    split = load_model("segment_triples_split")
    assert satisfies(split, conjoin(psi1(), psi2(1)))
    assert satisfies(split, theta(1))
