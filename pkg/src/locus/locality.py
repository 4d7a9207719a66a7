"""Closure-depth surveys and hereditarity checks over all small models.

A sentence with a declared closure bound n makes two finite-scale
claims: every generated substructure of a model still satisfies it
(condition a), and substructure generation never needs more than n
closure rounds (condition b).  Neither is decidable by finite search,
so ``certify`` is asymmetric: it can refute, or report consistency up
to the examined size.

Condition (a) cannot actually fail for sentences in this fragment --
universal sentences are preserved under substructures -- so its check
is a soundness canary rather than a discriminator.  All finite-scale
discrimination comes from the depth survey.

Subsets are enumerated exhaustively for universes of size <= 6 and
sampled with a seeded generator above that; reports say which regime
ran for which sizes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .spectrum import SearchBudgetExceeded, iter_models
from .structures import (
    FiniteStructure,
    closure,
    generated_substructure,
    satisfies,
    structure_to_json,
)
from .syntax import UniversalSentence

EXHAUSTIVE_SUBSET_LIMIT = 6


@dataclass
class SubsetWitness:
    model: FiniteStructure
    subset: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "model": structure_to_json(self.model),
            "size": self.model.size,
            "subset": list(self.subset),
        }


@dataclass
class LocalityReport:
    sentence_id: str
    max_size: int
    declared_steps: int
    condition_a_ok: bool
    condition_a_counterexample: SubsetWitness | None
    max_depth: int
    depth_witness: SubsetWitness | None
    depth_by_size: dict[int, int]
    models_checked: int
    sampled_sizes: tuple[int, ...]
    subset_samples: int
    seed: int
    complete: bool

    @property
    def verdict(self) -> str:
        if not self.condition_a_ok or self.max_depth > self.declared_steps:
            return "refuted"
        return "consistent"

    def to_json_dict(self) -> dict:
        return {
            "sentence": self.sentence_id,
            "max_size": self.max_size,
            "declared_steps": self.declared_steps,
            "condition_a": (
                {"verdict": "pass"}
                if self.condition_a_ok
                else {
                    "verdict": "counterexample",
                    **self.condition_a_counterexample.to_json_dict(),
                }
            ),
            "max_depth": self.max_depth,
            "depth_witness": (
                self.depth_witness.to_json_dict() if self.depth_witness else None
            ),
            "depth_by_size": {str(k): v for k, v in sorted(self.depth_by_size.items())},
            "models_checked": self.models_checked,
            "subset_regime": {
                "exhaustive_up_to": EXHAUSTIVE_SUBSET_LIMIT,
                "sampled_sizes": list(self.sampled_sizes),
                "samples_per_model": self.subset_samples,
                "seed": self.seed,
            },
            "complete": self.complete,
            "verdict": self.verdict,
        }


def _subsets(size: int, rng: random.Random, samples: int):
    if size <= EXHAUSTIVE_SUBSET_LIMIT:
        for r in range(size + 1):
            yield from itertools.combinations(range(size), r)
        return
    yield ()
    yield tuple(range(size))
    for _ in range(samples):
        mask = rng.getrandbits(size)
        yield tuple(i for i in range(size) if mask >> i & 1)


def survey_models(
    models,
    *,
    check_hereditarity: bool = True,
    seed: int = 0,
    samples: int = 64,
):
    """Walk (model, subset) pairs collecting the depth maximum and the
    first hereditarity counterexample.  Returns the raw aggregates; the
    public entry points shape them into reports."""
    rng = random.Random(seed)
    max_depth = 0
    depth_witness: SubsetWitness | None = None
    depth_by_size: dict[int, int] = {}
    counterexample: SubsetWitness | None = None
    sampled_sizes: set[int] = set()
    count = 0
    for model, sentence in models:
        count += 1
        if model.size > EXHAUSTIVE_SUBSET_LIMIT:
            sampled_sizes.add(model.size)
        for subset in _subsets(model.size, rng, samples):
            _, depth = closure(model, subset)
            if depth > max_depth:
                max_depth = depth
                depth_witness = SubsetWitness(model, subset)
            depth_by_size[model.size] = max(depth_by_size.get(model.size, 0), depth)
            if check_hereditarity and counterexample is None:
                sub, _ = generated_substructure(model, subset)
                if not satisfies(sub, sentence):
                    counterexample = SubsetWitness(model, subset)
    return max_depth, depth_witness, depth_by_size, counterexample, count, sampled_sizes


def _models_up_to(sentence: UniversalSentence, max_size: int, node_budget: int | None):
    for size in range(max_size + 1):
        for model in iter_models(sentence, size, node_budget):
            yield model, sentence


def certify(
    sentence: UniversalSentence,
    declared_steps: int,
    max_size: int,
    *,
    node_budget: int | None = None,
    seed: int = 0,
    samples: int = 64,
    sentence_id: str = "sentence",
) -> LocalityReport:
    """Survey every model up to ``max_size``; refute if hereditarity
    fails or any observed closure depth exceeds ``declared_steps``.

    Cost is dominated by exhaustive model enumeration, which is only
    feasible for small sizes and tame signatures; a node budget turns
    an over-large search into a report flagged incomplete rather than
    a hang.
    """
    if declared_steps < 1:
        raise ValueError("declared closure steps must be >= 1")
    complete = True
    try:
        aggregates = survey_models(
            _models_up_to(sentence, max_size, node_budget),
            seed=seed,
            samples=samples,
        )
    except SearchBudgetExceeded:
        # rerun on nothing to produce an empty aggregate; the partial
        # enumeration cannot be resumed once the budget tripped
        complete = False
        aggregates = survey_models(iter(()), seed=seed, samples=samples)
    max_depth, depth_witness, depth_by_size, counterexample, count, sampled = aggregates
    return LocalityReport(
        sentence_id=sentence_id,
        max_size=max_size,
        declared_steps=declared_steps,
        condition_a_ok=counterexample is None,
        condition_a_counterexample=counterexample,
        max_depth=max_depth,
        depth_witness=depth_witness,
        depth_by_size=depth_by_size,
        models_checked=count,
        sampled_sizes=tuple(sorted(sampled)),
        subset_samples=samples,
        seed=seed,
        complete=complete,
    )


def check_condition_a(
    sentence: UniversalSentence,
    max_size: int,
    *,
    node_budget: int | None = None,
    seed: int = 0,
    samples: int = 64,
) -> SubsetWitness | None:
    """None when every generated substructure of every model up to
    ``max_size`` satisfies the sentence; otherwise the first failure."""
    _, _, _, counterexample, _, _ = survey_models(
        _models_up_to(sentence, max_size, node_budget), seed=seed, samples=samples
    )
    return counterexample


def max_closure_depth(
    sentence: UniversalSentence,
    max_size: int,
    *,
    node_budget: int | None = None,
    seed: int = 0,
    samples: int = 64,
) -> tuple[int, SubsetWitness | None]:
    """Largest closure depth over all models up to ``max_size`` and the
    surveyed subsets, with a witness attaining it."""
    max_depth, witness, _, _, _, _ = survey_models(
        _models_up_to(sentence, max_size, node_budget),
        check_hereditarity=False,
        seed=seed,
        samples=samples,
    )
    return max_depth, witness
