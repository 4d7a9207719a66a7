"""Finite partition-property machinery.

The property P(n, alpha) evaluated here at a finite base size k reads:
every family of partitions C_0 ... C_{k-1} of the n-subsets of
{0..k-1}, each with fewer than k classes, admits a strictly increasing
witness X of length alpha whose tail above each member nu of X is
C_nu-homogeneous.

Homogeneity of the tail above nu only ever inspects n-subsets drawn
from {nu+1 .. k-1}.  Exhaustive evaluation therefore enumerates each
C_nu restricted to those tail subsets and pads the rest into the first
class afterwards: the padded family is legal (the class count does not
grow) and every legal family restricts to one of the enumerated
restrictions, so the quotient decides exactly the same property while
shrinking the search space by many orders of magnitude.

Also here: the partition semantics of the coding function f.  A model
of the segment and coding sentences defines, for each P-element nu, a
partition of the (n+2)-subsets of P by the value of f(nu, -); the
inhomogeneity sentence states that no n+5 increasing P-elements leave
all three smallest nu unsplit.  ``psi3_oracle`` recomputes that
combinatorially, independent of the formula evaluator.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb

from .catalog import psi1, psi2
from .structures import FiniteStructure, satisfies
from .syntax import conjoin

EXHAUSTIVE_K = 4
EXHAUSTIVE_N = 2
SAMPLED_K = 10
SAMPLED_N = 3


class InfeasibleParameters(ValueError):
    """Parameters outside both the exhaustive and the sampled range."""


def set_partitions(items):
    """All partitions of ``items``, each as a tuple of class tuples in
    first-appearance order (restricted-growth enumeration)."""
    items = list(items)
    if not items:
        yield ()
        return

    def rec(index: int, labels: list[int], used: int):
        if index == len(items):
            classes: list[list] = [[] for _ in range(used)]
            for item, label in zip(items, labels):
                classes[label].append(item)
            yield tuple(tuple(c) for c in classes)
            return
        for label in range(used):
            labels.append(label)
            yield from rec(index + 1, labels, used)
            labels.pop()
        labels.append(used)
        yield from rec(index + 1, labels, used + 1)
        labels.pop()

    yield from rec(1, [0], 1)


def _subsets(base: range | list, size: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(base, size))


@dataclass(frozen=True)
class PartitionFamily:
    """Per-index partitions of the ``tuple_size``-subsets of the base.

    ``partitions[nu]`` is a tuple of classes, each class a frozenset of
    increasing tuples; classes are kept sorted by their smallest
    member, so equal families compare equal.  A base too small to have
    any subsets carries empty partition tuples.
    """

    base_size: int
    tuple_size: int
    partitions: tuple[tuple[frozenset[tuple[int, ...]], ...], ...]

    def __post_init__(self) -> None:
        if self.base_size < 0 or self.tuple_size < 1:
            raise ValueError("base size must be >= 0 and tuple size >= 1")
        if len(self.partitions) != self.base_size:
            raise ValueError("one partition required per base element")
        universe = set(_subsets(range(self.base_size), self.tuple_size))
        for nu, classes in enumerate(self.partitions):
            seen: set[tuple[int, ...]] = set()
            for cls in classes:
                if not cls:
                    raise ValueError(f"empty class in partition {nu}")
                for subset in cls:
                    if subset not in universe:
                        raise ValueError(f"{subset} is not an increasing subset of the base")
                    if subset in seen:
                        raise ValueError(f"{subset} appears in two classes of partition {nu}")
                    seen.add(subset)
            if seen != universe:
                raise ValueError(f"partition {nu} does not cover all subsets")

    def class_count(self, nu: int) -> int:
        return len(self.partitions[nu])

    def class_lookup(self, nu: int) -> dict[tuple[int, ...], int]:
        out: dict[tuple[int, ...], int] = {}
        for idx, cls in enumerate(self.partitions[nu]):
            for subset in cls:
                out[subset] = idx
        return out

    @classmethod
    def from_labels(cls, base_size: int, tuple_size: int, labels) -> "PartitionFamily":
        """Build from one mapping (subset -> label) per base element;
        labels are arbitrary hashables, classes come out canonically
        ordered."""
        partitions = []
        for nu in range(base_size):
            by_label: dict = {}
            for subset, label in labels[nu].items():
                by_label.setdefault(label, set()).add(tuple(subset))
            partitions.append(_canonical_classes(by_label.values()))
        return cls(base_size, tuple_size, tuple(partitions))

    def to_json_dict(self) -> dict:
        return {
            "base_size": self.base_size,
            "tuple_size": self.tuple_size,
            "partitions": [
                [sorted(list(t) for t in cls) for cls in classes]
                for classes in self.partitions
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PartitionFamily":
        partitions = tuple(
            _canonical_classes(
                [frozenset(tuple(t) for t in cls) for cls in classes]
            )
            for classes in doc["partitions"]
        )
        return cls(doc["base_size"], doc["tuple_size"], partitions)


def _canonical_classes(groups) -> tuple[frozenset[tuple[int, ...]], ...]:
    frozen = [frozenset(g) for g in groups if g]
    return tuple(sorted(frozen, key=min))


@dataclass(frozen=True)
class WitnessSet:
    """Strictly increasing selection from the base."""

    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a >= b for a, b in zip(self.elements, self.elements[1:])):
            raise ValueError("witness elements must strictly increase")

    def __len__(self) -> int:
        return len(self.elements)


def is_homogeneous(y_elements, classes, tuple_size: int) -> bool:
    """True when all ``tuple_size``-subsets of Y sit in one class;
    vacuously true when Y has at most ``tuple_size`` elements."""
    ys = sorted(y_elements)
    subsets = _subsets(ys, tuple_size)
    if len(subsets) <= 1:
        return True
    lookup: dict[tuple[int, ...], int] = {}
    for idx, cls in enumerate(classes):
        for subset in cls:
            lookup[subset] = idx
    try:
        first = lookup[subsets[0]]
        return all(lookup[s] == first for s in subsets[1:])
    except KeyError as missing:
        raise ValueError(f"classes do not cover subset {missing.args[0]}") from None


def check_witness(x, family: PartitionFamily) -> bool:
    """True when, for every nu in X, the tail of X above nu is
    C_nu-homogeneous.  Accepts a WitnessSet or an increasing sequence."""
    elements = x.elements if isinstance(x, WitnessSet) else WitnessSet(tuple(x)).elements
    for pos, nu in enumerate(elements):
        tail = elements[pos + 1 :]
        if not is_homogeneous(tail, family.partitions[nu], family.tuple_size):
            return False
    return True


@dataclass(frozen=True)
class PartitionPropertyResult:
    k: int
    n: int
    alpha: int
    holds: bool
    conclusive: bool
    mode: str
    families_checked: int
    counterexample: PartitionFamily | None
    seed: int | None
    note: str

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "alpha": self.alpha,
            "holds": self.holds,
            "conclusive": self.conclusive,
            "mode": self.mode,
            "families_checked": self.families_checked,
            "counterexample": (
                None if self.counterexample is None else self.counterexample.to_json_dict()
            ),
            "seed": self.seed,
            "note": self.note,
        }


def _family_admits_witness(lookups, k: int, n: int, alpha: int) -> bool:
    """lookups[nu]: dict subset -> class id, covering at least every
    n-subset of {nu+1..k-1}."""
    for xs in itertools.combinations(range(k), alpha):
        ok = True
        for pos, nu in enumerate(xs):
            tail = xs[pos + 1 :]
            if len(tail) <= n:
                continue
            lookup = lookups[nu]
            subsets = _subsets(tail, n)
            first = lookup[subsets[0]]
            if any(lookup[s] != first for s in subsets[1:]):
                ok = False
                break
        if ok:
            return True
    return False


def _pad_restricted(k: int, n: int, restricted) -> PartitionFamily:
    """Extend tail-only partitions to full ones without raising any
    class count: every non-tail subset joins the first class (or forms
    the only class when the tail had none)."""
    all_subsets = set(_subsets(range(k), n))
    partitions = []
    for nu in range(k):
        classes = [set(cls) for cls in restricted[nu]]
        rest = all_subsets - {s for cls in classes for s in cls}
        if rest:
            if classes:
                classes[0] |= rest
            else:
                classes = [rest]
        partitions.append(_canonical_classes(classes))
    return PartitionFamily(k, n, tuple(partitions))


def holds_P(
    k: int,
    n: int,
    alpha: int,
    *,
    mode: str = "auto",
    seed: int = 0,
    samples: int = 500,
) -> PartitionPropertyResult:
    """Evaluate the finite partition property.

    Exhaustive (conclusive) for k <= 4 and n <= 2 via the tail
    restriction quotient; randomized falsification with a fixed seed
    up to k <= 10 and n <= 3, conclusive only when a counterexample
    turns up.  Anything larger raises InfeasibleParameters.
    """
    if k < 0 or n < 1 or alpha < 0:
        raise ValueError("need k >= 0, n >= 1, alpha >= 0")
    if mode not in ("auto", "exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "auto":
        mode = "exhaustive" if k <= EXHAUSTIVE_K and n <= EXHAUSTIVE_N else "sampled"

    if mode == "exhaustive":
        if k > EXHAUSTIVE_K or n > EXHAUSTIVE_N:
            raise InfeasibleParameters(
                f"exhaustive evaluation is capped at k <= {EXHAUSTIVE_K}, n <= {EXHAUSTIVE_N}"
            )
        return _holds_exhaustive(k, n, alpha)

    if k > SAMPLED_K or n > SAMPLED_N:
        raise InfeasibleParameters(
            f"sampled evaluation is capped at k <= {SAMPLED_K}, n <= {SAMPLED_N}"
        )
    return _holds_sampled(k, n, alpha, seed, samples)


def _holds_exhaustive(k: int, n: int, alpha: int) -> PartitionPropertyResult:
    if comb(k, n) > 0 and k < 2:
        # subsets exist but every partition of them has at least one
        # class, already too many: the property quantifies over an
        # empty family set and holds vacuously
        return PartitionPropertyResult(
            k, n, alpha, True, True, "exhaustive", 0, None, None,
            "no family meets the class-count side condition",
        )
    options: list[list] = []
    for nu in range(k):
        tail_subsets = _subsets(range(nu + 1, k), n)
        if not tail_subsets:
            options.append([()])
        else:
            options.append(
                [p for p in set_partitions(tail_subsets) if len(p) < k]
            )

    checked = 0
    for combo in itertools.product(*options):
        checked += 1
        lookups = []
        for classes in combo:
            lookup: dict[tuple[int, ...], int] = {}
            for idx, cls in enumerate(classes):
                for subset in cls:
                    lookup[subset] = idx
            lookups.append(lookup)
        if not _family_admits_witness(lookups, k, n, alpha):
            family = _pad_restricted(k, n, combo)
            return PartitionPropertyResult(
                k, n, alpha, False, True, "exhaustive", checked, family, None,
                "counterexample family found",
            )
    return PartitionPropertyResult(
        k, n, alpha, True, True, "exhaustive", checked, None, None,
        "all families admit a witness",
    )


def _holds_sampled(
    k: int, n: int, alpha: int, seed: int, samples: int
) -> PartitionPropertyResult:
    if alpha > k:
        if k >= 2 and comb(k, n) > 0:
            single = PartitionFamily(
                k, n, tuple((frozenset(_subsets(range(k), n)),) for _ in range(k))
            )
            return PartitionPropertyResult(
                k, n, alpha, False, True, "shortcut", 0, single, None,
                "no increasing selection of that length exists in the base",
            )
        note = (
            "no family meets the class-count side condition"
            if comb(k, n) > 0
            else "the base has no subsets to partition"
        )
        if comb(k, n) > 0 and k < 2:
            return PartitionPropertyResult(
                k, n, alpha, True, True, "shortcut", 0, None, None, note
            )
        family = PartitionFamily(k, n, tuple(() for _ in range(k)))
        return PartitionPropertyResult(
            k, n, alpha, False, True, "shortcut", 0, family, None, note
        )
    if alpha <= n + 1:
        return PartitionPropertyResult(
            k, n, alpha, True, True, "shortcut", 0, None, None,
            "tails of any witness of that length are too short to split",
        )

    rng = random.Random(seed)
    all_subsets = _subsets(range(k), n)
    for round_no in range(samples):
        lookups = []
        for nu in range(k):
            lookups.append({s: rng.randrange(k - 1) for s in all_subsets})
        if not _family_admits_witness(lookups, k, n, alpha):
            labels = [dict(lookup) for lookup in lookups]
            family = PartitionFamily.from_labels(k, n, labels)
            return PartitionPropertyResult(
                k, n, alpha, False, True, "sampled", round_no + 1, family, seed,
                "counterexample family found",
            )
    return PartitionPropertyResult(
        k, n, alpha, True, False, "sampled", samples, None, seed,
        "no counterexample found",
    )


def ramsey_sanity(k: int, colors: int, target: int) -> bool:
    """Exhaustive check that every ``colors``-coloring of the pairs of
    {0..k-1} has a monochromatic ``target``-subset.  An independent
    oracle for the homogeneity machinery with classical known values."""
    if k < 0 or colors < 1 or target < 0:
        raise ValueError("need k >= 0, colors >= 1, target >= 0")
    if target <= 1:
        return True
    if target > k:
        return False
    pairs = _subsets(range(k), 2)
    pair_index = {p: i for i, p in enumerate(pairs)}
    candidate_subsets = [
        (_subsets(subset, 2), subset)
        for subset in itertools.combinations(range(k), target)
    ]
    for coloring in itertools.product(range(colors), repeat=len(pairs)):
        found = False
        for subset_pairs, _ in candidate_subsets:
            first = coloring[pair_index[subset_pairs[0]]]
            if all(coloring[pair_index[p]] == first for p in subset_pairs[1:]):
                found = True
                break
        if not found:
            return False
    return True


def _partition_model_precondition(m: FiniteStructure, n: int) -> None:
    if not satisfies(m, conjoin(psi1(), psi2(n))):
        raise ValueError(
            "structure does not satisfy the segment and coding sentences"
        )


def extract_partitions(m: FiniteStructure, n: int, validate: bool = True) -> PartitionFamily:
    """Read the partition family a coding model defines: base = P
    re-indexed in order, and two (n+2)-subsets are equivalent under nu
    exactly when f(nu, -) agrees on their increasing enumerations."""
    if validate:
        _partition_model_precondition(m, n)
    p_elems = sorted(e for e in range(m.size) if m.relation_holds("P", (e,)))
    base = len(p_elems)
    labels = []
    for nu in p_elems:
        lab: dict[tuple[int, ...], int] = {}
        for idx_subset in itertools.combinations(range(base), n + 2):
            ys = tuple(p_elems[i] for i in idx_subset)
            lab[idx_subset] = m.function_value("f", (nu,) + ys)
        labels.append(lab)
    return PartitionFamily.from_labels(base, n + 2, labels)


def psi3_oracle(
    m: FiniteStructure,
    n: int,
    *,
    require_partition_model: bool = True,
    relax_nu_to_all: bool = False,
) -> bool:
    """Combinatorial restatement of the inhomogeneity sentence: every
    increasing (n+5)-tuple of P-elements must contain, among its three
    smallest members (all members with ``relax_nu_to_all``, a reading
    the source constructions do not use), some nu with two increasing
    (n+2)-tuples above it that f separates."""
    if require_partition_model:
        _partition_model_precondition(m, n)
    p_elems = sorted(e for e in range(m.size) if m.relation_holds("P", (e,)))
    if len(p_elems) < n + 5:
        return True
    for xs in itertools.combinations(p_elems, n + 5):
        candidates = xs if relax_nu_to_all else xs[:3]
        split = False
        for nu in candidates:
            above = [x for x in xs if x > nu]
            values = {
                m.function_value("f", (nu,) + ys)
                for ys in itertools.combinations(above, n + 2)
            }
            if len(values) >= 2:
                split = True
                break
        if not split:
            return False
    return True
