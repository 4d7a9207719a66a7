"""Indiscernible generators and finite prefixes of stretched models.

A tuple c_1 < ... < c_N generates a finite structure when its closure
is the whole universe, and is order-indiscernible when equal-length
increasing subtuples are atomically indistinguishable over terms of
bounded complexity.  From such a tuple the structure can be stretched:
an index set S of ordinals below omega^omega names |S| fresh
generators, and every atomic fact about terms over them is copied from
the host by order pattern.  Only finite prefixes are materialized: the
prefix over S is the substructure generated by the first |S| host
indiscernibles, relabeled by representative terms with ordinal
indices.  Everything a prefix says is decided by embedding its merged
index pattern order-preservingly into the host tuple, which is why
patterns longer than N cannot be decided and raise a capacity error.

Flavor flags (monotonic, special, remarkable) are operational finite
checks stated directly on term values; semi_monotonic is a recognized
flavor with no finite check wired in and always reports unknown.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .ordinals import OrdinalCNF, from_int, render_ordinal
from .structures import (
    FiniteStructure,
    closure,
    generated_substructure,
    satisfies,
    structure_to_json,
)
from .syntax import UniversalSentence, term_metrics

DEFAULT_TERM_LIMIT = 20000

FLAVOR_CAVEAT = (
    "flavor flags use operational finite definitions and prefix checks "
    "cover finitely generated substructure shapes only"
)


class PatternCapacityError(ValueError):
    """An index pattern needs more generators than the host tuple has."""


# ---------------------------------------------------------------------------
# Terms over a fixed list of generator slots.  Plain tuples keep them
# hashable and cheap: ("var", slot), ("const", name), ("app", fn, args).


def enumerate_terms(signature, slots: int, max_depth: int, limit: int = DEFAULT_TERM_LIMIT):
    """All terms of nesting depth <= max_depth over ``slots`` generator
    variables plus the signature constants, in deterministic order
    (by depth, then function name, then argument order)."""
    frontier = [("var", i) for i in range(slots)]
    frontier += [("const", name) for name in signature.constants]
    terms = list(frontier)
    seen = set(terms)
    for _ in range(max_depth):
        fresh = []
        for fname, arity in signature.functions:
            for args in itertools.product(terms, repeat=arity):
                candidate = ("app", fname, args)
                if candidate not in seen:
                    seen.add(candidate)
                    fresh.append(candidate)
                    if len(seen) > limit:
                        raise ValueError(
                            f"term enumeration exceeded {limit} terms; "
                            "raise the limit or lower the depth"
                        )
        if not fresh:
            break
        terms += fresh
    return terms


def eval_term_on(m: FiniteStructure, term, values: tuple[int, ...]) -> int:
    kind = term[0]
    if kind == "var":
        return values[term[1]]
    if kind == "const":
        return m.constant_value(term[1])
    return m.function_value(term[1], tuple(eval_term_on(m, a, values) for a in term[2]))


def term_label(term, index_names) -> str:
    kind = term[0]
    if kind == "var":
        return f"x[{index_names[term[1]]}]"
    if kind == "const":
        return term[1]
    args = ", ".join(term_label(a, index_names) for a in term[2])
    return f"{term[1]}({args})"


def _term_slots(term) -> frozenset[int]:
    if term[0] == "var":
        return frozenset((term[1],))
    if term[0] == "const":
        return frozenset()
    out: frozenset[int] = frozenset()
    for a in term[2]:
        out |= _term_slots(a)
    return out


# ---------------------------------------------------------------------------
# Order indiscernibility


def _atomic_type(m: FiniteStructure, terms, values: tuple[int, ...]):
    """Fingerprint of everything atomic about ``values``: the =/< rank
    pattern of all term values plus every relation fact over them."""
    vals = [eval_term_on(m, t, values) for t in terms]
    rank_of = {v: i for i, v in enumerate(sorted(set(vals)))}
    ranks = tuple(rank_of[v] for v in vals)
    rels = []
    for name in sorted(m.relations):
        arity = m.signature.relation_arity(name)
        rels.append(
            tuple(
                m.relation_holds(name, tuple(vals[i] for i in idx))
                for idx in itertools.product(range(len(vals)), repeat=arity)
            )
        )
    return ranks, tuple(rels)


def _order_indiscernible(
    m: FiniteStructure, indices: tuple[int, ...], n_phi: int, term_limit: int
) -> bool:
    for length in range(1, len(indices) + 1):
        terms = enumerate_terms(m.signature, length, n_phi + 1, term_limit)
        first = None
        for sub in itertools.combinations(indices, length):
            t = _atomic_type(m, terms, sub)
            if first is None:
                first = t
            elif t != first:
                return False
    return True


# ---------------------------------------------------------------------------
# Flags and witnesses


@dataclass(frozen=True)
class IndiscernibleFlags:
    order_indiscernible: bool
    monotonic: bool
    special: bool
    remarkable: bool
    semi_monotonic: bool | None = None

    def to_json_dict(self) -> dict:
        return {
            "order_indiscernible": self.order_indiscernible,
            "monotonic": self.monotonic,
            "special": self.special,
            "remarkable": self.remarkable,
            "semi_monotonic": self.semi_monotonic,
        }


@dataclass(frozen=True)
class IndiscernibleWitness:
    """A generating, order-indiscernible tuple with its flavor flags."""

    model: FiniteStructure
    indices: tuple[int, ...]
    n_phi: int
    flags: IndiscernibleFlags

    def to_json_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "n_phi": self.n_phi,
            "flags": self.flags.to_json_dict(),
        }


def classify(
    m: FiniteStructure,
    indices: tuple[int, ...],
    n_phi: int,
    term_limit: int = DEFAULT_TERM_LIMIT,
) -> IndiscernibleFlags:
    """Evaluate every flag on the candidate tuple.

    monotonic: term values never decrease under pointwise-larger
    increasing substitutions.  special: terms over a prefix of the
    tuple stay below the next generator.  remarkable: a term value
    that drops below its tail arguments does not depend on them.
    All three range over terms of complexity <= n_phi + 1.
    """
    indices = tuple(indices)
    n = len(indices)
    order_flag = _order_indiscernible(m, indices, n_phi, term_limit)

    monotonic = True
    special = True
    remarkable = True
    for length in range(1, n + 1):
        terms = enumerate_terms(m.signature, length, n_phi + 1, term_limit)
        subs = list(itertools.combinations(indices, length))
        values = {sub: [eval_term_on(m, t, sub) for t in terms] for sub in subs}
        for a, b in itertools.product(subs, repeat=2):
            if a != b and all(x <= y for x, y in zip(a, b)):
                if any(va > vb for va, vb in zip(values[a], values[b])):
                    monotonic = False
        for sub in subs:
            position = indices.index(sub[-1])
            if position < n - 1:
                bound = indices[position + 1]
                if any(v >= bound for v in values[sub]):
                    special = False
        for split in range(length):
            # head = sub[:split], tail = sub[split:]; the tail is the
            # block of arguments the term must forget once its value
            # drops below them
            for sub in subs:
                head = sub[:split]
                tail = sub[split:]
                pool = [c for c in indices if not head or c > head[-1]]
                for t_idx, t in enumerate(terms):
                    if values[sub][t_idx] < tail[0]:
                        for other_tail in itertools.combinations(pool, length - split):
                            alt = head + other_tail
                            if values[alt][t_idx] != values[sub][t_idx]:
                                remarkable = False
                                break
                    if not remarkable:
                        break
                if not remarkable:
                    break
            if not remarkable:
                break
        if not remarkable:
            break

    return IndiscernibleFlags(order_flag, monotonic, special, remarkable, None)


def find_indiscernibles(
    m: FiniteStructure,
    n: int,
    n_phi: int,
    term_limit: int = DEFAULT_TERM_LIMIT,
) -> list[IndiscernibleWitness]:
    """All increasing n-tuples that are order-indiscernible at the
    given complexity bound and generate the whole structure."""
    if n < 1:
        raise ValueError("need at least one generator")
    out = []
    for candidate in itertools.combinations(range(m.size), n):
        closed, _ = closure(m, candidate)
        if len(closed) != m.size:
            continue
        if not _order_indiscernible(m, candidate, n_phi, term_limit):
            continue
        flags = classify(m, candidate, n_phi, term_limit)
        out.append(IndiscernibleWitness(m, candidate, n_phi, flags))
    return out


# ---------------------------------------------------------------------------
# Prefixes


@dataclass(frozen=True)
class StretchPrefix:
    """The finite piece of the stretched model named by an index set.

    ``structure`` is the generated substructure reindexed to 0..size-1
    in host order; ``rep_terms[e]`` is the least term (by construction
    round, then enumeration order) denoting element e, with generator
    slots standing for the ordinals in ``indices``; ``labels`` renders
    those terms.  ``host_elements[e]`` is the host element the term
    evaluates to under the order embedding of ``indices`` into the
    host tuple.
    """

    indices: tuple[OrdinalCNF, ...]
    n_phi: int
    structure: FiniteStructure
    rep_terms: tuple
    labels: tuple[str, ...]
    host_elements: tuple[int, ...]
    generator_elements: tuple[int, ...]
    closure_depth: int

    def to_json_dict(self) -> dict:
        return {
            "indices": [render_ordinal(o) for o in self.indices],
            "n_phi": self.n_phi,
            "size": self.structure.size,
            "labels": list(self.labels),
            "generator_elements": list(self.generator_elements),
            "closure_depth": self.closure_depth,
            "structure": structure_to_json(self.structure),
        }


def _as_ordinal(x) -> OrdinalCNF:
    if isinstance(x, OrdinalCNF):
        return x
    if isinstance(x, int):
        return from_int(x)
    raise TypeError(f"not an ordinal index: {x!r}")


def _representative_terms(m: FiniteStructure, generators: tuple[int, ...]):
    """First term reaching each element of the closure of the
    generators, found breadth-first by construction round."""
    reps: dict[int, tuple] = {}
    queue: list[tuple] = []
    for slot, host in enumerate(generators):
        if host not in reps:
            reps[host] = ("var", slot)
            queue.append(("var", slot))
    for name in sorted(m.constants):
        value = m.constants[name]
        if value not in reps:
            reps[value] = ("const", name)
            queue.append(("const", name))
    frontier = list(queue)
    known = list(queue)
    while frontier:
        fresh = []
        for fname, arity in m.signature.functions:
            for args in itertools.product(known, repeat=arity):
                value = m.function_value(
                    fname, tuple(eval_term_on(m, a, generators) for a in args)
                )
                if value not in reps:
                    term = ("app", fname, args)
                    reps[value] = term
                    fresh.append(term)
        if not fresh:
            break
        known += fresh
        frontier = fresh
    return reps


def stretch_prefix(
    m: FiniteStructure,
    indiscernibles: tuple[int, ...],
    index_set,
    n_phi: int,
) -> StretchPrefix:
    """Materialize the prefix named by ``index_set``.

    The j-th smallest index is interpreted by the j-th host
    indiscernible; the prefix is the substructure that interpretation
    generates, with elements labeled by representative terms over the
    ordinal-named generators.  Raises PatternCapacityError when the
    index set is larger than the host tuple, since atomic facts about
    that many generators cannot be read off the host.
    """
    indices = tuple(sorted({_as_ordinal(x) for x in index_set}))
    if len(indices) > len(indiscernibles):
        raise PatternCapacityError(
            f"index pattern of size {len(indices)} exceeds the "
            f"{len(indiscernibles)} available generators"
        )
    generators = tuple(indiscernibles[: len(indices)])
    _, depth = closure(m, generators)
    sub, order = generated_substructure(m, generators)
    back = {old: new for new, old in enumerate(order)}
    reps = _representative_terms(m, generators)
    if set(reps) != set(order):
        raise RuntimeError("representative terms missed closure elements (internal error)")
    names = [render_ordinal(o) for o in indices]
    rep_terms = tuple(reps[old] for old in order)
    labels = tuple(term_label(t, names) for t in rep_terms)
    return StretchPrefix(
        indices=indices,
        n_phi=n_phi,
        structure=sub,
        rep_terms=rep_terms,
        labels=labels,
        host_elements=order,
        generator_elements=tuple(back[g] for g in generators),
        closure_depth=depth,
    )


def prefix_embedding(small: StretchPrefix, large: StretchPrefix) -> tuple[int, ...]:
    """The canonical map between nested prefixes: send each element's
    representative term to its value over the larger index set.
    Requires the smaller index set to be contained in the larger;
    checks that the result is an order/function/relation embedding."""
    positions = {o: i for i, o in enumerate(large.indices)}
    missing = [o for o in small.indices if o not in positions]
    if missing:
        raise ValueError(
            f"index {render_ordinal(missing[0])} of the smaller prefix "
            "is not in the larger index set"
        )
    slot_map = tuple(positions[o] for o in small.indices)
    target = large.structure
    gens = large.generator_elements

    def value(term) -> int:
        kind = term[0]
        if kind == "var":
            return gens[slot_map[term[1]]]
        if kind == "const":
            return target.constant_value(term[1])
        return target.function_value(term[1], tuple(value(a) for a in term[2]))

    mapping = tuple(value(t) for t in small.rep_terms)
    _check_embedding(small.structure, target, mapping)
    return mapping


def _check_embedding(src: FiniteStructure, dst: FiniteStructure, mapping: tuple[int, ...]) -> None:
    if len(set(mapping)) != src.size:
        raise RuntimeError("prefix map is not injective (internal error)")
    for i, j in itertools.combinations(range(src.size), 2):
        if not mapping[i] < mapping[j]:
            raise RuntimeError("prefix map does not preserve order (internal error)")
    for name, arity in src.signature.functions:
        for args in itertools.product(range(src.size), repeat=arity):
            image = dst.function_value(name, tuple(mapping[a] for a in args))
            if image != mapping[src.function_value(name, args)]:
                raise RuntimeError(f"prefix map breaks function {name} (internal error)")
    for name, arity in src.signature.relations:
        for args in itertools.product(range(src.size), repeat=arity):
            if src.relation_holds(name, args) != dst.relation_holds(
                name, tuple(mapping[a] for a in args)
            ):
                raise RuntimeError(f"prefix map breaks relation {name} (internal error)")
    for name in src.signature.constants:
        if mapping[src.constant_value(name)] != dst.constant_value(name):
            raise RuntimeError(f"prefix map moves constant {name} (internal error)")


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class StretchReport:
    verdict: str
    budget: int
    generator_count: int
    sufficiency_bound: int
    exhaustive: bool
    sizes_checked: tuple[int, ...]
    failing_size: int | None
    failing_labels: tuple[str, ...] | None
    caveat: str

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "budget": self.budget,
            "generator_count": self.generator_count,
            "sufficiency_bound": self.sufficiency_bound,
            "exhaustive": self.exhaustive,
            "sizes_checked": list(self.sizes_checked),
            "failing_size": self.failing_size,
            "failing_labels": None if self.failing_labels is None else list(self.failing_labels),
            "caveat": self.caveat,
        }


def verify_stretch(
    sentence: UniversalSentence,
    m: FiniteStructure,
    indiscernibles: tuple[int, ...],
    pattern_budget: int,
) -> StretchReport:
    """Check the sentence on one prefix per order-isomorphism class of
    index patterns of each size up to the budget.

    Since prefixes are pattern-determined, the class of size-k
    patterns is covered by the representative {0, ..., k-1}.  A
    violation of a universal sentence touches at most q elements, each
    a term over at most v generators, so a budget of q*max(v,1)+v
    (capped by the available generators) already covers every
    finitely generated substructure shape; the report carries both
    that bound and the generator count so callers can see which one
    bit.
    """
    n = len(indiscernibles)
    if pattern_budget > n:
        raise PatternCapacityError(
            f"pattern budget {pattern_budget} exceeds the {n} available generators"
        )
    if pattern_budget < 0:
        raise ValueError("pattern budget must be >= 0")
    steps = sentence.declared_closure_steps or 1
    v, _ = term_metrics(sentence, steps)
    q = len(sentence.variables)
    sufficiency = min(n, q * max(v, 1) + v)

    sizes = []
    for k in range(pattern_budget + 1):
        prefix = stretch_prefix(m, indiscernibles, [from_int(i) for i in range(k)], steps)
        sizes.append(k)
        if not satisfies(prefix.structure, sentence):
            return StretchReport(
                verdict="refuted",
                budget=pattern_budget,
                generator_count=n,
                sufficiency_bound=sufficiency,
                exhaustive=False,
                sizes_checked=tuple(sizes),
                failing_size=k,
                failing_labels=prefix.labels,
                caveat=FLAVOR_CAVEAT,
            )
    return StretchReport(
        verdict="verified-to-budget",
        budget=pattern_budget,
        generator_count=n,
        sufficiency_bound=sufficiency,
        exhaustive=pattern_budget >= sufficiency,
        sizes_checked=tuple(sizes),
        failing_size=None,
        failing_labels=None,
        caveat=FLAVOR_CAVEAT,
    )
