"""Shipped sentences and crafted witness models.

The catalog bundles the sentences the rest of the package is exercised
against, together with small hand-built structures whose properties
are known in advance.  Every expectation stored beside them (spectra,
closure depths, indiscernible flags) is re-derived from scratch by the
test suite; the fixture files are never trusted blindly.

Sentence entries live as ``data/<id>.lsq`` (exact printer output, so
the files double as round-trip fixtures) with a ``data/<id>.json``
record of the expected values.  Crafted models live in
``data/models.json`` either as explicit tables or as segment-model
recipes that :func:`build_segment_model` materializes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources

from .parser import parse_sentence
from .structures import FiniteStructure, satisfies, structure_from_json
from .syntax import (
    App,
    Eq,
    Implies,
    Less,
    Not,
    Rel,
    Signature,
    UniversalSentence,
    Var,
    conjoin,
    conjunction,
    disjunction,
    union_sentence,
)

# ---------------------------------------------------------------------------
# Sentence builders


def example_sentence() -> UniversalSentence:
    """Initial-segment pairing sentence over {<, P, i, a}.

    P is an initial segment, i fixes P pointwise and injects the rest
    into P, and the constant a is held outside P.  Smallest models have
    two elements; closure needs the constant round plus one i round.
    """
    source = """
fn i/1
rel P/1
const a
forall x y z.
  (x <= y | y <= x) &
  ((x <= y & y <= x) <-> x = y) &
  ((x <= y & y <= z) -> x <= z) &
  (P(x) & !P(y) -> x < y) &
  (P(x) -> i(x) = x) &
  (!P(y) -> P(i(y))) &
  (!P(x) & !P(y) & !(x = y) -> !(i(x) = i(y))) &
  !P(a)
"""
    return parse_sentence(source).with_declared_steps(2)


def psi1() -> UniversalSentence:
    """Segment-skeleton sentence: I maps every element to the last
    element of its block and P marks exactly those last elements."""
    source = """
fn I/1
rel P/1
forall x y z.
  (x <= y | y <= x) &
  ((x <= y & y <= x) <-> x = y) &
  ((x <= y & y <= z) -> x <= z) &
  y <= I(y) &
  (y <= z -> I(y) <= I(z)) &
  (y <= z & z <= I(y) -> I(z) = I(y)) &
  (I(y) = y <-> P(y))
"""
    return parse_sentence(source).with_declared_steps(1)


def _partition_signature(n: int) -> Signature:
    return Signature(
        functions=(("I", 1), ("f", n + 3)),
        relations=(("P", 1),),
        constants=(),
    )


def psi2(n: int) -> UniversalSentence:
    """Partition-coding sentence: f compresses every (n+2)-tuple of
    segment representatives into a non-last element of the segment of
    its first argument, and is insensitive to everything but the
    I-images of its arguments.

    No standalone closure bound is declared: only together with the
    segment skeleton does closure stabilize (I first, then one f
    round).
    """
    if n < 1:
        raise ValueError("partition width parameter must be >= 1")
    sig = _partition_signature(n)
    v = Var("v")
    ys = [Var(f"y{i}") for i in range(1, n + 3)]

    def i_of(t):
        return App("I", (t,))

    def f_of(ts):
        return App("f", tuple(ts))

    increasing = [
        Less(i_of(ys[i]), i_of(ys[j]))
        for i in range(n + 2)
        for j in range(i + 1, n + 2)
    ]
    fv = f_of([v] + ys)
    clauses = [
        Eq(fv, f_of([i_of(v)] + [i_of(y) for y in ys])),
        Implies(disjunction([Not(a) for a in increasing]), Eq(fv, i_of(v))),
        Implies(conjunction(increasing), Eq(i_of(fv), i_of(v))),
        Implies(conjunction(increasing), Not(Rel("P", (fv,)))),
    ]
    variables = ("v",) + tuple(f"y{i}" for i in range(1, n + 3))
    return UniversalSentence(sig, variables, conjunction(clauses))


def psi3(n: int) -> UniversalSentence:
    """Inhomogeneity sentence: among any n+5 increasing P-elements, one
    of the three smallest must see two (n+2)-tuples above it that f
    sends to different values.

    The witness position is restricted to the three smallest elements
    on purpose; pass the relaxed reading explicitly where supported.
    """
    if n < 1:
        raise ValueError("partition width parameter must be >= 1")
    sig = _partition_signature(n)
    width = n + 5
    xs = [Var(f"x{i}") for i in range(1, width + 1)]

    def f_of(ts):
        return App("f", tuple(ts))

    guard = conjunction([Rel("P", (x,)) for x in xs])
    chain = conjunction(
        [Less(xs[i], xs[j]) for i in range(width) for j in range(i + 1, width)]
    )
    disjuncts = []
    for nu in xs[:3]:
        for ys in itertools.combinations(xs, n + 2):
            for ys2 in itertools.combinations(xs, n + 2):
                literals = [Less(nu, ys[0])]
                literals += [Less(ys[i], ys[i + 1]) for i in range(n + 1)]
                literals.append(Less(nu, ys2[0]))
                literals += [Less(ys2[i], ys2[i + 1]) for i in range(n + 1)]
                literals.append(Not(Eq(f_of((nu,) + ys), f_of((nu,) + ys2))))
                disjuncts.append(conjunction(literals))
    matrix = Implies(guard, Implies(chain, disjunction(disjuncts)))
    variables = tuple(f"x{i}" for i in range(1, width + 1))
    return UniversalSentence(sig, variables, matrix)


def theta(n: int, allow_large: bool = False) -> UniversalSentence:
    """Conjunction of the segment, partition-coding, and inhomogeneity
    sentences.  Closure stabilizes in two rounds: I first, then f.

    The f symbol is (n+3)-ary, so matrices and search spaces grow
    steeply with n; n > 2 therefore requires ``allow_large=True``.
    """
    if n > 2 and not allow_large:
        raise ValueError(
            "theta with n > 2 declares a function of arity > 5; "
            "pass allow_large=True to build it anyway"
        )
    combined = conjoin(conjoin(psi1(), psi2(n)), psi3(n))
    return combined.with_declared_steps(2)


def mono3_sentence() -> UniversalSentence:
    """Idempotent decreasing unary map; the stretching test bed."""
    source = """
fn g/1
forall x.
  g(g(x)) = g(x) &
  g(x) <= x
"""
    return parse_sentence(source).with_declared_steps(1)


def linear_sentence() -> UniversalSentence:
    """Pure order sentence: the function-free stretching case."""
    source = """
forall x y.
  x <= y | y <= x
"""
    return parse_sentence(source).with_declared_steps(1)


def exactly_three_sentence() -> UniversalSentence:
    """Spectrum pinned to {3}: three named, pairwise distinct elements
    that exhaust the universe.  Harness sentence for spectrum algebra."""
    source = """
const c0
const c1
const c2
forall x.
  (x = c0 | x = c1 | x = c2) &
  !(c0 = c1) & !(c0 = c2) & !(c1 = c2)
"""
    return parse_sentence(source).with_declared_steps(1)


def chain3_sentence() -> UniversalSentence:
    """h has no fixed points and no 2-cycles, so every orbit needs at
    least three elements; spectrum {0, 3, 4, ...}.  Closure depth grows
    with model size, so no step bound is declared."""
    source = """
fn h/1
forall x.
  !(h(x) = x) &
  !(h(h(x)) = x)
"""
    return parse_sentence(source)


def pair_swap_sentence() -> UniversalSentence:
    """h is a fixed-point-free involution: models are perfect
    matchings, spectrum the even sizes."""
    source = """
fn h/1
forall x.
  h(h(x)) = x &
  !(h(x) = x)
"""
    return parse_sentence(source).with_declared_steps(1)


def scaffold_placeholder() -> UniversalSentence:
    """Deliberately contentless slot sentence (an idempotent unary map,
    satisfiable at every size) for the combined-sentence scaffold."""
    source = """
fn u/1
forall x.
  u(u(x)) = u(x)
"""
    return parse_sentence(source).with_declared_steps(1)


def phi_scaffold(n: int, allow_large: bool = False) -> UniversalSentence:
    """Disjoint-union scaffold joining theta(n) with the placeholder
    slot; the slot stands in for a sentence built elsewhere."""
    return union_sentence(theta(n, allow_large), scaffold_placeholder())


# ---------------------------------------------------------------------------
# Crafted segment models


def _segment_layout(segment_lengths) -> tuple[tuple[int, ...], tuple[int, ...]]:
    lengths = tuple(int(x) for x in segment_lengths)
    if not lengths or any(k < 1 for k in lengths):
        raise ValueError("segment lengths must be positive")
    i_table: list[int] = []
    last_elements: list[int] = []
    start = 0
    for k in lengths:
        last = start + k - 1
        i_table.extend([last] * k)
        last_elements.append(last)
        start += k
    return tuple(i_table), tuple(last_elements)


def build_segment_model(
    segment_lengths,
    n: int | None = None,
    f_spec=None,
    validate: bool = True,
) -> FiniteStructure:
    """Materialize a segment model: consecutive blocks of the stated
    lengths, I sending each element to its block's last element, and P
    marking those last elements.

    With ``n`` given, an (n+3)-ary f is added.  ``f_spec`` chooses, for
    each block representative nu in P and each increasing (n+2)-tuple
    of P-elements, a non-last element of nu's block; it may be a
    callable ``(nu, ys) -> element``, a mapping keyed by ``(nu, ys)``,
    or None for the first element of nu's block.  All other argument
    tuples are forced by the coding clauses (non-increasing I-images
    collapse to I(nu); everything else factors through I-images).
    """
    i_table, last_elements = _segment_layout(segment_lengths)
    size = len(i_table)
    p_set = frozenset((e,) for e in last_elements)

    if n is None:
        sig = Signature(functions=(("I", 1),), relations=(("P", 1),), constants=())
        model = FiniteStructure(
            size, sig, {"I": i_table}, {"P": p_set}, {}
        )
        if validate and not satisfies(model, psi1()):
            raise ValueError("segment layout fails the skeleton sentence (internal error)")
        return model

    if n < 1:
        raise ValueError("partition width parameter must be >= 1")
    segment_of = {last: [e for e in range(size) if i_table[e] == last] for last in last_elements}

    def resolve(nu: int, ys: tuple[int, ...]) -> int:
        if f_spec is None:
            value = segment_of[nu][0]
        elif callable(f_spec):
            value = f_spec(nu, ys)
        else:
            if (nu, ys) not in f_spec:
                raise ValueError(f"f_spec has no value for nu={nu}, ys={ys}")
            value = f_spec[(nu, ys)]
        if i_table[value] != nu:
            raise ValueError(
                f"f value {value} for nu={nu} lies outside nu's segment"
            )
        if value == nu:
            raise ValueError(
                f"f value for nu={nu} is the segment's last element (a P-element)"
            )
        return value

    reps: dict[tuple[int, tuple[int, ...]], int] = {}
    if len(last_elements) >= n + 2:
        for nu in last_elements:
            for ys in itertools.combinations(last_elements, n + 2):
                reps[(nu, ys)] = resolve(nu, ys)

    f_table: list[int] = []
    for args in itertools.product(range(size), repeat=n + 3):
        iv = i_table[args[0]]
        iys = tuple(i_table[y] for y in args[1:])
        if all(iys[i] < iys[i + 1] for i in range(n + 1)):
            f_table.append(reps[(iv, iys)])
        else:
            f_table.append(iv)

    sig = _partition_signature(n)
    model = FiniteStructure(
        size,
        sig,
        {"I": i_table, "f": tuple(f_table)},
        {"P": p_set},
        {},
    )
    if validate and not satisfies(model, conjoin(psi1(), psi2(n))):
        raise ValueError("crafted model fails the coding clauses (internal error)")
    return model


def mono3_model() -> FiniteStructure:
    """Six elements folded onto {0, 2, 4} by the idempotent map g."""
    sig = Signature(functions=(("g", 1),), relations=(), constants=())
    return FiniteStructure(6, sig, {"g": (0, 0, 2, 2, 4, 4)}, {}, {})


# ---------------------------------------------------------------------------
# Entry registry


@dataclass(frozen=True)
class CatalogEntry:
    """One shipped sentence with its recorded expectations.

    ``declared_steps`` is the closure-step bound the entry claims, or
    None when no standalone bound is honest.  Spectrum and locality
    expectations are stated up to explicit size caps so they stay
    re-derivable in CI; ``models`` names crafted structures associated
    with the sentence.
    """

    id: str
    source: str
    declared_steps: int | None
    spectrum_max: int | None
    spectrum_members: tuple[int, ...] | None
    locality_max: int | None
    locality_depth: int | None
    models: tuple[str, ...]
    note: str

    def sentence_source(self) -> str:
        return _data_text(self.source)

    def sentence(self) -> UniversalSentence:
        parsed = parse_sentence(self.sentence_source())
        if self.declared_steps is not None:
            parsed = parsed.with_declared_steps(self.declared_steps)
        return parsed

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "declared_steps": self.declared_steps,
            "spectrum": (
                None
                if self.spectrum_max is None
                else {"max_size": self.spectrum_max, "members": list(self.spectrum_members)}
            ),
            "locality": (
                None
                if self.locality_max is None
                else {"max_size": self.locality_max, "max_depth": self.locality_depth}
            ),
            "models": list(self.models),
            "note": self.note,
        }


BUILDERS = {
    "example": example_sentence,
    "psi1": psi1,
    "psi2_n1": lambda: psi2(1),
    "psi3_n1": lambda: psi3(1),
    "theta_n1": lambda: theta(1),
    "mono3": mono3_sentence,
    "linear": linear_sentence,
    "exactly_three": exactly_three_sentence,
    "chain3": chain3_sentence,
    "pair_swap": pair_swap_sentence,
}

_SENTENCE_IDS = tuple(BUILDERS)


def _data_text(name: str) -> str:
    return (resources.files("locus.data") / name).read_text(encoding="utf-8")


def _entry_from_json(doc: dict) -> CatalogEntry:
    spectrum = doc.get("spectrum")
    locality = doc.get("locality")
    return CatalogEntry(
        id=doc["id"],
        source=doc["source"],
        declared_steps=doc["declared_steps"],
        spectrum_max=None if spectrum is None else spectrum["max_size"],
        spectrum_members=None if spectrum is None else tuple(spectrum["members"]),
        locality_max=None if locality is None else locality["max_size"],
        locality_depth=None if locality is None else locality["max_depth"],
        models=tuple(doc.get("models", ())),
        note=doc.get("note", ""),
    )


def entries() -> tuple[CatalogEntry, ...]:
    return tuple(
        _entry_from_json(json.loads(_data_text(f"{entry_id}.json")))
        for entry_id in _SENTENCE_IDS
    )


def get(entry_id: str) -> CatalogEntry:
    if entry_id not in _SENTENCE_IDS:
        raise KeyError(f"unknown catalog id {entry_id!r}")
    return _entry_from_json(json.loads(_data_text(f"{entry_id}.json")))


def load_sentence(entry_id: str) -> UniversalSentence:
    return get(entry_id).sentence()


def _models_doc() -> dict:
    return json.loads(_data_text("models.json"))


def model_ids() -> tuple[str, ...]:
    return tuple(_models_doc())


def model_record(model_id: str) -> dict:
    doc = _models_doc()
    if model_id not in doc:
        raise KeyError(f"unknown model id {model_id!r}")
    return doc[model_id]


def load_model(model_id: str, validate: bool = True) -> FiniteStructure:
    """Materialize a crafted model from its shipped record."""
    return model_from_record(model_record(model_id), validate=validate)


def model_from_record(record: dict, validate: bool = True) -> FiniteStructure:
    """Materialize a model from a record dict, either an explicit
    structure ("kind": "structure") or a segment recipe ("kind":
    "segments")."""
    if record["kind"] == "structure":
        sig_doc = record["signature"]
        sig = Signature(
            functions=tuple((n, a) for n, a in sig_doc["functions"]),
            relations=tuple((n, a) for n, a in sig_doc["relations"]),
            constants=tuple(sig_doc["constants"]),
        )
        return structure_from_json(record["structure"], sig)
    if record["kind"] == "segments":
        return build_segment_model(
            record["lengths"],
            record["n"],
            _recipe_f_spec(record),
            validate=validate,
        )
    raise ValueError(f"unknown model kind {record['kind']!r}")


def _recipe_f_spec(record: dict):
    """Turn a recipe's offset-based f description into an f_spec.

    ``default_offset`` indexes into the non-last elements of nu's
    segment; overrides replace the offset for specific (nu, ys) keys.
    """
    if record.get("n") is None or "f" not in record:
        return None
    spec = record["f"]
    overrides = {
        (item["nu"], tuple(item["ys"])): item["offset"]
        for item in spec.get("overrides", ())
    }
    i_table, _ = _segment_layout(record["lengths"])
    size = len(i_table)

    def pick(nu: int, ys: tuple[int, ...]) -> int:
        offset = overrides.get((nu, ys), spec.get("default_offset", 0))
        segment = [e for e in range(size) if i_table[e] == nu and e != nu]
        return segment[offset]

    return pick
