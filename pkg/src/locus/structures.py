"""Finite structures over ordered universes, evaluation, and closure.

A structure of size m lives on the universe {0, ..., m-1}.  The order
relation ``<`` is always the natural order on that universe and carries
no table; this is the deliberate symmetry-breaking convention used by
every search in this package.  The empty structure (m = 0) is admitted
whenever the signature declares no constants, and satisfies every
universal sentence it can interpret.

Evaluation comes in two strengths.  ``satisfies`` prunes: it splits the
matrix into top-level conjuncts, quantifies each conjunct only over the
variables it mentions, and walks assignments prefix-by-prefix with a
three-valued (Kleene) evaluator so that a prefix already forcing the
conjunct true or false cuts the whole subtree.  Three-valued verdicts
are monotone under extension, which is exactly what makes the pruning
sound.  ``satisfies_bruteforce`` does none of that and exists as an
independent check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .syntax import (
    And,
    App,
    Const,
    Eq,
    Formula,
    Iff,
    Implies,
    Less,
    Not,
    Or,
    Rel,
    Signature,
    Term,
    UniversalSentence,
    Var,
    conjuncts,
    formula_variables,
)


class StructureError(ValueError):
    """Malformed structure data."""


class SignatureMismatch(ValueError):
    """Structure does not interpret the sentence's signature."""


def flat_index(args: tuple[int, ...], size: int) -> int:
    idx = 0
    for a in args:
        idx = idx * size + a
    return idx


@dataclass(frozen=True, eq=True)
class FiniteStructure:
    """Interpretations for one signature on {0..size-1}.

    Function tables are flat row-major tuples (first argument most
    significant), relations are frozensets of argument tuples, and
    constants map to elements.  ``=`` and ``<`` never appear here.
    """

    size: int
    signature: Signature
    functions: dict[str, tuple[int, ...]] = field(default_factory=dict)
    relations: dict[str, frozenset[tuple[int, ...]]] = field(default_factory=dict)
    constants: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.size < 0:
            raise StructureError("negative size")
        if self.size == 0 and self.signature.constants:
            raise StructureError("empty structure cannot interpret constants")
        for name, arity in self.signature.functions:
            table = self.functions.get(name)
            if table is None:
                raise StructureError(f"missing table for function {name!r}")
            if len(table) != self.size**arity:
                raise StructureError(f"function {name!r} table has wrong length")
            if any(not (0 <= v < self.size) for v in table):
                raise StructureError(f"function {name!r} value out of range")
        for name, arity in self.signature.relations:
            tuples = self.relations.get(name)
            if tuples is None:
                raise StructureError(f"missing tuples for relation {name!r}")
            for tup in tuples:
                if len(tup) != arity or any(not (0 <= v < self.size) for v in tup):
                    raise StructureError(f"relation {name!r} holds a bad tuple {tup!r}")
        for name in self.signature.constants:
            value = self.constants.get(name)
            if value is None or not (0 <= value < self.size):
                raise StructureError(f"constant {name!r} missing or out of range")
        extra = set(self.functions) - {n for n, _ in self.signature.functions}
        extra |= set(self.relations) - {n for n, _ in self.signature.relations}
        extra |= set(self.constants) - set(self.signature.constants)
        if extra:
            raise StructureError(f"interpretations for undeclared symbols: {sorted(extra)}")

    @classmethod
    def build(cls, size: int, signature: Signature, functions=None, relations=None, constants=None) -> "FiniteStructure":
        """Normalising constructor: function values may be callables or
        sequences, relation values any iterable of tuples."""
        fns: dict[str, tuple[int, ...]] = {}
        for name, arity in signature.functions:
            spec = (functions or {}).get(name)
            if callable(spec):
                table = tuple(
                    spec(*args) for args in itertools.product(range(size), repeat=arity)
                )
            elif spec is not None:
                table = tuple(spec)
            else:
                raise StructureError(f"no interpretation supplied for function {name!r}")
            fns[name] = table
        rels: dict[str, frozenset[tuple[int, ...]]] = {}
        for name, _ in signature.relations:
            spec = (relations or {}).get(name, ())
            rels[name] = frozenset(tuple(t) for t in spec)
        consts = {name: (constants or {})[name] for name in signature.constants}
        return cls(size, signature, fns, rels, consts)

    def function_value(self, name: str, args: tuple[int, ...]) -> int:
        return self.functions[name][flat_index(args, self.size)]

    def relation_holds(self, name: str, args: tuple[int, ...]) -> bool:
        return args in self.relations[name]

    def constant_value(self, name: str) -> int:
        return self.constants[name]


def structure_to_json(m: FiniteStructure) -> dict:
    return {
        "size": m.size,
        "functions": {name: list(table) for name, table in sorted(m.functions.items())},
        "relations": {
            name: sorted(list(t) for t in tuples) for name, tuples in sorted(m.relations.items())
        },
        "constants": dict(sorted(m.constants.items())),
    }


def structure_from_json(doc: dict, signature: Signature) -> FiniteStructure:
    """Rebuild a structure; the signature supplies the arities the JSON
    schema leaves implicit."""
    try:
        size = doc["size"]
        functions = {name: tuple(table) for name, table in doc.get("functions", {}).items()}
        relations = {
            name: frozenset(tuple(t) for t in tuples)
            for name, tuples in doc.get("relations", {}).items()
        }
        constants = dict(doc.get("constants", {}))
    except (KeyError, TypeError) as exc:
        raise StructureError(f"malformed structure document: {exc}") from exc
    return FiniteStructure(size, signature, functions, relations, constants)


# ---------------------------------------------------------------------------
# Evaluation


class StructureView:
    """Total lookup adapter used by the shared partial evaluator."""

    def __init__(self, m: FiniteStructure):
        self.m = m

    def constant(self, name: str) -> int | None:
        return self.m.constants[name]

    def function(self, name: str, args: tuple[int, ...]) -> int | None:
        return self.m.functions[name][flat_index(args, self.m.size)]

    def relation(self, name: str, args: tuple[int, ...]) -> bool | None:
        return args in self.m.relations[name]


def eval_term_partial(term: Term, env: dict[str, int], view) -> int | None:
    if isinstance(term, Var):
        return env.get(term.name)
    if isinstance(term, Const):
        return view.constant(term.name)
    if isinstance(term, App):
        values = []
        for arg in term.args:
            v = eval_term_partial(arg, env, view)
            if v is None:
                return None
            values.append(v)
        return view.function(term.function, tuple(values))
    raise TypeError(f"not a term: {term!r}")


def eval_formula_partial(f: Formula, env: dict[str, int], view) -> bool | None:
    """Kleene evaluation: None wherever an unassigned variable or table
    cell blocks the verdict.  True/False answers are stable under any
    extension of the partial data."""
    if isinstance(f, Eq):
        a = eval_term_partial(f.left, env, view)
        b = eval_term_partial(f.right, env, view)
        if a is None or b is None:
            return None
        return a == b
    if isinstance(f, Less):
        a = eval_term_partial(f.left, env, view)
        b = eval_term_partial(f.right, env, view)
        if a is None or b is None:
            return None
        return a < b
    if isinstance(f, Rel):
        values = []
        for arg in f.args:
            v = eval_term_partial(arg, env, view)
            if v is None:
                return None
            values.append(v)
        return view.relation(f.name, tuple(values))
    if isinstance(f, Not):
        v = eval_formula_partial(f.operand, env, view)
        return None if v is None else not v
    if isinstance(f, And):
        pending = False
        for item in f.items:
            v = eval_formula_partial(item, env, view)
            if v is False:
                return False
            if v is None:
                pending = True
        return None if pending else True
    if isinstance(f, Or):
        pending = False
        for item in f.items:
            v = eval_formula_partial(item, env, view)
            if v is True:
                return True
            if v is None:
                pending = True
        return None if pending else False
    if isinstance(f, Implies):
        a = eval_formula_partial(f.left, env, view)
        if a is False:
            return True
        b = eval_formula_partial(f.right, env, view)
        if b is True:
            return True
        if a is None or b is None:
            return None
        return False
    if isinstance(f, Iff):
        a = eval_formula_partial(f.left, env, view)
        if a is None:
            return None
        b = eval_formula_partial(f.right, env, view)
        if b is None:
            return None
        return a == b
    raise TypeError(f"not a formula: {f!r}")


def _require_compatible(m: FiniteStructure, sentence: UniversalSentence) -> None:
    sig = sentence.signature
    for name, arity in sig.functions:
        if not (m.signature.has_function(name) and m.signature.function_arity(name) == arity):
            raise SignatureMismatch(f"structure does not interpret function {name}/{arity}")
    for name, arity in sig.relations:
        if not any(n == name and k == arity for n, k in m.signature.relations):
            raise SignatureMismatch(f"structure does not interpret relation {name}/{arity}")
    for name in sig.constants:
        if name not in m.signature.constants:
            raise SignatureMismatch(f"structure does not interpret constant {name}")


def eval_term(m: FiniteStructure, assignment: dict[str, int], term: Term) -> int:
    """Evaluate a term under a total assignment; unbound variables raise."""
    value = eval_term_partial(term, assignment, StructureView(m))
    if value is None:
        missing = sorted(v for v in _term_vars(term) if v not in assignment)
        raise ValueError(f"unbound variables {missing}")
    return value


def _term_vars(term: Term) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, Const):
        return set()
    return set().union(*(_term_vars(a) for a in term.args))


def _forall_holds(f: Formula, variables: list[str], size: int, view: StructureView) -> bool:
    env: dict[str, int] = {}

    def rec(depth: int) -> bool:
        verdict = eval_formula_partial(f, env, view)
        if verdict is not None:
            return verdict
        if depth == len(variables):
            raise RuntimeError("undecided formula with all variables bound (internal error)")
        var = variables[depth]
        for e in range(size):
            env[var] = e
            ok = rec(depth + 1)
            del env[var]
            if not ok:
                return False
        return True

    return rec(0)


def satisfies(m: FiniteStructure, sentence: UniversalSentence) -> bool:
    """Model check a universal sentence against a structure whose
    signature interprets (at least) the sentence's symbols."""
    _require_compatible(m, sentence)
    view = StructureView(m)
    for part in conjuncts(sentence.matrix):
        used = formula_variables(part)
        variables = [v for v in sentence.variables if v in used]
        if not _forall_holds(part, variables, m.size, view):
            return False
    return True


def satisfies_bruteforce(m: FiniteStructure, sentence: UniversalSentence) -> bool:
    """Unpruned reference check: every assignment, whole matrix."""
    _require_compatible(m, sentence)
    view = StructureView(m)
    for combo in itertools.product(range(m.size), repeat=len(sentence.variables)):
        env = dict(zip(sentence.variables, combo))
        verdict = eval_formula_partial(sentence.matrix, env, view)
        assert verdict is not None
        if not verdict:
            return False
    return True


# ---------------------------------------------------------------------------
# Closure and generated substructures


def closure_step(m: FiniteStructure, xs) -> frozenset[int]:
    """One closure round: add every function image of tuples from ``xs``
    and every constant."""
    current = frozenset(xs)
    out = set(current)
    members = sorted(current)
    for name, arity in m.signature.functions:
        table = m.functions[name]
        for args in itertools.product(members, repeat=arity):
            out.add(table[flat_index(args, m.size)])
    for name in m.signature.constants:
        out.add(m.constants[name])
    return frozenset(out)


def closure(m: FiniteStructure, xs) -> tuple[frozenset[int], int]:
    """Least superset of ``xs`` closed under functions and containing all
    constants, with the number of rounds needed.

    The depth is the least n >= 1 such that n rounds already reach the
    closure; a set that is closed from the start has depth 1.
    """
    current = frozenset(xs)
    depth = 0
    while True:
        nxt = closure_step(m, current)
        depth += 1
        if nxt == current:
            return current, max(1, depth - 1)
        current = nxt


def generated_substructure(m: FiniteStructure, xs) -> tuple[FiniteStructure, tuple[int, ...]]:
    """Substructure on closure(xs), reindexed order-preservingly to an
    initial segment.  Returns the substructure together with the
    embedding (new index -> original element)."""
    closed, _ = closure(m, xs)
    if not closed and m.signature.constants:
        raise RuntimeError("empty closure despite constants (internal error)")
    order = tuple(sorted(closed))
    back = {old: new for new, old in enumerate(order)}
    size = len(order)
    functions: dict[str, tuple[int, ...]] = {}
    for name, arity in m.signature.functions:
        table = m.functions[name]
        functions[name] = tuple(
            back[table[flat_index(tuple(order[i] for i in args), m.size)]]
            for args in itertools.product(range(size), repeat=arity)
        )
    relations = {
        name: frozenset(
            tuple(back[v] for v in tup)
            for tup in tuples
            if all(v in closed for v in tup)
        )
        for name, tuples in m.relations.items()
    }
    constants = {name: back[value] for name, value in m.constants.items()}
    sub = FiniteStructure(size, m.signature, functions, relations, constants)
    return sub, order
