"""Exhaustive model search and finite spectra.

The searcher backtracks over interpretation cells in a fixed order:
constants, then relation bits, then function table entries, each in
declaration order with argument tuples enumerated lexicographically and
candidate values ascending.  After every cell assignment it rescans the
still-undecided ground instances of the matrix with the shared
three-valued evaluator; an instance that comes back false kills the
branch, one that comes back true is decided for good (three-valued
verdicts are stable under extension).  The first model produced is
therefore the lexicographically least satisfying assignment of the cell
vector, which keeps witnesses reproducible.

Ground instances are built per top-level conjunct over just the
variables that conjunct mentions, which keeps the instance count at
size**|vars(conjunct)| instead of size**q.

``iter_models_naive`` is the deliberately unpruned oracle: it walks the
full interpretation space and filters with the brute-force checker.
Only tiny sizes can afford it, which is the point; the two routes must
agree and are compared in tests.

Blind search over a signature with a function of arity >= 3 is refused
by default: the table alone has size**arity cells and the space is
hopeless.  Callers holding crafted candidate structures should test
them directly with ``satisfies``.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .structures import FiniteStructure, satisfies_bruteforce
from .structures import eval_formula_partial
from .syntax import UniversalSentence, conjuncts, formula_variables

BLIND_SEARCH_ARITY_LIMIT = 2


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


class BlindSearchDisallowed(ValueError):
    pass


class _PartialView:
    """Partial interpretation addressed by cell; None for unassigned."""

    __slots__ = ("consts", "rels", "fns")

    def __init__(self):
        self.consts: dict[str, int] = {}
        self.rels: dict[tuple[str, tuple[int, ...]], bool] = {}
        self.fns: dict[tuple[str, tuple[int, ...]], int] = {}

    def constant(self, name):
        return self.consts.get(name)

    def function(self, name, args):
        return self.fns.get((name, args))

    def relation(self, name, args):
        return self.rels.get((name, args))


@dataclass(frozen=True)
class _Cell:
    kind: str  # "const" | "rel" | "fn"
    name: str
    args: tuple[int, ...]


def _check_blind_search(sentence: UniversalSentence, allow_unbounded_arity: bool) -> None:
    worst = max((a for _, a in sentence.signature.functions), default=0)
    if worst > BLIND_SEARCH_ARITY_LIMIT and not allow_unbounded_arity:
        raise BlindSearchDisallowed(
            f"signature has a {worst}-ary function; blind search is disabled "
            "(supply candidate structures and check them with satisfies, or "
            "pass allow_unbounded_arity=True)"
        )


def _cells(sentence: UniversalSentence, size: int) -> list[_Cell]:
    sig = sentence.signature
    cells = [_Cell("const", name, ()) for name in sig.constants]
    for name, arity in sig.relations:
        for args in itertools.product(range(size), repeat=arity):
            cells.append(_Cell("rel", name, args))
    for name, arity in sig.functions:
        for args in itertools.product(range(size), repeat=arity):
            cells.append(_Cell("fn", name, args))
    return cells


def _instances(sentence: UniversalSentence, size: int) -> list[tuple[object, dict[str, int]]]:
    out: list[tuple[object, dict[str, int]]] = []
    for part in conjuncts(sentence.matrix):
        used = formula_variables(part)
        variables = [v for v in sentence.variables if v in used]
        for combo in itertools.product(range(size), repeat=len(variables)):
            out.append((part, dict(zip(variables, combo))))
    return out


def _snapshot(sentence: UniversalSentence, size: int, view: _PartialView) -> FiniteStructure:
    sig = sentence.signature
    functions = {
        name: tuple(
            view.fns[(name, args)]
            for args in itertools.product(range(size), repeat=arity)
        )
        for name, arity in sig.functions
    }
    relations = {
        name: frozenset(
            args
            for args in itertools.product(range(size), repeat=arity)
            if view.rels[(name, args)]
        )
        for name, arity in sig.relations
    }
    constants = dict(view.consts)
    return FiniteStructure(size, sig, functions, relations, constants)


def iter_models(
    sentence: UniversalSentence,
    size: int,
    node_budget: int | None = None,
    allow_unbounded_arity: bool = False,
):
    """Yield every model of the given size, lexicographically least first.

    Raises SearchBudgetExceeded once more than ``node_budget`` branch
    nodes have been expanded; partial results already yielded stand.
    """
    _check_blind_search(sentence, allow_unbounded_arity)
    if size == 0 and sentence.signature.constants:
        return
    view = _PartialView()
    cells = _cells(sentence, size)
    instances = _instances(sentence, size)
    nodes = 0

    def rescan(pending: list[int]) -> tuple[bool, list[int]]:
        keep: list[int] = []
        for idx in pending:
            part, env = instances[idx]
            verdict = eval_formula_partial(part, env, view)
            if verdict is False:
                return False, keep
            if verdict is None:
                keep.append(idx)
        return True, keep

    ok, pending = rescan(list(range(len(instances))))
    if not ok:
        return

    def assign(cell: _Cell, value) -> None:
        if cell.kind == "const":
            view.consts[cell.name] = value
        elif cell.kind == "rel":
            view.rels[(cell.name, cell.args)] = value
        else:
            view.fns[(cell.name, cell.args)] = value

    def unassign(cell: _Cell) -> None:
        if cell.kind == "const":
            del view.consts[cell.name]
        elif cell.kind == "rel":
            del view.rels[(cell.name, cell.args)]
        else:
            del view.fns[(cell.name, cell.args)]

    def search(i: int, pending: list[int]):
        nonlocal nodes
        if i == len(cells):
            assert not pending
            yield _snapshot(sentence, size, view)
            return
        cell = cells[i]
        domain = (False, True) if cell.kind == "rel" else range(size)
        for value in domain:
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise SearchBudgetExceeded(nodes)
            assign(cell, value)
            ok, rest = rescan(pending)
            if ok:
                yield from search(i + 1, rest)
            unassign(cell)

    yield from search(0, pending)


def find_model(
    sentence: UniversalSentence,
    size: int,
    node_budget: int | None = None,
    allow_unbounded_arity: bool = False,
) -> FiniteStructure | None:
    """First (lexicographically least) model of the given size, or None
    after exhausting the space.  Budget exhaustion raises; it never
    degrades to None."""
    for m in iter_models(sentence, size, node_budget, allow_unbounded_arity):
        return m
    return None


def iter_models_naive(sentence: UniversalSentence, size: int):
    """Unpruned enumerator over the whole interpretation space; oracle
    for the backtracking search.  Exponential, keep sizes tiny."""
    if size == 0 and sentence.signature.constants:
        return
    cells = _cells(sentence, size)
    domains = [
        (False, True) if cell.kind == "rel" else tuple(range(size)) for cell in cells
    ]
    for values in itertools.product(*domains):
        view = _PartialView()
        for cell, value in zip(cells, values):
            if cell.kind == "const":
                view.consts[cell.name] = value
            elif cell.kind == "rel":
                view.rels[(cell.name, cell.args)] = value
            else:
                view.fns[(cell.name, cell.args)] = value
        candidate = _snapshot(sentence, size, view)
        if satisfies_bruteforce(candidate, sentence):
            yield candidate


@dataclass
class SpectrumResult:
    sentence_id: str
    max_size: int
    members: frozenset[int]
    witnesses: dict[int, FiniteStructure]
    unknown: frozenset[int] = frozenset()
    node_budget: int | None = None

    @property
    def complete(self) -> bool:
        return not self.unknown

    def to_json_dict(self) -> dict:
        from .structures import structure_to_json

        return {
            "sentence": self.sentence_id,
            "max_size": self.max_size,
            "members": sorted(self.members),
            "unknown": sorted(self.unknown),
            "complete": self.complete,
            "node_budget": self.node_budget,
            "witnesses": {
                str(size): structure_to_json(self.witnesses[size])
                for size in sorted(self.witnesses)
            },
        }


def _thread_cap() -> int:
    raw = os.environ.get("LOCUS_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def finite_spectrum(
    sentence: UniversalSentence,
    max_size: int,
    node_budget: int | None = None,
    sentence_id: str = "sentence",
    allow_unbounded_arity: bool = False,
) -> SpectrumResult:
    """Decide membership for every size 0..max_size.

    Sizes are independent; LOCUS_THREADS caps how many are searched in
    parallel (default 1).  A size whose search exhausts the node budget
    is reported in ``unknown``, never silently dropped.
    """
    if max_size < 0:
        raise ValueError("max_size must be >= 0")
    _check_blind_search(sentence, allow_unbounded_arity)
    sizes = list(range(max_size + 1))

    def probe(size: int) -> tuple[int, FiniteStructure | None, bool]:
        try:
            return size, find_model(sentence, size, node_budget, allow_unbounded_arity), False
        except SearchBudgetExceeded:
            return size, None, True

    workers = min(_thread_cap(), len(sizes)) or 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(probe, sizes))
    else:
        outcomes = [probe(size) for size in sizes]

    members: set[int] = set()
    witnesses: dict[int, FiniteStructure] = {}
    unknown: set[int] = set()
    for size, witness, exhausted in outcomes:
        if exhausted:
            unknown.add(size)
        elif witness is not None:
            members.add(size)
            witnesses[size] = witness
    return SpectrumResult(
        sentence_id=sentence_id,
        max_size=max_size,
        members=frozenset(members),
        witnesses=witnesses,
        unknown=frozenset(unknown),
        node_budget=node_budget,
    )
