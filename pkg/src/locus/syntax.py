"""AST, printer, and syntactic metrics for universal sentences.

A sentence is a single block of universal quantifiers over a
quantifier-free matrix, interpreted over finite structures whose
universe is an initial segment of the naturals.  Every signature
implicitly provides the binary relations ``=`` and ``<``; ``<`` is
always read as the natural order, so neither symbol is ever declared
or interpreted explicitly.

Terms and formulas are immutable; structural equality is plain
dataclass equality.  The one exception is the optional closure-step
annotation on a sentence, which is metadata (the concrete syntax has
no way to write it) and is excluded from comparisons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

EQ = "="
LT = "<"

RESERVED_WORDS = frozenset({"fn", "rel", "const", "forall", "in"})

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class DeclarationError(ValueError):
    """A signature or sentence violates a structural constraint."""


def _check_name(name: str) -> None:
    if not _NAME_RE.match(name):
        raise DeclarationError(f"invalid symbol name {name!r}")
    if name in RESERVED_WORDS:
        raise DeclarationError(f"{name!r} is a reserved word")


@dataclass(frozen=True)
class Signature:
    """Declared symbols of a sentence.

    ``functions`` and ``relations`` are (name, arity) pairs in
    declaration order; ``constants`` are names.  Function arities are
    positive.  Relation arity 0 is admitted (a propositional flag;
    the sentence-union construction needs one selector of this kind).
    ``=`` and ``<`` are available in every signature and must not be
    declared.
    """

    functions: tuple[tuple[str, int], ...] = ()
    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        names: list[str] = []
        for name, arity in self.functions:
            _check_name(name)
            if arity < 1:
                raise DeclarationError(f"function {name!r} needs arity >= 1")
            names.append(name)
        for name, arity in self.relations:
            _check_name(name)
            if arity < 0:
                raise DeclarationError(f"relation {name!r} has negative arity")
            names.append(name)
        for name in self.constants:
            _check_name(name)
            names.append(name)
        seen: set[str] = set()
        for name in names:
            if name in seen:
                raise DeclarationError(f"symbol {name!r} declared twice")
            seen.add(name)

    def has_symbol(self, name: str) -> bool:
        return (
            self.has_function(name)
            or self.has_relation(name)
            or name in self.constants
        )

    def has_function(self, name: str) -> bool:
        return any(n == name for n, _ in self.functions)

    def has_relation(self, name: str) -> bool:
        return name in (EQ, LT) or any(n == name for n, _ in self.relations)

    def function_arity(self, name: str) -> int:
        for n, a in self.functions:
            if n == name:
                return a
        raise KeyError(name)

    def relation_arity(self, name: str) -> int:
        if name in (EQ, LT):
            return 2
        for n, a in self.relations:
            if n == name:
                return a
        raise KeyError(name)

    def symbol_names(self) -> frozenset[str]:
        return frozenset(
            [n for n, _ in self.functions]
            + [n for n, _ in self.relations]
            + list(self.constants)
        )


def merge_signatures(a: Signature, b: Signature) -> Signature:
    """Union of two signatures; shared names must agree exactly."""
    for name, arity in b.functions:
        if a.has_symbol(name) and not (
            a.has_function(name) and a.function_arity(name) == arity
        ):
            raise DeclarationError(f"conflicting declarations for {name!r}")
    for name, arity in b.relations:
        if a.has_symbol(name) and not (
            any(n == name and k == arity for n, k in a.relations)
        ):
            raise DeclarationError(f"conflicting declarations for {name!r}")
    for name in b.constants:
        if a.has_symbol(name) and name not in a.constants:
            raise DeclarationError(f"conflicting declarations for {name!r}")
    return Signature(
        functions=a.functions
        + tuple(p for p in b.functions if not a.has_function(p[0])),
        relations=a.relations
        + tuple(p for p in b.relations if p not in a.relations),
        constants=a.constants
        + tuple(c for c in b.constants if c not in a.constants),
    )


# ---------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const(Term):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App(Term):
    function: str
    args: tuple[Term, ...]

    def __str__(self) -> str:
        return term_text(self)


def term_variables(term: Term) -> frozenset[str]:
    if isinstance(term, Var):
        return frozenset((term.name,))
    if isinstance(term, Const):
        return frozenset()
    if isinstance(term, App):
        out: frozenset[str] = frozenset()
        for arg in term.args:
            out |= term_variables(arg)
        return out
    raise TypeError(f"not a term: {term!r}")


def term_complexity(term: Term) -> int:
    """Nesting depth: function applications along the deepest path."""
    if isinstance(term, (Var, Const)):
        return 0
    if isinstance(term, App):
        return 1 + max(term_complexity(a) for a in term.args)
    raise TypeError(f"not a term: {term!r}")


# ---------------------------------------------------------------------------
# Quantifier-free formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Less(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    """N-ary conjunction; flat so that wide clause lists (the norm in
    this domain) never deepen the tree."""

    items: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("And needs at least two operands")


@dataclass(frozen=True)
class Or(Formula):
    items: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("Or needs at least two operands")


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


def formula_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, (Eq, Less)):
        return term_variables(f.left) | term_variables(f.right)
    if isinstance(f, Rel):
        out: frozenset[str] = frozenset()
        for arg in f.args:
            out |= term_variables(arg)
        return out
    if isinstance(f, Not):
        return formula_variables(f.operand)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for item in f.items:
            out |= formula_variables(item)
        return out
    if isinstance(f, (Implies, Iff)):
        return formula_variables(f.left) | formula_variables(f.right)
    raise TypeError(f"not a formula: {f!r}")


def conjunction(parts) -> Formula:
    """Conjunction of one or more formulas, flattening nested Ands."""
    items: list[Formula] = []
    for p in parts:
        items.extend(p.items if isinstance(p, And) else (p,))
    if not items:
        raise ValueError("empty conjunction")
    return items[0] if len(items) == 1 else And(tuple(items))


def disjunction(parts) -> Formula:
    items: list[Formula] = []
    for p in parts:
        items.extend(p.items if isinstance(p, Or) else (p,))
    if not items:
        raise ValueError("empty disjunction")
    return items[0] if len(items) == 1 else Or(tuple(items))


def conjuncts(f: Formula) -> list[Formula]:
    """Flatten nested conjunctions into their leaves."""
    if isinstance(f, And):
        out: list[Formula] = []
        for item in f.items:
            out.extend(conjuncts(item))
        return out
    return [f]


# ---------------------------------------------------------------------------
# Sentences


def _check_matrix(sig: Signature, variables: tuple[str, ...], f: Formula) -> None:
    def check_term(t: Term) -> None:
        if isinstance(t, Var):
            if t.name not in variables:
                raise DeclarationError(f"unbound variable {t.name!r}")
        elif isinstance(t, Const):
            if t.name not in sig.constants:
                raise DeclarationError(f"undeclared constant {t.name!r}")
        elif isinstance(t, App):
            if not sig.has_function(t.function):
                raise DeclarationError(f"undeclared function {t.function!r}")
            if sig.function_arity(t.function) != len(t.args):
                raise DeclarationError(
                    f"function {t.function!r} applied to {len(t.args)} arguments"
                )
            for a in t.args:
                check_term(a)
        else:
            raise TypeError(f"not a term: {t!r}")

    def check(g: Formula) -> None:
        if isinstance(g, (Eq, Less)):
            check_term(g.left)
            check_term(g.right)
        elif isinstance(g, Rel):
            if not any(n == g.name for n, _ in sig.relations):
                raise DeclarationError(f"undeclared relation {g.name!r}")
            if sig.relation_arity(g.name) != len(g.args):
                raise DeclarationError(
                    f"relation {g.name!r} applied to {len(g.args)} arguments"
                )
            for a in g.args:
                check_term(a)
        elif isinstance(g, Not):
            check(g.operand)
        elif isinstance(g, (And, Or)):
            for item in g.items:
                check(item)
        elif isinstance(g, (Implies, Iff)):
            check(g.left)
            check(g.right)
        else:
            raise TypeError(f"not a formula: {g!r}")

    check(f)


@dataclass(frozen=True)
class UniversalSentence:
    """forall v1 ... vq . matrix, over a fixed signature.

    ``declared_closure_steps`` records an externally supplied bound on
    how many closure rounds substructure generation needs; it is never
    inferred here and does not take part in equality.
    """

    signature: Signature
    variables: tuple[str, ...]
    matrix: Formula
    declared_closure_steps: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for v in self.variables:
            _check_name(v)
            if v in seen:
                raise DeclarationError(f"variable {v!r} repeated")
            if self.signature.has_symbol(v):
                raise DeclarationError(f"variable {v!r} shadows a declared symbol")
            seen.add(v)
        _check_matrix(self.signature, self.variables, self.matrix)
        if self.declared_closure_steps is not None and self.declared_closure_steps < 1:
            raise DeclarationError("declared closure steps must be >= 1")

    def with_declared_steps(self, steps: int | None) -> "UniversalSentence":
        return replace(self, declared_closure_steps=steps)


# ---------------------------------------------------------------------------
# Printer

_PREC_IFF = 1
_PREC_IMPLIES = 2
_PREC_OR = 3
_PREC_AND = 4
_PREC_NOT = 5
_PREC_ATOM = 6


def term_text(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, App):
        return f"{t.function}({', '.join(term_text(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def _render(f: Formula) -> tuple[str, int]:
    if isinstance(f, Eq):
        return f"{term_text(f.left)} = {term_text(f.right)}", _PREC_ATOM
    if isinstance(f, Less):
        return f"{term_text(f.left)} < {term_text(f.right)}", _PREC_ATOM
    if isinstance(f, Rel):
        return f"{f.name}({', '.join(term_text(a) for a in f.args)})", _PREC_ATOM
    if isinstance(f, Not):
        body, prec = _render(f.operand)
        if prec < _PREC_NOT:
            body = f"({body})"
        return f"!{body}", _PREC_NOT
    if isinstance(f, (And, Or)):
        op, prec = ("&", _PREC_AND) if isinstance(f, And) else ("|", _PREC_OR)
        parts = []
        for item in f.items:
            text, p = _render(item)
            # same-precedence children are explicit nestings: keep parens
            parts.append(f"({text})" if p <= prec else text)
        return f" {op} ".join(parts), prec
    if isinstance(f, (Implies, Iff)):
        op, prec = ("->", _PREC_IMPLIES) if isinstance(f, Implies) else ("<->", _PREC_IFF)
        lt, lp = _render(f.left)
        rt, rp = _render(f.right)
        if lp <= prec:  # right-associative
            lt = f"({lt})"
        if rp < prec:
            rt = f"({rt})"
        return f"{lt} {op} {rt}", prec
    raise TypeError(f"not a formula: {f!r}")


def formula_text(f: Formula) -> str:
    return _render(f)[0]


def sentence_text(sentence: UniversalSentence) -> str:
    """Concrete syntax that reparses to an equal sentence.

    The top-level left spine of conjunctions is laid out one conjunct
    per line; everything else is precedence-printed on one line.
    """
    lines: list[str] = []
    sig = sentence.signature
    for name, arity in sig.functions:
        lines.append(f"fn {name}/{arity}")
    for name, arity in sig.relations:
        lines.append(f"rel {name}/{arity}")
    for name in sig.constants:
        lines.append(f"const {name}")
    head = "forall"
    if sentence.variables:
        head += " " + " ".join(sentence.variables)
    head += " ."
    lines.append(head)

    matrix = sentence.matrix
    if isinstance(matrix, And):
        parts = []
        for item in matrix.items:
            text, prec = _render(item)
            parts.append(f"({text})" if prec <= _PREC_AND else text)
        lines.append("  " + "\n  & ".join(parts))
    else:
        lines.append("  " + _render(matrix)[0])
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Syntactic metrics

def max_term_variables(sig: Signature, depth: int) -> int:
    """Most distinct variables any term of nesting depth <= depth can hold.

    Zero when the signature has no function symbols: bare variables do
    not count, the metric measures what function application can pack
    into a single term.
    """
    arities = [a for _, a in sig.functions]
    if not arities or depth < 1:
        return 0
    best = 1
    for _ in range(depth):
        best = max(a * best for a in arities)
    return best


def term_metrics(sentence: UniversalSentence, steps: int) -> tuple[int, int]:
    """(v, v') at closure bound ``steps``.

    v : max distinct variables over terms of complexity <= steps + 1;
    v': the same maximum over atomic formulas whose arguments are such
    terms.  Both are pure signature arithmetic: the deepest term uses
    the largest arity at every level, and an atom takes one maximal
    term with fresh variables in every slot.
    """
    if steps < 1:
        raise ValueError("closure step bound must be >= 1")
    sig = sentence.signature
    v = max_term_variables(sig, steps + 1)
    rel_arities = [2] + [a for _, a in sig.relations]
    vprime = max(rel_arities) * max(v, 1)
    return v, vprime


def generator_bound(q: int, v: int, vprime: int) -> int:
    return max(3 * v, vprime + v, q * vprime)


def compute_N(sentence: UniversalSentence, steps: int) -> int:
    """Indiscernible-count bound max{3v, v'+v, q*v'} for the sentence."""
    v, vprime = term_metrics(sentence, steps)
    return generator_bound(len(sentence.variables), v, vprime)


# ---------------------------------------------------------------------------
# Combinators


def _substitute_vars(f: Formula, mapping: dict[str, str]) -> Formula:
    def sub_term(t: Term) -> Term:
        if isinstance(t, Var):
            return Var(mapping.get(t.name, t.name))
        if isinstance(t, Const):
            return t
        if isinstance(t, App):
            return App(t.function, tuple(sub_term(a) for a in t.args))
        raise TypeError(f"not a term: {t!r}")

    if isinstance(f, Eq):
        return Eq(sub_term(f.left), sub_term(f.right))
    if isinstance(f, Less):
        return Less(sub_term(f.left), sub_term(f.right))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(sub_term(a) for a in f.args))
    if isinstance(f, Not):
        return Not(_substitute_vars(f.operand, mapping))
    if isinstance(f, (And, Or)):
        cls = type(f)
        return cls(tuple(_substitute_vars(item, mapping) for item in f.items))
    if isinstance(f, (Implies, Iff)):
        cls = type(f)
        return cls(_substitute_vars(f.left, mapping), _substitute_vars(f.right, mapping))
    raise TypeError(f"not a formula: {f!r}")


def _rename_symbols(f: Formula, mapping: dict[str, str]) -> Formula:
    def ren_term(t: Term) -> Term:
        if isinstance(t, Var):
            return t
        if isinstance(t, Const):
            return Const(mapping.get(t.name, t.name))
        if isinstance(t, App):
            return App(mapping.get(t.function, t.function), tuple(ren_term(a) for a in t.args))
        raise TypeError(f"not a term: {t!r}")

    if isinstance(f, Eq):
        return Eq(ren_term(f.left), ren_term(f.right))
    if isinstance(f, Less):
        return Less(ren_term(f.left), ren_term(f.right))
    if isinstance(f, Rel):
        return Rel(mapping.get(f.name, f.name), tuple(ren_term(a) for a in f.args))
    if isinstance(f, Not):
        return Not(_rename_symbols(f.operand, mapping))
    if isinstance(f, (And, Or)):
        cls = type(f)
        return cls(tuple(_rename_symbols(item, mapping) for item in f.items))
    if isinstance(f, (Implies, Iff)):
        cls = type(f)
        return cls(_rename_symbols(f.left, mapping), _rename_symbols(f.right, mapping))
    raise TypeError(f"not a formula: {f!r}")


def conjoin(a: UniversalSentence, b: UniversalSentence) -> UniversalSentence:
    """Universal closure of the conjunction of both matrices.

    Signatures are merged (shared declarations must agree); variable
    lists are merged by name, so a name common to both sentences means
    the same bound variable in the result.
    """
    sig = merge_signatures(a.signature, b.signature)
    variables = a.variables + tuple(v for v in b.variables if v not in a.variables)
    declared = None
    if a.declared_closure_steps is not None and b.declared_closure_steps is not None:
        declared = max(a.declared_closure_steps, b.declared_closure_steps)
    return UniversalSentence(sig, variables, conjunction([a.matrix, b.matrix]), declared)


def _fresh_names(count: int, forbidden: frozenset[str]) -> tuple[str, ...]:
    out: list[str] = []
    for i in range(1, count + 1):
        name = f"x{i}"
        while name in forbidden or name in out:
            name = "x" + name
        out.append(name)
    return tuple(out)


def union_sentence(a: UniversalSentence, b: UniversalSentence, selector: str = "s") -> UniversalSentence:
    """Single universal sentence whose finite models are, up to reducts,
    the disjoint union of both input model classes.

    A fresh 0-ary relation selects which input matrix is in force; the
    functions of the idle side are pinned to first-argument projection
    so they never constrain model existence.  Size-0 models are the one
    caveat: the merged signature carries both sides' constants, so the
    empty structure survives only when both inputs are constant-free.
    """
    rename: dict[str, str] = {}
    a_names = a.signature.symbol_names()
    b_names = b.signature.symbol_names()
    for name in sorted(b_names):
        if name in a_names:
            fresh = name + "_2"
            if fresh in a_names or fresh in b_names or fresh in rename.values():
                raise DeclarationError(
                    f"name collision after renaming {name!r} (internal error)"
                )
            rename[name] = fresh
    b_sig = Signature(
        functions=tuple((rename.get(n, n), k) for n, k in b.signature.functions),
        relations=tuple((rename.get(n, n), k) for n, k in b.signature.relations),
        constants=tuple(rename.get(n, n) for n in b.signature.constants),
    )
    b_matrix = _rename_symbols(b.matrix, rename)

    merged = merge_signatures(a.signature, b_sig)
    sel = selector
    while merged.has_symbol(sel):
        sel = sel + "_2"
        if merged.has_symbol(sel):
            raise DeclarationError("selector name collision (internal error)")
    sig = Signature(
        functions=merged.functions,
        relations=merged.relations + ((sel, 0),),
        constants=merged.constants,
    )

    max_arity = max((k for _, k in sig.functions), default=0)
    q = max(len(a.variables), len(b.variables), max_arity)
    names = _fresh_names(q, sig.symbol_names())
    am = _substitute_vars(a.matrix, dict(zip(a.variables, names)))
    bm = _substitute_vars(b_matrix, dict(zip(b.variables, names)))

    flag = Rel(sel, ())
    clauses: list[Formula] = [Implies(flag, am), Implies(Not(flag), bm)]
    for name, k in b_sig.functions:
        args = tuple(Var(n) for n in names[:k])
        clauses.append(Implies(flag, Eq(App(name, args), Var(names[0]))))
    for name, k in a.signature.functions:
        args = tuple(Var(n) for n in names[:k])
        clauses.append(Implies(Not(flag), Eq(App(name, args), Var(names[0]))))

    declared = None
    if a.declared_closure_steps is not None and b.declared_closure_steps is not None:
        declared = max(a.declared_closure_steps, b.declared_closure_steps) + 1
    return UniversalSentence(sig, names, conjunction(clauses), declared)
