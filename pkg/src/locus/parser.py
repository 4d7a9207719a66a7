"""Concrete syntax for universal sentences.

Grammar (UTF-8 text, ``#`` starts a line comment)::

    sentence  := decl* block
    decl      := "fn" NAME "/" INT | "rel" NAME "/" INT | "const" NAME
    block     := "forall" NAME* ["in" NAME] "." matrix
    matrix    := iff
    iff       := impl ["<->" iff]
    impl      := or ["->" impl]
    or        := and ("|" and)*
    and       := unary ("&" unary)*
    unary     := "!" unary | "(" matrix ")" | atom
    atom      := NAME "(" term ("," term)* ")"          relation
               | NAME "(" ")"                           0-ary relation
               | term ("=" | "<" | "<=") term
    term      := NAME ["(" term ("," term)* ")"]

``t1 <= t2`` is sugar for ``t1 < t2 | t1 = t2``.  ``forall x y in P .``
bounds every quantified variable by the unary relation P: the matrix is
wrapped as ``(P(x) & P(y)) -> ...``.  Both sugars disappear at parse
time; the printer emits the desugared forms.

``=`` and ``<`` are built in and cannot be declared.  The words
``fn rel const forall in`` are reserved.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    And,
    App,
    Const,
    DeclarationError,
    Eq,
    Formula,
    Iff,
    Implies,
    Less,
    Not,
    Or,
    Rel,
    RESERVED_WORDS,
    Signature,
    Term,
    UniversalSentence,
    Var,
    conjunction,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_PUNCT = [
    ("<->", "IFF"),
    ("->", "ARROW"),
    ("<=", "LE"),
    ("<", "LT"),
    ("=", "EQ"),
    ("!", "BANG"),
    ("&", "AMP"),
    ("|", "PIPE"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    (",", "COMMA"),
    (".", "DOT"),
    ("/", "SLASH"),
]


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "WORD" if word in RESERVED_WORDS else "NAME"
            tokens.append(_Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for lit, kind in _PUNCT:
            if text.startswith(lit, i):
                tokens.append(_Token(kind, lit, line, col))
                col += len(lit)
                i += len(lit)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.functions: list[tuple[str, int]] = []
        self.relations: list[tuple[str, int]] = []
        self.constants: list[str] = []
        self.variables: tuple[str, ...] = ()

    # -- token plumbing

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            found = repr(tok.text) if tok.text else "end of input"
            raise ParseError(f"expected {what}, found {found}", tok.line, tok.column)
        return self.next()

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    # -- declarations

    def _declared(self, name: str) -> bool:
        return (
            name in (n for n, _ in self.functions)
            or name in (n for n, _ in self.relations)
            or name in self.constants
        )

    def parse_sentence(self) -> UniversalSentence:
        while True:
            tok = self.peek()
            if tok.kind == "WORD" and tok.text in ("fn", "rel", "const"):
                self.next()
                name_tok = self.expect("NAME", "a symbol name")
                name = name_tok.text
                if self._declared(name):
                    raise ParseError(f"symbol {name!r} declared twice", name_tok.line, name_tok.column)
                if tok.text == "const":
                    self.constants.append(name)
                    continue
                self.expect("SLASH", "'/'")
                arity_tok = self.expect("INT", "an arity")
                arity = int(arity_tok.text)
                if tok.text == "fn":
                    if arity < 1:
                        raise ParseError("function arity must be >= 1", arity_tok.line, arity_tok.column)
                    self.functions.append((name, arity))
                else:
                    self.relations.append((name, arity))
                continue
            break

        tok = self.peek()
        if tok.kind != "WORD" or tok.text != "forall":
            raise self.fail("expected 'forall'")
        self.next()
        names: list[str] = []
        bound: str | None = None
        while self.peek().kind == "NAME":
            names.append(self.next().text)
        if self.peek().kind == "WORD" and self.peek().text == "in":
            tok = self.next()
            if not names:
                raise ParseError("'in' bound without quantified variables", tok.line, tok.column)
            bound_tok = self.expect("NAME", "a relation name")
            bound = bound_tok.text
            if (bound, 1) not in self.relations:
                raise ParseError(f"{bound!r} is not a declared unary relation", bound_tok.line, bound_tok.column)
        self.expect("DOT", "'.'")
        seen: set[str] = set()
        for v in names:
            if v in seen:
                tok = self.peek()
                raise ParseError(f"variable {v!r} repeated", tok.line, tok.column)
            seen.add(v)
        self.variables = tuple(names)

        matrix = self.parse_matrix()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.column)
        if bound is not None:
            guard = conjunction([Rel(bound, (Var(v),)) for v in names])
            matrix = Implies(guard, matrix)
        sig = Signature(
            functions=tuple(self.functions),
            relations=tuple(self.relations),
            constants=tuple(self.constants),
        )
        try:
            return UniversalSentence(sig, self.variables, matrix)
        except DeclarationError as exc:
            raise ParseError(str(exc), 1, 1) from exc

    # -- formulas

    def parse_matrix(self) -> Formula:
        return self.parse_iff()

    def parse_iff(self) -> Formula:
        left = self.parse_impl()
        if self.peek().kind == "IFF":
            self.next()
            return Iff(left, self.parse_iff())
        return left

    def parse_impl(self) -> Formula:
        left = self.parse_or()
        if self.peek().kind == "ARROW":
            self.next()
            return Implies(left, self.parse_impl())
        return left

    def parse_or(self) -> Formula:
        items = [self.parse_and()]
        while self.peek().kind == "PIPE":
            self.next()
            items.append(self.parse_and())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def parse_and(self) -> Formula:
        items = [self.parse_unary()]
        while self.peek().kind == "AMP":
            self.next()
            items.append(self.parse_unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "BANG":
            self.next()
            return Not(self.parse_unary())
        if tok.kind == "LPAREN":
            self.next()
            inner = self.parse_matrix()
            self.expect("RPAREN", "')'")
            return inner
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NAME":
            for name, arity in self.relations:
                if name == tok.text:
                    self.next()
                    self.expect("LPAREN", "'('")
                    args: list[Term] = []
                    if self.peek().kind != "RPAREN":
                        args.append(self.parse_term())
                        while self.peek().kind == "COMMA":
                            self.next()
                            args.append(self.parse_term())
                    self.expect("RPAREN", "')'")
                    if len(args) != arity:
                        raise ParseError(
                            f"relation {name!r} expects {arity} arguments, got {len(args)}",
                            tok.line,
                            tok.column,
                        )
                    return Rel(name, tuple(args))
        left = self.parse_term()
        op = self.peek()
        if op.kind == "EQ":
            self.next()
            return Eq(left, self.parse_term())
        if op.kind == "LT":
            self.next()
            return Less(left, self.parse_term())
        if op.kind == "LE":
            self.next()
            right = self.parse_term()
            return Or((Less(left, right), Eq(left, right)))
        raise ParseError("expected '=', '<' or '<=' after term", op.line, op.column)

    # -- terms

    def parse_term(self) -> Term:
        tok = self.expect("NAME", "a term")
        name = tok.text
        for fname, arity in self.functions:
            if fname == name:
                self.expect("LPAREN", f"'(' after function {name!r}")
                args = [self.parse_term()]
                while self.peek().kind == "COMMA":
                    self.next()
                    args.append(self.parse_term())
                self.expect("RPAREN", "')'")
                if len(args) != arity:
                    raise ParseError(
                        f"function {name!r} expects {arity} arguments, got {len(args)}",
                        tok.line,
                        tok.column,
                    )
                return App(name, tuple(args))
        if name in self.constants:
            return Const(name)
        if name in self.variables:
            return Var(name)
        for rname, _ in self.relations:
            if rname == name:
                raise ParseError(f"relation {name!r} used in term position", tok.line, tok.column)
        raise ParseError(f"undeclared symbol {name!r}", tok.line, tok.column)


def parse_sentence(text: str) -> UniversalSentence:
    """Parse concrete syntax into a sentence; positions in errors are 1-based."""
    return _Parser(text).parse_sentence()
