"""Parser for the formula grammar.

Grammar (UTF-8 text, '%' starts a to-end-of-line comment):

    formula := "$true" | "$false" | atom | "~" formula
             | formula "&" formula | formula "|" formula
             | formula "=>" formula | formula "<=>" formula
             | ("!"|"?") "[" Var ("," Var)* "]" ":" formula
             | "(" formula ")"
    atom    := pred [ "(" term ("," term)* ")" ]  |  term "=" term
    term    := Var | fun [ "(" term ("," term)* ")" ]

Precedence ~ > & > | > => > <=>; & and | are left-associative, => and <=>
right-associative; a quantifier or ~ scopes over the immediately following
unit. Var matches [A-Z_][A-Za-z0-9_]*, fun/pred match [a-z][A-Za-z0-9_]*.
The infix "=" form is accepted only in equality mode. Arity is global per
symbol name: using one name with two arities (or as both function and
predicate) is an error.
"""
from __future__ import annotations

import re

from .syntax import (Atom, App, Bot, Clause, EQUALITY, Exists, Forall, Formula,
                     Iff, Implies, Literal, Not, Or, And, Symbol, Term, Top, Var)

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<name>[A-Za-z_$][A-Za-z0-9_]*)
  | (?P<op><=>|=>|=|~|&|\||!|\?|\(|\)|\[|\]|,|:)
""", re.VERBOSE)

_NAME_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_]*")
_FUN_RE = re.compile(r"[a-z][A-Za-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class _Token:
    __slots__ = ("text", "line", "col")

    def __init__(self, text, line, col):
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        chunk = m.group(0)
        if m.lastgroup != "ws":
            tokens.append(_Token(chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("", line, col))  # end marker
    return tokens


def _is_var_name(name: str) -> bool:
    return bool(name) and (name[0].isupper() or name[0] == "_")


class _Parser:
    def __init__(self, text: str, equality: bool, symbols: dict | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.equality = equality
        # name -> (kind, arity); shared across calls when the caller passes it in
        self.symbols = symbols if symbols is not None else {}

    # -- token plumbing ----------------------------------------------------
    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.next()
        if t.text != text:
            got = t.text or "end of input"
            raise ParseError(f"expected {text!r}, found {got!r}", t.line, t.col)
        return t

    def error(self, message: str, tok: _Token | None = None):
        t = tok or self.peek()
        raise ParseError(message, t.line, t.col)

    def symbol(self, name: str, arity: int, kind: str, tok: _Token) -> Symbol:
        if name == EQUALITY:
            return Symbol(EQUALITY, 2, "predicate")
        prev = self.symbols.get(name)
        if prev is not None and prev != (kind, arity):
            self.error(f"symbol {name!r} used as {kind}/{arity} "
                       f"but previously as {prev[0]}/{prev[1]}", tok)
        self.symbols[name] = (kind, arity)
        return Symbol(name, arity, kind)

    # -- grammar -----------------------------------------------------------
    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek().text == "<=>":
            self.next()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek().text == "=>":
            self.next()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek().text == "|":
            self.next()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek().text == "&":
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        t = self.peek()
        if t.text == "~":
            self.next()
            return Not(self.unary())
        if t.text in ("!", "?"):
            return self.quantified()
        if t.text == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t.text == "$true":
            self.next()
            return Top()
        if t.text == "$false":
            self.next()
            return Bot()
        return self.atom()

    def quantified(self) -> Formula:
        q = self.next().text
        self.expect("[")
        names = [self.var_name()]
        while self.peek().text == ",":
            self.next()
            names.append(self.var_name())
        self.expect("]")
        self.expect(":")
        body = self.unary()
        cls = Forall if q == "!" else Exists
        for name in reversed(names):
            body = cls(name, body)
        return body

    def var_name(self) -> str:
        t = self.next()
        if not _NAME_RE.fullmatch(t.text or "") or not _is_var_name(t.text):
            self.error(f"variable expected, found {t.text or 'end of input'!r}", t)
        return t.text

    def atom(self) -> Formula:
        t = self.peek()
        if not _NAME_RE.fullmatch(t.text or ""):
            self.error(f"formula expected, found {t.text or 'end of input'!r}", t)
        if _is_var_name(t.text):
            # A variable in formula position can only be the left side of an
            # equality atom.
            lhs = self.term()
            eq = self.peek()
            if eq.text != "=":
                self.error(f"predicate expected, found variable {t.text!r}", t)
            return self.equality_rhs(lhs, self.next())
        head = self.next()
        if not _FUN_RE.fullmatch(head.text):
            self.error(f"predicate expected, found {head.text!r}", head)
        args = []
        if self.peek().text == "(":
            self.next()
            args.append(self.term())
            while self.peek().text == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
        if self.peek().text == "=":
            # The head was really a function term on the left of an equality.
            sym = self.symbol(head.text, len(args), "function", head)
            return self.equality_rhs(App(sym, tuple(args)), self.next())
        sym = self.symbol(head.text, len(args), "predicate", head)
        return Atom(sym, tuple(args))

    def equality_rhs(self, lhs: Term, eq_tok: _Token) -> Atom:
        if not self.equality:
            self.error("'=' requires equality mode", eq_tok)
        rhs = self.term()
        return Atom(Symbol(EQUALITY, 2, "predicate"), (lhs, rhs))

    def term(self) -> Term:
        t = self.next()
        if not _NAME_RE.fullmatch(t.text or ""):
            self.error(f"term expected, found {t.text or 'end of input'!r}", t)
        if _is_var_name(t.text):
            return Var(t.text)
        if not _FUN_RE.fullmatch(t.text):
            self.error(f"{t.text!r} is not allowed in terms", t)
        args = []
        if self.peek().text == "(":
            self.next()
            args.append(self.term())
            while self.peek().text == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
        sym = self.symbol(t.text, len(args), "function", t)
        return App(sym, tuple(args))


def parse(text: str, equality: bool = False, symbols: dict | None = None) -> Formula:
    """Parse a formula; raises ParseError with line/column on bad input."""
    p = _Parser(text, equality, symbols)
    f = p.formula()
    end = p.peek()
    if end.text:
        p.error(f"unexpected trailing input {end.text!r}", end)
    return f


def parse_term(text: str, symbols: dict | None = None) -> Term:
    p = _Parser(text, False, symbols)
    t = p.term()
    end = p.peek()
    if end.text:
        p.error(f"unexpected trailing input {end.text!r}", end)
    return t


def parse_literal(text: str, equality: bool = False, symbols: dict | None = None) -> Literal:
    f = parse(text, equality=equality, symbols=symbols)
    if isinstance(f, Atom):
        return Literal(f, True)
    if isinstance(f, Not) and isinstance(f.sub, Atom):
        return Literal(f.sub, False)
    raise ParseError("literal expected", 1, 1)


def parse_clause(text: str, equality: bool = False, symbols: dict | None = None) -> Clause:
    """A clause string is a '|'-joined list of literals, or $false for the
    empty clause."""
    if text.strip() == "$false":
        return Clause(())
    f = parse(text, equality=equality, symbols=symbols)
    lits = []

    def flatten(g):
        if isinstance(g, Or):
            flatten(g.left)
            flatten(g.right)
        elif isinstance(g, Atom):
            lits.append(Literal(g, True))
        elif isinstance(g, Not) and isinstance(g.sub, Atom):
            lits.append(Literal(g.sub, False))
        else:
            raise ParseError("clause expected (disjunction of literals)", 1, 1)

    flatten(f)
    return Clause(tuple(lits))
