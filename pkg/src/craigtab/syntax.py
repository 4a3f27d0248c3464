"""First-order syntax: terms, literals, clauses, formulas, substitutions.

All values are immutable after construction and hashable; the operations in
this module are pure functions, so everything here is safe to share across
threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Union

POS = "+"
NEG = "-"

TRUE_NAME = "$true"
FALSE_NAME = "$false"
EQUALITY = "="

_KINDS = ("function", "predicate")


class SyntaxError_(ValueError):
    """Malformed syntactic object (bad arity, reserved name, ...)."""


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    kind: str  # "function" | "predicate"

    def __post_init__(self):
        if not self.name:
            raise SyntaxError_("empty symbol name")
        if self.name in (TRUE_NAME, FALSE_NAME):
            raise SyntaxError_(f"reserved name {self.name!r} cannot be a symbol")
        if self.arity < 0:
            raise SyntaxError_(f"negative arity for {self.name!r}")
        if self.kind not in _KINDS:
            raise SyntaxError_(f"bad symbol kind {self.kind!r}")
        if self.name == EQUALITY and (self.kind != "predicate" or self.arity != 2):
            raise SyntaxError_("'=' is reserved for the binary equality predicate")

    def __repr__(self):
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fun: Symbol
    args: tuple = ()

    def __post_init__(self):
        if self.fun.kind != "function":
            raise SyntaxError_(f"{self.fun!r} is not a function symbol")
        if len(self.args) != self.fun.arity:
            raise SyntaxError_(f"{self.fun!r} applied to {len(self.args)} arguments")

    def __str__(self):
        return render_term(self)


Term = Union[Var, App]


class Formula:
    """Base class; concrete cases below."""

    def __str__(self):
        return render(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return TRUE_NAME


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self):
        return FALSE_NAME


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    pred: Symbol
    args: tuple = ()

    def __post_init__(self):
        if self.pred.kind != "predicate":
            raise SyntaxError_(f"{self.pred!r} is not a predicate symbol")
        if len(self.args) != self.pred.arity:
            raise SyntaxError_(f"{self.pred!r} applied to {len(self.args)} arguments")

    def __repr__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Not(Formula):
    sub: Formula

    def __repr__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return render(self)


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def formula(self) -> Formula:
        return self.atom if self.positive else Not(self.atom)

    def __str__(self):
        return render(self.formula())


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals; order is significant. Empty clause = falsum."""

    literals: tuple = ()

    def formula(self) -> Formula:
        return or_all(l.formula() for l in self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self):
        return len(self.literals)

    def __str__(self):
        if not self.literals:
            return FALSE_NAME
        return " | ".join(str(l) for l in self.literals)


# A clausal formula is just a tuple of clauses; its formula reading is the
# conjunction of the clause disjunctions.
ClausalFormula = tuple


def clauses_formula(clauses) -> Formula:
    return and_all(c.formula() for c in clauses)


# ---------------------------------------------------------------------------
# Convenience constructors (used heavily by tests and demos)

def fn(name: str, *args: Term) -> App:
    return App(Symbol(name, len(args), "function"), tuple(args))


def const(name: str) -> App:
    return fn(name)


def atom(name: str, *args: Term) -> Atom:
    return Atom(Symbol(name, len(args), "predicate"), tuple(args))


def lit(name: str, *args: Term) -> Literal:
    return Literal(atom(name, *args), True)


def nlit(name: str, *args: Term) -> Literal:
    return Literal(atom(name, *args), False)


def complement(l: Literal) -> Literal:
    """Flip the sign of a literal; an involution."""
    return Literal(l.atom, not l.positive)


def and_all(items, empty: Formula = Top()) -> Formula:
    """Left-to-right conjunction of the items; `empty` if there are none."""
    out = None
    for f in items:
        out = f if out is None else And(out, f)
    return empty if out is None else out


def or_all(items, empty: Formula = Bot()) -> Formula:
    """Left-to-right disjunction of the items; `empty` if there are none."""
    out = None
    for f in items:
        out = f if out is None else Or(out, f)
    return empty if out is None else out


# ---------------------------------------------------------------------------
# Vocabulary accessors

class Vocabulary(NamedTuple):
    free_vars: frozenset
    funs: frozenset            # of Symbol
    preds: frozenset           # of (Symbol, "+"|"-")
    lits: frozenset            # of (Atom, "+"|"-")


def _walk_term(t: Term, vars_out: set, funs_out: set):
    if isinstance(t, Var):
        vars_out.add(t.name)
    else:
        funs_out.add(t.fun)
        for a in t.args:
            _walk_term(a, vars_out, funs_out)


def _walk_formula(f: Formula, pol: bool, bound: frozenset,
                  vars_out: set, funs_out: set, preds_out: set, lits_out: set):
    if isinstance(f, (Top, Bot)):
        return
    if isinstance(f, Atom):
        sign = POS if pol else NEG
        preds_out.add((f.pred, sign))
        lits_out.add((f, sign))
        tv: set = set()
        for a in f.args:
            _walk_term(a, tv, funs_out)
        vars_out.update(tv - bound)
        return
    if isinstance(f, Not):
        _walk_formula(f.sub, not pol, bound, vars_out, funs_out, preds_out, lits_out)
        return
    if isinstance(f, (And, Or)):
        _walk_formula(f.left, pol, bound, vars_out, funs_out, preds_out, lits_out)
        _walk_formula(f.right, pol, bound, vars_out, funs_out, preds_out, lits_out)
        return
    if isinstance(f, Implies):
        # A => B reads as ~A | B, so the left side flips polarity.
        _walk_formula(f.left, not pol, bound, vars_out, funs_out, preds_out, lits_out)
        _walk_formula(f.right, pol, bound, vars_out, funs_out, preds_out, lits_out)
        return
    if isinstance(f, Iff):
        # (A => B) & (B => A): both sides occur with both polarities.
        for sub in (f.left, f.right):
            _walk_formula(sub, pol, bound, vars_out, funs_out, preds_out, lits_out)
            _walk_formula(sub, not pol, bound, vars_out, funs_out, preds_out, lits_out)
        return
    if isinstance(f, (Forall, Exists)):
        _walk_formula(f.body, pol, bound | {f.var}, vars_out, funs_out, preds_out, lits_out)
        return
    raise TypeError(f"not a formula: {f!r}")


def vocabulary(e) -> Vocabulary:
    """Free variables, function symbols, predicate- and literal-polarity pairs."""
    vars_out: set = set()
    funs_out: set = set()
    preds_out: set = set()
    lits_out: set = set()
    if isinstance(e, (Var, App)):
        _walk_term(e, vars_out, funs_out)
    elif isinstance(e, Literal):
        _walk_formula(e.formula(), True, frozenset(), vars_out, funs_out, preds_out, lits_out)
    elif isinstance(e, Clause):
        _walk_formula(e.formula(), True, frozenset(), vars_out, funs_out, preds_out, lits_out)
    else:
        _walk_formula(e, True, frozenset(), vars_out, funs_out, preds_out, lits_out)
    return Vocabulary(frozenset(vars_out), frozenset(funs_out),
                      frozenset(preds_out), frozenset(lits_out))


def free_vars(e) -> frozenset:
    return vocabulary(e).free_vars


def funs(e) -> frozenset:
    return vocabulary(e).funs


def pred_polarities(f) -> frozenset:
    return vocabulary(f).preds


def lit_polarities(f) -> frozenset:
    return vocabulary(f).lits


def preds_plain(f) -> frozenset:
    return frozenset(p for p, _ in vocabulary(f).preds)


def atoms_of(e) -> tuple:
    """All distinct atoms of a formula/literal/clause set, in first-occurrence order."""
    seen: dict = {}

    def walk(f):
        if isinstance(f, Atom):
            seen.setdefault(f, None)
        elif isinstance(f, Not):
            walk(f.sub)
        elif isinstance(f, (And, Or, Implies, Iff)):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (Forall, Exists)):
            walk(f.body)

    if isinstance(e, Clause):
        for l in e:
            seen.setdefault(l.atom, None)
    elif isinstance(e, tuple):
        for c in e:
            for l in c:
                seen.setdefault(l.atom, None)
    else:
        walk(e)
    return tuple(seen)


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def is_ground(e) -> bool:
    return not free_vars(e)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


# ---------------------------------------------------------------------------
# Substitutions

class Substitution:
    """Finite map from variable names to terms; identity bindings are dropped."""

    __slots__ = ("_map",)

    def __init__(self, bindings: Mapping[str, Term] | None = None):
        m = {}
        for x, t in (bindings or {}).items():
            if isinstance(t, Var) and t.name == x:
                continue
            m[x] = t
        self._map = m

    def __getitem__(self, x: str) -> Term:
        return self._map.get(x, Var(x))

    def __contains__(self, x: str) -> bool:
        return x in self._map

    def __eq__(self, other):
        return isinstance(other, Substitution) and self._map == other._map

    def __len__(self):
        return len(self._map)

    def __repr__(self):
        inner = ", ".join(f"{x} -> {render_term(t)}"
                          for x, t in sorted(self._map.items()))
        return "{" + inner + "}"

    def items(self):
        return self._map.items()

    @property
    def dom(self) -> frozenset:
        return frozenset(self._map)

    @property
    def rng(self) -> frozenset:
        return frozenset(self._map.values())

    def is_ground(self) -> bool:
        return all(is_ground(t) for t in self._map.values())

    def is_injective(self) -> bool:
        return len(set(self._map.values())) == len(self._map)

    def restrict(self, names) -> "Substitution":
        keep = set(names)
        return Substitution({x: t for x, t in self._map.items() if x in keep})


EMPTY_SUBST = Substitution()


def apply(s: Substitution, e):
    """Simultaneously replace variables in a term, literal, clause or
    quantifier-free formula."""
    if isinstance(e, Var):
        return s[e.name]
    if isinstance(e, App):
        return App(e.fun, tuple(apply(s, a) for a in e.args))
    if isinstance(e, Atom):
        return Atom(e.pred, tuple(apply(s, a) for a in e.args))
    if isinstance(e, Literal):
        return Literal(apply(s, e.atom), e.positive)
    if isinstance(e, Clause):
        return Clause(tuple(apply(s, l) for l in e.literals))
    if isinstance(e, (Top, Bot)):
        return e
    if isinstance(e, Not):
        return Not(apply(s, e.sub))
    if isinstance(e, (And, Or, Implies, Iff)):
        return type(e)(apply(s, e.left), apply(s, e.right))
    if isinstance(e, (Forall, Exists)):
        raise ValueError("apply expects a quantifier-free formula")
    raise TypeError(f"cannot apply a substitution to {e!r}")


def substitute_free(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Replace free variable occurrences in a formula (quantifiers allowed).

    The replacement terms must not contain variables that could be captured;
    in this package the terms are always ground.
    """

    def walk(g, shadowed: frozenset):
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, Atom):
            live = {x: t for x, t in mapping.items() if x not in shadowed}
            return apply(Substitution(live), g)
        if isinstance(g, Not):
            return Not(walk(g.sub, shadowed))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(walk(g.left, shadowed), walk(g.right, shadowed))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, walk(g.body, shadowed | {g.var}))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, frozenset())


def compose(s: Substitution, g: Substitution) -> Substitution:
    """The substitution whose application equals applying s, then g."""
    out = {x: apply(g, t) for x, t in s.items()}
    for x, t in g.items():
        if x not in out:
            out[x] = t
    return Substitution(out)


def replace_term(e, old: Term, new: Term):
    """Replace every occurrence of term `old` in e with `new`."""
    if isinstance(e, (Var, App)):
        if e == old:
            return new
        if isinstance(e, App):
            return App(e.fun, tuple(replace_term(a, old, new) for a in e.args))
        return e
    if isinstance(e, Atom):
        return Atom(e.pred, tuple(replace_term(a, old, new) for a in e.args))
    if isinstance(e, Literal):
        return Literal(replace_term(e.atom, old, new), e.positive)
    if isinstance(e, Clause):
        return Clause(tuple(replace_term(l, old, new) for l in e.literals))
    if isinstance(e, (Top, Bot)):
        return e
    if isinstance(e, Not):
        return Not(replace_term(e.sub, old, new))
    if isinstance(e, (And, Or, Implies, Iff)):
        return type(e)(replace_term(e.left, old, new), replace_term(e.right, old, new))
    raise TypeError(f"cannot replace terms in {e!r}")


def inverse_apply(s: Substitution, e):
    """Replace range-maximal occurrences of range terms of an injective
    substitution by their preimage variables.

    Range terms are processed in strictly decreasing term size (ties broken by
    rendered form), so a superterm is always replaced before its strict
    subterms.
    """
    if not s.is_injective():
        raise ValueError("inverse application requires an injective substitution")
    pairs = sorted(s.items(), key=lambda xt: (-term_size(xt[1]), render_term(xt[1])))
    for x, t in pairs:
        e = replace_term(e, t, Var(x))
    return e


# ---------------------------------------------------------------------------
# Truth-value simplification

def simplify_tv(f: Formula) -> Formula:
    """Fixpoint of F&$false=$false, F|$true=$true, F&$true=F, F|$false=F,
    applied modulo commutativity. No other rewriting."""
    if isinstance(f, And):
        l, r = simplify_tv(f.left), simplify_tv(f.right)
        if isinstance(l, Bot) or isinstance(r, Bot):
            return Bot()
        if isinstance(l, Top):
            return r
        if isinstance(r, Top):
            return l
        return And(l, r)
    if isinstance(f, Or):
        l, r = simplify_tv(f.left), simplify_tv(f.right)
        if isinstance(l, Top) or isinstance(r, Top):
            return Top()
        if isinstance(l, Bot):
            return r
        if isinstance(r, Bot):
            return l
        return Or(l, r)
    if isinstance(f, Not):
        return Not(simplify_tv(f.sub))
    if isinstance(f, (Implies, Iff)):
        return type(f)(simplify_tv(f.left), simplify_tv(f.right))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, simplify_tv(f.body))
    return f


# ---------------------------------------------------------------------------
# Rendering (canonical text form; the parser in parsing.py reads it back)

def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.fun.name
    return f"{t.fun.name}({', '.join(render_term(a) for a in t.args)})"


def _render_atom(a: Atom) -> str:
    if a.pred.name == EQUALITY:
        return f"{render_term(a.args[0])} = {render_term(a.args[1])}"
    if not a.args:
        return a.pred.name
    return f"{a.pred.name}({', '.join(render_term(x) for x in a.args)})"


_BIN_OPS = {And: "&", Or: "|", Implies: "=>", Iff: "<=>"}


def render(f: Formula) -> str:
    """Canonical fully parenthesized text form: every binary operand that is
    itself a binary connective gets explicit parentheses."""
    if isinstance(f, Top):
        return TRUE_NAME
    if isinstance(f, Bot):
        return FALSE_NAME
    if isinstance(f, Atom):
        return _render_atom(f)
    if isinstance(f, Not):
        inner = render(f.sub)
        if isinstance(f.sub, (And, Or, Implies, Iff, Forall, Exists)) or (
                isinstance(f.sub, Atom) and f.sub.pred.name == EQUALITY):
            return f"~({inner})"
        return f"~{inner}"
    if isinstance(f, (And, Or, Implies, Iff)):
        op = _BIN_OPS[type(f)]

        def side(sub):
            s = render(sub)
            return f"({s})" if isinstance(sub, (And, Or, Implies, Iff)) else s

        return f"{side(f.left)} {op} {side(f.right)}"
    if isinstance(f, (Forall, Exists)):
        q = "!" if isinstance(f, Forall) else "?"
        body = render(f.body)
        if isinstance(f.body, (And, Or, Implies, Iff)):
            body = f"({body})"
        return f"{q}[{f.var}]: {body}"
    raise TypeError(f"not a formula: {f!r}")
