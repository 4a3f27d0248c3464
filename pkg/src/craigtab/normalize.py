"""Normal forms and interpolation-input preparation.

Pipeline pieces: NNF conversion, renaming bound variables apart, prenexing
(quantifiers pulled outward innermost-first, left-to-right), Skolemization
(each existential under a universal prefix becomes a fresh function of exactly
those universals, in textual order), and clausification by plain distribution.
Fresh Skolem names come from reserved namespaces: sk1, sk2, ... for the first
input, skg1, skg2, ... for the second.
"""
from __future__ import annotations

from dataclasses import dataclass

from .syntax import (And, App, Atom, Bot, Clause, EQUALITY, Exists, Forall,
                     Formula, Iff, Implies, Literal, Not, Or, Substitution,
                     Symbol, Top, Var, and_all, apply, free_vars, funs,
                     preds_plain, simplify_tv, vocabulary)


class InputError(ValueError):
    """Ill-formed interpolation input (free variables, namespace clash, ...)."""


# ---------------------------------------------------------------------------
# NNF

def eliminate_impl(f: Formula) -> Formula:
    """Rewrite => and <=> in terms of ~, &, |."""
    if isinstance(f, Implies):
        return Or(Not(eliminate_impl(f.left)), eliminate_impl(f.right))
    if isinstance(f, Iff):
        l, r = eliminate_impl(f.left), eliminate_impl(f.right)
        return And(Or(Not(l), r), Or(Not(r), l))
    if isinstance(f, Not):
        return Not(eliminate_impl(f.sub))
    if isinstance(f, (And, Or)):
        return type(f)(eliminate_impl(f.left), eliminate_impl(f.right))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, eliminate_impl(f.body))
    return f


def _push_neg(f: Formula, positive: bool) -> Formula:
    if isinstance(f, Top):
        return f if positive else Bot()
    if isinstance(f, Bot):
        return f if positive else Top()
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _push_neg(f.sub, not positive)
    if isinstance(f, And):
        cls = And if positive else Or
        return cls(_push_neg(f.left, positive), _push_neg(f.right, positive))
    if isinstance(f, Or):
        cls = Or if positive else And
        return cls(_push_neg(f.left, positive), _push_neg(f.right, positive))
    if isinstance(f, Forall):
        cls = Forall if positive else Exists
        return cls(f.var, _push_neg(f.body, positive))
    if isinstance(f, Exists):
        cls = Exists if positive else Forall
        return cls(f.var, _push_neg(f.body, positive))
    raise TypeError(f"not an implication-free formula: {f!r}")


def nnf(f: Formula) -> Formula:
    """Negation normal form: negation only on atoms, no => or <=>, truth
    values simplified away where the four tv rules apply."""
    return simplify_tv(_push_neg(eliminate_impl(f), True))


# ---------------------------------------------------------------------------
# Renaming apart and prenexing

class _Fresh:
    def __init__(self, used):
        self.used = set(used)

    def fresh(self, base: str) -> str:
        if base not in self.used:
            self.used.add(base)
            return base
        n = 1
        while f"{base}_{n}" in self.used:
            n += 1
        name = f"{base}_{n}"
        self.used.add(name)
        return name


def rename_apart(f: Formula) -> Formula:
    """Rename bound variables so that all binders use pairwise distinct names
    that also differ from every free variable."""
    fresh = _Fresh(free_vars(f))

    def walk(g, env):
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, Atom):
            s = Substitution({x: Var(y) for x, y in env.items()})
            return apply(s, g)
        if isinstance(g, Not):
            return Not(walk(g.sub, env))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(walk(g.left, env), walk(g.right, env))
        if isinstance(g, (Forall, Exists)):
            new = fresh.fresh(g.var)
            env2 = dict(env)
            env2[g.var] = new
            return type(g)(new, walk(g.body, env2))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, {})


def prenex(f: Formula):
    """Split an NNF formula with distinct bound variables into a quantifier
    prefix and a quantifier-free matrix.

    Returns (prefix, matrix) where prefix is a list of ("!"|"?", var name)."""

    def walk(g):
        if isinstance(g, (Top, Bot, Atom)):
            return [], g
        if isinstance(g, Not):
            prefix, m = walk(g.sub)
            if prefix:
                raise ValueError("prenex expects NNF input")
            return [], Not(m)
        if isinstance(g, (And, Or)):
            p1, m1 = walk(g.left)
            p2, m2 = walk(g.right)
            return p1 + p2, type(g)(m1, m2)
        if isinstance(g, Forall):
            p, m = walk(g.body)
            return [("!", g.var)] + p, m
        if isinstance(g, Exists):
            p, m = walk(g.body)
            return [("?", g.var)] + p, m
        raise TypeError(f"prenex expects an NNF formula, got {g!r}")

    return walk(f)


# ---------------------------------------------------------------------------
# Skolemization

def skolemize(f: Formula, namespace: str = "sk", forbidden=()):
    """Skolemize a sentence.

    Returns (matrix, universals, skolems): a quantifier-free matrix, the tuple
    of universal variable names, and the tuple of fresh Skolem function
    symbols, such that f is equivalent to existentially quantifying the
    skolems over the universal closure of the matrix.
    """
    if free_vars(f):
        raise InputError(f"not a sentence, free variables: {sorted(free_vars(f))}")
    g = rename_apart(nnf(f))
    prefix, matrix = prenex(g)
    taken = {s.name for s in funs(f)} | {p.name for p in preds_plain(f)} | set(forbidden)
    universals: list[str] = []
    skolems: list[Symbol] = []
    subst = {}
    n = 0
    for q, x in prefix:
        if q == "!":
            universals.append(x)
        else:
            n += 1
            name = f"{namespace}{n}"
            if name in taken:
                raise InputError(f"Skolem name {name!r} collides with an input symbol")
            sym = Symbol(name, len(universals), "function")
            skolems.append(sym)
            subst[x] = App(sym, tuple(Var(u) for u in universals))
    matrix = apply(Substitution(subst), matrix)
    return matrix, tuple(universals), tuple(skolems)


# ---------------------------------------------------------------------------
# Clausification

def clausify(matrix: Formula):
    """Distribute an NNF quantifier-free formula to a tuple of clauses.

    Equivalence-preserving; tautological clauses and duplicate literals inside
    a clause are removed.
    """

    def walk(g) -> list:
        if isinstance(g, Top):
            return []
        if isinstance(g, Bot):
            return [[]]
        if isinstance(g, Atom):
            return [[Literal(g, True)]]
        if isinstance(g, Not):
            if not isinstance(g.sub, Atom):
                raise ValueError("clausify expects an NNF matrix")
            return [[Literal(g.sub, False)]]
        if isinstance(g, And):
            return walk(g.left) + walk(g.right)
        if isinstance(g, Or):
            left, right = walk(g.left), walk(g.right)
            return [a + b for a in left for b in right]
        raise ValueError(f"clausify expects a quantifier-free NNF matrix, got {g!r}")

    out = []
    for raw in walk(matrix):
        seen = {}
        for l in raw:
            seen.setdefault(l, None)
        lits = tuple(seen)
        if any(Literal(l.atom, not l.positive) in seen for l in lits):
            continue  # tautology
        out.append(Clause(lits))
    return tuple(out)


def clausal_form(f: Formula):
    """nnf + clausify for quantifier-free input (the ground pipeline path)."""
    return clausify(nnf(f))


# ---------------------------------------------------------------------------
# Prepared interpolation inputs

@dataclass(frozen=True)
class PreparedInputs:
    f_clauses: tuple
    g_clauses: tuple
    f_skolems: tuple
    g_skolems: tuple
    f_original: Formula
    g_original: Formula

    def __post_init__(self):
        fsk = {s.name for s in self.f_skolems}
        gsk = {s.name for s in self.g_skolems}
        if fsk & gsk:
            raise InputError("Skolem namespaces of the two sides intersect")
        input_syms = ({s.name for s in funs(self.f_original) | funs(self.g_original)}
                      | {p.name for p in preds_plain(self.f_original)
                         | preds_plain(self.g_original)})
        if (fsk | gsk) & input_syms:
            raise InputError("Skolem symbol collides with an input symbol")
        allowed_f = funs(self.f_original) | set(self.f_skolems)
        allowed_g = funs(self.g_original) | set(self.g_skolems)
        for c in self.f_clauses:
            if not vocabulary(c).funs <= allowed_f:
                raise InputError("first clause set mentions foreign functions")
        for c in self.g_clauses:
            if not vocabulary(c).funs <= allowed_g:
                raise InputError("second clause set mentions foreign functions")


def prepare_inputs(f: Formula, g: Formula) -> PreparedInputs:
    """Skolemize and clausify f and ~g independently, with disjoint Skolem
    namespaces."""
    f_names = {s.name for s in funs(f)} | {p.name for p in preds_plain(f)}
    g_names = {s.name for s in funs(g)} | {p.name for p in preds_plain(g)}
    f_matrix, _, f_sk = skolemize(f, namespace="sk", forbidden=g_names)
    neg_g_matrix, _, g_sk = skolemize(Not(g), namespace="skg",
                                      forbidden=f_names | {s.name for s in f_sk})
    return PreparedInputs(
        f_clauses=clausify(f_matrix),
        g_clauses=clausify(neg_g_matrix),
        f_skolems=f_sk,
        g_skolems=g_sk,
        f_original=f,
        g_original=g,
    )


# ---------------------------------------------------------------------------
# Equality-as-predicate axioms

def _eq(a, b) -> Atom:
    return Atom(Symbol(EQUALITY, 2, "predicate"), (a, b))


def _forall(names, body) -> Formula:
    for x in reversed(names):
        body = Forall(x, body)
    return body


def _core_axioms() -> Formula:
    x, y, z = Var("X"), Var("Y"), Var("Z")
    refl = Forall("X", _eq(x, x))
    sym = _forall(["X", "Y"], Implies(_eq(x, y), _eq(y, x)))
    trans = _forall(["X", "Y", "Z"],
                    Implies(And(_eq(x, y), _eq(y, z)), _eq(x, z)))
    return And(And(refl, sym), trans)


def _pred_substitutivity(p: Symbol) -> Formula:
    xs = [Var(f"X{i + 1}") for i in range(p.arity)]
    ys = [Var(f"Y{i + 1}") for i in range(p.arity)]
    ante = Atom(p, tuple(xs))
    for xi, yi in zip(xs, ys):
        ante = And(ante, _eq(xi, yi))
    body = Implies(ante, Atom(p, tuple(ys)))
    return _forall([v.name for v in xs + ys], body)


def _fun_substitutivity(f: Symbol) -> Formula:
    xs = [Var(f"X{i + 1}") for i in range(f.arity)]
    ys = [Var(f"Y{i + 1}") for i in range(f.arity)]
    ante = None
    for xi, yi in zip(xs, ys):
        step = _eq(xi, yi)
        ante = step if ante is None else And(ante, step)
    body = Implies(ante, _eq(App(f, tuple(xs)), App(f, tuple(ys))))
    return _forall([v.name for v in xs + ys], body)


def equality_axioms(f: Formula, g: Formula, placement: str = "auto"):
    """Axioms expressing reflexivity, symmetry, transitivity and
    substitutivity of '=' as a predicate.

    Returns (e_f, e_g). Substitutivity for symbols occurring only in f goes to
    e_f, only in g to e_g. Core axioms and shared-symbol substitutivity are
    placed per `placement`: 'f', 'g', 'both', or 'auto'. 'auto' puts the core
    axioms on the side(s) where '=' occurs and shared substitutivity on both
    sides, which keeps the occurrence polarity of '=' one-sided whenever '='
    appears in only one input.
    """
    eq_sym = Symbol(EQUALITY, 2, "predicate")
    f_voc = vocabulary(f)
    g_voc = vocabulary(g)
    eq_in_f = any(p == eq_sym for p, _ in f_voc.preds)
    eq_in_g = any(p == eq_sym for p, _ in g_voc.preds)
    if not (eq_in_f or eq_in_g):
        return Top(), Top()
    if placement not in ("auto", "f", "g", "both"):
        raise ValueError(f"bad equality axiom placement {placement!r}")

    f_syms = ({p for p in preds_plain(f) if p != eq_sym and p.arity > 0}
              | {s for s in funs(f) if s.arity > 0})
    g_syms = ({p for p in preds_plain(g) if p != eq_sym and p.arity > 0}
              | {s for s in funs(g) if s.arity > 0})

    def subst_axiom(s: Symbol) -> Formula:
        return _pred_substitutivity(s) if s.kind == "predicate" else _fun_substitutivity(s)

    order = lambda syms: sorted(syms, key=lambda s: (s.kind, s.name, s.arity))
    e_f_parts = [subst_axiom(s) for s in order(f_syms - g_syms)]
    e_g_parts = [subst_axiom(s) for s in order(g_syms - f_syms)]
    shared = [subst_axiom(s) for s in order(f_syms & g_syms)]

    core = _core_axioms()
    if placement == "f":
        e_f_parts = [core] + e_f_parts + shared
    elif placement == "g":
        e_g_parts = [core] + e_g_parts + shared
    elif placement == "both":
        e_f_parts = [core] + e_f_parts + shared
        e_g_parts = [core] + e_g_parts + shared
    else:  # auto
        if eq_in_f:
            e_f_parts = [core] + e_f_parts
        if eq_in_g:
            e_g_parts = [core] + e_g_parts
        e_f_parts = e_f_parts + shared
        e_g_parts = e_g_parts + shared
    return and_all(e_f_parts), and_all(e_g_parts)
