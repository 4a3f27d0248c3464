"""Interpolant lifting and the full first-order interpolation pipeline.

Lifting turns a ground interpolant into a quantified first-order one: every
maximal occurrence of a term whose outermost function symbol belongs to one
of two disjoint symbol sets is replaced by a fresh variable, and a quantifier
prefix is prepended over these variables. A variable replacing a term from the
first set is existentially quantified, one replacing a term from the second
set universally; whenever one replaced term is a strict subterm of another,
its variable is quantified first.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import DEFAULT_CONFIG, InterpolationConfig, InterpolationReport
from .extract import ExtractionOptions, ipol, is_ground_formula
from .normalize import InputError, equality_axioms, prepare_inputs
from .prover import NotProved, prove
from .syntax import (And, App, Atom, Bot, EQUALITY, Exists, Forall, Formula,
                     Iff, Implies, Literal, Not, Or, Substitution, Symbol,
                     Term, Top, Var, free_vars, funs, inverse_apply, is_ground,
                     preds_plain, render_term, substitute_free, term_size,
                     vocabulary)
from .tableau import (FRESH_CONSTANT, Tableau, assign_sides,
                      compute_default_targets, ground, leaf_close,
                      signature_constants, tableau_variables)


@dataclass(frozen=True)
class LiftingFront:
    """The materialized components that drive lifting: the two inputs, the
    two disjoint function-symbol sets, and the ground interpolant."""

    f: Formula
    g: Formula
    fset: frozenset
    gset: frozenset
    h_ground: Formula

    def __post_init__(self):
        if self.fset & self.gset:
            raise ValueError("the two lifting symbol sets must be disjoint")
        if funs(self.f) & self.gset:
            raise ValueError("second symbol set intersects the first input's functions")
        if funs(self.g) & self.fset:
            raise ValueError("first symbol set intersects the second input's functions")
        if not is_ground_formula(self.h_ground):
            raise ValueError("the interpolant to lift must be ground")


@dataclass(frozen=True)
class LiftedInterpolant:
    prefix: tuple      # of ("?"|"!", var name)
    matrix: Formula
    replaced: tuple    # of (var name, Term), aligned with prefix

    def formula(self) -> Formula:
        out = self.matrix
        for q, x in reversed(self.prefix):
            out = Exists(x, out) if q == "?" else Forall(x, out)
        return out


def fg_maximal_terms(h: Formula, fset, gset) -> list:
    """The terms with outermost symbol in fset|gset that occur in h not
    inside another such term, subterm-ordered (ties by size, then rendering)."""
    marked = frozenset(fset) | frozenset(gset)
    found: dict = {}

    def walk_term(t: Term):
        if isinstance(t, App):
            if t.fun in marked:
                found.setdefault(t, None)
                return
            for a in t.args:
                walk_term(a)

    def walk(g):
        if isinstance(g, Atom):
            for a in g.args:
                walk_term(a)
        elif isinstance(g, Not):
            walk(g.sub)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(h)
    return sorted(found, key=lambda t: (term_size(t), render_term(t)))


def _fresh_prefix_names(count: int, taken) -> list:
    names = []
    n = 0
    while len(names) < count:
        n += 1
        name = f"V{n}"
        if name not in taken:
            names.append(name)
    return names


def _all_variable_names(f: Formula) -> set:
    out = set(free_vars(f))

    def walk(g):
        if isinstance(g, Not):
            walk(g.sub)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            out.add(g.var)
            walk(g.body)

    walk(f)
    return out


def lift(front: LiftingFront) -> LiftedInterpolant:
    """Replace maximal fset/gset-term occurrences in the ground interpolant by
    fresh quantified variables."""
    terms = fg_maximal_terms(front.h_ground, front.fset, front.gset)
    taken = _all_variable_names(front.f) | _all_variable_names(front.g)
    names = _fresh_prefix_names(len(terms), taken)
    sigma = Substitution(dict(zip(names, terms)))
    matrix = inverse_apply(sigma, front.h_ground)
    prefix = tuple(("?" if t.fun in front.fset else "!", x)
                   for x, t in zip(names, terms))
    leftover = vocabulary(matrix).funs & (front.fset | front.gset)
    if leftover:
        raise AssertionError(f"lifting left marked symbols in the matrix: {leftover}")
    return LiftedInterpolant(prefix=prefix, matrix=matrix,
                             replaced=tuple(zip(names, terms)))


# ---------------------------------------------------------------------------
# Free-variable round trip

def close_free_variables(f: Formula, g: Formula):
    """Convert shared treatment of free variables: each free variable X of
    either input becomes the stand-in constant fv_X.

    Returns (f', g', mapping) with mapping a tuple of (var name, constant
    name) pairs.
    """
    fv = sorted(free_vars(f) | free_vars(g))
    if not fv:
        return f, g, ()
    existing = {s.name for s in funs(f) | funs(g)}
    mapping = {}
    for x in fv:
        cname = f"fv_{x}"
        if cname in existing:
            raise InputError(f"cannot reserve stand-in constant {cname!r}: "
                             f"the name is already used")
        mapping[x] = App(Symbol(cname, 0, "function"))
    return (substitute_free(f, mapping), substitute_free(g, mapping),
            tuple((x, mapping[x].fun.name) for x in fv))


def restore_free_variables(h: Formula, mapping) -> Formula:
    """Turn the fv_X stand-in constants back into free variables."""
    if not mapping:
        return h
    back = {cname: Var(x) for x, cname in mapping}

    def walk_term(t: Term) -> Term:
        if isinstance(t, App):
            if not t.args and t.fun.name in back:
                return back[t.fun.name]
            return App(t.fun, tuple(walk_term(a) for a in t.args))
        return t

    def walk(g):
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(walk_term(a) for a in g.args))
        if isinstance(g, Not):
            return Not(walk(g.sub))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, walk(g.body))
        raise TypeError(f"not a formula: {g!r}")

    return walk(h)


# ---------------------------------------------------------------------------
# The first-order pipeline

def _wrap_equality(f: Formula, g: Formula, config: InterpolationConfig):
    eq = Symbol(EQUALITY, 2, "predicate")
    present = eq in preds_plain(f) | preds_plain(g)
    if not present:
        return f, g
    if not config.equality:
        raise InputError("'=' occurs in the input but equality mode is disabled")
    e_f, e_g = equality_axioms(f, g, placement=config.eq_axioms)
    f2 = f if isinstance(e_f, Top) else And(e_f, f)
    g2 = g if isinstance(e_g, Top) else Implies(e_g, g)
    return f2, g2


def ctif(f: Formula, g: Formula,
         config: InterpolationConfig = DEFAULT_CONFIG,
         tableau: Tableau | None = None) -> InterpolationReport:
    """Craig-Lyndon interpolation for first-order inputs.

    Pipeline: Skolemize and clausify the two sides independently, compute a
    closed clausal tableau for the union, make it leaf-closed, instantiate
    remaining rigid variables, attach side labels, extract a ground
    interpolant, and lift it. Free variables are accepted: they are converted
    to stand-in constants up front and restored in the result.
    """
    f0, g0, fv_map = close_free_variables(f, g)
    f1, g1 = _wrap_equality(f0, g0, config)
    prepared = prepare_inputs(f1, g1)
    report = InterpolationReport(proved=False,
                                 f_clauses=prepared.f_clauses,
                                 g_clauses=prepared.g_clauses,
                                 f_skolems=prepared.f_skolems,
                                 g_skolems=prepared.g_skolems,
                                 free_var_constants=fv_map)

    if any(len(c) == 0 for c in prepared.f_clauses):
        report.proved = True
        report.interpolant = Bot()
        return report
    if any(len(c) == 0 for c in prepared.g_clauses):
        report.proved = True
        report.interpolant = Top()
        return report
    clauses = prepared.f_clauses + prepared.g_clauses
    if not clauses:
        report.failure = "not proved (refutation-not-found)"
        return report

    if tableau is None:
        try:
            proof = prove(clauses, config.limits(), config.prover_policy(),
                          num_f_clauses=len(prepared.f_clauses))
        except NotProved as e:
            report.failure = f"not proved ({e.limit})"
            return report
        root = proof.root
    else:
        root = tableau.root
    t = Tableau(root=root, for_f=prepared.f_clauses, for_g=prepared.g_clauses)

    t = leaf_close(t, target_policy=None)
    c0_used = (bool(tableau_variables(t))
               and not signature_constants(t.for_f + t.for_g))
    t = ground(t, policy=config.grounding, mapping=config.grounding_map)
    assignment = assign_sides(t, policy=config.side_policy,
                              side_map=config.side_map)
    t = compute_default_targets(assignment.tableau, config.target_policy)
    h_grd, annotations = ipol(t, ExtractionOptions(simplify=config.simplify,
                                                   annotate=True))

    fset = set(prepared.f_skolems) | (funs(f1) - funs(g1))
    gset = set(prepared.g_skolems) | (funs(g1) - funs(f1))
    if c0_used:
        (fset if config.c0_side == "F" else gset).add(FRESH_CONSTANT)

    front = LiftingFront(f=f1, g=g1, fset=frozenset(fset),
                         gset=frozenset(gset), h_ground=h_grd)
    lifted = lift(front)
    h_inner = lifted.formula()

    from .verify import check_syntactic
    ok, violations, _ = check_syntactic(f1, g1, h_inner)
    if not ok:
        raise AssertionError("lifted interpolant violates the vocabulary "
                             f"conditions: {violations}")

    report.proved = True
    report.interpolant = restore_free_variables(h_inner, fv_map)
    report.tableau = t
    report.annotations = annotations
    report.ambiguous = assignment.ambiguous
    report.fset = tuple(sorted(fset, key=lambda s: (s.name, s.arity)))
    report.gset = tuple(sorted(gset, key=lambda s: (s.name, s.arity)))
    report.c0_used = c0_used
    report.replaced = lifted.replaced

    if config.verify:
        from .verify import check_semantic_fo
        report.verification = check_semantic_fo(f1, g1, h_inner, config.limits())
    return report
