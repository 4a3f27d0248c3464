"""Ground interpolant extraction by induction on a leaf-closed two-sided
tableau, and the ground interpolation pipeline built on it.

The induction assigns each node a quantifier-free formula: a leaf's value is
determined by its own side and the side of its target ((F,F) -> $false,
(F,G) -> its literal, (G,F) -> the complement, (G,G) -> $true); an inner
node's value is the disjunction of its children's values when the children
are F-sided and their conjunction when G-sided, folded left-to-right in child
order.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import DEFAULT_CONFIG, InterpolationConfig, InterpolationReport
from .normalize import clausal_form
from .prover import NotProved, prove
from .syntax import (And, Atom, Bot, Exists, Forall, Formula, Iff, Implies,
                     Not, Or, Top, complement, is_ground, simplify_tv)
from .tableau import (F, G, Tableau, TableauError, assign_sides,
                      compute_default_targets, leaf_close)


@dataclass(frozen=True)
class ExtractionOptions:
    simplify: bool = True
    annotate: bool = False


def ipol(t: Tableau, options: ExtractionOptions = ExtractionOptions()):
    """The extraction value at the root.

    With options.annotate, returns (formula, annotations) where annotations
    maps each node path to its value.
    """
    annotations: dict = {}

    def at(node, branch, node_path) -> Formula:
        if node.is_leaf():
            if node.literal is None:
                raise TableauError("cannot extract from a bare root")
            if node.side is None:
                raise TableauError(f"leaf {node.literal} has no side")
            if node.target is None:
                raise TableauError(f"leaf {node.literal} has no target")
            tgt = branch[node.target]
            if tgt.side is None:
                raise TableauError(f"target of leaf {node.literal} has no side")
            pair = (node.side, tgt.side)
            if pair == (F, F):
                val = Bot()
            elif pair == (F, G):
                val = node.literal.formula()
            elif pair == (G, F):
                val = complement(node.literal).formula()
            else:
                val = Top()
        else:
            sides = {c.side for c in node.children}
            if len(sides) != 1 or None in sides:
                raise TableauError(f"children at {node_path} lack a uniform side")
            side = sides.pop()
            vals = [at(c, branch + [c], node_path + (i,))
                    for i, c in enumerate(node.children)]
            val = vals[0]
            for v in vals[1:]:
                val = Or(val, v) if side == F else And(val, v)
                if options.simplify:
                    val = simplify_tv(val)
        if options.simplify:
            val = simplify_tv(val)
        annotations[node_path] = val
        return val

    out = at(t.root, [t.root], ())
    if options.annotate:
        return out, annotations
    return out


def _is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Forall, Exists)):
        return False
    if isinstance(f, Not):
        return _is_quantifier_free(f.sub)
    if isinstance(f, (And, Or, Implies, Iff)):
        return _is_quantifier_free(f.left) and _is_quantifier_free(f.right)
    return True


def is_ground_formula(f: Formula) -> bool:
    return _is_quantifier_free(f) and is_ground(f)


def cti_ground(f: Formula, g: Formula,
               config: InterpolationConfig = DEFAULT_CONFIG,
               tableau: Tableau | None = None) -> InterpolationReport:
    """Craig-Lyndon interpolation for ground formulas: clausify both sides,
    refute, assign sides, extract.

    A pre-built tableau for the clausified inputs may be supplied instead of
    running the internal prover (e.g. one imported from the exchange format).
    """
    if not is_ground_formula(f) or not is_ground_formula(g):
        raise ValueError("cti_ground expects ground inputs")
    f_clauses = clausal_form(f)
    g_clauses = clausal_form(Not(g))
    report = InterpolationReport(proved=False, f_clauses=f_clauses,
                                 g_clauses=g_clauses)

    if any(len(c) == 0 for c in f_clauses):
        report.proved = True
        report.interpolant = Bot()
        return report
    if any(len(c) == 0 for c in g_clauses):
        report.proved = True
        report.interpolant = Top()
        return report
    clauses = f_clauses + g_clauses
    if not clauses:
        report.failure = "not proved (refutation-not-found)"
        return report

    if tableau is None:
        try:
            t = prove(clauses, config.limits(), config.prover_policy(),
                      num_f_clauses=len(f_clauses))
        except NotProved as e:
            report.failure = f"not proved ({e.limit})"
            return report
        t = Tableau(root=t.root, for_f=f_clauses, for_g=g_clauses)
    else:
        t = Tableau(root=tableau.root, for_f=f_clauses, for_g=g_clauses)

    t = leaf_close(t, target_policy=None)
    assignment = assign_sides(t, policy=config.side_policy,
                              side_map=config.side_map)
    t = compute_default_targets(assignment.tableau, config.target_policy)
    h, annotations = ipol(t, ExtractionOptions(simplify=config.simplify,
                                               annotate=True))
    report.proved = True
    report.interpolant = h
    report.tableau = t
    report.annotations = annotations
    report.ambiguous = assignment.ambiguous

    if config.verify:
        from .verify import check_semantic_fo
        report.verification = check_semantic_fo(f, g, h, config.limits())
    return report
