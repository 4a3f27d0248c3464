"""Interpolant checking: syntactic vocabulary/polarity conditions and
semantic entailment, by truth table for ground inputs and by prover
refutations otherwise.

The refutation route is one-sided: "proved" confirms an entailment,
"not-proved" is inconclusive and never counts as a failure verdict.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .normalize import prepare_inputs
from .prover import NotProved, ProofLimits, prove
from .syntax import (And, Atom, Bot, Formula, Iff, Implies, Not, Or, Top,
                     atoms_of, free_vars, funs, pred_polarities, preds_plain)

DEFAULT_ATOM_BUDGET = 20


@dataclass(frozen=True)
class VerificationReport:
    syntactic_ok: bool
    violations: tuple = ()
    craig_ok: bool = True                # the weaker polarity-free status
    semantic_left: str = "not-proved"    # f |= h
    semantic_right: str = "not-proved"   # h |= g
    method: str = "refutation"           # truth-table | refutation

    @property
    def semantics_confirmed(self) -> bool:
        return (self.semantic_left in ("proved", "oracle-pass")
                and self.semantic_right in ("proved", "oracle-pass"))

    @property
    def failed(self) -> bool:
        return (not self.syntactic_ok
                or self.semantic_left == "oracle-fail"
                or self.semantic_right == "oracle-fail")


# ---------------------------------------------------------------------------
# Syntactic conditions

def check_syntactic(f: Formula, g: Formula, h: Formula):
    """Vocabulary conditions on an interpolant candidate.

    Returns (ok, violations, craig_ok): predicate-with-polarity containment,
    function containment and free-variable containment; craig_ok reports the
    weaker polarity-free predicate condition.
    """
    violations = []
    shared_preds = pred_polarities(f) & pred_polarities(g)
    for p, pol in sorted(pred_polarities(h) - shared_preds,
                         key=lambda x: (x[0].name, x[1])):
        violations.append(f"predicate {p.name}/{p.arity} occurs with polarity "
                          f"{pol} but not with it in both inputs")
    shared_funs = funs(f) & funs(g)
    for s in sorted(funs(h) - shared_funs, key=lambda s: (s.name, s.arity)):
        violations.append(f"function {s.name}/{s.arity} does not occur in both inputs")
    shared_free = free_vars(f) & free_vars(g)
    for x in sorted(free_vars(h) - shared_free):
        violations.append(f"free variable {x} does not occur free in both inputs")
    craig_ok = (preds_plain(h) <= (preds_plain(f) & preds_plain(g))
                and funs(h) <= shared_funs
                and free_vars(h) <= shared_free)
    return (not violations, tuple(violations), craig_ok)


# ---------------------------------------------------------------------------
# Ground oracle

class AtomBudgetExceeded(ValueError):
    pass


def eval_ground(f: Formula, assignment: dict) -> bool:
    """Evaluate a ground quantifier-free formula, each distinct atom read as
    one propositional variable."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return assignment[f]
    if isinstance(f, Not):
        return not eval_ground(f.sub, assignment)
    if isinstance(f, And):
        return eval_ground(f.left, assignment) and eval_ground(f.right, assignment)
    if isinstance(f, Or):
        return eval_ground(f.left, assignment) or eval_ground(f.right, assignment)
    if isinstance(f, Implies):
        return (not eval_ground(f.left, assignment)) or eval_ground(f.right, assignment)
    if isinstance(f, Iff):
        return eval_ground(f.left, assignment) == eval_ground(f.right, assignment)
    raise TypeError(f"eval_ground expects a ground quantifier-free formula, got {f!r}")


def _assignments(atoms, budget: int):
    if len(atoms) > budget:
        raise AtomBudgetExceeded(
            f"{len(atoms)} distinct atoms exceed the oracle budget of {budget}")
    for bits in itertools.product((False, True), repeat=len(atoms)):
        yield dict(zip(atoms, bits))


def ground_entails(f: Formula, g: Formula,
                   atom_budget: int = DEFAULT_ATOM_BUDGET) -> bool:
    """Truth-table decision of f |= g over the atoms of both formulas."""
    atoms = atoms_of(And(f, g))
    return all(eval_ground(g, a) for a in _assignments(atoms, atom_budget)
               if eval_ground(f, a))


def ground_equivalent(f: Formula, g: Formula,
                      atom_budget: int = DEFAULT_ATOM_BUDGET) -> bool:
    atoms = atoms_of(And(f, g))
    return all(eval_ground(f, a) == eval_ground(g, a)
               for a in _assignments(atoms, atom_budget))


def ground_unsat(f: Formula, atom_budget: int = DEFAULT_ATOM_BUDGET) -> bool:
    atoms = atoms_of(f)
    return not any(eval_ground(f, a) for a in _assignments(atoms, atom_budget))


# ---------------------------------------------------------------------------
# Full verification

def _refute(premise: Formula, conclusion: Formula, limits: ProofLimits) -> str:
    """Try to prove premise |= conclusion by refuting premise & ~conclusion."""
    prepared = prepare_inputs(premise, conclusion)
    if any(len(c) == 0 for c in prepared.f_clauses):
        return "proved"  # the premise is contradictory
    if any(len(c) == 0 for c in prepared.g_clauses):
        return "proved"  # the conclusion is valid
    clauses = prepared.f_clauses + prepared.g_clauses
    if not clauses:
        return "not-proved"
    try:
        prove(clauses, limits, num_f_clauses=len(prepared.f_clauses))
        return "proved"
    except NotProved:
        return "not-proved"


def check_semantic_fo(f: Formula, g: Formula, h: Formula,
                      limits: ProofLimits | None = None,
                      atom_budget: int = DEFAULT_ATOM_BUDGET) -> VerificationReport:
    """Full interpolant check: syntactic conditions plus both entailments.

    Ground triples get definite truth-table verdicts; first-order ones get
    prover refutations of f & ~h and h & ~g, where not-proved is inconclusive.
    """
    from .extract import is_ground_formula

    ok, violations, craig_ok = check_syntactic(f, g, h)
    if is_ground_formula(f) and is_ground_formula(g) and is_ground_formula(h):
        left = "oracle-pass" if ground_entails(f, h, atom_budget) else "oracle-fail"
        right = "oracle-pass" if ground_entails(h, g, atom_budget) else "oracle-fail"
        method = "truth-table"
    else:
        limits = limits or ProofLimits()
        left = _refute(f, h, limits)
        right = _refute(h, g, limits)
        method = "refutation"
    return VerificationReport(syntactic_ok=ok, violations=violations,
                              craig_ok=craig_ok, semantic_left=left,
                              semantic_right=right, method=method)
