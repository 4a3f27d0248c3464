"""Connection-method prover producing closed clausal tableaux.

Top-down search with rigid variables: a start clause is attached below the
root, and open branches are extended only with clauses that contain a literal
unifiable with the complement of the branch leaf (the connection condition),
or closed by unification against any ancestor. Substitutions apply globally.
Iterative deepening on tableau depth (edges on the longest root-to-leaf path)
with chronological backtracking makes the search complete for unsatisfiable
inputs as the limits grow.

Clause selection follows input order, literal selection is leftmost-open, and
regularity pruning (no repeated literal on a branch, checked at node creation)
is on by default. These choices affect which tableau is found, never
soundness.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .syntax import (App, Clause, Literal, Substitution, Term, Var, apply,
                     complement)
from .tableau import TabNode, Tableau


@dataclass(frozen=True)
class ProofLimits:
    max_depth: int = 12
    timeout_ms: int = 10000
    max_inferences: int = 10_000_000

    def __post_init__(self):
        if self.max_depth <= 0 or self.timeout_ms <= 0 or self.max_inferences <= 0:
            raise ValueError("proof limits must be positive")


@dataclass(frozen=True)
class ProverPolicy:
    start_clauses: str = "from-G"   # from-G | from-F | negative-clauses | all
    use_regularity: bool = True


class NotProved(Exception):
    """No closed tableau found within the limits."""

    def __init__(self, limit: str):
        super().__init__(f"not proved ({limit})")
        self.limit = limit


# ---------------------------------------------------------------------------
# Unification (with occurs check)

def _walk(t: Term, bindings: dict) -> Term:
    while isinstance(t, Var):
        nxt = bindings.get(t.name)
        if nxt is None:
            return t
        t = nxt
    return t


def _occurs(name: str, t: Term, bindings: dict) -> bool:
    t = _walk(t, bindings)
    if isinstance(t, Var):
        return t.name == name
    return any(_occurs(name, a, bindings) for a in t.args)


def _unify_terms(a: Term, b: Term, bindings: dict, trail: list) -> bool:
    a = _walk(a, bindings)
    b = _walk(b, bindings)
    if isinstance(a, Var):
        if isinstance(b, Var) and b.name == a.name:
            return True
        if _occurs(a.name, b, bindings):
            return False
        bindings[a.name] = b
        trail.append(a.name)
        return True
    if isinstance(b, Var):
        return _unify_terms(b, a, bindings, trail)
    if a.fun != b.fun:
        return False
    return all(_unify_terms(x, y, bindings, trail) for x, y in zip(a.args, b.args))


def _resolve(t: Term, bindings: dict) -> Term:
    t = _walk(t, bindings)
    if isinstance(t, Var):
        return t
    return App(t.fun, tuple(_resolve(a, bindings) for a in t.args))


def _resolve_literal(l: Literal, bindings: dict) -> Literal:
    atom = l.atom
    return Literal(type(atom)(atom.pred, tuple(_resolve(a, bindings)
                                               for a in atom.args)), l.positive)


def unify(s: Term, t: Term) -> Substitution | None:
    """Most general unifier of two terms, or None."""
    bindings: dict = {}
    if not _unify_terms(s, t, bindings, []):
        return None
    return Substitution({x: _resolve(bindings[x], bindings) for x in bindings})


def unify_literals(a: Literal, b: Literal) -> Substitution | None:
    """Most general unifier making two literals identical (same sign)."""
    if a.positive != b.positive or a.atom.pred != b.atom.pred:
        return None
    bindings: dict = {}
    trail: list = []
    for x, y in zip(a.atom.args, b.atom.args):
        if not _unify_terms(x, y, bindings, trail):
            return None
    return Substitution({x: _resolve(bindings[x], bindings) for x in bindings})


def _unify_lit_inplace(a: Literal, b: Literal, bindings: dict, trail: list) -> bool:
    if a.positive != b.positive or a.atom.pred != b.atom.pred:
        return False
    return all(_unify_terms(x, y, bindings, trail)
               for x, y in zip(a.atom.args, b.atom.args))


# ---------------------------------------------------------------------------
# Search

class _Node:
    __slots__ = ("literal", "children", "target")

    def __init__(self, literal):
        self.literal = literal
        self.children = ()
        self.target = None


class _Search:
    def __init__(self, clauses, limits: ProofLimits, policy: ProverPolicy,
                 num_f_clauses: int):
        self.clauses = clauses
        self.limits = limits
        self.policy = policy
        self.num_f = num_f_clauses
        self.bindings: dict = {}
        self.copies = 0
        self.inferences = 0
        self.deadline = time.monotonic() + limits.timeout_ms / 1000.0
        self.depth_cut = False
        self.exhausted: str | None = None

    def tick(self):
        self.inferences += 1
        if self.inferences > self.limits.max_inferences:
            self.exhausted = "max_inferences"
            raise NotProved("max_inferences")
        if self.inferences % 512 == 0 and time.monotonic() > self.deadline:
            self.exhausted = "timeout"
            raise NotProved("timeout")

    def fresh_copy(self, clause: Clause):
        self.copies += 1
        n = self.copies
        names = {}
        for l in clause:
            for v in sorted(_vars_of_literal(l)):
                names.setdefault(v, Var(f"_{v}_{n}"))
        s = Substitution(names)
        return [apply(s, l) for l in clause.literals]

    def start_order(self):
        idxs = list(range(len(self.clauses)))
        kind = self.policy.start_clauses
        if kind == "from-G":
            pref = [i for i in idxs if i >= self.num_f]
            rest = [i for i in idxs if i < self.num_f]
        elif kind == "from-F":
            pref = [i for i in idxs if i < self.num_f]
            rest = [i for i in idxs if i >= self.num_f]
        elif kind == "negative-clauses":
            pref = [i for i in idxs
                    if all(not l.positive for l in self.clauses[i])]
            rest = [i for i in idxs if i not in set(pref)]
        elif kind == "all":
            pref, rest = idxs, []
        else:
            raise ValueError(f"unknown start-clause policy {kind!r}")
        return pref + rest

    def irregular(self, lit: Literal, ancestors) -> bool:
        if not self.policy.use_regularity:
            return False
        here = _resolve_literal(lit, self.bindings)
        return any(_resolve_literal(a.literal, self.bindings) == here
                   for a in ancestors)

    def solve(self, goals, bound: int) -> bool:
        """goals: list of (node, ancestors) with ancestors a tuple of _Node
        from just below the root down to the parent."""
        if not goals:
            return True
        (node, ancestors), rest = goals[0], goals[1:]
        self.tick()

        # Reduction: close against any ancestor, nearest first.
        comp = complement(node.literal)
        for j in range(len(ancestors) - 1, -1, -1):
            trail: list = []
            if _unify_lit_inplace(comp, ancestors[j].literal, self.bindings, trail):
                node.target = j + 1
                node.children = ()
                if self.solve(rest, bound):
                    return True
                node.target = None
            for name in trail:
                del self.bindings[name]

        # Extension: attach a connected clause if the depth bound allows.
        depth_here = len(ancestors) + 1
        if depth_here + 1 > bound:
            self.depth_cut = True
            return False
        for ci, clause in enumerate(self.clauses):
            for pos in range(len(clause)):
                self.tick()
                trail = []
                lits = self.fresh_copy(clause)
                if not _unify_lit_inplace(comp, lits[pos], self.bindings, trail):
                    for name in trail:
                        del self.bindings[name]
                    continue
                children = [_Node(l) for l in lits]
                children[pos].target = depth_here
                new_ancestors = ancestors + (node,)
                if self.policy.use_regularity and any(
                        i != pos and self.irregular(c.literal, new_ancestors)
                        for i, c in enumerate(children)):
                    for name in trail:
                        del self.bindings[name]
                    continue
                node.children = tuple(children)
                subgoals = [(c, new_ancestors) for i, c in enumerate(children)
                            if i != pos]
                if self.solve(subgoals + rest, bound):
                    return True
                node.children = ()
                for name in trail:
                    del self.bindings[name]
        return False

    def run(self) -> TabNode | None:
        order = self.start_order()
        for bound in range(1, self.limits.max_depth + 1):
            self.depth_cut = False
            for ci in order:
                clause = self.clauses[ci]
                lits = self.fresh_copy(clause)
                children = tuple(_Node(l) for l in lits)
                root = _Node(None)
                root.children = children
                goals = [(c, ()) for c in children]
                if self.solve(goals, bound):
                    return self.finish(root)
            if not self.depth_cut:
                break  # the search space is exhausted below max_depth
        raise NotProved("max_depth" if self.depth_cut else "refutation-not-found")

    def finish(self, root: _Node) -> TabNode:
        def build(n: _Node) -> TabNode:
            lit = None if n.literal is None else _resolve_literal(n.literal, self.bindings)
            return TabNode(literal=lit, target=n.target,
                           children=tuple(build(c) for c in n.children))

        return build(root)


def _vars_of_literal(l: Literal):
    out = set()

    def walk(t):
        if isinstance(t, Var):
            out.add(t.name)
        else:
            for a in t.args:
                walk(a)

    for a in l.atom.args:
        walk(a)
    return out


def prove(cf, limits: ProofLimits | None = None,
          policy: ProverPolicy | None = None,
          num_f_clauses: int | None = None) -> Tableau:
    """Compute a leaf-closed clausal tableau for the clause tuple cf.

    Raises NotProved when the limits are exhausted. num_f_clauses tells the
    start-clause policy where the first input's clauses end (clauses from
    index num_f_clauses on count as the second input's).
    """
    cf = tuple(cf)
    if not cf:
        raise ValueError("prove expects a nonempty clausal formula")
    if any(len(c) == 0 for c in cf):
        raise ValueError("prove cannot attach the empty clause")
    limits = limits or ProofLimits()
    policy = policy or ProverPolicy()
    if num_f_clauses is None:
        num_f_clauses = len(cf)
    search = _Search(cf, limits, policy, num_f_clauses)
    root = search.run()
    return Tableau(root=root, for_f=cf, for_g=())
