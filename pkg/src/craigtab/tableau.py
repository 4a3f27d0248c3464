"""Clausal tableaux: tree structure, closure targets, grounding, side labels.

A tableau is a finite ordered tree whose non-root nodes carry literals such
that the children of any node spell an instance of an input clause. Nodes are
addressed by paths (tuples of child indices from the root); a closing node's
target is recorded as the index of the complementary ancestor along its
branch, counted from the root (root = 0). Everything is immutable: operations
return new tableaux.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterator, Optional

from .parsing import parse_clause, parse_literal
from .syntax import (App, Clause, Literal, Substitution, Symbol, Var,
                     and_all, apply, complement, free_vars, funs, is_ground,
                     render, vocabulary)

F, G = "F", "G"


class TableauError(ValueError):
    pass


@dataclass(frozen=True)
class TabNode:
    literal: Optional[Literal]          # None only at the root
    side: Optional[str] = None          # "F" | "G" | None
    target: Optional[int] = None        # branch index of the closing ancestor
    children: tuple = ()

    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class Tableau:
    root: TabNode
    for_f: tuple = ()
    for_g: tuple = ()

    def node_at(self, path: tuple) -> TabNode:
        n = self.root
        for i in path:
            n = n.children[i]
        return n

    def branch(self, path: tuple) -> list:
        """Nodes from the root to the addressed node, inclusive."""
        out = [self.root]
        for i in path:
            out.append(out[-1].children[i])
        return out

    def walk(self) -> Iterator[tuple]:
        """Yield (path, node, branch) preorder; branch includes the node."""
        stack = [((), self.root, [self.root])]
        while stack:
            path, node, branch = stack.pop()
            yield path, node, branch
            for i in range(len(node.children) - 1, -1, -1):
                child = node.children[i]
                stack.append((path + (i,), child, branch + [child]))


def clause_of(n: TabNode) -> Clause:
    """The disjunction of the children's literals in left-to-right order."""
    if n.is_leaf():
        raise TableauError("clause_of is undefined on leaves")
    return Clause(tuple(c.literal for c in n.children))


# ---------------------------------------------------------------------------
# Instance matching (one-way, order-sensitive by default)

def match_term(pattern, term, binding: dict) -> bool:
    if isinstance(pattern, Var):
        seen = binding.get(pattern.name)
        if seen is None:
            binding[pattern.name] = term
            return True
        return seen == term
    if isinstance(term, App) and pattern.fun == term.fun:
        return all(match_term(p, t, binding) for p, t in zip(pattern.args, term.args))
    return False


def match_literal(pattern: Literal, lit: Literal, binding: dict) -> bool:
    if pattern.positive != lit.positive or pattern.atom.pred != lit.atom.pred:
        return False
    return all(match_term(p, t, binding)
               for p, t in zip(pattern.atom.args, lit.atom.args))


def match_clause(pattern: Clause, clause: Clause,
                 permutation_tolerant: bool = False) -> Optional[Substitution]:
    """A single matcher substitution s with apply(s, pattern) == clause.

    With permutation_tolerant, clause may be a reordering of an instance of
    pattern (used for tableaux imported from external provers).
    """
    if len(pattern) != len(clause):
        return None
    if not permutation_tolerant:
        binding: dict = {}
        for p, l in zip(pattern.literals, clause.literals):
            if not match_literal(p, l, binding):
                return None
        return Substitution(binding)

    def assign(i: int, used: frozenset, binding: dict):
        if i == len(pattern):
            return binding
        for j in range(len(clause)):
            if j in used:
                continue
            trial = dict(binding)
            if match_literal(pattern.literals[i], clause.literals[j], trial):
                got = assign(i + 1, used | {j}, trial)
                if got is not None:
                    return got
        return None

    binding = assign(0, frozenset(), {})
    return None if binding is None else Substitution(binding)


def clause_side_matches(c: Clause, t: Tableau,
                        permutation_tolerant: bool = False) -> list:
    """Which of the two input clause sets c is an instance of: subset of
    ["F", "G"]."""
    out = []
    if any(match_clause(p, c, permutation_tolerant) is not None for p in t.for_f):
        out.append(F)
    if any(match_clause(p, c, permutation_tolerant) is not None for p in t.for_g):
        out.append(G)
    return out


# ---------------------------------------------------------------------------
# Closure and targets

def _closing_index(branch: list) -> Optional[int]:
    node = branch[-1]
    comp = complement(node.literal)
    for i in range(len(branch) - 2, 0, -1):
        if branch[i].literal == comp:
            return i
    return None


def leaf_close(t: Tableau, target_policy: str | None = "nearest") -> Tableau:
    """Prune edges below closing nodes; fail if some branch stays open.

    Leaves that end up without a target get one per target_policy (see
    compute_default_targets); pass target_policy=None to leave them unset,
    e.g. when targets should be assigned only after side labels exist.
    """

    def walk(node: TabNode, branch: list) -> TabNode:
        if node.literal is not None and _closing_index(branch) is not None:
            return replace(node, children=())
        if node.is_leaf():
            open_branch = " / ".join(str(n.literal) for n in branch[1:])
            raise TableauError(f"tableau is not closed; open branch: {open_branch}")
        kids = tuple(walk(c, branch + [c]) for c in node.children)
        return replace(node, children=kids)

    pruned = replace(t, root=walk(t.root, [t.root]))
    if target_policy is None:
        return pruned
    return compute_default_targets(pruned, target_policy)


def compute_default_targets(t: Tableau, policy: str = "nearest") -> Tableau:
    """Set a target on every leaf that lacks one.

    policy "nearest": the nearest complementary ancestor. policy
    "same-side-preferred": the nearest complementary ancestor with the same
    side label if one exists, otherwise the nearest one.
    """
    if policy not in ("nearest", "same-side-preferred"):
        raise TableauError(f"unknown target policy {policy!r}")

    def walk(node: TabNode, branch: list) -> TabNode:
        if node.is_leaf():
            if node.target is not None:
                return node
            comp = complement(node.literal)
            candidates = [i for i in range(len(branch) - 2, 0, -1)
                          if branch[i].literal == comp]
            if not candidates:
                raise TableauError(f"leaf {node.literal} has no complementary ancestor")
            chosen = candidates[0]
            if policy == "same-side-preferred":
                same = [i for i in candidates if branch[i].side == node.side]
                if same:
                    chosen = same[0]
            return replace(node, target=chosen)
        kids = tuple(walk(c, branch + [c]) for c in node.children)
        return replace(node, children=kids)

    return replace(t, root=walk(t.root, [t.root]))


# ---------------------------------------------------------------------------
# Path projections

def path(t: Tableau, node_path: tuple, side: str):
    """Conjunction of the literals with the given side label on the branch
    from the root to the node, the node included."""
    if side not in (F, G):
        raise TableauError(f"bad side {side!r}")
    lits = []
    for n in t.branch(node_path)[1:]:
        if n.side is None:
            raise TableauError("path projection needs side labels on the branch")
        if n.side == side:
            lits.append(n.literal.formula())
    return and_all(lits)


# ---------------------------------------------------------------------------
# Grounding

def signature_constants(clauses) -> list:
    out = {s for c in clauses for s in vocabulary(c).funs if s.arity == 0}
    return sorted(out, key=lambda s: s.name)


FRESH_CONSTANT = Symbol("c0", 0, "function")


def tableau_variables(t: Tableau) -> list:
    seen: dict = {}
    for _, node, _ in t.walk():
        if node.literal is not None:
            for v in sorted(free_vars(node.literal)):
                seen.setdefault(v, None)
    return list(seen)


def needs_fresh_constant(t: Tableau) -> bool:
    return bool(tableau_variables(t)) and not signature_constants(t.for_f + t.for_g)


def ground(t: Tableau, policy: str = "least-constant",
           mapping: dict | None = None) -> Tableau:
    """Instantiate all remaining rigid variables by ground terms over the
    input signature (plus the fresh constant c0 when the signature has no
    constant).

    policy "least-constant" maps every variable to the lexicographically
    least constant; "explicit-map" takes var-name -> Term from `mapping`,
    falling back to the least constant for unmapped variables.
    """
    variables = tableau_variables(t)
    if not variables:
        return t
    consts = signature_constants(t.for_f + t.for_g)
    default = App(consts[0]) if consts else App(FRESH_CONSTANT)
    allowed = {s for c in (t.for_f + t.for_g) for s in vocabulary(c).funs}
    allowed.add(FRESH_CONSTANT)

    bindings = {}
    if policy == "least-constant":
        bindings = {v: default for v in variables}
    elif policy == "explicit-map":
        mapping = mapping or {}
        for v in variables:
            term = mapping.get(v, default)
            if not is_ground(term):
                raise TableauError(f"grounding term for {v} is not ground")
            bad = vocabulary(term).funs - allowed
            if bad:
                raise TableauError(
                    f"grounding term for {v} uses symbols outside the signature: "
                    f"{sorted(s.name for s in bad)}")
            bindings[v] = term
    else:
        raise TableauError(f"unknown grounding policy {policy!r}")

    subst = Substitution(bindings)

    def walk(node: TabNode) -> TabNode:
        lit = node.literal if node.literal is None else apply(subst, node.literal)
        return replace(node, literal=lit,
                       children=tuple(walk(c) for c in node.children))

    return replace(t, root=walk(t.root))


# ---------------------------------------------------------------------------
# Side assignment

@dataclass(frozen=True)
class SideAssignment:
    tableau: Tableau
    ambiguous: tuple  # of (path, clause, chosen side)


def assign_sides(t: Tableau, policy: str = "prefer-F",
                 side_map: dict | None = None,
                 permutation_tolerant: bool = False) -> SideAssignment:
    """Attach side labels so that F-sided clauses are instances of for_f
    clauses and G-sided ones of for_g clauses.

    Clauses that are instances of both sides are resolved by policy
    ("prefer-F", "prefer-G", or "explicit-map" with a clause-string -> side
    mapping) and reported in the ambiguity log.
    """
    if policy not in ("prefer-F", "prefer-G", "explicit-map"):
        raise TableauError(f"unknown side policy {policy!r}")
    ambiguous = []

    def walk(node: TabNode, my_path: tuple) -> TabNode:
        if node.is_leaf():
            return node
        c = clause_of(node)
        sides = clause_side_matches(c, t, permutation_tolerant)
        if not sides:
            raise TableauError(f"tableau clause {c} is an instance of neither input")
        if len(sides) == 1:
            side = sides[0]
        else:
            if policy == "prefer-F":
                side = F
            elif policy == "prefer-G":
                side = G
            else:
                side = (side_map or {}).get(str(c))
                if side not in (F, G):
                    raise TableauError(f"explicit side map does not cover clause {c}")
            ambiguous.append((my_path, c, side))
        kids = tuple(replace(walk(child, my_path + (i,)), side=side)
                     for i, child in enumerate(node.children))
        return replace(node, children=kids)

    sided = replace(t, root=walk(t.root, ()))
    return SideAssignment(sided, tuple(ambiguous))


# ---------------------------------------------------------------------------
# Validation

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple = ()

    def first(self) -> str:
        return self.problems[0] if self.problems else ""


def validate(t: Tableau, permutation_tolerant: bool = False,
             require_sides: bool = True) -> ValidationReport:
    """Check the defining conditions: ordered clause-instance property per
    side, sibling side uniformity, leaf-closedness, and target correctness."""
    problems = []
    for node_path, node, branch in t.walk():
        if node.literal is None and node_path != ():
            problems.append(f"non-root node at {node_path} has no literal")
            continue
        if not node.is_leaf():
            c = clause_of(node)
            sides = {child.side for child in node.children}
            if len(sides) > 1:
                problems.append(f"siblings below {node_path} have mixed sides {sides}")
                continue
            side = next(iter(sides))
            if side is None:
                if require_sides:
                    problems.append(f"children of {node_path} have no side label")
                    continue
                pools = t.for_f + t.for_g
            elif side == F:
                pools = t.for_f
            elif side == G:
                pools = t.for_g
            else:
                problems.append(f"bad side {side!r} below {node_path}")
                continue
            if not any(match_clause(p, c, permutation_tolerant) is not None
                       for p in pools):
                where = f"side {side}" if side else "the inputs"
                problems.append(f"clause {c} at {node_path} is not an instance "
                                f"of a clause of {where}")
        else:
            if node_path == ():
                problems.append("the tableau is a bare root")
                continue
            if node.target is None:
                problems.append(f"leaf {node.literal} at {node_path} has no target")
                continue
            if not (1 <= node.target < len(branch) - 1):
                problems.append(f"leaf {node.literal} at {node_path} has target "
                                f"{node.target} outside its strict ancestors")
                continue
            anc = branch[node.target]
            if anc.literal != complement(node.literal):
                problems.append(f"target of leaf {node.literal} at {node_path} "
                                f"is not complementary (found {anc.literal})")
    return ValidationReport(not problems, tuple(problems))


def is_ground_tableau(t: Tableau) -> bool:
    return all(node.literal is None or is_ground(node.literal)
               for _, node, _ in t.walk())


# ---------------------------------------------------------------------------
# Exchange format (JSON)

def _node_to_obj(node: TabNode, annotations: dict | None, node_path: tuple) -> dict:
    obj = {
        "literal": None if node.literal is None else str(node.literal),
        "side": node.side,
        "target": node.target,
        "children": [_node_to_obj(c, annotations, node_path + (i,))
                     for i, c in enumerate(node.children)],
    }
    if annotations is not None and node_path in annotations:
        obj["ipol"] = render(annotations[node_path])
    return obj


def tableau_to_json(t: Tableau, annotations: dict | None = None) -> str:
    obj = {
        "f_clauses": [str(c) for c in t.for_f],
        "g_clauses": [str(c) for c in t.for_g],
        "root": _node_to_obj(t.root, annotations, ()),
    }
    return json.dumps(obj, indent=2)


def _node_from_obj(obj: dict, symbols: dict, is_root: bool) -> TabNode:
    lit_text = obj.get("literal")
    if is_root != (lit_text is None):
        raise TableauError("exactly the root must have a null literal")
    lit = None if lit_text is None else parse_literal(lit_text, equality=True,
                                                      symbols=symbols)
    side = obj.get("side")
    if side not in (None, F, G):
        raise TableauError(f"bad side {side!r} in tableau JSON")
    target = obj.get("target")
    if target is not None and (not isinstance(target, int) or target < 1):
        raise TableauError(f"bad target {target!r} in tableau JSON")
    children = tuple(_node_from_obj(c, symbols, False)
                     for c in obj.get("children", ()))
    return TabNode(literal=lit, side=side, target=target, children=children)


def tableau_from_json(text: str) -> Tableau:
    obj = json.loads(text)
    symbols: dict = {}
    for_f = tuple(parse_clause(s, equality=True, symbols=symbols)
                  for s in obj.get("f_clauses", ()))
    for_g = tuple(parse_clause(s, equality=True, symbols=symbols)
                  for s in obj.get("g_clauses", ()))
    root = _node_from_obj(obj["root"], symbols, True)
    return Tableau(root=root, for_f=for_f, for_g=for_g)
