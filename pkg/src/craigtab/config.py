"""Configuration record for the interpolation pipelines and their report."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .prover import ProofLimits, ProverPolicy
from .syntax import Formula, render


@dataclass(frozen=True)
class InterpolationConfig:
    side_policy: str = "prefer-F"        # prefer-F | prefer-G | explicit-map
    side_map: Optional[dict] = None      # clause string -> "F"|"G"
    grounding: str = "least-constant"    # least-constant | explicit-map
    grounding_map: Optional[dict] = None  # var name -> Term
    target_policy: str = "nearest"       # nearest | same-side-preferred
    c0_side: str = "F"                   # F | G
    max_depth: int = 12
    timeout_ms: int = 10000
    max_inferences: int = 10_000_000
    start_clauses: str = "from-G"        # from-G | from-F | negative-clauses | all
    use_regularity: bool = True
    equality: bool = False
    eq_axioms: str = "auto"              # auto | f | g | both
    verify: bool = False
    simplify: bool = True

    def limits(self) -> ProofLimits:
        return ProofLimits(max_depth=self.max_depth, timeout_ms=self.timeout_ms,
                           max_inferences=self.max_inferences)

    def prover_policy(self) -> ProverPolicy:
        return ProverPolicy(start_clauses=self.start_clauses,
                            use_regularity=self.use_regularity)


DEFAULT_CONFIG = InterpolationConfig()


@dataclass
class InterpolationReport:
    proved: bool
    interpolant: Optional[Formula] = None
    failure: Optional[str] = None
    tableau: object = None               # two-sided ground tableau, when built
    annotations: Optional[dict] = None   # node path -> ipol value
    f_clauses: tuple = ()
    g_clauses: tuple = ()
    f_skolems: tuple = ()
    g_skolems: tuple = ()
    fset: tuple = ()                     # lifting symbol sets, sorted
    gset: tuple = ()
    c0_used: bool = False
    ambiguous: tuple = ()                # side-assignment choice log
    replaced: tuple = ()                 # (prefix var name, replaced term)
    free_var_constants: tuple = ()       # (var name, stand-in constant name)
    verification: object = None

    @property
    def interpolant_text(self) -> Optional[str]:
        return None if self.interpolant is None else render(self.interpolant)
