"""SAT^{n,r}, the C-variable assignment γ_F and the substitution τ.

γ_F pins the C-variables to describe a fixed formula F; after it, τ maps
every T-variable to a constant or a literal of F so that SAT^{n,r} collapses
onto F plus tautological clauses.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from cnf.core import Clause, Cnf, PartialAssignment, is_tautological
from encoders.layout import VarLayout
from encoders.ref import ClauseFamily, families_to_cnf, ref_nr_families
from proofs.resolution import (
    InputWeakening, Justification, ResolutionProof, ResStep, Resolvent, StepWeakening,
)
from utils.error_handler import LayoutError, RepairFailure

logger = logging.getLogger(__name__)


def sat_families(layout: VarLayout) -> List[ClauseFamily]:
    if not layout.with_sat:
        raise LayoutError("SAT^{n,r} needs a layout built with with_sat=True")
    n, r = layout.n, layout.r
    lits = range(1, n + 1)
    rows = range(1, r + 1)

    def at_least_one():
        for m in rows:
            yield frozenset(layout.T_lit(m, l, b) for l in lits for b in (1, 0))

    def by_positive():
        for m in rows:
            for l in lits:
                yield frozenset((-layout.T_lit(m, l, 1), layout.T(l)))

    def by_negative():
        for m in rows:
            for l in lits:
                yield frozenset((-layout.T_lit(m, l, 0), -layout.T(l)))

    def lit_in_clause():
        for m in rows:
            for l in lits:
                for b in (1, 0):
                    yield frozenset((-layout.T_lit(m, l, b), layout.C(m, l, b)))

    return [
        ClauseFamily('sat-at-least-one', r, at_least_one),
        ClauseFamily('sat-by-positive', r * n, by_positive),
        ClauseFamily('sat-by-negative', r * n, by_negative),
        ClauseFamily('sat-lit-in-clause', 2 * r * n, lit_in_clause),
    ]


def encode_sat(n: int, r: int, layout: Optional[VarLayout] = None) -> Cnf:
    if layout is None:
        layout = VarLayout(n, r, 2, 1, with_sat=True)
    if (layout.n, layout.r) != (n, r):
        raise LayoutError(f"layout built for n={layout.n}, r={layout.r}, asked for n={n}, r={r}")
    return families_to_cnf(sat_families(layout), layout.num_vars)


def gamma_F(f: Cnf, layout: VarLayout) -> PartialAssignment:
    """C(m,ℓ,b) = 1 exactly when x_ℓ^b is a literal of C_m"""
    if (layout.n, layout.r) != (f.num_vars, len(f.clauses)):
        raise LayoutError("layout does not match the formula's n and r")
    gamma: PartialAssignment = {}
    for m, c in enumerate(f.clauses, start=1):
        for l in range(1, layout.n + 1):
            gamma[layout.C(m, l, 1)] = 1 if l in c else 0
            gamma[layout.C(m, l, 0)] = 1 if -l in c else 0
    return gamma


@dataclass
class Substitution:
    """Variables mapped to constants or to literals of a base formula.

    The two maps are disjoint; targets never mention mapped variables of
    the source, so application is a single pass.
    """
    constants: Dict[int, int] = field(default_factory=dict)
    literals: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        overlap = set(self.constants) & set(self.literals)
        if overlap:
            raise ValueError(f"variables mapped twice: {sorted(overlap)}")
        for var, value in self.constants.items():
            if value not in (0, 1):
                raise ValueError(f"constant for variable {var} must be 0 or 1, got {value}")

    def __len__(self) -> int:
        return len(self.constants) + len(self.literals)

    def domain(self):
        return set(self.constants) | set(self.literals)


def tau_substitution(f: Cnf, layout: VarLayout) -> Substitution:
    """τ on the T-variables; T(ℓ) for a variable in no clause of f goes to 0"""
    tau = Substitution()
    occurring = set()
    for m, c in enumerate(f.clauses, start=1):
        for l in range(1, layout.n + 1):
            for b in (0, 1):
                lit = l if b == 1 else -l
                if lit in c:
                    tau.literals[layout.T_lit(m, l, b)] = lit
                    occurring.add(l)
                else:
                    tau.constants[layout.T_lit(m, l, b)] = 0
    for l in range(1, layout.n + 1):
        if l in occurring:
            tau.literals[layout.T(l)] = l
        else:
            tau.constants[layout.T(l)] = 0
    return tau


def substitute_clause(c: Clause, tau: Substitution) -> Optional[Clause]:
    """τ(c), or None when a constant satisfies c; tautologies are kept"""
    out = set()
    for lit in c:
        var = abs(lit)
        if var in tau.constants:
            value = tau.constants[var] if lit > 0 else 1 - tau.constants[var]
            if value == 1:
                return None
            continue
        if var in tau.literals:
            target = tau.literals[var]
            out.add(target if lit > 0 else -target)
        else:
            out.add(lit)
    return frozenset(out)


def apply_substitution(f: Cnf, tau: Substitution, num_vars: int) -> Cnf:
    """Substitute, drop satisfied clauses, keep tautological ones verbatim"""
    kept = []
    for c in f.clauses:
        image = substitute_clause(c, tau)
        if image is not None:
            kept.append(image)
    return Cnf(tuple(kept), num_vars)


def substitute_proof(pi: ResolutionProof, tau: Substitution, num_vars: int) -> ResolutionProof:
    """Carry a checked proof of pi.over to a proof of the substituted formula.

    The result proves from drop_tautologies(apply_substitution(pi.over, ...))
    and is never longer: steps that become satisfied or tautological vanish
    and every other step is re-justified.
    """
    base_images = [substitute_clause(c, tau) for c in pi.over.clauses]
    input_index: Dict[int, int] = {}
    survivors = []
    for index, image in enumerate(base_images):
        if image is not None and not is_tautological(image):
            input_index[index] = len(survivors)
            survivors.append(image)
    target = Cnf(tuple(survivors), num_vars)

    images: List[Optional[Clause]] = []
    new_index: List[Optional[int]] = []
    steps: List[ResStep] = []
    for index, step in enumerate(pi.steps):
        image = substitute_clause(step.clause, tau)
        if image is None or is_tautological(image):
            images.append(None)
            new_index.append(None)
            continue

        just = step.justification
        if isinstance(just, InputWeakening):
            if just.m not in input_index:
                raise RepairFailure(f"step {index}: input clause {just.m} vanished but the step did not")
            repaired: Justification = InputWeakening(input_index[just.m])
        elif isinstance(just, StepWeakening):
            if new_index[just.u] is None:
                raise RepairFailure(f"step {index}: weakened source {just.u} vanished")
            repaired = StepWeakening(new_index[just.u])
        else:
            repaired = _substitute_resolvent(index, just, tau, image, images, new_index)

        images.append(image)
        new_index.append(len(steps))
        steps.append(ResStep(image, repaired))

    logger.debug(f"Substituted proof of {len(pi)} steps into {len(steps)} steps")
    return ResolutionProof(tuple(steps), target)


def _substitute_resolvent(index, just: Resolvent, tau: Substitution, image: Clause,
                          images, new_index) -> Justification:
    def weakening_of(source: int) -> Justification:
        if new_index[source] is None or not images[source] <= image:
            raise RepairFailure(f"step {index}: cannot re-justify from premise {source}")
        return StepWeakening(new_index[source])

    if just.pivot in tau.constants:
        # a constant pivot falsifies its literal in one premise
        return weakening_of(just.w if tau.constants[just.pivot] == 1 else just.v)

    pivot_lit = tau.literals.get(just.pivot, just.pivot)
    left, right = new_index[just.v], new_index[just.w]
    if left is None:
        return weakening_of(just.w)
    if right is None:
        return weakening_of(just.v)
    if pivot_lit > 0:
        return Resolvent(left, right, pivot_lit)
    return Resolvent(right, left, -pivot_lit)



def reflection_families(layout: VarLayout) -> List[ClauseFamily]:
    """SAT^{n,r} ∧ REF^{n,r}_{s,t}, the negated reflection principle"""
    return sat_families(layout) + ref_nr_families(layout)


def encode_reflection(n: int, r: int, s: int, t: int, layout: Optional[VarLayout] = None) -> Cnf:
    if layout is None:
        layout = VarLayout(n, r, s, t, with_sat=True)
    if (layout.n, layout.r, layout.s, layout.t) != (n, r, s, t):
        raise LayoutError(f"layout does not match n={n}, r={r}, s={s}, t={t}")
    return families_to_cnf(reflection_families(layout), layout.num_vars)
