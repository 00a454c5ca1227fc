"""One step of the adversary walking a resolution refutation of REF^F_{s,t}↾ρ
from the empty clause towards the inputs.

The adversary holds an admissible sigma and a clause E such that

  (i)  every literal of E over dom(sigma) is falsified by sigma, and
  (ii) every pair that is D-mentioned or V-, I-, L-, R-important in E has
       the matching group in dom(sigma).

Given the two premises E0, E1 of E and the pivot variable Q, it answers
with a new assignment tau and the premise E_b for which (i) and (ii) hold
again.
"""

import logging
from typing import Mapping, Optional, Set, Tuple

from cnf.core import Clause, Cnf, PartialAssignment, canonical, is_tautological
from encoders.layout import VarLayout
from lab.admissible import GROUP_FAMILIES, Groups, _assignment
from lab.events import width_profile
from proofs.report import CheckReport
from utils.error_handler import AvoidSetExhausted, PreconditionFailed

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def _home(family: str, indices: Tuple[int, ...]) -> Pair:
    if family == 'I':
        return 1, indices[0]
    return indices[0], indices[1]


def cleanup(sigma: Mapping[int, int], E: Clause, rho, layout: VarLayout) -> PartialAssignment:
    """The smallest admissible part of sigma still satisfying (ii) for E.

    Only groups outside dom(rho) are unset: first L and R groups that are
    not important, then D groups that are not mentioned and carry no edge,
    then V and I groups that are not important over an unset D group.
    """
    fixed = _assignment(rho)
    profile = width_profile(E, layout)
    out = dict(sigma)
    groups = Groups(out, layout)

    def removable(family: str, pair: Pair) -> bool:
        variables = groups.variables(family, pair)
        return (
            any(var in out for var in variables)
            and not any(var in fixed for var in variables)
            and pair not in profile.important(family)
        )

    def unset(family: str, pair: Pair):
        for var in groups.variables(family, pair):
            out.pop(var, None)

    for family in ('L', 'R'):
        for pair in list(groups.pairs(family)):
            if removable(family, pair):
                unset(family, pair)

    incident: Set[Pair] = set()
    for family in ('L', 'R'):
        for i, j in groups.pairs(family):
            child = groups.value(family, (i, j))
            if child is not None:
                incident.update(((i, j), (i - 1, child)))
    for pair in list(groups.pairs('D')):
        if pair not in incident and removable('D', pair):
            unset('D', pair)

    for family in ('V', 'I'):
        for pair in list(groups.pairs(family)):
            if groups.clause(pair) is None and removable(family, pair):
                unset(family, pair)
    return out


def adversary_conditions(tau: Mapping[int, int], E: Clause, layout: VarLayout) -> CheckReport:
    """Conditions (i) and (ii) for tau and E"""
    report = CheckReport('adversary')
    for lit in canonical(E):
        value = tau.get(abs(lit))
        if value is not None and value == (1 if lit > 0 else 0):
            report.add('i', f"{'' if lit > 0 else '¬'}{layout.name(abs(lit))} is satisfied")
    profile = width_profile(E, layout)
    groups = Groups(tau, layout)
    for family in GROUP_FAMILIES:
        for pair in sorted(profile.important(family)):
            if any(var not in tau for var in groups.variables(family, pair)):
                report.add('ii', f"{family}-group of {pair} is important but not fully assigned")
    return report


class _Extender:
    def __init__(self, sigma: Mapping[int, int], E: Clause, f: Cnf, layout: VarLayout):
        self.sigma: PartialAssignment = dict(sigma)
        self.groups = Groups(self.sigma, layout)
        self.positive = {lit for lit in E if lit > 0}
        self.f = f
        self.layout = layout

    def set_group(self, family: str, pair: Pair, chosen: int):
        for k, var in enumerate(self.groups.variables(family, pair), start=1):
            self.sigma[var] = 1 if k == chosen else 0

    def set_cell(self, pair: Pair, c: Clause):
        i, j = pair
        for l in range(1, self.layout.n + 1):
            self.sigma[self.layout.D(i, j, l, 1)] = 1 if l in c else 0
            self.sigma[self.layout.D(i, j, l, 0)] = 1 if -l in c else 0

    def fresh(self, family: str, pair: Pair, avoid: Optional[int] = None) -> int:
        """Smallest k whose variable is not a positive literal of E (nor avoid)"""
        for k, var in enumerate(self.groups.variables(family, pair), start=1):
            if var not in self.positive and var != avoid:
                return k
        raise PreconditionFailed(f"every {family}-variable of {pair} occurs positively in E")

    def covering_input(self, c: Clause) -> int:
        for m, cm in enumerate(self.f.clauses, start=1):
            if cm <= c:
                return m
        raise PreconditionFailed(f"no input clause is contained in {canonical(c)}")

    def choose_value(self, family: str, pair: Pair, avoid: int):
        """Case 1: a V or I group set to a value outside E ∪ {Q}"""
        self.set_group(family, pair, self.fresh(family, pair, avoid))

    def choose_cell(self, pair: Pair):
        """Case 2: a cell with a full all-positive clause (or □ at (s,t))"""
        layout = self.layout
        i, j = pair
        if i == 1:
            m = self.groups.value('I', pair)
            if m is None:
                m = self.fresh('I', pair)
                self.set_group('I', pair, m)
            base = self.f.clauses[m - 1]
            if is_tautological(base):
                raise PreconditionFailed(f"input clause {m} is tautological")
            missing = frozenset(l for l in range(1, layout.n + 1) if l not in base and -l not in base)
            self.set_cell(pair, base | missing)
            return
        if pair == (layout.s, layout.t):
            self.set_cell(pair, frozenset())
        else:
            self.set_cell(pair, frozenset(range(1, layout.n + 1)))
        if self.groups.value('V', pair) is None:
            self.set_group('V', pair, self.fresh('V', pair))

    def level_vertices(self, i: int) -> Set[int]:
        """Columns of level i touched by sigma"""
        columns = set()
        for family in GROUP_FAMILIES:
            if family == 'I' and i != 1:
                continue
            if family in ('V', 'L', 'R') and i < 2:
                continue
            for j in range(1, self.layout.t + 1):
                if not self.groups.is_untouched(family, (i, j)):
                    columns.add(j)
        return columns

    def choose_premise(self, side: str, pair: Pair):
        """Case 3: point an L or R group at an untouched column one level down"""
        layout = self.layout
        n, t = layout.n, layout.t
        i, j = pair
        if self.groups.clause(pair) is None:
            self.choose_cell(pair)
        C = self.groups.clause(pair)
        l = self.groups.value('V', pair)
        lit = l if side == 'L' else -l

        U1 = self.level_vertices(i - 1)
        U2 = {jp for jp in range(1, t + 1) if layout.P(side, i, j, jp) in self.positive}
        child_value: Optional[Tuple[str, int]] = None
        if i == 2:
            if len(C) < n - 1:
                raise PreconditionFailed(f"C_{{2,{j}}} has {len(C)} < n-1 literals")
            child = (C - {-lit}) | {lit}
            m = self.covering_input(child)
            U3 = {jp for jp in range(1, t + 1) if layout.I(jp, m) in self.positive}
            child_value = ('I', m)
        elif len(C) < n - 1:
            child = C | {lit}
            mentioned = {abs(x) for x in child}
            lp = min(k for k in range(1, n + 1) if k not in mentioned)
            U3 = {jp for jp in range(1, t + 1) if layout.V(i - 1, jp, lp) in self.positive}
            child_value = ('V', lp)
        else:
            child = (C - {-lit}) | {lit}
            U3 = set()

        available = [jp for jp in range(1, t + 1) if jp not in U1 | U2 | U3]
        if not available:
            sizes = {'U1': len(U1), 'U2': len(U2), 'U3': len(U3)}
            raise AvoidSetExhausted(
                f"no column of level {i - 1} left for {side}({i},{j}): {sizes}", sizes
            )
        jp = available[0]
        self.set_group(side, pair, jp)
        self.set_cell((i - 1, jp), child)
        if child_value is None:
            self.set_group('V', (i - 1, jp), self.fresh('V', (i - 1, jp)))
        else:
            self.set_group(child_value[0], (i - 1, jp), child_value[1])


def _falsified_premise(tau: Mapping[int, int], Q: int, E0: Clause, E1: Clause) -> int:
    lit = Q if tau[Q] == 0 else -Q
    if lit in E0:
        return 0
    if lit in E1:
        return 1
    raise PreconditionFailed(f"neither premise holds the literal {lit}")


def pivot_case(sigma1: Mapping[int, int], E: Clause, Q: int, layout: VarLayout) -> str:
    """Which branch of the step handles Q against the cleaned-up sigma1"""
    if Q in sigma1:
        return "assigned"
    family, indices = layout.describe(Q)
    if _home(family, indices) not in width_profile(E | {Q}, layout).important(family):
        return "unimportant"
    return {"V": "case1", "I": "case1", "D": "case2"}.get(family, "case3")


def adversary_step(sigma: Mapping[int, int], E: Clause, E0: Clause, E1: Clause, Q: int,
                   rho, f: Cnf, layout: VarLayout) -> Tuple[PartialAssignment, int]:
    sigma1 = cleanup(sigma, E, rho, layout)
    case = pivot_case(sigma1, E, Q, layout)
    if case == "assigned":
        logger.debug(f"pivot {layout.name(Q)} already assigned")
        return sigma1, _falsified_premise(sigma1, Q, E0, E1)

    family, indices = layout.describe(Q)
    pair = _home(family, indices)
    if case == "unimportant":
        logger.debug(f"pivot {layout.name(Q)} leaves {pair} unimportant")
        if Q in E0:
            return sigma1, 0
        if Q in E1:
            return sigma1, 1
        raise PreconditionFailed(f"neither premise holds {layout.name(Q)} positively")

    extender = _Extender(sigma1, E, f, layout)
    if family in ('V', 'I'):
        logger.debug(f"case 1: {family}-group of {pair}")
        extender.choose_value(family, pair, Q)
    elif family == 'D':
        logger.debug(f"case 2: cell {pair}")
        extender.choose_cell(pair)
    else:
        logger.debug(f"case 3: {family}-group of {pair}")
        extender.choose_premise(family, pair)
    tau = extender.sigma
    return tau, _falsified_premise(tau, Q, E0, E1)

