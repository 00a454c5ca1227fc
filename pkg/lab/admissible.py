"""Admissible partial assignments to the REF^F_{s,t} variables.

Variables come in groups with a home pair: D(i,j,·,·), V(i,j,·), I(j,·)
(home (1,j)), L(i,j,·) and R(i,j,·). A group is set when all its
variables are assigned and, for V, I, L and R, exactly one of them is 1.
"""

import logging
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from cnf.core import Clause, Cnf, PartialAssignment, canonical, is_tautological
from encoders.layout import VarLayout
from encoders.ref import ref_F_families
from lab.events import check_patterns
from lab.restriction import Pair, RandomRestriction, RestrictionGraph
from proofs.report import CheckReport
from utils.error_handler import PreconditionFailed

logger = logging.getLogger(__name__)

GROUP_FAMILIES = ('D', 'V', 'I', 'L', 'R')


class Groups:
    """Read access to the groups of one assignment"""

    def __init__(self, sigma: Mapping[int, int], layout: VarLayout):
        self.sigma = sigma
        self.layout = layout

    def variables(self, family: str, pair: Pair) -> List[int]:
        layout = self.layout
        i, j = pair
        if family == 'D':
            return [layout.D(i, j, l, b) for l in range(1, layout.n + 1) for b in (1, 0)]
        if family == 'V':
            return [layout.V(i, j, l) for l in range(1, layout.n + 1)]
        if family == 'I':
            return [layout.I(j, m) for m in range(1, layout.r + 1)]
        return [layout.P(family, i, j, jp) for jp in range(1, layout.t + 1)]

    def pairs(self, family: str) -> Iterator[Pair]:
        layout = self.layout
        if family == 'I':
            for j in range(1, layout.t + 1):
                yield 1, j
            return
        first = 1 if family == 'D' else 2
        for i in range(first, layout.s + 1):
            for j in range(1, layout.t + 1):
                yield i, j

    def assigned(self, family: str, pair: Pair) -> int:
        return sum(var in self.sigma for var in self.variables(family, pair))

    def is_untouched(self, family: str, pair: Pair) -> bool:
        return self.assigned(family, pair) == 0

    def clause(self, pair: Pair) -> Optional[Clause]:
        """C_{i,j} if D(i,j,·,·) is set"""
        i, j = pair
        lits = []
        for l in range(1, self.layout.n + 1):
            pos = self.sigma.get(self.layout.D(i, j, l, 1))
            neg = self.sigma.get(self.layout.D(i, j, l, 0))
            if pos is None or neg is None:
                return None
            if pos:
                lits.append(l)
            if neg:
                lits.append(-l)
        return frozenset(lits)

    def value(self, family: str, pair: Pair) -> Optional[int]:
        """The k the group is set to, or None"""
        values = [self.sigma.get(var) for var in self.variables(family, pair)]
        if None in values or values.count(1) != 1:
            return None
        return values.index(1) + 1

    def is_set(self, family: str, pair: Pair) -> bool:
        if family == 'D':
            return self.clause(pair) is not None
        return self.value(family, pair) is not None


def _assignment(rho: Union[RandomRestriction, Mapping[int, int]]) -> Mapping[int, int]:
    return rho.rho if isinstance(rho, RandomRestriction) else rho


def is_admissible(sigma: Mapping[int, int], rho, f: Cnf, layout: VarLayout) -> CheckReport:
    report = CheckReport('admissible')
    groups = Groups(sigma, layout)
    s, t, n = layout.s, layout.t, layout.n

    for var, value in _assignment(rho).items():
        if sigma.get(var) != value:
            report.add('extends', f"{layout.name(var)} differs from rho")

    for family in GROUP_FAMILIES:
        for pair in groups.pairs(family):
            if not groups.is_untouched(family, pair) and not groups.is_set(family, pair):
                report.add('C1', f"{family}-group of {pair} is partially assigned")

    for i, j in groups.pairs('D'):
        C = groups.clause((i, j))
        pivot = groups.value('V', (i, j)) if i >= 2 else None

        for side in ('L', 'R'):
            if i < 2:
                continue
            child = groups.value(side, (i, j))
            if child is None:
                continue
            if C is None or groups.clause((i - 1, child)) is None:
                report.add('C2', f"{side}({i},{j}) set to {child} without both D-groups set")

        if C is None:
            continue
        if i == 1 and groups.value('I', (1, j)) is None:
            report.add('C3', f"D(1,{j}) set but I({j}) is not")
        if i >= 2 and pivot is None:
            report.add('C3', f"D({i},{j}) set but V({i},{j}) is not")

        if is_tautological(C):
            report.add('C4', f"C_{{{i},{j}}} = {canonical(C)} is tautological")
        if len(C) < min(s - i, n):
            report.add('C4', f"C_{{{i},{j}}} has {len(C)} < min(s-i, n) literals")
        if pivot is not None and len(C) < n and (pivot in C or -pivot in C):
            report.add('C4', f"C_{{{i},{j}}} mentions its pivot x{pivot}")

        if (i, j) == (s, t) and C:
            report.add('C5', f"C_{{{s},{t}}} = {canonical(C)} is not empty")

        if i == 1:
            m = groups.value('I', (1, j))
            if m is not None and not f.clauses[m - 1] <= C:
                report.add('C6', f"C_{{1,{j}}} does not weaken input clause {m}")

    for i, j in groups.pairs('L'):
        pivot = groups.value('V', (i, j))
        C = groups.clause((i, j))
        for side, lit_sign in (('L', 1), ('R', -1)):
            child = groups.value(side, (i, j))
            if child is None or pivot is None:
                continue
            C_child = groups.clause((i - 1, child))
            if C_child is None:
                continue
            lit = lit_sign * pivot
            if lit not in C_child:
                report.add('C7', f"{side}-premise ({i - 1},{child}) of ({i},{j}) lacks {lit}")
            if C is not None and not (C_child - {lit}) <= C:
                missing = canonical(C_child - {lit} - C)
                report.add('C8', f"({i},{j}) drops {missing} of its {side}-premise")

    for i in range(2, s + 1):
        seen: Dict[int, Tuple[int, str]] = {}
        for j in range(1, t + 1):
            for side in ('L', 'R'):
                child = groups.value(side, (i, j))
                if child is None:
                    continue
                if child in seen:
                    report.add('C9', f"h_{i} maps both {seen[child]} and {(j, side)} to {child}")
                seen[child] = (j, side)
    return report


def _flip(c: Clause, pivot: int, side: str) -> Clause:
    """c with its x_pivot literal replaced by the side's polarity"""
    return (c - {pivot, -pivot}) | {pivot if side == 'L' else -pivot}


def _complete(base: Clause, n: int, side: str) -> Optional[Tuple[Clause, int]]:
    """An n-literal clause containing base and a literal of the side's
    polarity, with that literal's variable; None if there is none."""
    if is_tautological(base):
        return None
    sign = 1 if side == 'L' else -1
    missing = [l for l in range(1, n + 1) if l not in base and -l not in base]
    existing = sorted(abs(lit) for lit in base if lit * sign > 0)
    if existing:
        pivot = existing[0]
        return base | frozenset(missing), pivot
    if not missing:
        return None
    pivot = missing[0]
    return base | {sign * pivot} | frozenset(missing[1:]), pivot


def find_blocked_premise(rho: RandomRestriction, f: Cnf) -> Optional[str]:
    """A component whose preset child rules out every pivot for its parent"""
    graph = RestrictionGraph.of(rho)
    for v in sorted(graph.vertices):
        kids = graph.children(v)
        if not kids or v in rho.cell_clauses or v in rho.V_values:
            continue
        for side, child in sorted(kids.items()):
            if child in rho.cell_clauses:
                sign = 1 if side == 'L' else -1
                if not any(lit * sign > 0 for lit in rho.cell_clauses[child]):
                    return (f"{side}-child {child} of {v} is fixed to "
                            f"{canonical(rho.cell_clauses[child])}, which has no "
                            f"{'positive' if sign > 0 else 'negative'} literal")
            elif child[0] == 1 and child[1] in rho.I_values:
                m = rho.I_values[child[1]]
                if _complete(f.clauses[m - 1], rho.n, side) is None:
                    return f"{side}-child {child} of {v} is tied to input clause {m}, which fits no pivot"
    return None


class _Extension:
    def __init__(self, rho: RandomRestriction, f: Cnf, layout: VarLayout):
        self.rho = rho
        self.f = f
        self.layout = layout
        self.sigma: PartialAssignment = dict(rho.rho)
        self.all_positive = frozenset(range(1, layout.n + 1))

    def _set(self, variables: List[int], chosen: int):
        for k, var in enumerate(variables, start=1):
            self.sigma[var] = 1 if k == chosen else 0

    def cell(self, v: Pair, c: Clause):
        if v in self.rho.cell_clauses:
            return
        i, j = v
        for l in range(1, self.layout.n + 1):
            self.sigma[self.layout.D(i, j, l, 1)] = 1 if l in c else 0
            self.sigma[self.layout.D(i, j, l, 0)] = 1 if -l in c else 0

    def input(self, j: int, c: Clause):
        if j in self.rho.I_values:
            return
        m = next((m for m, cm in enumerate(self.f.clauses, start=1) if cm <= c), None)
        if m is None:
            raise PreconditionFailed(f"no input clause is contained in {canonical(c)}; is F satisfiable?")
        self._set([self.layout.I(j, k) for k in range(1, self.layout.r + 1)], m)

    def pivot(self, v: Pair, preferred: int = 1) -> int:
        l = self.rho.V_values.get(v, preferred)
        if v not in self.rho.V_values:
            i, j = v
            self._set([self.layout.V(i, j, k) for k in range(1, self.layout.n + 1)], l)
        return l

    def justify(self, v: Pair, c: Clause):
        """Set the justification groups a set cell needs"""
        if v[0] == 1:
            self.input(v[1], c)
        else:
            self.pivot(v)

    def top(self, v: Pair, kids: Dict[str, Pair]) -> Tuple[Clause, int]:
        rho = self.rho
        if v in rho.cell_clauses:
            return rho.cell_clauses[v], rho.V_values.get(v, 1)
        if v in rho.V_values:
            return self.all_positive, rho.V_values[v]
        for side, child in sorted(kids.items()):
            if child in rho.cell_clauses:
                c = rho.cell_clauses[child]
                sign = 1 if side == 'L' else -1
                return c, min(abs(lit) for lit in c if lit * sign > 0)
            if child[0] == 1 and child[1] in rho.I_values:
                return _complete(self.f.clauses[rho.I_values[child[1]] - 1], self.layout.n, side)
        return self.all_positive, 1

    def descend(self, v: Pair, c: Clause, graph: RestrictionGraph):
        self.cell(v, c)
        kids = graph.children(v)
        if v[0] == 1 or not kids:
            self.justify(v, c)
            return
        l = self.pivot(v)
        for side, child in sorted(kids.items()):
            self.descend(child, _flip(c, l, side), graph)

    def component(self, root: Pair, graph: RestrictionGraph):
        kids = graph.children(root)
        if not kids:
            if root in self.rho.cell_clauses:
                self.justify(root, self.rho.cell_clauses[root])
            return
        c, l = self.top(root, kids)
        self.cell(root, c)
        self.pivot(root, l)
        for side, child in sorted(kids.items()):
            self.descend(child, _flip(c, l, side), graph)


def extend_to_admissible(rho: RandomRestriction, f: Cnf, layout: VarLayout) -> PartialAssignment:
    """Admissible sigma extending rho that assigns only D, V and I variables"""
    patterns = check_patterns(rho)
    if not patterns.item_i:
        raise PreconditionFailed(f"({rho.s},{rho.t}) is touched by rho")
    if not patterns.item_ii:
        raise PreconditionFailed(f"rho has the dense pattern {patterns.witness}")
    blocked = find_blocked_premise(rho, f)
    if blocked is not None:
        raise PreconditionFailed(f"no admissible extension: {blocked}")

    extension = _Extension(rho, f, layout)
    graph = RestrictionGraph.of(rho)
    for root in graph.roots():
        extension.component(root, graph)
    logger.debug(f"extended {len(rho.rho)} rho-variables to {len(extension.sigma)}")
    return extension.sigma


def check_no_falsified_axiom(sigma: Mapping[int, int], f: Cnf, s: int, t: int,
                             layout: VarLayout) -> CheckReport:
    report = CheckReport('falsified-axiom')
    for family in ref_F_families(f, s, t, layout):
        for c in family.clauses():
            if all(sigma.get(abs(lit)) == (0 if lit > 0 else 1) for lit in c):
                names = " ∨ ".join(("" if lit > 0 else "¬") + layout.name(abs(lit)) for lit in canonical(c))
                report.add(family.name, f"falsified: {names or '□'}")
    return report
