"""Events a good restriction and a narrow proof must satisfy."""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional, Set, Tuple

from cnf.core import Clause
from encoders.layout import VarLayout
from lab.restriction import Pair, RandomRestriction, RestrictionGraph
from proofs.report import CheckReport
from proofs.resolution import ResolutionProof


def check_level_bounds(rho: RandomRestriction) -> Dict[str, bool]:
    """Per level: |A_D| <= 2pt; |A_i| <= 2pt and |A_V| <= 2pt; and |A_I| <= 2pt"""
    budget = rho.budget
    levels = range(1, rho.s + 1)
    item_i = all(len(rho.level(rho.A_D, i)) <= budget for i in levels)
    item_ii = all(
        len(rho.level(rho.A_RL, i)) <= budget and len(rho.level(rho.A_V, i)) <= budget
        for i in range(2, rho.s + 1)
    )
    item_iii = len(rho.A_I) <= budget
    return {'i': item_i, 'ii': item_ii, 'iii': item_iii}


@dataclass
class PatternReport:
    item_i: bool
    item_ii: bool
    witness: Optional[Tuple[Pair, ...]] = None

    @property
    def ok(self) -> bool:
        return self.item_i and self.item_ii


def _forbidden_triple(rho: RandomRestriction, graph: RestrictionGraph) -> Optional[Tuple[Pair, ...]]:
    """Triple of vertices with at least three memberships among A_D, A_V,
    A_I, A_RL whose vertices, children and child edges form a connected graph.

    Only parent-child edges leaving the triple count, so a connected triple
    is one vertex, a parent with one child, a parent with both children or
    a chain over three levels.
    """
    mult = {v: rho.memberships(v) for v in graph.vertices}
    for v in sorted(graph.vertices):
        if mult[v] >= 3:
            return (v, v, v)
    for parent, child, _ in graph.edges:
        if mult[child] >= 1 and mult[parent] + mult[child] >= 3:
            return (parent, parent, child) if mult[parent] >= 2 else (parent, child, child)
    for v in sorted(graph.vertices):
        if mult[v] < 1:
            continue
        kids = [c for _, c in sorted(graph.children(v).items()) if mult[c] >= 1]
        if len(kids) == 2:
            return (v, kids[0], kids[1])
        for child in kids:
            for _, grandchild in sorted(graph.children(child).items()):
                if mult[grandchild] >= 1:
                    return (v, child, grandchild)
    return None


def check_patterns(rho: RandomRestriction) -> PatternReport:
    corner = (rho.s, rho.t)
    item_i = corner not in rho.A_D | rho.A_RL | rho.A_V
    witness = _forbidden_triple(rho, RestrictionGraph.of(rho))
    return PatternReport(item_i, witness is None, witness)


@dataclass
class WidthProfile:
    D_mentioned: Set[Pair] = field(default_factory=set)
    V_important: Set[Pair] = field(default_factory=set)
    I_important: Set[Pair] = field(default_factory=set)
    L_important: Set[Pair] = field(default_factory=set)
    R_important: Set[Pair] = field(default_factory=set)
    # m -> |{j : I(j,m) ∈ E}|
    I_per_input: Dict[int, int] = field(default_factory=dict)
    # (i, ℓ) -> |{j : V(i,j,ℓ) ∈ E}|
    V_per_pivot: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def important(self, family: str) -> Set[Pair]:
        if family == 'D':
            return self.D_mentioned
        return getattr(self, f"{family}_important")


def width_profile(E: Clause, layout: VarLayout) -> WidthProfile:
    """Importance of each pair in E.

    A pair is V- (L-, R-, I-) important when E holds a negative literal of
    its group or at least n/2 (t/2, t/2, r/2) positive ones.
    """
    thresholds = {'V': layout.n, 'L': layout.t, 'R': layout.t, 'I': layout.r}
    positive: Dict[str, Counter] = {family: Counter() for family in thresholds}
    negative: Dict[str, Set[Pair]] = {family: set() for family in thresholds}
    profile = WidthProfile()
    I_counts: Counter = Counter()
    V_counts: Counter = Counter()

    for lit in E:
        family, indices = layout.describe(abs(lit))
        if family == 'D':
            profile.D_mentioned.add((indices[0], indices[1]))
            continue
        if family not in thresholds:
            continue
        pair = (1, indices[0]) if family == 'I' else (indices[0], indices[1])
        if lit < 0:
            negative[family].add(pair)
            continue
        positive[family][pair] += 1
        if family == 'I':
            I_counts[indices[1]] += 1
        elif family == 'V':
            V_counts[(indices[0], indices[2])] += 1

    for family, bound in thresholds.items():
        important = set(negative[family])
        important.update(pair for pair, count in positive[family].items() if 2 * count >= bound)
        setattr(profile, f"{family}_important", important)
    profile.I_per_input = dict(I_counts)
    profile.V_per_pivot = dict(V_counts)
    return profile


def check_widths(pi: ResolutionProof, layout: VarLayout, w: float) -> CheckReport:
    """Every clause of pi against the width bounds w and t/4"""
    report = CheckReport('widths')
    s, t, n = layout.s, layout.t, layout.n
    window = range(max(2, s - n + 1), s)
    for index, step in enumerate(pi.steps):
        profile = width_profile(step.clause, layout)
        for item, family in (('i', 'D'), ('ii', 'I'), ('iii', 'V'), ('iv', 'L'), ('v', 'R')):
            count = len(profile.important(family))
            if count > w:
                kind = 'D-mentioned' if family == 'D' else f"{family}-important"
                report.add(index, f"item ({item}): {count} {kind} pairs exceed w = {w:.4g}")
        for m, count in sorted(profile.I_per_input.items()):
            if 4 * count > t:
                report.add(index, f"item (vi): {count} literals I(·,{m}) exceed t/4")
        for (i, l), count in sorted(profile.V_per_pivot.items()):
            if i in window and 4 * count > t:
                report.add(index, f"item (vii): {count} literals V({i},·,{l}) exceed t/4")
    return report
