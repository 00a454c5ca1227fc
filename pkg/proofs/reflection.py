"""Explicit Res(2) refutations of SAT^{n,r} ∧ REF^{n,r}_{s,t}.

For every cell the builder derives the 2-DNF

    D_{i,j} = ⋁_{ℓ,b} (D(i,j,ℓ,b) ∧ T(ℓ)^b)

("some literal of C_{i,j} is satisfied"), level by level, and finally cuts
D_{s,t} against the clauses saying C_{s,t} is empty.

A cut needs every negated literal of its term on the other side. Where the
available line holds only one of them, the missing one is added by a
Weakening immediately before the cut.
"""

import logging
from typing import Dict, Optional, Tuple

from cnf.core import Clause
from encoders.layout import VarLayout
from encoders.sat import encode_reflection
from proofs.res2 import (
    AndIntro, Axiom, Cut, Input, Res2Proof, Res2Step, TwoDnf, Weakening,
    and_intro_conclusion, clause_line, cut_conclusion, line_size, term,
)
from utils.error_handler import ParamError

logger = logging.getLogger(__name__)


class _Builder:
    def __init__(self, layout: VarLayout):
        self.layout = layout
        self.over = encode_reflection(layout.n, layout.r, layout.s, layout.t, layout)
        self.input_index = {c: m for m, c in enumerate(self.over.clauses)}
        self.steps = []
        self._inputs: Dict[int, int] = {}
        self._axioms: Dict[int, int] = {}
        self._weak_axioms: Dict[Tuple[int, int], int] = {}

    def _emit(self, line: TwoDnf, justification) -> int:
        self.steps.append(Res2Step(line, justification))
        return len(self.steps) - 1

    def line(self, index: int) -> TwoDnf:
        return self.steps[index].line

    def input(self, c: Clause) -> int:
        m = self.input_index[frozenset(c)]
        if m not in self._inputs:
            self._inputs[m] = self._emit(clause_line(self.over.clauses[m]), Input(m))
        return self._inputs[m]

    def axiom(self, var: int) -> int:
        if var not in self._axioms:
            self._axioms[var] = self._emit(clause_line((var, -var)), Axiom(var))
        return self._axioms[var]

    def and_intro(self, i: int, j: int, l1: int, l2: int) -> int:
        return self._emit(and_intro_conclusion(self.line(i), self.line(j), l1, l2), AndIntro(i, j, l1, l2))

    def cut(self, i: int, j: int, lits) -> int:
        t = term(*lits)
        return self._emit(cut_conclusion(self.line(i), self.line(j), t), Cut(i, j, t))

    def weaken(self, i: int, *extra_terms) -> int:
        return self._emit(self.line(i) | frozenset(extra_terms), Weakening(i))

    def weak_axiom(self, var: int, lit: int) -> int:
        """x ∨ ¬x ∨ lit, shared by every cut that needs it"""
        key = (var, lit)
        if key not in self._weak_axioms:
            self._weak_axioms[key] = self.weaken(self.axiom(var), term(lit))
        return self._weak_axioms[key]

    def size_since(self, start: int) -> int:
        return sum(line_size(step.line) for step in self.steps[start:])


def _t_lit(layout: VarLayout, l: int, b: int) -> int:
    """T(ℓ)^b"""
    return layout.T(l) if b == 1 else -layout.T(l)


def _base_case(B: _Builder, j: int) -> int:
    """D_{1,j} from the SAT clauses and the C-variable input clauses"""
    layout = B.layout
    n, r = layout.n, layout.r
    per_input = []
    for m in range(1, r + 1):
        current = B.input(frozenset(layout.T_lit(m, l, b) for l in range(1, n + 1) for b in (0, 1)))
        for l in range(1, n + 1):
            for b in (1, 0):
                T_mlb, C_mlb, D_1jlb = layout.T_lit(m, l, b), layout.C(m, l, b), layout.D(1, j, l, b)
                in_clause = B.input(frozenset((-T_mlb, C_mlb)))
                weakening = B.input(frozenset((-layout.I(j, m), -C_mlb, D_1jlb)))
                lifted = B.cut(in_clause, weakening, (C_mlb,))
                satisfied = B.input(frozenset((-T_mlb, _t_lit(layout, l, b))))
                # ¬T(m,ℓ,b) ∨ ¬I(j,m) ∨ (D(1,j,ℓ,b) ∧ T(ℓ)^b)
                conj = B.and_intro(lifted, satisfied, D_1jlb, _t_lit(layout, l, b))
                current = B.cut(current, conj, (T_mlb,))
        per_input.append(current)

    current = B.input(frozenset(layout.I(j, m) for m in range(1, r + 1)))
    for m, derived in enumerate(per_input, start=1):
        current = B.cut(current, derived, (layout.I(j, m),))
    return current


def _premise_step(B: _Builder, i: int, j: int, jp: int, l: int, b: int, previous: int) -> int:
    """¬P_b(i,j,j') ∨ ¬V(i,j,ℓ) ∨ T(ℓ)^b ∨ D_{i,j} from D_{i-1,j'}.

    P_1 is L (the premise holding x_ℓ), P_0 is R (the premise holding ¬x_ℓ).
    """
    layout = B.layout
    side = 'L' if b == 1 else 'R'
    P = layout.P(side, i, j, jp)
    V = layout.V(i, j, l)
    D_prev = layout.D

    # the premise holds x_ℓ^b, so not x_ℓ^{1-b}
    cut_clause = B.input(frozenset((-P, -V, D_prev(i - 1, jp, l, b))))
    nontaut = B.input(frozenset((-D_prev(i - 1, jp, l, 1), -D_prev(i - 1, jp, l, 0))))
    no_complement = B.cut(cut_clause, nontaut, (D_prev(i - 1, jp, l, b),))
    no_complement = B.weaken(no_complement, term(_t_lit(layout, l, b)))
    current = B.cut(previous, no_complement, (D_prev(i - 1, jp, l, 1 - b), _t_lit(layout, l, 1 - b)))

    # the pivot literal x_ℓ^b is either false or T(ℓ)^b holds
    support = B.weak_axiom(layout.T(l), -D_prev(i - 1, jp, l, b))
    current = B.cut(current, support, (D_prev(i - 1, jp, l, b), _t_lit(layout, l, b)))

    for lp in range(1, layout.n + 1):
        if lp == l:
            continue
        for bp in (1, 0):
            transfer = B.input(frozenset((-P, -V, -D_prev(i - 1, jp, lp, bp), layout.D(i, j, lp, bp))))
            carried = B.and_intro(transfer, B.axiom(layout.T(lp)), layout.D(i, j, lp, bp), _t_lit(layout, lp, bp))
            current = B.cut(current, carried, (D_prev(i - 1, jp, lp, bp), _t_lit(layout, lp, bp)))

    return B.weaken(
        current,
        term(layout.D(i, j, l, 1), _t_lit(layout, l, 1)),
        term(layout.D(i, j, l, 0), _t_lit(layout, l, 0)),
    )


def _induction_step(B: _Builder, i: int, j: int, previous: Dict[int, int]) -> int:
    layout = B.layout
    t = layout.t
    by_pivot = []
    for l in range(1, layout.n + 1):
        both = {}
        for b in (1, 0):
            side = 'L' if b == 1 else 'R'
            current = B.input(frozenset(layout.P(side, i, j, jp) for jp in range(1, t + 1)))
            for jp in range(1, t + 1):
                derived = _premise_step(B, i, j, jp, l, b, previous[jp])
                current = B.cut(current, derived, (layout.P(side, i, j, jp),))
            both[b] = current
        # ¬V(i,j,ℓ) ∨ D_{i,j}
        by_pivot.append(B.cut(both[1], both[0], (layout.T(l),)))

    current = B.input(frozenset(layout.V(i, j, l) for l in range(1, layout.n + 1)))
    for l, derived in enumerate(by_pivot, start=1):
        current = B.cut(current, derived, (layout.V(i, j, l),))
    return current


def build_reflection_refutation(n: int, r: int, s: int, t: int,
                                layout: Optional[VarLayout] = None) -> Res2Proof:
    if min(n, r, t) < 1 or s < 2:
        raise ParamError(f"need n, r, t >= 1 and s >= 2, got n={n}, r={r}, s={s}, t={t}")
    if layout is None:
        layout = VarLayout(n, r, s, t, with_sat=True)
    B = _Builder(layout)

    level = {j: _base_case(B, j) for j in range(1, t + 1)}
    base_size = B.size_since(0)

    mark = len(B.steps)
    for i in range(2, s + 1):
        level = {j: _induction_step(B, i, j, level) for j in range(1, t + 1)}
    induction_size = B.size_since(mark)

    mark = len(B.steps)
    current = level[t]
    for l in range(1, n + 1):
        for b in (0, 1):
            empty = B.input(frozenset((-layout.D(s, t, l, b),)))
            empty = B.weaken(empty, term(_t_lit(layout, l, 1 - b)))
            current = B.cut(current, empty, (layout.D(s, t, l, b), _t_lit(layout, l, b)))
    finish_size = B.size_since(mark)

    proof = Res2Proof(
        B.steps, B.over,
        section_sizes={'base': base_size, 'induction': induction_size, 'finish': finish_size},
    )
    logger.debug(
        f"Res(2) refutation for n={n}, r={r}, s={s}, t={t}: "
        f"{len(proof)} lines, size {proof.size}"
    )
    return proof


def size_bound(n: int, r: int, s: int, t: int) -> int:
    """trn² + tr² + st²n³ + st³n"""
    return t * r * n * n + t * r * r + s * t * t * n ** 3 + s * t ** 3 * n
