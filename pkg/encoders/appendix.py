"""The sequence-shaped refutation formula REF(F, s̃) and its reduction to REF^F.

REF(F, s̃) describes a refutation as one sequence of s̃ clauses where each
clause is either an input weakening or a resolvent of two earlier clauses.
A second index 0 on V, I, L and R switches between the two options.

am_reduction fixes the first P = s̃ - t(n+1) clauses to weakenings of C_1
that no later clause uses, arranges the remaining t(n+1) clauses into n+1
levels of t, and renames what is left to REF^F_{n+1,t}. The image lacks
exactly the transfer clauses that carry the pivot-complement literal of a
premise (see removable_transfer_clauses); each of them follows from the
cut and non-tautology clauses in three resolution steps.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional

from cnf.core import Clause, Cnf, PartialAssignment, is_tautological, rename_cnf, restrict_cnf
from encoders.layout import AmLayout, VarLayout
from encoders.ref import ClauseFamily, families_to_cnf
from proofs.resolution import InputWeakening, ResolutionProof, ResStep, Resolvent
from utils.error_handler import LayoutError, ParamError

logger = logging.getLogger(__name__)


def am_families(f: Cnf, layout: AmLayout) -> List[ClauseFamily]:
    n, r, S = layout.n, layout.r, layout.s_tilde
    if (n, r) != (f.num_vars, len(f.clauses)):
        raise LayoutError("layout does not match the formula's n and r")
    D, V, I, L, R = layout.D, layout.V, layout.I, layout.L, layout.R
    rows = range(1, S + 1)
    lits = range(1, n + 1)

    def dom(var, top):
        def gen():
            for u in rows:
                yield frozenset(var(u, k) for k in range(top + 1))
        return gen

    def func(var, top):
        def gen():
            for u in rows:
                for k, kp in combinations(range(top + 1), 2):
                    yield frozenset((-var(u, k), -var(u, kp)))
        return gen

    def pair(first, second):
        def gen():
            for u in rows:
                yield frozenset((first(u), second(u)))
        return gen

    def order(var):
        def gen():
            for u in rows:
                for v in range(u, S + 1):
                    yield frozenset((-var(u, v),))
        return gen

    def cut(P, b):
        def gen():
            for u in rows:
                for v in rows:
                    for i in lits:
                        yield frozenset((-P(u, v), -V(u, i), D(v, i, b)))
        return gen

    def transfer(P):
        def gen():
            for u in rows:
                for v in rows:
                    for i in lits:
                        for ip in lits:
                            if ip == i:
                                continue
                            for b in (0, 1):
                                yield frozenset((-P(u, v), -V(u, i), -D(v, ip, b), D(u, ip, b)))
        return gen

    def axioms():
        for u in rows:
            for j, c in enumerate(f.clauses, start=1):
                for lit in sorted(c, key=lambda lit: (abs(lit), lit > 0)):
                    yield frozenset((-I(u, j), D(u, abs(lit), 1 if lit > 0 else 0)))

    def nontaut():
        for u in rows:
            for i in lits:
                yield frozenset((-D(u, i, 0), -D(u, i, 1)))

    def empty():
        for i in lits:
            for b in (0, 1):
                yield frozenset((-D(S, i, b),))

    return [
        ClauseFamily('am-V-dom', S, dom(V, n)),
        ClauseFamily('am-I-dom', S, dom(I, r)),
        ClauseFamily('am-L-dom', S, dom(L, S)),
        ClauseFamily('am-R-dom', S, dom(R, S)),
        ClauseFamily('am-V-func', S * (n + 1) * n // 2, func(V, n)),
        ClauseFamily('am-I-func', S * (r + 1) * r // 2, func(I, r)),
        ClauseFamily('am-L-func', S * (S + 1) * S // 2, func(L, S)),
        ClauseFamily('am-R-func', S * (S + 1) * S // 2, func(R, S)),
        ClauseFamily('am-switch-negative', S, pair(lambda u: -I(u, 0), lambda u: -V(u, 0))),
        ClauseFamily('am-switch-positive', S, pair(lambda u: I(u, 0), lambda u: V(u, 0))),
        ClauseFamily('am-input-no-L', S, pair(lambda u: -I(u, 0), lambda u: -L(u, 0))),
        ClauseFamily('am-input-no-R', S, pair(lambda u: -I(u, 0), lambda u: -R(u, 0))),
        ClauseFamily('am-L-order', S * (S + 1) // 2, order(L)),
        ClauseFamily('am-R-order', S * (S + 1) // 2, order(R)),
        ClauseFamily('am-L-cut', S * S * n, cut(L, 1)),
        ClauseFamily('am-R-cut', S * S * n, cut(R, 0)),
        ClauseFamily('am-L-transf', S * S * n * (n - 1) * 2, transfer(L)),
        ClauseFamily('am-R-transf', S * S * n * (n - 1) * 2, transfer(R)),
        ClauseFamily('am-axioms', S * sum(len(c) for c in f.clauses), axioms),
        ClauseFamily('am-nontaut', S * n, nontaut),
        ClauseFamily('am-empty-clause', 2 * n, empty),
    ]


def encode_ref_am(f: Cnf, s_tilde: int, layout: Optional[AmLayout] = None) -> Cnf:
    if layout is None:
        layout = AmLayout(f.num_vars, len(f.clauses), s_tilde)
    if layout.s_tilde != s_tilde:
        raise LayoutError(f"layout built for s̃={layout.s_tilde}, asked for s̃={s_tilde}")
    return families_to_cnf(am_families(f, layout), layout.num_vars)


@dataclass(frozen=True)
class AmArrangement:
    """Where each grid cell of REF^F_{n+1,t} sits in the sequence of length s̃"""
    n: int
    s_tilde: int
    t: int

    @property
    def padding(self) -> int:
        return self.s_tilde - self.t * (self.n + 1)

    def position(self, i: int, j: int) -> int:
        return self.padding + (i - 1) * self.t + j

    def cell(self, u: int):
        """(i, j) for a sequence position, or None for a padding row"""
        if u <= self.padding:
            return None
        offset = u - self.padding - 1
        return offset // self.t + 1, offset % self.t + 1


def arrangement(n: int, s_tilde: int) -> AmArrangement:
    t = s_tilde // (n + 1)
    if t < 1:
        raise ParamError(f"s̃={s_tilde} is too short for n+1={n + 1} levels")
    return AmArrangement(n, s_tilde, t)


def am_reduction(f: Cnf, s_tilde: int, am_layout: Optional[AmLayout] = None,
                 ref_layout: Optional[VarLayout] = None):
    """Assignment and renaming taking REF(F, s̃) onto REF^F_{n+1,t}.

    Returns (assignment over am_layout, renaming from the unassigned
    am_layout variables to ref_layout variables).
    """
    n, r = f.num_vars, len(f.clauses)
    grid = arrangement(n, s_tilde)
    t = grid.t
    if am_layout is None:
        am_layout = AmLayout(n, r, s_tilde)
    if ref_layout is None:
        ref_layout = VarLayout(n, r, n + 1, t)
    if (ref_layout.n, ref_layout.r, ref_layout.s, ref_layout.t) != (n, r, n + 1, t):
        raise LayoutError(f"target layout must be REF^F_(n+1={n + 1}, t={t}) over n={n}, r={r}")
    if grid.padding and is_tautological(f.clauses[0]):
        raise ParamError("padding rows weaken C_1, which must not be tautological")

    A = am_layout
    alpha: PartialAssignment = {}
    renaming: Dict[int, int] = {}

    def zero_all(var, top, keep=()):
        for k in range(top + 1):
            if k not in keep:
                alpha[var(k)] = 0

    for u in range(1, s_tilde + 1):
        home = grid.cell(u)
        if home is None:
            # a weakening of C_1 that no later clause uses
            zero_all(lambda k: A.I(u, k), r)
            alpha[A.I(u, 1)] = 1
            zero_all(lambda k: A.V(u, k), n)
            alpha[A.V(u, 0)] = 1
            zero_all(lambda k: A.L(u, k), s_tilde)
            zero_all(lambda k: A.R(u, k), s_tilde)
            alpha[A.L(u, 0)] = 1
            alpha[A.R(u, 0)] = 1
            first = f.clauses[0]
            for i in range(1, n + 1):
                alpha[A.D(u, i, 1)] = 1 if i in first else 0
                alpha[A.D(u, i, 0)] = 1 if -i in first else 0
            continue

        i, j = home
        for l in range(1, n + 1):
            for b in (0, 1):
                renaming[A.D(u, l, b)] = ref_layout.D(i, j, l, b)

        if i == 1:
            alpha[A.V(u, 0)] = 1
            zero_all(lambda k: A.V(u, k), n, keep=(0,))
            alpha[A.I(u, 0)] = 0
            for m in range(1, r + 1):
                renaming[A.I(u, m)] = ref_layout.I(j, m)
            zero_all(lambda k: A.L(u, k), s_tilde, keep=(0,))
            zero_all(lambda k: A.R(u, k), s_tilde, keep=(0,))
            alpha[A.L(u, 0)] = 1
            alpha[A.R(u, 0)] = 1
            continue

        alpha[A.I(u, 0)] = 1
        zero_all(lambda k: A.I(u, k), r, keep=(0,))
        alpha[A.V(u, 0)] = 0
        for l in range(1, n + 1):
            renaming[A.V(u, l)] = ref_layout.V(i, j, l)
        premises = {grid.position(i - 1, jp): jp for jp in range(1, t + 1)}
        for v in range(0, s_tilde + 1):
            if v in premises:
                renaming[A.L(u, v)] = ref_layout.L(i, j, premises[v])
                renaming[A.R(u, v)] = ref_layout.R(i, j, premises[v])
            else:
                alpha[A.L(u, v)] = 0
                alpha[A.R(u, v)] = 0

    logger.debug(
        f"REF(F, s̃={s_tilde}) onto REF^F_(n+1={n + 1}, t={t}): "
        f"{grid.padding} padding rows, {len(alpha)} variables fixed, {len(renaming)} renamed"
    )
    return alpha, renaming


def removable_transfer_clauses(layout: VarLayout) -> List[Clause]:
    """Transfer clauses absent from the image of am_reduction.

    For a left premise these carry ¬x_ℓ (the pivot complement) into the
    resolvent, for a right premise x_ℓ. A premise containing x_ℓ and ¬x_ℓ
    together is already ruled out, so they are redundant.
    """
    out = []
    for side, b in (('L', 0), ('R', 1)):
        for i in range(2, layout.s + 1):
            for j in range(1, layout.t + 1):
                for jp in range(1, layout.t + 1):
                    for l in range(1, layout.n + 1):
                        out.append(frozenset((
                            -layout.P(side, i, j, jp), -layout.V(i, j, l),
                            -layout.D(i - 1, jp, l, b), layout.D(i, j, l, b),
                        )))
    return out


def transfer_derivation(target: Clause, ref: Cnf, layout: VarLayout) -> ResolutionProof:
    """Three-step derivation of a removable transfer clause from ref"""
    selector = next((lit for lit in target if lit < 0 and layout.describe(-lit)[0] in ('L', 'R')), None)
    if selector is None:
        raise ValueError("not a transfer clause")
    side, (i, j, jp) = layout.describe(-selector)
    b = 0 if side == 'L' else 1
    l = next(layout.describe(-lit)[1][2] for lit in target
             if lit < 0 and layout.describe(-lit)[0] == 'V')

    P = layout.P(side, i, j, jp)
    cut_clause = frozenset((-P, -layout.V(i, j, l), layout.D(i - 1, jp, l, 1 - b)))
    nontaut = frozenset((-layout.D(i - 1, jp, l, 1), -layout.D(i - 1, jp, l, 0)))

    index = {c: k for k, c in enumerate(ref.clauses)}
    for needed in (cut_clause, nontaut):
        if needed not in index:
            raise ValueError(f"premise {sorted(needed)} is not a clause of the formula")
    steps = (
        ResStep(cut_clause, InputWeakening(index[cut_clause])),
        ResStep(nontaut, InputWeakening(index[nontaut])),
        ResStep(target, Resolvent(0, 1, layout.D(i - 1, jp, l, 1 - b))),
    )
    return ResolutionProof(steps, ref)


def reduce_am(f: Cnf, s_tilde: int) -> Cnf:
    """REF(F, s̃) after am_reduction, satisfied clauses dropped, renamed"""
    am_layout = AmLayout(f.num_vars, len(f.clauses), s_tilde)
    grid = arrangement(f.num_vars, s_tilde)
    ref_layout = VarLayout(f.num_vars, len(f.clauses), f.num_vars + 1, grid.t)
    alpha, renaming = am_reduction(f, s_tilde, am_layout, ref_layout)
    restricted = restrict_cnf(encode_ref_am(f, s_tilde, am_layout), alpha)
    return rename_cnf(restricted, renaming, ref_layout.num_vars)
