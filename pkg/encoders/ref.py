"""Clause families of REF^F_{s,t} and of the F-independent REF^{n,r}_{s,t}.

Each encoder is available as an ordered list of ClauseFamily objects so
large instances can be streamed family by family with exact counts known
up front, and as a materialized Cnf for library use.
"""

import logging
from dataclasses import dataclass
from itertools import chain, combinations
from typing import Callable, Iterator, List, Optional

from cnf.core import Clause, Cnf
from encoders.layout import VarLayout
from utils.error_handler import LayoutError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClauseFamily:
    """Named family of clauses with its analytic size and a lazy generator"""
    name: str
    count: int
    generate: Callable[[], Iterator[Clause]]

    def clauses(self) -> Iterator[Clause]:
        return self.generate()


def families_to_cnf(families: List[ClauseFamily], num_vars: int) -> Cnf:
    return Cnf(tuple(chain.from_iterable(family.clauses() for family in families)), num_vars)


def _require_shape(layout: VarLayout, n: int, r: int):
    if (layout.n, layout.r) != (n, r):
        raise LayoutError(
            f"layout built for n={layout.n}, r={layout.r} but the formula has n={n}, r={r}"
        )


def input_families(f: Cnf, layout: VarLayout) -> List[ClauseFamily]:
    """Level-1 cells contain the literals of the input clause they weaken"""
    t = layout.t

    def axioms():
        for j in range(1, t + 1):
            for m, c in enumerate(f.clauses, start=1):
                for lit in sorted(c, key=lambda lit: (abs(lit), lit > 0)):
                    yield frozenset((-layout.I(j, m), layout.D(1, j, abs(lit), 1 if lit > 0 else 0)))

    count = t * sum(len(c) for c in f.clauses)
    return [ClauseFamily('axioms', count, axioms)]


def shared_families(layout: VarLayout) -> List[ClauseFamily]:
    """The fourteen families that do not depend on the refuted formula"""
    n, r, s, t = layout.n, layout.r, layout.s, layout.t
    D, V, I, L, R = layout.D, layout.V, layout.I, layout.L, layout.R
    levels = range(2, s + 1)
    cols = range(1, t + 1)
    lits = range(1, n + 1)

    def nontaut():
        for i in range(1, s + 1):
            for j in cols:
                for l in lits:
                    yield frozenset((-D(i, j, l, 1), -D(i, j, l, 0)))

    def cut(side: str, b: int):
        def gen():
            P = L if side == 'L' else R
            for i in levels:
                for j in cols:
                    for jp in cols:
                        for l in lits:
                            yield frozenset((-P(i, j, jp), -V(i, j, l), D(i - 1, jp, l, b)))
        return gen

    def transfer(side: str, excluded_b: int):
        def gen():
            P = L if side == 'L' else R
            for i in levels:
                for j in cols:
                    for jp in cols:
                        for l in lits:
                            for lp in lits:
                                for b in (0, 1):
                                    if (lp, b) == (l, excluded_b):
                                        continue
                                    yield frozenset((
                                        -P(i, j, jp), -V(i, j, l),
                                        -D(i - 1, jp, lp, b), D(i, j, lp, b),
                                    ))
        return gen

    def empty_clause():
        for l in lits:
            for b in (0, 1):
                yield frozenset((-D(s, t, l, b),))

    def v_dom():
        for i in levels:
            for j in cols:
                yield frozenset(V(i, j, l) for l in lits)

    def i_dom():
        for j in cols:
            yield frozenset(I(j, m) for m in range(1, r + 1))

    def p_dom(P):
        def gen():
            for i in levels:
                for j in cols:
                    yield frozenset(P(i, j, jp) for jp in cols)
        return gen

    # functionality clauses are emitted once per unordered pair
    def v_func():
        for i in levels:
            for j in cols:
                for l, lp in combinations(lits, 2):
                    yield frozenset((-V(i, j, l), -V(i, j, lp)))

    def i_func():
        for j in cols:
            for m, mp in combinations(range(1, r + 1), 2):
                yield frozenset((-I(j, m), -I(j, mp)))

    def p_func(P):
        def gen():
            for i in levels:
                for j in cols:
                    for jp, jpp in combinations(cols, 2):
                        yield frozenset((-P(i, j, jp), -P(i, j, jpp)))
        return gen

    upper = (s - 1) * t
    return [
        ClauseFamily('nontaut', s * t * n, nontaut),
        ClauseFamily('res-L-cut', upper * t * n, cut('L', 1)),
        ClauseFamily('res-R-cut', upper * t * n, cut('R', 0)),
        ClauseFamily('res-L-transf', upper * t * n * (2 * n - 1), transfer('L', 1)),
        ClauseFamily('res-R-transf', upper * t * n * (2 * n - 1), transfer('R', 0)),
        ClauseFamily('empty-clause', 2 * n, empty_clause),
        ClauseFamily('V-dom', upper, v_dom),
        ClauseFamily('I-dom', t, i_dom),
        ClauseFamily('L-dom', upper, p_dom(L)),
        ClauseFamily('R-dom', upper, p_dom(R)),
        ClauseFamily('V-func', upper * n * (n - 1) // 2, v_func),
        ClauseFamily('I-func', t * r * (r - 1) // 2, i_func),
        ClauseFamily('L-func', upper * t * (t - 1) // 2, p_func(L)),
        ClauseFamily('R-func', upper * t * (t - 1) // 2, p_func(R)),
    ]


def ref_F_families(f: Cnf, s: int, t: int, layout: Optional[VarLayout] = None) -> List[ClauseFamily]:
    if layout is None:
        layout = VarLayout(f.num_vars, len(f.clauses), s, t)
    _require_shape(layout, f.num_vars, len(f.clauses))
    if (layout.s, layout.t) != (s, t):
        raise LayoutError(f"layout built for s={layout.s}, t={layout.t}, asked for s={s}, t={t}")
    return input_families(f, layout) + shared_families(layout)


def encode_ref_F(f: Cnf, s: int, t: int, layout: Optional[VarLayout] = None) -> Cnf:
    """REF^F_{s,t}: f has a refutation of s levels of t clauses"""
    if layout is None:
        layout = VarLayout(f.num_vars, len(f.clauses), s, t)
    families = ref_F_families(f, s, t, layout)
    result = families_to_cnf(families, layout.num_vars)
    logger.debug(f"REF^F_(s={s},t={t}): {layout.num_vars} variables, {len(result)} clauses")
    return result


def ref_nr_families(layout: VarLayout) -> List[ClauseFamily]:
    """Families of REF^{n,r}_{s,t}; the input clauses are read from C-variables"""
    if not layout.with_sat:
        raise LayoutError("REF^{n,r} needs a layout built with with_sat=True")
    n, r, t = layout.n, layout.r, layout.t

    def axioms_c():
        for j in range(1, t + 1):
            for m in range(1, r + 1):
                for l in range(1, n + 1):
                    for b in (0, 1):
                        yield frozenset((-layout.I(j, m), -layout.C(m, l, b), layout.D(1, j, l, b)))

    return [ClauseFamily('axioms-C', 2 * t * r * n, axioms_c)] + shared_families(layout)


def encode_ref_nr(n: int, r: int, s: int, t: int, layout: Optional[VarLayout] = None) -> Cnf:
    if layout is None:
        layout = VarLayout(n, r, s, t, with_sat=True)
    _require_shape(layout, n, r)
    return families_to_cnf(ref_nr_families(layout), layout.num_vars)
