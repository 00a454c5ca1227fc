"""Refutations of s levels of t clauses.

Cell (i, j) of the grid holds C_{i,j}. Level-1 cells weaken an input
clause; a cell on level i >= 2 weakens the resolvent of two cells of level
i-1. Grid coordinates, input indices and columns are 1-based here.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Sequence, Tuple

from cnf.core import Clause, Cnf, PartialAssignment, canonical, first_falsified, is_tautological
from cnf.dimacs import format_clause
from encoders.layout import VarLayout
from encoders.ref import encode_ref_F
from proofs.report import CheckReport
from proofs.resolution import (
    InputWeakening, ResolutionProof, StepWeakening, step_heights,
)
from utils.error_handler import (
    FatClause, InvalidProof, NotSatisfying, ParseError, TautologicalCell, TautologicalStep,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UpperJust:
    left: int
    right: int
    pivot: int


@dataclass
class LevelledRefutation:
    s: int
    t: int
    cells: Dict[Tuple[int, int], Clause] = field(default_factory=dict)
    level1_just: Dict[int, int] = field(default_factory=dict)
    upper_just: Dict[Tuple[int, int], UpperJust] = field(default_factory=dict)

    def cell(self, i: int, j: int) -> Clause:
        return self.cells[(i, j)]

    def positions(self):
        for i in range(1, self.s + 1):
            for j in range(1, self.t + 1):
                yield i, j

    def __eq__(self, other) -> bool:
        if not isinstance(other, LevelledRefutation):
            return NotImplemented
        return (
            (self.s, self.t) == (other.s, other.t)
            and self.cells == other.cells
            and self.level1_just == other.level1_just
            and self.upper_just == other.upper_just
        )


def check_levelled(f: Cnf, L: LevelledRefutation) -> CheckReport:
    report = CheckReport('levelled')
    r = len(f.clauses)

    for i, j in L.positions():
        if (i, j) not in L.cells:
            report.add((i, j), "cell missing")
            continue
        c = L.cells[(i, j)]
        if any(abs(lit) > f.num_vars for lit in c):
            report.add((i, j), f"clause mentions a variable beyond {f.num_vars}")
            continue

        if i == 1:
            m = L.level1_just.get(j)
            if m is None or not 1 <= m <= r:
                report.add((i, j), f"no input clause {m}")
            elif not f.clauses[m - 1] <= c:
                missing = canonical(f.clauses[m - 1] - c)
                report.add((i, j), f"not a weakening of input clause {m}: missing {missing}")
            continue

        just = L.upper_just.get((i, j))
        if just is None:
            report.add((i, j), "no premises given")
            continue
        if not (1 <= just.left <= L.t and 1 <= just.right <= L.t):
            report.add((i, j), f"premise column outside 1..{L.t}")
            continue
        left = L.cells.get((i - 1, just.left), frozenset())
        right = L.cells.get((i - 1, just.right), frozenset())
        if just.pivot not in left:
            report.add((i, j), f"x{just.pivot} missing from left premise ({i - 1},{just.left})")
        elif -just.pivot not in right:
            report.add((i, j), f"¬x{just.pivot} missing from right premise ({i - 1},{just.right})")
        else:
            resolvent = (left - {just.pivot}) | (right - {-just.pivot})
            if not resolvent <= c:
                missing = canonical(resolvent - c)
                report.add((i, j), f"not a weakening of the resolvent: missing {missing}")

    if L.cells.get((L.s, L.t)):
        report.add((L.s, L.t), "C_{s,t} nonempty")
    return report


def _fresh_variable(c: Clause, n: int, index: int) -> int:
    used = {abs(lit) for lit in c}
    for var in range(1, n + 1):
        if var not in used:
            return var
    raise FatClause(f"step {index} mentions all {n} variables, no fresh variable for padding")


def _root_justification(pi: ResolutionProof, index: int):
    """Follow weakening chains down to an input or resolution step"""
    just = pi.steps[index].justification
    while isinstance(just, StepWeakening):
        just = pi.steps[just.u].justification
    return just


def simulate(f: Cnf, pi: ResolutionProof) -> LevelledRefutation:
    """Levelled refutation of height(pi) levels of 3·len(pi) clauses.

    Step j occupies columns 3j-2, 3j-1, 3j. From its own height upward the
    columns hold (C_j ∪ {x}, C_j ∪ {¬x}, C_j) for a variable x fresh for C_j;
    below that the columns repeat the triple of the first step.
    """
    n = f.num_vars
    if not pi.steps:
        raise InvalidProof("cannot simulate an empty proof")
    for index, step in enumerate(pi.steps):
        if is_tautological(step.clause):
            raise TautologicalStep(f"step {index} is tautological: {canonical(step.clause)}")
    fresh = [_fresh_variable(step.clause, n, index) for index, step in enumerate(pi.steps)]
    heights = step_heights(pi)
    h = max(heights, default=0)
    L = LevelledRefutation(h, 3 * len(pi.steps))

    first = pi.steps[0].clause
    first_input = _root_justification(pi, 0).m + 1

    def place(i: int, j: int, c: Clause, x: int):
        L.cells[(i, 3 * j - 2)] = c | {x}
        L.cells[(i, 3 * j - 1)] = c | {-x}
        L.cells[(i, 3 * j)] = c

    def justify(i: int, j: int, just):
        for col in (3 * j - 2, 3 * j - 1, 3 * j):
            if isinstance(just, int):
                L.level1_just[col] = just
            else:
                L.upper_just[(i, col)] = just

    for index, step in enumerate(pi.steps):
        j = index + 1
        h_j = heights[index]
        root = _root_justification(pi, index)
        for i in range(1, h + 1):
            if i < h_j:
                place(i, j, first, fresh[0])
                justify(i, j, first_input if i == 1 else UpperJust(1, 2, fresh[0]))
            elif i == h_j:
                place(i, j, step.clause, fresh[index])
                if isinstance(root, InputWeakening):
                    justify(i, j, root.m + 1)
                else:
                    justify(i, j, UpperJust(3 * (root.v + 1), 3 * (root.w + 1), root.pivot))
            else:
                place(i, j, step.clause, fresh[index])
                justify(i, j, UpperJust(3 * j - 2, 3 * j - 1, fresh[index]))

    logger.debug(f"Simulated {len(pi)} steps of height {h} as {L.s} levels of {L.t} clauses")
    return L


def encode_witness(L: LevelledRefutation, layout: VarLayout) -> PartialAssignment:
    """Total assignment to the D, V, I, L, R variables describing L"""
    alpha: PartialAssignment = {}
    for i, j in L.positions():
        c = L.cells[(i, j)]
        if is_tautological(c):
            raise TautologicalCell(f"cell ({i},{j}) is tautological: {canonical(c)}")
        for l in range(1, layout.n + 1):
            alpha[layout.D(i, j, l, 1)] = 1 if l in c else 0
            alpha[layout.D(i, j, l, 0)] = 1 if -l in c else 0

        if i == 1:
            for m in range(1, layout.r + 1):
                alpha[layout.I(j, m)] = 1 if m == L.level1_just[j] else 0
            continue

        just = L.upper_just[(i, j)]
        for l in range(1, layout.n + 1):
            alpha[layout.V(i, j, l)] = 1 if l == just.pivot else 0
        for jp in range(1, layout.t + 1):
            alpha[layout.L(i, j, jp)] = 1 if jp == just.left else 0
            alpha[layout.R(i, j, jp)] = 1 if jp == just.right else 0
    return alpha


def _set_to(alpha: Mapping[int, int], variables: Sequence[int]) -> int:
    """1-based position of the single true variable"""
    return next(k for k, var in enumerate(variables, start=1) if alpha.get(var, 0) == 1)


def decode_witness(alpha: Mapping[int, int], layout: VarLayout, f: Cnf) -> LevelledRefutation:
    """Read a levelled refutation back from a model of REF^F_{s,t}.

    Variables missing from alpha read as 0.
    """
    s, t, n, r = layout.s, layout.t, layout.n, layout.r
    total = {var: alpha.get(var, 0) for var in layout.ref_vars()}
    ref = encode_ref_F(f, s, t, layout)
    falsified = first_falsified(ref, total)
    if falsified is not None:
        c = ref.clauses[falsified]
        names = " ∨ ".join(
            ("" if lit > 0 else "¬") + layout.name(abs(lit)) for lit in canonical(c)
        )
        raise NotSatisfying(f"assignment falsifies {names}", c)

    L = LevelledRefutation(s, t)
    for i in range(1, s + 1):
        for j in range(1, t + 1):
            lits = []
            for l in range(1, n + 1):
                if total[layout.D(i, j, l, 1)]:
                    lits.append(l)
                if total[layout.D(i, j, l, 0)]:
                    lits.append(-l)
            L.cells[(i, j)] = frozenset(lits)
            if i == 1:
                L.level1_just[j] = _set_to(total, [layout.I(j, m) for m in range(1, r + 1)])
            else:
                L.upper_just[(i, j)] = UpperJust(
                    _set_to(total, [layout.L(i, j, jp) for jp in range(1, t + 1)]),
                    _set_to(total, [layout.R(i, j, jp) for jp in range(1, t + 1)]),
                    _set_to(total, [layout.V(i, j, l) for l in range(1, n + 1)]),
                )
    return L


def levelled_to_text(L: LevelledRefutation) -> str:
    lines = [f"levelled {L.s} {L.t}"]
    for i, j in L.positions():
        if i == 1:
            tail = f"I {L.level1_just[j]}"
        else:
            just = L.upper_just[(i, j)]
            tail = f"R {just.left} {just.right} {just.pivot}"
        lines.append(f"{i} {j} {format_clause(L.cells[(i, j)])} {tail}")
    return "\n".join(lines) + "\n"


def parse_levelled(text: str) -> LevelledRefutation:
    L = None
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        tokens = line.split()
        if tokens[0] == 'levelled':
            if L is not None or len(tokens) != 3:
                raise ParseError(f"bad header: {line}", line_number)
            try:
                L = LevelledRefutation(int(tokens[1]), int(tokens[2]))
            except ValueError:
                raise ParseError(f"bad header: {line}", line_number)
            continue
        if L is None:
            raise ParseError("cell before the 'levelled' header", line_number)

        try:
            i, j = int(tokens[0]), int(tokens[1])
            zero = tokens.index('0', 2)
            lits = [int(token) for token in tokens[2:zero]]
            kind, args = tokens[zero + 1], [int(token) for token in tokens[zero + 2:]]
        except (ValueError, IndexError):
            raise ParseError(f"malformed cell: {line}", line_number)
        if not (1 <= i <= L.s and 1 <= j <= L.t):
            raise ParseError(f"cell ({i},{j}) outside the {L.s}x{L.t} grid", line_number)

        L.cells[(i, j)] = frozenset(lits)
        if kind == 'I' and len(args) == 1 and i == 1:
            L.level1_just[j] = args[0]
        elif kind == 'R' and len(args) == 3 and i >= 2:
            L.upper_just[(i, j)] = UpperJust(*args)
        else:
            raise ParseError(f"justification does not fit cell ({i},{j}): {line}", line_number)

    if L is None:
        raise ParseError("missing 'levelled' header")
    return L

