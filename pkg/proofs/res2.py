"""Res(2): derivations whose lines are 2-DNFs.

A term is a frozenset of one or two literals, a line a frozenset of terms;
one-literal terms are the literals of an ordinary clause. Step indices
are 0-based in memory, 1-based in the text format.

Rules (k = 2):
  Axiom      x ∨ ¬x
  AndIntro   from A ∨ l1 and B ∨ l2 derive A ∨ B ∨ (l1 ∧ l2)
  Cut        from A ∨ (l1 ∧ l2) and B ∨ ¬l1 ∨ ¬l2 derive A ∨ B
  Weakening  from A derive any A ∨ B
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple, Union

from cnf.core import Cnf
from proofs.report import CheckReport
from utils.error_handler import ParseError

Term = FrozenSet[int]
TwoDnf = FrozenSet[Term]

EMPTY_LINE: TwoDnf = frozenset()


def term(*lits: int) -> Term:
    return frozenset(lits)


def clause_line(c: Iterable[int]) -> TwoDnf:
    """A clause as a 2-DNF of unit terms"""
    return frozenset(frozenset((lit,)) for lit in c)


def line_size(line: TwoDnf) -> int:
    return sum(len(t) for t in line)


@dataclass(frozen=True)
class Input:
    m: int


@dataclass(frozen=True)
class Axiom:
    var: int


@dataclass(frozen=True)
class AndIntro:
    i: int
    j: int
    l1: int
    l2: int


@dataclass(frozen=True)
class Cut:
    i: int
    j: int
    term: Term


@dataclass(frozen=True)
class Weakening:
    i: int


Res2Justification = Union[Input, Axiom, AndIntro, Cut, Weakening]


@dataclass(frozen=True)
class Res2Step:
    line: TwoDnf
    justification: Res2Justification


@dataclass
class Res2Proof:
    steps: List[Res2Step]
    over: Cnf
    section_sizes: Dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def size(self) -> int:
        """Literal occurrences over all lines"""
        return sum(line_size(step.line) for step in self.steps)

    @property
    def is_refutation(self) -> bool:
        return bool(self.steps) and not self.steps[-1].line


def and_intro_conclusion(left: TwoDnf, right: TwoDnf, l1: int, l2: int) -> TwoDnf:
    return (left - {term(l1)}) | (right - {term(l2)}) | {term(l1, l2)}


def cut_conclusion(left: TwoDnf, right: TwoDnf, cut_term: Term) -> TwoDnf:
    return (left - {cut_term}) | (right - {term(-lit) for lit in cut_term})


def _earlier(index: int, refs: Tuple[int, ...], report: CheckReport) -> bool:
    for ref in refs:
        if not 0 <= ref < index:
            report.add(index, f"premise {ref} is not an earlier step")
            return False
    return True


def _check_step(f: Cnf, steps: List[Res2Step], index: int, report: CheckReport):
    step = steps[index]
    line = step.line
    just = step.justification

    for t in line:
        if not 1 <= len(t) <= 2:
            report.add(index, f"term of {len(t)} literals")
            return
        if any(abs(lit) > f.num_vars or lit == 0 for lit in t):
            report.add(index, f"term {sorted(t)} mentions an undeclared variable")
            return

    if isinstance(just, Input):
        if not 0 <= just.m < len(f.clauses):
            report.add(index, f"input clause {just.m} does not exist")
        elif line != clause_line(f.clauses[just.m]):
            report.add(index, f"line differs from input clause {just.m}")
    elif isinstance(just, Axiom):
        if line != clause_line((just.var, -just.var)):
            report.add(index, f"line is not the axiom x{just.var} ∨ ¬x{just.var}")
    elif isinstance(just, AndIntro):
        if not _earlier(index, (just.i, just.j), report):
            return
        left, right = steps[just.i].line, steps[just.j].line
        if just.l1 == just.l2:
            report.add(index, "conjunction of a literal with itself")
        elif term(just.l1) not in left:
            report.add(index, f"literal {just.l1} missing from premise {just.i}")
        elif term(just.l2) not in right:
            report.add(index, f"literal {just.l2} missing from premise {just.j}")
        elif line != and_intro_conclusion(left, right, just.l1, just.l2):
            report.add(index, "line is not the ∧-introduction of its premises")
    elif isinstance(just, Cut):
        if not _earlier(index, (just.i, just.j), report):
            return
        left, right = steps[just.i].line, steps[just.j].line
        if not 1 <= len(just.term) <= 2:
            report.add(index, f"cut term of {len(just.term)} literals")
        elif just.term not in left:
            report.add(index, f"term {sorted(just.term)} missing from premise {just.i}")
        elif any(term(-lit) not in right for lit in just.term):
            report.add(index, f"negated literals of {sorted(just.term)} missing from premise {just.j}")
        elif line != cut_conclusion(left, right, just.term):
            report.add(index, "line is not the cut of its premises")
    elif isinstance(just, Weakening):
        if not _earlier(index, (just.i,), report):
            return
        if not steps[just.i].line <= line:
            report.add(index, f"line does not contain premise {just.i}")
    else:
        report.add(index, f"unknown justification {just!r}")


def check_res2(f: Cnf, pi: Res2Proof, expect_refutation: bool = True) -> CheckReport:
    report = CheckReport('res2')
    for index in range(len(pi.steps)):
        _check_step(f, pi.steps, index, report)
    if expect_refutation:
        if not pi.steps:
            report.add('proof', "proof is empty")
        elif pi.steps[-1].line:
            report.add(len(pi.steps) - 1, "last line nonempty")
    return report


def _format_term(t: Term) -> str:
    return "&".join(str(lit) for lit in sorted(t, key=lambda lit: (abs(lit), lit > 0)))


def format_line(line: TwoDnf) -> str:
    if not line:
        return "0"
    terms = sorted(line, key=lambda t: (len(t), sorted(abs(lit) for lit in t), sorted(t)))
    return ";".join(_format_term(t) for t in terms)


def _format_justification(just: Res2Justification) -> str:
    if isinstance(just, Input):
        return f"I {just.m + 1}"
    if isinstance(just, Axiom):
        return f"A {just.var}"
    if isinstance(just, AndIntro):
        return f"AND {just.i + 1} {just.j + 1} {just.l1} {just.l2}"
    if isinstance(just, Cut):
        return f"CUT {just.i + 1} {just.j + 1} {_format_term(just.term)}"
    return f"W {just.i + 1}"


def res2_to_text(pi: Res2Proof) -> str:
    lines = [
        f"{index} {format_line(step.line)} J {_format_justification(step.justification)}"
        for index, step in enumerate(pi.steps, start=1)
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def _parse_term(token: str) -> Term:
    return frozenset(int(lit) for lit in token.split('&'))


def parse_res2(text: str, over: Cnf) -> Res2Proof:
    steps: List[Res2Step] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith('c'):
            continue
        tokens = stripped.split()
        try:
            index = int(tokens[0])
            if tokens[2] != 'J':
                raise ValueError
            line = EMPTY_LINE if tokens[1] == '0' else frozenset(
                _parse_term(token) for token in tokens[1].split(';')
            )
            kind, args = tokens[3], tokens[4:]
            if kind == 'I' and len(args) == 1:
                just: Res2Justification = Input(int(args[0]) - 1)
            elif kind == 'A' and len(args) == 1:
                just = Axiom(int(args[0]))
            elif kind == 'AND' and len(args) == 4:
                just = AndIntro(int(args[0]) - 1, int(args[1]) - 1, int(args[2]), int(args[3]))
            elif kind == 'CUT' and len(args) == 3:
                just = Cut(int(args[0]) - 1, int(args[1]) - 1, _parse_term(args[2]))
            elif kind == 'W' and len(args) == 1:
                just = Weakening(int(args[0]) - 1)
            else:
                raise ParseError(f"unknown justification: {' '.join(tokens[3:])}", line_number)
        except (ValueError, IndexError):
            raise ParseError(f"malformed step: {stripped}", line_number)
        if index != len(steps) + 1:
            raise ParseError(f"expected step {len(steps) + 1}, found {index}", line_number)
        steps.append(Res2Step(line, just))
    return Res2Proof(steps, over)

