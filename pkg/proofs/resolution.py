"""Resolution derivations with explicit per-step justifications.

Step and input-clause indices are 0-based in memory and 1-based in the
text format.
"""

import logging
from dataclasses import dataclass
from typing import List, Mapping, Optional, Tuple, Union

from cnf.core import (
    Clause, Cnf, canonical, rename_clause, restrict_clause, restrict_cnf,
    surviving_indices,
)
from cnf.dimacs import format_clause
from proofs.report import CheckReport
from utils.error_handler import ParseError, RepairFailure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InputWeakening:
    m: int


@dataclass(frozen=True)
class Resolvent:
    v: int
    w: int
    pivot: int


@dataclass(frozen=True)
class StepWeakening:
    u: int


Justification = Union[InputWeakening, Resolvent, StepWeakening]


@dataclass(frozen=True)
class ResStep:
    clause: Clause
    justification: Justification


@dataclass(frozen=True)
class ResolutionProof:
    steps: Tuple[ResStep, ...]
    over: Cnf

    def __post_init__(self):
        object.__setattr__(self, 'steps', tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def clauses(self) -> List[Clause]:
        return [step.clause for step in self.steps]

    @property
    def is_refutation(self) -> bool:
        return bool(self.steps) and not self.steps[-1].clause


def _check_step(f: Cnf, steps, index: int, report: CheckReport):
    step = steps[index]
    c = step.clause
    just = step.justification

    for lit in c:
        if abs(lit) > f.num_vars:
            report.add(index, f"variable {abs(lit)} exceeds the declared {f.num_vars}")
            return

    if isinstance(just, InputWeakening):
        if not 0 <= just.m < len(f.clauses):
            report.add(index, f"input clause {just.m} does not exist")
        elif not f.clauses[just.m] <= c:
            missing = canonical(f.clauses[just.m] - c)
            report.add(index, f"not a weakening of input clause {just.m}: missing {missing}")
    elif isinstance(just, Resolvent):
        for ref in (just.v, just.w):
            if not 0 <= ref < index:
                report.add(index, f"premise {ref} is not an earlier step")
                return
        left, right = steps[just.v].clause, steps[just.w].clause
        if just.pivot not in left:
            report.add(index, f"pivot x{just.pivot} missing from premise {just.v}")
        elif -just.pivot not in right:
            report.add(index, f"pivot ¬x{just.pivot} missing from premise {just.w}")
        else:
            resolvent = (left - {just.pivot}) | (right - {-just.pivot})
            if not resolvent <= c:
                missing = canonical(resolvent - c)
                report.add(index, f"not a weakening of the resolvent: missing {missing}")
    elif isinstance(just, StepWeakening):
        if not 0 <= just.u < index:
            report.add(index, f"source {just.u} is not an earlier step")
        elif not steps[just.u].clause <= c:
            missing = canonical(steps[just.u].clause - c)
            report.add(index, f"not a weakening of step {just.u}: missing {missing}")
    else:
        report.add(index, f"unknown justification {just!r}")


def check_resolution(f: Cnf, pi: ResolutionProof, expect_refutation: bool = True) -> CheckReport:
    report = CheckReport('resolution')
    for index in range(len(pi.steps)):
        _check_step(f, pi.steps, index, report)

    if expect_refutation:
        if not pi.steps:
            report.add('proof', "proof is empty")
        elif pi.steps[-1].clause:
            report.add(len(pi.steps) - 1, "last clause nonempty")
    return report


def step_heights(pi: ResolutionProof) -> List[int]:
    """h_u per step; weakening steps inherit the height of their source"""
    heights: List[int] = []
    for step in pi.steps:
        just = step.justification
        if isinstance(just, InputWeakening):
            heights.append(1)
        elif isinstance(just, Resolvent):
            heights.append(1 + max(heights[just.v], heights[just.w]))
        else:
            heights.append(heights[just.u])
    return heights


def height(pi: ResolutionProof) -> int:
    return max(step_heights(pi), default=0)


def restrict_proof(pi: ResolutionProof, sigma: Mapping[int, int]) -> ResolutionProof:
    """Π↾σ as a proof over restrict_cnf(pi.over, sigma).

    Steps satisfied by σ disappear; every surviving step is re-justified
    against the restricted premises.
    """
    f = pi.over
    restricted_f = restrict_cnf(f, sigma)
    input_index = surviving_indices(f, sigma)

    new_index: List[Optional[int]] = []
    new_steps: List[ResStep] = []

    for index, step in enumerate(pi.steps):
        c = restrict_clause(step.clause, sigma)
        if c is None:
            new_index.append(None)
            continue

        just = step.justification
        if isinstance(just, InputWeakening):
            if just.m not in input_index:
                raise RepairFailure(f"step {index}: input clause {just.m} satisfied but step is not")
            repaired = InputWeakening(input_index[just.m])
        elif isinstance(just, Resolvent):
            repaired = _repair_resolvent(index, just, sigma, new_index)
        else:
            source = new_index[just.u]
            if source is None:
                raise RepairFailure(f"step {index}: weakened source {just.u} vanished")
            repaired = StepWeakening(source)

        new_index.append(len(new_steps))
        new_steps.append(ResStep(c, repaired))

    logger.debug(f"Restricted proof of {len(pi)} steps to {len(new_steps)} steps")
    return ResolutionProof(tuple(new_steps), restricted_f)


def _repair_resolvent(index: int, just: Resolvent, sigma, new_index) -> Justification:
    value = sigma.get(just.pivot)
    if value is None:
        v, w = new_index[just.v], new_index[just.w]
        if v is None or w is None:
            raise RepairFailure(f"step {index}: a premise vanished although the pivot survived")
        return Resolvent(v, w, just.pivot)

    # σ(pivot)=1 falsifies ¬pivot, so the negative premise alone subsumes the step
    survivor = just.w if value == 1 else just.v
    mapped = new_index[survivor]
    if mapped is None:
        raise RepairFailure(f"step {index}: premise {survivor} vanished")
    return StepWeakening(mapped)


def rename_proof(pi: ResolutionProof, mapping: Mapping[int, int], over: Cnf) -> ResolutionProof:
    """Rename variables in every step; over must be the renamed base formula"""
    steps = []
    for step in pi.steps:
        just = step.justification
        if isinstance(just, Resolvent):
            just = Resolvent(just.v, just.w, mapping.get(just.pivot, just.pivot))
        steps.append(ResStep(rename_clause(step.clause, mapping), just))
    return ResolutionProof(tuple(steps), over)


def proof_to_text(pi: ResolutionProof) -> str:
    lines = []
    for index, step in enumerate(pi.steps, start=1):
        just = step.justification
        if isinstance(just, InputWeakening):
            tail = f"I {just.m + 1}"
        elif isinstance(just, Resolvent):
            tail = f"R {just.v + 1} {just.w + 1} {just.pivot}"
        else:
            tail = f"W {just.u + 1}"
        lines.append(f"{index} {format_clause(step.clause)} {tail}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_proof(text: str, over: Cnf) -> ResolutionProof:
    steps = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        tokens = line.split()
        try:
            index = int(tokens[0])
            zero = tokens.index('0', 1)
            lits = [int(token) for token in tokens[1:zero]]
        except (ValueError, IndexError):
            raise ParseError(f"malformed step: {line}", line_number)
        if index != len(steps) + 1:
            raise ParseError(f"expected step {len(steps) + 1}, found {index}", line_number)

        rest = tokens[zero + 1:]
        try:
            kind, args = rest[0], [int(token) for token in rest[1:]]
        except (ValueError, IndexError):
            raise ParseError(f"malformed justification: {line}", line_number)

        if kind == 'I' and len(args) == 1:
            just = InputWeakening(args[0] - 1)
        elif kind == 'R' and len(args) == 3:
            just = Resolvent(args[0] - 1, args[1] - 1, args[2])
        elif kind == 'W' and len(args) == 1:
            just = StepWeakening(args[0] - 1)
        else:
            raise ParseError(f"unknown justification: {' '.join(rest)}", line_number)
        steps.append(ResStep(frozenset(lits), just))
    return ResolutionProof(tuple(steps), over)
