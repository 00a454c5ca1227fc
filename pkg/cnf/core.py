"""Literals, clauses, CNFs and partial assignments.

A literal is a nonzero int in DIMACS convention: ``v`` is x_v^1 (positive)
and ``-v`` is x_v^0 (negative). A clause is a frozenset of literals, a
partial assignment maps variable ids to 0/1.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

from utils.error_handler import PivotMissing

Literal = int
Clause = FrozenSet[int]
PartialAssignment = Dict[int, int]

EMPTY_CLAUSE: Clause = frozenset()


class ClauseStatus(Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNDETERMINED = "undetermined"


def make_literal(var: int, polarity: int) -> Literal:
    """x_var^polarity as a signed int"""
    if var < 1:
        raise ValueError(f"Variable ids start at 1, got {var}")
    if polarity not in (0, 1):
        raise ValueError(f"Polarity must be 0 or 1, got {polarity}")
    return var if polarity == 1 else -var


def literal_var(lit: Literal) -> int:
    return abs(lit)


def literal_polarity(lit: Literal) -> int:
    return 1 if lit > 0 else 0


def clause(literals: Iterable[int]) -> Clause:
    c = frozenset(literals)
    if 0 in c:
        raise ValueError("0 is not a literal")
    return c


def canonical(c: Clause) -> Tuple[int, ...]:
    """Literals sorted by variable, negative before positive"""
    return tuple(sorted(c, key=lambda lit: (abs(lit), lit > 0)))


def is_tautological(c: Clause) -> bool:
    return any(-lit in c for lit in c if lit > 0)


def resolve(c1: Clause, c2: Clause, v: int) -> Clause:
    """Resolvent of c1 (holding x_v) and c2 (holding ¬x_v)"""
    if v not in c1:
        raise PivotMissing(f"x{v} is not in the first premise {canonical(c1)}")
    if -v not in c2:
        raise PivotMissing(f"¬x{v} is not in the second premise {canonical(c2)}")
    return (c1 - {v}) | (c2 - {-v})


def literal_value(lit: Literal, alpha: Mapping[int, int]):
    """1/0 if the literal's variable is assigned, else None"""
    value = alpha.get(abs(lit))
    if value is None:
        return None
    return value if lit > 0 else 1 - value


def eval_clause(c: Clause, alpha: Mapping[int, int]) -> ClauseStatus:
    undetermined = False
    for lit in c:
        value = literal_value(lit, alpha)
        if value == 1:
            return ClauseStatus.SATISFIED
        if value is None:
            undetermined = True
    return ClauseStatus.UNDETERMINED if undetermined else ClauseStatus.FALSIFIED


def restrict_clause(c: Clause, sigma: Mapping[int, int]):
    """c↾σ, or None when σ satisfies c"""
    kept = []
    for lit in c:
        value = literal_value(lit, sigma)
        if value == 1:
            return None
        if value is None:
            kept.append(lit)
    return frozenset(kept)


@dataclass(frozen=True)
class Cnf:
    clauses: Tuple[Clause, ...]
    num_vars: int

    def __post_init__(self):
        object.__setattr__(self, 'clauses', tuple(frozenset(c) for c in self.clauses))
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for index, c in enumerate(self.clauses):
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(
                        f"Clause {index + 1} uses variable {abs(lit)} "
                        f"but only {self.num_vars} are declared"
                    )

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def clause_set(self) -> FrozenSet[Clause]:
        return frozenset(self.clauses)

    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def __add__(self, other: "Cnf") -> "Cnf":
        return Cnf(self.clauses + other.clauses, max(self.num_vars, other.num_vars))


def restrict_cnf(f: Cnf, sigma: Mapping[int, int]) -> Cnf:
    survivors = []
    for c in f.clauses:
        restricted = restrict_clause(c, sigma)
        if restricted is not None:
            survivors.append(restricted)
    return Cnf(tuple(survivors), f.num_vars)


def surviving_indices(f: Cnf, sigma: Mapping[int, int]) -> Dict[int, int]:
    """Map from original clause index to its index in restrict_cnf(f, sigma)"""
    mapping = {}
    for index, c in enumerate(f.clauses):
        if restrict_clause(c, sigma) is not None:
            mapping[index] = len(mapping)
    return mapping


def eval_cnf(f: Cnf, alpha: Mapping[int, int]) -> ClauseStatus:
    status = ClauseStatus.SATISFIED
    for c in f.clauses:
        result = eval_clause(c, alpha)
        if result is ClauseStatus.FALSIFIED:
            return result
        if result is ClauseStatus.UNDETERMINED:
            status = result
    return status


def first_falsified(f: Cnf, alpha: Mapping[int, int]):
    """Index of the first clause falsified by alpha, or None"""
    for index, c in enumerate(f.clauses):
        if eval_clause(c, alpha) is ClauseStatus.FALSIFIED:
            return index
    return None


def drop_tautologies(f: Cnf) -> Cnf:
    return Cnf(tuple(c for c in f.clauses if not is_tautological(c)), f.num_vars)


def rename_clause(c: Clause, mapping: Mapping[int, int]) -> Clause:
    return frozenset(mapping.get(abs(lit), abs(lit)) * (1 if lit > 0 else -1) for lit in c)


def rename_cnf(f: Cnf, mapping: Mapping[int, int], num_vars: int) -> Cnf:
    """Rename variables; variables missing from mapping keep their id"""
    return Cnf(tuple(rename_clause(c, mapping) for c in f.clauses), num_vars)


def php(pigeons: int, holes: int) -> Cnf:
    """Pigeonhole formula; variable (p-1)*holes + h says pigeon p sits in hole h"""
    if pigeons < 1 or holes < 1:
        raise ValueError("pigeons and holes must be positive")

    def var(p: int, h: int) -> int:
        return (p - 1) * holes + h

    clauses = [frozenset(var(p, h) for h in range(1, holes + 1)) for p in range(1, pigeons + 1)]
    for h in range(1, holes + 1):
        for p in range(1, pigeons + 1):
            for q in range(p + 1, pigeons + 1):
                clauses.append(frozenset((-var(p, h), -var(q, h))))
    return Cnf(tuple(clauses), pigeons * holes)
