"""DIMACS CNF reading and writing, including a streaming writer."""

import logging
from typing import IO, Dict, List, Sequence

from cnf.core import Clause, Cnf, PartialAssignment, canonical
from utils.error_handler import ParseError

logger = logging.getLogger(__name__)


def parse_dimacs(text: str) -> Cnf:
    """Parse DIMACS CNF text; clauses may span lines"""
    num_vars = None
    num_clauses = None
    clauses: List[Clause] = []
    pending: List[int] = []

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()

        # Skip comments and empty lines
        if not line or line.startswith('c'):
            continue
        if line.startswith('%'):
            break

        if line.startswith('p'):
            parts = line.split()
            if num_vars is not None:
                raise ParseError("duplicate 'p cnf' header", line_number)
            if len(parts) != 4 or parts[1] != 'cnf':
                raise ParseError(f"invalid header: {line}", line_number)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"invalid header counts: {line}", line_number)
            if num_vars < 0 or num_clauses < 0:
                raise ParseError(f"negative header counts: {line}", line_number)
            continue

        if num_vars is None:
            raise ParseError("clause before the 'p cnf' header", line_number)

        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise ParseError(f"not an integer literal: {token!r}", line_number)
            if lit == 0:
                clauses.append(frozenset(pending))
                pending = []
                continue
            if abs(lit) > num_vars:
                raise ParseError(
                    f"literal {lit} exceeds the declared {num_vars} variables", line_number
                )
            pending.append(lit)

    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if pending:
        raise ParseError("last clause is not terminated by 0")
    if len(clauses) != num_clauses:
        raise ParseError(f"header announces {num_clauses} clauses, found {len(clauses)}")

    return Cnf(tuple(clauses), num_vars)


def format_clause(c: Clause) -> str:
    lits = canonical(c)
    if not lits:
        return "0"
    return " ".join(str(lit) for lit in lits) + " 0"


def emit_dimacs(f: Cnf, comments: Sequence[str] = ()) -> str:
    lines = [f"c {comment}" for comment in comments]
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines.extend(format_clause(c) for c in f.clauses)
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> PartialAssignment:
    """Read a model as 'v'-lines (or bare signed integers), 0-terminated"""
    alpha: PartialAssignment = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('c') or line.startswith('s'):
            continue
        if line.startswith('v'):
            line = line[1:]
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise ParseError(f"not an integer literal: {token!r}", line_number)
            if lit == 0:
                continue
            var = abs(lit)
            value = 1 if lit > 0 else 0
            if alpha.get(var, value) != value:
                raise ParseError(f"variable {var} assigned both ways", line_number)
            alpha[var] = value
    return alpha


def emit_model(alpha: PartialAssignment) -> str:
    lits = [var if alpha[var] == 1 else -var for var in sorted(alpha)]
    return "v " + " ".join(str(lit) for lit in lits) + " 0\n"


class DimacsWriter:
    """Stream clause families to a text handle without holding them in memory.

    The header needs the clause count before the first clause, so callers
    announce every family with its exact size up front.
    """

    def __init__(self, stream: IO[str]):
        self.stream = stream
        self.written = 0

    def write_families(self, num_vars: int, families: Sequence,
                       comments: Sequence[str] = ()) -> int:
        """Write families exposing .name, .count and .clauses(); returns clause count"""
        announced = sum(family.count for family in families)
        for comment in comments:
            self.writeline(f"c {comment}")
        for family in families:
            self.writeline(f"c family {family.name} {family.count}")
        self.writeline(f"p cnf {num_vars} {announced}")

        for family in families:
            written = 0
            for c in family.clauses():
                self.writeline(format_clause(c))
                written += 1
            if written != family.count:
                raise ValueError(
                    f"family {family.name} announced {family.count} clauses, wrote {written}"
                )
            logger.debug(f"Streamed family {family.name}: {written} clauses")

        self.written = announced
        self.stream.flush()
        return announced

    def writeline(self, line: str):
        self.stream.write(line)
        self.stream.write("\n")


def read_manifest(text: str) -> Dict[str, int]:
    """Per-family clause counts from 'c family <name> <count>' comments"""
    manifest = {}
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 4 and parts[0] == 'c' and parts[1] == 'family':
            manifest[parts[2]] = int(parts[3])
    return manifest
