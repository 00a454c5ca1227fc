from cnf.core import (
    EMPTY_CLAUSE, Clause, ClauseStatus, Cnf, Literal, PartialAssignment,
    canonical, clause, drop_tautologies, eval_clause, eval_cnf, first_falsified,
    is_tautological, literal_polarity, literal_value, literal_var, make_literal,
    php, rename_clause, rename_cnf, resolve, restrict_clause, restrict_cnf,
    surviving_indices,
)
from cnf.dimacs import (
    DimacsWriter, emit_dimacs, emit_model, format_clause, parse_dimacs, parse_model,
    read_manifest,
)
