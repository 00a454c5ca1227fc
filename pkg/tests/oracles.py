"""Brute-force reference implementations used to cross-check the library.

Everything here is exponential and only meant for the tiny instances the
tests build.
"""

from functools import lru_cache
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence

import numpy as np

from cnf.core import Clause, Cnf, is_tautological
from proofs.resolution import InputWeakening, ResolutionProof, ResStep, Resolvent


def is_satisfiable(f: Cnf) -> bool:
    """Truth-table check; only for a handful of variables"""
    for values in product((0, 1), repeat=f.num_vars):
        alpha = {var: value for var, value in enumerate(values, start=1)}
        if all(any((lit > 0) == bool(alpha[abs(lit)]) for lit in c) for c in f.clauses):
            return True
    return False


def _assign(clauses: List[Clause], lit: int) -> Optional[List[Clause]]:
    out = []
    for c in clauses:
        if lit in c:
            continue
        if -lit in c:
            c = c - {-lit}
            if not c:
                return None
        out.append(c)
    return out


def _dpll(clauses: List[Clause], model: Dict[int, int]) -> Optional[Dict[int, int]]:
    while True:
        unit = next((c for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        (lit,) = unit
        model = {**model, abs(lit): 1 if lit > 0 else 0}
        clauses = _assign(clauses, lit)
        if clauses is None:
            return None
    if not clauses:
        return model

    shortest = min(clauses, key=len)
    lit = min(shortest, key=lambda x: (abs(x), x))
    for choice in (lit, -lit):
        reduced = _assign(clauses, choice)
        if reduced is None:
            continue
        result = _dpll(reduced, {**model, abs(choice): 1 if choice > 0 else 0})
        if result is not None:
            return result
    return None


def solve(f: Cnf) -> Optional[Dict[int, int]]:
    """A total model of f (free variables read 0), or None"""
    if any(not c for c in f.clauses):
        return None
    model = _dpll([c for c in f.clauses if not is_tautological(c)], {})
    if model is None:
        return None
    return {var: model.get(var, 0) for var in range(1, f.num_vars + 1)}


def enumerate_models(f: Cnf, limit: int) -> Iterator[Dict[int, int]]:
    """Up to limit distinct total models, each blocked after it is found"""
    clauses = list(f.clauses)
    for _ in range(limit):
        model = solve(Cnf(tuple(clauses), f.num_vars))
        if model is None:
            return
        yield model
        clauses.append(frozenset(-var if value else var for var, value in model.items()))


def nontautological_clauses(n: int) -> List[Clause]:
    """Every clause over x1..xn without a complementary pair, ∅ included"""
    out = []
    for signs in product((0, 1, -1), repeat=n):
        out.append(frozenset(sign * var for var, sign in enumerate(signs, start=1) if sign))
    return sorted(out, key=lambda c: (len(c), sorted(c)))


def levelled_exists(f: Cnf, s: int, t: int) -> bool:
    """Whether f has a refutation of s levels of t non-tautological clauses.

    Works backwards from {∅} on level s: a set of needed clauses on level i
    is feasible when at most t clauses on level i-1 cover every needed clause
    as a weakened resolvent, down to level 1 where each needed clause must
    weaken an input clause.
    """
    universe = nontautological_clauses(f.num_vars)
    inputs = [c for c in f.clauses if not is_tautological(c)]

    def derives(premises: Sequence[Clause], c: Clause) -> bool:
        for a in premises:
            for b in premises:
                for lit in a:
                    if lit > 0 and -lit in b and (a - {lit}) | (b - {-lit}) <= c:
                        return True
        return False

    @lru_cache(maxsize=None)
    def feasible(level: int, needed: FrozenSet[Clause]) -> bool:
        if level == 1:
            return all(any(m <= c for m in inputs) for c in needed)
        for size in range(1, t + 1):
            for premises in combinations(universe, size):
                if all(derives(premises, c) for c in needed):
                    if feasible(level - 1, frozenset(premises)):
                        return True
        return False

    return feasible(s, frozenset({frozenset()}))


def saturation_refutation(f: Cnf, max_width: int) -> Optional[ResolutionProof]:
    """Refutation using only clauses of width <= max_width, or None.

    Resolves every pair until ∅ appears, then keeps the steps ∅ depends on.
    """
    derived: Dict[Clause, tuple] = {}
    order: List[Clause] = []
    for m, c in enumerate(f.clauses):
        if c not in derived and not is_tautological(c):
            derived[c] = ('input', m)
            order.append(c)

    frontier = 0
    while frozenset() not in derived and frontier < len(order):
        a = order[frontier]
        frontier += 1
        for b in list(order[:frontier]):
            for first, second in ((a, b), (b, a)):
                for lit in first:
                    if lit < 0 or -lit not in second:
                        continue
                    c = (first - {lit}) | (second - {-lit})
                    if c in derived or is_tautological(c) or len(c) > max_width:
                        continue
                    derived[c] = ('resolve', first, second, lit)
                    order.append(c)
    if frozenset() not in derived:
        return None

    needed, stack = set(), [frozenset()]
    while stack:
        c = stack.pop()
        if c in needed:
            continue
        needed.add(c)
        origin = derived[c]
        if origin[0] == 'resolve':
            stack.extend(origin[1:3])

    index: Dict[Clause, int] = {}
    steps = []
    for c in order:
        if c not in needed:
            continue
        origin = derived[c]
        if origin[0] == 'input':
            just = InputWeakening(origin[1])
        else:
            just = Resolvent(index[origin[1]], index[origin[2]], origin[3])
        index[c] = len(steps)
        steps.append(ResStep(c, just))
    return ResolutionProof(tuple(steps), f)


def random_unsat_cnf(rng: np.random.Generator, n: int, width: int) -> Cnf:
    """Random unsatisfiable CNF of distinct width-literal clauses over n variables.

    Clauses are added until the formula becomes unsatisfiable, which happens
    at the latest once every clause of that width is present.
    """
    clauses: List[Clause] = []
    while True:
        variables = rng.choice(n, size=width, replace=False) + 1
        c = frozenset(int(v) if rng.integers(0, 2) else -int(v) for v in variables)
        if c in clauses:
            continue
        clauses.append(c)
        f = Cnf(tuple(clauses), n)
        if not is_satisfiable(f):
            return f


def small_unsat_formulas() -> List[Cnf]:
    """Every unsatisfiable formula of at most three distinct nonempty clauses over n <= 2"""
    out = [Cnf(({1}, {-1}), 1)]
    pool = [frozenset(c) for c in ({1}, {-1}, {2}, {-2}, {1, 2}, {1, -2}, {-1, 2}, {-1, -2})]
    for r in (2, 3):
        for cs in combinations(pool, r):
            f = Cnf(cs, 2)
            if not is_satisfiable(f):
                out.append(f)
    return out
