"""Random restrictions of REF^F_{s,t}.

The sampler draws, in this order and with one generator:

  1. for (i, j) row-major: a p-coin for A_D; if heads, one fair coin per
     ℓ = 1..n choosing x_ℓ (heads) or ¬x_ℓ for C_{i,j}
  2. for j = 1..t: a p-coin for A_I on (1, j); if heads and (1, j) ∉ A_D,
     m uniform in [r]
  3. for (i, j), i >= 2, row-major: a p-coin for A_V; if heads, ℓ uniform in [n]
  4. for i = 2..s, j = 1..t: a p-coin for A_i; if heads and 2|A_i| <= t and the
     level is not yet over its 2pt budget, two distinct unused columns of level
     i-1 (left, right) chosen uniformly. Once |A_i| > 2pt, or once no two
     columns remain, h_i is empty and later coins of that level only grow A_i.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Set, Tuple

import numpy as np

from cnf.core import Clause, PartialAssignment, canonical
from encoders.layout import VarLayout
from utils.error_handler import ParamError

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]

VARIANTS = ('standard', 'level-scaled')


def default_exponent(epsilon: float, variant: str = 'standard') -> float:
    if variant == 'standard':
        return min((2 + epsilon / 2) / (3 + epsilon / 2), 3 / 4)
    return min((1 + epsilon) / (3 + epsilon), 1 / 2)


@dataclass(frozen=True)
class RhoParams:
    epsilon: float = 1.0
    p: Optional[float] = None
    w: Optional[float] = None
    variant: str = 'standard'
    seed: int = 0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ParamError(f"epsilon must be positive, got {self.epsilon}")
        if self.variant not in VARIANTS:
            raise ParamError(f"variant must be one of {', '.join(VARIANTS)}, got {self.variant}")
        if self.p is not None and not 0 <= self.p <= 1:
            raise ParamError(f"p must lie in [0, 1], got {self.p}")
        if self.w is not None and self.w <= 0:
            raise ParamError(f"w must be positive, got {self.w}")

    def probability(self, s: int, t: int) -> float:
        if self.p is not None:
            return self.p
        a = default_exponent(self.epsilon, self.variant)
        if self.variant == 'standard':
            return float(t) ** -a
        return float(s) ** (-1 / 3) * float(t) ** -a

    def width(self, s: int, t: int) -> float:
        if self.w is not None:
            return self.w
        if self.variant == 'standard':
            return float(t) ** 0.8
        return float(s) ** (1 / 3) * float(t) ** 0.6


@dataclass
class RandomRestriction:
    n: int
    r: int
    s: int
    t: int
    p: float
    rho: PartialAssignment = field(default_factory=dict)
    A_D: Set[Pair] = field(default_factory=set)
    A_I: Set[Pair] = field(default_factory=set)
    A_V: Set[Pair] = field(default_factory=set)
    A_RL: Set[Pair] = field(default_factory=set)
    # level i -> {j: (left column, right column)}
    h: Dict[int, Dict[int, Tuple[int, int]]] = field(default_factory=dict)
    cell_clauses: Dict[Pair, Clause] = field(default_factory=dict)
    I_values: Dict[int, int] = field(default_factory=dict)
    V_values: Dict[Pair, int] = field(default_factory=dict)

    @property
    def budget(self) -> float:
        """2pt"""
        return 2 * self.p * self.t

    def level(self, pairs: Set[Pair], i: int) -> Set[Pair]:
        return {pair for pair in pairs if pair[0] == i}

    def B(self, i: int) -> Set[Pair]:
        """Children on level i of the injections chosen on level i+1"""
        return {(i, col) for pair in self.h.get(i + 1, {}).values() for col in pair}

    def edges(self) -> Iterator[Tuple[Pair, Pair, str]]:
        for i, injection in sorted(self.h.items()):
            for j, (left, right) in sorted(injection.items()):
                yield (i, j), (i - 1, left), 'L'
                yield (i, j), (i - 1, right), 'R'

    def memberships(self, pair: Pair) -> int:
        """Number of sets among A_D, A_V, A_I, A_RL holding pair"""
        return sum(pair in A for A in (self.A_D, self.A_V, self.A_I, self.A_RL))


def _set_group(rho: PartialAssignment, variables: List[int], chosen: int):
    for k, var in enumerate(variables, start=1):
        rho[var] = 1 if k == chosen else 0


def _set_cell(rho: PartialAssignment, layout: VarLayout, i: int, j: int, c: Clause):
    for l in range(1, layout.n + 1):
        rho[layout.D(i, j, l, 1)] = 1 if l in c else 0
        rho[layout.D(i, j, l, 0)] = 1 if -l in c else 0


def sample_rho(params: RhoParams, n: int, r: int, s: int, t: int,
               layout: Optional[VarLayout] = None,
               rng: Optional[np.random.Generator] = None) -> RandomRestriction:
    if min(n, r, s, t) < 1:
        raise ParamError(f"need n, r, s, t >= 1, got n={n}, r={r}, s={s}, t={t}")
    if layout is None:
        layout = VarLayout(n, r, s, t)
    if rng is None:
        rng = np.random.default_rng(params.seed)
    p = params.probability(s, t)
    out = RandomRestriction(n, r, s, t, p)

    for i in range(1, s + 1):
        for j in range(1, t + 1):
            if rng.random() < p:
                c = frozenset(l if rng.integers(0, 2) else -l for l in range(1, n + 1))
                out.A_D.add((i, j))
                out.cell_clauses[(i, j)] = c
                _set_cell(out.rho, layout, i, j, c)

    for j in range(1, t + 1):
        if rng.random() < p:
            out.A_I.add((1, j))
            if (1, j) not in out.A_D:
                m = int(rng.integers(1, r + 1))
                out.I_values[j] = m
                _set_group(out.rho, [layout.I(j, k) for k in range(1, r + 1)], m)

    for i in range(2, s + 1):
        for j in range(1, t + 1):
            if rng.random() < p:
                l = int(rng.integers(1, n + 1))
                out.A_V.add((i, j))
                out.V_values[(i, j)] = l
                _set_group(out.rho, [layout.V(i, j, k) for k in range(1, n + 1)], l)

    for i in range(2, s + 1):
        size = 0
        injection: Dict[int, Tuple[int, int]] = {}
        free = list(range(1, t + 1))
        overflow = False
        for j in range(1, t + 1):
            if rng.random() >= p:
                continue
            out.A_RL.add((i, j))
            size += 1
            if size > out.budget or 2 * size > t:
                overflow = True
            if overflow:
                continue
            picked = rng.choice(len(free), size=2, replace=False)
            left, right = free[int(picked[0])], free[int(picked[1])]
            free = [col for col in free if col not in (left, right)]
            injection[j] = (left, right)
        if overflow:
            logger.debug(f"level {i}: |A_i| = {size} over budget {out.budget:.3f}, h_i empty")
            injection = {}
        if injection:
            out.h[i] = injection
        for j, (left, right) in injection.items():
            _set_group(out.rho, [layout.L(i, j, jp) for jp in range(1, t + 1)], left)
            _set_group(out.rho, [layout.R(i, j, jp) for jp in range(1, t + 1)], right)

    logger.debug(
        f"sampled rho at p={p:.4g}: |A_D|={len(out.A_D)} |A_I|={len(out.A_I)} "
        f"|A_V|={len(out.A_V)} |A_RL|={len(out.A_RL)}, {len(out.rho)} variables set"
    )
    return out


class RestrictionGraph:
    """G_ρ: vertices are the pairs of the A-sets and B-sets, edges go from
    a pair in A_RL to its left and right child one level down."""

    def __init__(self, vertices: Set[Pair], edges: List[Tuple[Pair, Pair, str]]):
        self.vertices = set(vertices)
        self.edges = list(edges)
        self._children: Dict[Pair, Dict[str, Pair]] = {}
        self._parent: Dict[Pair, Tuple[Pair, str]] = {}
        for parent, child, side in self.edges:
            self.vertices.update((parent, child))
            self._children.setdefault(parent, {})[side] = child
            self._parent[child] = (parent, side)

    @classmethod
    def of(cls, rho: RandomRestriction) -> 'RestrictionGraph':
        vertices = rho.A_D | rho.A_I | rho.A_V | rho.A_RL
        return cls(vertices, list(rho.edges()))

    def children(self, v: Pair) -> Dict[str, Pair]:
        return dict(self._children.get(v, {}))

    def parent(self, v: Pair) -> Optional[Tuple[Pair, str]]:
        return self._parent.get(v)

    def roots(self) -> List[Pair]:
        return sorted(v for v in self.vertices if v not in self._parent)

    def components(self) -> List[Set[Pair]]:
        """Connected components, each listed from its root down"""
        out = []
        for root in self.roots():
            component, stack = set(), [root]
            while stack:
                v = stack.pop()
                component.add(v)
                stack.extend(self._children.get(v, {}).values())
            out.append(component)
        return out


def restriction_to_dict(rho: RandomRestriction) -> Dict[str, Any]:
    def pairs(A):
        return [list(pair) for pair in sorted(A)]

    return {
        'n': rho.n, 'r': rho.r, 's': rho.s, 't': rho.t,
        'p': rho.p,
        'two_pt': rho.budget,
        'A_D': pairs(rho.A_D),
        'A_I': pairs(rho.A_I),
        'A_V': pairs(rho.A_V),
        'A_RL': pairs(rho.A_RL),
        'h': [
            {'i': i, 'j': j, 'L': left, 'R': right}
            for i, injection in sorted(rho.h.items())
            for j, (left, right) in sorted(injection.items())
        ],
        'cells': [
            {'i': i, 'j': j, 'clause': list(canonical(c))}
            for (i, j), c in sorted(rho.cell_clauses.items())
        ],
        'I': [{'j': j, 'm': m} for j, m in sorted(rho.I_values.items())],
        'V': [{'i': i, 'j': j, 'l': l} for (i, j), l in sorted(rho.V_values.items())],
        'assigned': len(rho.rho),
    }

