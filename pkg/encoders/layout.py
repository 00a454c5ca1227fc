"""Variable layouts: indexed proof-encoding variables to DIMACS ids.

VarLayout order (each block in lexicographic index order):
  C(m,ℓ,b), T(ℓ), T(m,ℓ,b)     only when with_sat is set
  D(i,j,ℓ,b)  i∈[s] j∈[t] ℓ∈[n] b∈{0,1}
  V(i,j,ℓ)    i∈{2..s} j∈[t] ℓ∈[n]
  I(j,m)      j∈[t] m∈[r]
  L(i,j,j')   i∈{2..s} j,j'∈[t]
  R(i,j,j')   i∈{2..s} j,j'∈[t]

AmLayout order (sequence length s̃, second indices start at 0):
  D[u,i,b], V[u,i] i∈{0..n}, I[u,j] j∈{0..r}, L[u,v] v∈{0..s̃}, R[u,v]
"""

from bisect import bisect_right
from typing import Dict, List, Sequence, Tuple

from utils.error_handler import LayoutError

LAYOUT_VERSION = "refstate-layout/1"


class _Block:
    def __init__(self, name: str, ranges: Sequence[Tuple[int, int]], offset: int):
        self.name = name
        self.ranges = tuple(ranges)
        self.offset = offset
        self.sizes = tuple(hi - lo + 1 for lo, hi in self.ranges)
        size = 1
        for extent in self.sizes:
            size *= max(extent, 0)
        self.size = size

    def var(self, indices: Sequence[int]) -> int:
        code = 0
        for index, (lo, hi), extent in zip(indices, self.ranges, self.sizes):
            if not lo <= index <= hi:
                raise LayoutError(f"{self.name}{tuple(indices)}: index {index} outside [{lo}, {hi}]")
            code = code * extent + (index - lo)
        return self.offset + code + 1

    def indices(self, var: int) -> Tuple[int, ...]:
        code = var - self.offset - 1
        out: List[int] = []
        for (lo, _), extent in zip(reversed(self.ranges), reversed(self.sizes)):
            out.append(lo + code % extent)
            code //= extent
        return tuple(reversed(out))


class _Layout:
    version = LAYOUT_VERSION

    def __init__(self):
        self._blocks: List[_Block] = []
        self._by_name: Dict[str, _Block] = {}
        self.num_vars = 0

    def _add_block(self, name: str, ranges: Sequence[Tuple[int, int]]):
        block = _Block(name, ranges, self.num_vars)
        self._blocks.append(block)
        self._by_name[name] = block
        self.num_vars += block.size

    def block_range(self, name: str) -> range:
        """DIMACS ids occupied by one variable family"""
        block = self._by_name[name]
        return range(block.offset + 1, block.offset + block.size + 1)

    def families(self) -> List[str]:
        return [block.name for block in self._blocks if block.size]

    def describe(self, var: int) -> Tuple[str, Tuple[int, ...]]:
        """Inverse map: DIMACS id to (family name, indices)"""
        if not 1 <= var <= self.num_vars:
            raise LayoutError(f"variable {var} outside 1..{self.num_vars}")
        offsets = [block.offset for block in self._blocks]
        position = bisect_right(offsets, var - 1) - 1
        block = self._blocks[position]
        return block.name, block.indices(var)

    def lookup(self, name: str, indices: Sequence[int]) -> int:
        if name not in self._by_name:
            raise LayoutError(f"unknown variable family {name}")
        return self._by_name[name].var(indices)

    def name(self, var: int) -> str:
        family, indices = self.describe(var)
        return f"{family}({','.join(str(index) for index in indices)})"


class VarLayout(_Layout):
    """Layout for REF^F_{s,t}, REF^{n,r}_{s,t} and SAT^{n,r}"""

    def __init__(self, n: int, r: int, s: int, t: int, with_sat: bool = False):
        super().__init__()
        if n < 1 or r < 1 or s < 1 or t < 1:
            raise LayoutError(f"layout needs n, r, s, t >= 1, got {(n, r, s, t)}")
        self.n, self.r, self.s, self.t = n, r, s, t
        self.with_sat = with_sat

        if with_sat:
            self._add_block('C', [(1, r), (1, n), (0, 1)])
            self._add_block('T', [(1, n)])
            self._add_block('Tlit', [(1, r), (1, n), (0, 1)])
        self._add_block('D', [(1, s), (1, t), (1, n), (0, 1)])
        self._add_block('V', [(2, s), (1, t), (1, n)])
        self._add_block('I', [(1, t), (1, r)])
        self._add_block('L', [(2, s), (1, t), (1, t)])
        self._add_block('R', [(2, s), (1, t), (1, t)])

        self._D = self._by_name['D']
        self._V = self._by_name['V']
        self._I = self._by_name['I']
        self._L = self._by_name['L']
        self._R = self._by_name['R']

    def D(self, i: int, j: int, l: int, b: int) -> int:
        return self._D.var((i, j, l, b))

    def V(self, i: int, j: int, l: int) -> int:
        return self._V.var((i, j, l))

    def I(self, j: int, m: int) -> int:
        return self._I.var((j, m))

    def L(self, i: int, j: int, jp: int) -> int:
        return self._L.var((i, j, jp))

    def R(self, i: int, j: int, jp: int) -> int:
        return self._R.var((i, j, jp))

    def P(self, side: str, i: int, j: int, jp: int) -> int:
        """L or R by name"""
        return self.L(i, j, jp) if side == 'L' else self.R(i, j, jp)

    def _sat_block(self, name: str) -> _Block:
        if not self.with_sat:
            raise LayoutError(f"{name}-variables need a layout built with with_sat=True")
        return self._by_name[name]

    def C(self, m: int, l: int, b: int) -> int:
        return self._sat_block('C').var((m, l, b))

    def T(self, l: int) -> int:
        return self._sat_block('T').var((l,))

    def T_lit(self, m: int, l: int, b: int) -> int:
        """T(m,ℓ,b): clause m is satisfied through the literal x_ℓ^b"""
        return self._sat_block('Tlit').var((m, l, b))

    def ref_vars(self) -> range:
        """Ids of the D, V, I, L, R families"""
        return range(self._D.offset + 1, self.num_vars + 1)


class AmLayout(_Layout):
    """Layout for the sequence-shaped refutation formula REF(F, s̃)"""

    def __init__(self, n: int, r: int, s_tilde: int):
        super().__init__()
        if n < 1 or r < 1 or s_tilde < 1:
            raise LayoutError(f"layout needs n, r, s_tilde >= 1, got {(n, r, s_tilde)}")
        self.n, self.r, self.s_tilde = n, r, s_tilde

        self._add_block('D', [(1, s_tilde), (1, n), (0, 1)])
        self._add_block('V', [(1, s_tilde), (0, n)])
        self._add_block('I', [(1, s_tilde), (0, r)])
        self._add_block('L', [(1, s_tilde), (0, s_tilde)])
        self._add_block('R', [(1, s_tilde), (0, s_tilde)])

    def D(self, u: int, i: int, b: int) -> int:
        return self._by_name['D'].var((u, i, b))

    def V(self, u: int, i: int) -> int:
        return self._by_name['V'].var((u, i))

    def I(self, u: int, j: int) -> int:
        return self._by_name['I'].var((u, j))

    def L(self, u: int, v: int) -> int:
        return self._by_name['L'].var((u, v))

    def R(self, u: int, v: int) -> int:
        return self._by_name['R'].var((u, v))
