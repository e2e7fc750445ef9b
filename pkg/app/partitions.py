"""
整数分拆与置换组合

ν ⊢ n 的枚举、共轭类大小、置换的轨道与两置换生成子群的联合轨道。
所有值构造后不可变，函数无副作用，可在多进程中直接使用。

置换约定：(πρ)(x) = π(ρ(x))，元素从 1 开始编号。
"""
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import permutations as _iter_permutations
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from sympy.combinatorics import Permutation as SymPermutation
from sympy.utilities.iterables import connected_components, partitions as _sympy_partitions

from utils.exceptions import DimensionError, DomainError, EmptyInputError

Block = FrozenSet[int]


@dataclass(frozen=True, order=True)
class Partition:
    """分拆 ν，parts 弱递减"""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise EmptyInputError("Partition", 0)
        if any(p < 1 for p in self.parts):
            raise DomainError("Partition", self.parts)
        if list(self.parts) != sorted(self.parts, reverse=True):
            object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @classmethod
    def from_multiplicities(cls, multiplicities: Sequence[int]) -> "Partition":
        """由 a₁…aₙ 构造 1^{a₁}…n^{aₙ}"""
        parts: List[int] = []
        for size, count in enumerate(multiplicities, start=1):
            parts.extend([size] * count)
        return cls(tuple(parts))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def gcd(self) -> int:
        return reduce(math.gcd, self.parts)

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        counts = [0] * self.n
        for part in self.parts:
            counts[part - 1] += 1
        return tuple(counts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Permutation:
    """{1,…,n} 上的双射，images[i-1] = π(i)"""

    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise DomainError("Permutation", self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(1, n + 1))
        for cycle in cycles:
            for i, x in enumerate(cycle):
                images[x - 1] = cycle[(i + 1) % len(cycle)]
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            inv[image - 1] = i
        return Permutation(tuple(inv))

    def cycle_type(self) -> Partition:
        return Partition(tuple(len(block) for block in orbits(self)))

    def __str__(self) -> str:
        parts = []
        for block in orbits(self):
            if len(block) == 1:
                continue
            start = min(block)
            cycle = [start]
            x = self(start)
            while x != start:
                cycle.append(x)
                x = self(x)
            parts.append("(" + " ".join(str(c) for c in cycle) + ")")
        return "".join(parts) or "id"


# ==================== 分拆 ====================

@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> Tuple[Partition, ...]:
    """
    枚举 n 的全部分拆，按 parts 的反字典序排列

    Example:
        >>> [str(p) for p in enumerate_partitions(4)]
        ['(4)', '(3,1)', '(2,2)', '(2,1,1)', '(1,1,1,1)']
    """
    if n < 1:
        raise EmptyInputError("enumerate_partitions", n)
    found = []
    # sympy 复用同一个 dict，必须立即展开
    for counts in _sympy_partitions(n):
        parts: List[int] = []
        for size, count in counts.items():
            parts.extend([size] * count)
        found.append(Partition(tuple(sorted(parts, reverse=True))))
    return tuple(sorted(found, key=lambda p: p.parts, reverse=True))


def conjugacy_class_size(nu: Partition) -> int:
    """n! / ∏ᵢ (i^{aᵢ} · aᵢ!)"""
    denominator = 1
    for size, count in enumerate(nu.multiplicities, start=1):
        denominator *= size ** count * math.factorial(count)
    return math.factorial(nu.n) // denominator


def canonical_representative(nu: Partition) -> Permutation:
    """π_ν：按 parts 顺序在连续区间上取轮换，如 (3,1) → (1 2 3)(4)"""
    cycles = []
    start = 1
    for part in nu.parts:
        cycles.append(list(range(start, start + part)))
        start += part
    return Permutation.from_cycles(nu.n, cycles)


# ==================== 置换 ====================

def compose(pi: Permutation, rho: Permutation) -> Permutation:
    """(πρ)(x) = π(ρ(x))"""
    if pi.n != rho.n:
        raise DimensionError(pi.n, rho.n)
    return Permutation(tuple(pi.images[r - 1] for r in rho.images))


@lru_cache(maxsize=None)
def all_permutations(n: int) -> Tuple[Permutation, ...]:
    return tuple(Permutation(p) for p in _iter_permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def orbits(pi: Permutation) -> Tuple[Block, ...]:
    """π 的轮换，按最小元素升序"""
    cyclic = SymPermutation([i - 1 for i in pi.images]).full_cyclic_form
    blocks = [frozenset(x + 1 for x in cycle) for cycle in cyclic]
    return tuple(sorted(blocks, key=min))


@lru_cache(maxsize=None)
def joint_orbits(pi: Permutation, rho: Permutation) -> Tuple[Block, ...]:
    """⟨π,ρ⟩ 的轨道，按最小元素升序"""
    if pi.n != rho.n:
        raise DimensionError(pi.n, rho.n)
    vertices = list(range(1, pi.n + 1))
    edges = [(x, g(x)) for g in (pi, rho) for x in vertices if g(x) != x]
    components = connected_components((vertices, edges))
    return tuple(sorted((frozenset(c) for c in components), key=min))
