"""
对称轨形代数模型

H*(A^[n]) 的置换指标模型：每个置换 π 带一个 A^{⊗orbits(π)} 中的标签张量，
乘积按 ⟨π,ρ⟩ 的联合轨道做块内乘法、乘 Euler 类的图缺陷次幂、再用余乘法分配到 πρ 的轨道。
𝔖ₙ 共轭不变部分即 Hilbert 概形的上同调环，按 ν 分解到 H*(A^(ν)) 的各个分量。

约定：
    - 每个置换的轨道按最小元素升序排列，标签张量的第 i 个因子属于第 i 个轨道
    - 收集、分配、共轭时因子重排都带 Koszul 符号（只有奇次因子交换产生符号）
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement, product
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from app.frobenius import FrobeniusAlgebra
from app.partitions import (
    Partition,
    Permutation,
    all_permutations,
    canonical_representative,
    compose,
    conjugacy_class_size,
    enumerate_partitions,
    joint_orbits,
    orbits,
)
from utils.exceptions import DimensionError, DomainError, ShapeError

logger = logging.getLogger(__name__)

Labels = Tuple[int, ...]
Tensor = Dict[Labels, Fraction]


def _accumulate(target: dict, key, value) -> None:
    total = target.get(key, 0) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def _odd_inversion_sign(order: Sequence[int], odd: Sequence[bool]) -> int:
    """把位置序列 order 排回升序时奇次因子之间的交换次数的奇偶"""
    swaps = 0
    for a in range(len(order)):
        if not odd[order[a]]:
            continue
        for b in range(a + 1, len(order)):
            if odd[order[b]] and order[a] > order[b]:
                swaps += 1
    return -1 if swaps % 2 else 1


# ==================== 带标签置换 ====================

@dataclass
class LabeledPermutation:
    """(π, Σ c·a₁⊗…⊗a_k)，k = #orbits(π)"""

    pi: Permutation
    tensor: Tensor = field(default_factory=dict)

    def __post_init__(self):
        size = len(orbits(self.pi))
        for key in self.tensor:
            if len(key) != size:
                raise ShapeError(size, len(key))
        self.tensor = {k: Fraction(v) for k, v in self.tensor.items() if v}

    @classmethod
    def basis(cls, pi: Permutation, labels: Sequence[int], coefficient=1) -> "LabeledPermutation":
        return cls(pi, {tuple(labels): Fraction(coefficient)})

    @property
    def n(self) -> int:
        return self.pi.n

    def is_zero(self) -> bool:
        return not self.tensor


def labels_degree(algebra: FrobeniusAlgebra, key: Labels) -> int:
    return sum(algebra.degree(i) for i in key)


def labels_perversity(algebra: FrobeniusAlgebra, key: Labels) -> int:
    return sum(algebra.perversity(i) for i in key)


def term_degree(algebra: FrobeniusAlgebra, pi: Permutation, key: Labels) -> int:
    """Σ deg(label) + 2(n − #orbits)"""
    return labels_degree(algebra, key) + 2 * (pi.n - len(key))


def term_perversity(algebra: FrobeniusAlgebra, pi: Permutation, key: Labels) -> int:
    """Σ p(label) + n − #orbits"""
    return labels_perversity(algebra, key) + pi.n - len(key)


# ==================== 乘积 ====================

@dataclass(frozen=True)
class _ProductGeometry:
    target: Permutation
    x_blocks: Tuple[int, ...]
    y_blocks: Tuple[int, ...]
    # 每个块内 πρ 轨道的全局位置（升序）
    target_slots: Tuple[Tuple[int, ...], ...]
    defects: Tuple[int, ...]
    # 各块结果拼接后回到全局轨道顺序的位置表
    scatter: Tuple[int, ...]


@lru_cache(maxsize=None)
def _geometry(pi: Permutation, rho: Permutation) -> _ProductGeometry:
    target = compose(pi, rho)
    blocks = joint_orbits(pi, rho)
    pi_orbits, rho_orbits, target_orbits = orbits(pi), orbits(rho), orbits(target)

    def block_index(orbit) -> int:
        x = min(orbit)
        return next(b for b, block in enumerate(blocks) if x in block)

    x_blocks = tuple(block_index(o) for o in pi_orbits)
    y_blocks = tuple(block_index(o) for o in rho_orbits)
    t_blocks = tuple(block_index(o) for o in target_orbits)
    slots = []
    defects = []
    for b, block in enumerate(blocks):
        twice = len(block) + 2 - x_blocks.count(b) - y_blocks.count(b) - t_blocks.count(b)
        if twice < 0 or twice % 2:
            raise DomainError("graph defect", (str(pi), str(rho)))
        defects.append(twice // 2)
        slots.append(tuple(i for i, tb in enumerate(t_blocks) if tb == b))
    scatter = tuple(i for block_slots in slots for i in block_slots)
    return _ProductGeometry(target, x_blocks, y_blocks, tuple(slots), tuple(defects), scatter)


def _block_result(algebra: FrobeniusAlgebra, labels: Sequence[int], defect: int, arity: int) -> Tensor:
    element = algebra.unit_element()
    for label in labels:
        element = algebra.multiply(element, algebra.element(label))
        if not element:
            return {}
    if defect:
        element = algebra.multiply(element, algebra.power(algebra.euler_element(), defect))
        if not element:
            return {}
    result: Tensor = {}
    for index, c in element.items():
        for key, v in algebra.comultiply_basis(index, arity).items():
            _accumulate(result, key, c * v)
    return result


@lru_cache(maxsize=1 << 18)
def _multiply_keys(
    algebra: FrobeniusAlgebra, pi: Permutation, x_key: Labels, rho: Permutation, y_key: Labels
) -> Tuple[Tuple[Labels, Fraction], ...]:
    geometry = _geometry(pi, rho)
    factors = list(x_key) + list(y_key)
    blocks = list(geometry.x_blocks) + list(geometry.y_blocks)
    odd = [algebra.degree(f) % 2 == 1 for f in factors]

    # 按块稳定排序收集：每块内先 x 标签后 y 标签
    gather = sorted(range(len(factors)), key=lambda i: blocks[i])
    sign = _odd_inversion_sign(gather, odd)

    partial: Tensor = {(): Fraction(sign)}
    for b, slots in enumerate(geometry.target_slots):
        labels = [factors[i] for i in gather if blocks[i] == b]
        block = _block_result(algebra, labels, geometry.defects[b], len(slots))
        if not block:
            return ()
        partial = {k + kb: c * v for k, c in partial.items() for kb, v in block.items()}

    # 按全局 πρ 轨道顺序分配
    result: Tensor = {}
    scatter = geometry.scatter
    order = sorted(range(len(scatter)), key=lambda i: scatter[i])
    for key, c in partial.items():
        placed = tuple(key[i] for i in order)
        parity = [algebra.degree(label) % 2 == 1 for label in key]
        _accumulate(result, placed, c * _odd_inversion_sign(order, parity))
    return tuple(result.items())


def multiply_labeled(x: LabeledPermutation, y: LabeledPermutation, algebra: FrobeniusAlgebra) -> LabeledPermutation:
    """
    (π, a)·(ρ, b)，结果落在 πρ 上

    对 ⟨π,ρ⟩ 的每个联合轨道 B：块内按规范顺序相乘全部标签，乘 e^{g(B)}，
    再用 Δ^{(k)} 分配到 B 内 k 个 πρ 轨道上；g(B) = ½(|B| + 2 − #π_B − #ρ_B − #(πρ)_B)。

    Raises:
        DimensionError: n 不一致
    """
    if x.n != y.n:
        raise DimensionError(x.n, y.n)
    geometry = _geometry(x.pi, y.pi)
    result: Tensor = {}
    for x_key, cx in x.tensor.items():
        for y_key, cy in y.tensor.items():
            for key, v in _multiply_keys(algebra, x.pi, x_key, y.pi, y_key):
                _accumulate(result, key, cx * cy * v)
    return LabeledPermutation(geometry.target, result)


# ==================== 共轭作用与对称化 ====================

@dataclass
class InvariantClass:
    """Σ_π (π, a_π)，按置换存放标签张量"""

    n: int
    terms: Dict[Permutation, Tensor] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {pi: t for pi, t in self.terms.items() if t}

    def is_zero(self) -> bool:
        return not self.terms

    def component(self, pi: Permutation) -> Tensor:
        return self.terms.get(pi, {})

    def labeled(self) -> Iterator[LabeledPermutation]:
        for pi, tensor in self.terms.items():
            yield LabeledPermutation(pi, tensor)

    def __add__(self, other: "InvariantClass") -> "InvariantClass":
        if other.n != self.n:
            raise DimensionError(self.n, other.n)
        terms = {pi: dict(t) for pi, t in self.terms.items()}
        for pi, tensor in other.terms.items():
            target = terms.setdefault(pi, {})
            for key, c in tensor.items():
                _accumulate(target, key, c)
        return InvariantClass(self.n, terms)

    def scale(self, c) -> "InvariantClass":
        c = Fraction(c)
        if not c:
            return InvariantClass(self.n)
        return InvariantClass(self.n, {pi: {k: v * c for k, v in t.items()} for pi, t in self.terms.items()})

    def __neg__(self) -> "InvariantClass":
        return self.scale(-1)

    def __sub__(self, other: "InvariantClass") -> "InvariantClass":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvariantClass):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms


@lru_cache(maxsize=None)
def _conjugation(sigma: Permutation, pi: Permutation) -> Tuple[Permutation, Tuple[int, ...]]:
    image = compose(compose(sigma, pi), sigma.inverse())
    moved = [min(sigma(x) for x in orbit) for orbit in orbits(pi)]
    order = tuple(sorted(range(len(moved)), key=lambda i: moved[i]))
    return image, order


def conjugate(sigma: Permutation, x: LabeledPermutation, algebra: FrobeniusAlgebra) -> LabeledPermutation:
    """σ·(π, a) = (σπσ⁻¹, a∘σ⁻¹)，标签重排带 Koszul 符号"""
    if sigma.n != x.n:
        raise DimensionError(sigma.n, x.n)
    image, order = _conjugation(sigma, x.pi)
    tensor: Tensor = {}
    for key, c in x.tensor.items():
        odd = [algebra.degree(label) % 2 == 1 for label in key]
        _accumulate(tensor, tuple(key[i] for i in order), c * _odd_inversion_sign(order, odd))
    return LabeledPermutation(image, tensor)


def act(sigma: Permutation, x: InvariantClass, algebra: FrobeniusAlgebra) -> InvariantClass:
    result = InvariantClass(x.n)
    for term in x.labeled():
        moved = conjugate(sigma, term, algebra)
        result = result + InvariantClass(x.n, {moved.pi: moved.tensor})
    return result


def symmetrize(x, algebra: FrobeniusAlgebra) -> InvariantClass:
    """
    𝔖ₙ 平均 (1/n!) Σ_σ σ·x，接受 LabeledPermutation 或 InvariantClass

    对不变输入幂等。
    """
    if isinstance(x, LabeledPermutation):
        x = InvariantClass(x.n, {x.pi: dict(x.tensor)})
    terms: Dict[Permutation, Tensor] = {}
    for sigma in all_permutations(x.n):
        for term in x.labeled():
            moved = conjugate(sigma, term, algebra)
            target = terms.setdefault(moved.pi, {})
            for key, c in moved.tensor.items():
                _accumulate(target, key, c)
    return InvariantClass(x.n, terms).scale(Fraction(1, math.factorial(x.n)))


# ==================== ν 分解 ====================

@lru_cache(maxsize=None)
def centralizer(nu: Partition) -> Tuple[Permutation, ...]:
    pi = canonical_representative(nu)
    return tuple(s for s in all_permutations(nu.n) if _conjugation(s, pi)[0] == pi)


def symmetrize_label(nu: Partition, label: Mapping[Labels, Fraction], algebra: FrobeniusAlgebra) -> Tensor:
    """在 π_ν 的中心化子上平均，得到沿相等部分对称化的标签"""
    pi = canonical_representative(nu)
    group = centralizer(nu)
    result: Tensor = {}
    for sigma in group:
        moved = conjugate(sigma, LabeledPermutation(pi, dict(label)), algebra)
        for key, c in moved.tensor.items():
            _accumulate(result, key, c / len(group))
    return result


def nu_class(nu: Partition, label: Mapping[Labels, Fraction], algebra: FrobeniusAlgebra) -> InvariantClass:
    """
    α_ν^[n]：(π_ν, label) 的对称化

    label 的因子与 ν 的各部分一一对应（按 parts 顺序）。

    Raises:
        ShapeError: 标签因子个数不等于 l(ν)
    """
    for key in label:
        if len(key) != nu.length:
            raise ShapeError(nu.length, len(key))
    return symmetrize(LabeledPermutation(canonical_representative(nu), dict(label)), algebra)


def project_to_nu(x: InvariantClass, lam: Partition) -> Tensor:
    """
    x 在循环型 λ 上的分量，表示为 A^(λ) 上的标签

    不变类由其在 π_λ 处的值决定：x_λ = nu_class(λ, |C(λ)|·x[π_λ])。
    """
    if lam.n != x.n:
        raise DimensionError(x.n, lam.n)
    size = conjugacy_class_size(lam)
    return {k: v * size for k, v in x.component(canonical_representative(lam)).items()}


def decompose(x: InvariantClass) -> Dict[Partition, Tensor]:
    """全部非零 ν 分量"""
    parts = {}
    for lam in enumerate_partitions(x.n):
        label = project_to_nu(x, lam)
        if label:
            parts[lam] = label
    return parts


def hilbert_product(alpha: InvariantClass, beta: InvariantClass, algebra: FrobeniusAlgebra) -> Dict[Partition, Tensor]:
    """
    α·β 的 ν 分解 {λ: γ_λ}

    只计算落在各 π_λ 上的项：α 在 π 处的项只与 β 在 π⁻¹π_λ 处的项配对。
    """
    if alpha.n != beta.n:
        raise DimensionError(alpha.n, beta.n)
    components: Dict[Partition, Tensor] = {}
    for lam in enumerate_partitions(alpha.n):
        target = canonical_representative(lam)
        acc: Tensor = {}
        for pi, tensor in alpha.terms.items():
            rho = compose(pi.inverse(), target)
            other = beta.terms.get(rho)
            if not other:
                continue
            product_term = multiply_labeled(LabeledPermutation(pi, tensor), LabeledPermutation(rho, other), algebra)
            for key, c in product_term.tensor.items():
                _accumulate(acc, key, c)
        if acc:
            size = conjugacy_class_size(lam)
            components[lam] = {k: v * size for k, v in acc.items()}
    return components


def orbifold_product(alpha: InvariantClass, beta: InvariantClass, algebra: FrobeniusAlgebra) -> InvariantClass:
    """完整乘积 Σ_{π,ρ} (π,a_π)·(ρ,b_ρ)"""
    if alpha.n != beta.n:
        raise DimensionError(alpha.n, beta.n)
    terms: Dict[Permutation, Tensor] = {}
    for x in alpha.labeled():
        for y in beta.labeled():
            z = multiply_labeled(x, y, algebra)
            target = terms.setdefault(z.pi, {})
            for key, c in z.tensor.items():
                _accumulate(target, key, c)
    return InvariantClass(alpha.n, terms)


def unit_class(algebra: FrobeniusAlgebra, n: int) -> InvariantClass:
    return nu_class(Partition((1,) * n), {(algebra.unit,) * n: Fraction(1)}, algebra)


# ==================== 次数与 perversity ====================

def component_perversity(algebra: FrobeniusAlgebra, lam: Partition, label: Mapping[Labels, Fraction]) -> int:
    """p(γ_λ^[n]) = p(γ_λ) + n − l(λ)，和取最大值；零类为 −1"""
    return max((labels_perversity(algebra, k) + lam.n - lam.length for k in label), default=-1)


def component_perversities(algebra: FrobeniusAlgebra, lam: Partition, label: Mapping[Labels, Fraction]) -> set:
    return {labels_perversity(algebra, k) + lam.n - lam.length for k in label}


def class_perversity(x: InvariantClass, algebra: FrobeniusAlgebra) -> int:
    return max(
        (term_perversity(algebra, pi, k) for pi, t in x.terms.items() for k in t),
        default=-1,
    )


def class_degrees(x: InvariantClass, algebra: FrobeniusAlgebra) -> set:
    return {term_degree(algebra, pi, k) for pi, t in x.terms.items() for k in t}


# ==================== 不变基 ====================

@dataclass(eq=False)
class BasisClass:
    """不变基元素：ν 与沿 parts 排列的单项式标签（相等部分内升序，奇标签互异）"""

    algebra: FrobeniusAlgebra
    nu: Partition
    labels: Labels

    @property
    def n(self) -> int:
        return self.nu.n

    @cached_property
    def degree(self) -> int:
        return labels_degree(self.algebra, self.labels) + 2 * (self.nu.n - self.nu.length)

    @cached_property
    def perversity(self) -> int:
        return labels_perversity(self.algebra, self.labels) + self.nu.n - self.nu.length

    @cached_property
    def label(self) -> Tensor:
        return symmetrize_label(self.nu, {self.labels: Fraction(1)}, self.algebra)

    @cached_property
    def invariant(self) -> InvariantClass:
        return nu_class(self.nu, self.label, self.algebra)

    def describe(self) -> str:
        names = "|".join(self.algebra.labels[i] for i in self.labels)
        return f"{self.nu}[{names}]"


def _group_labelings(algebra: FrobeniusAlgebra, count: int) -> List[Labels]:
    found = []
    for combo in combinations_with_replacement(algebra.basis(), count):
        odd = [c for c in combo if algebra.degree(c) % 2]
        if len(odd) == len(set(odd)):
            found.append(combo)
    return found


def labelings(algebra: FrobeniusAlgebra, nu: Partition) -> Iterator[Labels]:
    """ν 的全部规范标签：每组相等部分取一个超对称多重集"""
    groups = [count for count in reversed(nu.multiplicities) if count]
    for choice in product(*(_group_labelings(algebra, count) for count in groups)):
        yield tuple(label for group in choice for label in group)


@lru_cache(maxsize=None)
def invariant_basis(algebra: FrobeniusAlgebra, n: int) -> Tuple[BasisClass, ...]:
    """
    H*(A^[n]) 的不变基，按 ν（enumerate_partitions 顺序）再按标签排列

    各 (d, p) 的元素个数与 hilbert_pp 的系数一致。
    """
    if n < 1:
        raise DomainError("invariant_basis", n)
    basis = []
    for nu in enumerate_partitions(n):
        for labels in labelings(algebra, nu):
            basis.append(BasisClass(algebra, nu, labels))
    logger.debug("invariant basis for n=%d on %s: %d classes", n, algebra.name, len(basis))
    return tuple(basis)


def basis_counts(basis: Sequence[BasisClass]) -> Dict[Tuple[int, int], int]:
    counts: Dict[Tuple[int, int], int] = {}
    for b in basis:
        key = (b.degree, b.perversity)
        counts[key] = counts.get(key, 0) + 1
    return counts
