"""
分次 Frobenius 代数

紧曲面上同调 (H*(A), ∪, ∫) 的有限维模型：乘法结构常数、余单位（积分）、单位、Euler 类，
以及由伴随关系 ⟨Δ(a), b⊗c⟩ = ⟨a, bc⟩ 唯一确定的余乘法 Δ。

张量积采用 Koszul 符号约定：
    (x⊗y)(z⊗w) = (−1)^{|y||z|} xz⊗yw
    ⟨x⊗y, z⊗w⟩ = (−1)^{|y||z|} ⟨x,z⟩⟨y,w⟩
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from app.schemas import AxiomCheck, FrobeniusReport
from app.surfaces import SurfaceCase, SurfaceModel, surface_model, wedge_sign
from utils.exceptions import DomainError, UnsupportedModelError

logger = logging.getLogger(__name__)

# 代数元素：基下标 → 系数；张量元素：基下标元组 → 系数
AlgebraClass = Dict[int, Fraction]
TensorClass = Dict[Tuple[int, ...], Fraction]

MAX_WITNESSES_PER_AXIOM = 5


def _rational(x: Fraction) -> Rational:
    x = Fraction(x)
    return Rational(x.numerator, x.denominator)


def _fraction(x: Rational) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _accumulate(target: dict, key, value) -> None:
    total = target.get(key, 0) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebra:
    """
    有限维分次交换 Frobenius 代数

    table[(i, j)] 给出 b_i·b_j 在基上的展开；counit[i] = ε(b_i)。
    perversities 是附加在基元素上的元数据，不参与代数运算。
    """

    name: str
    labels: Tuple[str, ...]
    degrees: Tuple[int, ...]
    table: Mapping[Tuple[int, int], Mapping[int, Fraction]]
    counit: Tuple[Fraction, ...]
    unit: int = 0
    euler: Mapping[int, Fraction] = field(default_factory=dict)
    perversities: Tuple[int, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def basis(self) -> range:
        return range(self.dimension)

    @cached_property
    def top_degree(self) -> int:
        return max(self.degrees)

    def degree(self, index: int) -> int:
        return self.degrees[index]

    def perversity(self, index: int) -> int:
        return self.perversities[index] if self.perversities else 0

    def element(self, index: int) -> AlgebraClass:
        return {index: Fraction(1)}

    def unit_element(self) -> AlgebraClass:
        return self.element(self.unit)

    def euler_element(self) -> AlgebraClass:
        return {k: Fraction(v) for k, v in self.euler.items() if v}

    # ==================== 乘法与配对 ====================

    def multiply(self, a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> AlgebraClass:
        result: AlgebraClass = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, c in self.table.get((i, j), {}).items():
                    _accumulate(result, k, x * y * c)
        return result

    def power(self, a: Mapping[int, Fraction], exponent: int) -> AlgebraClass:
        result = self.unit_element()
        for _ in range(exponent):
            result = self.multiply(result, a)
        return result

    def integrate(self, a: Mapping[int, Fraction]) -> Fraction:
        return sum((Fraction(self.counit[i]) * c for i, c in a.items()), Fraction(0))

    def pair(self, a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> Fraction:
        return self.integrate(self.multiply(a, b))

    @cached_property
    def gram(self) -> Matrix:
        """G_{jm} = ∫ b_j b_m"""
        n = self.dimension
        return Matrix(n, n, lambda j, m: _rational(self.pair(self.element(j), self.element(m))))

    @cached_property
    def gram_inverse(self) -> Matrix:
        return self.gram.inv()

    def tensor_multiply(self, x: Mapping[Tuple[int, ...], Fraction], y: Mapping[Tuple[int, ...], Fraction]) -> TensorClass:
        """A^{⊗k} 中的乘法（Koszul 符号）"""
        result: TensorClass = {}
        for kx, cx in x.items():
            for ky, cy in y.items():
                partial: TensorClass = {(): Fraction(1)}
                for a, b in zip(kx, ky):
                    step = self.table.get((a, b), {})
                    partial = {k + (m,): c * v for k, c in partial.items() for m, v in step.items()}
                    if not partial:
                        break
                sign = self._tensor_sign(kx, ky)
                for key, c in partial.items():
                    _accumulate(result, key, sign * cx * cy * c)
        return result

    def _tensor_sign(self, kx: Sequence[int], ky: Sequence[int]) -> int:
        crossings = 0
        for i, a in enumerate(kx):
            if self.degrees[a] % 2:
                crossings += sum(self.degrees[b] for b in ky[:i])
        return -1 if crossings % 2 else 1

    def tensor_pair(self, x: Mapping[Tuple[int, ...], Fraction], y: Mapping[Tuple[int, ...], Fraction]) -> Fraction:
        """⟨x₁⊗…⊗x_k, y₁⊗…⊗y_k⟩，y_j 越过 x_i (i > j) 时取 Koszul 符号"""
        total = Fraction(0)
        for kx, cx in x.items():
            for ky, cy in y.items():
                value = Fraction(1)
                for a, b in zip(kx, ky):
                    value *= self.pair(self.element(a), self.element(b))
                    if not value:
                        break
                if value:
                    total += self._tensor_sign(kx, ky) * cx * cy * value
        return total

    # ==================== 余乘法 ====================

    @cached_property
    def _coproduct_table(self) -> Dict[int, TensorClass]:
        """
        Δ(b_a) = Σ c_{jk} b_j⊗b_k

        记 R_{mn} = ∫ b_a b_m b_n，C' = G^{−T} R G^{−1}，则
        c_{jk} = (−1)^{|b_k|(D−|b_j|)} C'_{jk}，D 为顶次数。
        """
        g_inv = self.gram_inverse
        g_inv_t = g_inv.T
        size = self.dimension
        top = self.top_degree
        tables: Dict[int, TensorClass] = {}
        for a in self.basis():
            r = Matrix(
                size,
                size,
                lambda m, n: _rational(self.integrate(self.multiply(self.multiply(self.element(a), self.element(m)), self.element(n)))),
            )
            c_prime = g_inv_t * r * g_inv
            coproduct: TensorClass = {}
            for j in range(size):
                for k in range(size):
                    value = c_prime[j, k]
                    if value == 0:
                        continue
                    sign = -1 if (self.degrees[k] * (top - self.degrees[j])) % 2 else 1
                    coproduct[(j, k)] = sign * _fraction(value)
            tables[a] = coproduct
        logger.debug("coproduct table built for %s", self.name)
        return tables

    def coproduct(self, a: Mapping[int, Fraction]) -> TensorClass:
        result: TensorClass = {}
        for i, c in a.items():
            for key, v in self._coproduct_table[i].items():
                _accumulate(result, key, c * v)
        return result

    def comultiply(self, a: Mapping[int, Fraction], k: int) -> TensorClass:
        """Δ^{(k)}：Δ^{(1)} = id，Δ^{(k+1)} = (id^{⊗(k−1)}⊗Δ)∘Δ^{(k)}"""
        if k < 1:
            raise DomainError("comultiply", k)
        result: TensorClass = {(i,): Fraction(c) for i, c in a.items() if c}
        for _ in range(k - 1):
            result = self._expand_last(result)
        return result

    def _expand_last(self, x: Mapping[Tuple[int, ...], Fraction]) -> TensorClass:
        top = self.top_degree
        result: TensorClass = {}
        for key, c in x.items():
            head, last = key[:-1], key[-1]
            # Δ 的次数为 D，越过前面的因子
            sign = -1 if (top * sum(self.degrees[h] for h in head)) % 2 else 1
            for pair_key, v in self._coproduct_table[last].items():
                _accumulate(result, head + pair_key, sign * c * v)
        return result

    def comultiply_basis(self, index: int, k: int) -> TensorClass:
        return _comultiply_basis(self, index, k)


@lru_cache(maxsize=None)
def _comultiply_basis(algebra: FrobeniusAlgebra, index: int, k: int) -> TensorClass:
    return algebra.comultiply(algebra.element(index), k)


# ==================== 预置代数 ====================

@lru_cache(maxsize=None)
def surface_algebra(model: SurfaceModel) -> FrobeniusAlgebra:
    """
    紧曲面模型的外代数：基下标即生成元位掩码，∫ 顶单项式 = 1，e = 0

    进程内按模型缓存，worker 进程中按模型重建。
    """
    if not model.compact:
        raise UnsupportedModelError(model.case.value, "surface_algebra")
    size = model.dimension
    table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i, j in product(range(size), repeat=2):
        sign = wedge_sign(i, j)
        if sign:
            table[(i, j)] = {i | j: Fraction(sign)}
    counit = tuple(Fraction(1) if i == model.top else Fraction(0) for i in range(size))
    return FrobeniusAlgebra(
        name=model.case.value,
        labels=tuple(model.name(i) for i in range(size)),
        degrees=tuple(model.degree(i) for i in range(size)),
        table=table,
        counit=counit,
        unit=0,
        euler={},
        perversities=tuple(model.perversity(i) for i in range(size)),
    )


def abelian_surface_algebra() -> FrobeniusAlgebra:
    return surface_algebra(surface_model(SurfaceCase.ABELIAN_OVER_ELLIPTIC))


def ground_field_algebra(euler: Optional[Fraction] = None) -> FrobeniusAlgebra:
    """一维偶代数 ℚ，ε = id；euler 可注入非零值以检验图缺陷项"""
    return FrobeniusAlgebra(
        name="ground-field",
        labels=("1",),
        degrees=(0,),
        table={(0, 0): {0: Fraction(1)}},
        counit=(Fraction(1),),
        unit=0,
        euler={0: Fraction(euler)} if euler else {},
        perversities=(0,),
    )


def with_counit(algebra: FrobeniusAlgebra, counit: Sequence) -> FrobeniusAlgebra:
    """替换余单位（用于构造损坏的代数做自检）"""
    return FrobeniusAlgebra(
        name=f"{algebra.name}*",
        labels=algebra.labels,
        degrees=algebra.degrees,
        table=algebra.table,
        counit=tuple(Fraction(c) for c in counit),
        unit=algebra.unit,
        euler=algebra.euler,
        perversities=algebra.perversities,
    )


# ==================== 公理校验 ====================

def _basis_product(algebra: FrobeniusAlgebra, *indices: int) -> AlgebraClass:
    result = algebra.unit_element()
    for i in indices:
        result = algebra.multiply(result, algebra.element(i))
    return result


def _check_associativity(algebra: FrobeniusAlgebra) -> List[str]:
    bad = []
    for i, j, k in product(algebra.basis(), repeat=3):
        ab = algebra.multiply(algebra.element(i), algebra.element(j))
        bc = algebra.multiply(algebra.element(j), algebra.element(k))
        if algebra.multiply(ab, algebra.element(k)) != algebra.multiply(algebra.element(i), bc):
            bad.append(f"({algebra.labels[i]}*{algebra.labels[j]})*{algebra.labels[k]}")
    return bad


def _check_commutativity(algebra: FrobeniusAlgebra) -> List[str]:
    bad = []
    for i, j in product(algebra.basis(), repeat=2):
        sign = -1 if algebra.degree(i) * algebra.degree(j) % 2 else 1
        ab = algebra.multiply(algebra.element(i), algebra.element(j))
        ba = algebra.multiply(algebra.element(j), algebra.element(i))
        if ab != {k: sign * v for k, v in ba.items()}:
            bad.append(f"{algebra.labels[i]}*{algebra.labels[j]}")
    return bad


def _check_homogeneity(algebra: FrobeniusAlgebra) -> List[str]:
    top = algebra.top_degree
    return [
        f"counit({algebra.labels[i]}) = {algebra.counit[i]} in degree {algebra.degree(i)}"
        for i in algebra.basis()
        if algebra.counit[i] and algebra.degree(i) != top
    ]


def _check_nondegeneracy(algebra: FrobeniusAlgebra) -> List[str]:
    """配对非退化，且只在 H^d × H^{D−d} 上非零"""
    bad = []
    if algebra.gram.det() == 0:
        bad.append("Gram matrix is singular")
    top = algebra.top_degree
    for j, m in product(algebra.basis(), repeat=2):
        if algebra.gram[j, m] != 0 and algebra.degree(j) + algebra.degree(m) != top:
            bad.append(f"<{algebra.labels[j]}, {algebra.labels[m]}> != 0 off the degree-{top} pairing")
    return bad


def _check_adjointness(algebra: FrobeniusAlgebra) -> List[str]:
    bad = []
    for a, m, n in product(algebra.basis(), repeat=3):
        left = algebra.tensor_pair(algebra.coproduct(algebra.element(a)), {(m, n): Fraction(1)})
        right = algebra.integrate(_basis_product(algebra, a, m, n))
        if left != right:
            bad.append(f"<Delta({algebra.labels[a]}), {algebra.labels[m]}(x){algebra.labels[n]}>")
    return bad


def _check_coassociativity(algebra: FrobeniusAlgebra) -> List[str]:
    bad = []
    top = algebra.top_degree
    for a in algebra.basis():
        delta = algebra.coproduct(algebra.element(a))
        left: TensorClass = {}
        right: TensorClass = {}
        for (x, y), c in delta.items():
            for (u, v), d in algebra.coproduct(algebra.element(x)).items():
                _accumulate(left, (u, v, y), c * d)
            sign = -1 if top * algebra.degree(x) % 2 else 1
            for (u, v), d in algebra.coproduct(algebra.element(y)).items():
                _accumulate(right, (x, u, v), sign * c * d)
        if left != right:
            bad.append(f"Delta({algebra.labels[a]})")
    return bad


def _check_frobenius_condition(algebra: FrobeniusAlgebra) -> List[str]:
    """Δ(ab) = Δ(a)·(1⊗b)"""
    bad = []
    for a, b in product(algebra.basis(), repeat=2):
        left = algebra.coproduct(algebra.multiply(algebra.element(a), algebra.element(b)))
        right = algebra.tensor_multiply(algebra.coproduct(algebra.element(a)), {(algebra.unit, b): Fraction(1)})
        if left != right:
            bad.append(f"Delta({algebra.labels[a]}*{algebra.labels[b]})")
    return bad


def _check_counit_axiom(algebra: FrobeniusAlgebra) -> List[str]:
    """(ε⊗id)Δ(a) = a"""
    bad = []
    for a in algebra.basis():
        image: AlgebraClass = {}
        for (x, y), c in algebra.coproduct(algebra.element(a)).items():
            if algebra.counit[x]:
                _accumulate(image, y, c * algebra.counit[x])
        if image != algebra.element(a):
            bad.append(f"(counit(x)id)Delta({algebra.labels[a]})")
    return bad


_AXIOMS = (
    ("associativity", _check_associativity),
    ("graded_commutativity", _check_commutativity),
    ("counit_homogeneity", _check_homogeneity),
    ("nondegeneracy", _check_nondegeneracy),
    ("adjointness", _check_adjointness),
    ("coassociativity", _check_coassociativity),
    ("frobenius_condition", _check_frobenius_condition),
    ("counit_axiom", _check_counit_axiom),
)


def validate(algebra: FrobeniusAlgebra) -> FrobeniusReport:
    """
    逐条检查 Frobenius 代数公理，失败作为报告条目返回而不抛异常

    Gram 矩阵奇异时跳过依赖 Δ 的检查。
    """
    checks: List[AxiomCheck] = []
    singular = algebra.gram.det() == 0
    for name, check in _AXIOMS:
        if singular and name in ("adjointness", "coassociativity", "frobenius_condition", "counit_axiom"):
            checks.append(AxiomCheck(name=name, passed=False, skipped=True, witnesses=["Gram matrix is singular"]))
            continue
        bad = check(algebra)
        checks.append(AxiomCheck(name=name, passed=not bad, witnesses=bad[:MAX_WITNESSES_PER_AXIOM], failures=len(bad)))
        if bad:
            logger.info("axiom %s failed on %s: %d witnesses", name, algebra.name, len(bad))
    return FrobeniusReport(
        algebra=algebra.name,
        dimension=algebra.dimension,
        passed=all(c.passed for c in checks),
        checks=checks,
    )
