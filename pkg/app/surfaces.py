"""
三类纤维化群曲面模型

A → B 的三种情形：阿贝尔曲面 → 椭圆曲线、E×ℂ → ℂ、(E×ℂ*)/Γ → ℂ*。
上同调是奇数次生成元上的外代数，单项式用位掩码表示（第 i 位对应第 i 个生成元），
perversity 在单项式上可加。Aⁿ 上的类是单项式元组的有理线性组合。
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

from app.bigraded import PerversePolynomial
from utils.exceptions import (
    DimensionError,
    DomainError,
    GroupMismatchError,
    ShapeError,
    UnsupportedModelError,
)

logger = logging.getLogger(__name__)

Monomial = int
TensorKey = Tuple[Monomial, ...]


class SurfaceCase(Enum):
    ABELIAN_OVER_ELLIPTIC = "abelian"
    ELLIPTIC_TIMES_LINE = "e-times-line"
    ELLIPTIC_TIMES_TORUS_QUOTIENT = "e-times-torus-quotient"


@dataclass(frozen=True)
class Generator:
    name: str
    perversity: int
    degree: int = 1


@dataclass(frozen=True)
class SurfaceModel:
    """
    曲面模型：生成元表、挠秩 k、是否紧、半小缺陷 r(f)

    挠子群取 (ℚ/ℤ)^k ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_s，torsion_factors 为不变因子 d₁ | d₂ | …；
    缺省为空，即分裂形式 |A[m]| = m^k。
    """

    case: SurfaceCase
    generators: Tuple[Generator, ...]
    torsion_rank: int
    compact: bool
    defect: int = 1
    torsion_factors: Tuple[int, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def torsion_components(self) -> int:
        return self.torsion_rank + len(self.torsion_factors)

    @property
    def dimension(self) -> int:
        return 1 << self.rank

    @property
    def top(self) -> Monomial:
        return self.dimension - 1

    def monomials(self) -> range:
        return range(self.dimension)

    def degree(self, mask: Monomial) -> int:
        return bin(mask).count("1")

    def perversity(self, mask: Monomial) -> int:
        return sum(g.perversity for i, g in enumerate(self.generators) if mask >> i & 1)

    def name(self, mask: Monomial) -> str:
        if mask == 0:
            return "1"
        return "*".join(g.name for i, g in enumerate(self.generators) if mask >> i & 1)

    def mask_of(self, *names: str) -> Monomial:
        lookup = {g.name: i for i, g in enumerate(self.generators)}
        mask = 0
        for name in names:
            if name not in lookup:
                raise DomainError(f"generator of {self.case.value}", name)
            mask |= 1 << lookup[name]
        return mask


_PRESETS = {
    SurfaceCase.ABELIAN_OVER_ELLIPTIC: (
        (Generator("alpha", 0), Generator("beta", 0), Generator("gamma", 1), Generator("delta", 1)),
        4,
        True,
    ),
    SurfaceCase.ELLIPTIC_TIMES_LINE: (
        (Generator("e1", 1), Generator("e2", 1)),
        2,
        False,
    ),
    SurfaceCase.ELLIPTIC_TIMES_TORUS_QUOTIENT: (
        (Generator("u", 0), Generator("e1", 1), Generator("e2", 1)),
        3,
        False,
    ),
}


def is_invariant_factor_chain(factors: Sequence[int]) -> bool:
    """每个因子 ≥ 2 且依次整除"""
    return all(d >= 2 for d in factors) and all(b % a == 0 for a, b in zip(factors, factors[1:]))


@lru_cache(maxsize=None)
def surface_model(
    case: SurfaceCase,
    torsion_rank: Optional[int] = None,
    torsion_factors: Tuple[int, ...] = (),
) -> SurfaceModel:
    """
    预置模型

    Args:
        case: 曲面情形
        torsion_rank: 覆盖默认挠秩 k
        torsion_factors: 挠子群有限部分的不变因子，缺省为分裂形式

    Raises:
        DomainError: 秩为负或不变因子不构成整除链
    """
    case = SurfaceCase(case)
    generators, default_rank, compact = _PRESETS[case]
    rank = default_rank if torsion_rank is None else torsion_rank
    if rank < 0:
        raise DomainError("torsion_rank", rank)
    factors = tuple(torsion_factors)
    if not is_invariant_factor_chain(factors):
        raise DomainError("torsion_factors", list(factors))
    return SurfaceModel(
        case=case,
        generators=generators,
        torsion_rank=rank,
        compact=compact,
        torsion_factors=factors,
    )


def with_perversities(model: SurfaceModel, perversities: Sequence[int]) -> SurfaceModel:
    """替换生成元 perversity 表（用于注入错误表做自检）"""
    if len(perversities) != model.rank:
        raise ShapeError(model.rank, len(perversities), "perversity table")
    generators = tuple(replace(g, perversity=p) for g, p in zip(model.generators, perversities))
    return replace(model, generators=generators)


def cohomology_pp(model: SurfaceModel) -> PerversePolynomial:
    """H*(A) 的 perverse 级数"""
    terms: Dict[Tuple[int, int], int] = {}
    for mask in model.monomials():
        key = (model.degree(mask), model.perversity(mask))
        terms[key] = terms.get(key, 0) + 1
    return PerversePolynomial.from_terms(terms)


# ==================== 外代数符号 ====================

def _popcount(x: int) -> int:
    return bin(x).count("1")


def wedge_sign(left: Monomial, right: Monomial) -> int:
    """单项式乘积 left·right 重排为升序时的符号；有公共生成元时为 0"""
    if left & right:
        return 0
    swaps = 0
    rest = right
    while rest:
        low = rest & -rest
        swaps += _popcount(left & ~((low << 1) - 1))
        rest ^= low
    return -1 if swaps % 2 else 1


def tensor_sign(left: TensorKey, right: TensorKey) -> int:
    """(x₁⊗…⊗x_k)(y₁⊗…⊗y_k) 的 Koszul 符号与逐项外积符号"""
    sign = 1
    for x, y in zip(left, right):
        s = wedge_sign(x, y)
        if s == 0:
            return 0
        sign *= s
    # y_j (j < i) 越过 x_i
    crossings = 0
    for i, x in enumerate(left):
        if _popcount(x) % 2:
            crossings += sum(_popcount(y) for y in right[:i])
    return -sign if crossings % 2 else sign


# ==================== Aⁿ 上的类 ====================

@dataclass
class SurfaceClass:
    """H*(Aⁿ) 中的类，terms 的键是长度为 n 的单项式元组"""

    model: SurfaceModel
    factors: int
    terms: Dict[TensorKey, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for key in self.terms:
            if len(key) != self.factors:
                raise ShapeError(self.factors, len(key), "surface class")
        self.terms = {k: Fraction(v) for k, v in self.terms.items() if v}

    @classmethod
    def basis(cls, model: SurfaceModel, key: Iterable[Monomial]) -> "SurfaceClass":
        key = tuple(key)
        return cls(model, len(key), {key: Fraction(1)})

    @classmethod
    def unit(cls, model: SurfaceModel, factors: int = 1) -> "SurfaceClass":
        return cls.basis(model, (0,) * factors)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_of(self, key: TensorKey) -> int:
        return sum(self.model.degree(m) for m in key)

    def perversity_of(self, key: TensorKey) -> int:
        return sum(self.model.perversity(m) for m in key)

    def perversity(self) -> int:
        """p(Σ) = max；零类约定为 -1"""
        return max((self.perversity_of(k) for k in self.terms), default=-1)

    def perversities(self) -> set:
        return {self.perversity_of(k) for k in self.terms}

    def is_pure(self) -> bool:
        return len(self.perversities()) <= 1

    def _check(self, other: "SurfaceClass") -> None:
        if other.model.generators != self.model.generators:
            raise DomainError("product across surface models", other.model.case.value)
        if other.factors != self.factors:
            raise DimensionError(self.factors, other.factors)

    def __add__(self, other: "SurfaceClass") -> "SurfaceClass":
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return SurfaceClass(self.model, self.factors, terms)

    def scale(self, c) -> "SurfaceClass":
        return SurfaceClass(self.model, self.factors, {k: v * c for k, v in self.terms.items()})

    def __neg__(self) -> "SurfaceClass":
        return self.scale(-1)

    def __sub__(self, other: "SurfaceClass") -> "SurfaceClass":
        return self + (-other)

    def __mul__(self, other: "SurfaceClass") -> "SurfaceClass":
        self._check(other)
        terms: Dict[TensorKey, Fraction] = {}
        for kx, vx in self.terms.items():
            for ky, vy in other.terms.items():
                sign = tensor_sign(kx, ky)
                if sign:
                    key = tuple(x | y for x, y in zip(kx, ky))
                    terms[key] = terms.get(key, 0) + sign * vx * vy
        return SurfaceClass(self.model, self.factors, terms)

    def tensor(self, other: "SurfaceClass") -> "SurfaceClass":
        """x ⊗ y ∈ H*(A^{k+l})"""
        terms = {kx + ky: vx * vy for kx, vx in self.terms.items() for ky, vy in other.terms.items()}
        return SurfaceClass(self.model, self.factors + other.factors, terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SurfaceClass):
            return NotImplemented
        return self.factors == other.factors and self.terms == other.terms

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, value in sorted(self.terms.items()):
            label = "⊗".join(self.model.name(m) for m in key)
            parts.append(f"{value}*{label}")
        return " + ".join(parts)


def surface_product(x: SurfaceClass, y: SurfaceClass) -> SurfaceClass:
    return x * y


def basis_classes(model: SurfaceModel, factors: int) -> Iterator[SurfaceClass]:
    for key in product(model.monomials(), repeat=factors):
        yield SurfaceClass.basis(model, key)


# ==================== 对偶 ====================

def _require_compact(model: SurfaceModel, operation: str) -> None:
    if not model.compact:
        raise UnsupportedModelError(model.case.value, operation)


def integrate(x: SurfaceClass) -> Fraction:
    """∫_{Aⁿ}，定向约定 ∫ x₁x₂x₃x₄ = 1（每个因子）"""
    _require_compact(x.model, "integrate")
    return x.terms.get((x.model.top,) * x.factors, Fraction(0))


def pairing(x: SurfaceClass, y: SurfaceClass) -> Fraction:
    return integrate(x * y)


def poincare_dual(x: SurfaceClass) -> SurfaceClass:
    """
    单项式基元素的 Poincaré 对偶：唯一满足 ⟨x, x^∨⟩ = 1 的（带符号）基元素

    满足 p(x) + p(x^∨) = 2·n·r(f)。
    """
    model = x.model
    _require_compact(model, "poincare_dual")
    if len(x.terms) != 1:
        raise ShapeError(1, len(x.terms), "poincare_dual input terms")
    (key, coefficient), = x.terms.items()
    dual_key = tuple(model.top ^ m for m in key)
    sign = tensor_sign(key, dual_key)
    return SurfaceClass(model, x.factors, {dual_key: Fraction(1) / (coefficient * sign)})


# ==================== 求和映射 ====================

def _generator_image(model: SurfaceModel, bit: int, n: int) -> SurfaceClass:
    terms = {}
    for k in range(n):
        key = [0] * n
        key[k] = 1 << bit
        terms[tuple(key)] = Fraction(1)
    return SurfaceClass(model, n, terms)


def summation_pullback(x: SurfaceClass, n: int) -> SurfaceClass:
    """m*: H*(A) → H*(Aⁿ)，环同态，g ↦ Σ_k 1⊗…⊗g⊗…⊗1"""
    if n < 1:
        raise DomainError("summation_pullback", n)
    if x.factors != 1:
        raise ShapeError(1, x.factors, "summation_pullback input")
    model = x.model
    result = SurfaceClass(model, n, {})
    for (mask,), value in x.terms.items():
        image = SurfaceClass.unit(model, n)
        for bit in range(model.rank):
            if mask >> bit & 1:
                image = image * _generator_image(model, bit, n)
        result = result + image.scale(value)
    return result


def negation_pullback(x: SurfaceClass) -> SurfaceClass:
    """(−1)* 在 H^k 上乘 (−1)^k"""
    return SurfaceClass(
        x.model,
        x.factors,
        {k: (-v if x.degree_of(k) % 2 else v) for k, v in x.terms.items()},
    )


@lru_cache(maxsize=None)
def _dual_pullback(model: SurfaceModel, mask: Monomial, n: int) -> SurfaceClass:
    """h*(b^∨)，b 为 A 的单项式"""
    dual = poincare_dual(SurfaceClass.basis(model, (mask,)))
    return summation_pullback(negation_pullback(dual), n)


def pushforward_summation(x: SurfaceClass) -> SurfaceClass:
    """
    h_* 其中 h = −m : Aⁿ → A

    由伴随 ⟨h_*α, β⟩_A = ⟨α, h*β⟩_{Aⁿ} 计算，h* = (−1)* ∘ m*。
    """
    model = x.model
    _require_compact(model, "pushforward_summation")
    terms = {}
    for mask in model.monomials():
        value = pairing(x, _dual_pullback(model, mask, x.factors))
        if value:
            terms[(mask,)] = value
    return SurfaceClass(model, 1, terms)


# ==================== 挠点 ====================

@dataclass(frozen=True)
class TorsionElement:
    """(ℚ/ℤ)^k 中的元素，每个分量取 [0, 1) 的分数"""

    components: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(Fraction(c) % 1 for c in self.components))

    @classmethod
    def zero(cls, rank: int) -> "TorsionElement":
        return cls((Fraction(0),) * rank)

    @property
    def rank(self) -> int:
        return len(self.components)

    def __add__(self, other: "TorsionElement") -> "TorsionElement":
        if other.rank != self.rank:
            raise GroupMismatchError(self.rank, other.rank)
        return TorsionElement(tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "TorsionElement":
        return TorsionElement(tuple(-c for c in self.components))

    def is_zero(self) -> bool:
        return not any(self.components)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.components) + ")"


def is_m_torsion(sigma: TorsionElement, m: int) -> bool:
    """m·σ = 0"""
    return all((c * m).denominator == 1 for c in sigma.components)


def in_torsion_group(model: SurfaceModel, sigma: TorsionElement) -> bool:
    """σ 落在模型的挠子群中：分量个数一致，有限部分的分母整除对应的不变因子"""
    if sigma.rank != model.torsion_components:
        return False
    finite = sigma.components[model.torsion_rank:]
    return all(d % c.denominator == 0 for c, d in zip(finite, model.torsion_factors))


def _cyclic_orders(model: SurfaceModel, m: int) -> Tuple[int, ...]:
    """A[m] ≅ (ℤ/m)^k ⊕ ⊕ᵢ ℤ/gcd(m, dᵢ)"""
    return (m,) * model.torsion_rank + tuple(gcd(m, d) for d in model.torsion_factors)


def torsion_count(model: SurfaceModel, m: int) -> int:
    """|A[m]| = m^k · Πᵢ gcd(m, dᵢ)"""
    if m < 1:
        raise DomainError("torsion_count", m)
    count = 1
    for order in _cyclic_orders(model, m):
        count *= order
    return count


@lru_cache(maxsize=None)
def torsion_points(model: SurfaceModel, m: int) -> Tuple[TorsionElement, ...]:
    """A[m] 的全部元素，零元在首位"""
    if m < 1:
        raise DomainError("torsion_points", m)
    orders = _cyclic_orders(model, m)
    logger.debug("A[%d] for %s: cyclic orders %s", m, model.case.value, list(orders))
    return tuple(
        TorsionElement(tuple(Fraction(j, order) for j, order in zip(residues, orders)))
        for residues in product(*(range(order) for order in orders))
    )
