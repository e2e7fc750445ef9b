"""
分解定理构造

A^[n] 与 A^[[n]]×A 的 perverse 级数、带挠标签的 Kummer 类及其乘积、
经求和映射图像的推前与对角类估计。
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from app.bigraded import PerversePolynomial, exact_divide, shift, sym_partition, total
from app.frobenius import FrobeniusAlgebra, surface_algebra
from app.orbifold import (
    InvariantClass,
    Labels,
    Tensor,
    hilbert_product,
    labels_perversity,
    nu_class,
)
from app.partitions import Partition, enumerate_partitions
from app.surfaces import (
    SurfaceClass,
    SurfaceModel,
    TorsionElement,
    basis_classes,
    cohomology_pp,
    in_torsion_group,
    is_m_torsion,
    poincare_dual,
    pushforward_summation,
    torsion_count,
    torsion_points,
)
from utils.exceptions import DomainError, GroupMismatchError, ShapeError, TorsionLabelError

logger = logging.getLogger(__name__)


# ==================== 级数 ====================

def nu_summand(model: SurfaceModel, nu: Partition) -> PerversePolynomial:
    """H*(A^(ν))[2l(ν)−2n]，perversity 平移 n − l(ν)"""
    codim = nu.n - nu.length
    return shift(sym_partition(cohomology_pp(model), nu), 2 * codim, codim)


def hilbert_pp(model: SurfaceModel, n: int) -> PerversePolynomial:
    """H*(A^[n]) 的 perverse 级数：Σ_ν shift(Sym^ν, 2(n−l), n−l)"""
    if n < 1:
        raise DomainError("hilbert_pp", n)
    result = total(nu_summand(model, nu) for nu in enumerate_partitions(n))
    logger.debug("hilbert_pp %s n=%d: total dimension %d", model.case.value, n, result.total_dimension())
    return result


def kummer_pp(model: SurfaceModel, n: int) -> PerversePolynomial:
    """H*(A^[[n]]×A) 的 perverse 级数：每个 ν 乘以 |A[gcd ν]|"""
    if n < 1:
        raise DomainError("kummer_pp", n)
    result = total(
        nu_summand(model, nu).scale(torsion_count(model, nu.gcd)) for nu in enumerate_partitions(n)
    )
    logger.debug(
        "kummer_pp %s n=%d torsion_factors=%s: total dimension %d",
        model.case.value, n, list(model.torsion_factors), result.total_dimension(),
    )
    return result


def kummer_quotient_pp(model: SurfaceModel, n: int) -> PerversePolynomial:
    """
    H*(A^[[n]]) 的级数，由 kummer_pp 精确除以 H*(A) 得到

    Raises:
        DivisibilityError: 不能整除（分裂形式下不会发生；非分裂的不变因子配置可能破坏整除性）
    """
    return exact_divide(kummer_pp(model, n), cohomology_pp(model))


def kernel_dimension(model: SurfaceModel, nu: Partition, with_base: bool = False) -> int:
    """
    dim H*(A^ν_0) = |A[gcd ν]|·(dim H*(A))^{l(ν)−1}

    with_base=True 时给出 A^ν_0 × A 的维数 |A[gcd ν]|·(dim H*(A))^{l(ν)}。
    """
    power = nu.length if with_base else nu.length - 1
    return torsion_count(model, nu.gcd) * model.dimension ** power


# ==================== Kummer 类 ====================

@dataclass
class KummerClass:
    """
    α_{ν,σ}：ν ⊢ n、σ ∈ A[gcd ν]、H*(A^(ν)) 中的标签

    Raises:
        TorsionLabelError: σ ∉ A[gcd ν]（含有限部分分母不整除不变因子的情形）
        GroupMismatchError: σ 的分量个数与模型挠子群不符
        ShapeError: 标签因子个数不等于 l(ν)
    """

    model: SurfaceModel
    nu: Partition
    sigma: TorsionElement
    payload: Tensor

    def __post_init__(self):
        if self.sigma.rank != self.model.torsion_components:
            raise GroupMismatchError(self.model.torsion_components, self.sigma.rank)
        if not in_torsion_group(self.model, self.sigma) or not is_m_torsion(self.sigma, self.nu.gcd):
            raise TorsionLabelError(self.sigma, self.nu.gcd)
        for key in self.payload:
            if len(key) != self.nu.length:
                raise ShapeError(self.nu.length, len(key), "payload")
        self.payload = {k: Fraction(v) for k, v in self.payload.items() if v}

    @classmethod
    def basis(cls, model: SurfaceModel, nu: Partition, sigma: TorsionElement, labels: Labels) -> "KummerClass":
        return cls(model, nu, sigma, {tuple(labels): Fraction(1)})

    @property
    def n(self) -> int:
        return self.nu.n

    def invariant(self, algebra: FrobeniusAlgebra) -> InvariantClass:
        return nu_class(self.nu, self.payload, algebra)


def perversity(alpha: KummerClass) -> int:
    """p(α_{ν,σ}) = p(payload) + n − l(ν)，与 σ 无关"""
    payload = max(
        (sum(alpha.model.perversity(m) for m in key) for key in alpha.payload),
        default=0,
    )
    return payload + alpha.n - alpha.nu.length


def admissible_labels(model: SurfaceModel, nu: Partition) -> Tuple[TorsionElement, ...]:
    return torsion_points(model, nu.gcd)


def kummer_product(
    alpha: KummerClass, beta: KummerClass, algebra: Optional[FrobeniusAlgebra] = None
) -> Dict[Tuple[Partition, TorsionElement], Tensor]:
    """
    α_{ν,σ}·β_{μ,τ} = Σ_λ γ_{λ,σ+τ}，σ+τ ∉ A[gcd λ] 的分量为零

    Raises:
        GroupMismatchError: 两个挠标签属于不同秩的群
    """
    if alpha.sigma.rank != beta.sigma.rank:
        raise GroupMismatchError(alpha.sigma.rank, beta.sigma.rank)
    if alpha.model.generators != beta.model.generators:
        raise DomainError("kummer_product across surface models", beta.model.case.value)
    if alpha.model.torsion_factors != beta.model.torsion_factors:
        raise DomainError("kummer_product across torsion groups", list(beta.model.torsion_factors))
    algebra = algebra or surface_algebra(alpha.model)
    label = alpha.sigma + beta.sigma
    components = hilbert_product(alpha.invariant(algebra), beta.invariant(algebra), algebra)
    return {
        (lam, label): gamma
        for lam, gamma in components.items()
        if is_m_torsion(label, lam.gcd)
    }


# ==================== 图推前与对角估计 ====================

@dataclass
class PushforwardEstimate:
    """Γ_*(γ) 及其 perversity 估计"""

    source: SurfaceClass
    image: SurfaceClass
    p_source: int
    p_image: int

    @property
    def within_bound(self) -> bool:
        return self.image.is_zero() or self.p_image <= self.p_source + 2

    @property
    def exact_shift(self) -> bool:
        """纯类的非零像恰好升高 2"""
        if self.image.is_zero() or not self.source.is_pure():
            return True
        return self.image.is_pure() and self.p_image == self.p_source + 2


def graph_pushforward(gamma: SurfaceClass) -> PushforwardEstimate:
    """
    Γ_*(γ) = Σᵢ (γ·αᵢ) ⊗ h_*(αⁱ)，h = −m : A^{a−1} → A

    {αᵢ} 取 A^{a−1} 的单项式基，αⁱ 为其 Poincaré 对偶。
    """
    model = gamma.model
    image = SurfaceClass(model, gamma.factors + 1, {})
    for alpha in basis_classes(model, gamma.factors):
        left = gamma * alpha
        if left.is_zero():
            continue
        right = pushforward_summation(poincare_dual(alpha))
        if right.is_zero():
            continue
        image = image + left.tensor(right)
    return PushforwardEstimate(
        source=gamma,
        image=image,
        p_source=gamma.perversity(),
        p_image=image.perversity(),
    )


@dataclass
class DiagonalEstimate:
    """对角类 Δ^{(n)}(b) 编码到 ν = (1ⁿ) 上的 perversity 估计"""

    basis_index: int
    n: int
    p_source: int
    p_image: int
    invariant: InvariantClass

    @property
    def bound(self) -> int:
        return self.p_source + 2 * (self.n - 1)

    @property
    def within_bound(self) -> bool:
        return self.invariant.is_zero() or self.p_image <= self.bound


def diagonal_estimate(algebra: FrobeniusAlgebra, index: int, n: int) -> DiagonalEstimate:
    """p(Δ^{(n)}(b)) ≤ p(b) + 2(n−1)·r(f)"""
    label = algebra.comultiply_basis(index, n)
    invariant = nu_class(Partition((1,) * n), label, algebra)
    p_image = max((labels_perversity(algebra, k) for k in label), default=-1)
    return DiagonalEstimate(index, n, algebra.perversity(index), p_image, invariant)
