"""
双分次维数级数（perverse Poincaré polynomial）

PerversePolynomial 是 ℤ[q, t] 中系数非负的多项式：q 记上同调次数 d，t 记 perversity p。
底层载体为 sympy 的 Poly（整数环上精确运算）。
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Dict, Iterable, List, Mapping, Tuple

from sympy import ZZ, Poly, symbols
from sympy.polys.polyerrors import ExactQuotientFailed

from app.partitions import Partition
from utils.exceptions import DivisibilityError, DomainError

logger = logging.getLogger(__name__)

q, t = symbols("q t")

Bidegree = Tuple[int, int]


def _poly(terms: Mapping[Bidegree, int]) -> Poly:
    nonzero = {key: value for key, value in terms.items() if value}
    if not nonzero:
        return Poly(0, q, t, domain=ZZ)
    return Poly.from_dict(nonzero, q, t, domain=ZZ)


@dataclass(frozen=True)
class PerversePolynomial:
    """Σ dim Gr^P_p H^d · q^d t^p"""

    poly: Poly

    @classmethod
    def from_terms(cls, terms: Mapping[Bidegree, int]) -> "PerversePolynomial":
        for (d, p), c in terms.items():
            if d < 0 or p < 0 or c < 0:
                raise DomainError("PerversePolynomial term", ((d, p), c))
        return cls(_poly(terms))

    @classmethod
    def unit(cls) -> "PerversePolynomial":
        return cls(_poly({(0, 0): 1}))

    @classmethod
    def zero(cls) -> "PerversePolynomial":
        return cls(_poly({}))

    @classmethod
    def monomial(cls, d: int, p: int, c: int = 1) -> "PerversePolynomial":
        return cls.from_terms({(d, p): c})

    @cached_property
    def terms(self) -> Dict[Bidegree, int]:
        return {tuple(k): int(v) for k, v in self.poly.as_dict().items() if v}

    def coefficient(self, d: int, p: int) -> int:
        return self.terms.get((d, p), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PerversePolynomial") -> "PerversePolynomial":
        return PerversePolynomial(self.poly + other.poly)

    def __mul__(self, other: "PerversePolynomial") -> "PerversePolynomial":
        return multiply(self, other)

    def scale(self, factor: int) -> "PerversePolynomial":
        if factor < 0:
            raise DomainError("scale factor", factor)
        return PerversePolynomial(self.poly * factor)

    # ==================== 特化与统计 ====================

    def betti_numbers(self) -> List[int]:
        """t = 1 特化后的 Betti 数列，下标为次数 d"""
        if self.is_zero():
            return [0]
        top = max(d for d, _ in self.terms)
        betti = [0] * (top + 1)
        for (d, _), c in self.terms.items():
            betti[d] += c
        return betti

    def total_dimension(self) -> int:
        return sum(self.terms.values())

    def max_degree(self) -> int:
        return max((d for d, _ in self.terms), default=0)

    def max_perversity(self) -> int:
        return max((p for _, p in self.terms), default=0)

    # ==================== 序列化 ====================

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join(f"{c} * q^{d} * t^{p}" for (d, p), c in sorted(self.terms.items()))

    def to_json(self) -> dict:
        return {"terms": [{"d": d, "p": p, "c": c} for (d, p), c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, payload: Mapping) -> "PerversePolynomial":
        return cls.from_terms({(int(x["d"]), int(x["p"])): int(x["c"]) for x in payload["terms"]})

    def __str__(self) -> str:
        return self.to_text()


# ==================== 运算 ====================

def multiply(a: PerversePolynomial, b: PerversePolynomial) -> PerversePolynomial:
    """两种分次上的卷积（Künneth）"""
    return PerversePolynomial(a.poly * b.poly)


def shift(a: PerversePolynomial, delta_d: int, delta_p: int) -> PerversePolynomial:
    """整体平移 q^{Δd} t^{Δp}，Δd 须为非负偶数"""
    if delta_d < 0 or delta_d % 2 or delta_p < 0:
        raise DomainError("shift", (delta_d, delta_p))
    return PerversePolynomial(a.poly * _poly({(delta_d, delta_p): 1}))


def _truncated_product(left: List[Poly], right: List[Poly], n: int) -> List[Poly]:
    out = [_poly({}) for _ in range(n + 1)]
    for i, x in enumerate(left):
        if x.is_zero:
            continue
        for j in range(n + 1 - i):
            if not right[j].is_zero:
                out[i + j] += x * right[j]
    return out


def symmetric_power_series(a: PerversePolynomial, n: int) -> List[PerversePolynomial]:
    """
    ∏_{d 偶}(1 − q^d t^p x)^{−c} · ∏_{d 奇}(1 + q^d t^p x)^{c} 截断到 xⁿ 的全部系数

    奇偶性只看上同调次数 d。
    """
    if n < 0:
        raise DomainError("symmetric power", n)
    series = [_poly({(0, 0): 1})] + [_poly({}) for _ in range(n)]
    for (d, p), c in sorted(a.terms.items()):
        if d % 2 == 0:
            factor = [_poly({(k * d, k * p): comb(c + k - 1, k)}) for k in range(n + 1)]
        else:
            factor = [_poly({(k * d, k * p): comb(c, k)}) for k in range(n + 1)]
        series = _truncated_product(series, factor, n)
    logger.debug("symmetric_power_series up to x^%d over %d bigraded terms", n, len(a.terms))
    return [PerversePolynomial(x) for x in series]


def super_symmetric_power(a: PerversePolynomial, n: int) -> PerversePolynomial:
    """H*(X^(n)) = Symⁿ H*(X)，带 Koszul 符号规则"""
    return symmetric_power_series(a, n)[n]


def sym_partition(a: PerversePolynomial, nu: Partition) -> PerversePolynomial:
    """X^(ν) = X^(a₁)×…×X^(aₙ) 的级数"""
    result = PerversePolynomial.unit()
    for count in nu.multiplicities:
        if count:
            result = result * super_symmetric_power(a, count)
    return result


def exact_divide(a: PerversePolynomial, b: PerversePolynomial) -> PerversePolynomial:
    """
    返回 c 使 c·b = a 精确成立且系数为非负整数

    Raises:
        DivisibilityError: b 常数项为零、存在余项或商出现负系数
    """
    if b.coefficient(0, 0) == 0:
        raise DivisibilityError("divisor has no invertible constant term")
    try:
        quotient = a.poly.exquo(b.poly)
    except ExactQuotientFailed:
        logger.debug("exact_divide: %s leaves a remainder", b)
        raise DivisibilityError(f"{b} does not divide {a}")
    result = PerversePolynomial(quotient)
    negative = {key: c for key, c in result.terms.items() if c < 0}
    if negative:
        raise DivisibilityError(f"negative coefficients {sorted(negative.items())}")
    return result


def lefschetz_mismatches(a: PerversePolynomial, r: int) -> List[Bidegree]:
    """
    相对 hard Lefschetz 对称 (d, p) ↔ (d + 2(r − p), 2r − p) 失效的位置

    仅作信息性报告。
    """
    bad = []
    for (d, p), c in sorted(a.terms.items()):
        target_p = 2 * r - p
        target_d = d + 2 * (r - p)
        if target_p < 0 or target_d < 0 or a.coefficient(target_d, target_p) != c:
            bad.append((d, p))
    return bad


def total(polys: Iterable[PerversePolynomial]) -> PerversePolynomial:
    result = PerversePolynomial.zero()
    for x in polys:
        result = result + x
    return result
