"""
定理检查服务 - 乘性、强分裂、对偶、对角估计、环公理与 Frobenius 公理

所有检查返回 CheckReport，失败作为报告内容而不是异常。
基对的扫描可以分块交给多个进程，各块的统计结果按固定顺序合并，与并行度无关。
"""
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.decomp import diagonal_estimate, graph_pushforward
from app.frobenius import FrobeniusAlgebra, surface_algebra, validate
from app.orbifold import (
    BasisClass,
    class_perversity,
    component_perversities,
    hilbert_product,
    invariant_basis,
    orbifold_product,
)
from app.schemas import CheckReport, Violation
from app.surfaces import (
    SurfaceClass,
    SurfaceModel,
    basis_classes,
    is_m_torsion,
    pairing,
    poincare_dual,
    pushforward_summation,
    summation_pullback,
    surface_model,
    torsion_count,
    torsion_points,
    with_perversities,
)
from utils.exceptions import FeasibilityError, UnsupportedModelError

logger = logging.getLogger(__name__)

MULTIPLICATIVITY = "multiplicativity"
STRONG_SPLITTING = "strong-splitting"

# 每个 worker 期望分到的块数
_CHUNKS_PER_JOB = 4


# ==================== 可合并统计 ====================

@dataclass
class SweepTally:
    """一次扫描（或其中一块）的统计；violations 保留排序键最小的若干条"""

    pairs_checked: int = 0
    violation_count: int = 0
    violations: List[Tuple[tuple, Violation]] = field(default_factory=list)
    limit: int = 50

    def record(self, key: tuple, violation: Violation) -> None:
        self.violation_count += 1
        self.violations.append((key, violation))
        if len(self.violations) > 2 * self.limit:
            self._truncate()

    def _truncate(self) -> None:
        self.violations = sorted(self.violations, key=lambda item: item[0])[: self.limit]

    def merge(self, other: "SweepTally") -> "SweepTally":
        merged = SweepTally(
            pairs_checked=self.pairs_checked + other.pairs_checked,
            violation_count=self.violation_count + other.violation_count,
            violations=self.violations + other.violations,
            limit=self.limit,
        )
        merged._truncate()
        return merged

    def witnesses(self) -> List[Violation]:
        self._truncate()
        return [v for _, v in self.violations]


# ==================== 可行性 ====================

def ensure_feasible(what: str, n: int, mode: str = "exhaustive") -> None:
    """
    按配置上限拒绝过大的 n

    Raises:
        FeasibilityError: n 超过对应上限
    """
    bound = settings.sampled_bound() if mode == "sampled" else settings.exhaustive_bound()
    if n > bound:
        raise FeasibilityError(what, n, bound)


def _require_compact(model: SurfaceModel, operation: str) -> None:
    if not model.compact:
        raise UnsupportedModelError(model.case.value, operation)


def _elapsed_ms(start: float) -> int:
    return int((time.perf_counter() - start) * 1000)


# ==================== 乘性与强分裂扫描 ====================

@dataclass(frozen=True)
class _SweepTask:
    """worker 任务：按模型参数重建代数与不变基，只传可 pickle 的数据"""

    case: str
    torsion_rank: int
    torsion_factors: Tuple[int, ...]
    perversities: Tuple[int, ...]
    n: int
    kind: str
    pairs: Tuple[Tuple[int, int], ...] = ()
    rows: Tuple[int, ...] = ()
    limit: int = 50


def _task_model(task: _SweepTask) -> SurfaceModel:
    model = surface_model(task.case, task.torsion_rank, task.torsion_factors)
    return with_perversities(model, task.perversities)


def _task_pairs(task: _SweepTask, size: int):
    yield from task.pairs
    for i in task.rows:
        for j in range(i, size):
            yield i, j


def _violates(kind: str, perversities: set, bound: int) -> bool:
    top = max(perversities)
    if kind == MULTIPLICATIVITY:
        return top > bound
    return len(perversities) > 1 or top != bound


def _record_torsion_witnesses(
    tally: SweepTally,
    model: SurfaceModel,
    key: tuple,
    alpha: BasisClass,
    beta: BasisClass,
    lam,
    p_gamma: int,
) -> None:
    """违例与挠标签无关，逐个列出满足 σ+τ ∈ A[gcd λ] 的标签对"""
    for s, sigma in enumerate(torsion_points(model, alpha.nu.gcd)):
        for t, tau in enumerate(torsion_points(model, beta.nu.gcd)):
            label = sigma + tau
            if not is_m_torsion(label, lam.gcd):
                continue
            tally.record(
                key + (s, t),
                Violation(
                    alpha=f"{alpha.describe()}@{sigma}",
                    beta=f"{beta.describe()}@{tau}",
                    lambda_=str(lam),
                    sigma_tau=str(label),
                    p_alpha=alpha.perversity,
                    p_beta=beta.perversity,
                    p_gamma=p_gamma,
                ),
            )


def _sweep_chunk(task: _SweepTask) -> SweepTally:
    model = _task_model(task)
    algebra = surface_algebra(model)
    basis = invariant_basis(algebra, task.n)
    top_degree = algebra.top_degree * task.n
    tally = SweepTally(limit=task.limit)
    for i, j in _task_pairs(task, len(basis)):
        alpha, beta = basis[i], basis[j]
        tally.pairs_checked += torsion_count(model, alpha.nu.gcd) * torsion_count(model, beta.nu.gcd)
        if alpha.degree + beta.degree > top_degree:
            continue
        bound = alpha.perversity + beta.perversity
        components = hilbert_product(alpha.invariant, beta.invariant, algebra)
        for order, (lam, gamma) in enumerate(components.items()):
            perversities = component_perversities(algebra, lam, gamma)
            if _violates(task.kind, perversities, bound):
                _record_torsion_witnesses(tally, model, (i, j, order), alpha, beta, lam, max(perversities))
    return tally


def _chunk(items: Sequence, count: int) -> List[tuple]:
    """轮转切分，使每块的工作量接近"""
    count = max(1, min(count, len(items)))
    return [tuple(items[k::count]) for k in range(count)]


def _run_tasks(tasks: List[_SweepTask], jobs: int) -> SweepTally:
    if jobs <= 1 or len(tasks) <= 1:
        results = [_sweep_chunk(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_sweep_chunk, tasks))
    tally = SweepTally(limit=settings.MAX_WITNESSES)
    for result in results:
        tally = tally.merge(result)
    return tally


def _sampled_pairs(size: int, samples: int, seed: int) -> List[Tuple[int, int]]:
    rng = random.Random(seed)
    pairs = []
    for _ in range(samples):
        i, j = rng.randrange(size), rng.randrange(size)
        pairs.append((min(i, j), max(i, j)))
    return pairs


def _pair_sweep(
    kind: str,
    model: SurfaceModel,
    n: int,
    mode: str,
    samples: Optional[int],
    seed: Optional[int],
    jobs: Optional[int],
) -> CheckReport:
    _require_compact(model, kind)
    ensure_feasible(f"check {kind}", n, mode)
    start = time.perf_counter()
    jobs = settings.resolve_jobs(jobs)
    seed = settings.DEFAULT_SEED if seed is None else seed
    basis = invariant_basis(surface_algebra(model), n)
    base = dict(
        case=model.case.value,
        torsion_rank=model.torsion_rank,
        torsion_factors=model.torsion_factors,
        perversities=tuple(g.perversity for g in model.generators),
        n=n,
        kind=kind,
        limit=settings.MAX_WITNESSES,
    )
    if mode == "sampled":
        pairs = _sampled_pairs(len(basis), samples or settings.DEFAULT_SAMPLES, seed)
        tasks = [_SweepTask(pairs=chunk, **base) for chunk in _chunk(pairs, jobs * _CHUNKS_PER_JOB)]
    else:
        rows = list(range(len(basis)))
        tasks = [_SweepTask(rows=chunk, **base) for chunk in _chunk(rows, jobs * _CHUNKS_PER_JOB)]
    logger.info("check %s n=%d mode=%s: %d basis classes, %d chunks, jobs=%d", kind, n, mode, len(basis), len(tasks), jobs)
    tally = _run_tasks(tasks, jobs)
    logger.info("check %s n=%d: %d pairs, %d violations", kind, n, tally.pairs_checked, tally.violation_count)
    return CheckReport(
        check=kind,
        model=model.case.value,
        n=n,
        mode=mode,
        pairs_checked=tally.pairs_checked,
        violation_count=tally.violation_count,
        violations=tally.witnesses(),
        seed=seed if mode == "sampled" else None,
        elapsed_ms=_elapsed_ms(start),
        details={"basis_size": len(basis)},
    )


def check_multiplicativity(
    model: SurfaceModel,
    n: int,
    mode: str = "exhaustive",
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
) -> CheckReport:
    """
    对带挠标签的基类对断言 p(γ_{λ,στ}) ≤ p(α) + p(β)

    Args:
        model: 紧曲面模型
        n: 点数
        mode: exhaustive 遍历全部无序对；sampled 按 seed 抽取 samples 对
        samples: 抽样对数
        seed: 抽样种子
        jobs: 并行进程数，0 表示物理核数
    """
    return _pair_sweep(MULTIPLICATIVITY, model, n, mode, samples, seed, jobs)


def check_strong_splitting(
    model: SurfaceModel,
    n: int,
    mode: str = "exhaustive",
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
) -> CheckReport:
    """纯基类乘积的每个非零分量都是纯的，且 perversity 恰为 p(α) + p(β)"""
    return _pair_sweep(STRONG_SPLITTING, model, n, mode, samples, seed, jobs)


# ==================== 对偶 ====================

def _describe(x: SurfaceClass) -> str:
    (key, _), = x.terms.items()
    return "(x)".join(x.model.name(m) for m in key)


def check_duality(n: int, model: Optional[SurfaceModel] = None) -> CheckReport:
    """
    Aⁿ 上 r(fⁿ) = n：对全部单项式验证 p(x) + p(x^∨) = 2n 与 ⟨x, x^∨⟩ = 1，
    并在配对非零的单项式对上验证 p(α) + p(β) < 2n ⇒ ⟨α, β⟩ = 0
    """
    model = model or surface_model("abelian")
    _require_compact(model, "check duality")
    ensure_feasible("check duality", n)
    start = time.perf_counter()
    tally = SweepTally(limit=settings.MAX_WITNESSES)
    target = 2 * n * model.defect
    monomials = list(basis_classes(model, n))
    for index, x in enumerate(monomials):
        dual = poincare_dual(x)
        tally.pairs_checked += 1
        p_x, p_dual = x.perversity(), dual.perversity()
        if p_x + p_dual != target or pairing(x, dual) != 1:
            tally.record(
                (0, index),
                Violation(alpha=_describe(x), beta=_describe(dual), lambda_="dual", sigma_tau="-",
                          p_alpha=p_x, p_beta=p_dual, p_gamma=p_x + p_dual),
            )
    # 单项式 x 只与逐因子互补的单项式配对非零，其余配对恒为零
    for index, x in enumerate(monomials):
        (key, _), = x.terms.items()
        partner = SurfaceClass.basis(model, tuple(model.top ^ m for m in key))
        tally.pairs_checked += 1
        p_x, p_y = x.perversity(), partner.perversity()
        if p_x + p_y < target and pairing(x, partner) != 0:
            tally.record(
                (1, index),
                Violation(alpha=_describe(x), beta=_describe(partner), lambda_="pairing", sigma_tau="-",
                          p_alpha=p_x, p_beta=p_y, p_gamma=p_x + p_y),
            )
    return CheckReport(
        check="duality",
        model=model.case.value,
        n=n,
        mode="exhaustive",
        pairs_checked=tally.pairs_checked,
        violation_count=tally.violation_count,
        violations=tally.witnesses(),
        elapsed_ms=_elapsed_ms(start),
        details={"monomials": len(monomials), "vanishing_checked": True},
    )


# ==================== 对角、反对角与推拉 ====================

MAX_GRAPH_FACTORS = 3
MAX_PUSH_PULL_N = 2


def check_diagonal(model: SurfaceModel, n: int) -> CheckReport:
    """
    - 对角：k ≤ n 时 p(Δ^{(k)}(b)) ≤ p(b) + 2(k−1)
    - 反对角：2 ≤ a ≤ min(n+1, 3) 时 p(Γ_*(γ)) ≤ p(γ) + 2，纯类恰好 +2
    - 推拉：p(m*b) = p(b)；k ≤ min(n, 2) 时 p(h_*α) ≤ p(α) − 2(k−1)
    """
    _require_compact(model, "check diagonal")
    ensure_feasible("check diagonal", n)
    start = time.perf_counter()
    algebra = surface_algebra(model)
    tally = SweepTally(limit=settings.MAX_WITNESSES)
    counts: Dict[str, int] = {"diagonal": 0, "anti_diagonal": 0, "exact_shift": 0, "push_pull": 0}

    def record(kind: str, key: tuple, source: str, p_source: int, p_image: int, bound: int) -> None:
        counts[kind] += 1
        tally.record(
            (kind,) + key,
            Violation(alpha=source, beta="-", lambda_=kind, sigma_tau="-",
                      p_alpha=p_source, p_beta=bound, p_gamma=p_image),
        )

    for k in range(1, n + 1):
        for b in algebra.basis():
            estimate = diagonal_estimate(algebra, b, k)
            tally.pairs_checked += 1
            if not estimate.within_bound:
                record("diagonal", (k, b), f"Delta^({k})({algebra.labels[b]})",
                       estimate.p_source, estimate.p_image, estimate.bound)

    for a in range(2, min(n + 1, MAX_GRAPH_FACTORS) + 1):
        for index, gamma in enumerate(basis_classes(model, a - 1)):
            estimate = graph_pushforward(gamma)
            tally.pairs_checked += 1
            if not estimate.within_bound:
                record("anti_diagonal", (a, index), f"Gamma_*({_describe(gamma)})",
                       estimate.p_source, estimate.p_image, estimate.p_source + 2)
            elif not estimate.exact_shift:
                record("exact_shift", (a, index), f"Gamma_*({_describe(gamma)})",
                       estimate.p_source, estimate.p_image, estimate.p_source + 2)

    for b in basis_classes(model, 1):
        for k in range(1, n + 1):
            image = summation_pullback(b, k)
            tally.pairs_checked += 1
            if image.perversity() != b.perversity():
                record("push_pull", ("m*", k, _describe(b)), f"m*({_describe(b)})",
                       b.perversity(), image.perversity(), b.perversity())
    for k in range(1, min(n, MAX_PUSH_PULL_N) + 1):
        for index, alpha in enumerate(basis_classes(model, k)):
            image = pushforward_summation(alpha)
            tally.pairs_checked += 1
            bound = alpha.perversity() - 2 * (k - 1) * model.defect
            if not image.is_zero() and image.perversity() > bound:
                record("push_pull", ("h_*", k, index), f"h_*({_describe(alpha)})",
                       alpha.perversity(), image.perversity(), bound)

    return CheckReport(
        check="diagonal",
        model=model.case.value,
        n=n,
        mode="exhaustive",
        pairs_checked=tally.pairs_checked,
        violation_count=tally.violation_count,
        violations=tally.witnesses(),
        elapsed_ms=_elapsed_ms(start),
        details={"failures": counts},
    )


# ==================== 环公理 ====================

def _signed(x, sign: int):
    return x if sign > 0 else -x


def check_ring_axioms(
    model: SurfaceModel,
    n: int,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> CheckReport:
    """随机三元组上验证不变类乘积的结合律与分次交换律"""
    _require_compact(model, "check ring-axioms")
    ensure_feasible("check ring-axioms", n)
    start = time.perf_counter()
    seed = settings.DEFAULT_SEED if seed is None else seed
    samples = samples or settings.DEFAULT_RING_SAMPLES
    algebra = surface_algebra(model)
    basis = invariant_basis(algebra, n)
    rng = random.Random(seed)
    tally = SweepTally(limit=settings.MAX_WITNESSES)
    for sample in range(samples):
        a, b, c = (basis[rng.randrange(len(basis))] for _ in range(3))
        tally.pairs_checked += 1
        ab = orbifold_product(a.invariant, b.invariant, algebra)
        ba = orbifold_product(b.invariant, a.invariant, algebra)
        sign = -1 if a.degree * b.degree % 2 else 1
        if ab != _signed(ba, sign):
            tally.record(
                (sample, 0),
                Violation(alpha=a.describe(), beta=b.describe(), lambda_="commutativity", sigma_tau="-",
                          p_alpha=a.perversity, p_beta=b.perversity, p_gamma=class_perversity(ab, algebra)),
            )
        left = orbifold_product(ab, c.invariant, algebra)
        right = orbifold_product(a.invariant, orbifold_product(b.invariant, c.invariant, algebra), algebra)
        if left != right:
            tally.record(
                (sample, 1),
                Violation(alpha=a.describe(), beta=f"{b.describe()}*{c.describe()}", lambda_="associativity",
                          sigma_tau="-", p_alpha=a.perversity, p_beta=b.perversity + c.perversity,
                          p_gamma=class_perversity(left, algebra)),
            )
    return CheckReport(
        check="ring-axioms",
        model=model.case.value,
        n=n,
        mode="sampled",
        pairs_checked=tally.pairs_checked,
        violation_count=tally.violation_count,
        violations=tally.witnesses(),
        seed=seed,
        elapsed_ms=_elapsed_ms(start),
        details={"basis_size": len(basis)},
    )


# ==================== Frobenius 公理 ====================

def check_frobenius(model: SurfaceModel, algebra: Optional[FrobeniusAlgebra] = None) -> CheckReport:
    """把 validate 的逐条公理结果包装成检查报告"""
    start = time.perf_counter()
    if algebra is None:
        _require_compact(model, "check frobenius")
        algebra = surface_algebra(model)
    report = validate(algebra)
    failed = report.failed()
    return CheckReport(
        check="frobenius",
        model=model.case.value,
        n=1,
        mode="exhaustive",
        pairs_checked=len(report.checks),
        violation_count=len(failed),
        passed=report.passed,
        elapsed_ms=_elapsed_ms(start),
        details={"algebra": report.algebra, "dimension": report.dimension,
                 "axioms": [c.model_dump() for c in report.checks]},
    )
