"""
级数服务 - 组装 series / partitions 子命令的表格
"""
import logging
from typing import Tuple

from app.bigraded import PerversePolynomial, lefschetz_mismatches
from app.core.config import settings
from app.decomp import hilbert_pp, kernel_dimension, kummer_pp, kummer_quotient_pp
from app.partitions import conjugacy_class_size, enumerate_partitions
from app.schemas import PartitionRow, PartitionTable, SeriesTable, Term
from app.surfaces import SurfaceModel, cohomology_pp, torsion_count
from utils.exceptions import FeasibilityError

logger = logging.getLogger(__name__)


def ensure_series_feasible(what: str, n: int) -> None:
    bound = settings.series_bound()
    if n > bound:
        raise FeasibilityError(what, n, bound)


def lefschetz_radius(kind: str, n: int) -> int:
    """
    相对 hard Lefschetz 对称的中心 r

    hilbert 与 kummer（A^[[n]]×A）为 n，kummer-quotient 为 n − 1，surface 为 1。
    """
    return {
        "hilbert": n,
        "kummer": n,
        "kummer-quotient": n - 1,
        "surface": 1,
    }[kind]


def compute_series(kind: str, model: SurfaceModel, n: int) -> PerversePolynomial:
    ensure_series_feasible(f"series {kind}", n)
    if kind == "hilbert":
        return hilbert_pp(model, n)
    if kind == "kummer":
        return kummer_pp(model, n)
    if kind == "kummer-quotient":
        return kummer_quotient_pp(model, n)
    return cohomology_pp(model)


def series_table(kind: str, model: SurfaceModel, n: int) -> Tuple[PerversePolynomial, SeriesTable]:
    poly = compute_series(kind, model, n)
    mismatches = lefschetz_mismatches(poly, lefschetz_radius(kind, n))
    logger.debug("series %s %s n=%d: %d terms", kind, model.case.value, n, len(poly.terms))
    table = SeriesTable(
        kind=kind,
        model=model.case.value,
        n=n,
        terms=[Term(d=d, p=p, c=c) for (d, p), c in sorted(poly.terms.items())],
        betti=poly.betti_numbers(),
        total_dimension=poly.total_dimension(),
        lefschetz_symmetric=not mismatches,
        lefschetz_mismatches=[[d, p] for d, p in mismatches],
    )
    return poly, table


def partition_table(model: SurfaceModel, n: int) -> PartitionTable:
    """每个 ν ⊢ n 的长度、gcd、共轭类大小、挠标签个数与 A^ν_0 的上同调维数"""
    ensure_series_feasible("partitions", n)
    rows = [
        PartitionRow(
            partition=str(nu),
            length=nu.length,
            gcd=nu.gcd,
            class_size=conjugacy_class_size(nu),
            torsion_count=torsion_count(model, nu.gcd),
            kernel_dimension=kernel_dimension(model, nu),
        )
        for nu in enumerate_partitions(n)
    ]
    return PartitionTable(model=model.case.value, n=n, count=len(rows), rows=rows)
