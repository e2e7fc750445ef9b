#!/usr/bin/env python3
"""
验收自检脚本：逐条运行可在交互时间内完成的验收项并打印结果
"""
import sys
import os
import time
import logging
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.core.config import settings
from app.decomp import KummerClass, hilbert_pp, kummer_pp, kummer_product, kummer_quotient_pp
from app.frobenius import abelian_surface_algebra
from app.orbifold import basis_counts, invariant_basis
from app.partitions import Partition
from app.services import check_service
from app.surfaces import SurfaceCase, cohomology_pp, surface_model, torsion_points
from utils.exceptions import KummerPerverseError


ABELIAN = surface_model(SurfaceCase.ABELIAN_OVER_ELLIPTIC)


def criterion_surface_table():
    poly = cohomology_pp(ABELIAN)
    expected = {(0, 0): 1, (1, 0): 2, (1, 1): 2, (2, 0): 1, (2, 1): 4, (2, 2): 1, (3, 1): 2, (3, 2): 2, (4, 2): 1}
    return poly.terms == expected, f"{poly}"


def criterion_goettsche():
    algebra = abelian_surface_algebra()
    for n in range(1, 5):
        counts = basis_counts(invariant_basis(algebra, n))
        if counts != hilbert_pp(ABELIAN, n).terms:
            return False, f"mismatch at n={n}"
    return True, "n = 1..4"


def criterion_kummer_k3():
    betti = kummer_quotient_pp(ABELIAN, 2).betti_numbers()
    return betti == [1, 0, 22, 0, 1], " ".join(str(b) for b in betti)


def criterion_product_series():
    betti = kummer_pp(ABELIAN, 2).betti_numbers()
    total = kummer_pp(ABELIAN, 3).total_dimension()
    return betti == [1, 4, 28, 92, 134, 92, 28, 4, 1] and total == 2240, f"{betti}, n=3 total {total}"


def criterion_sweeps(jobs):
    reports = [
        check_service.check_multiplicativity(ABELIAN, 2, jobs=jobs),
        check_service.check_strong_splitting(ABELIAN, 2, jobs=jobs),
    ]
    detail = ", ".join(f"{r.check}: {r.pairs_checked} pairs / {r.violation_count} violations" for r in reports)
    return all(r.passed for r in reports), detail


def criterion_gcd_rule():
    nu, unit = Partition((2,)), {(0,): 1}
    labels = torsion_points(ABELIAN, 2)
    vanished, survived = 0, 0
    for sigma in labels:
        for tau in labels:
            product = kummer_product(KummerClass(ABELIAN, nu, sigma, unit), KummerClass(ABELIAN, nu, tau, unit))
            has_diagonal = any(lam == Partition((1, 1)) for lam, _ in product)
            if (sigma + tau).is_zero():
                survived += has_diagonal
            else:
                vanished += not has_diagonal
    return vanished == 240 and survived == 16, f"{vanished}/240 vanish, {survived}/16 survive"


def criterion_duality():
    reports = [check_service.check_duality(n) for n in (1, 2, 3)]
    reports.append(check_service.check_diagonal(ABELIAN, 2))
    return all(r.passed for r in reports), f"{sum(r.pairs_checked for r in reports)} checks"


def criterion_axioms():
    frobenius = check_service.check_frobenius(ABELIAN)
    ring = check_service.check_ring_axioms(ABELIAN, 2)
    return frobenius.passed and ring.passed, f"frobenius {frobenius.violation_count}, ring {ring.violation_count}"


def criterion_divisibility():
    for case in SurfaceCase:
        model = surface_model(case)
        for n in range(1, 7):
            kummer_quotient_pp(model, n)
    return True, "3 models, n = 1..6"


def main():
    import argparse

    parser = argparse.ArgumentParser(description='验收自检')
    parser.add_argument('--jobs', type=int, default=settings.DEFAULT_JOBS, help='扫描并行度')
    args = parser.parse_args()

    logging.basicConfig(level=settings.LOG_LEVEL, stream=sys.stderr)

    criteria = [
        ("1. surface table", criterion_surface_table),
        ("2. Goettsche agreement", criterion_goettsche),
        ("3. Kummer K3", criterion_kummer_k3),
        ("4. product-space series", criterion_product_series),
        ("5-6. multiplicativity / strong splitting (n=2)", lambda: criterion_sweeps(args.jobs)),
        ("7. gcd rule", criterion_gcd_rule),
        ("8. duality and estimates", criterion_duality),
        ("9. Frobenius and ring axioms", criterion_axioms),
        ("10. divisibility", criterion_divisibility),
    ]

    print("=" * 60)
    print("📋 kummer-perverse 验收自检")
    print("=" * 60)

    failures = 0
    for name, run in criteria:
        start = time.perf_counter()
        try:
            ok, detail = run()
        except KummerPerverseError as e:
            ok, detail = False, e.detail
        elapsed = time.perf_counter() - start
        failures += not ok
        mark = "✅" if ok else "❌"
        print(f"{mark} {name} ({elapsed:.1f}s): {detail}")

    print("=" * 60)
    if failures:
        print(f"❌ {failures} 项未通过")
    else:
        print("✅ 全部通过")
    return 1 if failures else 0


if __name__ == '__main__':
    sys.exit(main())
