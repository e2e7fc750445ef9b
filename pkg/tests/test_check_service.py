import pytest

from app.core.config import settings
from app.schemas import Violation
from app.services import check_service
from app.services.check_service import SweepTally
from app.surfaces import SurfaceCase, surface_model, with_perversities
from utils.exceptions import FeasibilityError, UnsupportedModelError

ABELIAN = surface_model(SurfaceCase.ABELIAN_OVER_ELLIPTIC)
# gamma 的 perversity 改成 2：Δ 每次多抬高 1
INFLATED = with_perversities(ABELIAN, (0, 0, 2, 1))
# gamma 的 perversity 改成 0：Δ 每次少抬高 1
DEFLATED = with_perversities(ABELIAN, (0, 0, 0, 1))


def _violation(tag: str) -> Violation:
    return Violation(alpha=tag, beta=tag, lambda_="(1,1)", sigma_tau="-", p_alpha=0, p_beta=0, p_gamma=1)


def test_tally_merge_is_order_independent():
    left, right = SweepTally(limit=2), SweepTally(limit=2)
    left.pairs_checked, right.pairs_checked = 3, 4
    left.record((2,), _violation("b"))
    right.record((1,), _violation("a"))
    right.record((3,), _violation("c"))
    one, other = left.merge(right), right.merge(left)
    assert one.pairs_checked == other.pairs_checked == 7
    assert one.violation_count == 3
    assert [v.alpha for v in one.witnesses()] == [v.alpha for v in other.witnesses()] == ["a", "b"]


@pytest.mark.parametrize("check", [check_service.check_multiplicativity, check_service.check_strong_splitting])
@pytest.mark.parametrize("n", [1, 2])
def test_theorems_hold_exhaustively(check, n):
    report = check(ABELIAN, n)
    assert report.passed
    assert report.violation_count == 0
    assert report.pairs_checked > 0
    assert report.mode == "exhaustive"
    assert report.seed is None


def test_one_point_pairs_count_torsion_labels():
    report = check_service.check_multiplicativity(ABELIAN, 1)
    assert report.details["basis_size"] == 16
    assert report.pairs_checked == 16 * 17 // 2


def test_inflated_table_breaks_multiplicativity():
    report = check_service.check_multiplicativity(INFLATED, 2)
    assert not report.passed
    assert report.violation_count > 0
    witness = report.violations[0]
    assert witness.p_gamma > witness.p_alpha + witness.p_beta
    assert "@" in witness.alpha


def test_deflated_table_breaks_only_strong_splitting():
    assert check_service.check_multiplicativity(DEFLATED, 2).passed
    report = check_service.check_strong_splitting(DEFLATED, 2)
    assert not report.passed
    assert len(report.violations) <= settings.MAX_WITNESSES


def test_parallel_sweep_matches_serial():
    serial = check_service.check_multiplicativity(INFLATED, 2, jobs=1)
    parallel = check_service.check_multiplicativity(INFLATED, 2, jobs=2)
    assert parallel.pairs_checked == serial.pairs_checked
    assert parallel.violation_count == serial.violation_count
    assert parallel.violations == serial.violations


def test_sampled_sweep_is_reproducible():
    first = check_service.check_strong_splitting(ABELIAN, 2, mode="sampled", samples=40, seed=11)
    second = check_service.check_strong_splitting(ABELIAN, 2, mode="sampled", samples=40, seed=11)
    assert first.passed and second.passed
    assert first.seed == 11
    assert first.pairs_checked == second.pairs_checked


def test_feasibility_bounds(monkeypatch):
    with pytest.raises(FeasibilityError) as info:
        check_service.check_multiplicativity(ABELIAN, 9)
    assert info.value.exit_code == 3
    monkeypatch.setattr(settings, "MAX_N", 1)
    with pytest.raises(FeasibilityError):
        check_service.check_strong_splitting(ABELIAN, 2)


def test_noncompact_models_are_rejected():
    with pytest.raises(UnsupportedModelError):
        check_service.check_multiplicativity(surface_model(SurfaceCase.ELLIPTIC_TIMES_LINE), 2)


def test_sweep_counts_labels_in_non_split_torsion_group():
    # ℤ/2 有限部分：ν = (2) 的类带 2 个标签，ν = (1,1) 的类带 1 个
    model = surface_model(SurfaceCase.ABELIAN_OVER_ELLIPTIC, 0, (2,))
    report = check_service.check_multiplicativity(model, 2, jobs=2)
    assert report.passed
    assert report.pairs_checked == 136 * 4 + 16 * 128 * 2 + 8256


@pytest.mark.parametrize("n", [1, 2, 3])
def test_duality(n):
    report = check_service.check_duality(n)
    assert report.passed
    assert report.pairs_checked == 2 * 16 ** n
    assert report.details == {"monomials": 16 ** n, "vanishing_checked": True}


def test_deflated_table_breaks_duality_at_three_points():
    # 每个因子上 p(m) + p(m 的补) = 1，两类检查在每个单项式上都失败
    report = check_service.check_duality(3, DEFLATED)
    assert not report.passed
    assert report.violation_count == 2 * 16 ** 3


def test_diagonal_and_push_pull_estimates():
    report = check_service.check_diagonal(ABELIAN, 2)
    assert report.passed
    assert report.details["failures"] == {"diagonal": 0, "anti_diagonal": 0, "exact_shift": 0, "push_pull": 0}


def test_frobenius_report():
    report = check_service.check_frobenius(ABELIAN)
    assert report.passed
    assert report.pairs_checked == 8
    assert report.details["dimension"] == 16


@pytest.mark.slow
@pytest.mark.parametrize("check", [check_service.check_multiplicativity, check_service.check_strong_splitting])
def test_theorems_hold_for_three_points(check):
    assert check(ABELIAN, 3, jobs=0).passed


@pytest.mark.slow
def test_sampled_four_points():
    report = check_service.check_multiplicativity(ABELIAN, 4, mode="sampled", samples=10_000, seed=1, jobs=0)
    assert report.passed
    assert report.seed == 1
