from fractions import Fraction

import pytest

from app.surfaces import (
    SurfaceCase,
    SurfaceClass,
    TorsionElement,
    basis_classes,
    cohomology_pp,
    in_torsion_group,
    integrate,
    is_m_torsion,
    negation_pullback,
    pairing,
    poincare_dual,
    pushforward_summation,
    summation_pullback,
    surface_model,
    tensor_sign,
    torsion_count,
    torsion_points,
    wedge_sign,
    with_perversities,
)
from utils.exceptions import DomainError, GroupMismatchError, ShapeError, UnsupportedModelError

ABELIAN = surface_model(SurfaceCase.ABELIAN_OVER_ELLIPTIC)
LINE = surface_model(SurfaceCase.ELLIPTIC_TIMES_LINE)
QUOTIENT = surface_model(SurfaceCase.ELLIPTIC_TIMES_TORUS_QUOTIENT)


def test_surface_tables():
    assert cohomology_pp(ABELIAN).terms == {
        (0, 0): 1, (1, 0): 2, (1, 1): 2, (2, 0): 1, (2, 1): 4,
        (2, 2): 1, (3, 1): 2, (3, 2): 2, (4, 2): 1,
    }
    assert cohomology_pp(LINE).terms == {(0, 0): 1, (1, 1): 2, (2, 2): 1}
    assert cohomology_pp(QUOTIENT).terms == {
        (0, 0): 1, (1, 0): 1, (1, 1): 2, (2, 1): 2, (2, 2): 1, (3, 2): 1,
    }


def test_models_accept_case_names():
    assert surface_model("abelian") == ABELIAN
    assert surface_model("e-times-line", 3).torsion_rank == 3
    with pytest.raises(ValueError):
        surface_model("k3")
    with pytest.raises(DomainError):
        ABELIAN.mask_of("epsilon")


def test_wedge_signs():
    alpha, beta = ABELIAN.mask_of("alpha"), ABELIAN.mask_of("beta")
    assert wedge_sign(alpha, beta) == 1
    assert wedge_sign(beta, alpha) == -1
    assert wedge_sign(alpha, alpha) == 0
    assert tensor_sign((alpha, 0), (0, beta)) == 1
    assert tensor_sign((0, alpha), (beta, 0)) == -1


def test_products_are_graded_commutative():
    for x in basis_classes(ABELIAN, 1):
        for y in basis_classes(ABELIAN, 1):
            (kx,), (ky,) = next(iter(x.terms)), next(iter(y.terms))
            sign = -1 if ABELIAN.degree(kx) * ABELIAN.degree(ky) % 2 else 1
            assert x * y == (y * x).scale(sign)


def test_perversity_of_sums():
    gamma = SurfaceClass.basis(ABELIAN, (ABELIAN.mask_of("gamma"),))
    alpha = SurfaceClass.basis(ABELIAN, (ABELIAN.mask_of("alpha"),))
    mixed = gamma + alpha
    assert mixed.perversity() == 1
    assert not mixed.is_pure()
    assert (gamma - gamma).perversity() == -1


def test_poincare_duals():
    for x in basis_classes(ABELIAN, 2):
        dual = poincare_dual(x)
        assert pairing(x, dual) == 1
        assert x.perversity() + dual.perversity() == 4
    with pytest.raises(ShapeError):
        poincare_dual(SurfaceClass.unit(ABELIAN) + SurfaceClass.basis(ABELIAN, (ABELIAN.top,)))


def test_noncompact_models_have_no_integral():
    with pytest.raises(UnsupportedModelError):
        integrate(SurfaceClass.unit(LINE))


def test_summation_pullback_is_a_ring_map():
    alpha = SurfaceClass.basis(ABELIAN, (ABELIAN.mask_of("alpha"),))
    gamma = SurfaceClass.basis(ABELIAN, (ABELIAN.mask_of("gamma"),))
    assert summation_pullback(alpha * gamma, 2) == summation_pullback(alpha, 2) * summation_pullback(gamma, 2)
    assert summation_pullback(gamma, 3).perversity() == 1


def test_negation_pullback_signs_odd_degrees():
    alpha = SurfaceClass.basis(ABELIAN, (ABELIAN.mask_of("alpha"),))
    pair = SurfaceClass.basis(ABELIAN, (ABELIAN.mask_of("alpha", "beta"),))
    assert negation_pullback(alpha) == -alpha
    assert negation_pullback(pair) == pair


def test_pushforward_along_summation():
    alpha = SurfaceClass.basis(ABELIAN, (ABELIAN.mask_of("alpha"),))
    assert pushforward_summation(alpha) == -alpha
    assert pushforward_summation(SurfaceClass.unit(ABELIAN)) == SurfaceClass.unit(ABELIAN)
    point = SurfaceClass.basis(ABELIAN, (ABELIAN.top, ABELIAN.top))
    assert pushforward_summation(point) == SurfaceClass.basis(ABELIAN, (ABELIAN.top,))
    assert pushforward_summation(SurfaceClass.unit(ABELIAN, 2)).is_zero()


def test_torsion_counts():
    assert torsion_count(ABELIAN, 2) == 16
    assert torsion_count(LINE, 3) == 9
    assert torsion_count(QUOTIENT, 1) == 1
    assert len(torsion_points(ABELIAN, 2)) == 16
    assert torsion_points(ABELIAN, 2)[0].is_zero()
    with pytest.raises(DomainError):
        torsion_count(ABELIAN, 0)


def test_torsion_group_with_invariant_factors():
    # (ℚ/ℤ)^2 ⊕ ℤ/4：A[m] ≅ (ℤ/m)^2 ⊕ ℤ/gcd(m, 4)
    model = surface_model(SurfaceCase.ELLIPTIC_TIMES_TORUS_QUOTIENT, 2, (4,))
    assert model.torsion_components == 3
    assert [torsion_count(model, m) for m in (1, 2, 3, 4, 6)] == [1, 8, 9, 64, 72]
    points = torsion_points(model, 2)
    assert len(points) == len(set(points)) == 8
    assert points[0].is_zero()
    assert all(in_torsion_group(model, p) and is_m_torsion(p, 2) for p in points)
    assert in_torsion_group(model, TorsionElement((0, 0, Fraction(1, 4))))
    assert not in_torsion_group(model, TorsionElement((0, 0, Fraction(1, 3))))
    assert not in_torsion_group(model, TorsionElement((0, 0)))


def test_split_form_is_the_default():
    assert QUOTIENT.torsion_factors == ()
    assert torsion_count(QUOTIENT, 4) == 4 ** 3
    assert in_torsion_group(QUOTIENT, TorsionElement((Fraction(1, 3), 0, 0)))


@pytest.mark.parametrize("factors", [(1,), (2, 3), (4, 2)])
def test_invariant_factors_must_form_a_divisibility_chain(factors):
    with pytest.raises(DomainError):
        surface_model(SurfaceCase.ABELIAN_OVER_ELLIPTIC, None, factors)


def test_torsion_arithmetic():
    half = TorsionElement((Fraction(1, 2), 0, 0, 0))
    assert (half + half).is_zero()
    assert is_m_torsion(half, 2)
    assert not is_m_torsion(half, 3)
    assert str(half) == "(1/2,0,0,0)"
    with pytest.raises(GroupMismatchError):
        half + TorsionElement.zero(2)


def test_corrupted_perversity_table():
    broken = with_perversities(ABELIAN, (0, 0, 2, 1))
    assert broken.perversity(broken.top) == 3
    with pytest.raises(ShapeError):
        with_perversities(ABELIAN, (0, 1))


@pytest.mark.parametrize("model", [ABELIAN, LINE, QUOTIENT])
def test_surface_products_split_strongly(model):
    for x in basis_classes(model, 1):
        for y in basis_classes(model, 1):
            product = x * y
            assert product.is_zero() or product.perversities() == {x.perversity() + y.perversity()}


def test_duality_is_an_involution_up_to_sign():
    for x in basis_classes(ABELIAN, 1):
        twice = poincare_dual(poincare_dual(x))
        assert twice == x or twice == -x


def test_summation_pullback_is_multiplicative_on_the_basis():
    for x in basis_classes(ABELIAN, 1):
        for y in basis_classes(ABELIAN, 1):
            assert summation_pullback(x * y, 2) == summation_pullback(x, 2) * summation_pullback(y, 2)
