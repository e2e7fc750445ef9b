from fractions import Fraction

import pytest

from app.frobenius import (
    abelian_surface_algebra,
    ground_field_algebra,
    surface_algebra,
    validate,
    with_counit,
)
from app.surfaces import SurfaceCase, surface_model
from utils.exceptions import DomainError, UnsupportedModelError


def test_abelian_surface_algebra_is_frobenius():
    report = validate(abelian_surface_algebra())
    assert report.passed, report.failed()
    assert report.dimension == 16
    assert [c.name for c in report.checks] == [
        "associativity",
        "graded_commutativity",
        "counit_homogeneity",
        "nondegeneracy",
        "adjointness",
        "coassociativity",
        "frobenius_condition",
        "counit_axiom",
    ]


def test_ground_field_is_frobenius():
    assert validate(ground_field_algebra()).passed
    assert validate(ground_field_algebra(euler=Fraction(2))).passed


def test_misplaced_counit_is_reported():
    algebra = abelian_surface_algebra()
    counit = list(algebra.counit)
    counit[0] = Fraction(1)
    report = validate(with_counit(algebra, counit))
    assert not report.passed
    failed = report.failed()
    assert "counit_homogeneity" in failed
    assert "nondegeneracy" in failed


def test_singular_pairing_skips_coproduct_checks():
    algebra = abelian_surface_algebra()
    report = validate(with_counit(algebra, [0] * algebra.dimension))
    skipped = {c.name for c in report.checks if c.skipped}
    assert skipped == {"adjointness", "coassociativity", "frobenius_condition", "counit_axiom"}
    assert not report.passed


def test_coproduct_of_unit_and_point():
    algebra = abelian_surface_algebra()
    top = algebra.dimension - 1
    unit = algebra.coproduct(algebra.unit_element())
    assert len(unit) == 16
    assert {j ^ k for j, k in unit} == {top}
    assert algebra.coproduct(algebra.element(top)) == {(top, top): Fraction(1)}


def test_iterated_coproduct():
    algebra = abelian_surface_algebra()
    assert algebra.comultiply(algebra.unit_element(), 1) == {(0,): Fraction(1)}
    assert algebra.comultiply(algebra.unit_element(), 2) == algebra.coproduct(algebra.unit_element())
    triple = algebra.comultiply_basis(0, 3)
    assert all(sum(algebra.degree(i) for i in key) == 8 for key in triple)
    with pytest.raises(DomainError):
        algebra.comultiply(algebra.unit_element(), 0)


def test_coproduct_raises_perversity_by_two():
    algebra = abelian_surface_algebra()
    for b in algebra.basis():
        for key in algebra.comultiply_basis(b, 2):
            assert sum(algebra.perversity(i) for i in key) == algebra.perversity(b) + 2


def test_noncompact_models_have_no_algebra():
    with pytest.raises(UnsupportedModelError):
        surface_algebra(surface_model(SurfaceCase.ELLIPTIC_TIMES_LINE))
