import pytest

from app.bigraded import (
    PerversePolynomial,
    exact_divide,
    lefschetz_mismatches,
    shift,
    super_symmetric_power,
    sym_partition,
    symmetric_power_series,
)
from app.partitions import Partition
from app.surfaces import SurfaceCase, cohomology_pp, surface_model
from utils.exceptions import DivisibilityError, DomainError

ABELIAN = surface_model(SurfaceCase.ABELIAN_OVER_ELLIPTIC)


def test_negative_terms_are_rejected():
    with pytest.raises(DomainError):
        PerversePolynomial.from_terms({(1, 0): -1})
    with pytest.raises(DomainError):
        PerversePolynomial.from_terms({(-1, 0): 1})


def test_product_and_betti():
    a = PerversePolynomial.from_terms({(0, 0): 1, (1, 1): 2})
    b = a * a
    assert b.terms == {(0, 0): 1, (1, 1): 4, (2, 2): 4}
    assert b.betti_numbers() == [1, 4, 4]
    assert b.total_dimension() == 9
    assert PerversePolynomial.zero().betti_numbers() == [0]


def test_shift_requires_even_degree():
    a = PerversePolynomial.unit()
    assert shift(a, 2, 1).terms == {(2, 1): 1}
    with pytest.raises(DomainError):
        shift(a, 1, 0)


def test_symmetric_square_of_abelian_surface():
    square = super_symmetric_power(cohomology_pp(ABELIAN), 2)
    assert square.total_dimension() == 128
    assert square.betti_numbers() == [1, 4, 12, 28, 38, 28, 12, 4, 1]


def test_odd_classes_anticommute_in_symmetric_powers():
    odd = PerversePolynomial.monomial(1, 1, 2)
    series = symmetric_power_series(odd, 3)
    assert series[2].terms == {(2, 2): 1}
    assert series[3].is_zero()


def test_sym_partition_multiplies_groups():
    h = cohomology_pp(ABELIAN)
    assert sym_partition(h, Partition((2, 1))).total_dimension() == 256
    assert sym_partition(h, Partition((1, 1))) == super_symmetric_power(h, 2)


def test_exact_divide():
    h = cohomology_pp(ABELIAN)
    quotient = exact_divide(h * h, h)
    assert quotient == h
    with pytest.raises(DivisibilityError):
        exact_divide(PerversePolynomial.monomial(1, 0), PerversePolynomial.from_terms({(0, 0): 1, (1, 0): 1}))
    with pytest.raises(DivisibilityError):
        exact_divide(h, PerversePolynomial.monomial(1, 0))


def test_surface_series_is_lefschetz_symmetric():
    assert lefschetz_mismatches(cohomology_pp(ABELIAN), 1) == []
    broken = PerversePolynomial.from_terms({(0, 0): 1})
    assert lefschetz_mismatches(broken, 1) == [(0, 0)]


def test_json_payload():
    a = PerversePolynomial.from_terms({(1, 1): 2, (0, 0): 1})
    assert a.to_json() == {"terms": [{"d": 0, "p": 0, "c": 1}, {"d": 1, "p": 1, "c": 2}]}
    assert PerversePolynomial.from_json(a.to_json()) == a
    assert a.to_text() == "1 * q^0 * t^0 + 2 * q^1 * t^1"
