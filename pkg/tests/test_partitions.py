import math

import pytest
from sympy import npartitions

from app.partitions import (
    Partition,
    Permutation,
    canonical_representative,
    compose,
    conjugacy_class_size,
    enumerate_partitions,
    joint_orbits,
    orbits,
)
from utils.exceptions import DimensionError, DomainError, EmptyInputError


def test_partition_counts_match_partition_numbers():
    expected = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert [len(enumerate_partitions(n)) for n in range(1, 11)] == expected


@pytest.mark.parametrize("n", [12, 15, 20])
def test_partition_counts_match_sympy(n):
    assert len(enumerate_partitions(n)) == npartitions(n)


def test_enumeration_order():
    assert [str(p) for p in enumerate_partitions(4)] == ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]


def test_partition_normalizes_and_rejects_bad_parts():
    assert Partition((1, 3, 2)).parts == (3, 2, 1)
    with pytest.raises(EmptyInputError):
        Partition(())
    with pytest.raises(DomainError):
        Partition((2, 0))
    with pytest.raises(EmptyInputError):
        enumerate_partitions(0)


def test_partition_statistics():
    nu = Partition((4, 2, 2))
    assert nu.n == 8
    assert nu.length == 3
    assert nu.gcd == 2
    assert nu.multiplicities == (0, 2, 0, 1, 0, 0, 0, 0)
    assert Partition.from_multiplicities((2, 0, 1)) == Partition((3, 1, 1))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_class_sizes_sum_to_factorial(n):
    assert sum(conjugacy_class_size(nu) for nu in enumerate_partitions(n)) == math.factorial(n)


def test_class_size_examples():
    assert conjugacy_class_size(Partition((2, 1))) == 3
    assert conjugacy_class_size(Partition((2, 2))) == 3
    assert conjugacy_class_size(Partition((3, 1))) == 8


def test_canonical_representative_has_cycle_type():
    for nu in enumerate_partitions(5):
        assert canonical_representative(nu).cycle_type() == nu
    assert str(canonical_representative(Partition((3, 1)))) == "(1 2 3)"


def test_composition_applies_right_factor_first():
    pi = Permutation.from_cycles(3, [[1, 2]])
    rho = Permutation.from_cycles(3, [[2, 3]])
    assert compose(pi, rho)(1) == 2
    assert compose(pi, rho)(3) == 1
    assert (pi * pi) == Permutation.identity(3)
    with pytest.raises(DimensionError):
        compose(pi, Permutation.identity(4))


def test_orbits_sorted_by_minimum():
    pi = Permutation.from_cycles(5, [[4, 2], [3, 5]])
    assert orbits(pi) == (frozenset({1}), frozenset({2, 4}), frozenset({3, 5}))


def test_joint_orbits():
    a = Permutation.from_cycles(4, [[1, 2]])
    b = Permutation.from_cycles(4, [[3, 4]])
    assert joint_orbits(a, b) == (frozenset({1, 2}), frozenset({3, 4}))
    c = Permutation.from_cycles(3, [[1, 2]])
    d = Permutation.from_cycles(3, [[2, 3]])
    assert joint_orbits(c, d) == (frozenset({1, 2, 3}),)


def test_permutation_rejects_non_bijection():
    with pytest.raises(DomainError):
        Permutation((1, 1, 2))
