import random

import pytest

from packages.field_arith.field import make_field
from packages.local_orders.dvr import TruncatedDVR
from packages.local_orders.lattices import (
    Lattice,
    chain_from_lattices,
    cokernel_length,
    cokernel_lengths,
    lattice_contains,
    lattice_equal,
    lattice_index,
    smith_form,
    standard_lattice,
    type_of_chain,
)
from packages.shared.errors import InsufficientTruncation, TypeVectorError
from packages.shared.settings import get_default_seed

R2 = TruncatedDVR(make_field(2, 1, 1), 4)
R3 = TruncatedDVR(make_field(3, 1, 1), 4)


def test_unit_inverse():
    rng = random.Random(get_default_seed())
    for _ in range(50):
        a = (rng.randrange(1, 3),) + tuple(rng.randrange(3) for _ in range(3))
        assert R3.mul(a, R3.inv(a)) == R3.one
    with pytest.raises(InsufficientTruncation):
        R3.inv(R3.pi)
    print("✅ Unit Inverse Test Passed")


def test_valuation_and_shifts():
    a = R2.monomial(1, 2)
    assert R2.val(a) == 2
    assert R2.val(R2.zero) == 4
    assert R2.shift_down(a, 2) == R2.one
    assert R2.shift_up(R2.one, 5) == R2.zero
    with pytest.raises(InsufficientTruncation):
        R2.shift_down(R2.pi, 2)


def test_smith_form_reconstructs_diagonal():
    pi, one, zero = R2.pi, R2.one, R2.zero
    A = [[pi, one], [zero, pi]]
    snf = smith_form(R2, A)
    assert snf.diagonal == [0, 2]
    product = R2.matmul(R2.matmul(snf.left, A), snf.right)
    assert R2.mat_equal(product, R2.diagonal([R2.one, R2.monomial(1, 2)]))
    print("✅ Smith Form Test Passed")


def test_smith_form_random_matrices():
    rng = random.Random(get_default_seed())
    for _ in range(20):
        A = [[tuple(rng.randrange(3) for _ in range(4)) for _ in range(3)] for _ in range(3)]
        try:
            snf = smith_form(R3, A)
        except InsufficientTruncation:
            continue
        product = R3.matmul(R3.matmul(snf.left, A), snf.right)
        expected = R3.diagonal([R3.monomial(1, v) for v in snf.diagonal])
        assert R3.mat_equal(product, expected)
        assert cokernel_lengths(R3, A) == snf.diagonal


def test_zero_matrix_needs_more_truncation():
    with pytest.raises(InsufficientTruncation):
        smith_form(R2, R2.zeros(2))


def test_lattice_containment_and_index():
    full = standard_lattice(R2, 2)
    half = Lattice.of(R2.diagonal([R2.pi, R2.one]))
    assert lattice_contains(R2, full, half)
    assert not lattice_contains(R2, half, full)
    assert lattice_index(R2, half) == 1
    assert cokernel_length(R2, full, half) == 1
    assert lattice_contains(R2, full.scaled(-1), full)
    assert lattice_index(R2, full.scaled(-1)) == -2
    assert lattice_equal(R2, half, Lattice.of(R2.diagonal([R2.monomial(1, 1), R2.element([1, 1])])))
    with pytest.raises(TypeVectorError):
        cokernel_length(R2, half, full)
    print("✅ Lattice Containment Test Passed")


def test_custom_chain_type():
    # Lambda_0 = R^3, Lambda_1 = Lambda_2 = diag(pi, 1, 1)
    full = standard_lattice(R2, 3)
    dented = Lattice.of(R2.diagonal([R2.pi, R2.one, R2.one]))
    chain = chain_from_lattices(R2, [full, dented, dented])
    assert type_of_chain(chain) == (1, 0, 2)
    with pytest.raises(TypeVectorError):
        chain_from_lattices(R2, [dented, full, full])
    print("✅ Custom Chain Test Passed")


if __name__ == "__main__":
    test_unit_inverse()
    test_smith_form_reconstructs_diagonal()
    test_lattice_containment_and_index()
    test_custom_chain_type()
    print("\n🎉 All Lattice Tests Passed!")
