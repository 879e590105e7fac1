import itertools

import pytest

from packages.field_arith.field import (
    FieldElement,
    embedding,
    enumerate_field,
    frobenius,
    make_field,
    norm,
    parse_prime_power,
    primitive_element,
    trace,
)
from packages.shared.errors import FieldError


def test_prime_field_moduli():
    f2 = make_field(2, 1, 1)
    assert f2.modulus == (0, 1)
    assert f2.order == 2
    f3 = make_field(3, 1, 1)
    assert f3.order == 3
    assert [x.value for x in enumerate_field(f2)] == [0, 1]
    print("✅ Prime Field Test Passed")


def test_smallest_irreducible_modulus():
    assert make_field(2, 1, 2).modulus == (1, 1, 1)  # x^2 + x + 1
    assert make_field(2, 1, 3).modulus == (1, 1, 0, 1)  # x^3 + x + 1
    assert make_field(3, 1, 2).modulus == (1, 0, 1)  # x^2 + 1
    # F_16 over F_4 uses a degree-4 modulus over F_2
    f16 = make_field(2, 2, 2)
    assert f16.q == 4 and f16.order == 16 and len(f16.modulus) == 5
    print("✅ Modulus Selection Test Passed")


def test_make_field_rejects_bad_input():
    with pytest.raises(FieldError):
        make_field(4, 1, 1)
    with pytest.raises(FieldError):
        make_field(2, 4, 5)
    with pytest.raises(FieldError):
        make_field(2, 0, 1)
    print("✅ Field Validation Test Passed")


def test_enumeration_sizes():
    assert len(list(enumerate_field(make_field(2, 1, 2)))) == 4
    elements = list(enumerate_field(make_field(3, 1, 2)))
    assert len(elements) == 9
    assert len({e.coeffs for e in elements}) == 9
    print("✅ Enumeration Test Passed")


def test_frobenius_on_f4():
    f4 = make_field(2, 1, 2)
    g = FieldElement.generator(f4)
    assert frobenius(g) == g * g
    assert frobenius(g) == g + 1
    assert frobenius(FieldElement.zero(f4)).is_zero()
    one = FieldElement.one(make_field(2, 1, 1))
    assert frobenius(one) == one
    print("✅ Frobenius F_4 Test Passed")


@pytest.mark.parametrize("p,e,m", [(2, 1, 1), (3, 1, 1), (2, 1, 2), (5, 1, 1), (7, 1, 1), (2, 1, 3), (3, 1, 2), (2, 1, 4), (2, 2, 2)])
def test_field_axioms_exhaustive(p, e, m):
    spec = make_field(p, e, m)
    elems = range(spec.order)
    for a in elems:
        assert spec.add(a, spec.neg(a)) == 0
        if a:
            assert spec.mul(a, spec.inv(a)) == 1
    for a, b, c in itertools.product(elems, repeat=3):
        assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
        assert spec.add(spec.add(a, b), c) == spec.add(a, spec.add(b, c))
        assert spec.mul(a, spec.add(b, c)) == spec.add(spec.mul(a, b), spec.mul(a, c))


def test_table_and_polynomial_multiplication_agree():
    spec = make_field(3, 1, 3)
    for a, b in itertools.product(range(spec.order), repeat=2):
        expected = spec._poly_mulmod(a, b) if a and b else 0
        assert spec.mul(a, b) == expected
    print("✅ Table Multiplication Test Passed")


@pytest.mark.parametrize("p,e,m", [(2, 1, 6), (2, 2, 3), (2, 3, 2), (3, 1, 3), (5, 1, 2), (2, 2, 2)])
def test_frobenius_is_ring_homomorphism(p, e, m):
    spec = make_field(p, e, m)
    assert spec.order <= 64
    for a, b in itertools.product(range(spec.order), repeat=2):
        assert spec.frob(spec.add(a, b)) == spec.add(spec.frob(a), spec.frob(b))
        assert spec.frob(spec.mul(a, b)) == spec.mul(spec.frob(a), spec.frob(b))


@pytest.mark.parametrize("p,e,m", [(2, 1, 6), (2, 2, 3), (2, 3, 2), (3, 1, 3), (5, 1, 2), (2, 2, 2)])
def test_frobenius_order_and_fixed_field(p, e, m):
    spec = make_field(p, e, m)
    fixed = []
    for a in range(spec.order):
        value = a
        for _ in range(m):
            value = spec.frob(value)
        assert value == a
        if spec.frob(a) == a:
            fixed.append(a)
    assert len(fixed) == spec.q
    assert tuple(fixed) == spec.base_elements


def test_cross_field_arithmetic_is_an_error():
    a = FieldElement.one(make_field(2, 1, 2))
    b = FieldElement.one(make_field(2, 1, 3))
    with pytest.raises(FieldError):
        _ = a + b
    with pytest.raises(FieldError):
        FieldElement.zero(make_field(3, 1, 1)).inverse()
    print("✅ Cross Field Test Passed")


def test_embedding_is_a_ring_homomorphism():
    small, large = make_field(2, 1, 2), make_field(2, 1, 4)
    emb = embedding(small, large)
    for a, b in itertools.product(range(small.order), repeat=2):
        assert emb(small.add(a, b)) == large.add(emb(a), emb(b))
        assert emb(small.mul(a, b)) == large.mul(emb(a), emb(b))
    assert emb(1) == 1
    # a field embeds into itself by the identity
    ident = embedding(large, large)
    assert all(ident(v) == v for v in range(large.order))
    with pytest.raises(FieldError):
        embedding(make_field(2, 1, 3), large)
    print("✅ Embedding Test Passed")


def test_trace_and_norm_land_in_base_field():
    spec = make_field(3, 1, 2)
    for a in enumerate_field(spec):
        assert trace(a).value in spec.base_elements
        assert norm(a).value in spec.base_elements
    g = primitive_element(spec)
    powers = {(g ** k).value for k in range(spec.order - 1)}
    assert len(powers) == spec.order - 1
    print("✅ Trace/Norm Test Passed")


def test_parse_prime_power():
    assert parse_prime_power(2) == (2, 1)
    assert parse_prime_power(9) == (3, 2)
    with pytest.raises(FieldError):
        parse_prime_power(6)
    print("✅ Prime Power Test Passed")


if __name__ == "__main__":
    test_prime_field_moduli()
    test_smallest_irreducible_modulus()
    test_make_field_rejects_bad_input()
    test_enumeration_sizes()
    test_frobenius_on_f4()
    test_cross_field_arithmetic_is_an_error()
    test_embedding_is_a_ring_homomorphism()
    test_trace_and_norm_land_in_base_field()
    test_parse_prime_power()
    print("\n🎉 All Field Arithmetic Tests Passed!")
