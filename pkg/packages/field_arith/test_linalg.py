from packages.field_arith.field import make_field, scale_flat
from packages.field_arith.linalg import (
    SparseEchelon,
    extract_basis_over_subfield,
    nullspace,
    rank,
    span_contains,
)


def _apply(rows, vec, p):
    return [sum(r.get(c, 0) * v for c, v in vec.items()) % p for r in rows]


def test_nullspace_small_system():
    # x0 + x1 + x2 = 0, x1 + 2*x2 = 0 over F_3
    rows = [{0: 1, 1: 1, 2: 1}, {1: 1, 2: 2}]
    basis = nullspace(rows, 3, 3)
    assert len(basis) == 1
    assert _apply(rows, basis[0], 3) == [0, 0]
    print("✅ Nullspace Test Passed")


def test_rank_and_span():
    rows = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: 1}]
    assert rank(rows, 2) == 2  # third row is the sum of the first two over F_2
    assert rank(rows, 3) == 3
    assert span_contains(rows[:2], {0: 1, 2: 1}, 2)
    assert not span_contains(rows[:1], {2: 1}, 2)
    print("✅ Rank/Span Test Passed")


def test_echelon_stays_reduced():
    ech = SparseEchelon(5)
    assert ech.add({3: 2, 4: 1})
    assert ech.add({3: 1, 1: 4})
    assert not ech.add({3: 4, 4: 2})
    for col, row in ech.pivots.items():
        assert row[col] == 1
        assert all(other not in row for other in ech.pivots if other != col)
    print("✅ Reduced Echelon Test Passed")


def test_extract_basis_over_f4_inside_f16():
    spec = make_field(2, 2, 2)
    scalars = spec.base_basis
    # two F_4-multiples of the same vector span a 1-dimensional F_4 space
    v = {0: 1}
    w = scale_flat(spec, v, scalars[1])
    vectors = [v, w, scale_flat(spec, {4: 1}, 1)]
    basis = extract_basis_over_subfield(vectors, scalars, lambda r, b: scale_flat(spec, r, b), 2)
    assert len(basis) == 2
    print("✅ Subfield Basis Test Passed")


if __name__ == "__main__":
    test_nullspace_small_system()
    test_rank_and_span()
    test_echelon_stays_reduced()
    test_extract_basis_over_f4_inside_f16()
    print("\n🎉 All Linear Algebra Tests Passed!")
