import random

import pytest

from packages.dieudonne.modules import (
    GradedDieudonneModule,
    SemilinearMap,
    classify_local_behavior,
    etale_module,
    is_exceptional,
    is_special,
    is_superspecial,
    is_supersingular,
    module_total_operator,
    pole_model,
    random_module,
    standard_module,
    type_of_module,
)
from packages.field_arith.field import make_field
from packages.local_orders.dvr import TruncatedDVR
from packages.local_orders.lattices import standard_lattice
from packages.local_orders.orders import TypeVector, compositions, standard_chain
from packages.shared.constants import LocalRole
from packages.shared.errors import ModuleError
from packages.shared.settings import get_default_seed

F2 = make_field(2, 1, 1)
F4 = make_field(2, 1, 2)


def standard(f, N=4, k=F4):
    return standard_module(standard_chain(TypeVector.of(f), TruncatedDVR(F2, N)), k)


def test_standard_special_module_is_superspecial():
    M = standard((1, 1, 1))
    assert type_of_module(M) == (1, 1, 1)
    assert is_exceptional(M)
    assert is_special(M)
    assert is_superspecial(M)
    assert is_supersingular(M)
    print("✅ Superspecial Module Test Passed")


@pytest.mark.parametrize("d", [1, 2, 3])
def test_standard_modules_have_the_chain_type(d):
    for f in compositions(d):
        M = standard(f.entries, N=d + 2)
        assert type_of_module(M) == f.entries
        assert is_exceptional(M)
        assert is_superspecial(M) == (f.entries == (1,) * d)


def test_etale_module():
    M = etale_module(3, F4, 4)
    assert type_of_module(M) == (0, 0, 0)
    assert not is_exceptional(M)
    assert not is_special(M)
    assert not is_supersingular(M)
    print("✅ Etale Module Test Passed")


def test_phi_divisible_in_one_slot():
    R = TruncatedDVR(F4, 4)
    pi_scalar = R.mat_scale(R.pi, R.identity(2))
    first = GradedDieudonneModule(ring=R, pi_maps=[pi_scalar, R.identity(2)], phi_maps=[pi_scalar, R.identity(2)])
    first.check_relations()
    assert type_of_module(first) == (2, 0)
    second = GradedDieudonneModule(ring=R, pi_maps=[R.identity(2), pi_scalar], phi_maps=[R.identity(2), pi_scalar])
    second.check_relations()
    assert type_of_module(second) == (0, 2)


def test_relation_violations_are_rejected():
    R = TruncatedDVR(F4, 4)
    pi_scalar = R.mat_scale(R.pi, R.identity(2))
    with pytest.raises(ModuleError):
        # Pi maps compose to pi^2
        GradedDieudonneModule(ring=R, pi_maps=[pi_scalar, pi_scalar], phi_maps=[pi_scalar, pi_scalar]).check_relations()
    with pytest.raises(ModuleError):
        # phi does not commute with Pi
        GradedDieudonneModule(ring=R, pi_maps=[pi_scalar, R.identity(2)], phi_maps=[R.identity(2), R.identity(2)]).check_relations()
    with pytest.raises(ModuleError):
        GradedDieudonneModule(ring=R, pi_maps=[pi_scalar], phi_maps=[])
    with pytest.raises(ModuleError):
        # phi_0 = 0 is not injective
        GradedDieudonneModule(ring=R, pi_maps=[R.mat_scale(R.pi, R.identity(1))], phi_maps=[R.zeros(1)]).check_relations()


def test_random_modules_keep_predicates_coherent():
    rng = random.Random(get_default_seed())
    types = [f for d in (1, 2, 3) for f in compositions(d)]
    generated = 0
    for round_ in range(8):
        for f in types:
            exceptional = (round_ + generated) % 3 != 0
            g = random_module(f, 2, rng=rng, exceptional=exceptional)
            M = g.module
            found = type_of_module(M)
            assert found == g.predicted_type
            assert is_exceptional(M) == exceptional
            assert is_superspecial(M) == (is_special(M) and is_exceptional(M))
            if is_exceptional(M):
                assert sum(found) == M.d
            generated += 1
    assert generated >= 100
    print("✅ Random Module Coherence Test Passed")


def test_random_modules_over_f9():
    rng = random.Random(get_default_seed())
    g = random_module(TypeVector.of([1, 1]), 3, rng=rng)
    assert type_of_module(g.module) == (1, 1)
    assert is_superspecial(g.module)


def test_semilinear_composition():
    R = TruncatedDVR(F4, 3)
    g = 2
    A = SemilinearMap(R.diagonal([R.constant(g), R.one]), 1, 0)
    square = A.power(R, 2)
    assert square.twist == 2
    assert R.mat_equal(square.matrix, R.diagonal([R.constant(F4.mul(g, F4.frob(g))), R.one]))
    assert A.power(R, 0).twist == 0
    with pytest.raises(ModuleError):
        A.power(R, -1)


def test_local_behavior_etale():
    M = etale_module(2, F4, 4)
    total = module_total_operator(M)
    lat = standard_lattice(M.ring, 4)
    assert classify_local_behavior(M.ring, lat, total, LocalRole.ETALE, 2).holds
    assert not classify_local_behavior(M.ring, lat, total, LocalRole.ZERO, 2).holds


def test_local_behavior_zero():
    M = standard((1, 1))
    total = module_total_operator(M)
    lat = standard_lattice(M.ring, 4)
    result = classify_local_behavior(M.ring, lat, total, LocalRole.ZERO, 2)
    assert result.holds and result.cokernel_length == 2
    wrong = classify_local_behavior(M.ring, lat, total, LocalRole.ZERO, 3)
    assert not wrong.holds and wrong.cokernel_length == 2
    assert not classify_local_behavior(M.ring, lat, total, LocalRole.ETALE, 2).holds
    print("✅ Local Zero Test Passed")


@pytest.mark.parametrize("d,deg", [(1, 1), (2, 1), (3, 1), (2, 2)])
def test_local_behavior_pole(d, deg):
    R = TruncatedDVR(F4, d * deg + 1)
    lat, phi = pole_model(R, d, deg)
    assert classify_local_behavior(R, lat, phi, LocalRole.POLE, d, deg).holds
    assert classify_local_behavior(R, lat, phi, "pole", d, deg).holds


def test_pole_model_with_wrong_period():
    R = TruncatedDVR(F4, 5)
    lat, phi = pole_model(R, 2)
    assert not classify_local_behavior(R, lat, phi, LocalRole.POLE, 1).holds


if __name__ == "__main__":
    test_standard_special_module_is_superspecial()
    test_etale_module()
    test_phi_divisible_in_one_slot()
    test_random_modules_keep_predicates_coherent()
    test_local_behavior_zero()
    print("\n🎉 All Dieudonne Module Tests Passed!")
