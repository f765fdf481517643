import pytest

from ssk3.crystals import (
    CharacteristicSubspace,
    enumerate_characteristic,
    is_characteristic,
    is_strictly_characteristic,
    phi,
)
from ssk3.fields import frobenius, make_field
from ssk3.quadratic_spaces import (
    BilinearSpace,
    Subspace,
    enumerate_totally_isotropic,
    standard_N0,
)

F3 = make_field(3, 1)
F9 = make_field(3, 2)
F27 = make_field(3, 3)


def test_phi_fixes_rational_subspaces():
    V = standard_N0(3, 2)
    K = Subspace.span(V, F3, [(F3.one(), F3.from_int(2), F3.zero(), F3.one())])
    assert phi(K) == K


def test_phi_on_F9_line():
    V = standard_N0(3, 1)
    g = F9.gen()
    K = Subspace.span(V, F9, [(F9.one(), g)])
    expect = Subspace.span(V, F9, [(F9.one(), g * g * g)])  # cube the coordinates
    assert phi(K) == expect
    assert phi(phi(K)) == K


def test_phi_preserves_form_up_to_frobenius():
    V = standard_N0(3, 2)
    for ca in range(0, 81, 7):
        for cb in range(0, 81, 11):
            u = tuple(F9.from_code((ca + 13 * i) % 81) for i in range(4))
            v = tuple(F9.from_code((cb + 29 * i) % 81) for i in range(4))
            lhs = V.inner(tuple(map(frobenius, u)), tuple(map(frobenius, v)))
            assert lhs == V.inner(u, v) ** 3


def test_is_characteristic_sigma0_one():
    V = standard_N0(3, 1)
    lines = enumerate_totally_isotropic(V, F9, 1)
    assert len(lines) == 2
    assert all(is_characteristic(K, 1) for K in lines)
    # phi swaps the two lines
    assert phi(lines[0]) == lines[1]


def test_phi_fixed_subspace_is_not_characteristic():
    H = BilinearSpace(F3, 2, ((0, 1), (1, 0)))
    K = Subspace.span(H, F3, [(F3.one(), F3.zero())])
    assert not is_characteristic(K, 1)


def test_non_isotropic_line_is_not_characteristic():
    V = standard_N0(3, 1)
    K = Subspace.span(V, F9, [(F9.one(), F9.zero())])
    assert not is_characteristic(K, 1)


def test_ambient_dimension_mismatch_raises():
    V = standard_N0(3, 2)
    K = Subspace.zero(V, F9)
    with pytest.raises(ValueError):
        is_characteristic(K, 1)


def test_strictly_characteristic_line():
    V = standard_N0(3, 1)
    for K in enumerate_totally_isotropic(V, F9, 1):
        assert is_strictly_characteristic(K, 1)


def test_characteristic_but_not_strict_witness():
    # span{h1, a}: h1 a rational isotropic vector of the hyperbolic block,
    # a a characteristic line of the anisotropic block; chain stops at dim 3
    V = standard_N0(3, 2)
    h1 = (F9.one(), F9.zero(), F9.zero(), F9.zero())
    a = (F9.zero(), F9.zero(), F9.one(), F9.gen())
    K = Subspace.span(V, F9, [h1, a])
    assert is_characteristic(K, 2)
    assert not is_strictly_characteristic(K, 2)


def test_strictness_precondition():
    V = standard_N0(3, 1)
    K = Subspace.span(V, F9, [(F9.one(), F9.zero())])
    with pytest.raises(ValueError):
        is_strictly_characteristic(K, 1)


def test_enumerate_characteristic_counts():
    V = standard_N0(3, 1)
    assert len(enumerate_characteristic(V, F3, 1)) == 0
    assert len(enumerate_characteristic(V, F9, 1)) == 2
    assert len(enumerate_characteristic(V, F27, 1)) == 0


def test_no_characteristic_over_odd_extensions():
    for p, sigma0 in [(3, 1), (3, 2), (5, 1), (5, 2)]:
        V = standard_N0(p, sigma0)
        for n in (1, 3):
            assert enumerate_characteristic(V, make_field(p, n), sigma0) == []


def test_strict_implies_characteristic_and_wrapper_flags():
    # over GF(p^2) phi^2 fixes every subspace, so the chain stops at sigma0+1
    # and no sigma0=2 point is strict; strict points appear over GF(p^4)
    V = standard_N0(3, 2)
    pts = enumerate_characteristic(V, F9, 2)
    assert len(pts) == 20
    assert all(not K.strict for K in pts)
    F81 = make_field(3, 4)
    pts81 = enumerate_characteristic(V, F81, 2)
    assert any(K.strict for K in pts81)
    assert any(not K.strict for K in pts81)
    for K in pts81[:5]:
        assert is_characteristic(K.subspace, 2)
        assert K.strict == is_strictly_characteristic(K.subspace, 2)


def test_wrapper_rejects_non_characteristic():
    V = standard_N0(3, 1)
    K = Subspace.span(V, F9, [(F9.one(), F9.zero())])
    with pytest.raises(ValueError):
        CharacteristicSubspace(K, 1)
