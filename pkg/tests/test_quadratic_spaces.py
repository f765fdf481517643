import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ssk3.errors import GuardExceeded
from ssk3.fields import make_field
from ssk3.quadratic_spaces import (
    BilinearSpace,
    Subspace,
    enumerate_totally_isotropic,
    extend_field,
    intersect_subspaces,
    is_neutral,
    is_totally_isotropic,
    orthogonal_complement,
    smallest_nonresidue,
    standard_N0,
    sum_subspaces,
    witt_index,
)

F3 = make_field(3, 1)
F9 = make_field(3, 2)

HYPERBOLIC = BilinearSpace(F3, 2, ((0, 1), (1, 0)))


def fullscan_totally_isotropic(space, fld, r):
    """Oracle: every rank-r RREF matrix over fld^dim, filtered by total isotropy."""
    d = space.dim
    if r == 0:
        return [Subspace.zero(space, fld)]
    elems = list(fld.elements())
    out = []
    for pivots in itertools.combinations(range(d), r):
        free = [[c for c in range(pivots[t] + 1, d) if c not in pivots] for t in range(r)]
        slots = [(t, c) for t in range(r) for c in free[t]]
        for assign in itertools.product(elems, repeat=len(slots)):
            rows = []
            for t in range(r):
                row = [fld.zero()] * d
                row[pivots[t]] = fld.one()
                rows.append(row)
            for (t, c), val in zip(slots, assign):
                rows[t][c] = val
            rows = [tuple(row) for row in rows]
            ok = all(space.inner(rows[i], rows[j]).is_zero()
                     for i in range(r) for j in range(i, r))
            if ok:
                out.append(Subspace(space, fld, tuple(rows)))
    out.sort(key=Subspace.sort_key)
    return out


def test_standard_N0_small_cases():
    A3 = standard_N0(3, 1)
    assert A3.dim == 2 and A3.gram == ((1, 0), (0, 1))
    # oracle: anisotropic over GF(3)
    for x in range(3):
        for y in range(3):
            if (x, y) != (0, 0):
                assert (x * x + y * y) % 3 != 0
    A5 = standard_N0(5, 1)
    assert A5.gram == ((1, 0), (0, 3))  # diag(1, -2), delta = 2
    assert smallest_nonresidue(5) == 2
    assert standard_N0(3, 2).dim == 4
    with pytest.raises(ValueError):
        standard_N0(3, 0)


def test_witt_index_examples():
    assert witt_index(HYPERBOLIC, F3) == 1
    assert is_neutral(HYPERBOLIC, F3)
    A = standard_N0(3, 1)
    assert witt_index(A, F3) == 0
    assert witt_index(A, F9) == 1  # neutral only after the quadratic extension
    assert is_neutral(A, F9)


@pytest.mark.parametrize("p", (3, 5, 7))
@pytest.mark.parametrize("sigma0", (1, 2, 3))
def test_standard_N0_witt_indices(p, sigma0):
    V = standard_N0(p, sigma0)
    assert witt_index(V, make_field(p, 1)) == sigma0 - 1
    assert witt_index(V, make_field(p, 2)) == sigma0


def test_enumerate_lines_of_hyperbolic_plane():
    subs = enumerate_totally_isotropic(HYPERBOLIC, F3, 1)
    assert len(subs) == 2
    oracle = fullscan_totally_isotropic(HYPERBOLIC, F3, 1)
    assert subs == oracle


def test_enumerate_lines_of_anisotropic_plane():
    assert enumerate_totally_isotropic(standard_N0(3, 1), F3, 1) == []


def test_enumerate_r_zero():
    subs = enumerate_totally_isotropic(HYPERBOLIC, F3, 0)
    assert len(subs) == 1 and subs[0].dim == 0


@pytest.mark.parametrize("fld,r", [(F3, 1), (F3, 2), (F9, 1), (F9, 2)])
def test_enumerate_matches_fullscan_oracle(fld, r):
    V = standard_N0(3, 2)
    assert enumerate_totally_isotropic(V, fld, r) == fullscan_totally_isotropic(V, fld, r)


def test_enumeration_is_deterministic_and_canonical():
    V = standard_N0(3, 2)
    a = enumerate_totally_isotropic(V, F9, 2)
    b = enumerate_totally_isotropic(V, F9, 2)
    assert a == b
    keys = [K.sort_key() for K in a]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_enumeration_guard():
    V = standard_N0(3, 2)
    with pytest.raises(GuardExceeded):
        enumerate_totally_isotropic(V, F9, 2, cap=5)


def random_subspace(space, fld, seed_rows):
    rows = []
    for entries in seed_rows:
        rows.append(tuple(fld.from_code(e % fld.q) for e in entries))
    return Subspace.span(space, fld, rows)


subspace_seeds = st.lists(
    st.lists(st.integers(0, 80), min_size=4, max_size=4), min_size=0, max_size=3)


@settings(max_examples=60, deadline=None)
@given(subspace_seeds, subspace_seeds)
def test_grassmann_identity(s1, s2):
    V = standard_N0(3, 2)
    K1 = random_subspace(V, F9, s1)
    K2 = random_subspace(V, F9, s2)
    s = sum_subspaces(K1, K2)
    i = intersect_subspaces(K1, K2)
    assert s.dim + i.dim == K1.dim + K2.dim
    assert intersect_subspaces(K1, K1) == K1


@settings(max_examples=60, deadline=None)
@given(subspace_seeds)
def test_double_orthogonal_complement(s1):
    V = standard_N0(3, 2)
    K = random_subspace(V, F9, s1)
    perp = orthogonal_complement(K)
    assert perp.dim == V.dim - K.dim
    assert orthogonal_complement(perp) == K


@settings(max_examples=40, deadline=None)
@given(subspace_seeds, subspace_seeds)
def test_canonical_equality_iff_mutual_containment(s1, s2):
    V = standard_N0(3, 2)
    K1 = random_subspace(V, F9, s1)
    K2 = random_subspace(V, F9, s2)
    mutual = (K1 <= K2) and (K2 <= K1)
    assert mutual == (K1.basis == K2.basis)


def test_complement_of_isotropic_line_in_hyperbolic_plane():
    e = (F3.one(), F3.zero())
    K = Subspace.span(HYPERBOLIC, F3, [e])
    perp = orthogonal_complement(K)
    assert perp == K  # an isotropic line is its own pairing kernel direction


def test_sum_of_the_two_isotropic_lines_is_everything():
    lines = enumerate_totally_isotropic(HYPERBOLIC, F3, 1)
    total = sum_subspaces(lines[0], lines[1])
    assert total.dim == 2


def test_extend_field_preserves_membership():
    V = standard_N0(3, 2)
    K = random_subspace(V, F3, [[1, 2, 0, 1], [0, 1, 1, 1]])
    big = extend_field(K, F9)
    assert big.dim == K.dim
    for row in K.basis:
        lifted = tuple(F9.from_int(e.coeffs[0]) for e in row)
        assert big.contains(lifted)


def test_mismatched_operands_rejected():
    V = standard_N0(3, 2)
    K1 = Subspace.zero(V, F3)
    K2 = Subspace.zero(V, F9)
    with pytest.raises(ValueError):
        sum_subspaces(K1, K2)


def test_total_isotropy_predicate():
    lines = enumerate_totally_isotropic(HYPERBOLIC, F3, 1)
    assert all(is_totally_isotropic(K) for K in lines)
    non_iso = Subspace.span(HYPERBOLIC, F3, [(F3.one(), F3.one())])
    assert not is_totally_isotropic(non_iso)
