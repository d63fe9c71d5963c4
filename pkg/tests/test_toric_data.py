from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from toric_periods import (BadShape, DimensionTooLarge, KernelBasis, NegativeEntry, RankDeficient,
                           build_toric_data, integrability_check, kernel_basis, validate_charge_matrix)
from toric_periods import _exact


def test_validate_examples():
    m = validate_charge_matrix([[1, 1]])
    assert (m.n, m.N) == (1, 2)
    m = validate_charge_matrix([[1, 1, 1, 0], [0, 0, 1, 1]])
    assert (m.n, m.N) == (2, 4)
    with pytest.raises(RankDeficient):
        validate_charge_matrix([[1, 1], [2, 2]])
    with pytest.raises(NegativeEntry):
        validate_charge_matrix([[1, -1, 0]])
    with pytest.raises(BadShape):
        validate_charge_matrix([[1], [1]])
    with pytest.raises(BadShape):
        validate_charge_matrix([[1, 0], [1]])
    with pytest.raises(BadShape):
        validate_charge_matrix([[1.5, 1]])


def test_square_matrix_allowed():
    # N == n is a point-like reduction with an empty kernel
    m = validate_charge_matrix([[1]])
    assert kernel_basis(m).rows == ()


@pytest.mark.parametrize("m, expected", [
    ([[1, 1]], [(1, -1)]),
    ([[1, 1, 1]], [(1, 0, -1), (0, 1, -1)]),
    ([[1, 1, 0, 0], [0, 0, 1, 1]], [(1, -1, 0, 0), (0, 0, 1, -1)]),
    ([[1, 0]], [(0, 1)]),
])
def test_kernel_examples(m, expected):
    assert list(kernel_basis(validate_charge_matrix(m)).rows) == expected


def _in_lattice(v, basis):
    """Oracle: v is an integer combination of the basis rows."""
    if not basis:
        return not any(v)
    k = len(basis)
    gram = _exact.gram(basis)
    rhs = [sum(b[i] * v[i] for i in range(len(v))) for b in basis]
    coeffs = _exact.solve(gram, rhs)
    recon = [sum(coeffs[a] * basis[a][i] for a in range(k)) for i in range(len(v))]
    return recon == list(v) and all(c.denominator == 1 for c in coeffs)


charge_matrices = st.integers(1, 3).flatmap(
    lambda n: st.integers(n + 1, 6).flatmap(
        lambda N: st.lists(st.lists(st.integers(0, 3), min_size=N, max_size=N), min_size=n, max_size=n)))


@given(charge_matrices)
def test_kernel_properties(raw):
    assume(_exact.rank(raw) == len(raw))
    m = validate_charge_matrix(raw)
    V = kernel_basis(m)
    assert V.dim == m.N - m.n
    M = np.array(m.entries, dtype=object)
    assert not (M.dot(np.array(V.rows, dtype=object).T)).any()
    for row in V.rows:
        assert np.gcd.reduce(np.abs(row)) == 1
    assert _exact.rank(V.rows) == V.dim
    assert kernel_basis(m) == V


@given(charge_matrices)
def test_kernel_is_saturated(raw):
    """Every small integer kernel vector lies in the lattice spanned by the basis."""
    assume(_exact.rank(raw) == len(raw) and len(raw[0]) <= 4)
    m = validate_charge_matrix(raw)
    V = kernel_basis(m)
    for v in product(range(-2, 3), repeat=m.N):
        if all(sum(r[i] * v[i] for i in range(m.N)) == 0 for r in m.entries):
            assert _in_lattice(v, V.rows)


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_projective_kernel_matches_differences(ell):
    N = ell + 1
    V = kernel_basis(validate_charge_matrix([[1] * N]))
    diffs = [tuple(int(i == k) - int(i == ell) for i in range(N)) for k in range(ell)]
    for d in diffs:
        assert _in_lattice(d, V.rows)
    for r in V.rows:
        assert _in_lattice(r, diffs)


def test_integrability_examples():
    assert integrability_check(KernelBasis(((1, -1),), 2))
    assert not integrability_check(KernelBasis(((0, 1),), 2))
    assert integrability_check(KernelBasis(((1, 0, -1), (0, 1, -1)), 3))
    assert integrability_check(KernelBasis((), 1))
    with pytest.raises(DimensionTooLarge):
        integrability_check(kernel_basis(validate_charge_matrix([[1] * 6])))


@given(charge_matrices)
def test_integrability_matches_positive_row_combination(raw):
    """For nonnegative m the kernel meets the nonnegative orthant only at 0
    exactly when some row combination is strictly positive, i.e. when no
    column of m vanishes."""
    assume(_exact.rank(raw) == len(raw))
    m = validate_charge_matrix(raw)
    V = kernel_basis(m)
    assume(V.dim <= 4)
    no_zero_column = all(any(m.entries[a][j] for a in range(m.n)) for j in range(m.N))
    assert integrability_check(V) == no_zero_column


def test_build_toric_data(p2):
    assert p2.jacobian == 1.0
    assert p2.integrable
    assert not build_toric_data([[1, 0]]).integrable
