"""Spin matrices, two-well embeddings, and rotations."""

import numpy as np
import pytest

from diffmag.spin_core import (
    AXES,
    Spin,
    TwoWellSpace,
    assert_hermitian,
    assert_unitary,
    collective_operator,
    commutator,
    hermiticity_residual,
    local_rotation,
    rotation_operator,
    spin_matrices,
)

_LEVI = {("x", "y"): "z", ("y", "z"): "x", ("z", "x"): "y"}


@pytest.mark.parametrize("two_j", [1, 2, 3, 4, 7, 8])
def test_su2_commutators(two_j):
    mats = spin_matrices(Spin(two_j))
    for (a, b), c in _LEVI.items():
        lhs = commutator(mats.axis(a), mats.axis(b))
        rhs = 1j * mats.axis(c)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


@pytest.mark.parametrize("two_j", [1, 2, 5])
def test_casimir_and_spectra(two_j):
    spin = Spin(two_j)
    mats = spin_matrices(spin)
    j = spin.j
    casimir = mats.jx @ mats.jx + mats.jy @ mats.jy + mats.jz @ mats.jz
    assert np.max(np.abs(casimir - j * (j + 1) * np.eye(spin.dim))) < 1e-12
    for axis in AXES:
        m = mats.axis(axis)
        assert hermiticity_residual(m) < 1e-12
        vals = np.sort(np.linalg.eigvalsh(m))
        assert np.max(np.abs(vals - np.sort(spin.m_values))) < 1e-10


def test_spin_rejects_negative():
    with pytest.raises(ValueError):
        Spin(-1)


def test_space_dimensions_and_indexing():
    space = TwoWellSpace(2, 4)
    assert space.dim == 15
    assert space.n_total == 6
    # the index runs over m_a descending (outer) then m_b descending (inner)
    assert space.basis_index(2, 4) == 0
    assert space.basis_index(2, 2) == 1
    assert space.basis_index(0, 4) == 5
    assert space.basis_index(-2, -4) == 14
    with pytest.raises(ValueError):
        space.basis_index(3, 0)
    with pytest.raises(ValueError):
        space.basis_index(0, 6)


def test_collective_operators_combine_wells():
    space = TwoWellSpace(2, 4)
    for axis in AXES:
        ja = collective_operator(space, axis, "a").matrix
        jb = collective_operator(space, axis, "b").matrix
        jp = collective_operator(space, axis, "plus").matrix
        jm = collective_operator(space, axis, "minus").matrix
        assert np.max(np.abs(jp - (ja + jb))) < 1e-12
        assert np.max(np.abs(jm - (ja - jb))) < 1e-12
        # different wells commute
        other = AXES[(AXES.index(axis) + 1) % 3]
        jb_other = collective_operator(space, other, "b").matrix
        assert np.max(np.abs(commutator(ja, jb_other))) < 1e-12
        assert_hermitian(ja)
        assert_hermitian(jb)


def test_collective_su2_per_well():
    space = TwoWellSpace(3, 3)
    for well in ("a", "b"):
        for (a, b), c in _LEVI.items():
            lhs = commutator(
                collective_operator(space, a, well).matrix,
                collective_operator(space, b, well).matrix,
            )
            rhs = 1j * collective_operator(space, c, well).matrix
            assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_rotations_are_unitary_and_compose():
    rng = np.random.default_rng(1234)
    space = TwoWellSpace(2, 2)
    for _ in range(25):
        axis = AXES[rng.integers(3)]
        well = ("a", "b", "both")[rng.integers(3)]
        alpha, beta = rng.normal(size=2)
        ua = rotation_operator(space, axis, well, alpha)
        ub = rotation_operator(space, axis, well, beta)
        uab = rotation_operator(space, axis, well, alpha + beta)
        assert_unitary(ua)
        assert np.max(np.abs(ua @ ub - uab)) < 1e-10


def test_local_rotation_matches_expm_series():
    spin = Spin(3)
    jy = spin_matrices(spin).jy
    angle = 0.731
    u = local_rotation(spin, "y", angle)
    # reference by scaling-and-squaring of the series
    acc = np.eye(spin.dim, dtype=complex)
    term = np.eye(spin.dim, dtype=complex)
    for k in range(1, 40):
        term = term @ (-1j * angle * jy) / k
        acc = acc + term
    assert np.max(np.abs(u - acc)) < 1e-12


def test_rotation_generator_derivative():
    space = TwoWellSpace(2, 2)
    eps = 1e-6
    for axis in AXES:
        u_plus = rotation_operator(space, axis, "both", eps)
        u_minus = rotation_operator(space, axis, "both", -eps)
        derivative = (u_plus - u_minus) / (2 * eps)
        generator = -1j * collective_operator(space, axis, "plus").matrix
        assert np.max(np.abs(derivative - generator)) < 1e-6


def test_assert_unitary_rejects_non_unitary():
    with pytest.raises(ValueError):
        assert_unitary(np.diag([1.0, 2.0]))
    with pytest.raises(ValueError):
        assert_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
