"""Quantum Fisher information: pure/mixed kernels, matrices, closed forms."""

from fractions import Fraction

import numpy as np
import pytest

from diffmag.spin_core import TwoWellSpace, collective_operator
from diffmag.states import (
    NAMED_STATES,
    dicke_state,
    flipped_dicke_state,
    ghz_state,
    haar_random_state,
)
from diffmag.qfi import (
    MixedState,
    closed_form_bound_b1,
    dicke_gradient_z_qfi,
    dicke_transverse_qfi,
    even_split_bound_b1,
    flipped_dicke_qfi_blocks,
    flipped_dicke_transverse_qfi,
    precision_bounds,
    product_dicke_bound_b1,
    qfi_extended,
    qfi_matrix,
    qfi_mixed,
    qfi_pure,
    qfi_pure_extended,
    reference_qfi_blocks,
    reference_qfi_table,
    uneven_split_sweep,
)

_PAIRS = [(2, 2), (2, 4), (4, 4), (2, 6)]


def test_qfi_pure_is_four_variances():
    rng = np.random.default_rng(321)
    space = TwoWellSpace(2, 4)
    op = collective_operator(space, "y", "minus").matrix
    for _ in range(20):
        state = haar_random_state(space, rng)
        assert abs(qfi_pure(state, op) - 4 * state.variance(op)) < 1e-10


def test_qfi_mixed_matches_pure_on_rank_one():
    rng = np.random.default_rng(99)
    space = TwoWellSpace(2, 2)
    op = collective_operator(space, "x", "minus").matrix
    for _ in range(10):
        state = haar_random_state(space, rng)
        rho = MixedState.from_state_vector(state)
        assert abs(qfi_mixed(rho, op) - qfi_pure(state, op)) < 1e-8


def test_qfi_mixed_vanishes_on_maximally_mixed():
    space = TwoWellSpace(2, 2)
    rho = MixedState.from_density(space, np.eye(space.dim) / space.dim)
    op = collective_operator(space, "z", "minus").matrix
    assert abs(qfi_mixed(rho, op)) < 1e-12


def test_qfi_mixed_interpolates_two_level_closed_form():
    # rho = p |0><0| + (1-p) |1><1| probed by sigma_x/2-style coupling:
    # the only contributing pair gives F = (p - q)^2 / (p + q) * 4 |<0|A|1>|^2
    p = 0.8
    space = TwoWellSpace(1, 1)
    basis = np.eye(space.dim)
    rho = MixedState.from_density(
        space,
        p * np.outer(basis[0], basis[0]) + (1 - p) * np.outer(basis[1], basis[1]),
    )
    a = np.zeros((space.dim, space.dim), dtype=complex)
    a[0, 1] = a[1, 0] = 0.5
    expected = 2 * (2 * p - 1) ** 2 * (2 * 0.5**2)
    assert abs(qfi_mixed(rho, a) - expected) < 1e-12


def test_qfi_extended_symmetric_and_diagonal_consistent():
    rng = np.random.default_rng(17)
    space = TwoWellSpace(2, 2)
    ja = collective_operator(space, "y", "a").matrix
    jb = collective_operator(space, "y", "b").matrix
    for _ in range(5):
        state = haar_random_state(space, rng)
        rho = MixedState.from_state_vector(state)
        fab = qfi_extended(rho, ja, jb)
        fba = qfi_extended(rho, jb, ja)
        assert abs(fab - fba) < 1e-8
        assert abs(qfi_extended(rho, ja, ja) - qfi_mixed(rho, ja)) < 1e-8
        assert abs(qfi_pure_extended(state, ja, jb) - fab) < 1e-8


def test_qfi_matrix_entries_combine_block_qfis():
    rng = np.random.default_rng(7)
    space = TwoWellSpace(2, 4)
    for axis in ("x", "y", "z"):
        ja = collective_operator(space, axis, "a").matrix
        jb = collective_operator(space, axis, "b").matrix
        state = haar_random_state(space, rng)
        fa = qfi_pure(state, ja)
        fb = qfi_pure(state, jb)
        fab = qfi_pure_extended(state, ja, jb)
        mat = qfi_matrix(state, axis)
        assert abs(mat.f00 - (fa + 2 * fab + fb)) < 1e-8
        assert abs(mat.f01 - (fa - fb)) < 1e-8
        assert abs(mat.f11 - (fa - 2 * fab + fb)) < 1e-8
        # the two same-axis sums exhaust the local information
        assert abs((mat.f00 + mat.f11) - 2 * (fa + fb)) < 1e-8


def test_precision_bounds_schur_and_fallback():
    space = TwoWellSpace(4, 4)
    state = flipped_dicke_state(space)
    mat = qfi_matrix(state, "y")
    bounds = precision_bounds(mat)
    assert abs(bounds.bound_b1 - (mat.f11 - mat.f01**2 / mat.f00)) < 1e-10
    # the z-axis gradient generator annihilates the paired state: f00 = 0
    mat_z = qfi_matrix(state, "z")
    assert abs(mat_z.f00) < 1e-10
    bounds_z = precision_bounds(mat_z)
    assert abs(bounds_z.bound_b1 - mat_z.f11) < 1e-10


@pytest.mark.parametrize("na,nb", _PAIRS)
def test_reference_table_matches_dense_numerics(na, nb):
    space = TwoWellSpace(na, nb)
    table = reference_qfi_table(na, nb)
    worst = 0.0
    for (state_name, column), closed in table.items():
        state = NAMED_STATES[state_name](space)
        axis, comb = {"z+": ("z", "plus"), "x+": ("x", "plus"),
                      "z-": ("z", "minus"), "x-": ("x", "minus")}[column]
        op = collective_operator(space, axis, comb).matrix
        worst = max(worst, abs(qfi_pure(state, op) - float(closed)))
    assert worst < 1e-10


@pytest.mark.parametrize("na,nb", _PAIRS)
def test_reference_blocks_match_dense_numerics(na, nb):
    space = TwoWellSpace(na, nb)
    for state_name in ("dicke", "flipped-dicke", "ghz", "flipped-ghz"):
        state = NAMED_STATES[state_name](space)
        for axis in ("z", "x"):
            blocks = reference_qfi_blocks(state_name, na, nb, axis)
            if blocks is None:
                continue
            fa_c, fb_c, fab_c = blocks
            ja = collective_operator(space, axis, "a").matrix
            jb = collective_operator(space, axis, "b").matrix
            assert abs(qfi_pure(state, ja) - float(fa_c)) < 1e-10
            assert abs(qfi_pure(state, jb) - float(fb_c)) < 1e-10
            assert abs(qfi_pure_extended(state, ja, jb) - float(fab_c)) < 1e-10


def test_closed_form_bounds():
    assert closed_form_bound_b1(2, 2) == 12
    assert closed_form_bound_b1(3, 3) == 24
    assert closed_form_bound_b1(4, 4) == 40
    assert closed_form_bound_b1(2, 4) == Fraction(32, 3)
    assert closed_form_bound_b1(2, 6) == Fraction(90, 11)
    for n in (4, 6, 8, 12):
        assert even_split_bound_b1(n) == Fraction(n * (n + 2), 2)
        assert closed_form_bound_b1(n // 2, n // 2) == even_split_bound_b1(n)


def test_uneven_split_sweep_consistency():
    # adding 2m particles to well b starting from an even split of n
    for n in (4, 8, 12):
        for m in (0, 2, 4):
            direct = closed_form_bound_b1(n // 2, n // 2 + m)
            assert uneven_split_sweep(n, m) == direct
    # adding particles can only hurt
    values = [uneven_split_sweep(8, m) for m in (0, 2, 4, 6)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_flipped_dicke_closed_forms_align():
    for na, nb in _PAIRS:
        n = na + nb
        fa, fb, fab = flipped_dicke_qfi_blocks(na, nb)
        f11 = fa - 2 * fab + fb
        f00 = fa + 2 * fab + fb
        f01 = fa - fb
        assert f11 - f01 * f01 / f00 == closed_form_bound_b1(na, nb)
        # flipping turns the homogeneous drive into a gradient drive and back
        assert f11 == dicke_transverse_qfi(na, nb) == Fraction(n * (n + 2), 2)
        assert f00 == flipped_dicke_transverse_qfi(na, nb)
        assert dicke_gradient_z_qfi(na, nb) == Fraction(4 * na * nb, n - 1)


def test_product_dicke_bound():
    assert product_dicke_bound_b1(4, 4) == 24
    space = TwoWellSpace(4, 4)
    from diffmag.states import product_dicke_state

    state = product_dicke_state(space)
    mat = qfi_matrix(state, "y")
    bounds = precision_bounds(mat)
    assert abs(bounds.bound_b1 - float(product_dicke_bound_b1(4, 4))) < 1e-10


def test_table_requires_two_particles_per_well():
    with pytest.raises(ValueError):
        reference_qfi_table(1, 3)


def test_mixed_state_validation():
    space = TwoWellSpace(1, 1)
    pad = np.diag([0.0, 0.0])
    with pytest.raises(ValueError):
        MixedState.from_density(space, np.block([[np.diag([0.7, 0.7]), pad], [pad, pad]]))
    with pytest.raises(ValueError):
        MixedState.from_density(space, np.block([[np.diag([1.5, -0.5]), pad], [pad, pad]]))
