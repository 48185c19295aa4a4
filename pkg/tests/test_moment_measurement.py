"""Cross-product observable, exact Dicke moments, and the noise model."""

from fractions import Fraction

import numpy as np
import pytest

from diffmag.spin_core import TwoWellSpace, collective_operator, commutator
from diffmag.states import dicke_state, flipped_dicke_state, ghz_state
from diffmag.moment_measurement import (
    PartitionNoiseModel,
    dicke_moments,
    error_propagation,
    moment_observable,
    moment_precision_closed_form,
    moment_slope_closed_form,
    moment_sweep,
    moment_variance_closed_form,
    precision_ratio,
)
from diffmag.qfi import closed_form_bound_b1


def test_observable_commutes_with_homogeneous_generator():
    for na, nb in [(2, 2), (2, 4), (3, 3), (4, 4)]:
        space = TwoWellSpace(na, nb)
        matrix = moment_observable(space).matrix
        assert np.allclose(matrix, matrix.conj().T, atol=1e-12)
        for axis in ("y",):
            jy_plus = collective_operator(space, axis, "plus").matrix
            assert np.max(np.abs(commutator(matrix, jy_plus))) < 1e-12


def test_dicke_moments_match_dense_expectations():
    for na, nb in [(2, 2), (2, 4), (4, 4)]:
        space = TwoWellSpace(na, nb)
        for flipped in (True, False):
            state = flipped_dicke_state(space) if flipped else dicke_state(space)
            psi = state.amplitudes
            moments = dicke_moments(na, nb, flipped=flipped)

            def expval(op):
                return float(np.real(np.vdot(psi, op @ psi)))

            za = collective_operator(space, "z", "a").matrix
            zb = collective_operator(space, "z", "b").matrix
            xa = collective_operator(space, "x", "a").matrix
            xb = collective_operator(space, "x", "b").matrix

            assert abs(expval(za @ za) - float(moments.jz2)) < 1e-12
            assert abs(expval(za @ zb) - float(moments.jza_jzb)) < 1e-12
            assert abs(expval(xa @ xa) - float(moments.jl2_a)) < 1e-12
            assert abs(expval(xb @ xb) - float(moments.jl2_b)) < 1e-12
            assert abs(expval(xa @ xb) - float(moments.jla_jlb)) < 1e-12
            assert (
                abs(expval(za @ za @ zb @ zb) - float(moments.jz4_cross)) < 1e-12
            )
            assert (
                abs(expval(xa @ xa @ zb @ zb) - float(moments.jx2a_jz2b)) < 1e-12
            )
            assert (
                abs(expval(za @ za @ xb @ xb) - float(moments.jz2a_jx2b)) < 1e-12
            )

            m = moment_observable(space).matrix
            assert abs(expval(m) - float(moments.m_mean)) < 1e-12
            assert (
                abs(expval(m @ m) - expval(m) ** 2 - float(moments.m_var)) < 1e-12
            )


def test_moment_closed_forms_reference_values():
    assert moment_precision_closed_form(4, 4) == Fraction(16000, 784)
    assert moment_precision_closed_form(4, 4) == Fraction(1000, 49)
    assert moment_precision_closed_form(2, 2) == Fraction(12)
    assert moment_slope_closed_form(4, 4) == Fraction(40, 7)
    assert moment_slope_closed_form(2, 2) == Fraction(2)
    assert moment_variance_closed_form(4, 4) == Fraction(8, 5)
    assert moment_variance_closed_form(2, 2) == Fraction(1, 3)
    assert precision_ratio(4, 4) == Fraction(25, 49)
    assert precision_ratio(2, 2) == Fraction(1)
    assert precision_ratio(2, 4) == Fraction(4, 5)


def test_closed_forms_agree_with_dense_error_propagation():
    for na, nb in [(2, 2), (2, 4), (4, 4)]:
        space = TwoWellSpace(na, nb)
        state = flipped_dicke_state(space)
        observable = moment_observable(space).matrix
        gradient = collective_operator(space, "y", "minus").matrix
        report = error_propagation(state, observable, gradient)
        assert abs(report.slope - float(moment_slope_closed_form(na, nb))) < 1e-12
        assert (
            abs(report.variance - float(moment_variance_closed_form(na, nb)))
            < 1e-12
        )
        assert (
            abs(report.precision - float(moment_precision_closed_form(na, nb)))
            < 1e-10
        )


def test_precision_never_exceeds_quantum_bound():
    for na in range(2, 7):
        for nb in range(na, 7):
            if (na + nb) % 2 or na + nb <= 3:
                continue
            ratio = precision_ratio(na, nb)
            assert ratio <= 1
            assert moment_precision_closed_form(na, nb) <= closed_form_bound_b1(
                na, nb
            )


def test_partition_noise_model():
    clean = PartitionNoiseModel(alpha=Fraction(0))
    assert clean.ratio(8) == Fraction(25, 49)
    assert clean.ratio_limit == Fraction(1, 3)
    noisy = PartitionNoiseModel(alpha=Fraction(1))
    assert noisy.ratio_limit == Fraction(1, 2)
    assert abs(float(clean.ratio(400)) - Fraction(1, 3)) < 0.01
    assert abs(float(noisy.ratio(400)) - Fraction(1, 2)) < 0.01
    with pytest.raises(ValueError):
        PartitionNoiseModel(alpha=Fraction(-1, 2))
    with pytest.raises(ValueError):
        clean.ratio(2)


def test_moment_sweep_rows():
    rows = moment_sweep(12)
    assert [(r["na"], r["nb"]) for r in rows] == [(2, 2), (3, 3), (4, 4), (5, 5), (6, 6)]
    for row in rows:
        assert row["ratio"] == row["precision"] / row["bound"]
        assert row["ratio"] <= 1


def test_insensitive_observable_raises():
    space = TwoWellSpace(2, 2)
    state = ghz_state(space)
    observable = collective_operator(space, "z", "plus").matrix
    gradient = collective_operator(space, "y", "minus").matrix
    with pytest.raises(ValueError, match="insensitive"):
        error_propagation(state, observable @ observable, gradient)


def test_moments_need_even_totals_and_enough_particles():
    with pytest.raises(ValueError):
        dicke_moments(2, 3)
    with pytest.raises(ValueError):
        dicke_moments(1, 1)
    with pytest.raises(ValueError):
        moment_precision_closed_form(1, 1)
