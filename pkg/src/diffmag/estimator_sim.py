"""Simulated projective measurements and the method-of-moments estimator.

Outcomes are drawn from the Born distribution of an observable: degenerate
eigenvalues are merged first (the projector onto a degenerate subspace is
well defined even though individual eigenvectors are not), which also makes
the sampled sequence reproducible bit for bit for a fixed seed.  The gradient
estimate divides the sample mean by the known zero-field slope; its quality
is summarized by the per-shot inverse variance slope^2 / s^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .moment_measurement import (
    moment_observable,
    moment_precision_closed_form,
    moment_slope_closed_form,
)
from .qfi import closed_form_bound_b1
from .spin_core import TwoWellSpace, assert_hermitian
from .states import EvolutionParams, StateVector, evolve, flipped_dicke_state
from .tolerances import ALGEBRA_TOL, OUTCOME_MERGE_TOL

RNG_NAME = "pcg64"  # numpy's default_rng bit generator


@dataclass(frozen=True)
class MeasurementModel:
    """Distinct eigenvalues of an observable and the eigenvector grouping."""

    values: np.ndarray
    eigenvectors: np.ndarray
    group_of: np.ndarray

    @classmethod
    def from_observable(cls, observable: np.ndarray) -> "MeasurementModel":
        assert_hermitian(observable, tol=ALGEBRA_TOL)
        vals, vecs = np.linalg.eigh(observable)
        group_of = np.zeros(len(vals), dtype=int)
        for i in range(1, len(vals)):
            group_of[i] = group_of[i - 1] + (vals[i] - vals[i - 1] > OUTCOME_MERGE_TOL)
        n_groups = group_of[-1] + 1
        values = np.array([vals[group_of == g].mean() for g in range(n_groups)])
        return cls(values=values, eigenvectors=vecs, group_of=group_of)

    def outcome_distribution(self, state: StateVector) -> np.ndarray:
        weights = np.abs(self.eigenvectors.conj().T @ state.amplitudes) ** 2
        probs = np.zeros(len(self.values))
        np.add.at(probs, self.group_of, weights)
        total = probs.sum()
        if abs(total - 1.0) > 1e-10:
            raise AssertionError(f"Born weights sum to {total!r}")
        return probs / total


def sample_outcomes(
    model: MeasurementModel, state: StateVector, nu: int, rng: np.random.Generator
) -> np.ndarray:
    if nu < 1:
        raise ValueError("need at least one measurement")
    probs = model.outcome_distribution(state)
    return rng.choice(model.values, size=nu, p=probs)


def estimate_b1(outcomes: np.ndarray, slope: float) -> float:
    """Method of moments: b1 = mean(M) / slope."""
    if abs(slope) < 1e-12:
        raise ValueError("the observable does not respond to the gradient")
    return float(np.mean(outcomes)) / slope


def derive_seeds(base_seed: int, count: int) -> list:
    """Independent child seeds (so repeated runs do not share randomness)."""
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(base_seed).spawn(count)]


@dataclass(frozen=True)
class EstimationRun:
    """One simulated estimation campaign on the flipped Dicke probe."""

    na: int
    nb: int
    b0: float
    b1: float
    nu: int
    seed: int
    rng: str
    slope: float
    estimate_mean: float
    sample_variance: float
    empirical_inv_var: float
    inv_var_se: float
    epf_prediction: float
    cr_bound: float

    def to_json_dict(self) -> dict:
        return {
            "na": self.na,
            "nb": self.nb,
            "b0": self.b0,
            "b1": self.b1,
            "nu": self.nu,
            "seed": self.seed,
            "rng": self.rng,
            "slope": self.slope,
            "estimate_mean": self.estimate_mean,
            "sample_variance": self.sample_variance,
            "empirical_inv_var": self.empirical_inv_var,
            "inv_var_se": self.inv_var_se,
            "epf_prediction": self.epf_prediction,
            "cr_bound": self.cr_bound,
        }


def run_estimation(space: TwoWellSpace, b0: float, b1: float, nu: int, seed: int) -> EstimationRun:
    """Prepare the flipped Dicke probe, evolve, measure M, estimate b1.

    The per-shot inverse variance slope^2 / s^2 approaches the moment-scheme
    prediction; the estimator variance itself is its inverse divided by nu.
    """
    probe = flipped_dicke_state(space)
    evolved = evolve(probe, EvolutionParams(axis="y", b0=b0, b1=b1))
    observable = moment_observable(space)
    model = MeasurementModel.from_observable(observable.matrix)
    rng = np.random.default_rng(seed)
    outcomes = sample_outcomes(model, evolved, nu, rng)
    slope = float(moment_slope_closed_form(space.na, space.nb))
    estimate = estimate_b1(outcomes, slope)
    s2 = float(np.var(outcomes, ddof=1))
    inv_var = slope * slope / s2
    # delta method: Var(s^2) ~ (m4 - s^4 (nu-3)/(nu-1)) / nu
    centered = outcomes - outcomes.mean()
    m4 = float(np.mean(centered**4))
    var_s2 = max(m4 - s2 * s2 * (nu - 3) / (nu - 1), 0.0) / nu
    inv_var_se = inv_var * np.sqrt(var_s2) / s2
    return EstimationRun(
        na=space.na,
        nb=space.nb,
        b0=b0,
        b1=b1,
        nu=nu,
        seed=seed,
        rng=RNG_NAME,
        slope=slope,
        estimate_mean=estimate,
        sample_variance=s2,
        empirical_inv_var=inv_var,
        inv_var_se=float(inv_var_se),
        epf_prediction=float(moment_precision_closed_form(space.na, space.nb)),
        cr_bound=float(closed_form_bound_b1(space.na, space.nb)),
    )
