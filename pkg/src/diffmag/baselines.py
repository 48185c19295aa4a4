"""Reference precisions to compare the two-well probes against.

A single trapped cloud measured at two points models the conventional
gradiometer: each particle sits at position ±d with probabilities Na/N, Nb/N,
so the position spread is sigma^2 = d^2 4 Na Nb / N^2 and the gradient QFI of
spin-1/2 particles is bounded by 4 Na Nb / N (in units of d = 1).

The collective-variance witness
    Var(J_{x,a} + s_x J_{x,b}) + Var(J_{y,a} + s_y J_{y,b}) + Var(J_{z,a} + s_z J_{z,b})
      >= Na/2 + Nb/2
holds for all separable states; going below it certifies entanglement between
the wells' particles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .spin_core import AXES, TwoWellSpace, collective_operator
from .states import StateVector
from .tolerances import ALGEBRA_TOL


@dataclass(frozen=True)
class BecModel:
    """Two-point position model of a single-cloud gradiometer."""

    na: int
    nb: int
    d: float = 1.0

    def __post_init__(self):
        if self.na < 1 or self.nb < 1:
            raise ValueError("both occupation numbers must be positive")
        if self.d <= 0:
            raise ValueError("the probe separation must be positive")

    @property
    def n_total(self) -> int:
        return self.na + self.nb

    @property
    def mean_position(self) -> float:
        return self.d * (self.nb - self.na) / self.n_total

    @property
    def position_variance(self) -> float:
        return self.d * self.d * 4.0 * self.na * self.nb / self.n_total**2


def bec_gradient_bound(model: BecModel) -> float:
    """Best gradient inverse variance, sigma^2 N / d^2 = 4 Na Nb / N."""
    return model.position_variance * model.n_total / model.d**2


def bec_gradient_bound_exact(na: int, nb: int) -> Fraction:
    return Fraction(4 * na * nb, na + nb)


def bec_qfi_matrix(model: BecModel, var_jl: float, sum_local_var: float):
    """(F00, F01, F11) for the positioned-cloud model, d = 1 units.

    var_jl is the collective-spin variance of the internal state, sum_local_var
    the sum of single-particle second moments (N/4 for spin-1/2).  The
    off-diagonal entry 4 mu Var(J_l) vanishes for a centered cloud (mu = 0).
    """
    mu = model.mean_position / model.d
    sigma2 = model.position_variance / model.d**2
    f00 = 4.0 * var_jl
    f01 = 4.0 * mu * var_jl
    f11 = 4.0 * (sigma2 * sum_local_var + mu * mu * var_jl)
    return f00, f01, f11


def flipped_dicke_to_bec_ratio(n: int) -> Fraction:
    """Even split: flipped-Dicke bound N(N+2)/2 over the cloud bound N."""
    if n % 2:
        raise ValueError("the comparison assumes an even split")
    return Fraction(n + 2, 2)


@dataclass(frozen=True)
class WitnessReport:
    variance_sum: float
    bound: float
    signs: tuple

    @property
    def violated(self) -> bool:
        return self.variance_sum < self.bound - ALGEBRA_TOL

    @property
    def saturated(self) -> bool:
        return abs(self.variance_sum - self.bound) <= ALGEBRA_TOL


def three_variance_witness(state: StateVector, signs=(1, 1, 1)) -> WitnessReport:
    """Collective-variance entanglement witness with per-axis signs on well b."""
    if len(signs) != 3 or any(s not in (-1, 1) for s in signs):
        raise ValueError("signs must be three values ±1")
    space = state.space
    total = 0.0
    for axis, s in zip(AXES, signs):
        comb = "plus" if s == 1 else "minus"
        op = collective_operator(space, axis, comb).matrix
        total += state.variance(op)
    return WitnessReport(
        variance_sum=total,
        bound=space.na / 2.0 + space.nb / 2.0,
        signs=tuple(signs),
    )


def flipped_dicke_witness_sum(na: int, nb: int) -> Fraction:
    """All-plus witness sum on the flipped Dicke probe: N(N+(Na-Nb)^2-2)/(4(N-1))."""
    n = na + nb
    if n % 2:
        raise ValueError("Dicke probes need an even total particle number")
    return Fraction(n * (n + (na - nb) ** 2 - 2), 4 * (n - 1))
