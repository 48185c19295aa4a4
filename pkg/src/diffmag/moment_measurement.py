"""Gradient estimation from the cross-product observable M = (J_a x J_b)_y.

M = J_{z,a} J_{x,b} - J_{x,a} J_{z,b} commutes with the homogeneous generator
J_{y,a} + J_{y,b} (it is the y component of a vector built from the two wells),
so its statistics are immune to the offset field.  On the flipped Dicke probe
its mean responds to the gradient with slope Na Nb (N+2) / (4(N-1)) while its
variance stays at Na Nb N (3N - 10 + (Na-Nb)^2) / (32 (N-3)(N-1)), giving the
error-propagation precision of slope^2 / variance.  All closed forms are exact
rationals; fourth moments require N > 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .qfi import closed_form_bound_b1
from .spin_core import TwoWellSpace, collective_operator, commutator, spin_matrices
from .states import StateVector
from .tolerances import ALGEBRA_TOL

_VARIANCE_FLOOR = 1e-14


@dataclass(frozen=True)
class MomentObservable:
    space: TwoWellSpace
    matrix: np.ndarray


def moment_observable(space: TwoWellSpace) -> MomentObservable:
    """M = J_{z,a} J_{x,b} - J_{x,a} J_{z,b}, checked to commute with J_{y,+}."""
    a = spin_matrices(space.spin_a)
    b = spin_matrices(space.spin_b)
    matrix = np.kron(a.jz, b.jx) - np.kron(a.jx, b.jz)
    jy_sum = collective_operator(space, "y", "plus").matrix
    residual = float(np.max(np.abs(commutator(jy_sum, matrix))))
    if residual > ALGEBRA_TOL:
        raise AssertionError(f"[J_y, M] residual {residual:.3e}")
    return MomentObservable(space=space, matrix=matrix)


@dataclass(frozen=True)
class EpfReport:
    """Error-propagation pieces for one observable and generator."""

    slope: float
    mean: float
    variance: float
    precision: float


def error_propagation(state: StateVector, observable: np.ndarray, generator: np.ndarray) -> EpfReport:
    """|d<M>/d theta|^2 / Var(M) for evolution exp(-i theta G)."""
    vec = observable @ state.amplitudes
    mean = float(np.real(np.vdot(state.amplitudes, vec)))
    variance = float(np.real(np.vdot(vec, vec))) - mean * mean
    scale = max(float(np.max(np.abs(observable))) ** 2, 1.0)
    if variance < _VARIANCE_FLOOR * scale:
        raise ValueError("insensitive observable: variance vanishes on this state")
    # d<M>/d theta at theta = 0 equals i<[G, M]>
    slope = float(np.real(1j * np.vdot(state.amplitudes, commutator(generator, observable) @ state.amplitudes)))
    return EpfReport(slope=slope, mean=mean, variance=variance, precision=slope * slope / variance)


# ---------------------------------------------------------------------------
# exact moments of the (flipped) Dicke probes
# ---------------------------------------------------------------------------


def _even_total(na: int, nb: int) -> int:
    n = na + nb
    if n % 2:
        raise ValueError("Dicke probes need an even total particle number")
    return n


def _fourth_moment_total(na: int, nb: int) -> int:
    n = _even_total(na, nb)
    if n <= 3:
        raise ValueError("fourth-moment closed forms need more than three particles")
    return n


@dataclass(frozen=True)
class DickeMoments:
    """Second and fourth moments of the Dicke probe (flipped or not), exact.

    jz2 is per well (<J_{z,a}^2> = <J_{z,b}^2>); jl2_a / jl2_b are the
    transverse second moments; jla_jlb changes sign under flipping while the
    z-axis correlators do not.  m_mean / m_var / slope describe the
    cross-product observable M.
    """

    na: int
    nb: int
    flipped: bool
    jz2: Fraction
    jza_jzb: Fraction
    jl2_a: Fraction
    jl2_b: Fraction
    jla_jlb: Fraction
    jz4_cross: Fraction
    jx2a_jz2b: Fraction
    jz2a_jx2b: Fraction
    zx_cross_sum: Fraction
    m_mean: Fraction
    m_var: Fraction
    slope: Fraction


def dicke_moments(na: int, nb: int, flipped: bool = True) -> DickeMoments:
    n = _fourth_moment_total(na, nb)
    sign = -1 if flipped else 1
    jz2 = Fraction(na * nb, 4 * (n - 1))
    jza_jzb = -jz2
    jl2_a = Fraction(na * (n * (na + 1) - 2), 8 * (n - 1))
    jl2_b = Fraction(nb * (n * (nb + 1) - 2), 8 * (n - 1))
    jla_jlb = sign * Fraction(na * nb * n, 8 * (n - 1))
    jz4_cross = Fraction(na * nb * (3 * na * nb - 2 * n), 16 * (n - 3) * (n - 1))
    # <J_{x,r}^2 J_{z,r'}^2> = Nr(Nr+2)/8 <J_z^2> - <J_{z,a}^2 J_{z,b}^2>/2
    jx2a_jz2b = Fraction(na * (na + 2), 8) * jz2 - jz4_cross / 2
    jz2a_jx2b = Fraction(nb * (nb + 2), 8) * jz2 - jz4_cross / 2
    zx_cross_sum = -sign * Fraction(na * nb * (na - 2) * (nb - 2) * n, 16 * (n - 3) * (n - 1))
    m_var = jx2a_jz2b + jz2a_jx2b - zx_cross_sum
    # slope = -2(<J_{x,a}J_{x,b}> + <J_{z,a}J_{z,b}>); the transverse correlator
    # carries the flip sign, the z one does not.
    slope = Fraction(na * nb, 4 * (n - 1)) * (2 - sign * n)
    return DickeMoments(
        na=na,
        nb=nb,
        flipped=flipped,
        jz2=jz2,
        jza_jzb=jza_jzb,
        jl2_a=jl2_a,
        jl2_b=jl2_b,
        jla_jlb=jla_jlb,
        jz4_cross=jz4_cross,
        jx2a_jz2b=jx2a_jz2b,
        jz2a_jx2b=jz2a_jx2b,
        zx_cross_sum=zx_cross_sum,
        m_mean=Fraction(0),
        m_var=m_var,
        slope=slope,
    )


def moment_variance_closed_form(na: int, nb: int) -> Fraction:
    """Var(M) on the flipped Dicke probe."""
    n = _fourth_moment_total(na, nb)
    return Fraction(na * nb * n * (3 * n - 10 + (na - nb) ** 2), 32 * (n - 3) * (n - 1))


def moment_slope_closed_form(na: int, nb: int) -> Fraction:
    """d<M>/db1 on the flipped Dicke probe."""
    n = _even_total(na, nb)
    return Fraction(na * nb * (n + 2), 4 * (n - 1))


def moment_precision_closed_form(na: int, nb: int) -> Fraction:
    """slope^2 / Var(M) = 2 Na Nb (N-3)(N+2)^2 / (N(N-1)(3N-10+(Na-Nb)^2))."""
    n = _fourth_moment_total(na, nb)
    return Fraction(
        2 * na * nb * (n - 3) * (n + 2) ** 2,
        n * (n - 1) * (3 * n - 10 + (na - nb) ** 2),
    )


def precision_ratio(na: int, nb: int) -> Fraction:
    """Moment-scheme precision over the quantum bound (1 at N=4, < 1 beyond)."""
    n = _fourth_moment_total(na, nb)
    ratio = moment_precision_closed_form(na, nb) / closed_form_bound_b1(na, nb)
    delta_sq = (na - nb) ** 2
    direct = Fraction(
        (n + 2) * (n - 3) * (n - 2 + delta_sq),
        (n - 1) * (n - 2) * (3 * n - 10 + delta_sq),
    )
    if ratio != direct:
        raise AssertionError("precision ratio disagrees with its reduced closed form")
    return ratio


@dataclass(frozen=True)
class PartitionNoiseModel:
    """Shot-to-shot imbalance noise: (Na - Nb)^2 averages to alpha N."""

    alpha: Fraction

    def __post_init__(self):
        alpha = Fraction(self.alpha)
        if alpha < 0:
            raise ValueError("the imbalance-noise strength cannot be negative")
        object.__setattr__(self, "alpha", alpha)

    def ratio(self, n: int) -> Fraction:
        """Precision ratio with the noisy imbalance substituted."""
        if n <= 3:
            raise ValueError("the ratio needs more than three particles")
        delta_sq = self.alpha * n
        return Fraction(
            (n + 2) * (n - 3) * ((n - 2) + delta_sq),
            (n - 1) * (n - 2) * ((3 * n - 10) + delta_sq),
        )

    @property
    def ratio_limit(self) -> Fraction:
        """Large-N limit (1 + alpha) / (3 + alpha)."""
        return (1 + self.alpha) / (3 + self.alpha)


def moment_sweep(max_n: int) -> list:
    """Even-split table rows (na, nb, precision, bound, ratio) up to max_n particles."""
    rows = []
    for half in range(2, max_n // 2 + 1):
        na = nb = half
        if na + nb <= 3:
            continue
        rows.append(
            {
                "na": na,
                "nb": nb,
                "precision": moment_precision_closed_form(na, nb),
                "bound": closed_form_bound_b1(na, nb),
                "ratio": precision_ratio(na, nb),
            }
        )
    return rows
