"""Probe states for two-well gradient sensing and their unitary evolution.

The four reference states are the two-well Dicke state (total spin N/2,
projection 0, split across the wells via its Schmidt decomposition), its
variant with well b spin-flipped about z, the two-well GHZ state, and the
GHZ variant with well b inverted.  Schmidt weights are kept as exact
rationals so closed-form moments can be checked without rounding noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .spin_core import AXES, TwoWellSpace, collective_operator, local_rotation
from .tolerances import UNITARITY_TOL

# i^k for integer k: exp(i pi m) with m = two_m / 2 is i^(two_m), exactly.
_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class StateVector:
    """A pure state on a TwoWellSpace; amplitudes follow the space's basis order."""

    space: TwoWellSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.space.dim,):
            raise ValueError("amplitude vector does not match space dimension")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > UNITARITY_TOL * self.space.dim:
            raise ValueError(f"state is not normalized (norm {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, space: TwoWellSpace, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(space, amps / norm)

    def expectation(self, op: np.ndarray) -> float:
        """<psi|op|psi> for Hermitian op (imaginary part discarded)."""
        return float(np.real(np.vdot(self.amplitudes, op @ self.amplitudes)))

    def raw_expectation(self, op: np.ndarray) -> complex:
        return complex(np.vdot(self.amplitudes, op @ self.amplitudes))

    def variance(self, op: np.ndarray) -> float:
        vec = op @ self.amplitudes
        mean = float(np.real(np.vdot(self.amplitudes, vec)))
        return float(np.real(np.vdot(vec, vec))) - mean * mean

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def same_state(self, other: "StateVector", tol: float = 1e-10) -> bool:
        """Equality up to a global phase."""
        return abs(abs(self.overlap(other)) - 1.0) < tol


@dataclass(frozen=True)
class DickeCoefficients:
    """Schmidt weights of the two-well Dicke state, smaller well listed first.

    two_m runs over twice the Schmidt index, ascending; c holds the real
    coefficients and weight their exact squares (they sum to one exactly).
    """

    na: int
    nb: int
    two_m: tuple
    c: tuple
    weight: tuple

    def coefficient(self, two_m: int) -> float:
        try:
            return self.c[self.two_m.index(two_m)]
        except ValueError:
            return 0.0


def dicke_coefficients(na: int, nb: int) -> DickeCoefficients:
    """c_m = binom(N, N/2)^{-1/2} sqrt(binom(Na, Na/2+m) binom(Nb, Nb/2+m))."""
    if (na + nb) % 2:
        raise ValueError("the balanced Dicke state needs an even total particle number")
    if na > nb:
        na, nb = nb, na
    n = na + nb
    norm = Fraction(1, math.comb(n, n // 2))
    two_ms, cs, weights = [], [], []
    for two_m in range(-na, na + 1, 2):
        # Na/2 + m = (Na + 2m)/2; the step keeps it integral.
        ka = (na + two_m) // 2
        kb = (nb + two_m) // 2
        w = norm * math.comb(na, ka) * math.comb(nb, kb)
        two_ms.append(two_m)
        weights.append(w)
        cs.append(math.sqrt(w))
    total = sum(weights)
    if total != 1:
        raise AssertionError(f"Schmidt weights sum to {total}, not 1")
    return DickeCoefficients(na=na, nb=nb, two_m=tuple(two_ms), c=tuple(cs), weight=tuple(weights))


def dicke_state(space: TwoWellSpace) -> StateVector:
    """Two-well Dicke state: sum_m c_m |m>_a |-m>_b."""
    coeff = dicke_coefficients(space.na, space.nb)
    amps = np.zeros(space.dim, dtype=complex)
    for two_m, c in zip(coeff.two_m, coeff.c):
        amps[space.basis_index(two_m, -two_m)] = c
    return StateVector(space, amps)


def flipped_dicke_state(space: TwoWellSpace) -> StateVector:
    """Dicke state with well b rotated by pi about z: amplitudes pick up e^{i pi m}."""
    coeff = dicke_coefficients(space.na, space.nb)
    amps = np.zeros(space.dim, dtype=complex)
    for two_m, c in zip(coeff.two_m, coeff.c):
        amps[space.basis_index(two_m, -two_m)] = c * _I_POW[two_m % 4]
    return StateVector(space, amps)


def ghz_state(space: TwoWellSpace) -> StateVector:
    """(|j_a, j_b> + |-j_a, -j_b>) / sqrt(2)."""
    amps = np.zeros(space.dim, dtype=complex)
    amps[space.basis_index(space.na, space.nb)] = 1.0
    amps[space.basis_index(-space.na, -space.nb)] = 1.0
    return StateVector.normalized(space, amps)


def flipped_ghz_state(space: TwoWellSpace) -> StateVector:
    """(|j_a, -j_b> + |-j_a, j_b>) / sqrt(2): wells polarized oppositely."""
    amps = np.zeros(space.dim, dtype=complex)
    amps[space.basis_index(space.na, -space.nb)] = 1.0
    amps[space.basis_index(-space.na, space.nb)] = 1.0
    return StateVector.normalized(space, amps)


def product_dicke_state(space: TwoWellSpace) -> StateVector:
    """|N_a/2, 0>_a |N_b/2, 0>_b — the best product-state probe for the gradient."""
    if space.na % 2 or space.nb % 2:
        raise ValueError("local zero-projection Dicke states need even well sizes")
    amps = np.zeros(space.dim, dtype=complex)
    amps[space.basis_index(0, 0)] = 1.0
    return StateVector(space, amps)


NAMED_STATES = {
    "dicke": dicke_state,
    "flipped-dicke": flipped_dicke_state,
    "ghz": ghz_state,
    "flipped-ghz": flipped_ghz_state,
    "product-dicke": product_dicke_state,
}


@dataclass(frozen=True)
class EvolutionParams:
    """Common field b0 and gradient b1 imprinted along one axis."""

    axis: str
    b0: float
    b1: float

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}")


def evolution_operator(space: TwoWellSpace, params: EvolutionParams) -> np.ndarray:
    """U = exp(-i [b0 J_{l,+} + b1 J_{l,-}]).

    The two wells commute, so U factorizes into local rotations by
    b0 + b1 (well a) and b0 - b1 (well b).
    """
    ua = local_rotation(space.spin_a, params.axis, params.b0 + params.b1)
    ub = local_rotation(space.spin_b, params.axis, params.b0 - params.b1)
    return np.kron(ua, ub)


def evolve(state: StateVector, params: EvolutionParams) -> StateVector:
    u = evolution_operator(state.space, params)
    return StateVector(state.space, u @ state.amplitudes)


def haar_random_state(space: TwoWellSpace, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state on the full two-well product space."""
    amps = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return StateVector.normalized(space, amps)


def random_product_state(space: TwoWellSpace, rng: np.random.Generator) -> StateVector:
    """Tensor product of Haar-random local states (a separable probe)."""
    va = rng.standard_normal(space.spin_a.dim) + 1j * rng.standard_normal(space.spin_a.dim)
    vb = rng.standard_normal(space.spin_b.dim) + 1j * rng.standard_normal(space.spin_b.dim)
    return StateVector.normalized(space, np.kron(va, vb))


def total_spin_squared(space: TwoWellSpace) -> np.ndarray:
    """J^2 = sum_l (J_{l,a} + J_{l,b})^2."""
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for axis in AXES:
        j = collective_operator(space, axis, "plus").matrix
        out += j @ j
    return out
