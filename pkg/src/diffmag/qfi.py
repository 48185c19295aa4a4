"""Quantum Fisher information and two-parameter precision bounds.

For a pure state F[psi, A] = 4 Var(A); for a mixed state

    F[rho, A, B] = 2 sum_{l != m} (p_l - p_m)^2 / (p_l + p_m) <l|A|m><m|B|l>,

with eigenvalue pairs skipped once p_l + p_m drops below a cutoff.  The
two-parameter problem (common field b0, gradient b1 along axis l) has the
Fisher matrix

    [ F[J_{l,+}]            F[J_{l,a}] - F[J_{l,b}] ]
    [        .              F[J_{l,-}]              ]

and the gradient precision is bounded by the Schur complement
F11 - F01^2 / F00.  Closed forms for the reference states are kept as exact
rationals.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .spin_core import TwoWellSpace, assert_hermitian, collective_operator
from .states import StateVector, dicke_coefficients
from .tolerances import ALGEBRA_TOL, QFI_PAIR_CUTOFF


@dataclass(frozen=True)
class MixedState:
    """Eigendecomposition of a density matrix (probabilities descending)."""

    space: TwoWellSpace
    probabilities: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_density(cls, space: TwoWellSpace, rho: np.ndarray) -> "MixedState":
        assert_hermitian(rho, tol=ALGEBRA_TOL)
        trace = float(np.real(np.trace(rho)))
        if abs(trace - 1.0) > ALGEBRA_TOL * space.dim:
            raise ValueError(f"density matrix trace is {trace!r}, not 1")
        p, v = np.linalg.eigh(rho)
        if p[0] < -ALGEBRA_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {p[0]:.3e}")
        order = np.argsort(p)[::-1]
        return cls(space=space, probabilities=np.clip(p[order], 0.0, None), eigenvectors=v[:, order])

    @classmethod
    def from_state_vector(cls, state: StateVector) -> "MixedState":
        rho = np.outer(state.amplitudes, state.amplitudes.conj())
        return cls.from_density(state.space, rho)


def qfi_pure(state: StateVector, a: np.ndarray, check: bool = True) -> float:
    """F[psi, A] = 4 (<A^2> - <A>^2)."""
    if check:
        assert_hermitian(a, tol=ALGEBRA_TOL)
    return 4.0 * state.variance(a)


def qfi_pure_extended(state: StateVector, a: np.ndarray, b: np.ndarray) -> float:
    """F[psi, A, B] = 4 (Re<AB> - <A><B>), the pure-state covariance form."""
    va = a @ state.amplitudes
    vb = b @ state.amplitudes
    mean_a = float(np.real(np.vdot(state.amplitudes, va)))
    mean_b = float(np.real(np.vdot(state.amplitudes, vb)))
    return 4.0 * (float(np.real(np.vdot(va, vb))) - mean_a * mean_b)


def qfi_extended(rho: MixedState, a: np.ndarray, b: np.ndarray) -> float:
    """Two-operator Fisher information of a mixed state."""
    assert_hermitian(a, tol=ALGEBRA_TOL)
    assert_hermitian(b, tol=ALGEBRA_TOL)
    p = rho.probabilities
    v = rho.eigenvectors
    at = v.conj().T @ a @ v
    bt = at if b is a else v.conj().T @ b @ v
    psum = p[:, None] + p[None, :]
    pdif = p[:, None] - p[None, :]
    keep = psum >= QFI_PAIR_CUTOFF
    weights = np.zeros_like(psum)
    weights[keep] = 2.0 * pdif[keep] ** 2 / psum[keep]
    cross = at * bt.T  # (l,m) entry: <l|A|m><m|B|l>
    value = float(np.real(np.sum(weights * cross)))
    skipped = ~keep
    np.fill_diagonal(skipped, False)
    if np.any(skipped):
        bound = 2.0 * float(np.sum(psum[skipped] * np.abs(cross[skipped])))
        if bound > 1e-8:
            warnings.warn(
                f"eigenvalue-pair cutoff discarded terms bounded by {bound:.3e}",
                RuntimeWarning,
                stacklevel=2,
            )
    return value


def qfi_mixed(rho: MixedState, a: np.ndarray) -> float:
    return qfi_extended(rho, a, a)


@dataclass(frozen=True)
class QfiMatrix2:
    """2x2 Fisher matrix for (b0, b1); f01 couples the common and gradient modes."""

    f00: float
    f01: float
    f11: float

    def __post_init__(self):
        scale = max(abs(self.f00), abs(self.f11), 1.0)
        if self.f00 < -ALGEBRA_TOL * scale or self.f11 < -ALGEBRA_TOL * scale:
            raise ValueError("Fisher matrix has a negative diagonal")
        det = self.f00 * self.f11 - self.f01 * self.f01
        if det < -ALGEBRA_TOL * scale * scale:
            raise ValueError(f"Fisher matrix is not positive semidefinite (det {det:.3e})")

    @property
    def as_array(self) -> np.ndarray:
        return np.array([[self.f00, self.f01], [self.f01, self.f11]])


def qfi_matrix(state, axis: str) -> QfiMatrix2:
    """Fisher matrix of a (pure or mixed) state for fields along one axis."""
    if isinstance(state, StateVector):
        space = state.space
        ja = collective_operator(space, axis, "a").matrix
        jb = collective_operator(space, axis, "b").matrix
        fa = qfi_pure(state, ja, check=False)
        fb = qfi_pure(state, jb, check=False)
        fab = qfi_pure_extended(state, ja, jb)
    elif isinstance(state, MixedState):
        space = state.space
        ja = collective_operator(space, axis, "a").matrix
        jb = collective_operator(space, axis, "b").matrix
        fa = qfi_mixed(state, ja)
        fb = qfi_mixed(state, jb)
        fab = qfi_extended(state, ja, jb)
    else:
        raise TypeError("state must be a StateVector or MixedState")
    return QfiMatrix2(f00=fa + 2.0 * fab + fb, f01=fa - fb, f11=fa - 2.0 * fab + fb)


@dataclass(frozen=True)
class PrecisionBounds:
    """Best attainable inverse variances for the two parameters."""

    bound_b0: float
    bound_b1: float
    qfi_sum: float


def precision_bounds(matrix: QfiMatrix2) -> PrecisionBounds:
    """Schur-complement bounds; a vanishing row reduces to the single-parameter case."""

    def schur(diag: float, other: float, off: float) -> float:
        if other <= ALGEBRA_TOL:
            value = diag
        else:
            value = diag - off * off / other
        if value < -ALGEBRA_TOL:
            raise ValueError(f"negative precision bound {value:.3e}")
        return max(value, 0.0)

    return PrecisionBounds(
        bound_b0=schur(matrix.f00, matrix.f11, matrix.f01),
        bound_b1=schur(matrix.f11, matrix.f00, matrix.f01),
        qfi_sum=matrix.f00 + matrix.f11,
    )


# ---------------------------------------------------------------------------
# closed forms (exact rationals)
# ---------------------------------------------------------------------------


def _check_even_total(na: int, nb: int) -> int:
    n = na + nb
    if n % 2:
        raise ValueError("closed forms for Dicke probes need an even total particle number")
    return n


def dicke_transverse_qfi(na: int, nb: int) -> Fraction:
    """F[Dicke, J_x or J_y] = N(N+2)/2."""
    n = _check_even_total(na, nb)
    return Fraction(n * (n + 2), 2)


def flipped_dicke_transverse_qfi(na: int, nb: int) -> Fraction:
    """F[flipped Dicke, J_x or J_y] = N(N + (Na-Nb)^2 - 2) / (2(N-1))."""
    n = _check_even_total(na, nb)
    return Fraction(n * (n + (na - nb) ** 2 - 2), 2 * (n - 1))


def dicke_gradient_z_qfi(na: int, nb: int) -> Fraction:
    """F[Dicke, J_{z,a} - J_{z,b}] = 4 Na Nb / (N-1) (flip-invariant)."""
    n = _check_even_total(na, nb)
    return Fraction(4 * na * nb, n - 1)


def flipped_dicke_qfi_blocks(na: int, nb: int):
    """(F_a, F_b, F_ab) of the flipped Dicke state for a transverse axis."""
    n = _check_even_total(na, nb)
    fa = Fraction(na * ((na + 1) * n - 2), 2 * (n - 1))
    fb = Fraction(nb * ((nb + 1) * n - 2), 2 * (n - 1))
    fab = Fraction(-na * nb * n, 2 * (n - 1))
    return fa, fb, fab


def closed_form_bound_b1(na: int, nb: int) -> Fraction:
    """Flipped-Dicke gradient bound 2 Na Nb (N^2 - 4) / (N (N - 2 + (Na-Nb)^2))."""
    n = _check_even_total(na, nb)
    if n <= 2:
        raise ValueError("gradient bound needs more than two particles")
    return Fraction(2 * na * nb * (n * n - 4), n * (n - 2 + (na - nb) ** 2))


def even_split_bound_b1(n: int) -> Fraction:
    """Flipped-Dicke gradient bound at Na = Nb = N/2: N(N+2)/2."""
    if n % 2:
        raise ValueError("even split needs an even total particle number")
    return Fraction(n * (n + 2), 2)


def uneven_split_sweep(n: int, extra: int) -> Fraction:
    """Gradient bound when `extra` particles are added to well b of an even
    N-particle split, (Na, Nb) = (N/2, N/2 + extra):

        N (N + 2m) [(N + m)^2 - 4] / (2 (N + m) (N - 2 + m + m^2)),  m = extra.

    Decreases from N(N+2)/2 at m = 0 towards the limit N as m grows.
    """
    if n % 2:
        raise ValueError("the sweep starts from an even split")
    if extra < 0:
        raise ValueError("extra particles must be non-negative")
    m = extra
    return Fraction(n * (n + 2 * m) * ((n + m) ** 2 - 4), 2 * (n + m) * (n - 2 + m + m * m))


def reference_qfi_table(na: int, nb: int) -> dict:
    """Closed-form QFI of the four reference states for the four collective
    generators, keyed by (state name, generator key).

    Generator keys: "z+" and "x+" are the sums J_{z,a}+J_{z,b}, J_{x,a}+J_{x,b}
    (the x rows hold for any transverse axis), "z-" and "x-" the differences.
    Assumes both wells hold at least two particles.
    """
    n = _check_even_total(na, nb)
    if min(na, nb) < 2:
        raise ValueError("reference table assumes at least two particles per well")
    delta_sq = (na - nb) ** 2
    transverse_dicke = dicke_transverse_qfi(na, nb)
    transverse_flipped = flipped_dicke_transverse_qfi(na, nb)
    gradient_z = dicke_gradient_z_qfi(na, nb)
    table = {
        ("ghz", "z+"): Fraction(n * n),
        ("ghz", "x+"): Fraction(n),
        ("ghz", "z-"): Fraction(delta_sq),
        ("ghz", "x-"): Fraction(n),
        ("flipped-ghz", "z+"): Fraction(delta_sq),
        ("flipped-ghz", "x+"): Fraction(n),
        ("flipped-ghz", "z-"): Fraction(n * n),
        ("flipped-ghz", "x-"): Fraction(n),
        ("dicke", "z+"): Fraction(0),
        ("dicke", "x+"): transverse_dicke,
        ("dicke", "z-"): gradient_z,
        ("dicke", "x-"): transverse_flipped,
        ("flipped-dicke", "z+"): Fraction(0),
        ("flipped-dicke", "x+"): transverse_flipped,
        ("flipped-dicke", "z-"): gradient_z,
        ("flipped-dicke", "x-"): transverse_dicke,
    }
    return table


def reference_qfi_blocks(state_name: str, na: int, nb: int, axis: str):
    """Exact (F_a, F_b, F_ab) for a named state and axis, or None if no closed
    form applies (GHZ transverse rows need at least two particles per well)."""
    if state_name in ("dicke", "flipped-dicke"):
        n = _check_even_total(na, nb)
        if axis == "z":
            f = Fraction(na * nb, n - 1)
            return f, f, -f
        fa, fb, fab = flipped_dicke_qfi_blocks(na, nb)
        if state_name == "dicke":
            fab = -fab
        return fa, fb, fab
    if state_name in ("ghz", "flipped-ghz"):
        sign = 1 if state_name == "ghz" else -1
        if axis == "z":
            return Fraction(na * na), Fraction(nb * nb), sign * Fraction(na * nb)
        if min(na, nb) < 2:
            return None
        return Fraction(na), Fraction(nb), Fraction(0)
    if state_name == "product-dicke":
        if na % 2 or nb % 2:
            raise ValueError("local Dicke probes need even well sizes")
        if axis == "z":
            return Fraction(0), Fraction(0), Fraction(0)
        return Fraction(na * (na + 2), 2), Fraction(nb * (nb + 2), 2), Fraction(0)
    return None


def product_dicke_bound_b1(na: int, nb: int) -> Fraction:
    """Gradient bound of the product of local zero-projection Dicke states."""
    if na % 2 or nb % 2:
        raise ValueError("local Dicke probes need even well sizes")
    # F_ab = 0 for a product state, so the Schur complement reduces to
    # 4 Fa Fb / (Fa + Fb) with Fr = Nr (Nr + 2) / 2.
    fa = Fraction(na * (na + 2), 2)
    fb = Fraction(nb * (nb + 2), 2)
    return 4 * fa * fb / (fa + fb)
