"""Collective spin operators for two spatially separated ensembles.

Each well holds an ensemble of spin-1/2 particles restricted to its maximal
(symmetric) spin sector, so well ``r`` with ``N_r`` particles carries a single
spin ``j_r = N_r / 2``.  The joint space is the tensor product of the two
sectors, dimension ``(N_a + 1)(N_b + 1)``.

Basis convention: product states ``|m_a, m_b>`` with both magnetic quantum
numbers descending, i.e. index ``(j_a - m_a) * (N_b + 1) + (j_b - m_b)``.
This is exactly the ordering produced by ``numpy.kron`` of the per-well
matrices, each written in its descending-``m`` basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tolerances import UNITARITY_TOL

AXES = ("x", "y", "z")
COMBINATIONS = ("a", "b", "plus", "minus")


@dataclass(frozen=True)
class Spin:
    """A single spin, stored as twice the quantum number so j may be half-integer."""

    two_j: int

    def __post_init__(self):
        if self.two_j < 0:
            raise ValueError("spin quantum number must be non-negative")

    @property
    def j(self) -> float:
        return self.two_j / 2.0

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers, descending from +j to -j."""
        return (self.two_j - 2 * np.arange(self.dim)) / 2.0


@dataclass(frozen=True)
class SpinMatrixSet:
    """Dense spin matrices j_x, j_y, j_z for one spin, descending-m basis."""

    spin: Spin
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    def axis(self, axis: str) -> np.ndarray:
        if axis not in AXES:
            raise ValueError(f"unknown axis {axis!r}")
        return getattr(self, "j" + axis)


def spin_matrices(spin: Spin) -> SpinMatrixSet:
    """Spin matrices from the ladder-operator construction.

    j_+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>, so in the descending-m basis
    j_+ sits on the superdiagonal; j_x = (j_+ + j_-)/2, j_y = (j_+ - j_-)/2i.
    """
    j = spin.j
    m = spin.m_values
    # raising amplitudes from row m[i] (target) to column m[i+1] = m[i]-1 (source)
    up = np.sqrt(j * (j + 1.0) - m[1:] * (m[1:] + 1.0))
    jp = np.zeros((spin.dim, spin.dim), dtype=complex)
    jp[np.arange(spin.dim - 1), np.arange(1, spin.dim)] = up
    jm = jp.conj().T
    jx = (jp + jm) / 2.0
    jy = (jp - jm) / 2.0j
    jz = np.diag(m.astype(complex))
    return SpinMatrixSet(spin=spin, jx=jx, jy=jy, jz=jz)


@dataclass(frozen=True)
class TwoWellSpace:
    """Symmetric-sector product space for wells a and b with na, nb particles."""

    na: int
    nb: int

    def __post_init__(self):
        if self.na < 1 or self.nb < 1:
            raise ValueError("each well needs at least one particle")

    @property
    def n_total(self) -> int:
        return self.na + self.nb

    @property
    def spin_a(self) -> Spin:
        return Spin(self.na)

    @property
    def spin_b(self) -> Spin:
        return Spin(self.nb)

    @property
    def dim(self) -> int:
        return (self.na + 1) * (self.nb + 1)

    def basis_index(self, two_ma: int, two_mb: int) -> int:
        """Index of the product basis state |m_a, m_b> (arguments are 2m)."""
        for two_m, two_n in ((two_ma, self.na), (two_mb, self.nb)):
            if abs(two_m) > two_n or (two_n - two_m) % 2:
                raise ValueError("magnetic quantum number out of range")
        return (self.na - two_ma) // 2 * (self.nb + 1) + (self.nb - two_mb) // 2


@dataclass(frozen=True)
class CollectiveOperator:
    """A collective spin component on the two-well space."""

    space: TwoWellSpace
    axis: str
    combination: str
    matrix: np.ndarray


def _embed(space: TwoWellSpace, local: np.ndarray, well: str) -> np.ndarray:
    ia = np.eye(space.spin_a.dim, dtype=complex)
    ib = np.eye(space.spin_b.dim, dtype=complex)
    if well == "a":
        return np.kron(local, ib)
    if well == "b":
        return np.kron(ia, local)
    raise ValueError(f"unknown well {well!r}")


def collective_operator(space: TwoWellSpace, axis: str, combination: str) -> CollectiveOperator:
    """J_{axis,a}, J_{axis,b}, or their sum/difference J_{axis,a} ± J_{axis,b}."""
    if combination not in COMBINATIONS:
        raise ValueError(f"unknown combination {combination!r}")
    ja = _embed(space, spin_matrices(space.spin_a).axis(axis), "a")
    jb = _embed(space, spin_matrices(space.spin_b).axis(axis), "b")
    if combination == "a":
        matrix = ja
    elif combination == "b":
        matrix = jb
    elif combination == "plus":
        matrix = ja + jb
    else:
        matrix = ja - jb
    return CollectiveOperator(space=space, axis=axis, combination=combination, matrix=matrix)


def local_rotation(spin: Spin, axis: str, angle: float) -> np.ndarray:
    """exp(-i angle j_axis) for a single spin, via eigendecomposition."""
    mat = spin_matrices(spin).axis(axis)
    vals, vecs = np.linalg.eigh(mat)
    return (vecs * np.exp(-1j * angle * vals)) @ vecs.conj().T


def rotation_operator(space: TwoWellSpace, axis: str, well: str, angle: float) -> np.ndarray:
    """exp(-i angle J_{axis,well}) on the two-well space ('both' rotates a and b)."""
    if well == "both":
        ua = local_rotation(space.spin_a, axis, angle)
        ub = local_rotation(space.spin_b, axis, angle)
        u = np.kron(ua, ub)
    elif well in ("a", "b"):
        spin = space.spin_a if well == "a" else space.spin_b
        u = _embed(space, local_rotation(spin, axis, angle), well)
    else:
        raise ValueError(f"unknown well {well!r}")
    assert_unitary(u)
    return u


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def hermiticity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def assert_hermitian(m: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    res = hermiticity_residual(m)
    if res > tol:
        raise ValueError(f"matrix is not Hermitian (residual {res:.3e})")


def assert_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    res = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
    if res > tol:
        raise ValueError(f"matrix is not unitary (residual {res:.3e})")
