"""Optimal background-free measurement of the field gradient.

The homogeneous field generates J_{y,+} = J_{y,a} + J_{y,b}; observables that
commute with it are immune to the unknown offset b0.  In the product basis of
local j_y eigenstates, grouped into blocks of equal total projection m_y, that
commutant is spanned by block-diagonal Hermitian matrices: for each block of
size d, the d diagonal units, the d(d-1)/2 symmetric pairs E_ij + E_ji and as
many antisymmetric pairs i(E_ij - E_ji).

Given a probe state, the largest inverse variance attainable with estimators
from a measurement family is  c^T Δ⁺ c,  where Δ is the covariance matrix of
the family members, c_k = -i<[M_k, M_0]> their commutators with the gradient
generator M_0 = J_{y,a} - J_{y,b}, and Δ⁺ a pseudo-inverse.  The optimizer
coefficients are m = Δ⁺ c (reported with unit Euclidean norm).

Strict commutation with J_{y,+} is sufficient for offset immunity but not
necessary: any observable whose mean is stationary under the offset rotation
at the operating point, <[J_{y,+}, M]> = 0, yields an offset-free estimate to
first order.  For evenly split ensembles the block span already contains the
global optimum over that larger family; for uneven splits it does not, so the
solver appends one state-adapted direction — the combination of the two local
symmetric-logarithmic-derivative operators that is insensitive to the offset —
and optimizes over the enlarged set.  Whenever the block span alone attains
the optimum, the block-diagonal solution is returned unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_core import Spin, TwoWellSpace, spin_matrices
from .states import StateVector
from .tolerances import PINV_RCOND

_STRUCTURE_TOL = 1e-9


def block_degeneracy(space: TwoWellSpace, two_my: int) -> int:
    """Number of product states |mu_a, mu_b> with mu_a + mu_b = m_y.

    Flat at min(Na, Nb) + 1 while |m_y| stays below the minimal coupled spin
    |j_a - j_b|, then drops linearly to 1 at |m_y| = N/2.
    """
    n = space.n_total
    if abs(two_my) > n or (n - two_my) % 2:
        return 0
    if abs(two_my) <= abs(space.na - space.nb):
        return min(space.na, space.nb) + 1
    return (n - abs(two_my)) // 2 + 1


def _local_jy_eigenbasis(spin: Spin) -> np.ndarray:
    """Columns: j_y eigenvectors ordered by descending eigenvalue, top entry real positive."""
    vals, vecs = np.linalg.eigh(spin_matrices(spin).jy)
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    expected = spin.m_values
    if np.max(np.abs(vals - expected)) > 1e-10:
        raise AssertionError("local j_y spectrum does not match m = j..-j")
    top = vecs[0, :]
    if np.min(np.abs(top)) < 1e-12:
        raise AssertionError("top component of a j_y eigenvector vanished; cannot fix phases")
    vecs = vecs * (np.abs(top) / top)
    return vecs


@dataclass(frozen=True)
class Block:
    two_my: int
    start: int
    size: int

    @property
    def m_y(self) -> float:
        return self.two_my / 2.0


@dataclass(frozen=True)
class JyBlockBasis:
    """Unitary into the total-m_y block basis plus the block layout.

    Column order: total m_y descending, then the well-a projection descending.
    column_two_mu holds the (2 mu_a, 2 mu_b) pair for each column.
    """

    space: TwoWellSpace
    unitary: np.ndarray
    blocks: tuple
    column_two_mu: tuple

    def block_slice(self, block: Block) -> slice:
        return slice(block.start, block.start + block.size)


def jy_block_basis(space: TwoWellSpace) -> JyBlockBasis:
    va = _local_jy_eigenbasis(space.spin_a)
    vb = _local_jy_eigenbasis(space.spin_b)
    two_mu_a = space.na - 2 * np.arange(space.spin_a.dim)
    two_mu_b = space.nb - 2 * np.arange(space.spin_b.dim)
    pairs = [(int(ta), int(tb)) for ta in two_mu_a for tb in two_mu_b]
    order = sorted(range(len(pairs)), key=lambda i: (-(pairs[i][0] + pairs[i][1]), -pairs[i][0]))
    unitary = np.empty((space.dim, space.dim), dtype=complex)
    for col, src in enumerate(order):
        ia = src // space.spin_b.dim
        ib = src % space.spin_b.dim
        unitary[:, col] = np.kron(va[:, ia], vb[:, ib])
    column_two_mu = tuple(pairs[src] for src in order)
    blocks = []
    start = 0
    while start < space.dim:
        two_my = sum(column_two_mu[start])
        size = 1
        while start + size < space.dim and sum(column_two_mu[start + size]) == two_my:
            size += 1
        if size != block_degeneracy(space, two_my):
            raise AssertionError("block size disagrees with the degeneracy formula")
        blocks.append(Block(two_my=two_my, start=start, size=size))
        start += size
    return JyBlockBasis(space=space, unitary=unitary, blocks=tuple(blocks), column_two_mu=column_two_mu)


def _block_retained(space: TwoWellSpace, two_my: int) -> bool:
    # keep blocks with m_y = j_max, j_max - 2, ... (j_max = N/2)
    return (space.n_total - two_my) % 4 == 0


@dataclass(frozen=True)
class OperatorCounts:
    full: int
    reduced: int


def count_operators(space: TwoWellSpace) -> OperatorCounts:
    """Commutant dimensions: full span and the alternating-block reduction.

    The full count has the closed form
    K* = 1 + Nmin + Nmin(1 - Nmin^2)/3 + (1 + Nmin)^2 Nmax; the reduced count
    equals (K* + Nmin + 1)/2 whenever Nmin is even (then the retained set is
    the one the closed form assumes) and is obtained by direct summation
    otherwise.
    """
    nmin, nmax = sorted((space.na, space.nb))
    k_full_formula = 1 + nmin + nmin * (1 - nmin * nmin) // 3 + (1 + nmin) ** 2 * nmax
    degs = [block_degeneracy(space, two_my) for two_my in range(-space.n_total, space.n_total + 1, 2)]
    k_full = sum(d * d for d in degs)
    if k_full != k_full_formula:
        raise AssertionError("enumerated commutant dimension disagrees with the closed form")
    k_reduced = sum(
        block_degeneracy(space, two_my) ** 2
        for two_my in range(-space.n_total, space.n_total + 1, 2)
        if _block_retained(space, two_my)
    )
    if nmin % 2 == 0 and k_reduced != (k_full + nmin + 1) // 2:
        raise AssertionError("reduced commutant count disagrees with the closed form")
    return OperatorCounts(full=k_full, reduced=k_reduced)


@dataclass(frozen=True)
class CommutantElement:
    """One Hermitian basis element, confined to a single m_y block.

    kind "diag": E_ii; "sym": E_ij + E_ji; "anti": i(E_ij - E_ji); indices are
    global positions in the block basis.
    """

    kind: str
    i: int
    j: int


@dataclass(frozen=True)
class CommutantBasis:
    space: TwoWellSpace
    reduced: bool
    elements: tuple

    def element_matrix(self, k: int) -> np.ndarray:
        """Dense matrix of element k in the block basis."""
        el = self.elements[k]
        dim = self.space.dim
        mat = np.zeros((dim, dim), dtype=complex)
        if el.kind == "diag":
            mat[el.i, el.i] = 1.0
        elif el.kind == "sym":
            mat[el.i, el.j] = 1.0
            mat[el.j, el.i] = 1.0
        else:
            mat[el.i, el.j] = 1.0j
            mat[el.j, el.i] = -1.0j
        return mat


def commutant_basis(space: TwoWellSpace, reduced: bool = False) -> CommutantBasis:
    basis = jy_block_basis(space)
    elements = []
    for block in basis.blocks:
        if reduced and not _block_retained(space, block.two_my):
            continue
        for i in range(block.start, block.start + block.size):
            elements.append(CommutantElement(kind="diag", i=i, j=i))
            for j in range(i + 1, block.start + block.size):
                elements.append(CommutantElement(kind="sym", i=i, j=j))
                elements.append(CommutantElement(kind="anti", i=i, j=j))
    counts = count_operators(space)
    expected = counts.reduced if reduced else counts.full
    if len(elements) != expected:
        raise AssertionError(
            f"enumerated {len(elements)} commutant elements, expected {expected}"
        )
    return CommutantBasis(space=space, reduced=reduced, elements=tuple(elements))


@dataclass(frozen=True)
class OptimalSolution:
    """Result of the measurement optimization for one probe state.

    block_diagonal is True when the commutant span alone attains the optimum;
    only then do the block-structure reports apply.  Otherwise the operator
    carries an extra rank-two part anchored on insensitive_vector (given in
    block-basis coordinates).
    """

    basis: JyBlockBasis
    commutant: CommutantBasis
    precision: float
    coefficients: np.ndarray
    c_column: np.ndarray
    c_matrix: np.ndarray
    delta: np.ndarray
    operator_blocks: np.ndarray
    block_diagonal: bool
    insensitive_vector: np.ndarray | None

    @property
    def operator_product_basis(self) -> np.ndarray:
        v = self.basis.unitary
        return v @ self.operator_blocks @ v.conj().T


def _gradient_diagonal(basis: JyBlockBasis) -> np.ndarray:
    """Diagonal of M_0 = J_{y,a} - J_{y,b} in the block basis."""
    return np.array([(ta - tb) / 2.0 for ta, tb in basis.column_two_mu])


def _maximize_ratio(c: np.ndarray, delta: np.ndarray) -> tuple:
    """Maximize (m.c)^2 / (m.Δ.m); returns (value, unnormalized m)."""
    vals, vecs = np.linalg.eigh(delta)
    cutoff = PINV_RCOND * max(vals.max(), 0.0)
    keep = vals > cutoff
    inv_vals = np.zeros_like(vals)
    inv_vals[keep] = 1.0 / vals[keep]
    m_raw = vecs @ (inv_vals * (vecs.T @ c))
    return float(c @ m_raw), m_raw


def _insensitive_direction(basis: JyBlockBasis, psi: np.ndarray) -> np.ndarray | None:
    """Offset-insensitive local-derivative combination, or None if degenerate.

    Both local rotation generators are diagonal here; their centered actions
    d_r = (J_{y,r} - <J_{y,r}>)|psi> span the symmetric-logarithmic-derivative
    plane.  The returned unit vector v makes |v><psi| + |psi><v| stationary
    under the offset rotation.
    """
    diag_a = np.array([ta / 2.0 for ta, _ in basis.column_two_mu])
    diag_b = np.array([tb / 2.0 for _, tb in basis.column_two_mu])
    weights = np.abs(psi) ** 2
    d_a = -1.0j * (diag_a - float(diag_a @ weights)) * psi
    d_b = -1.0j * (diag_b - float(diag_b @ weights)) * psi
    offset = (diag_a + diag_b) * psi
    u_a = float(2.0 * np.imag(d_a.conj() @ offset))
    u_b = float(2.0 * np.imag(d_b.conj() @ offset))
    if np.hypot(u_a, u_b) < 1e-12:
        return None
    vec = u_b * d_a - u_a * d_b
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        return None
    vec = vec / norm
    if abs(2.0 * np.imag(vec.conj() @ offset)) > 1e-9:
        raise AssertionError("insensitive direction still responds to the offset rotation")
    return vec


def optimal_precision(
    state: StateVector,
    reduced: bool = False,
    basis: JyBlockBasis | None = None,
    commutant: CommutantBasis | None = None,
) -> OptimalSolution:
    if basis is None:
        basis = jy_block_basis(state.space)
    if commutant is None:
        commutant = commutant_basis(state.space, reduced=reduced)
    dim = state.space.dim
    psi = basis.unitary.conj().T @ state.amplitudes
    if commutant.reduced:
        retained = np.zeros(dim, dtype=bool)
        for block in basis.blocks:
            if _block_retained(state.space, block.two_my):
                retained[basis.block_slice(block)] = True
        if np.linalg.norm(psi[retained]) < 1e-9:
            raise ValueError("degenerate input state: no overlap with the retained sectors")
    n_ops = len(commutant.elements) + 1
    w = np.zeros((dim, n_ops + 1), dtype=complex)
    w[:, 0] = _gradient_diagonal(basis) * psi
    for k, el in enumerate(commutant.elements, start=1):
        if el.kind == "diag":
            w[el.i, k] = psi[el.i]
        elif el.kind == "sym":
            w[el.i, k] += psi[el.j]
            w[el.j, k] += psi[el.i]
        else:
            w[el.i, k] += 1.0j * psi[el.j]
            w[el.j, k] += -1.0j * psi[el.i]
    extra = _insensitive_direction(basis, psi)
    if extra is not None:
        w[:, n_ops] = extra  # action on psi of |v><psi| + |psi><v| with v ⊥ psi
    else:
        w = w[:, :n_ops]
    gram = w.conj().T @ w
    means = np.real(psi.conj() @ w)
    delta = np.real(gram) - np.outer(means, means)
    c_matrix = 2.0 * np.imag(gram)
    c = c_matrix[:, 0].copy()
    if np.linalg.norm(c) < 1e-12:
        raise ValueError("degenerate input state: the gradient signal vanishes on every block")
    precision_blocks, m_blocks = _maximize_ratio(c[:n_ops], delta[:n_ops, :n_ops])
    if extra is not None:
        precision, m_raw = _maximize_ratio(c, delta)
    else:
        precision, m_raw = precision_blocks, m_blocks
    block_diagonal = precision - precision_blocks <= 1e-9 * max(1.0, precision)
    if block_diagonal:
        precision = precision_blocks
        m_raw = m_blocks
        extra = None
        w = w[:, :n_ops]
        gram = gram[:n_ops, :n_ops]
        delta = delta[:n_ops, :n_ops]
        c_matrix = c_matrix[:n_ops, :n_ops]
        c = c[:n_ops]
    norm = np.linalg.norm(m_raw)
    if norm < 1e-12:
        raise ValueError("degenerate input state: covariance pseudo-inverse annihilates the signal")
    coefficients = m_raw / norm
    operator = np.zeros((dim, dim), dtype=complex)
    np.fill_diagonal(operator, coefficients[0] * _gradient_diagonal(basis))
    for k, el in enumerate(commutant.elements, start=1):
        ck = coefficients[k]
        if ck == 0.0:
            continue
        if el.kind == "diag":
            operator[el.i, el.i] += ck
        elif el.kind == "sym":
            operator[el.i, el.j] += ck
            operator[el.j, el.i] += ck
        else:
            operator[el.i, el.j] += 1.0j * ck
            operator[el.j, el.i] += -1.0j * ck
    if extra is not None:
        operator += coefficients[n_ops] * (
            np.outer(extra, psi.conj()) + np.outer(psi, extra.conj())
        )
    solution = OptimalSolution(
        basis=basis,
        commutant=commutant,
        precision=precision,
        coefficients=coefficients,
        c_column=c,
        c_matrix=c_matrix,
        delta=delta,
        operator_blocks=operator,
        block_diagonal=block_diagonal,
        insensitive_vector=extra,
    )
    _self_check(solution, psi)
    return solution


def _self_check(solution: OptimalSolution, psi: np.ndarray) -> None:
    """The reconstructed observable must reproduce the quoted precision."""
    op = solution.operator_blocks
    vec = op @ psi
    mean = float(np.real(psi.conj() @ vec))
    var = float(np.real(vec.conj() @ vec)) - mean * mean
    grad = _gradient_diagonal(solution.basis)
    slope = float(2.0 * np.imag(vec.conj() @ (grad * psi)))
    if var <= 0.0:
        raise AssertionError("optimal observable has non-positive variance")
    epf = slope * slope / var
    if abs(epf - solution.precision) > 1e-8 * max(1.0, solution.precision):
        raise AssertionError(
            f"error-propagation check {epf!r} disagrees with the optimum {solution.precision!r}"
        )


@dataclass(frozen=True)
class BlockReport:
    two_my: int
    start: int
    size: int
    max_abs_real: float
    max_abs_imag: float

    @property
    def is_zero(self) -> bool:
        return max(self.max_abs_real, self.max_abs_imag) < _STRUCTURE_TOL

    @property
    def imaginary_only(self) -> bool:
        return self.max_abs_real < _STRUCTURE_TOL < self.max_abs_imag


def block_structure_report(solution: OptimalSolution) -> tuple:
    """Per-block magnitude split of the optimal observable (scale-normalized)."""
    if not solution.block_diagonal:
        raise ValueError("the optimal observable is not block-diagonal for this state")
    op = solution.operator_blocks
    scale = max(float(np.max(np.abs(op))), 1e-300)
    reports = []
    for block in solution.basis.blocks:
        sl = solution.basis.block_slice(block)
        sub = op[sl, sl]
        reports.append(
            BlockReport(
                two_my=block.two_my,
                start=block.start,
                size=block.size,
                max_abs_real=float(np.max(np.abs(sub.real))) / scale,
                max_abs_imag=float(np.max(np.abs(sub.imag))) / scale,
            )
        )
    return tuple(reports)


def solution_figure_data(solution: OptimalSolution) -> dict:
    """JSON-ready block heatmap payload for the optimal observable."""
    if not solution.block_diagonal:
        raise ValueError("the optimal observable is not block-diagonal for this state")
    space = solution.basis.space
    blocks = []
    for block in solution.basis.blocks:
        sl = solution.basis.block_slice(block)
        sub = solution.operator_blocks[sl, sl]
        m_y = block.two_my / 2
        blocks.append(
            {
                "m_y": int(m_y) if m_y == int(m_y) else m_y,
                "size": block.size,
                "re": [[float(x) for x in row] for row in sub.real],
                "im": [[float(x) for x in row] for row in sub.imag],
            }
        )
    return {
        "na": space.na,
        "nb": space.nb,
        "blocks": blocks,
        "precision": solution.precision,
        "block_diagonal": True,
    }
