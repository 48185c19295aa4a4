"""The convex body of allowed gradient-QFI triples.

Fixing the three homogeneous-field values F_{l,+} = F[rho, J_{l,a}+J_{l,b}],
the gradient values f_l = F[rho, J_{l,a}-J_{l,b}] are confined to a polytope:

  single axis:  f_i <= min(2(Na^2+Nb^2) - F_{i,+},
                           N(N+2) + 4 Nmin - F_{j,+} - F_{k,+})
  axis pairs:   f_i + f_j <= N(N+2) - F_{k,+}
  all axes:     f_x + f_y + f_z <= N(N+2) + 4 Nmin
  and           f_i >= 0.

Half-space ids name the family: "axis:<i>|heis", "axis:<i>|mix", "plane:<ij>|<k>",
"total", "nonneg:<i>".  Vertices are enumerated by intersecting plane triples
(13 planes at most — no convex-hull library needed).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .qfi import qfi_pure
from .spin_core import AXES, TwoWellSpace, collective_operator
from .states import StateVector
from .tolerances import SATURATION_TOL, VERTEX_DEDUP_TOL

_PAIRS = (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y"))


@dataclass(frozen=True)
class QfiSixVector:
    """QFI of the six collective generators J_{l,a} ± J_{l,b}."""

    space: TwoWellSpace
    f_plus: tuple
    f_minus: tuple

    def plus(self, axis: str) -> float:
        return self.f_plus[AXES.index(axis)]

    def minus(self, axis: str) -> float:
        return self.f_minus[AXES.index(axis)]


def qfi_six_vector(state: StateVector) -> QfiSixVector:
    space = state.space
    values = {}
    for axis in AXES:
        for comb in ("plus", "minus"):
            op = collective_operator(space, axis, comb).matrix
            values[(axis, comb)] = qfi_pure(state, op, check=False)
    return QfiSixVector(
        space=space,
        f_plus=tuple(values[(axis, "plus")] for axis in AXES),
        f_minus=tuple(values[(axis, "minus")] for axis in AXES),
    )


@dataclass(frozen=True)
class SignVector:
    """Signs s_l = ±1 choosing sum or difference per axis."""

    sx: int
    sy: int
    sz: int

    def __post_init__(self):
        if any(s not in (-1, 1) for s in (self.sx, self.sy, self.sz)):
            raise ValueError("signs must be ±1")

    @property
    def signs(self) -> tuple:
        return (self.sx, self.sy, self.sz)

    @property
    def parity(self) -> int:
        """0 when the product of signs is +1, else 1."""
        return 0 if self.sx * self.sy * self.sz == 1 else 1


def sign_inequality(six: QfiSixVector, signs: SignVector) -> tuple:
    """(lhs, rhs) of sum_l F[rho, J_{l,a} + s_l J_{l,b}] <= N(N+2) + 4 parity Nmin."""
    space = six.space
    lhs = sum(
        six.plus(axis) if s == 1 else six.minus(axis)
        for axis, s in zip(AXES, signs.signs)
    )
    n = space.n_total
    rhs = n * (n + 2) + 4 * signs.parity * min(space.na, space.nb)
    return float(lhs), float(rhs)


def figure_of_merit_sum(state: StateVector, flipped: bool) -> tuple:
    """Sum of the three same-sign QFIs and its bound.

    flipped=False sums F_{l,+} (bound N(N+2)); flipped=True sums F_{l,-}
    (bound N(N+2) + 4 min(Na, Nb)).
    """
    six = qfi_six_vector(state)
    signs = SignVector(-1, -1, -1) if flipped else SignVector(1, 1, 1)
    return sign_inequality(six, signs)


@dataclass(frozen=True)
class Halfspace:
    """normal · f <= offset."""

    normal: tuple
    offset: float
    id: str

    def slack(self, point) -> float:
        return self.offset - float(np.dot(self.normal, point))


@dataclass(frozen=True)
class PolytopeModel:
    space: TwoWellSpace
    f_plus: tuple
    halfspaces: tuple
    vertices: tuple

    def contains(self, point, tol: float = SATURATION_TOL) -> bool:
        return all(h.slack(point) >= -tol for h in self.halfspaces)


def _axis_vector(axis: str, sign: float = 1.0) -> tuple:
    v = [0.0, 0.0, 0.0]
    v[AXES.index(axis)] = sign
    return tuple(v)


def build_halfspaces(space: TwoWellSpace, f_plus) -> tuple:
    na, nb, n = space.na, space.nb, space.n_total
    nmin = min(na, nb)
    fp = dict(zip(AXES, f_plus))
    planes = []
    for i, j, k in _PAIRS:
        planes.append(Halfspace(_axis_vector(i), 2.0 * (na * na + nb * nb) - fp[i], f"axis:{i}|heis"))
        planes.append(
            Halfspace(_axis_vector(i), n * (n + 2) + 4 * nmin - fp[j] - fp[k], f"axis:{i}|mix")
        )
        pair = tuple(x + y for x, y in zip(_axis_vector(i), _axis_vector(j)))
        planes.append(Halfspace(pair, n * (n + 2) - fp[k], f"plane:{i}{j}|{k}"))
    planes.append(Halfspace((1.0, 1.0, 1.0), float(n * (n + 2) + 4 * nmin), "total"))
    for i in AXES:
        planes.append(Halfspace(_axis_vector(i, -1.0), 0.0, f"nonneg:{i}"))
    return tuple(planes)


def enumerate_vertices(halfspaces, tol: float = SATURATION_TOL) -> tuple:
    """All vertices of the intersection, from triples of planes."""
    normals = np.array([h.normal for h in halfspaces])
    offsets = np.array([h.offset for h in halfspaces])
    vertices = []
    for idx in combinations(range(len(halfspaces)), 3):
        a = normals[list(idx)]
        if abs(np.linalg.det(a)) < 1e-12:
            continue
        point = np.linalg.solve(a, offsets[list(idx)])
        if np.all(normals @ point <= offsets + tol):
            if not any(np.max(np.abs(point - v)) < VERTEX_DEDUP_TOL for v in vertices):
                vertices.append(point)
    return tuple(tuple(float(x) for x in v) for v in vertices)


def build_polytope(space: TwoWellSpace, f_plus) -> PolytopeModel:
    halfspaces = build_halfspaces(space, f_plus)
    vertices = enumerate_vertices(halfspaces)
    if not vertices:
        raise ValueError("empty polytope: the homogeneous-field QFI triple is inconsistent")
    return PolytopeModel(space=space, f_plus=tuple(float(f) for f in f_plus), halfspaces=halfspaces, vertices=vertices)


@dataclass(frozen=True)
class SaturationReport:
    six: QfiSixVector
    polytope: PolytopeModel
    slacks: dict
    saturated: tuple


def classify_saturation(state: StateVector, tol: float = SATURATION_TOL) -> SaturationReport:
    """Slack of the state's gradient triple against each inequality family.

    The two single-axis branches are combined ("axis:<i>" takes the tighter
    plane); the raw per-plane slacks stay available through the polytope.
    """
    six = qfi_six_vector(state)
    poly = build_polytope(state.space, six.f_plus)
    point = np.array(six.f_minus)
    per_plane = {h.id: h.slack(point) for h in poly.halfspaces}
    slacks = {}
    for i in AXES:
        slacks[f"axis:{i}"] = min(per_plane[f"axis:{i}|heis"], per_plane[f"axis:{i}|mix"])
        slacks[f"nonneg:{i}"] = per_plane[f"nonneg:{i}"]
    for i, j, k in _PAIRS:
        slacks[f"plane:{i}{j}|{k}"] = per_plane[f"plane:{i}{j}|{k}"]
    slacks["total"] = per_plane["total"]
    if min(slacks.values()) < -tol:
        raise ValueError("state lies outside its own admissible polytope")
    saturated = tuple(sorted(name for name, s in slacks.items() if abs(s) < tol))
    return SaturationReport(six=six, polytope=poly, slacks=slacks, saturated=saturated)
