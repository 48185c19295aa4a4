"""Brute-force cross-validation on the full 2^N qubit register.

Everything here is built from single-qubit bit operations — no shared code
with the symmetric-sector matrices — so agreement between the two paths
validates both.  Site i of an N-qubit register is bit N-1-i of the basis-state
integer; bit value 0 means spin up (+1/2).  Well a holds the first na sites.

Operators act matrix-free (index permutations and sign masks on amplitude
vectors), which keeps N = 12 cheap.  The symmetric embedding maps the
two-well sector basis |m_a, m_b> onto products of local qubit Dicke states.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, sqrt

import numpy as np

MAX_QUBITS = 12


def _check_size(n: int) -> None:
    if n < 1 or n > MAX_QUBITS:
        raise ValueError(f"qubit register size must be 1..{MAX_QUBITS}")


def _site_masks(n: int, site: int):
    if not 0 <= site < n:
        raise ValueError("site index out of range")
    mask = 1 << (n - 1 - site)
    idx = np.arange(1 << n)
    bits = (idx >> (n - 1 - site)) & 1
    return mask, idx, bits


def apply_site(psi: np.ndarray, n: int, site: int, axis: str) -> np.ndarray:
    """Apply the spin-1/2 operator j_axis = sigma_axis / 2 at one site."""
    mask, idx, bits = _site_masks(n, site)
    if axis == "z":
        return 0.5 * (1.0 - 2.0 * bits) * psi
    flipped = psi[idx ^ mask]
    if axis == "x":
        return 0.5 * flipped
    if axis == "y":
        # <down|sigma_y|up> = i, <up|sigma_y|down> = -i
        return 0.5j * (2.0 * bits - 1.0) * flipped
    raise ValueError(f"unknown axis {axis!r}")


def well_sites(na: int, nb: int, well: str):
    if well == "a":
        return range(na)
    if well == "b":
        return range(na, na + nb)
    if well == "both":
        return range(na + nb)
    raise ValueError(f"unknown well {well!r}")


def apply_collective(psi: np.ndarray, na: int, nb: int, axis: str, well: str) -> np.ndarray:
    """J_{axis, well} |psi> summed over the well's sites."""
    n = na + nb
    _check_size(n)
    out = np.zeros_like(psi, dtype=complex)
    for site in well_sites(na, nb, well):
        out += apply_site(psi, n, site, axis)
    return out


def apply_gradient(psi: np.ndarray, na: int, nb: int, axis: str) -> np.ndarray:
    return apply_collective(psi, na, nb, axis, "a") - apply_collective(psi, na, nb, axis, "b")


def expectation(psi: np.ndarray, vec: np.ndarray) -> float:
    return float(np.real(np.vdot(psi, vec)))


def brute_qfi(psi: np.ndarray, vec: np.ndarray) -> float:
    """4 Var(A) from the already-applied vector A|psi>."""
    mean = float(np.real(np.vdot(psi, vec)))
    return 4.0 * (float(np.real(np.vdot(vec, vec))) - mean * mean)


def brute_qfi_cross(psi: np.ndarray, va: np.ndarray, vb: np.ndarray) -> float:
    """4 Cov(A, B) from applied vectors."""
    ma = float(np.real(np.vdot(psi, va)))
    mb = float(np.real(np.vdot(psi, vb)))
    return 4.0 * (float(np.real(np.vdot(va, vb))) - ma * mb)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


def qubit_dicke(n: int, k: int) -> np.ndarray:
    """Equal superposition of the C(n, k) basis states with k down spins."""
    _check_size(n)
    if not 0 <= k <= n:
        raise ValueError("excitation number out of range")
    psi = np.zeros(1 << n, dtype=complex)
    amp = 1.0 / sqrt(comb(n, k))
    for sites in combinations(range(n), k):
        index = 0
        for site in sites:
            index |= 1 << (n - 1 - site)
        psi[index] = amp
    return psi


def brute_dicke(na: int, nb: int) -> np.ndarray:
    """|N/2, 0> of all

    N qubits: the zero-projection Dicke state of the whole register (the
    two-well Schmidt structure is never used here)."""
    n = na + nb
    if n % 2:
        raise ValueError("zero total projection needs an even register")
    return qubit_dicke(n, n // 2)


def flip_well_b(psi: np.ndarray, na: int, nb: int) -> np.ndarray:
    """sigma_z on every site of well b (the pi flip, up to a global phase)."""
    n = na + nb
    _check_size(n)
    bmask = 0
    for site in well_sites(na, nb, "b"):
        bmask |= 1 << (n - 1 - site)
    rest = np.arange(1 << n) & bmask
    parity = np.zeros(1 << n, dtype=np.int64)
    while np.any(rest):
        parity ^= rest & 1
        rest >>= 1
    return np.where(parity == 1, -psi, psi)


def brute_flipped_dicke(na: int, nb: int) -> np.ndarray:
    return flip_well_b(brute_dicke(na, nb), na, nb)


def brute_ghz(na: int, nb: int) -> np.ndarray:
    n = na + nb
    _check_size(n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0 / sqrt(2.0)
    psi[(1 << n) - 1] = 1.0 / sqrt(2.0)
    return psi


def brute_flipped_ghz(na: int, nb: int) -> np.ndarray:
    n = na + nb
    _check_size(n)
    psi = np.zeros(1 << n, dtype=complex)
    bmask = 0
    for site in well_sites(na, nb, "b"):
        bmask |= 1 << (n - 1 - site)
    amask = ((1 << n) - 1) ^ bmask
    psi[bmask] = 1.0 / sqrt(2.0)  # a up, b down
    psi[amask] = 1.0 / sqrt(2.0)  # a down, b up
    return psi


def brute_product_dicke(na: int, nb: int) -> np.ndarray:
    if na % 2 or nb % 2:
        raise ValueError("local zero-projection Dicke states need even wells")
    return np.kron(qubit_dicke(na, na // 2), qubit_dicke(nb, nb // 2))


BRUTE_STATES = {
    "dicke": brute_dicke,
    "flipped-dicke": brute_flipped_dicke,
    "ghz": brute_ghz,
    "flipped-ghz": brute_flipped_ghz,
}


def symmetric_embedding(na: int, nb: int) -> np.ndarray:
    """Isometry from the two-well sector basis into the qubit register.

    Column (ka, kb) — package ordering ka (nb + 1) + kb, magnetic numbers
    descending — maps to the product of local qubit Dicke states with ka, kb
    down spins.
    """
    n = na + nb
    _check_size(n)
    cols = []
    local_a = [qubit_dicke(na, ka) for ka in range(na + 1)]
    local_b = [qubit_dicke(nb, kb) for kb in range(nb + 1)]
    for ka in range(na + 1):
        for kb in range(nb + 1):
            cols.append(np.kron(local_a[ka], local_b[kb]))
    v = np.array(cols).T
    gram_residual = float(np.max(np.abs(v.conj().T @ v - np.eye((na + 1) * (nb + 1)))))
    if gram_residual > 1e-12:
        raise AssertionError(f"embedding is not an isometry (residual {gram_residual:.3e})")
    return v


def apply_moment_observable(psi: np.ndarray, na: int, nb: int) -> np.ndarray:
    """(J_{z,a} J_{x,b} - J_{x,a} J_{z,b}) |psi>, factors applied sequentially."""
    za = apply_collective(psi, na, nb, "z", "a")
    xa = apply_collective(psi, na, nb, "x", "a")
    return apply_collective(za, na, nb, "x", "b") - apply_collective(xa, na, nb, "z", "b")


# ---------------------------------------------------------------------------
# the cross-validation suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteCheck:
    name: str
    brute: float
    reference: float

    @property
    def discrepancy(self) -> float:
        return abs(self.brute - self.reference)


def brute_qfi_suite(na: int, nb: int) -> list:
    """Every closed form of the package recomputed on the raw qubit register."""
    from .moment_measurement import (
        dicke_moments,
        moment_precision_closed_form,
        moment_slope_closed_form,
        moment_variance_closed_form,
    )
    from .qfi import closed_form_bound_b1, flipped_dicke_qfi_blocks, reference_qfi_table

    n = na + nb
    if n % 2 or min(na, nb) < 2:
        raise ValueError("the suite runs on even totals with at least two particles per well")
    _check_size(n)
    checks = []
    table = reference_qfi_table(na, nb)
    states = {name: make(na, nb) for name, make in BRUTE_STATES.items()}
    for (state_name, gen_key), value in sorted(table.items()):
        psi = states[state_name]
        if gen_key.endswith("+"):
            vec = apply_collective(psi, na, nb, gen_key[0], "both")
        else:
            vec = apply_gradient(psi, na, nb, gen_key[0])
        checks.append(
            SuiteCheck(
                name=f"table:{state_name}:{gen_key}",
                brute=brute_qfi(psi, vec),
                reference=float(value),
            )
        )
    # transverse-axis rows hold for y as well as x
    for state_name in states:
        psi = states[state_name]
        for gen_key, ref_key in (("y+", "x+"), ("y-", "x-")):
            if gen_key.endswith("+"):
                vec = apply_collective(psi, na, nb, "y", "both")
            else:
                vec = apply_gradient(psi, na, nb, "y")
            checks.append(
                SuiteCheck(
                    name=f"table:{state_name}:{gen_key}",
                    brute=brute_qfi(psi, vec),
                    reference=float(table[(state_name, ref_key)]),
                )
            )

    flipped = states["flipped-dicke"]
    total = 0.0
    for axis in ("x", "y", "z"):
        total += brute_qfi(flipped, apply_gradient(flipped, na, nb, axis))
    checks.append(
        SuiteCheck(
            name="gradient-sum",
            brute=total,
            reference=float(n * (n + 2) + Fraction(4 * na * nb, n - 1)),
        )
    )

    va = apply_collective(flipped, na, nb, "y", "a")
    vb = apply_collective(flipped, na, nb, "y", "b")
    fa, fb, fab = flipped_dicke_qfi_blocks(na, nb)
    checks.append(SuiteCheck("qfi-block:a", brute_qfi(flipped, va), float(fa)))
    checks.append(SuiteCheck("qfi-block:b", brute_qfi(flipped, vb), float(fb)))
    checks.append(SuiteCheck("qfi-block:ab", brute_qfi_cross(flipped, va, vb), float(fab)))
    f00 = brute_qfi(flipped, va + vb)
    f01 = brute_qfi(flipped, va) - brute_qfi(flipped, vb)
    f11 = brute_qfi(flipped, va - vb)
    checks.append(
        SuiteCheck(
            name="gradient-bound",
            brute=f11 - (f01 * f01 / f00 if f00 > 1e-12 else 0.0),
            reference=float(closed_form_bound_b1(na, nb)),
        )
    )

    for flipped_probe in (False, True):
        if n <= 3:
            continue
        psi = states["flipped-dicke"] if flipped_probe else states["dicke"]
        tag = "flipped" if flipped_probe else "plain"
        mom = dicke_moments(na, nb, flipped=flipped_probe)
        za = apply_collective(psi, na, nb, "z", "a")
        zb = apply_collective(psi, na, nb, "z", "b")
        xa = apply_collective(psi, na, nb, "x", "a")
        xb = apply_collective(psi, na, nb, "x", "b")
        checks.append(SuiteCheck(f"moment:{tag}:jz2", expectation(za, za), float(mom.jz2)))
        checks.append(SuiteCheck(f"moment:{tag}:jza-jzb", float(np.real(np.vdot(za, zb))), float(mom.jza_jzb)))
        checks.append(SuiteCheck(f"moment:{tag}:jl2-a", expectation(xa, xa), float(mom.jl2_a)))
        checks.append(SuiteCheck(f"moment:{tag}:jl2-b", expectation(xb, xb), float(mom.jl2_b)))
        checks.append(SuiteCheck(f"moment:{tag}:jla-jlb", float(np.real(np.vdot(xa, xb))), float(mom.jla_jlb)))
        zza = apply_collective(za, na, nb, "z", "a")
        zzb = apply_collective(zb, na, nb, "z", "b")
        xxa = apply_collective(xa, na, nb, "x", "a")
        xxb = apply_collective(xb, na, nb, "x", "b")
        checks.append(
            SuiteCheck(f"moment:{tag}:jz4-cross", float(np.real(np.vdot(zza, zzb))), float(mom.jz4_cross))
        )
        checks.append(
            SuiteCheck(f"moment:{tag}:jx2a-jz2b", float(np.real(np.vdot(xxa, zzb))), float(mom.jx2a_jz2b))
        )
        checks.append(
            SuiteCheck(f"moment:{tag}:jz2a-jx2b", float(np.real(np.vdot(zza, xxb))), float(mom.jz2a_jx2b))
        )
        term1 = np.vdot(
            apply_collective(za, na, nb, "x", "a"),
            apply_collective(zb, na, nb, "x", "b"),
        )
        checks.append(SuiteCheck(f"moment:{tag}:zx-cross", 2.0 * float(np.real(term1)), float(mom.zx_cross_sum)))
        mvec = apply_moment_observable(psi, na, nb)
        m_mean = expectation(psi, mvec)
        m_var = float(np.real(np.vdot(mvec, mvec))) - m_mean * m_mean
        checks.append(SuiteCheck(f"moment:{tag}:m-mean", m_mean, float(mom.m_mean)))
        checks.append(SuiteCheck(f"moment:{tag}:m-var", m_var, float(mom.m_var)))
        grad = apply_gradient(psi, na, nb, "y")
        slope = -2.0 * float(np.imag(np.vdot(grad, mvec)))
        checks.append(SuiteCheck(f"moment:{tag}:m-slope", slope, float(mom.slope)))
        if flipped_probe:
            checks.append(
                SuiteCheck(
                    name="moment:precision",
                    brute=slope * slope / m_var,
                    reference=float(moment_precision_closed_form(na, nb)),
                )
            )
            checks.append(SuiteCheck("moment:var-closed", m_var, float(moment_variance_closed_form(na, nb))))
            checks.append(SuiteCheck("moment:slope-closed", slope, float(moment_slope_closed_form(na, nb))))
    return checks


def suite_max_discrepancy(checks) -> float:
    return max(check.discrepancy for check in checks)
