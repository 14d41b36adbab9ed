"""Ideal holonomic gates and verification of the conditions behind them.

Both gate families are involutory reflections of the logical space.  The
single-qubit gate comes from one period of the Lambda coupling: the dark
state is left alone while the bright state picks up a pi phase, which in
the computational basis is the reflection u1(theta, phi).  The two-qubit
hopping Hamiltonian does the same thing independently inside its two
invariant triples, giving the block gate u2(vartheta, varphi).

verify_holonomy re-derives the gate numerically: it propagates the
restricted Hamiltonian over one period and checks (a) the logical span
returns onto itself, (b) the evolving logical frame never sees the
Hamiltonian (parallel transport), and (c) the propagator equals the
closed-form gate after global-phase alignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import models
from .hilbert import Operator, CompositeSpace

CYCLIC_TOL = 1e-8
TRANSPORT_TOL = 1e-8
GATE_TOL = 1e-8
N_TRANSPORT_SAMPLES = 200


def u1(theta: float, phi: float) -> np.ndarray:
    """Single-qubit reflection: [[cos t, sin t e^{-i p}], [sin t e^{i p}, -cos t]]."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s * np.exp(-1j * phi)], [s * np.exp(1j * phi), -c]])


def u2(vartheta: float, varphi: float) -> np.ndarray:
    """Two-qubit block reflection on (|00>,|01>,|10>,|11>); entangling for generic angles."""
    c, s = math.cos(vartheta), math.sin(vartheta)
    ep, em = np.exp(1j * varphi), np.exp(-1j * varphi)
    out = np.zeros((4, 4), dtype=complex)
    out[0, 0], out[0, 1] = c, s * em
    out[1, 0], out[1, 1] = s * ep, -c
    out[2, 2], out[2, 3] = -c, s * em
    out[3, 2], out[3, 3] = s * ep, c
    return out


def dressed_states(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Dark and bright combinations of the logical basis for the Lambda coupling."""
    ch, sh = math.cos(theta / 2.0), math.sin(theta / 2.0)
    d = np.array([ch, sh * np.exp(1j * phi)], dtype=complex)
    b = np.array([sh * np.exp(-1j * phi), -ch], dtype=complex)
    return d, b


def align_phase(u: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Remove the global phase of u relative to target via the largest element."""
    idx = np.unravel_index(np.argmax(np.abs(u)), u.shape)
    pu = u[idx] / abs(u[idx])
    tv = target[idx]
    pt = tv / abs(tv) if abs(tv) > 1e-12 else 1.0
    return u * (pt / pu)


def _expm_herm(h: np.ndarray, t: float) -> np.ndarray:
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def lambda_block_1q(cal: models.DriveCalibration) -> np.ndarray:
    """The coupling restricted to (|0>_L, |1>_L, |E>_L): a 3x3 Lambda matrix."""
    g = cal.lambda1 / math.hypot(cal.J0_a1, cal.J1_a1)
    h = np.zeros((3, 3), dtype=complex)
    h[0, 2] = g * cal.J1_a1
    h[1, 2] = -g * cal.J0_a1 * np.exp(1j * cal.phi)
    return h + h.conj().T


@dataclass(frozen=True)
class HolonomyReport:
    cyclic_leakage: float
    transport_violation: float
    gate_error: float
    passed: bool

    def __str__(self):
        flag = "pass" if self.passed else "FAIL"
        return (
            f"holonomy check [{flag}]: leakage {self.cyclic_leakage:.2e}, "
            f"transport {self.transport_violation:.2e}, gate error {self.gate_error:.2e}"
        )


def _verify_block(h: np.ndarray, tau: float, logical_idx, target: np.ndarray) -> HolonomyReport:
    dim = h.shape[0]
    n_log = len(logical_idx)
    basis = np.zeros((dim, n_log), dtype=complex)
    for col, i in enumerate(logical_idx):
        basis[i, col] = 1.0

    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    u_final = (v * np.exp(-1j * w * tau)) @ v.conj().T
    block = basis.conj().T @ u_final @ basis

    # cyclic condition: the final propagator must not leak out of the span
    outside = u_final @ basis - basis @ block
    leakage = float(np.max(np.abs(outside)))

    # parallel transport: the evolving logical frame never sees the coupling;
    # violations are reported relative to the coupling scale
    scale = max(float(np.max(np.abs(w))), 1e-300)
    worst = 0.0
    for k in range(N_TRANSPORT_SAMPLES):
        t = tau * k / (N_TRANSPORT_SAMPLES - 1)
        cols = (v * np.exp(-1j * w * t)) @ (v.conj().T @ basis)
        m = cols.conj().T @ h @ cols
        worst = max(worst, float(np.max(np.abs(m))) / scale)

    err = float(np.max(np.abs(align_phase(block, target) - target)))
    passed = leakage <= CYCLIC_TOL and worst <= TRANSPORT_TOL and err <= GATE_TOL
    return HolonomyReport(leakage, worst, err, passed)


def verify_holonomy(cal: models.DriveCalibration, tau: float | None = None) -> HolonomyReport:
    """Check the single-qubit cycle on the restricted Lambda block.

    tau overrides the calibrated period; off-period values break the
    cyclic condition and are reported, not raised.
    """
    h = lambda_block_1q(cal)
    return _verify_block(h, cal.tau if tau is None else tau, (0, 1), u1(cal.theta, cal.phi))


def verify_holonomy_2q(drive: models.TwoQubitDrive, tau: float | None = None) -> HolonomyReport:
    """Check the two-qubit cycle on the six-state restriction of the hopping Hamiltonian."""
    space = models.two_qubit_space(1)
    kets = models.logical_kets_2q(space)
    order = ("00", "01", "10", "11", "E1", "E2")
    basis = np.stack([kets[k] for k in order])  # (6, D)
    h_full = models.h_two_qubit(drive, space).matrix
    h6 = basis.conj() @ h_full @ basis.T
    t = drive.tau if tau is None else tau
    return _verify_block(h6, t, (0, 1, 2, 3), u2(drive.vartheta, drive.varphi))


def propagator_restricted(h: Operator, tau: float, basis_kets: np.ndarray) -> np.ndarray:
    """exp(-i h tau) compressed onto the rows of basis_kets."""
    u = _expm_herm(h.matrix, tau)
    return basis_kets.conj() @ u @ basis_kets.T
