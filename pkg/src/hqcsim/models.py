"""Hamiltonians and drive calibration for the holonomic gate scheme.

A transmon sits between two detuned resonators; modulating the transmon
frequency with a two-tone microwave generates sidebands (Bessel-weighted
harmonics of the tones) that bridge both qubit-resonator detunings at
once.  With the tone frequencies matched to the detunings, the static
part of the rotating-frame Hamiltonian is a resonant Lambda coupling with
tunable amplitudes and phases; everything else oscillates at multiples of
the tone-difference frequency Delta.  Two-qubit interactions come from a
flux-modulated grounding SQUID that induces photon hopping between four
resonator modes.

All frequencies, couplings, and rates in this module are angular (rad/s).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hilbert import CompositeSpace, Operator, SIGMA_MINUS, SIGMA_Z, destroy, embed, number_op

BESSEL_SERIES_CUTOVER = 12.0
BESSEL_MAX_X = 50.0
DEFAULT_M_MAX = 8


class CalibrationError(ValueError):
    """Drive parameters outside the solvable / physical range."""


# ---------------------------------------------------------------------------
# Bessel functions of the first kind, integer order.
#
# Arguments in this package stay below ~2 (modulation indices), where the
# alternating power series converges in a handful of terms with no
# cancellation trouble.  The series is kept accurate up to moderate x and
# a downward (Miller) recurrence covers the rest of the supported range.


@lru_cache(maxsize=8192)
def bessel_j(m: int, x: float) -> float:
    """J_m(x) for integer m >= 0, |x| <= 50, absolute error below 1e-10."""
    if m < 0:
        raise CalibrationError(f"order must be >= 0, got {m}")
    if abs(x) > BESSEL_MAX_X:
        raise CalibrationError(f"|x| = {abs(x)} outside supported range {BESSEL_MAX_X}")
    if x < 0:
        # parity: J_m(-x) = (-1)^m J_m(x)
        return (-1.0) ** m * bessel_j(m, -x)
    if x <= BESSEL_SERIES_CUTOVER:
        return _bessel_series(m, x)
    return _bessel_miller(m, x)


def _bessel_series(m: int, x: float) -> float:
    half = x / 2.0
    term = half**m / math.factorial(m)
    total = term
    for k in range(1, 300):
        term *= -(half * half) / (k * (k + m))
        total += term
        if abs(term) <= 1e-16 * abs(total):
            break
    return total


def _bessel_miller(m: int, x: float) -> float:
    # downward recurrence from far above max(m, x); normalized with the
    # even-order sum rule J0 + 2*sum J_2k = 1
    start = max(int(1.2 * x) + 30, m + 30)
    start += start % 2
    jp, j = 0.0, 1e-30
    norm = 0.0
    result = 0.0
    for n in range(start, 0, -1):
        jm = (2.0 * n / x) * j - jp
        jp, j = j, jm
        if abs(j) > 1e250:
            jp *= 1e-250
            j *= 1e-250
            norm *= 1e-250
            result *= 1e-250
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm += 2.0 * j
        if n - 1 == m:
            result = j
    norm += j
    if m == 0:
        result = j
    return result / norm


def _bisect(f, a: float, b: float, tol: float = 1e-12) -> float:
    # tighter than the 1e-8 the callers promise: the slack keeps the
    # calibrated gate angles from rate-limiting downstream 1e-8 checks
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise CalibrationError(f"no sign change on [{a}, {b}]")
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


@lru_cache(maxsize=1)
def alpha_equal_bessel() -> float:
    """The modulation index where J0 and J1 cross, bisected in (1, 2)."""
    return _bisect(lambda x: bessel_j(0, x) - bessel_j(1, x), 1.0, 2.0)


@lru_cache(maxsize=1)
def shared_bessel_value() -> float:
    """J0 = J1 at the crossing index; the second tone is always held there."""
    return bessel_j(0, alpha_equal_bessel())


def solve_alpha_for_theta(theta: float) -> float:
    """Invert tan(theta/2) = J1(a)/J0(a) for the first-tone index a.

    Valid for theta in (0, pi) as long as the root stays below the first
    zero of J0 (about 2.405), where the ratio diverges.
    """
    if not 0.0 < theta < math.pi:
        raise CalibrationError(f"theta must lie in (0, pi), got {theta}")
    tan_half = math.tan(theta / 2.0)

    def f(x):
        return bessel_j(1, x) - tan_half * bessel_j(0, x)

    if f(2.4) <= 0.0:
        raise CalibrationError(f"theta = {theta} requires a modulation index beyond J0's first zero")
    return _bisect(f, 1e-12, 2.4)


# ---------------------------------------------------------------------------
# Parameter records.


@dataclass(frozen=True)
class SingleQubitParams:
    """Frequencies and couplings of one transmon between two resonators.

    g is the overall coupling scale; the physical transmon-resonator
    couplings are g1 = g2 = g/J with J the shared Bessel value, so that
    the calibrated resonant amplitudes come out as g*J1(alpha1) and
    g*J0(alpha1).  eps/nu/phi_drive describe the two modulation tones and
    stay None until a calibration is applied.
    """

    omega_q: float
    omega_c1: float
    omega_c2: float
    g: float
    eps: tuple[float, float] | None = None
    nu: tuple[float, float] | None = None
    phi_drive: tuple[float, float] | None = None

    def __post_init__(self):
        if self.delta1 <= 0 or self.delta2 <= 0:
            raise CalibrationError(
                f"resonators must sit above the transmon: detunings {self.delta1}, {self.delta2}"
            )
        g_bare = self.g / shared_bessel_value()
        if min(self.delta1, self.delta2) < 10.0 * g_bare:
            warnings.warn(
                "dispersive-regime margin is thin: detuning below 10x the bare coupling",
                stacklevel=2,
            )

    @property
    def delta1(self) -> float:
        return self.omega_c1 - self.omega_q

    @property
    def delta2(self) -> float:
        return self.omega_c2 - self.omega_q

    @property
    def delta(self) -> float:
        """Tone-difference frequency, the slowest leftover oscillation."""
        return abs(self.delta2 - self.delta1)

    @property
    def g_bare(self) -> float:
        return self.g / shared_bessel_value()

    @property
    def alpha(self) -> tuple[float, float] | None:
        if self.eps is None or self.nu is None:
            return None
        return (self.eps[0] / self.nu[0], self.eps[1] / self.nu[1])

    @classmethod
    def from_reduced_g(cls, omega_q: float, omega_c1: float, omega_c2: float,
                       g_reduced: float) -> "SingleQubitParams":
        """Build params from the reduced coupling g/J (the quoted 2pi x 25 MHz)."""
        return cls(omega_q, omega_c1, omega_c2, g_reduced * shared_bessel_value())


def standard_single_qubit() -> SingleQubitParams:
    """The reference operating point used throughout: 6 / 6.5 / 6.75 GHz, g/J = 2pi x 25 MHz."""
    twopi = 2.0 * math.pi
    return SingleQubitParams.from_reduced_g(
        twopi * 6.0e9, twopi * 6.5e9, twopi * 6.75e9, twopi * 25.0e6
    )


@dataclass(frozen=True)
class DriveCalibration:
    """Derived drive quantities for one target gate angle pair (theta, phi)."""

    theta: float
    phi: float
    alpha1: float
    alpha2: float
    J: float
    J0_a1: float
    J1_a1: float
    lambda1: float
    tau: float
    phi1: float
    phi2: float
    nu: tuple[float, float]
    eps: tuple[float, float]

    def __post_init__(self):
        if self.lambda1 <= 0:
            raise CalibrationError("effective Rabi frequency must be positive")
        assert abs(self.tau * self.lambda1 - math.pi) < 1e-12


def calibrate(params: SingleQubitParams, theta: float, phi: float) -> DriveCalibration:
    """Pick tone amplitudes and phases realizing the (theta, phi) Lambda coupling.

    Tone frequencies are locked to the detunings; the second tone index is
    held at the J0 = J1 crossing, the first is inverted from theta.  The
    first tone phase is fixed at -pi/2, which is the gauge in which the
    static part of the sideband expansion has a real positive amplitude on
    channel 1; the second tone phase then carries the gate phase phi.
    """
    alpha2 = alpha_equal_bessel()
    alpha1 = solve_alpha_for_theta(theta)
    j0, j1 = bessel_j(0, alpha1), bessel_j(1, alpha1)
    lam = params.g * math.hypot(j0, j1)
    phi1 = -math.pi / 2.0
    phi2 = phi + phi1 - math.pi
    nu = (params.delta1, params.delta2)
    return DriveCalibration(
        theta=theta,
        phi=phi,
        alpha1=alpha1,
        alpha2=alpha2,
        J=shared_bessel_value(),
        J0_a1=j0,
        J1_a1=j1,
        lambda1=lam,
        tau=math.pi / lam,
        phi1=phi1,
        phi2=phi2,
        nu=nu,
        eps=(alpha1 * nu[0], alpha2 * nu[1]),
    )


def apply_drive(params: SingleQubitParams, cal: DriveCalibration) -> SingleQubitParams:
    """Return a copy of params with the calibrated two-tone drive filled in."""
    return SingleQubitParams(
        omega_q=params.omega_q,
        omega_c1=params.omega_c1,
        omega_c2=params.omega_c2,
        g=params.g,
        eps=cal.eps,
        nu=cal.nu,
        phi_drive=(cal.phi1, cal.phi2),
    )


# ---------------------------------------------------------------------------
# Spaces and logical bases.
#
# Single-qubit block: |TLR1, transmon, TLR2>.  The logical qubit lives in
# the single-excitation subspace: |0>_L = |100>, |1>_L = |001>, with
# |E>_L = |010> the ancillary transmon excitation.


def single_qubit_space(cutoff: int = 1) -> CompositeSpace:
    if not 1 <= cutoff <= 3:
        raise ValueError(f"resonator Fock cutoff must be 1..3, got {cutoff}")
    return CompositeSpace((cutoff + 1, 2, cutoff + 1))


def logical_kets_1q(space: CompositeSpace) -> dict[str, np.ndarray]:
    return {
        "0": space.basis_state((1, 0, 0)),
        "1": space.basis_state((0, 0, 1)),
        "E": space.basis_state((0, 1, 0)),
    }


# Two-qubit block: |TLR1, q1, TLR2, TLR3, q2, TLR4>.  Logical states pair
# the single-qubit encodings of both blocks; E1/E2 are the bus states with
# the photon moved onto TLR2.

TLR_POSITIONS_2Q = (0, 2, 3, 5)


def two_qubit_space(cutoff: int = 1) -> CompositeSpace:
    if not 1 <= cutoff <= 3:
        raise ValueError(f"resonator Fock cutoff must be 1..3, got {cutoff}")
    d = cutoff + 1
    return CompositeSpace((d, 2, d, d, 2, d))


def logical_kets_2q(space: CompositeSpace) -> dict[str, np.ndarray]:
    return {
        "00": space.basis_state((1, 0, 0, 1, 0, 0)),
        "01": space.basis_state((1, 0, 0, 0, 0, 1)),
        "10": space.basis_state((0, 0, 1, 1, 0, 0)),
        "11": space.basis_state((0, 0, 1, 0, 0, 1)),
        "E1": space.basis_state((1, 0, 1, 0, 0, 0)),
        "E2": space.basis_state((0, 0, 0, 1, 0, 1)),
    }


def number_total(space: CompositeSpace, positions=None) -> Operator:
    """Total occupation over the given subsystem positions (default: all)."""
    if positions is None:
        positions = range(space.n_subsystems)
    total = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    for p in positions:
        total += embed(number_op(space.dims[p]), space, p).matrix
    return Operator(space, total)


# ---------------------------------------------------------------------------
# Single-qubit Hamiltonians.


def _jc_couplings(params: SingleQubitParams, space: CompositeSpace):
    a1 = embed(destroy(space.dims[0]), space, 0).matrix
    a2 = embed(destroy(space.dims[2]), space, 2).matrix
    sm = embed(SIGMA_MINUS, space, 1).matrix
    return a1, a2, sm


def h_lab(params: SingleQubitParams, t: float, space: CompositeSpace | None = None) -> Operator:
    """Lab-frame Hamiltonian with the modulated transmon frequency.

    omega_q(t) = omega_q + sum_j eps_j sin(nu_j t - phi_j); the
    transmon-resonator exchange is kept in rotating-wave form (the
    counter-rotating pieces sit ~240 coupling strengths away).
    """
    if space is None:
        space = single_qubit_space()
    wq = params.omega_q
    if params.eps is not None:
        for e, n, p in zip(params.eps, params.nu, params.phi_drive):
            wq += e * math.sin(n * t - p)
    a1, a2, sm = _jc_couplings(params, space)
    sz = embed(SIGMA_Z, space, 1).matrix
    n1 = embed(number_op(space.dims[0]), space, 0).matrix
    n2 = embed(number_op(space.dims[2]), space, 2).matrix
    g_bare = params.g_bare
    v = g_bare * (a1.conj().T @ sm + a2.conj().T @ sm)
    h = 0.5 * wq * sz + params.omega_c1 * n1 + params.omega_c2 * n2 + v + v.conj().T
    return Operator(space, h)


def _tone_factor(alpha: float, nu: float, phi: float, t: float, m_max: int) -> complex:
    # truncated harmonic expansion of exp(i alpha cos(nu t - phi)):
    # sum over m of i^m J_m(alpha) e^{i m (nu t - phi)}; the -m term carries
    # i^{-m} J_{-m} = i^m J_m, so each pair contributes i^m J_m 2 cos(m psi)
    total = complex(bessel_j(0, alpha))
    psi = nu * t - phi
    for m in range(1, m_max + 1):
        jm = bessel_j(m, alpha)
        total += (1j**m) * jm * (np.exp(1j * m * psi) + np.exp(-1j * m * psi))
    return total


def h_rotating(params: SingleQubitParams, t: float, m_max: int = DEFAULT_M_MAX,
               space: CompositeSpace | None = None) -> Operator:
    """Rotating-frame Hamiltonian with the two-tone phase factor expanded in sidebands.

    Both exchange channels carry the same product of per-tone harmonic
    sums, truncated at |m| <= m_max per tone.  With the resonance
    calibration applied, the time-independent piece of this operator is
    h_effective and the slowest leftover oscillation runs at Delta.
    """
    if m_max < 3:
        raise CalibrationError(f"m_max must be >= 3, got {m_max}")
    if space is None:
        space = single_qubit_space()
    if params.g == 0.0:
        return Operator(space, np.zeros((space.total_dim, space.total_dim), dtype=complex))
    if params.eps is None:
        raise CalibrationError("drive not configured; calibrate() and apply_drive() first")
    al = params.alpha
    factor = 1.0 + 0.0j
    for j in range(2):
        factor *= _tone_factor(al[j], params.nu[j], params.phi_drive[j], t, m_max)
    a1, a2, sm = _jc_couplings(params, space)
    g_bare = params.g_bare
    v = g_bare * factor * (
        np.exp(1j * params.delta1 * t) * (a1.conj().T @ sm)
        + np.exp(1j * params.delta2 * t) * (a2.conj().T @ sm)
    )
    return Operator(space, v + v.conj().T)


def h_effective(cal: DriveCalibration, params: SingleQubitParams,
                space: CompositeSpace | None = None) -> Operator:
    """Static resonant exchange left after sideband matching.

    g [ J1(a1) a1+ s-  -  J0(a1) e^{i phi} a2+ s- ] + h.c.; restricted to
    the single-excitation subspace this is the Lambda coupling with Rabi
    frequency lambda1 and mixing angle theta.
    """
    if space is None:
        space = single_qubit_space()
    a1, a2, sm = _jc_couplings(params, space)
    v = params.g * (
        cal.J1_a1 * (a1.conj().T @ sm)
        - cal.J0_a1 * np.exp(1j * cal.phi) * (a2.conj().T @ sm)
    )
    return Operator(space, v + v.conj().T)


def h_correction(cal: DriveCalibration, params: SingleQubitParams, t: float,
                 space: CompositeSpace | None = None) -> Operator:
    """Leading leftover oscillation: the cross-sideband pair running at +-Delta.

    Each tone's dominant sideband also addresses the other channel,
    detuned by the tone-difference frequency Delta; this term averages to
    zero over a 2pi/Delta period but is the largest coherent residual.
    """
    if space is None:
        space = single_qubit_space()
    a1, a2, sm = _jc_couplings(params, space)
    delta = params.delta
    v = params.g * (
        cal.J1_a1 * np.exp(1j * delta * t) * (a2.conj().T @ sm)
        + cal.J0_a1 * np.exp(1j * (cal.phi - delta * t)) * (a1.conj().T @ sm)
    )
    return Operator(space, v + v.conj().T)


# ---------------------------------------------------------------------------
# Two-qubit Hamiltonian.


@dataclass(frozen=True)
class TwoQubitDrive:
    """Two flux-modulation tones on the grounding SQUID, driving photon hopping.

    Tone 1 bridges TLR2-TLR3 with strength eta1, tone 2 bridges TLR2-TLR4
    with strength eta2.  omega_tones may be left None when the tones are
    resonance-matched by construction.
    """

    eta: tuple[float, float]
    varphi_tones: tuple[float, float] = (math.pi, 0.0)
    omega_tones: tuple[float, float] | None = None

    def __post_init__(self):
        if self.eta[0] < 0 or self.eta[1] < 0:
            raise CalibrationError(f"hopping strengths must be >= 0, got {self.eta}")

    @property
    def lambda2(self) -> float:
        return math.hypot(self.eta[0], self.eta[1])

    @property
    def vartheta(self) -> float:
        return 2.0 * math.atan2(self.eta[0], self.eta[1])

    @property
    def varphi(self) -> float:
        return self.varphi_tones[0] - self.varphi_tones[1] - math.pi

    @property
    def tau(self) -> float:
        if self.lambda2 == 0:
            raise CalibrationError("gate time undefined for zero coupling")
        return math.pi / self.lambda2


def h_two_qubit(drive: TwoQubitDrive, space: CompositeSpace | None = None) -> Operator:
    """Photon hopping among the bus resonators: eta1 e^{i p1} a2+ a3 + eta2 e^{i p2} a2+ a4 + h.c."""
    if space is None:
        space = two_qubit_space()
    a = {p: embed(destroy(space.dims[p]), space, p).matrix for p in (2, 3, 5)}
    v = (
        drive.eta[0] * np.exp(1j * drive.varphi_tones[0]) * (a[2].conj().T @ a[3])
        + drive.eta[1] * np.exp(1j * drive.varphi_tones[1]) * (a[2].conj().T @ a[5])
    )
    return Operator(space, v + v.conj().T)


def decompose_commuting(h: Operator, space: CompositeSpace | None = None):
    """Split the hopping Hamiltonian into the two Lambda blocks it drives.

    The six-state logical subspace falls apart into {|00>,|01>,|E1>} and
    {|10>,|11>,|E2>}; projecting onto each triple gives operators with
    orthogonal supports, hence exactly commuting.
    """
    if space is None:
        space = h.space
    kets = logical_kets_2q(space)
    pa = sum(np.outer(kets[k], kets[k].conj()) for k in ("00", "01", "E1"))
    pb = sum(np.outer(kets[k], kets[k].conj()) for k in ("10", "11", "E2"))
    ha = Operator(space, pa @ h.matrix @ pa)
    hb = Operator(space, pb @ h.matrix @ pb)
    return ha, hb
