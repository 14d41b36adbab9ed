"""Electromagnetics of three resonators grounded through a common SQUID.

The SQUID is linearized into an effective inductance L_J shared by the
three transmission lines, which hybridizes their half-wave modes.  Mode
profiles are sin(k x) on each line with a common junction node; the
allowed wavenumbers solve a 3x3 homogeneous system whose determinant is
scanned and bisected near each line's uncoupled pi/L value.  Quantization
normalizes the profiles so each mode carries an independent harmonic
oscillator, which fixes the zero-point flux swing at the junction and,
from it, the strength of flux-modulation-induced photon hopping.

SI units throughout: lengths m, inductance/capacitance per length H/m and
F/m, fluxes Wb, frequencies rad/s.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

# CODATA 2018 exact values
H_PLANCK = 6.62607015e-34
E_CHARGE = 1.602176634e-19
HBAR = H_PLANCK / (2.0 * math.pi)
PHI0 = H_PLANCK / (2.0 * E_CHARGE)  # flux quantum h/2e
PHI0_RED = PHI0 / (2.0 * math.pi)

WINDOW = (0.8, 1.2)
N_SCAN = 2000
K_REL_TOL = 1e-10
TONE_MATCH_TOL = 2.0 * math.pi * 1.0e3  # 1 kHz on the resonance condition


class SolverError(RuntimeError):
    """Root scan did not produce the expected mode structure."""


class ValidityError(ValueError):
    """Input outside the regime the formulas are good for."""


@dataclass(frozen=True)
class SQUIDParams:
    """Junction capacitance, maximal critical current, dc flux bias."""

    c_j: float
    i_j0: float
    phi_dc: float

    def __post_init__(self):
        if self.c_j <= 0 or self.i_j0 <= 0:
            raise ValidityError("junction capacitance and critical current must be positive")
        if self.e_j <= 0:
            raise ValidityError(
                f"flux bias {self.phi_dc / PHI0:.3f} flux quanta puts the effective "
                "Josephson energy at or below zero"
            )

    @property
    def e_j0(self) -> float:
        return PHI0_RED * self.i_j0

    @property
    def e_j(self) -> float:
        """Effective Josephson energy at the dc working point."""
        return self.e_j0 * math.cos(math.pi * self.phi_dc / PHI0)

    @property
    def l_j(self) -> float:
        return PHI0_RED**2 / self.e_j

    @property
    def e_c(self) -> float:
        return E_CHARGE**2 / (2.0 * self.c_j)

    @property
    def omega_p(self) -> float:
        """Plasma frequency of the linearized junction."""
        return math.sqrt(8.0 * self.e_c * self.e_j) / HBAR


@dataclass(frozen=True)
class TLRNetwork:
    """Three transmission lines with a shared grounding SQUID.

    l_j_override replaces the SQUID's linearized inductance in the mode
    problem only; it exists so the decoupled L_J -> 0 limit can be checked
    against the bare half-wave frequencies.
    """

    l: float
    c: float
    lengths: tuple[float, float, float]
    squid: SQUIDParams
    l_j_override: float | None = None

    def __post_init__(self):
        if self.l <= 0 or self.c <= 0 or any(x <= 0 for x in self.lengths):
            raise ValidityError("line constants and lengths must be positive")
        ls = sorted(self.lengths)
        for a, b in zip(ls, ls[1:]):
            if abs(b - a) < 1e-6 * b:
                raise ValidityError(
                    f"degenerate lengths {a} and {b}: the scheme needs distinct frequencies"
                )
        if self.l_j > 0.05 * self.l * min(self.lengths):
            warnings.warn(
                "junction inductance is not small against the line inductance; "
                "the near-half-wave bracketing may miss roots",
                stacklevel=2,
            )

    @property
    def v(self) -> float:
        return 1.0 / math.sqrt(self.l * self.c)

    @property
    def l_j(self) -> float:
        return self.squid.l_j if self.l_j_override is None else self.l_j_override


def standard_network() -> TLRNetwork:
    """The reference geometry: 9.16/8.46/8.2 mm lines, 29.5 uA junction at 0.33 flux quanta."""
    squid = SQUIDParams(c_j=0.5e-12, i_j0=29.5e-6, phi_dc=0.33 * PHI0)
    return TLRNetwork(l=4.1e-7, c=1.6e-10, lengths=(9.16e-3, 8.46e-3, 8.2e-3), squid=squid)


@dataclass(frozen=True)
class Eigenmode:
    """One hybridized mode: wavenumber, frequency, per-line amplitudes.

    f_alpha(x) = amplitudes[alpha] * sin(k x); end_flux is the common
    junction value f_alpha(L_alpha), and phi_zpf the zero-point flux swing
    it produces at the junction.
    """

    index: int
    k: float
    omega: float
    amplitudes: tuple[float, float, float]
    end_flux: float
    phi_zpf: float

    def profile(self, alpha: int, x) -> np.ndarray:
        return self.amplitudes[alpha] * np.sin(self.k * np.asarray(x))


def _system_matrix(network: TLRNetwork, k: float) -> np.ndarray:
    lj = network.l_j
    bulk = network.l - network.squid.c_j * lj * k * k / network.c
    m = np.empty((3, 3))
    for a, la in enumerate(network.lengths):
        for b, lb in enumerate(network.lengths):
            m[a, b] = lj * k * math.cos(k * lb)
        m[a, a] += bulk * math.sin(k * la)
    return m


def char_det(network: TLRNetwork, k: float) -> float:
    """Determinant whose zeros are the allowed wavenumbers; ~k^3 near zero."""
    if k <= 0:
        raise ValidityError(f"wavenumber must be positive, got {k}")
    return float(np.linalg.det(_system_matrix(network, k)))


def _bisect_det(network: TLRNetwork, a: float, b: float, fa: float, fb: float) -> float:
    while (b - a) > K_REL_TOL * b:
        mid = 0.5 * (a + b)
        fm = char_det(network, mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def solve_eigenmodes(network: TLRNetwork) -> list[Eigenmode]:
    """All three hybridized modes, sorted by frequency.

    Each line contributes a scan window around its uncoupled pi/L
    wavenumber; windows overlap, so roots are pooled and deduplicated
    before checking that exactly three distinct modes came out.
    """
    if network.l_j == 0.0:
        # decoupled limit: exact half-wave modes, one per line
        ks = sorted(math.pi / la for la in network.lengths)
        return [_assemble_mode(network, i, k) for i, k in enumerate(ks)]

    roots: list[float] = []
    diagnostics: list[str] = []
    for la in network.lengths:
        k_lo, k_hi = WINDOW[0] * math.pi / la, WINDOW[1] * math.pi / la
        ks = np.linspace(k_lo, k_hi, N_SCAN)
        ds = np.array([char_det(network, k) for k in ks])
        hits = np.nonzero(ds[:-1] * ds[1:] < 0)[0]
        diagnostics.append(
            f"window [{k_lo:.2f}, {k_hi:.2f}] 1/m: {len(hits)} sign changes"
        )
        for i in hits:
            roots.append(_bisect_det(network, ks[i], ks[i + 1], ds[i], ds[i + 1]))
        roots.extend(ks[np.nonzero(ds == 0.0)[0]])

    roots.sort()
    distinct: list[float] = []
    for r in roots:
        if not distinct or (r - distinct[-1]) > 1e-9 * r:
            distinct.append(r)
    if len(distinct) != 3:
        raise SolverError(
            f"expected 3 modes, found {len(distinct)}; " + "; ".join(diagnostics)
        )
    return [_assemble_mode(network, i, k) for i, k in enumerate(distinct)]


def _assemble_mode(network: TLRNetwork, index: int, k: float) -> Eigenmode:
    if network.l_j == 0.0:
        c = np.zeros(3)
        c[int(np.argmin([abs(k - math.pi / la) for la in network.lengths]))] = 1.0
    else:
        m = _system_matrix(network, k)
        _, _, vh = np.linalg.svd(m)
        c = vh[-1].real  # null vector of the (real) boundary system

    # junction node is shared; average the end values and orient positive
    ends = c * np.sin(k * np.asarray(network.lengths))
    end = float(np.mean(ends))
    if end < 0 or (end == 0 and c.sum() < 0):
        c, ends, end = -c, -ends, -end

    # normalize so the mode quantizes to a unit harmonic oscillator:
    # sum_a int f_a^2 dx + (C_J/c) f(L)^2 = 1
    seg = [
        ca**2 * (la / 2.0 - math.sin(2.0 * k * la) / (4.0 * k))
        for ca, la in zip(c, network.lengths)
    ]
    norm2 = sum(seg) + (network.squid.c_j / network.c) * end**2
    scale = 1.0 / math.sqrt(norm2)
    c = c * scale
    end *= scale

    omega = network.v * k
    phi_zpf = end * math.sqrt(HBAR / (2.0 * omega * network.c))
    return Eigenmode(
        index=index,
        k=k,
        omega=omega,
        amplitudes=(float(c[0]), float(c[1]), float(c[2])),
        end_flux=end,
        phi_zpf=phi_zpf,
    )


# ---------------------------------------------------------------------------
# Flux-modulation-induced hopping and the plasma-frequency guard.


@dataclass(frozen=True)
class FluxTone:
    """One harmonic flux modulation of the SQUID: amplitude (Wb), frequency, phase."""

    amplitude: float
    omega: float
    phase: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0 or self.omega <= 0:
            raise ValidityError("tone amplitude must be >= 0 and frequency positive")


def coupling_for_pair(network: TLRNetwork, modes, pair: tuple[int, int],
                      amplitude: float) -> float:
    """Hopping strength between two modes for a given flux-tone amplitude.

    The modulated Josephson energy contributes E_J(t) (phi/phi0)^2 / 2 at
    the junction; the cross term between the two modes' zero-point fluxes,
    after dropping the counter-rotating half of the cosine, leaves
    eta = E_J0 Phi_ac sin(pi Phi_dc / Phi0) phi^a phi^b / (4 phi0^3 hbar).
    """
    sq = network.squid
    pa, pb = modes[pair[0]].phi_zpf, modes[pair[1]].phi_zpf
    return (
        sq.e_j0 * amplitude * math.sin(math.pi * sq.phi_dc / PHI0) * pa * pb
        / (4.0 * PHI0_RED**3 * HBAR)
    )


def parametric_coupling(network: TLRNetwork, modes, tone: FluxTone) -> float:
    """Resonant hopping strength (rad/s) induced by one flux tone.

    The tone must sit on a mode-frequency difference (within 1 kHz) and
    safely below the junction plasma frequency.
    """
    sq = network.squid
    if tone.amplitude > 0.1 * sq.phi_dc:
        raise ValidityError("tone amplitude is not a small fraction of the dc bias")
    if tone.omega >= sq.omega_p:
        raise ValidityError(
            f"tone at {tone.omega / (2e9 * math.pi):.2f} GHz exceeds the plasma "
            f"frequency {sq.omega_p / (2e9 * math.pi):.2f} GHz"
        )
    target = None
    best = math.inf
    for i in range(len(modes)):
        for j in range(i + 1, len(modes)):
            miss = abs(abs(modes[i].omega - modes[j].omega) - tone.omega)
            if miss < best:
                best, target = miss, (i, j)
    if best > TONE_MATCH_TOL:
        raise ValidityError(
            f"tone misses every mode-frequency difference by at least "
            f"{best / (2.0 * math.pi):.0f} Hz"
        )
    return coupling_for_pair(network, modes, target, tone.amplitude)


@dataclass(frozen=True)
class PlasmaReport:
    omega_p: float
    ratios: tuple[float, ...]
    passed: bool


def plasma_guard(squid: SQUIDParams, modulation_freqs) -> PlasmaReport:
    """Modulation tones must sit far below the junction plasma frequency."""
    wp = squid.omega_p
    ratios = tuple(float(w) / wp for w in modulation_freqs)
    return PlasmaReport(omega_p=wp, ratios=ratios, passed=all(r < 0.1 for r in ratios))


def profile_table(modes, network: TLRNetwork, n_samples: int = 200):
    """Rows (mode index, line index, x, f) sampling every mode on every line."""
    rows = []
    for m in modes:
        for alpha, la in enumerate(network.lengths):
            xs = np.linspace(0.0, la, n_samples)
            fs = m.profile(alpha, xs)
            rows.extend((m.index, alpha, float(x), float(f)) for x, f in zip(xs, fs))
    return rows
