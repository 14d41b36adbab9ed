"""Quasistatic 1/f sensitivity of mode frequencies and hopping strengths.

Low-frequency flux and critical-current noise move the SQUID working
point slowly compared with every gate; their effect is estimated by
perturbing the dc parameters, re-solving the electromagnetics, and taking
central differences.  Shifts are reported in rad/s and as fractions of
the design hopping strength so they can be read directly against the
couplings they would detune.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import circuit_em
from .circuit_em import PHI0, TLRNetwork

# design hopping strength the fractional columns are measured against
ETA2_REFERENCE = 2.0 * math.pi * 10.0e6

# the two standard tones: (mode pair, amplitude as fraction of the flux quantum)
STANDARD_TONES = (((0, 1), 0.005), ((0, 2), 0.015))


@dataclass(frozen=True)
class NoiseSpec:
    """Perturbation ranges (fractions of the flux quantum / critical current)."""

    delta_phi_range: tuple[float, float] = (1.0e-5, 1.0e-4)
    delta_ic_range: tuple[float, float] = (1.0e-7, 1.0e-6)
    flux_amp: float = 1.0e-5
    current_amp: float = 1.0e-6

    def __post_init__(self):
        for lo, hi in (self.delta_phi_range, self.delta_ic_range):
            if not 0.0 < lo < hi < 1.0e-2:
                raise ValueError(f"range ({lo}, {hi}) must satisfy 0 < low < high < 1e-2")


def _solve_point(network: TLRNetwork, tones):
    modes = circuit_em.solve_eigenmodes(network)
    omegas = [m.omega for m in modes]
    etas = [
        circuit_em.coupling_for_pair(network, modes, pair, frac * PHI0)
        for pair, frac in tones
    ]
    return omegas, etas


def _central_differences(network: TLRNetwork, perturb, fractions, tones):
    entries = []
    for frac in fractions:
        w_hi, e_hi = _solve_point(perturb(network, +frac), tones)
        w_lo, e_lo = _solve_point(perturb(network, -frac), tones)
        domega = [abs(a - b) / 2.0 for a, b in zip(w_hi, w_lo)]
        deta = [abs(a - b) / 2.0 for a, b in zip(e_hi, e_lo)]
        entries.append(
            {
                "perturbation": frac,
                "domega_rad_s": domega,
                "deta_rad_s": deta,
                "deta_fraction_of_eta2": [x / ETA2_REFERENCE for x in deta],
            }
        )
    return entries


def _shift_flux(network: TLRNetwork, frac: float) -> TLRNetwork:
    squid = replace(network.squid, phi_dc=network.squid.phi_dc + frac * PHI0)
    return replace(network, squid=squid)


def _shift_current(network: TLRNetwork, frac: float) -> TLRNetwork:
    squid = replace(network.squid, i_j0=network.squid.i_j0 * (1.0 + frac))
    return replace(network, squid=squid)


def flux_sensitivity(network: TLRNetwork, spec: NoiseSpec, tones=STANDARD_TONES) -> dict:
    """Mode-frequency and hopping shifts for dc flux offsets at both range ends."""
    return {
        "parameter": "flux",
        "unit": "fraction of the flux quantum",
        "eta2_reference_rad_s": ETA2_REFERENCE,
        "entries": _central_differences(network, _shift_flux, spec.delta_phi_range, tones),
    }


def critical_current_sensitivity(network: TLRNetwork, spec: NoiseSpec,
                                 tones=STANDARD_TONES) -> dict:
    """Same differences with the junction critical current perturbed fractionally."""
    return {
        "parameter": "critical_current",
        "unit": "fraction of the critical current",
        "eta2_reference_rad_s": ETA2_REFERENCE,
        "entries": _central_differences(network, _shift_current, spec.delta_ic_range, tones),
    }


def budget_report(network: TLRNetwork, spec: NoiseSpec | None = None) -> dict:
    """Both sensitivities plus the ordering summary used as a sanity check."""
    spec = spec or NoiseSpec()
    flux = flux_sensitivity(network, spec)
    current = critical_current_sensitivity(network, spec)
    max_flux_eta = max(x for e in flux["entries"] for x in e["deta_rad_s"])
    max_curr_eta = max(x for e in current["entries"] for x in e["deta_rad_s"])
    return {
        "flux": flux,
        "critical_current": current,
        "ordering": {
            "max_flux_deta_rad_s": max_flux_eta,
            "max_current_deta_rad_s": max_curr_eta,
            "current_below_flux": max_curr_eta < max_flux_eta,
            "flux_below_1e3_of_eta2": max_flux_eta < 1.0e-3 * ETA2_REFERENCE,
        },
    }
