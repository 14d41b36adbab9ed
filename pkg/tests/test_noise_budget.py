"""Quasistatic flux / critical-current sensitivity of the mode network."""

import json
import math

import pytest

from hqcsim.noise_budget import (
    ETA2_REFERENCE,
    NoiseSpec,
    budget_report,
    critical_current_sensitivity,
    flux_sensitivity,
)
from hqcsim.circuit_em import standard_network

MHZ = 2.0 * math.pi * 1e6

# frozen central-difference shifts (delta omega, delta eta) in MHz, at both
# ends of the default perturbation ranges
FLUX_SHIFTS = {
    1e-5: ((2.743746e-3, 2.898573e-3, 1.524369e-3), (9.372175e-5, 1.787776e-4)),
    1e-4: ((2.743753e-2, 2.898698e-2, 1.524395e-2), (9.372246e-4, 1.787781e-3)),
}
CURRENT_SHIFTS = {
    1e-7: ((5.144343e-6, 5.465864e-6, 2.893693e-6), (8.119223e-8, 1.294939e-7)),
    1e-6: ((5.170737e-5, 5.459277e-5, 2.877161e-5), (8.131324e-7, 1.296620e-6)),
}


@pytest.fixture(scope="module")
def network():
    return standard_network()


def check_entries(report, frozen):
    assert [e["perturbation"] for e in report["entries"]] == sorted(frozen)
    for entry in report["entries"]:
        domega_mhz, deta_mhz = frozen[entry["perturbation"]]
        assert len(entry["domega_rad_s"]) == 3
        assert len(entry["deta_rad_s"]) == 2
        for got, want in zip(entry["domega_rad_s"], domega_mhz):
            assert got / MHZ == pytest.approx(want, rel=1e-3)
        for got, want in zip(entry["deta_rad_s"], deta_mhz):
            assert got / MHZ == pytest.approx(want, rel=1e-3)
        for frac, raw in zip(entry["deta_fraction_of_eta2"], entry["deta_rad_s"]):
            assert frac == pytest.approx(raw / ETA2_REFERENCE, rel=1e-12)


def test_flux_sensitivity_frozen(network):
    report = flux_sensitivity(network, NoiseSpec())
    assert report["parameter"] == "flux"
    assert report["unit"] == "fraction of the flux quantum"
    assert report["eta2_reference_rad_s"] == ETA2_REFERENCE
    check_entries(report, FLUX_SHIFTS)


def test_critical_current_sensitivity_frozen(network):
    report = critical_current_sensitivity(network, NoiseSpec())
    assert report["parameter"] == "critical_current"
    check_entries(report, CURRENT_SHIFTS)


def test_shifts_scale_linearly(network):
    # current range chosen so shifts stay well above the ~2 rad/s wavenumber
    # resolution of the mode solver; below that the differences go grainy
    spec = NoiseSpec(delta_phi_range=(5e-6, 1e-5), delta_ic_range=(5e-7, 1e-6))
    for report in (flux_sensitivity(network, spec),
                   critical_current_sensitivity(network, spec)):
        half, full = report["entries"]
        for a, b in zip(half["domega_rad_s"] + half["deta_rad_s"],
                        full["domega_rad_s"] + full["deta_rad_s"]):
            assert b / a == pytest.approx(2.0, rel=0.05)


def test_budget_report_ordering(network):
    report = budget_report(network)
    ordering = report["ordering"]
    assert ordering["max_flux_deta_rad_s"] == pytest.approx(11232.956717, rel=1e-6)
    assert ordering["max_current_deta_rad_s"] == pytest.approx(8.146904, rel=1e-6)
    assert ordering["current_below_flux"]
    assert ordering["flux_below_1e3_of_eta2"]
    # the whole report must serialize as-is for the scenario runner
    json.dumps(report)


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(delta_phi_range=(0.0, 1e-4))
    with pytest.raises(ValueError):
        NoiseSpec(delta_phi_range=(1e-4, 1e-5))
    with pytest.raises(ValueError):
        NoiseSpec(delta_ic_range=(1e-5, 1e-1))
