"""Master-equation integrator and fidelity quadratures.

Regression fidelities are frozen from cross-checked runs (the same
numbers came out of an adaptive high-order integrator and a
midpoint-exponential propagator during development), so any drift here
points at the integrator, not the physics.
"""

import io
import math

import numpy as np
import pytest

from hqcsim import dynamics, holonomy, models
from hqcsim.dynamics import (
    CollapseChannel,
    StepSizeError,
    evolve,
    evolve_batch,
    process_fidelity_1q,
    process_fidelity_2q,
    single_qubit_model,
    state_fidelity,
    two_qubit_model,
    write_trajectory_csv,
)
from hqcsim.hilbert import DensityMatrix, ValidationError

TWOPI = 2.0 * math.pi
RATE = TWOPI * 10e3  # kappa = gamma = gamma_phi

# frozen process fidelities, quadrature-independent to the printed digits
F_HADAMARD_EFF = 0.996459539
F_HADAMARD_CORR = 0.991176292
F_NOT_EFF = 0.995755825
F_NOT_CORR = 0.993290804
F_TWO_QUBIT = 0.994211342
EPS_CORR_H = 5.297485e-3  # coherent residual cost, zero decoherence
EPS_CORR_N = 2.468345e-3


def hadamard_setup(with_correction=False, rates=RATE):
    p = models.standard_single_qubit()
    cal = models.calibrate(p, math.pi / 4, 0.0)
    model = single_qubit_model(cal, p, rates, rates, rates,
                               with_correction=with_correction)
    return p, cal, model


def two_qubit_setup(rates=RATE):
    drive = models.TwoQubitDrive(eta=(TWOPI * 4.14e6, TWOPI * 10e6))
    return drive, two_qubit_model(drive, rates, rates, rates)


# --- integrator basics --------------------------------------------------------

def test_cyclic_bright_state_returns():
    p, cal, model = hadamard_setup(rates=0.0)
    kets = models.logical_kets_1q(model.space)
    bright = math.sin(cal.theta / 2) * kets["0"] - math.cos(cal.theta / 2) * kets["1"]
    rho0 = DensityMatrix.from_ket(model.space, bright)
    traj = evolve(model, rho0, cal.tau, store_every=10**9)
    assert state_fidelity(traj.states[-1], bright) == pytest.approx(1.0, abs=1e-6)


def test_dark_state_frozen_along_whole_run():
    p, cal, model = hadamard_setup(rates=0.0)
    kets = models.logical_kets_1q(model.space)
    dark = cal.J0_a1 * kets["0"] + cal.J1_a1 * np.exp(1j * cal.phi) * kets["1"]
    dark /= np.linalg.norm(dark)
    rho0 = DensityMatrix.from_ket(model.space, dark)
    traj = evolve(model, rho0, cal.tau, store_every=100)
    for state in traj.states:
        assert np.max(np.abs(state.matrix - rho0.matrix)) <= 1e-8


def test_trace_and_positivity_with_decoherence():
    p, cal, model = hadamard_setup(with_correction=True)
    kets = models.logical_kets_1q(model.space)
    psi = (kets["0"] + 1j * kets["1"]) / math.sqrt(2.0)
    traj = evolve(model, DensityMatrix.from_ket(model.space, psi), cal.tau,
                  store_every=50)
    assert np.all(np.diff(traj.times) > 0)
    for state in traj.states:
        assert abs(np.trace(state.matrix).real - 1.0) <= 1e-8
        assert float(np.min(np.linalg.eigvalsh(state.matrix))) >= -1e-6


def test_trajectory_observable_series():
    p, cal, model = hadamard_setup()
    kets = models.logical_kets_1q(model.space)
    traj = evolve(model, DensityMatrix.from_ket(model.space, kets["0"]),
                  cal.tau, store_every=200,
                  observables={"p0": kets["0"], "pE": kets["E"]})
    assert set(traj.observables) == {"p0", "pE"}
    assert traj.observables["p0"][0] == pytest.approx(1.0, abs=1e-12)
    assert all(len(v) == len(traj.times) for v in traj.observables.values())


def test_step_size_guard_with_oscillating_term():
    p, cal, model = hadamard_setup(with_correction=True)
    kets = models.logical_kets_1q(model.space)
    rho0 = DensityMatrix.from_ket(model.space, kets["0"])
    period = TWOPI / p.delta
    with pytest.raises(StepSizeError):
        evolve(model, rho0, cal.tau, dt=period / 10.0)


def test_collapse_channel_validation():
    with pytest.raises(ValidationError):
        CollapseChannel(rate=-1.0, dense=np.eye(2, dtype=complex))
    with pytest.raises(ValidationError):
        CollapseChannel(rate=1.0)


def test_rate_zero_equals_channel_free():
    # rate-0 channels are dropped; the generator must match explicitly
    p, cal, m_zero = hadamard_setup(rates=0.0)
    kets = models.logical_kets_1q(m_zero.space)
    psi = (kets["0"] - kets["1"]) / math.sqrt(2.0)
    rho = DensityMatrix.from_ket(m_zero.space, psi)
    a = evolve_batch(m_zero, rho.matrix[None], cal.tau)[0]
    assert len(m_zero.channels) == 0
    w, v = np.linalg.eigh(m_zero.h_static.matrix)
    prop = (v * np.exp(-1j * w * cal.tau)) @ v.conj().T
    expect = prop @ np.outer(psi, psi.conj()) @ prop.conj().T
    assert np.max(np.abs(a - expect)) <= 1e-9


# --- state fidelity -----------------------------------------------------------

def test_state_fidelity_extremes():
    space = models.single_qubit_space(1)
    kets = models.logical_kets_1q(space)
    rho = DensityMatrix.from_ket(space, kets["0"])
    assert state_fidelity(rho, kets["0"]) == pytest.approx(1.0)
    assert state_fidelity(rho, kets["1"]) == pytest.approx(0.0, abs=1e-15)


def test_state_fidelity_dimension_mismatch():
    space = models.single_qubit_space(1)
    rho = DensityMatrix.from_ket(space, space.basis_state((1, 0, 0)))
    with pytest.raises(ValidationError):
        state_fidelity(rho, np.zeros(4, dtype=complex))


# --- single-qubit process fidelities -------------------------------------------

def test_quadrature_node_minimum():
    _, _, model = hadamard_setup()
    with pytest.raises(ValidationError):
        process_fidelity_1q(holonomy.u1(math.pi / 4, 0.0), model, quadrature_n=4)


def test_zero_decoherence_effective_gate_is_exact():
    _, _, model = hadamard_setup(rates=0.0)
    f = process_fidelity_1q(holonomy.u1(math.pi / 4, 0.0), model, quadrature_n=8)
    assert 1.0 - f <= 1e-6


def test_zero_decoherence_correction_cost_frozen():
    # the oscillating residual is a real coherent error at these parameters
    p = models.standard_single_qubit()
    for theta, eps_frozen in ((math.pi / 4, EPS_CORR_H), (math.pi / 2, EPS_CORR_N)):
        cal = models.calibrate(p, theta, 0.0)
        model = single_qubit_model(cal, p, 0.0, 0.0, 0.0, with_correction=True)
        f = process_fidelity_1q(holonomy.u1(theta, 0.0), model, quadrature_n=8)
        assert 1.0 - f == pytest.approx(eps_frozen, rel=1e-3)


@pytest.mark.parametrize("theta,with_corr,frozen", [
    (math.pi / 4, False, F_HADAMARD_EFF),
    (math.pi / 4, True, F_HADAMARD_CORR),
    (math.pi / 2, False, F_NOT_EFF),
    (math.pi / 2, True, F_NOT_CORR),
])
def test_process_fidelity_regressions(theta, with_corr, frozen):
    p = models.standard_single_qubit()
    cal = models.calibrate(p, theta, 0.0)
    model = single_qubit_model(cal, p, RATE, RATE, RATE, with_correction=with_corr)
    f = process_fidelity_1q(holonomy.u1(theta, 0.0), model, quadrature_n=8)
    assert f == pytest.approx(frozen, abs=2e-7)


def test_step_halving_stability():
    _, _, model = hadamard_setup(with_correction=True)
    target = holonomy.u1(math.pi / 4, 0.0)
    fa = process_fidelity_1q(target, model, quadrature_n=8)
    fb = process_fidelity_1q(target, model, quadrature_n=8, dt=model.default_dt / 2)
    assert abs(fa - fb) * 100.0 <= 0.01  # percentage points


def test_higher_cutoff_is_inert_for_single_qubit():
    p = models.standard_single_qubit()
    cal = models.calibrate(p, math.pi / 4, 0.0)
    target = holonomy.u1(math.pi / 4, 0.0)
    fs = []
    for cutoff in (1, 2):
        m = single_qubit_model(cal, p, RATE, RATE, RATE, with_correction=True,
                               cutoff=cutoff)
        fs.append(process_fidelity_1q(target, m, quadrature_n=8))
    assert abs(fs[0] - fs[1]) <= 1e-10


# --- two-qubit ------------------------------------------------------------------

def test_two_qubit_process_fidelity_regression():
    drive, model = two_qubit_setup()
    f = process_fidelity_2q(holonomy.u2(math.pi / 4, 0.0), model,
                            quadrature_n=8, dt=drive.tau / 100)
    assert f == pytest.approx(F_TWO_QUBIT, abs=2e-6)


def test_two_qubit_state_fidelities():
    drive, model = two_qubit_setup()
    kets = models.logical_kets_2q(model.space)
    basis = np.stack([kets[k] for k in ("00", "01", "10", "11")])
    u = holonomy.u2(math.pi / 4, 0.0)
    for coeffs, frozen, tol_pp in (
        (np.array([0, 1, 0, 0], dtype=complex), F_TWO_QUBIT, 0.3),
        (np.array([0, 1, 0, 1], dtype=complex) / math.sqrt(2), 0.9942, 0.2),
    ):
        psi0 = coeffs @ basis
        psif = (u @ coeffs) @ basis
        rho0 = DensityMatrix.from_ket(model.space, psi0)
        final = evolve_batch(model, rho0.matrix[None], drive.tau)[0]
        f = float(np.real(psif.conj() @ final @ psif))
        assert abs(f - frozen) * 100.0 <= tol_pp
        assert f == pytest.approx(math.exp(-2.0 * RATE * drive.tau), abs=1e-6)


def test_two_qubit_zero_decoherence_exact():
    drive = models.TwoQubitDrive(eta=(TWOPI * 4.14e6, TWOPI * 10e6))
    model = two_qubit_model(drive, 0.0, 0.0, 0.0)
    f = process_fidelity_2q(holonomy.u2(math.pi / 4, 0.0), model,
                            quadrature_n=8, dt=drive.tau / 100)
    assert 1.0 - f <= 1e-6


# --- CSV export -----------------------------------------------------------------

def test_trajectory_csv_format():
    p, cal, model = hadamard_setup()
    kets = models.logical_kets_1q(model.space)
    traj = evolve(model, DensityMatrix.from_ket(model.space, kets["0"]),
                  cal.tau, store_every=500, observables={"p0": kets["0"]})
    buf = io.StringIO()
    write_trajectory_csv(traj, buf)
    lines = buf.getvalue().split("\r\n")
    assert lines[0] == "t,p0"
    assert len(lines) == len(traj.times) + 2  # header + rows + trailing ""
    first = lines[1].split(",")
    assert len(first) == 2
    assert float(first[0]) == 0.0
    # 12 significant digits in scientific notation
    assert "e" in first[1] and len(first[1].split("e")[0].replace("-", "").replace(".", "")) == 12
