"""Command-line front end: config-driven scenario runs with CSV/JSON output.

Subcommands map one-to-one onto the library layers: `simulate` and
`two-qubit` integrate the master equation and report gate fidelities,
`eigenmodes`, `coupling` and `noise` run the electromagnetics, and
`sweep` grids any scenario over one or two config keys.  Every run writes
a manifest recording the fully resolved parameters; outputs are
deterministic for identical configs (the manifest timestamp is the only
wall-clock content).

Config files are TOML or JSON, selected by extension.  Frequencies in
files and flags are plain numbers in GHz (mode/transmon frequencies),
MHz (couplings), and kHz (decay rates); angles are radians.  Everything
is converted to rad/s internally.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import circuit_em, dynamics, holonomy, models, noise_budget

TWOPI = 2.0 * math.pi
FLOAT_FMT = "%.11e"


class ConfigError(ValueError):
    """Unreadable or inconsistent scenario configuration."""


DEFAULTS = {
    # single-qubit block
    "omega_q_ghz": 6.0,
    "omega_c1_ghz": 6.5,
    "omega_c2_ghz": 6.75,
    "g_mhz": 25.0,  # reduced coupling g/(2 pi J)
    "kappa_khz": 10.0,
    "gamma_khz": 10.0,
    "gamma_phi_khz": 10.0,
    "gate": "hadamard",
    "theta": math.pi / 4.0,
    "phi": 0.0,
    "with_correction": False,
    # two-qubit block
    "eta1_mhz": 4.14,
    "eta2_mhz": 10.0,
    "vartheta": None,
    "varphi": 0.0,
    # numerics
    "dt_ns": None,
    "quadrature_n": None,
    "m_max": 8,
    "fock_cutoff": 1,
    "threads": 1,
    # electromagnetics
    "line_inductance_h_per_m": 4.1e-7,
    "line_capacitance_f_per_m": 1.6e-10,
    "lengths_mm": [9.16, 8.46, 8.2],
    "c_j_pf": 0.5,
    "i_j0_ua": 29.5,
    "phi_dc_flux_quanta": 0.33,
    "tone1_amp_flux_quanta": 0.005,
    "tone2_amp_flux_quanta": 0.015,
    # noise ranges (fractions)
    "delta_phi_range": [1.0e-5, 1.0e-4],
    "delta_ic_range": [1.0e-7, 1.0e-6],
    # sweep declaration (set via config file)
    "mode": None,
    "sweep": None,
}

GATE_ANGLES = {"hadamard": (math.pi / 4.0, 0.0), "not": (math.pi / 2.0, 0.0)}


def load_config(path: str | None) -> dict:
    """Merge a TOML/JSON file over the defaults; unknown keys are rejected."""
    cfg = dict(DEFAULTS)
    if path is None:
        return cfg
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    text = p.read_text()
    if p.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    elif p.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e
    else:
        raise ConfigError(f"config must be .toml or .json, got '{p.suffix}'")
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a table/object")
    for key, value in data.items():
        if key not in DEFAULTS:
            raise ConfigError(f"{path}: unknown config key '{key}'")
        cfg[key] = value
    return cfg


def _apply_flag_overrides(cfg: dict, args: argparse.Namespace) -> dict:
    flag_map = {
        "gate": "gate",
        "theta": "theta",
        "phi": "phi",
        "vartheta": "vartheta",
        "varphi": "varphi",
        "kappa": "kappa_khz",
        "gamma": "gamma_khz",
        "gamma_phi": "gamma_phi_khz",
        "dt": "dt_ns",
        "quadrature_n": "quadrature_n",
        "fock_cutoff": "fock_cutoff",
        "threads": "threads",
    }
    for attr, key in flag_map.items():
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = val
    wc = getattr(args, "with_correction", None)
    if wc is not None:
        cfg["with_correction"] = wc == "on"
    if getattr(args, "gate", None) == "custom" and getattr(args, "theta", None) is None \
            and "theta" not in cfg:
        raise ConfigError("--gate custom needs --theta (and optionally --phi)")
    return cfg


# ---------------------------------------------------------------------------
# Builders from resolved config values.


def _single_qubit_setup(cfg: dict):
    params = models.SingleQubitParams.from_reduced_g(
        TWOPI * cfg["omega_q_ghz"] * 1e9,
        TWOPI * cfg["omega_c1_ghz"] * 1e9,
        TWOPI * cfg["omega_c2_ghz"] * 1e9,
        TWOPI * cfg["g_mhz"] * 1e6,
    )
    gate = cfg["gate"]
    if gate in GATE_ANGLES:
        theta, phi = GATE_ANGLES[gate]
    elif gate == "custom":
        theta, phi = float(cfg["theta"]), float(cfg["phi"])
    else:
        raise ConfigError(f"gate must be hadamard, not, or custom; got '{gate}'")
    cal = models.calibrate(params, theta, phi)
    model = dynamics.single_qubit_model(
        cal,
        params,
        kappa=TWOPI * cfg["kappa_khz"] * 1e3,
        gamma=TWOPI * cfg["gamma_khz"] * 1e3,
        gamma_phi=TWOPI * cfg["gamma_phi_khz"] * 1e3,
        with_correction=bool(cfg["with_correction"]),
        cutoff=int(cfg["fock_cutoff"]),
    )
    return params, cal, model


def _two_qubit_setup(cfg: dict):
    eta2 = TWOPI * cfg["eta2_mhz"] * 1e6
    if cfg["vartheta"] is not None:
        eta1 = eta2 * math.tan(float(cfg["vartheta"]) / 2.0)
        tones = (float(cfg["varphi"]) + math.pi, 0.0)
    else:
        eta1 = TWOPI * cfg["eta1_mhz"] * 1e6
        tones = (math.pi, 0.0)
    drive = models.TwoQubitDrive(eta=(eta1, eta2), varphi_tones=tones)
    model = dynamics.two_qubit_model(
        drive,
        kappa=TWOPI * cfg["kappa_khz"] * 1e3,
        gamma=TWOPI * cfg["gamma_khz"] * 1e3,
        gamma_phi=TWOPI * cfg["gamma_phi_khz"] * 1e3,
        cutoff=int(cfg["fock_cutoff"]),
    )
    return drive, model


def _network_setup(cfg: dict) -> circuit_em.TLRNetwork:
    squid = circuit_em.SQUIDParams(
        c_j=cfg["c_j_pf"] * 1e-12,
        i_j0=cfg["i_j0_ua"] * 1e-6,
        phi_dc=cfg["phi_dc_flux_quanta"] * circuit_em.PHI0,
    )
    return circuit_em.TLRNetwork(
        l=cfg["line_inductance_h_per_m"],
        c=cfg["line_capacitance_f_per_m"],
        lengths=tuple(x * 1e-3 for x in cfg["lengths_mm"]),
        squid=squid,
    )


def _dt_seconds(cfg: dict) -> float | None:
    return None if cfg["dt_ns"] is None else float(cfg["dt_ns"]) * 1e-9


# ---------------------------------------------------------------------------
# Output helpers.


def _write_csv(path: Path, header: list[str], rows):
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\r\n")
        for row in rows:
            f.write(",".join(_fmt_cell(x) for x in row) + "\r\n")


def _fmt_cell(x) -> str:
    if isinstance(x, str):
        if any(ch in x for ch in ",\"\r\n"):
            return '"' + x.replace('"', '""') + '"'
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return FLOAT_FMT % float(x)


def _write_json(path: Path, payload: dict):
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def _write_manifest(out_dir: Path, command: str, cfg: dict, derived: dict,
                    outputs: list[str]) -> Path:
    manifest = {
        "command": command,
        "parameters": {k: v for k, v in sorted(cfg.items()) if k != "sweep"},
        "derived_rad_s": derived,
        "outputs": outputs,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    path = out_dir / "manifest.json"
    _write_json(path, manifest)
    return path


# ---------------------------------------------------------------------------
# Scenarios.


def _scenario_single(cfg: dict, out_dir: Path) -> dict:
    params, cal, model = _single_qubit_setup(cfg)
    kets = models.logical_kets_1q(model.space)
    psi0 = (kets["0"] + kets["1"]) / math.sqrt(2.0)
    target = holonomy.u1(cal.theta, cal.phi)
    cf = target @ np.array([1.0, 1.0]) / math.sqrt(2.0)
    psif = cf[0] * kets["0"] + cf[1] * kets["1"]
    dt = _dt_seconds(cfg)
    steps = max(1, int(round(cal.tau / (dt or model.default_dt))))
    traj = dynamics.evolve(
        model,
        dynamics.DensityMatrix.from_ket(model.space, psi0),
        cal.tau,
        dt,
        store_every=max(1, steps // 400),
        observables={
            "pop_0L": kets["0"],
            "pop_1L": kets["1"],
            "pop_EL": kets["E"],
            "fidelity": psif,
        },
    )
    n = int(cfg["quadrature_n"] or 24)
    fproc = dynamics.process_fidelity_1q(target, model, quadrature_n=n, dt=dt)
    csv_path = out_dir / "single_gate.csv"
    names = list(traj.observables)
    _write_csv(
        csv_path,
        ["t"] + names,
        ([t] + [traj.observables[k][i] for k in names] for i, t in enumerate(traj.times)),
    )
    derived = {
        "lambda1_rad_s": cal.lambda1,
        "tau_s": cal.tau,
        "alpha1": cal.alpha1,
        "alpha2": cal.alpha2,
        "omega_q_rad_s": params.omega_q,
        "omega_c1_rad_s": params.omega_c1,
        "omega_c2_rad_s": params.omega_c2,
    }
    print(f"gate {cfg['gate']}: theta = {cal.theta:.6f} rad, phi = {cal.phi:.6f} rad")
    print(f"lambda1/2pi = {cal.lambda1 / TWOPI / 1e6:.4f} MHz, tau = {cal.tau * 1e9:.4f} ns")
    print(f"F = {100.0 * fproc:.6f} %")
    return {"outputs": [csv_path.name], "derived": derived,
            "scalars": {"process_fidelity": fproc}}


def _scenario_two_qubit(cfg: dict, out_dir: Path) -> dict:
    drive, model = _two_qubit_setup(cfg)
    kets = models.logical_kets_2q(model.space)
    basis = np.stack([kets["00"], kets["01"], kets["10"], kets["11"]])
    target = holonomy.u2(math.pi / 4.0, 0.0) if cfg["vartheta"] is None \
        else holonomy.u2(drive.vartheta, drive.varphi)
    dt = _dt_seconds(cfg)

    def logical(coeffs):
        return np.asarray(coeffs, dtype=complex) @ basis

    runs = {
        "T": np.array([0.0, 1.0, 0.0, 0.0]),  # |01>
        "E": np.array([0.0, 1.0, 0.0, 1.0]) / math.sqrt(2.0),  # (|0>+|1>)|1>/sqrt2
    }
    fid_series = {}
    times = None
    state_fids = {}
    steps = max(1, int(round(drive.tau / (dt or model.default_dt))))
    for name, c0 in runs.items():
        psif = logical(target @ c0)
        obs = {"fidelity": psif}
        if name == "T":
            obs.update({f"pop_{k}": kets[k] for k in ("00", "01", "10", "11", "E1", "E2")})
        traj = dynamics.evolve(
            model,
            dynamics.DensityMatrix.from_ket(model.space, logical(c0)),
            drive.tau,
            dt,
            store_every=max(1, steps // 400),
            observables=obs,
        )
        times = traj.times
        fid_series[name] = traj
        state_fids[name] = float(traj.observables["fidelity"][-1])
    n = int(cfg["quadrature_n"] or 12)
    f2 = dynamics.process_fidelity_2q(target, model, quadrature_n=n, dt=dt)
    csv_path = out_dir / "two_qubit.csv"
    tT = fid_series["T"]
    names = list(tT.observables)
    header = ["t", "fidelity_E"] + [("fidelity_T" if x == "fidelity" else x) for x in names]
    rows = (
        [t, fid_series["E"].observables["fidelity"][i]]
        + [tT.observables[k][i] for k in names]
        for i, t in enumerate(times)
    )
    _write_csv(csv_path, header, rows)
    derived = {
        "lambda2_rad_s": drive.lambda2,
        "tau2_s": drive.tau,
        "vartheta_rad": drive.vartheta,
        "varphi_rad": drive.varphi,
    }
    print(f"lambda2/2pi = {drive.lambda2 / TWOPI / 1e6:.4f} MHz, tau2 = {drive.tau * 1e9:.4f} ns")
    print(f"F2 = {100.0 * f2:.6f} %")
    print(f"F_T = {100.0 * state_fids['T']:.6f} %")
    print(f"F_E = {100.0 * state_fids['E']:.6f} %")
    return {
        "outputs": [csv_path.name],
        "derived": derived,
        "scalars": {"process_fidelity": f2, "f_t": state_fids["T"], "f_e": state_fids["E"]},
    }


def _scenario_eigenmodes(cfg: dict, out_dir: Path) -> dict:
    network = _network_setup(cfg)
    modes = circuit_em.solve_eigenmodes(network)
    csv_path = out_dir / "mode_profiles.csv"
    _write_csv(csv_path, ["mode", "tlr", "x_m", "f"],
               circuit_em.profile_table(modes, network))
    table = {
        "frequencies_ghz": [m.omega / TWOPI / 1e9 for m in modes],
        "wavenumbers_per_m": [m.k for m in modes],
        "phi_zpf_over_phi0": [m.phi_zpf / circuit_em.PHI0_RED for m in modes],
        "amplitudes": [list(m.amplitudes) for m in modes],
        "end_flux": [m.end_flux for m in modes],
        "velocity_m_per_s": network.v,
        "l_j_h": network.l_j,
    }
    json_path = out_dir / "eigenmodes.json"
    _write_json(json_path, table)
    for m in modes:
        print(
            f"mode {m.index}: f = {m.omega / TWOPI / 1e9:.6f} GHz, "
            f"phi_zpf/phi0 = {m.phi_zpf / circuit_em.PHI0_RED:.4e}"
        )
    return {"outputs": [csv_path.name, json_path.name],
            "derived": {"velocity_m_per_s": network.v},
            "scalars": {}}


def _coupling_numbers(cfg: dict):
    network = _network_setup(cfg)
    modes = circuit_em.solve_eigenmodes(network)
    t1 = circuit_em.FluxTone(
        amplitude=cfg["tone1_amp_flux_quanta"] * circuit_em.PHI0,
        omega=abs(modes[1].omega - modes[0].omega),
    )
    t2 = circuit_em.FluxTone(
        amplitude=cfg["tone2_amp_flux_quanta"] * circuit_em.PHI0,
        omega=abs(modes[2].omega - modes[0].omega),
    )
    eta1 = circuit_em.parametric_coupling(network, modes, t1)
    eta2 = circuit_em.parametric_coupling(network, modes, t2)
    guard = circuit_em.plasma_guard(network.squid, (t1.omega, t2.omega))
    return network, modes, (t1, t2), (eta1, eta2), guard


def _scenario_coupling(cfg: dict, out_dir: Path) -> dict:
    network, modes, tones, etas, guard = _coupling_numbers(cfg)
    payload = {
        "eta1_mhz": etas[0] / TWOPI / 1e6,
        "eta2_mhz": etas[1] / TWOPI / 1e6,
        "eta1_rad_s": etas[0],
        "eta2_rad_s": etas[1],
        "tone_freqs_ghz": [t.omega / TWOPI / 1e9 for t in tones],
        "tone_amps_flux_quanta": [t.amplitude / circuit_em.PHI0 for t in tones],
        "omega_p_ghz": guard.omega_p / TWOPI / 1e9,
        "tone_to_plasma_ratios": list(guard.ratios),
        "plasma_guard_passed": guard.passed,
    }
    json_path = out_dir / "coupling.json"
    _write_json(json_path, payload)
    print(f"eta1/2pi = {payload['eta1_mhz']:.4f} MHz, eta2/2pi = {payload['eta2_mhz']:.4f} MHz")
    print(f"omega_p/2pi = {payload['omega_p_ghz']:.3f} GHz, guard "
          + ("passed" if guard.passed else "FAILED"))
    return {"outputs": [json_path.name], "derived": {}, "scalars": payload}


def _scenario_noise(cfg: dict, out_dir: Path) -> dict:
    network = _network_setup(cfg)
    spec = noise_budget.NoiseSpec(
        delta_phi_range=tuple(cfg["delta_phi_range"]),
        delta_ic_range=tuple(cfg["delta_ic_range"]),
    )
    report = noise_budget.budget_report(network, spec)
    json_path = out_dir / "noise.json"
    _write_json(json_path, report)
    order = report["ordering"]
    print(f"max flux-induced deta/2pi = {order['max_flux_deta_rad_s'] / TWOPI / 1e6:.3e} MHz")
    print(f"max current-induced deta/2pi = {order['max_current_deta_rad_s'] / TWOPI / 1e6:.3e} MHz")
    print("ordering " + ("holds" if order["current_below_flux"] else "VIOLATED"))
    return {"outputs": [json_path.name], "derived": {}, "scalars": {}}


SCENARIOS = {
    "single-gate": _scenario_single,
    "two-qubit": _scenario_two_qubit,
    "eigenmodes": _scenario_eigenmodes,
    "coupling": _scenario_coupling,
    "noise": _scenario_noise,
}

# scalar outputs per scenario available to sweeps
SWEEP_OUTPUTS = {
    "single-gate": ("process_fidelity",),
    "two-qubit": ("process_fidelity", "f_t", "f_e"),
    "coupling": ("eta1_mhz", "eta2_mhz"),
}


def _sweep_point(cfg: dict, scenario: str) -> dict:
    if scenario == "single-gate":
        _, _, model = _single_qubit_setup(cfg)
        target = holonomy.u1(*(GATE_ANGLES.get(cfg["gate"]) or (cfg["theta"], cfg["phi"])))
        n = int(cfg["quadrature_n"] or 24)
        f = dynamics.process_fidelity_1q(target, model, quadrature_n=n, dt=_dt_seconds(cfg))
        return {"process_fidelity": f}
    if scenario == "two-qubit":
        drive, model = _two_qubit_setup(cfg)
        target = holonomy.u2(math.pi / 4.0, 0.0) if cfg["vartheta"] is None \
            else holonomy.u2(drive.vartheta, drive.varphi)
        n = int(cfg["quadrature_n"] or 12)
        f = dynamics.process_fidelity_2q(target, model, quadrature_n=n, dt=_dt_seconds(cfg))
        return {"process_fidelity": f, "f_t": math.nan, "f_e": math.nan}
    if scenario == "coupling":
        _, _, _, etas, _ = _coupling_numbers(cfg)
        return {"eta1_mhz": etas[0] / TWOPI / 1e6, "eta2_mhz": etas[1] / TWOPI / 1e6}
    raise ConfigError(f"scenario '{scenario}' cannot be swept")


def run_sweep(cfg: dict, out_dir: Path) -> dict:
    sw = cfg.get("sweep")
    if not isinstance(sw, dict):
        raise ConfigError("sweep mode needs a [sweep] table with scenario/parameters/values")
    scenario = sw.get("scenario")
    if scenario not in SWEEP_OUTPUTS:
        raise ConfigError(
            f"sweep scenario must be one of {sorted(SWEEP_OUTPUTS)}, got '{scenario}'"
        )
    params = sw.get("parameters") or [sw.get("parameter")]
    if params == [None]:
        raise ConfigError("sweep needs 'parameter' (or 'parameters')")
    values = sw.get("values")
    if len(params) == 1:
        if not isinstance(values, list) or not values:
            raise ConfigError("sweep 'values' must be a non-empty list")
        grid = [(v,) for v in values]
    elif len(params) == 2:
        if (not isinstance(values, list) or len(values) != 2
                or not all(isinstance(v, list) and v for v in values)):
            raise ConfigError("two-parameter sweep needs 'values' = [list1, list2]")
        grid = [(a, b) for a in values[0] for b in values[1]]
    else:
        raise ConfigError("sweeps support one or two parameters")
    for p in params:
        if p not in DEFAULTS:
            raise ConfigError(f"unknown sweep parameter '{p}'")

    def one(point):
        local = dict(cfg)
        for p, v in zip(params, point):
            local[p] = v
        return _sweep_point(local, scenario)

    threads = max(1, int(cfg["threads"]))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, grid))
    else:
        results = [one(point) for point in grid]

    out_names = list(SWEEP_OUTPUTS[scenario])
    csv_path = out_dir / "sweep.csv"
    _write_csv(
        csv_path,
        list(params) + out_names,
        (
            list(point) + [res.get(name, math.nan) for name in out_names]
            for point, res in zip(grid, results)
        ),
    )
    print(f"swept {scenario} over {len(grid)} points -> {csv_path}")
    return {"outputs": [csv_path.name], "derived": {}, "scalars": {}}


# ---------------------------------------------------------------------------
# Entry points.


def run(config_path: str | None, out_dir: str = ".", mode: str | None = None,
        overrides: dict | None = None) -> int:
    """Programmatic equivalent of the CLI: run one scenario (or a sweep)."""
    cfg = load_config(config_path)
    if overrides:
        cfg.update(overrides)
    mode = mode or cfg["mode"]
    if mode is None:
        raise ConfigError("no mode given (config 'mode' key or subcommand)")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if mode == "sweep":
        result = run_sweep(cfg, out)
    elif mode in SCENARIOS:
        result = SCENARIOS[mode](cfg, out)
    else:
        raise ConfigError(f"unknown mode '{mode}'")
    _write_manifest(out, mode, cfg, result["derived"], result["outputs"])
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hqcsim",
        description="holonomic-gate circuit-QED simulator",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML or JSON scenario config")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--threads", type=int, help="worker threads for sweep grids")
    gate = argparse.ArgumentParser(add_help=False)
    gate.add_argument("--gate", choices=("hadamard", "not", "custom"))
    gate.add_argument("--theta", type=float, help="gate angle theta (rad)")
    gate.add_argument("--phi", type=float, help="gate phase phi (rad)")
    gate.add_argument("--kappa", type=float, help="resonator decay kappa/2pi (kHz)")
    gate.add_argument("--gamma", type=float, help="transmon relaxation gamma/2pi (kHz)")
    gate.add_argument("--gamma-phi", dest="gamma_phi", type=float,
                      help="transmon dephasing gamma_phi/2pi (kHz)")
    gate.add_argument("--dt", type=float, help="integrator step (ns)")
    gate.add_argument("--quadrature-n", dest="quadrature_n", type=int,
                      help="fidelity quadrature nodes")
    gate.add_argument("--fock-cutoff", dest="fock_cutoff", type=int,
                      help="resonator Fock cutoff (1..3)")
    gate.add_argument("--with-correction", dest="with_correction", choices=("on", "off"),
                      help="include the oscillating residual term")
    two = argparse.ArgumentParser(add_help=False)
    two.add_argument("--vartheta", type=float, help="two-qubit gate angle (rad)")
    two.add_argument("--varphi", type=float, help="two-qubit gate phase (rad)")
    sub.add_parser("simulate", parents=[common, gate], help="single-qubit gate dynamics")
    sub.add_parser("two-qubit", parents=[common, gate, two], help="two-qubit gate dynamics")
    sub.add_parser("eigenmodes", parents=[common], help="resonator network modes")
    sub.add_parser("coupling", parents=[common], help="flux-modulation hopping strengths")
    sub.add_parser("noise", parents=[common], help="quasistatic 1/f sensitivity budget")
    sub.add_parser("sweep", parents=[common, gate, two], help="grid a scenario over config keys")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    mode = "single-gate" if args.mode == "simulate" else args.mode
    try:
        cfg = load_config(args.config)
        cfg = _apply_flag_overrides(cfg, args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if mode == "sweep":
            result = run_sweep(cfg, out)
        else:
            result = SCENARIOS[mode](cfg, out)
        _write_manifest(out, mode, cfg, result["derived"], result["outputs"])
        return 0
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (models.CalibrationError, circuit_em.SolverError, circuit_em.ValidityError,
            dynamics.StepSizeError, dynamics.IntegrationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
