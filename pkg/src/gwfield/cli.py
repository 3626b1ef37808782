"""Command-line entry point.

One subcommand per capability; every run writes its outputs plus a manifest
echoing the fully-resolved configuration, the tool version, a checksum of the
constant table, and per-file content checksums.  Exit codes: 0 success,
2 configuration/schema violation, 3 numerical failure, 4 I/O failure.
All physics flags are CGS with the unit spelled in the flag name.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from .constants import CGS
from . import __version__, bosestat, cmbrvac, fields, hybridmeas, madelung, selfcheck, statequant, wavemech
from .fields import ComplexField, Grid, PlaneWaveSpec, make_plane_wave
from .fieldio import read_field, write_field
from .helicity import TimeSeriesField, partial_wave_split, time_averaged_current


class ConfigError(ValueError):
    """Configuration or schema violation (exit code 2)."""

    def __init__(self, message: str, context: dict | None = None):
        super().__init__(message)
        self.context = context or {}


def _fmt(x: float) -> str:
    """Shortest round-trip decimal representation; stable golden files."""
    return repr(float(x))


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _load_json(path: str | Path) -> dict:
    p = Path(path)
    text = p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {p}: {exc}", {"file": str(p)}) from exc


def _ensure_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key '{unknown[0]}' in {where}", {"unknown_keys": unknown})
    missing = sorted(required - set(obj))
    if missing:
        raise ConfigError(f"missing required key '{missing[0]}' in {where}")


def _complex_matrix_from_json(obj: dict, where: str) -> np.ndarray:
    _ensure_keys(obj, {"re", "im"}, {"re"}, where)
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise ConfigError(f"re/im shape mismatch in {where}")
    return re + 1j * im


def _complex_matrix_to_json(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _read_matrix_csv(path: Path) -> np.ndarray:
    """Complex matrix CSV: header re0,im0,re1,im1,...; one row per matrix row."""
    with path.open(newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows or len(rows) < 2:
        raise ConfigError(f"matrix CSV {path} has no data rows")
    header = rows[0]
    if len(header) % 2 != 0 or any(
        h != f"{kind}{i // 2}" for i, (h, kind) in enumerate(zip(header, ["re", "im"] * (len(header) // 2)))
    ):
        raise ConfigError(f"matrix CSV header must be re0,im0,re1,im1,... got {header}")
    n_cols = len(header) // 2
    data = []
    for row in rows[1:]:
        values = [float(x) for x in row]
        data.append([values[2 * c] + 1j * values[2 * c + 1] for c in range(n_cols)])
    return np.asarray(data, dtype=np.complex128)


def _grid_from_spec(obj: dict, where: str) -> Grid:
    _ensure_keys(obj, {"n_points", "lengths"}, {"n_points", "lengths"}, where)
    return Grid.of(obj["n_points"], obj["lengths"])


def _complex_from_pair(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(value[0], value[1])
    raise ConfigError(f"{where} must be a number or an [re, im] pair")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _prepare_output_dir(config: dict) -> Path:
    out = Path(config["output_dir"])
    if out.exists():
        if any(out.iterdir()):
            raise OSError(f"output directory {out} exists and is not empty")
    else:
        out.mkdir(parents=True)
    return out


def _write_manifest(outdir: Path, config: dict, t_start: float) -> None:
    outputs = [
        {"path": p.name, "sha256": _sha256(p)}
        for p in sorted(outdir.iterdir())
        if p.name != "manifest.json"
    ]
    manifest = {
        "config": config,
        "tool_version": __version__,
        "constants_checksum": CGS.checksum(),
        "wall_time_s": time.monotonic() - t_start,
        "outputs": outputs,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


# ----------------------------------------------------------------- propagate


_PROPAGATE_KEYS = {
    "equation", "grid", "packet", "planewave", "mu", "omega_ref", "wave_initial", "times",
}


def _initial_field(spec: dict, grid: Grid) -> ComplexField:
    if ("packet" in spec) == ("planewave" in spec):
        raise ConfigError("exactly one of 'packet' or 'planewave' is required in propagate spec")
    if "packet" in spec:
        obj = spec["packet"]
        _ensure_keys(obj, {"center", "sigma0", "k_carrier", "amplitude"},
                     {"center", "sigma0", "k_carrier"}, "packet")
        packet = wavemech.GaussianPacketSpec(
            center=tuple(obj["center"]),
            sigma0=float(obj["sigma0"]),
            k_carrier=tuple(obj["k_carrier"]),
            amplitude=_complex_from_pair(obj.get("amplitude", 1.0), "packet.amplitude"),
        )
        return wavemech.gaussian_packet(packet, grid)
    obj = spec["planewave"]
    _ensure_keys(obj, {"amplitude", "k_vec", "omega", "mu"}, {"amplitude", "k_vec", "omega"},
                 "planewave")
    pw = PlaneWaveSpec(
        amplitude=_complex_from_pair(obj["amplitude"], "planewave.amplitude"),
        k_vec=tuple(obj["k_vec"]),
        omega=float(obj["omega"]),
        mu=float(obj.get("mu", 0.0)),
    )
    return make_plane_wave(pw, grid)


def _cmd_propagate(args: argparse.Namespace) -> dict:
    spec = _load_json(args.spec)
    _ensure_keys(spec, _PROPAGATE_KEYS, {"equation", "grid", "times"}, "propagate spec")
    equation = spec["equation"]
    if equation not in ("wave", "schrodinger"):
        raise ConfigError("equation must be 'wave' or 'schrodinger'")
    grid = _grid_from_spec(spec["grid"], "grid")
    mu = float(spec.get("mu", 0.0))
    times = [float(t) for t in spec["times"]]
    config = {
        "subcommand": "propagate",
        "spec": spec,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    psi0 = _initial_field(spec, grid)
    summary_rows = []
    if equation == "schrodinger":
        if "omega_ref" not in spec:
            raise ConfigError("missing required key 'omega_ref' in propagate spec")
        params = wavemech.EffectiveMassParams(omega_ref=float(spec["omega_ref"]), mu=mu)
        k_sq = None
        for idx, t in enumerate(times):
            field = wavemech.evolve_schrodinger(psi0, params, t)
            write_field(field, outdir / f"field_{idx:04d}.csv", t_s=t)
            if k_sq is None:
                from . import spectral

                k_sq = spectral.k_squared(grid)
            weights = np.abs(np.fft.fftn(field.values)) ** 2
            rate = CGS.hbar * k_sq / (2.0 * params.m_star) + params.v0
            energy = CGS.hbar * float(np.sum(rate * weights) / np.sum(weights))
            widths = wavemech.packet_widths(field)
            summary_rows.append([_fmt(t), _fmt(field.norm_squared())]
                                + [_fmt(w) for w in widths] + [_fmt(energy)])
    else:
        initial = spec.get("wave_initial", "right_moving")
        if initial == "right_moving":
            state0 = wavemech.right_moving_state(psi0)
        elif initial == "static":
            zero = ComplexField(grid=grid, values=np.zeros(grid.shape, dtype=complex))
            state0 = wavemech.ClassicalWaveState(psi=psi0, psi_dot=zero)
        else:
            raise ConfigError("wave_initial must be 'right_moving' or 'static'")
        for idx, t in enumerate(times):
            state = wavemech.evolve_classical_wave(state0, mu, t)
            write_field(state.psi, outdir / f"field_{idx:04d}.csv", t_s=t)
            widths = wavemech.packet_widths(state.psi)
            summary_rows.append([_fmt(t), _fmt(state.psi.norm_squared())]
                                + [_fmt(w) for w in widths]
                                + [_fmt(wavemech.wave_energy(state, mu))])
    width_names = [f"width_{i}_cm" for i in range(grid.dim)]
    _write_csv(outdir / "summary.csv", ["t_s", "norm"] + width_names + ["energy"], summary_rows)
    config["outdir_resolved"] = str(outdir)
    return config


# ------------------------------------------------------------------ madelung


def _cmd_madelung(args: argparse.Namespace) -> dict:
    config = {
        "subcommand": "madelung",
        "field": args.field,
        "omega_ref_rad_per_s": args.omega_ref_rad_per_s,
        "mu_per_cm": args.mu_per_cm,
        "next_field": args.next_field,
        "dt_s": args.dt_s,
        "energy_erg": args.energy_erg,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    raw, _ = read_field(Path(args.field))
    # box-normalized density; every reported quantity is scale-invariant
    psi = fields.normalize(raw)
    params = wavemech.EffectiveMassParams(omega_ref=args.omega_ref_rad_per_s, mu=args.mu_per_cm)
    form = madelung.polar_decompose(psi)
    qfield = madelung.quantum_potential(form, params.m_star)
    grid = psi.grid
    rows = []
    meshes = grid.meshes()
    action = form.action()
    for idx in np.ndindex(*grid.shape):
        rows.append(
            [_fmt(m[idx]) for m in meshes]
            + [_fmt(form.rho[idx]), _fmt(action[idx]), _fmt(qfield.Q[idx]),
               _fmt(qfield.classicality_defect[idx])]
        )
    axis_names = [f"x{i}_cm" for i in range(grid.dim)]
    _write_csv(outdir / "madelung.csv",
               axis_names + ["rho", "S_erg_s", "Q_erg", "defect_per_cm2"], rows)
    decomposition = madelung.energy_decomposition(psi, params)
    keep = ~form.branch_mask
    summary = {
        "E_erg": decomposition.E,
        "pc_erg": decomposition.pc,
        "Q_mean_erg": decomposition.Q_mean,
        "phase_gradient_momentum_g_cm_per_s": madelung.phase_gradient_momentum(psi),
        "defect_rms_per_cm2": float(np.sqrt(np.mean(qfield.classicality_defect[keep] ** 2))),
        "mask_fraction": float(np.mean(form.branch_mask)),
        "continuity_residual": None,
        "hj_residual_erg": None,
    }
    if args.next_field is not None:
        if args.dt_s is None:
            raise ConfigError("--dt-s is required with --next-field")
        nxt_raw, _ = read_field(Path(args.next_field))
        rho_dot = (fields.normalize(nxt_raw).density() - form.rho) / args.dt_s
        summary["continuity_residual"] = madelung.continuity_residual(form, rho_dot, params.m_star)
    if args.energy_erg is not None:
        summary["hj_residual_erg"] = madelung.hj_residual(form, params, -args.energy_erg)
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return config


# ---------------------------------------------------------------------- bohm


def _parse_points(raw: str, dim: int, what: str) -> list[np.ndarray]:
    points = []
    for chunk in raw.split(";"):
        coords = [float(x) for x in chunk.split(",")]
        if len(coords) != dim:
            raise ConfigError(f"{what} entry '{chunk}' must have {dim} coordinates")
        points.append(np.asarray(coords))
    return points


def _cmd_bohm(args: argparse.Namespace) -> dict:
    config = {
        "subcommand": "bohm",
        "field": args.field,
        "omega_ref_rad_per_s": args.omega_ref_rad_per_s,
        "regime": args.regime,
        "seed_positions": args.seed_positions,
        "seed_momenta": args.seed_momenta,
        "dt_s": args.dt_s,
        "steps": args.steps,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    psi, _ = read_field(Path(args.field))
    params = wavemech.EffectiveMassParams(omega_ref=args.omega_ref_rad_per_s)
    form = madelung.polar_decompose(psi)
    qfield = madelung.quantum_potential(form, params.m_star)
    dim = psi.grid.dim
    positions = _parse_points(args.seed_positions, dim, "--seed-positions")
    momenta = _parse_points(args.seed_momenta, dim, "--seed-momenta")
    if len(positions) != len(momenta):
        raise ConfigError("--seed-positions and --seed-momenta must list the same number of points")
    rows = []
    for traj_id, (x0, p0) in enumerate(zip(positions, momenta)):
        traj = madelung.run_trajectory(qfield, x0, p0, args.dt_s, args.steps, args.regime)
        for step in range(len(traj.times)):
            rows.append(
                [traj_id, step, _fmt(traj.times[step])]
                + [_fmt(v) for v in traj.positions[step]]
                + [_fmt(v) for v in traj.momenta[step]]
                + [traj.status if step == len(traj.times) - 1 else "ok"]
            )
    axis = [f"x{i}_cm" for i in range(dim)] + [f"p{i}_g_cm_per_s" for i in range(dim)]
    _write_csv(outdir / "trajectories.csv", ["trajectory", "step", "t_s"] + axis + ["status"], rows)
    return config


# ------------------------------------------------------------------- schmidt


def _cmd_schmidt(args: argparse.Namespace) -> dict:
    config = {
        "subcommand": "schmidt",
        "matrix": args.matrix,
        "threshold": args.threshold,
        "renormalize": args.renormalize,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    matrix = _read_matrix_csv(Path(args.matrix))
    result = statequant.schmidt_decompose(matrix, threshold=args.threshold,
                                          renormalize=args.renormalize)
    payload = {
        "coefficients": result.coefficients.tolist(),
        "rank": result.rank,
        "threshold": result.threshold,
        "entangled": result.entangled,
        "left_basis": _complex_matrix_to_json(result.left_basis),
        "right_basis": _complex_matrix_to_json(result.right_basis),
    }
    (outdir / "schmidt.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return config


# -------------------------------------------------------------------- update


def _cmd_update(args: argparse.Namespace) -> dict:
    config = {
        "subcommand": "update",
        "rule": args.rule,
        "rho": args.rho,
        "projectors": args.projectors,
        "outcome": args.outcome,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    rho_obj = _load_json(args.rho)
    rho = statequant.DensityMatrix(entries=_complex_matrix_from_json(rho_obj, "rho file"))
    proj_obj = _load_json(args.projectors)
    _ensure_keys(proj_obj, {"projectors"}, {"projectors"}, "projector file")
    projectors = statequant.ProjectorSet(
        projectors=tuple(
            _complex_matrix_from_json(p, f"projector {i}")
            for i, p in enumerate(proj_obj["projectors"])
        )
    )
    payload: dict = {"rule": args.rule}
    if args.rule == "luders":
        if args.outcome is None:
            raise ConfigError("--outcome is required for the luders rule")
        updated, prob = statequant.luders_update(rho, projectors, args.outcome)
        payload["probability"] = prob
    else:
        updated = statequant.von_neumann_update(rho, projectors)
    payload["rho"] = _complex_matrix_to_json(updated.entries)
    (outdir / "update.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return config


# ------------------------------------------------------------------ helicity


def _cmd_helicity(args: argparse.Namespace) -> dict:
    config = {
        "subcommand": "helicity",
        "series_dir": args.series_dir,
        "k0_rad_per_cm": args.k0_rad_per_cm,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    series_dir = Path(args.series_dir)
    csv_paths = sorted(p for p in series_dir.glob("field_*.csv"))
    if len(csv_paths) < 8:
        raise ConfigError(f"series directory {series_dir} holds {len(csv_paths)} field dumps; need >= 8")
    fields, times = [], []
    for p in csv_paths:
        f, meta = read_field(p)
        if "t_s" not in meta:
            raise ConfigError(f"field dump {p} lacks a t_s stamp in its sidecar")
        fields.append(f)
        times.append(meta["t_s"])
    steps = np.diff(times)
    if np.any(np.abs(steps - steps[0]) > 1e-9 * abs(steps[0])):
        raise ConfigError("field series is not uniformly spaced in time")
    series = TimeSeriesField.from_fields(fields, dt=float(steps[0]), t0=float(times[0]))
    plus, minus = partial_wave_split(series)
    recon = float(np.abs(plus.values + minus.values - series.values).max())
    payload = {
        "norm_plus": plus.norm(),
        "norm_minus": minus.norm(),
        "reconstruction_error": recon,
    }
    (outdir / "helicity.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    averaged = time_averaged_current(series, args.k0_rad_per_cm)
    rho_t_avg = np.mean(
        CGS.hbar * args.k0_rad_per_cm * np.abs(series.values) ** 2, axis=0
    )
    grid = series.grid
    rows = []
    for idx in np.ndindex(*grid.shape):
        rows.append(list(idx) + [_fmt(comp[idx]) for comp in averaged] + [_fmt(rho_t_avg[idx])])
    header = (list("ijl"[: grid.dim])
              + [f"j{i}_avg" for i in range(grid.dim)] + ["rho_t_avg"])
    _write_csv(outdir / "currents.csv", header, rows)
    return config


# ------------------------------------------------------------------- measure


def _cmd_measure(args: argparse.Namespace) -> dict:
    spec = _load_json(args.spec)
    _ensure_keys(spec, {"eigenvalues", "amplitudes", "y0", "w", "g", "tau"},
                 {"eigenvalues", "amplitudes"}, "measurement spec")
    setup = hybridmeas.MeasurementSetup(
        eigenvalues=tuple(float(p) for p in spec["eigenvalues"]),
        amplitudes=tuple(_complex_from_pair(c, "amplitudes") for c in spec["amplitudes"]),
        y0=float(spec.get("y0", 0.0)),
        w=float(spec.get("w", 1.0)),
        g=float(spec.get("g", 1.0)),
        tau=float(spec.get("tau", 1.0)),
    )
    config = {
        "subcommand": "measure",
        "spec": spec,
        "trials": args.trials,
        "seed": args.seed,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    record = hybridmeas.run_measurement(setup)
    table = hybridmeas.sample_outcomes(record, args.trials, args.seed)
    reduced = hybridmeas.partial_trace_system(record)
    payload = {
        "eigenvalues": list(record.eigenvalues),
        "pointer_positions": record.pointer_positions.tolist(),
        "weights": record.weights.tolist(),
        "overlap_matrix": record.overlap_matrix.tolist(),
        "resolved": record.resolved,
        "unresolved_pairs": [list(p) for p in record.unresolved_pairs],
        "reduced_state": _complex_matrix_to_json(reduced.entries),
        "max_abs_deviation": table.max_abs_deviation,
    }
    (outdir / "record.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    rows = [
        [k, _fmt(record.eigenvalues[k]), _fmt(record.weights[k]),
         int(table.counts[k]), _fmt(table.frequencies[k])]
        for k in range(len(record.eigenvalues))
    ]
    _write_csv(outdir / "frequencies.csv",
               ["outcome", "eigenvalue", "weight", "count", "frequency"], rows)
    return config


# -------------------------------------------------------------------- planck


def _cmd_planck(args: argparse.Namespace) -> dict:
    config = {
        "subcommand": "planck",
        "t_kelvin": args.t_kelvin,
        "nu_min_hz": args.nu_min_hz,
        "nu_max_hz": args.nu_max_hz,
        "nu_points": args.nu_points,
        "output_dir": args.output_dir,
    }
    if args.nu_points < 2 or args.nu_max_hz <= args.nu_min_hz or args.nu_min_hz <= 0:
        raise ConfigError("planck needs nu_points >= 2 and 0 < nu_min < nu_max")
    outdir = _prepare_output_dir(config)
    nus = np.linspace(args.nu_min_hz, args.nu_max_hz, args.nu_points)
    rhos = bosestat.planck_density(nus, args.t_kelvin)
    _write_csv(outdir / "planck.csv", ["nu_hz", "rho_erg_per_cm3_hz"],
               [[_fmt(nu), _fmt(rho)] for nu, rho in zip(nus, rhos)])
    return config


# -------------------------------------------------------------------- maxent


def _cmd_maxent(args: argparse.Namespace) -> dict:
    spec = _load_json(args.spec)
    _ensure_keys(spec, {"bands", "e_target_erg", "r_max", "tol"},
                 {"bands", "e_target_erg", "r_max"}, "maxent spec")
    bands = []
    for i, b in enumerate(spec["bands"]):
        _ensure_keys(b, {"nu_hz", "d_nu_hz", "volume_cm3"}, {"nu_hz", "d_nu_hz"}, f"band {i}")
        bands.append(bosestat.FrequencyBand(
            nu=float(b["nu_hz"]), d_nu=float(b["d_nu_hz"]),
            volume=float(b.get("volume_cm3", 1.0)),
        ))
    config = {"subcommand": "maxent", "spec": spec, "output_dir": args.output_dir}
    outdir = _prepare_output_dir(config)
    table, thermo = bosestat.maximize_entropy(
        bands, float(spec["e_target_erg"]), int(spec["r_max"]),
        tol=float(spec.get("tol", 1e-10)),
    )
    rows = []
    for s, band in enumerate(table.bands):
        for r in range(table.p.shape[1]):
            rows.append([s, _fmt(band.nu), r, _fmt(table.p[s, r])])
    _write_csv(outdir / "occupancy.csv", ["band", "nu_hz", "r", "p"], rows)
    payload = {
        "beta_erg": thermo.beta,
        "temperature_K": thermo.temperature,
        "E_erg": thermo.E,
        "S_erg_per_K": thermo.S_entropy,
        "N_photons": thermo.N_photons,
    }
    (outdir / "thermo.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return config


# ---------------------------------------------------------------------- cmbr


def _cmd_cmbr(args: argparse.Namespace) -> dict:
    config = {
        "subcommand": "cmbr",
        "omega_c_rad_per_s": args.omega_c_rad_per_s,
        "t_kelvin": args.t_kelvin,
        "xi": args.xi,
        "v_over_b_cm3_per_g_unit": args.v_over_b,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    model = cmbrvac.VacuumModel(omega_c=args.omega_c_rad_per_s, T=args.t_kelvin,
                                xi=args.xi, V_over_B=args.v_over_b)
    rho_qed_planck = cmbrvac.qed_vacuum_energy(CGS.omega_P)
    payload = {
        "rho_vac_exact": cmbrvac.vacuum_energy(model, "exact"),
        "rho_vac_asymptotic": cmbrvac.vacuum_energy(model, "asymptotic"),
        "a_e_symbolic": cmbrvac.anomalous_moment(model, "symbolic"),
        "a_e_paper": cmbrvac.anomalous_moment(model, "paper-numeric"),
        "qed_comparison": {
            "rho_qed_at_omega_c": cmbrvac.qed_vacuum_energy(model.omega_c),
            "rho_qed_at_planck_cutoff": rho_qed_planck,
            "decades_above_observed_bound": math.log10(
                rho_qed_planck / cmbrvac.OBSERVED_VACUUM_BOUND
            ),
        },
    }
    (outdir / "cmbr.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return config


# ------------------------------------------------------------------- casimir


def _cmd_casimir(args: argparse.Namespace) -> dict:
    config = {
        "subcommand": "casimir",
        "a_cm": args.a_cm,
        "t_kelvin": args.t_kelvin,
        "output_dir": args.output_dir,
    }
    outdir = _prepare_output_dir(config)
    payload = {
        "pressure_dyne_per_cm2": cmbrvac.casimir_pressure(args.a_cm, args.t_kelvin),
        "coefficient": cmbrvac.casimir_coefficient(args.t_kelvin),
    }
    (outdir / "casimir.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return config


# --------------------------------------------------------------------- check


def _cmd_check(args: argparse.Namespace) -> dict:
    config = {"subcommand": "check", "output_dir": args.output_dir}
    outdir = _prepare_output_dir(config)
    results = selfcheck.run_all()
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {verdict}  {r.detail}")
        print(lines[-1])
    (outdir / "check.json").write_text(json.dumps(
        [{"name": r.name, "passed": bool(r.passed), "detail": r.detail} for r in results],
        indent=2, sort_keys=True) + "\n")
    if not all(r.passed for r in results):
        raise RuntimeError("one or more self-checks failed")
    return config


_DISPATCH = {
    "propagate": _cmd_propagate,
    "madelung": _cmd_madelung,
    "bohm": _cmd_bohm,
    "schmidt": _cmd_schmidt,
    "update": _cmd_update,
    "helicity": _cmd_helicity,
    "measure": _cmd_measure,
    "planck": _cmd_planck,
    "maxent": _cmd_maxent,
    "cmbr": _cmd_cmbr,
    "casimir": _cmd_casimir,
    "check": _cmd_check,
}


def _default_output_dir(subcommand: str) -> str:
    root = os.environ.get("GWFIELD_OUTPUT_DIR", ".")
    return str(Path(root) / f"gwfield-{subcommand}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gwfield",
        description="Complex scalar wavefield toolkit (CGS units throughout).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--output-dir", default=None,
                       help="output directory (must not already hold files); "
                            "defaults under $GWFIELD_OUTPUT_DIR")
        return p

    p = add("propagate", "evolve a field per a JSON spec and dump snapshots")
    p.add_argument("--spec", required=True, help="JSON propagation spec")

    p = add("madelung", "polar-form analysis of a field dump")
    p.add_argument("--field", required=True, help="field CSV (with JSON sidecar)")
    p.add_argument("--omega-ref-rad-per-s", type=float, required=True)
    p.add_argument("--mu-per-cm", type=float, default=0.0)
    p.add_argument("--next-field", default=None,
                   help="later snapshot for a finite-difference continuity residual")
    p.add_argument("--dt-s", type=float, default=None)
    p.add_argument("--energy-erg", type=float, default=None,
                   help="stationary energy for the Hamilton-Jacobi residual")

    p = add("bohm", "integrate trajectories in the quantum-potential gradient")
    p.add_argument("--field", required=True)
    p.add_argument("--omega-ref-rad-per-s", type=float, required=True)
    p.add_argument("--regime", choices=["massless", "massive", "classical"], required=True)
    p.add_argument("--seed-positions", required=True,
                   help="semicolon-separated points, comma-separated coordinates [cm]")
    p.add_argument("--seed-momenta", required=True,
                   help="matching momenta [g cm/s]")
    p.add_argument("--dt-s", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = add("schmidt", "Schmidt decomposition of an amplitude matrix CSV")
    p.add_argument("--matrix", required=True)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--renormalize", action="store_true")

    p = add("update", "apply a measurement update rule to a density matrix")
    p.add_argument("--rule", choices=["luders", "vonneumann"], required=True)
    p.add_argument("--rho", required=True, help="density matrix JSON ({re, im})")
    p.add_argument("--projectors", required=True, help="projector set JSON")
    p.add_argument("--outcome", type=int, default=None)

    p = add("helicity", "partial-wave split of a snapshot directory")
    p.add_argument("--series-dir", required=True)
    p.add_argument("--k0-rad-per-cm", type=float, required=True)

    p = add("measure", "impulsive pointer measurement with seeded sampling")
    p.add_argument("--spec", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("planck", "tabulate the blackbody spectral density")
    p.add_argument("--t-kelvin", type=float, required=True)
    p.add_argument("--nu-min-hz", type=float, required=True)
    p.add_argument("--nu-max-hz", type=float, required=True)
    p.add_argument("--nu-points", type=int, default=1000)

    p = add("maxent", "maximize the occupancy multiplicity at fixed energy")
    p.add_argument("--spec", required=True, help="JSON band spec")

    p = add("cmbr", "thermal vacuum energy, moment paths and the QED contrast")
    p.add_argument("--omega-c-rad-per-s", type=float, required=True)
    p.add_argument("--t-kelvin", type=float, default=2.7)
    p.add_argument("--xi", type=float, default=1.0)
    p.add_argument("--v-over-b", type=float, default=1.0)

    p = add("casimir", "plate pressure from the thermal vacuum density")
    p.add_argument("--a-cm", type=float, required=True)
    p.add_argument("--t-kelvin", type=float, default=2.7)

    add("check", "run the invariant self-check battery")
    return parser


def _emit_error(code: int, message: str, context: dict) -> None:
    sys.stderr.write(json.dumps({"code": code, "message": message, "context": context}) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.output_dir is None:
        args.output_dir = _default_output_dir(args.subcommand)
    t_start = time.monotonic()
    try:
        config = _DISPATCH[args.subcommand](args)
    except ConfigError as exc:
        _emit_error(2, str(exc), exc.context)
        return 2
    except OSError as exc:
        _emit_error(4, str(exc), {})
        return 4
    except (ValueError, RuntimeError, FloatingPointError, bosestat.ConvergenceError) as exc:
        _emit_error(3, str(exc), {"type": type(exc).__name__})
        return 3
    _write_manifest(Path(args.output_dir), config, t_start)
    return 0


if __name__ == "__main__":
    sys.exit(main())
