"""Fast invariant battery behind ``gwfield check``.

Each check is a small, self-contained verification of one structural
invariant; the battery is sized to finish in a few seconds.  The pytest
suite is the authoritative verification, this is the field diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import CGS
from . import bosestat, cmbrvac, hybridmeas, madelung, statequant, wavemech
from .fields import Grid, PlaneWaveSpec, inner_product, make_plane_wave, normalize
from .helicity import TimeSeriesField, partial_wave_split


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_constants() -> CheckResult:
    alpha = CGS.e_charge**2 / (CGS.hbar * CGS.c)
    dev = abs(alpha / CGS.alpha - 1.0)
    return CheckResult("constants-identities", dev < 1e-6, f"alpha deviation {dev:.2e}")


def _check_plane_wave_orthogonality() -> CheckResult:
    grid = Grid.of(64, 1.0)
    k1 = 2.0 * math.pi / grid.lengths[0]
    a = normalize(make_plane_wave(PlaneWaveSpec(1.0, (k1,), CGS.c * k1), grid))
    b = normalize(make_plane_wave(PlaneWaveSpec(1.0, (2 * k1,), CGS.c * 2 * k1), grid))
    off = abs(inner_product(a, b))
    return CheckResult("plane-wave-orthogonality", off < 1e-10, f"<k1|k2> = {off:.2e}")


def _check_unitarity() -> CheckResult:
    rng = np.random.default_rng(7)
    grid = Grid.of(128, 1.0)
    values = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    from .fields import ComplexField

    field = normalize(ComplexField(grid=grid, values=values))
    params = wavemech.EffectiveMassParams(omega_ref=CGS.c * 2 * math.pi)
    out = wavemech.evolve_schrodinger(field, params, 1e-9)
    drift = abs(out.norm_squared() - 1.0)
    return CheckResult("schrodinger-unitarity", drift < 1e-10, f"norm drift {drift:.2e}")


def _check_wave_energy() -> CheckResult:
    grid = Grid.of(128, 1.0)
    spec = wavemech.GaussianPacketSpec(center=(0.5,), sigma0=0.04, k_carrier=(2 * math.pi * 8,))
    psi = wavemech.gaussian_packet(spec, grid)
    state = wavemech.right_moving_state(psi)
    e0 = wavemech.wave_energy(state, mu=0.0)
    dt = grid.lengths[0] / CGS.c / 100.0
    for _ in range(100):
        state = wavemech.evolve_classical_wave(state, 0.0, dt)
    drift = abs(wavemech.wave_energy(state, 0.0) / e0 - 1.0)
    return CheckResult("wave-energy-conservation", drift < 1e-9, f"relative drift {drift:.2e}")


def _check_box_quantum_potential() -> CheckResult:
    a = 1.0
    grid = Grid.of(256, 2.0 * a)
    worst = 0.0
    for n in (1, 2, 3):
        k_n = n * math.pi / a
        x = grid.axis(0)
        from .fields import ComplexField

        psi = normalize(ComplexField(grid=grid, values=np.sin(k_n * x) + 0j))
        form = madelung.polar_decompose(psi)
        q = madelung.quantum_potential(form, m_star=CGS.hbar * k_n / (2.0 * CGS.c))
        q_mean = float(np.sum(form.rho * q.Q) / np.sum(form.rho))
        expected = n * math.pi * CGS.hbar * CGS.c / a
        worst = max(worst, abs(q_mean / expected - 1.0))
    return CheckResult("box-zero-point", worst < 1e-4, f"worst relative error {worst:.2e}")


def _check_luders() -> CheckResult:
    rng = np.random.default_rng(11)
    ok = True
    for _ in range(100):
        dim = int(rng.integers(2, 6))
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = statequant.DensityMatrix(entries=a @ a.conj().T / np.trace(a @ a.conj().T))
        pset = statequant.ProjectorSet.computational(dim)
        probs = [float(np.real(np.trace(p @ rho.entries))) for p in pset.projectors]
        ok = ok and abs(sum(probs) - 1.0) < 1e-12
        updated = statequant.von_neumann_update(rho, pset)
        ok = ok and updated.purity() <= rho.purity() + 1e-12
    return CheckResult("measurement-updates", ok, "100 random states")


def _check_partial_waves() -> CheckResult:
    grid = Grid.of(16, 1.0)
    n_t, omega = 32, 2.0 * math.pi * 5.0
    dt = 2.0 * math.pi / omega / n_t * 4
    times = np.arange(n_t) * dt
    values = np.exp(-1j * omega * times)[:, None] * np.ones((1, 16))
    series = TimeSeriesField(grid=grid, values=values, dt=dt)
    plus, minus = partial_wave_split(series)
    ok = plus.norm() < 1e-10 * minus.norm()
    recon = np.abs(plus.values + minus.values - series.values).max()
    return CheckResult(
        "partial-wave-split", ok and recon < 1e-10, f"leak {plus.norm():.2e} recon {recon:.2e}"
    )


def _check_measurement_trace() -> CheckResult:
    setup = hybridmeas.MeasurementSetup(
        eigenvalues=(1.0, -1.0), amplitudes=(math.sqrt(0.3), math.sqrt(0.7)), g=10.0
    )
    record = hybridmeas.run_measurement(setup)
    reduced = hybridmeas.partial_trace_system(record)
    rho = statequant.DensityMatrix.from_state(np.array(setup.amplitudes))
    updated = statequant.von_neumann_update(rho, statequant.ProjectorSet.computational(2))
    dev = float(np.abs(reduced.entries - updated.entries).max())
    return CheckResult("measurement-partial-trace", dev < 1e-12, f"max deviation {dev:.2e}")


def _check_maxent() -> CheckResult:
    band = bosestat.FrequencyBand(nu=1e10, d_nu=1e8, volume=1.0)
    T = CGS.h * band.nu / CGS.k_B
    row = bosestat.geometric_occupancy(band, T, r_max=40)
    e_target = CGS.h * band.nu * float(row @ np.arange(len(row)))
    table, thermo = bosestat.maximize_entropy([band], e_target, r_max=len(row) - 1)
    beta_dev = abs(thermo.beta / (CGS.k_B * T) - 1.0)
    return CheckResult("entropy-maximizer", beta_dev < 1e-8, f"beta deviation {beta_dev:.2e}")


def _check_planck_peak() -> CheckResult:
    x_star = bosestat.planck_peak_x()
    return CheckResult(
        "planck-peak", abs(x_star - 2.8214393721) < 1e-6, f"x* = {x_star:.10f}"
    )


def _check_spontaneous() -> CheckResult:
    worst = max(
        bosestat.spontaneous_equilibrium_check(nu, T, g)
        for nu in (1e9, 1e11, 1e13)
        for T in (1.0, 2.7, 40.0)
        for g in (0.5, 1.0, 3.0)
    )
    return CheckResult("spontaneous-equilibrium", worst < 1e-12, f"worst residual {worst:.2e}")


def _check_moment_roundtrip() -> CheckResult:
    model = cmbrvac.VacuumModel(omega_c=2.87e9)
    a_e = cmbrvac.anomalous_moment(model, variant="paper-numeric")
    target = CGS.alpha / (2.0 * math.pi)
    dev = abs(a_e / target - 1.0)
    return CheckResult("moment-roundtrip", dev < 0.01, f"a_e deviation {dev:.2e}")


def _check_casimir() -> CheckResult:
    a = 1e-4
    h = 1e-9
    model = lambda sep: cmbrvac.VacuumModel(omega_c=math.pi * CGS.c / sep, T=2.7)
    fd = (
        cmbrvac.vacuum_energy(model(a + h), "asymptotic")
        - cmbrvac.vacuum_energy(model(a - h), "asymptotic")
    ) / (2.0 * h)
    dev = abs(fd / cmbrvac.casimir_pressure(a) - 1.0)
    return CheckResult("casimir-derivative", dev < 1e-6, f"derivative deviation {dev:.2e}")


ALL_CHECKS: tuple[Callable[[], CheckResult], ...] = (
    _check_constants,
    _check_plane_wave_orthogonality,
    _check_unitarity,
    _check_wave_energy,
    _check_box_quantum_potential,
    _check_luders,
    _check_partial_waves,
    _check_measurement_trace,
    _check_maxent,
    _check_planck_peak,
    _check_spontaneous,
    _check_moment_roundtrip,
    _check_casimir,
)


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
