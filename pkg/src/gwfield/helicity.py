"""Temporal partial-wave split of a field history and the convection current.

A time series is split by the sign of its temporal frequency content.  With
snapshots s(t_m) and DFT bins at frequencies f_n = fftfreq(n_t, dt), content
evolving as exp(-i omega t) with omega > 0 sits in bins with f_n < 0.  The
convention here: the "minus" partial wave collects the bins with f_n <= 0
(exp(-i omega t), omega >= 0, i.e. the zero-frequency bin counts as the
omega -> 0+ limit), and the "plus" partial wave the bins with f_n > 0.  The
two masks partition every bin, so psi_plus + psi_minus reconstructs the
input exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CGS
from .fields import ComplexField, Grid
from . import spectral


@dataclass(frozen=True)
class TimeSeriesField:
    """Uniformly spaced snapshots of a field: values[m] is the field at
    t0 + m*dt."""

    grid: Grid
    values: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128).copy()
        if values.ndim != self.grid.dim + 1:
            raise ValueError("values must stack snapshots along axis 0")
        if values.shape[1:] != self.grid.shape:
            raise ValueError("snapshot shape does not match grid")
        if values.shape[0] < 8:
            raise ValueError("a time series needs at least 8 snapshots")
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ValueError("dt must be finite and positive")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_snapshots(self) -> int:
        return self.values.shape[0]

    def snapshot(self, m: int) -> ComplexField:
        return ComplexField(grid=self.grid, values=self.values[m])

    @classmethod
    def from_fields(cls, fields: list[ComplexField], dt: float, t0: float = 0.0) -> "TimeSeriesField":
        grid = fields[0].grid
        return cls(grid=grid, values=np.stack([f.values for f in fields]), dt=dt, t0=t0)

    def norm(self) -> float:
        """sqrt of the snapshot-averaged squared field norm."""
        dv = self.grid.cell_volume
        per_snapshot = np.sum(np.abs(self.values) ** 2, axis=tuple(range(1, self.values.ndim)))
        return math.sqrt(float(np.mean(per_snapshot)) * dv)


def partial_wave_split(
    series: TimeSeriesField, nyquist_tol: float = 1e-10
) -> tuple[TimeSeriesField, TimeSeriesField]:
    """Split into (psi_plus, psi_minus) by temporal frequency sign.

    Errors out if the Nyquist bin carries more than ``nyquist_tol`` of the
    total spectral energy: that content is aliased and its frequency sign is
    ambiguous.
    """
    n_t = series.n_snapshots
    spec = np.fft.fft(series.values, axis=0)
    freqs = np.fft.fftfreq(n_t, d=series.dt)
    energy = np.sum(np.abs(spec) ** 2, axis=tuple(range(1, spec.ndim)))
    total = float(energy.sum())
    if n_t % 2 == 0 and total > 0.0:
        nyquist_fraction = float(energy[n_t // 2]) / total
        if nyquist_fraction > nyquist_tol:
            raise ValueError(
                f"aliased content at the Nyquist bin ({nyquist_fraction:.3e} of energy)"
            )
    shape = (n_t,) + (1,) * series.grid.dim
    minus_mask = (freqs <= 0.0).reshape(shape)
    plus = np.fft.ifft(spec * (~minus_mask), axis=0)
    minus = np.fft.ifft(spec * minus_mask, axis=0)
    make = lambda v: TimeSeriesField(grid=series.grid, values=v, dt=series.dt, t0=series.t0)
    return make(plus), make(minus)


@dataclass(frozen=True)
class CurrentField:
    """Convection current j = hbar Im(psi* grad psi) with its positive
    time component rho_t = hbar k0 |psi|^2."""

    grid: Grid
    j: tuple[np.ndarray, ...]
    rho_t: np.ndarray

    def __post_init__(self) -> None:
        if np.any(self.rho_t < 0.0):
            raise ValueError("rho_t must be >= 0")


def convection_current(psi: ComplexField, k0: float) -> CurrentField:
    grads = spectral.gradient(psi.values, psi.grid)
    j = tuple(CGS.hbar * np.imag(np.conj(psi.values) * g) for g in grads)
    rho_t = CGS.hbar * k0 * psi.density()
    return CurrentField(grid=psi.grid, j=j, rho_t=rho_t)


def current_continuity(series: TimeSeriesField, k0: float) -> float:
    """Normalized RMS of d rho_t/dt + div(2c j) over interior snapshots.

    rho_t = hbar k0 |psi|^2 is conserved under the first-order evolution with
    flux 2c*j: the factor 2c is the group-velocity gearing of the
    first-order reduction (modes transport at 2c k/k0).  The time derivative
    is a centered difference, so for snapshots of the exact propagator the
    residual is limited by the sampling interval, not the physics.
    """
    if series.n_snapshots < 3:
        raise ValueError("continuity check needs at least 3 snapshots")
    grid = series.grid
    rho_t = CGS.hbar * k0 * np.abs(series.values) ** 2
    residuals = []
    for m in range(1, series.n_snapshots - 1):
        rho_dot = (rho_t[m + 1] - rho_t[m - 1]) / (2.0 * series.dt)
        current = convection_current(series.snapshot(m), k0)
        div = spectral.divergence([2.0 * CGS.c * comp for comp in current.j], grid).real
        residuals.append(rho_dot + div)
    residuals = np.asarray(residuals)
    rho_dot_all = (rho_t[2:] - rho_t[:-2]) / (2.0 * series.dt)
    length_scale = float(np.prod(grid.lengths)) ** (1.0 / grid.dim)
    floor = 2.0 * CGS.c * CGS.hbar * float(np.abs(series.values).max() ** 2) / length_scale**2
    denom = float(np.abs(rho_dot_all).max()) + floor
    return float(np.sqrt(np.mean(residuals**2))) / denom


def time_averaged_current(series: TimeSeriesField, k0: float) -> tuple[np.ndarray, ...]:
    """Snapshot-averaged convection current.

    Cross terms between partial waves average out when the series spans a
    whole common period of the retained modes, so over such a window
    avg j(psi) = avg j(psi_plus) + avg j(psi_minus).
    """
    acc = None
    for m in range(series.n_snapshots):
        current = convection_current(series.snapshot(m), k0)
        if acc is None:
            acc = [comp.copy() for comp in current.j]
        else:
            for i, comp in enumerate(current.j):
                acc[i] += comp
    return tuple(comp / series.n_snapshots for comp in acc)
