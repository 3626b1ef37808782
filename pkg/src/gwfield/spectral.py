"""FFT-based derivatives and diagnostics on periodic grids.

All propagators and residual checks in this package differentiate spectrally:
for band-limited periodic data the derivatives are exact to rounding, which
keeps the physics claims separated from discretization error.
"""

from __future__ import annotations

import numpy as np

from .fields import ComplexField, Grid


def wavenumbers(grid: Grid) -> list[np.ndarray]:
    """Per-axis angular wavenumber arrays (2*pi * FFT frequencies), 1D each."""
    return [
        2.0 * np.pi * np.fft.fftfreq(n, d=dx)
        for n, dx in zip(grid.n_points, grid.spacings)
    ]


def k_meshes(grid: Grid) -> list[np.ndarray]:
    return list(np.meshgrid(*wavenumbers(grid), indexing="ij"))


def k_squared(grid: Grid) -> np.ndarray:
    meshes = k_meshes(grid)
    out = np.zeros(grid.shape)
    for m in meshes:
        out = out + m * m
    return out


def laplacian(values: np.ndarray, grid: Grid) -> np.ndarray:
    return np.fft.ifftn(-k_squared(grid) * np.fft.fftn(values))


def gradient(values: np.ndarray, grid: Grid) -> list[np.ndarray]:
    """Spectral gradient, one complex array per axis."""
    spec = np.fft.fftn(values)
    return [np.fft.ifftn(1j * km * spec) for km in k_meshes(grid)]


def divergence(components: list[np.ndarray], grid: Grid) -> np.ndarray:
    out = np.zeros(grid.shape, dtype=np.complex128)
    for i, (comp, km) in enumerate(zip(components, k_meshes(grid))):
        out = out + np.fft.ifftn(1j * km * np.fft.fftn(comp))
    return out


def fourier_norm_squared(field: ComplexField) -> float:
    """Parseval partner of ``ComplexField.norm_squared``."""
    spec = np.fft.fftn(field.values)
    n_total = float(np.prod(field.grid.n_points))
    return float(np.sum(np.abs(spec) ** 2)) * field.grid.cell_volume / n_total


def sqrt_density_curvature(rho: np.ndarray, grid: Grid, mask: np.ndarray) -> np.ndarray:
    """laplacian(sqrt(rho))/sqrt(rho), evaluated through the density.

    Uses the identity lap(sqrt(rho))/sqrt(rho) = lap(rho)/(2 rho)
    - |grad rho|^2/(4 rho^2).  Differentiating rho rather than sqrt(rho)
    matters: at density nodes sqrt(rho) has a kink that would poison the
    spectrum, while rho itself stays smooth.  Entries under ``mask`` are set
    to zero (the value is undefined there).
    """
    rho = np.asarray(rho, dtype=float)
    lap_rho = laplacian(rho, grid).real
    grad_sq = np.zeros(grid.shape)
    for comp in gradient(rho, grid):
        grad_sq = grad_sq + comp.real**2
    safe_rho = np.where(mask, 1.0, rho)
    curvature = lap_rho / (2.0 * safe_rho) - grad_sq / (4.0 * safe_rho**2)
    return np.where(mask, 0.0, curvature)
