import numpy as np
import pytest

from gwfield.fields import ComplexField, Grid


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_field(grid: Grid, rng, band_fraction: float = 0.25) -> ComplexField:
    """Random band-limited complex field (smooth enough for spectral ops)."""
    spec = np.zeros(grid.shape, dtype=np.complex128)
    mesh = np.meshgrid(*[np.fft.fftfreq(n) for n in grid.n_points], indexing="ij")
    keep = np.ones(grid.shape, dtype=bool)
    for m in mesh:
        keep &= np.abs(m) < band_fraction / 2.0
    noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    spec[keep] = noise[keep]
    values = np.fft.ifftn(spec)
    return ComplexField(grid=grid, values=values)
