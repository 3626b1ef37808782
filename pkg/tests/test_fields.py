import math

import numpy as np
import pytest

from gwfield.constants import CGS, CgsConstants
from gwfield.fields import (
    ComplexField,
    Grid,
    PlaneWaveSpec,
    inner_product,
    make_plane_wave,
    normalize,
)
from gwfield import spectral
from gwfield.fieldio import read_field, write_field

from conftest import random_field


class TestConstants:
    def test_all_positive(self):
        for name, value in CGS.as_dict().items():
            assert value > 0.0, name

    def test_alpha_identity(self):
        assert abs(CGS.e_charge**2 / (CGS.hbar * CGS.c) / CGS.alpha - 1.0) < 1e-6

    def test_bohr_magneton_identity(self):
        derived = CGS.e_charge * CGS.hbar / (2.0 * CGS.m_e * CGS.c)
        assert abs(derived / CGS.mu_B - 1.0) < 1e-6

    def test_inconsistent_table_rejected(self):
        with pytest.raises(ValueError):
            CgsConstants(alpha=8e-3)

    def test_checksum_stable(self):
        assert CGS.checksum() == CgsConstants().checksum()


class TestGrid:
    def test_spacing_exact(self):
        grid = Grid.of((16, 32), (2.0, 4.0))
        assert grid.spacings == (2.0 / 16, 4.0 / 32)
        assert grid.cell_volume == (2.0 / 16) * (4.0 / 32)

    def test_odd_points_rejected(self):
        with pytest.raises(ValueError):
            Grid.of(9, 1.0)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            Grid.of(4, 1.0)

    def test_dim_limit(self):
        with pytest.raises(ValueError):
            Grid(dim=4, n_points=(8, 8, 8, 8), lengths=(1.0,) * 4)


class TestComplexField:
    def test_nan_rejected(self):
        grid = Grid.of(8, 1.0)
        values = np.ones(8, dtype=complex)
        values[3] = np.nan
        with pytest.raises(ValueError):
            ComplexField(grid=grid, values=values)

    def test_values_immutable(self):
        grid = Grid.of(8, 1.0)
        field = ComplexField(grid=grid, values=np.ones(8, dtype=complex))
        with pytest.raises(ValueError):
            field.values[0] = 2.0

    def test_normalized_flag_checked(self):
        grid = Grid.of(8, 1.0)
        with pytest.raises(ValueError):
            ComplexField(grid=grid, values=2.0 * np.ones(8, dtype=complex), normalized=True)


class TestPlaneWave:
    def test_zero_mode_constant(self):
        grid = Grid.of(16, 1.0)
        field = make_plane_wave(PlaneWaveSpec(1.0, (0.0,), 0.0), grid)
        np.testing.assert_allclose(field.values, 1.0)

    def test_unit_modulus(self):
        grid = Grid.of(32, 1.0)
        k = 2.0 * math.pi / grid.lengths[0]
        field = make_plane_wave(PlaneWaveSpec(1.0, (k,), CGS.c * k), grid)
        np.testing.assert_allclose(np.abs(field.values), 1.0, atol=1e-14)
        # one full oscillation across the box
        assert abs(field.values[0] - field.values[-1] * np.exp(1j * k * grid.spacings[0])) < 1e-12

    def test_massive_dispersion_enforced(self):
        L = 1.0
        k = 2.0 * math.pi / L
        mu = 2.0 * math.pi / L
        ok_omega = CGS.c * math.sqrt(k**2 + mu**2)
        spec = PlaneWaveSpec(1.0, (k,), ok_omega, mu=mu)
        assert spec.mu == mu
        with pytest.raises(ValueError):
            PlaneWaveSpec(1.0, (k,), CGS.c * k, mu=mu)

    def test_non_commensurate_rejected(self):
        grid = Grid.of(16, 1.0)
        k = 1.5 * 2.0 * math.pi / grid.lengths[0]
        with pytest.raises(ValueError, match="commensurate"):
            make_plane_wave(PlaneWaveSpec(1.0, (k,), CGS.c * k), grid)

    def test_time_argument_advances_phase(self):
        grid = Grid.of(16, 1.0)
        k = 2.0 * math.pi / grid.lengths[0]
        omega = CGS.c * k
        t = 3.7e-12
        f0 = make_plane_wave(PlaneWaveSpec(1.0, (k,), omega), grid)
        ft = make_plane_wave(PlaneWaveSpec(1.0, (k,), omega), grid, t=t)
        np.testing.assert_allclose(ft.values, f0.values * np.exp(-1j * omega * t), atol=1e-12)


class TestNormalize:
    def test_constant_field_unit_volume(self):
        grid = Grid.of(16, 1.0)
        field = ComplexField(grid=grid, values=2.0 * np.ones(16, dtype=complex))
        out = normalize(field)
        np.testing.assert_allclose(out.values, 1.0)
        assert out.normalized

    def test_idempotent(self, rng):
        grid = Grid.of(64, 1.0)
        field = normalize(random_field(grid, rng))
        again = normalize(field)
        np.testing.assert_allclose(again.values, field.values, atol=1e-12)

    def test_global_scale_invariance_of_density(self, rng):
        grid = Grid.of(64, 1.0)
        field = random_field(grid, rng)
        scaled = ComplexField(grid=grid, values=7j * field.values)
        d1 = normalize(field).density()
        d2 = normalize(scaled).density()
        np.testing.assert_allclose(d1, d2, rtol=1e-12)

    def test_null_state_rejected(self):
        grid = Grid.of(8, 1.0)
        field = ComplexField(grid=grid, values=np.zeros(8, dtype=complex))
        with pytest.raises(ValueError, match="null state"):
            normalize(field)


class TestInnerProduct:
    def test_self_inner_product_is_one(self, rng):
        grid = Grid.of(64, 1.0)
        field = normalize(random_field(grid, rng))
        assert abs(inner_product(field, field) - 1.0) < 1e-10

    def test_fourier_modes_orthogonal(self):
        grid = Grid.of(32, 1.0)
        k = 2.0 * math.pi / grid.lengths[0]
        a = make_plane_wave(PlaneWaveSpec(1.0, (k,), CGS.c * k), grid)
        b = make_plane_wave(PlaneWaveSpec(1.0, (3 * k,), CGS.c * 3 * k), grid)
        assert abs(inner_product(a, b)) < 1e-10

    def test_conjugate_symmetry_against_direct_sum(self, rng):
        grid = Grid.of(32, 1.0)
        a = random_field(grid, rng)
        b = random_field(grid, rng)
        ab = inner_product(a, b)
        # independent oracle: plain python accumulation
        direct = sum(
            complex(a.values[i]).conjugate() * complex(b.values[i]) for i in range(32)
        ) * grid.cell_volume
        assert abs(ab - direct) < 1e-12
        assert abs(ab - inner_product(b, a).conjugate()) < 1e-12

    def test_grid_mismatch_rejected(self, rng):
        a = random_field(Grid.of(16, 1.0), rng)
        b = random_field(Grid.of(32, 1.0), rng)
        with pytest.raises(ValueError):
            inner_product(a, b)


class TestSpectralProperties:
    def test_parseval(self, rng):
        for shape, lengths in [((64,), (1.0,)), ((16, 16), (1.0, 2.0))]:
            grid = Grid.of(shape, lengths)
            field = random_field(grid, rng)
            physical = field.norm_squared()
            fourier = spectral.fourier_norm_squared(field)
            assert abs(fourier / physical - 1.0) < 1e-9

    def test_3d_laplacian_eigenvalue(self):
        grid = Grid.of((16, 16, 16), (1.0, 2.0, 0.5))
        k_vec = tuple(2.0 * math.pi * m / l for m, l in zip((1, 2, 1), grid.lengths))
        k_mag_sq = sum(k * k for k in k_vec)
        psi = make_plane_wave(PlaneWaveSpec(1.0, k_vec, CGS.c * math.sqrt(k_mag_sq)), grid)
        lap = spectral.laplacian(psi.values, grid)
        np.testing.assert_allclose(lap, -k_mag_sq * psi.values, rtol=1e-10)


class TestFieldIO:
    def test_round_trip_exact(self, rng, tmp_path):
        grid = Grid.of((16, 8), (1.0, 0.5))
        field = random_field(grid, rng)
        csv_path, side = write_field(field, tmp_path / "dump.csv", t_s=1.25e-9)
        back, meta = read_field(csv_path)
        assert back.grid == grid
        assert meta["t_s"] == 1.25e-9
        # repr round-trip is exact, comfortably under the 1e-15 budget
        np.testing.assert_array_equal(back.values, field.values)

    def test_missing_sidecar(self, tmp_path):
        (tmp_path / "orphan.csv").write_text("i,re,im\n0,1.0,0.0\n")
        with pytest.raises(FileNotFoundError):
            read_field(tmp_path / "orphan.csv")
