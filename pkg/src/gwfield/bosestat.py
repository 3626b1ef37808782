"""Photon state counting and entropy maximization.

A frequency band [nu, nu + d_nu) in a box of volume V holds
A*V = (8 pi nu^2 d_nu / c^3) * V single-photon states (both helicities).
A macrostate assigns p_r of those states to hold exactly r photons; its
log-multiplicity in the Stirling regime is

    ln W = sum_s [ M_s ln M_s - sum_r p_r^s ln p_r^s ],   M_s = A^s V,

and maximizing ln W at fixed total energy E = sum_s h nu^s sum_r r p_r^s
(photon number is NOT constrained) yields the geometric occupancies
p_r = M (1 - x) x^r with x = exp(-h nu / beta), which reduce to the Planck
spectral density once beta is identified with kT.

``maximize_entropy`` performs that maximization numerically (entropic mirror
ascent on each band's simplex, scalar root-find on the energy multiplier);
``geometric_occupancy`` evaluates the closed form, which serves as an
independent certificate of the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import xlogy

from .constants import CGS

MAX_BRUTE_FORCE_PHOTONS = 8


class ConvergenceError(RuntimeError):
    """Raised when the entropy maximizer fails; carries the last iterate."""

    def __init__(self, message: str, last_table=None):
        super().__init__(message)
        self.last_table = last_table


def band_state_count(nu: float, d_nu: float) -> float:
    """States per unit volume in [nu, nu + d_nu): 8 pi nu^2 d_nu / c^3."""
    if not (nu > 0.0 and d_nu > 0.0):
        raise ValueError("nu and d_nu must be positive")
    return 8.0 * math.pi * nu**2 * d_nu / CGS.c**3


@dataclass(frozen=True)
class FrequencyBand:
    """A band with its per-volume state count and the box volume."""

    nu: float
    d_nu: float
    volume: float = 1.0

    def __post_init__(self) -> None:
        if not (self.nu > 0.0 and self.d_nu > 0.0 and self.volume > 0.0):
            raise ValueError("nu, d_nu and volume must all be positive")

    @property
    def states_per_volume(self) -> float:
        return band_state_count(self.nu, self.d_nu)

    @property
    def n_states(self) -> float:
        """Total states in the band, M = A * V (continuous, Stirling regime)."""
        return self.states_per_volume * self.volume


def suggested_r_max(band: FrequencyBand, T: float, tail: float = 1e-12) -> int:
    """Smallest occupation cutoff whose geometric tail is below ``tail``."""
    x = math.exp(-CGS.h * band.nu / (CGS.k_B * T))
    if x == 0.0:
        return 1
    r = int(math.ceil(math.log(tail) / math.log(x)))
    return max(r, 1)


def geometric_occupancy(band: FrequencyBand, T: float, r_max: int | None = None) -> np.ndarray:
    """Closed-form occupancies p_r = M (1 - x) x^r, x = exp(-h nu / kT).

    ``r_max`` is raised automatically until the truncated tail is below 1e-12
    of the total, so sum_r p_r = M to that accuracy.
    """
    if T <= 0.0:
        raise ValueError("temperature must be positive")
    needed = suggested_r_max(band, T)
    if r_max is None or r_max < needed:
        r_max = needed
    x = math.exp(-CGS.h * band.nu / (CGS.k_B * T))
    r = np.arange(r_max + 1)
    return band.n_states * (1.0 - x) * x**r


@dataclass(frozen=True)
class OccupancyTable:
    """Per-band occupation counts p[s, r], r = 0..r_max."""

    bands: tuple[FrequencyBand, ...]
    p: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] != len(self.bands):
            raise ValueError("p must be a (n_bands, r_max+1) array")
        if np.any(p < -1e-30):
            raise ValueError("occupancies must be >= 0")
        for s, band in enumerate(self.bands):
            total = float(p[s].sum())
            if abs(total - band.n_states) > 1e-8 * band.n_states:
                raise ValueError(
                    f"band {s} occupancies sum to {total}, expected {band.n_states}"
                )
        object.__setattr__(self, "p", p)

    @property
    def r_max(self) -> int:
        return self.p.shape[1] - 1

    def photon_numbers(self) -> np.ndarray:
        r = np.arange(self.p.shape[1])
        return self.p @ r

    def total_energy(self) -> float:
        per_band = self.photon_numbers()
        return float(sum(CGS.h * band.nu * n for band, n in zip(self.bands, per_band)))

    def ln_multiplicity(self) -> float:
        total = 0.0
        for s, band in enumerate(self.bands):
            m = band.n_states
            total += m * math.log(m) - float(np.sum(xlogy(self.p[s], self.p[s])))
        return total


@dataclass(frozen=True)
class ThermoState:
    """Solution summary: energy multiplier beta (= kT at the optimum),
    total energy, entropy S = k ln W, and total photon number."""

    beta: float
    E: float
    S_entropy: float
    N_photons: float

    def __post_init__(self) -> None:
        if not (self.beta > 0.0):
            raise ValueError("beta must be positive at a solution")

    @property
    def temperature(self) -> float:
        return self.beta / CGS.k_B


def _band_optimum(n_states: float, h_nu: float, beta: float, r_max: int) -> np.ndarray:
    """Maximize -sum p ln p - (h nu / beta) sum r p on the simplex sum p = M.

    Entropic mirror ascent with step 0.5: each iteration halves the distance
    of ln p from the fixed point, so ~60 iterations reach rounding level.
    """
    gamma = h_nu / beta
    r = np.arange(r_max + 1, dtype=float)
    p = np.full(r_max + 1, n_states / (r_max + 1.0))
    eta = 0.5
    for _ in range(200):
        with np.errstate(divide="ignore"):
            log_p = np.log(p)
        update = (1.0 - eta) * log_p - eta * (1.0 + gamma * r)
        update -= update.max()
        q = np.exp(update)
        p_new = n_states * q / q.sum()
        if np.max(np.abs(p_new - p) / np.maximum(p_new, 1e-300 * n_states)) < 1e-15:
            return p_new
        p = p_new
    return p


def maximize_entropy(
    bands: list[FrequencyBand],
    e_target: float,
    r_max: int,
    tol: float = 1e-10,
) -> tuple[OccupancyTable, ThermoState]:
    """Numerically maximize ln W at fixed total energy.

    The KKT system is separable: at a trial energy multiplier beta each band's
    optimum is found by mirror ascent on its own simplex, and beta is then
    root-found (Brent) so the optimal table hits ``e_target``.  Raises
    :class:`ConvergenceError` when the bracket fails and ValueError when the
    target energy is not representable with the given ``r_max``.
    """
    if not bands:
        raise ValueError("at least one band is required")
    if not (e_target > 0.0 and math.isfinite(e_target)):
        raise ValueError("e_target must be finite and positive")
    if r_max < 1:
        raise ValueError("r_max must be >= 1")

    e_ceiling = sum(CGS.h * b.nu * b.n_states * r_max / 2.0 for b in bands)
    if e_target >= 0.98 * e_ceiling:
        raise ValueError(
            f"e_target = {e_target} is not representable below r_max = {r_max} "
            f"(uniform-occupancy ceiling {e_ceiling})"
        )

    def solve_bands(beta: float) -> list[np.ndarray]:
        return [_band_optimum(b.n_states, CGS.h * b.nu, beta, r_max) for b in bands]

    def energy_mismatch(beta: float) -> float:
        rows = solve_bands(beta)
        r = np.arange(r_max + 1, dtype=float)
        energy = sum(CGS.h * b.nu * float(row @ r) for b, row in zip(bands, rows))
        return energy - e_target

    beta_scale = max(CGS.h * b.nu for b in bands)
    lo, hi = beta_scale * 1e-6, beta_scale
    for _ in range(200):
        if energy_mismatch(lo) < 0.0:
            break
        lo *= 0.25
    else:
        raise ConvergenceError("failed to bracket beta from below")
    for _ in range(200):
        if energy_mismatch(hi) > 0.0:
            break
        hi *= 4.0
    else:
        raise ConvergenceError(
            "failed to bracket beta from above", last_table=solve_bands(hi)
        )
    beta = float(brentq(energy_mismatch, lo, hi, xtol=1e-300, rtol=8.9e-16))
    rows = solve_bands(beta)
    table = OccupancyTable(bands=tuple(bands), p=np.stack(rows))
    energy = table.total_energy()
    if abs(energy - e_target) > max(tol * e_target, 1e2 * np.finfo(float).eps * e_target):
        raise ConvergenceError(
            f"energy matched to {abs(energy - e_target) / e_target:.3e} relative, "
            f"worse than tol = {tol}",
            last_table=table,
        )
    thermo = ThermoState(
        beta=beta,
        E=energy,
        S_entropy=CGS.k_B * table.ln_multiplicity(),
        N_photons=float(table.photon_numbers().sum()),
    )
    return table, thermo


def planck_density(nu, T: float):
    """Spectral energy density (8 pi nu^2 / c^3) h nu / (exp(h nu/kT) - 1),
    in erg/(cm^3 Hz)."""
    nu = np.asarray(nu, dtype=float)
    if np.any(nu <= 0.0) or T <= 0.0:
        raise ValueError("nu and T must be positive")
    x = CGS.h * nu / (CGS.k_B * T)
    out = (8.0 * math.pi * nu**2 / CGS.c**3) * CGS.h * nu / np.expm1(x)
    return float(out) if out.ndim == 0 else out


def planck_peak_x() -> float:
    """Dimensionless peak location x* = h nu*/kT, the root of 3(1 - e^-x) = x."""
    return float(brentq(lambda x: 3.0 * (1.0 - math.exp(-x)) - x, 1.0, 5.0, rtol=1e-14))


def spontaneous_equilibrium_check(
    nu: float,
    T: float,
    g_ratio: float,
    photon_scale: float = 1.0,
    include_spontaneous: bool = True,
) -> float:
    """Residual of the two-level equilibrium condition
    |n2 (N + A) h nu / (n1 N h nu) - g2/g1|.

    N = A/(exp(x) - 1) is the thermal photon count (x = h nu/kT) and
    n2/n1 = (g2/g1) exp(-x) is the Boltzmann population ratio; with those the
    residual vanishes identically.  ``photon_scale`` perturbs N and
    ``include_spontaneous`` drops the +A term, both of which break the
    identity.  The stable evaluation e^-x - expm1(-x)/scale avoids overflow
    for large x.
    """
    if nu <= 0.0 or T <= 0.0 or g_ratio <= 0.0 or photon_scale <= 0.0:
        raise ValueError("nu, T, g_ratio and photon_scale must be positive")
    x = CGS.h * nu / (CGS.k_B * T)
    term = math.exp(-x)
    if include_spontaneous:
        term -= math.expm1(-x) / photon_scale
    return g_ratio * abs(term - 1.0)


def _distinct_permutations(labels: tuple[int, ...]):
    """Distinct permutations of a label multiset (no repeats)."""
    counts: dict[int, int] = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    n = len(labels)

    def rec(prefix: list[int]):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for lab in sorted(counts):
            if counts[lab] > 0:
                counts[lab] -= 1
                prefix.append(lab)
                yield from rec(prefix)
                prefix.pop()
                counts[lab] += 1

    yield from rec([])


def symmetrize_photons(modes, occupation):
    """Build the permutation-symmetric N-point evaluator.

    ``modes`` is a sequence of single-particle mode functions and
    ``occupation[i]`` how many photons occupy mode i.  The evaluator returns

        (1/sqrt(W)) * sum over distinct arrangements of prod_j mode_(j)(x_j)

    with W the number of distinct arrangements N!/prod(n_i!); for orthonormal
    modes the result is normalized.  Limited to N <= 8 (brute-force scale).
    """
    occupation = [int(n) for n in occupation]
    if len(occupation) != len(modes):
        raise ValueError("occupation must give one count per mode")
    if any(n < 0 for n in occupation):
        raise ValueError("occupations must be >= 0")
    n_total = sum(occupation)
    if n_total == 0:
        raise ValueError("at least one photon is required")
    if n_total > MAX_BRUTE_FORCE_PHOTONS:
        raise ValueError(f"N = {n_total} photons is beyond brute-force scale")
    labels = tuple(i for i, count in enumerate(occupation) for _ in range(count))
    arrangements = list(_distinct_permutations(labels))
    weight = 1.0 / math.sqrt(len(arrangements))

    def evaluator(points):
        points = np.asarray(points)
        if points.shape[0] != n_total:
            raise ValueError(f"expected {n_total} particle coordinates")
        total = None
        for arrangement in arrangements:
            product = None
            for j, label in enumerate(arrangement):
                value = np.asarray(modes[label](points[j]), dtype=np.complex128)
                product = value if product is None else product * value
            total = product if total is None else total + product
        return weight * total

    return evaluator
