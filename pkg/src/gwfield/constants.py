"""Physical constants in CGS-Gaussian units.

Every numeric output of this package is CGS (erg, cm, s, K, G, esu).  All
constants live in a single frozen table so that tests and downstream code can
reference one source instead of scattering literals.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class CgsConstants:
    """CODATA constants expressed in CGS-Gaussian units.

    Attributes
    ----------
    hbar : reduced Planck constant [erg s]
    c : speed of light [cm/s]
    k_B : Boltzmann constant [erg/K]
    mu_B : Bohr magneton [erg/G]
    e_charge : elementary charge [esu]
    m_e : electron mass [g]
    alpha : fine-structure constant [1]
    l_P : Planck length [cm]
    omega_P : Planck angular frequency, c / l_P [rad/s]
    """

    hbar: float = 1.054571817e-27
    c: float = 2.99792458e10
    k_B: float = 1.380649e-16
    mu_B: float = 9.2740100783e-21
    e_charge: float = 4.80320471e-10
    m_e: float = 9.1093837015e-28
    alpha: float = 7.2973525693e-3
    l_P: float = 1.616255e-33
    omega_P: float = 1.8548586578e43

    def __post_init__(self) -> None:
        values = asdict(self)
        for name, value in values.items():
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"constant {name} must be finite and positive, got {value}")
        alpha_from_charge = self.e_charge**2 / (self.hbar * self.c)
        if abs(alpha_from_charge / self.alpha - 1.0) > 1e-6:
            raise ValueError("alpha is inconsistent with e_charge**2/(hbar*c)")
        mu_b_from_charge = self.e_charge * self.hbar / (2.0 * self.m_e * self.c)
        if abs(mu_b_from_charge / self.mu_B - 1.0) > 1e-6:
            raise ValueError("mu_B is inconsistent with e*hbar/(2*m_e*c)")
        if abs(self.c / self.l_P / self.omega_P - 1.0) > 1e-6:
            raise ValueError("omega_P is inconsistent with c/l_P")

    @property
    def h(self) -> float:
        """Planck constant [erg s]."""
        return 2.0 * math.pi * self.hbar

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    def checksum(self) -> str:
        """SHA-256 over the sorted constant table; pinned in run manifests."""
        payload = json.dumps(self.as_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()


CGS = CgsConstants()
