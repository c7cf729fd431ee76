"""Dimensionless system parameters and their construction from SI inputs.

Everything downstream works in natural units (hbar = c = e = 1) with lengths
measured in units of the radius R, so a system is fixed by

* ``mu``     = M R c / hbar, the mass-radius product,
* ``beta``   = e B R^2 / (2 hbar), the flux parameter,
* ``aspect`` = pi R / L for a finite cylinder of length L.

SI quantities only enter through the converters in this module.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import DomainError, UsageError

# CODATA 2018 exact / recommended values
ELECTRON_MASS = 9.1093837015e-31  # kg
SPEED_OF_LIGHT = 299792458.0  # m / s
HBAR = 1.054571817e-34  # J s
ELEMENTARY_CHARGE = 1.602176634e-19  # C
ELECTRON_VOLT = ELEMENTARY_CHARGE  # J

PERTURBATIVE_BETA = 1e-8

CONFIG_KEYS = ("mass_me", "radius_m", "field_T", "fermi_eV")


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class RingConfig:
    mu: float
    beta: float = 0.0

    def __post_init__(self):
        mu = _finite("mu", self.mu)
        if mu < 0:
            raise DomainError(f"mu must be >= 0, got {mu}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "beta", _finite("beta", self.beta))

    @property
    def perturbative(self) -> bool:
        """True when |beta| is inside the range where O(beta^2) terms are negligible."""
        return abs(self.beta) <= PERTURBATIVE_BETA


@dataclass(frozen=True)
class CylinderConfig:
    """Cylinder parameters; ``aspect`` is None for an infinite cylinder."""

    mu: float
    beta: float = 0.0
    aspect: Optional[float] = None

    def __post_init__(self):
        mu = _finite("mu", self.mu)
        if mu < 0:
            raise DomainError(f"mu must be >= 0, got {mu}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "beta", _finite("beta", self.beta))
        if self.aspect is not None:
            aspect = _finite("aspect", self.aspect)
            if aspect <= 0:
                raise DomainError(f"aspect must be > 0, got {aspect}")
            object.__setattr__(self, "aspect", aspect)

    @property
    def finite(self) -> bool:
        return self.aspect is not None

    @property
    def length(self) -> float:
        """Cylinder length in units of R."""
        if self.aspect is None:
            return math.inf
        return math.pi / self.aspect

    @property
    def perturbative(self) -> bool:
        return abs(self.beta) <= PERTURBATIVE_BETA


@dataclass(frozen=True)
class PhysicalInput:
    """Raw SI description of a sample. ``mass`` is in kilograms."""

    mass: float
    radius: float
    field: Optional[float] = None
    fermi_energy: Optional[float] = None  # joules

    def __post_init__(self):
        for name in ("mass", "radius", "fermi_energy"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise DomainError(f"{name} must be > 0, got {value}")

    @classmethod
    def from_mapping(cls, data: dict) -> PhysicalInput:
        unknown = set(data) - set(CONFIG_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}; expected {CONFIG_KEYS}")
        if "mass_me" not in data or "radius_m" not in data:
            raise UsageError("config needs at least mass_me and radius_m")
        fermi = data.get("fermi_eV")
        return cls(
            mass=float(data["mass_me"]) * ELECTRON_MASS,
            radius=float(data["radius_m"]),
            field=None if data.get("field_T") is None else float(data["field_T"]),
            fermi_energy=None if fermi is None else float(fermi) * ELECTRON_VOLT,
        )

    def mu(self) -> float:
        return mu_from_physical(self.mass, self.radius)

    def beta(self) -> float:
        return beta_from_field(self.field or 0.0, self.radius)

    def fermi_scaled(self) -> Optional[float]:
        """E_F R / (hbar c), or None when no Fermi energy was given."""
        if self.fermi_energy is None:
            return None
        return self.fermi_energy * self.radius / (HBAR * SPEED_OF_LIGHT)

    def alpha(self) -> Optional[float]:
        eps = self.fermi_scaled()
        return None if eps is None else alpha_from_fermi(self.mu(), eps)


def mu_from_physical(mass: float, radius: float) -> float:
    """Return M c R / hbar for a mass in kg and a radius in metres."""
    if not mass > 0 or not radius > 0:
        raise DomainError(f"mass and radius must be > 0, got {mass}, {radius}")
    return mass * SPEED_OF_LIGHT * radius / HBAR


def beta_from_field(field: float, radius: float) -> float:
    """Return e B R^2 / (2 hbar) for a field in tesla and a radius in metres."""
    if not radius > 0:
        raise DomainError(f"radius must be > 0, got {radius}")
    return ELEMENTARY_CHARGE * field * radius**2 / (2.0 * HBAR)


def alpha_from_fermi(mu: float, fermi_scaled: float, exact: bool = True) -> float:
    """Fermi radius sqrt(eps (eps + 2 mu)) in the (nu n, lambda) plane.

    ``fermi_scaled`` is eps = E_F R. With ``exact=False`` the small-eps form
    sqrt(2 mu eps) is returned instead.
    """
    if fermi_scaled < 0:
        raise DomainError(f"Fermi energy must be >= 0, got {fermi_scaled}")
    if mu < 0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    if exact:
        return math.sqrt(fermi_scaled * (fermi_scaled + 2.0 * mu))
    return math.sqrt(2.0 * mu * fermi_scaled)


def read_config(path: str | Path) -> PhysicalInput:
    """Load a JSON object or ``key=value`` lines using the ``CONFIG_KEYS`` names."""
    text = Path(path).read_text()
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: {exc}") from None
    else:
        data = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            data[key] = value
    return PhysicalInput.from_mapping(data)
