"""Physical parameters and the closed-form parameter algebra.

Natural units (hbar = c = 1) throughout.  ``omega0`` is the Dirac oscillator
frequency and ``omega`` the angular velocity of the rotating frame; ``eta``
is the cosmic string deficit parameter, with ``eta = 1`` the flat limit.

Every other module builds on four derived quantities:

* ``zeta``  effective angular momentum  l + (1 - s)/2 + s (1 - eta)/2
* ``delta`` sqrt(1 + 2 s omega eta)
* ``rho0``  light-cone radius 1/(omega eta), infinite when omega = 0
* ``xi0``   m omega0 delta rho0**2, the Kummer argument at the wall
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigError, NonPhysicalRadicand, NonPositiveDiscriminant

#: ``sqrt(m omega0) / (omega eta)`` at or below this counts as the
#: unconfined (polynomial) regime.
CASE1_THRESHOLD = 0.1
#: ``m omega0`` at or below this counts as the hard-wall regime.
CASE2_THRESHOLD = 0.01


class Branch(str, enum.Enum):
    PARTICLE = "particle"
    ANTIPARTICLE = "antiparticle"


@dataclass(frozen=True)
class PhysicalConfig:
    """Mass, oscillator frequency, rotation rate and deficit parameter."""

    mass: float
    omega0: float
    omega: float
    eta: float

    def __post_init__(self):
        for name in ("mass", "omega0", "omega", "eta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.mass <= 0:
            raise ConfigError(f"mass must be > 0, got {self.mass}")
        if self.omega0 < 0:
            raise ConfigError(f"omega0 must be >= 0, got {self.omega0}")
        if self.omega < 0:
            raise ConfigError(f"omega must be >= 0, got {self.omega}")
        if not 0 < self.eta <= 1:
            raise ConfigError(f"eta must lie in (0, 1], got {self.eta}")

    @property
    def linear_mass_density(self) -> float:
        """String linear mass density, from ``eta = 1 - 4 varpi``."""
        return (1.0 - self.eta) / 4.0


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    l: int
    s: int
    branch: Branch = Branch.PARTICLE

    def __post_init__(self):
        for name in ("n", "l", "s"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
        if self.n < 0:
            raise ConfigError(f"n must be >= 0, got {self.n}")
        if self.s not in (1, -1):
            raise ConfigError(f"s must be +1 or -1, got {self.s}")
        object.__setattr__(self, "branch", Branch(self.branch))


@dataclass(frozen=True)
class DerivedParams:
    zeta: float
    delta: float
    rho0: float
    xi0: float
    #: Frobenius exponent ``|zeta|/eta`` at the origin (Kummer ``B - 1``)
    k: float


@dataclass(frozen=True)
class RegimeReport:
    """Regime diagnostics. ``None`` in a case-1 field means not applicable (omega = 0)."""

    case1_ratio: float | None
    case2_value: float
    case1_ok: bool | None
    case2_ok: bool
    notes: str = ""


def _check_spin(s: int) -> None:
    if s not in (1, -1):
        raise ConfigError(f"s must be +1 or -1, got {s}")


def _check_eta(eta: float) -> None:
    if not 0 < eta <= 1:
        raise ConfigError(f"eta must lie in (0, 1], got {eta}")


def effective_angular_momentum(l: int, s: int, eta: float) -> float:
    _check_spin(s)
    _check_eta(eta)
    return l + (1 - s) / 2 + s * (1.0 - eta) / 2


def delta_parameter(s: int, omega: float, eta: float) -> float:
    _check_spin(s)
    disc = 1.0 + 2.0 * s * omega * eta
    if disc <= 0:
        raise NonPositiveDiscriminant(
            f"1 + 2 s omega eta = {disc!r} <= 0 (s={s}, omega={omega}, eta={eta})"
        )
    return math.sqrt(disc)


def physical_radius(omega: float, eta: float) -> float:
    """Light-cone radius ``1/(omega eta)``; ``math.inf`` without rotation."""
    _check_eta(eta)
    if omega == 0:
        return math.inf
    return 1.0 / (omega * eta)


def derived(config: PhysicalConfig, qn: QuantumNumbers) -> DerivedParams:
    zeta = effective_angular_momentum(qn.l, qn.s, config.eta)
    delta = delta_parameter(qn.s, config.omega, config.eta)
    rho0 = physical_radius(config.omega, config.eta)
    if config.omega0 == 0:
        xi0 = 0.0
    else:
        xi0 = config.mass * config.omega0 * delta * rho0**2
    return DerivedParams(zeta, delta, rho0, xi0, abs(zeta) / config.eta)


def coupling_shift(config: PhysicalConfig, qn: QuantumNumbers) -> float:
    """The non-derivative terms moved to the nu side.

    ``2 m w0 [s zeta/eta + 1] + w^2 zeta^2 + w^2 eta^2 + 2 s w^2 eta zeta``
    """
    m, w0, w, eta = config.mass, config.omega0, config.omega, config.eta
    s = qn.s
    zeta = effective_angular_momentum(qn.l, s, eta)
    return (
        2.0 * m * w0 * (s * zeta / eta + 1.0)
        + w**2 * zeta**2
        + w**2 * eta**2
        + 2.0 * s * w**2 * eta * zeta
    )


def page_werner_shift(config: PhysicalConfig, qn: QuantumNumbers) -> float:
    """Rotation coupling ``omega (l + 1/2)`` subtracted from every level."""
    return config.omega * (qn.l + 0.5)


def nu_from_energy(energy: float, config: PhysicalConfig, qn: QuantumNumbers) -> float:
    shifted = energy + page_werner_shift(config, qn)
    return shifted**2 - config.mass**2 + coupling_shift(config, qn)


def energy_from_nu(nu: float, config: PhysicalConfig, qn: QuantumNumbers) -> float:
    """Invert ``nu_from_energy`` on the branch carried by ``qn``."""
    radicand = config.mass**2 + nu - coupling_shift(config, qn)
    if radicand < 0:
        raise NonPhysicalRadicand(
            f"radicand {radicand!r} < 0 for n={qn.n}, l={qn.l}, s={qn.s}"
        )
    root = math.sqrt(radicand)
    if qn.branch is Branch.ANTIPARTICLE:
        root = -root
    return root - page_werner_shift(config, qn)


def regime_check(config: PhysicalConfig) -> RegimeReport:
    m_w0 = config.mass * config.omega0
    case2_ok = m_w0 <= CASE2_THRESHOLD
    notes = []
    if config.omega == 0:
        ratio = None
        case1_ok = None
        notes.append("case1 not applicable: omega = 0, no light-cone radius")
    else:
        ratio = math.sqrt(m_w0) / (config.omega * config.eta)
        case1_ok = ratio <= CASE1_THRESHOLD
    if config.omega0 == 0:
        notes.append("omega0 = 0: unconfined quantization undefined")
    return RegimeReport(ratio, m_w0, case1_ok, case2_ok, "; ".join(notes))
