"""Closed-form spectra: the unconfined and hard-wall quantization routes.

Both routes fix the auxiliary eigenvalue ``nu`` and then recover the energy
through :func:`rotdirac.model.energy_from_nu`:

unconfined
    Terminating Kummer series, ``nu = 4 m w0 delta (n + |zeta|/(2 eta) + 1/2)``.
hard wall
    Zeros of the large-parameter cosine form at the light-cone radius,
    ``nu = [n pi + |zeta| pi/(2 eta) + 3 pi/4]**2 / rho0**2``.

The ``*_nonrel`` variants are the first-order expansions in ``1/m`` written
out term by term, not derived from the relativistic result at run time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import NonPhysicalRadicand, UnboundedDomain, ZeroFrequency
from .model import (
    Branch,
    PhysicalConfig,
    QuantumNumbers,
    RegimeReport,
    derived,
    energy_from_nu,
    page_werner_shift,
    regime_check,
)

DEFAULT_DEGENERACY_TOL = 1e-9


class Model(str, enum.Enum):
    UNCONFINED = "unconfined"
    UNCONFINED_NONREL = "unconfined_nonrel"
    HARDWALL = "hardwall"
    HARDWALL_NONREL = "hardwall_nonrel"
    ORACLE_UNCONFINED = "oracle_unconfined"
    ORACLE_HARDWALL = "oracle_hardwall"


CLOSED_FORMS = (
    Model.UNCONFINED,
    Model.UNCONFINED_NONREL,
    Model.HARDWALL,
    Model.HARDWALL_NONREL,
)


@dataclass(frozen=True)
class EnergyLevel:
    qn: QuantumNumbers
    energy: float
    nu: float
    model: Model
    regime: RegimeReport
    #: False when the level was kept despite a negative radicand (energy is NaN)
    physical: bool = True


def quantized_nu_unconfined(config: PhysicalConfig, qn: QuantumNumbers) -> float:
    p = derived(config, qn)
    scale = config.mass * config.omega0 * p.delta
    if scale == 0:
        raise ZeroFrequency("unconfined quantization needs m * omega0 * delta > 0")
    return 4.0 * scale * (qn.n + p.k / 2.0 + 0.5)


def hardwall_phase(config: PhysicalConfig, qn: QuantumNumbers) -> float:
    """``n pi + |zeta| pi/(2 eta) + 3 pi/4``: the cosine zero in sqrt(nu) rho0."""
    p = derived(config, qn)
    return qn.n * math.pi + p.k * math.pi / 2.0 + 0.75 * math.pi


def hardwall_nu(config: PhysicalConfig, qn: QuantumNumbers) -> float:
    if config.omega == 0:
        raise UnboundedDomain("hard-wall quantization needs omega > 0")
    rho0 = derived(config, qn).rho0
    return (hardwall_phase(config, qn) / rho0) ** 2


def _level(config, qn, nu, energy, model):
    return EnergyLevel(qn, energy, nu, model, regime_check(config))


def energy_unconfined(config: PhysicalConfig, qn: QuantumNumbers) -> EnergyLevel:
    nu = quantized_nu_unconfined(config, qn)
    return _level(config, qn, nu, energy_from_nu(nu, config, qn), Model.UNCONFINED)


def energy_hardwall(config: PhysicalConfig, qn: QuantumNumbers) -> EnergyLevel:
    nu = hardwall_nu(config, qn)
    return _level(config, qn, nu, energy_from_nu(nu, config, qn), Model.HARDWALL)


def _nonrel_tail(config: PhysicalConfig, qn: QuantumNumbers) -> float:
    """Expansion terms after the rest energy and the nu part (no Page-Werner shift)."""
    m, w0, w, eta = config.mass, config.omega0, config.omega, config.eta
    s = qn.s
    zeta = derived(config, qn).zeta
    return (
        -w0 * (s * zeta / eta + 1.0)
        - w**2 * zeta**2 / (2.0 * m)
        - w**2 * eta**2 / (2.0 * m)
        - s * w**2 * eta * zeta / m
    )


def _with_branch(config, qn, root):
    if qn.branch is Branch.ANTIPARTICLE:
        root = -root
    return root - page_werner_shift(config, qn)


def energy_unconfined_nonrel(config: PhysicalConfig, qn: QuantumNumbers) -> EnergyLevel:
    nu = quantized_nu_unconfined(config, qn)
    p = derived(config, qn)
    root = (
        config.mass
        + 2.0 * config.omega0 * p.delta * (qn.n + p.k / 2.0 + 0.5)
        + _nonrel_tail(config, qn)
    )
    return _level(config, qn, nu, _with_branch(config, qn, root), Model.UNCONFINED_NONREL)


def energy_hardwall_nonrel(config: PhysicalConfig, qn: QuantumNumbers) -> EnergyLevel:
    nu = hardwall_nu(config, qn)
    root = config.mass + nu / (2.0 * config.mass) + _nonrel_tail(config, qn)
    return _level(config, qn, nu, _with_branch(config, qn, root), Model.HARDWALL_NONREL)


_DISPATCH = {
    Model.UNCONFINED: energy_unconfined,
    Model.UNCONFINED_NONREL: energy_unconfined_nonrel,
    Model.HARDWALL: energy_hardwall,
    Model.HARDWALL_NONREL: energy_hardwall_nonrel,
}


def energy_level(config: PhysicalConfig, qn: QuantumNumbers, model: Model | str) -> EnergyLevel:
    model = Model(model)
    if model not in _DISPATCH:
        raise ValueError(f"{model.value} is not a closed-form model")
    return _DISPATCH[model](config, qn)


def level_sort_key(level: EnergyLevel):
    e = level.energy
    return (math.isnan(e), 0.0 if math.isnan(e) else e, level.qn.n, level.qn.l, level.qn.s,
            level.qn.branch.value)


def spectrum_table(
    config: PhysicalConfig,
    n_max: int,
    l_min: int,
    l_max: int,
    spins: Iterable[int] = (1, -1),
    model: Model | str = Model.UNCONFINED,
    *,
    branches: Sequence[Branch | str] = (Branch.PARTICLE,),
    on_nonphysical: str = "raise",
) -> list[EnergyLevel]:
    """All levels with ``0 <= n <= n_max``, ``l_min <= l <= l_max``.

    ``on_nonphysical`` decides what happens to a negative radicand:
    ``"raise"`` propagates :class:`NonPhysicalRadicand`, ``"skip"`` drops the
    level and ``"keep"`` lists it with ``physical=False`` and NaN energy.
    Sorted by energy, ties broken by ``(n, l, s)``.
    """
    if on_nonphysical not in ("raise", "skip", "keep"):
        raise ValueError(f"unknown on_nonphysical policy {on_nonphysical!r}")
    model = Model(model)
    levels = []
    for n, l, s, br in product(range(n_max + 1), range(l_min, l_max + 1), spins, branches):
        qn = QuantumNumbers(n, l, s, Branch(br))
        try:
            levels.append(energy_level(config, qn, model))
        except NonPhysicalRadicand:
            if on_nonphysical == "raise":
                raise
            if on_nonphysical == "keep":
                nu = (quantized_nu_unconfined if model in (Model.UNCONFINED, Model.UNCONFINED_NONREL)
                      else hardwall_nu)(config, qn)
                levels.append(EnergyLevel(qn, math.nan, nu, model, regime_check(config), False))
    levels.sort(key=level_sort_key)
    return levels


@dataclass(frozen=True)
class DegeneracyGroup:
    energy: float
    levels: tuple[EnergyLevel, ...]

    @property
    def size(self) -> int:
        return len(self.levels)


def degeneracy_report(levels: Sequence[EnergyLevel], tol: float = DEFAULT_DEGENERACY_TOL):
    """Cluster levels whose energies chain together within ``tol``.

    Single linkage on the sorted energies; each group reports the mean
    energy of its members.  Levels with NaN energy are left out.
    """
    ordered = sorted((lv for lv in levels if not math.isnan(lv.energy)), key=level_sort_key)
    groups: list[list[EnergyLevel]] = []
    for lv in ordered:
        if groups and lv.energy - groups[-1][-1].energy <= tol:
            groups[-1].append(lv)
        else:
            groups.append([lv])
    return [DegeneracyGroup(sum(x.energy for x in g) / len(g), tuple(g)) for g in groups]
