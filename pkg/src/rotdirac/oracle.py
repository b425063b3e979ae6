"""Numerical oracles that check the closed forms without using them.

Radial eigensolver
    The radial operator

        -R'' - R'/rho + (zeta/eta)**2 R / rho**2 + (m w0 delta)**2 rho**2 R = nu R

    is discretised after factoring out the regular behaviour at the origin,
    ``R = rho**k g`` with ``k = |zeta|/eta``.  In Sturm-Liouville form

        -(rho**(2k+1) g')' + (m w0 delta)**2 rho**(2k+3) g = nu rho**(2k+1) g

    ``g`` is smooth and even, so a vertex-centred finite-volume scheme with
    exact cell integrals of the weights is second order uniformly in ``k``
    (including ``k -> 0``, where the inverse-square term is critical).  The
    generalised problem ``A g = nu W g`` is symmetrised with ``W**-1/2`` and
    handed to a symmetric tridiagonal eigensolver.  Three grids (N, N/2, N/4)
    give a Richardson-extrapolated value and an observed convergence order.

Exact hard-wall roots
    Zeros in ``nu`` of ``1F1(k/2 + 1/2 - nu/(4 m w0 delta), k + 1, xi0)``,
    bracketed by a uniform scan and refined by bisection.

Wavefunctions
    ``R(xi) = exp(-xi/2) xi**(k/2) 1F1(A, k + 1, xi)``, ``xi = m w0 delta rho**2``,
    plus normalisation over ``rho d rho`` and the probability mass beyond the
    light-cone radius.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.linalg import eigh_tridiagonal

from .errors import (
    ConfigError,
    GridTooCoarse,
    NoSignChange,
    UnboundedDomain,
    ZeroFrequency,
    ZeroNorm,
)
from .kummer import kummer_polynomial, kummer_series, series_signs
from .model import PhysicalConfig, QuantumNumbers, derived

#: Gaussian cutoff ``m w0 delta rho_max**2`` for the unconfined domain.
UNCONFINED_XI_CUT = 80.0
MIN_GRID_POINTS = 200
#: Richardson correction above this (relative) means the grid is too coarse.
DEFAULT_GRID_RTOL = 1e-3

ROOT_SCAN_STEP = 0.25
ROOT_SCAN_CAP = 1e4
ROOT_LAMBDA_TOL = 1e-12
_SCAN_CHUNK = 1024


class Domain(str, enum.Enum):
    UNCONFINED = "unconfined"
    DIRICHLET_AT_RHO0 = "dirichlet_at_rho0"


@dataclass(frozen=True)
class OracleResult:
    nus: tuple[float, ...]
    grid_points: int
    domain: Domain
    convergence_order: float
    residuals: tuple[float, ...]
    #: interior sign changes of each eigenfunction (finite-difference oracle only)
    nodes: tuple[int, ...] = ()
    #: unextrapolated finest-grid eigenvalues (finite-difference oracle only)
    raw_nus: tuple[float, ...] = ()


@dataclass(frozen=True)
class WavefunctionSample:
    rho_grid: np.ndarray
    values: np.ndarray
    #: factor the raw samples were divided by; NaN until normalised
    norm: float = math.nan
    tail_mass: float = math.nan
    nu: float = math.nan
    meta: dict = field(default_factory=dict, compare=False)


def count_sign_changes(values, rel_floor: float = 1e-8) -> int:
    """Interior sign changes, ignoring samples below ``rel_floor * max|v|``."""
    v = np.asarray(values, float)
    if v.size == 0:
        return 0
    peak = np.max(np.abs(v))
    if peak == 0:
        return 0
    kept = v[np.abs(v) > rel_floor * peak]
    return int(np.count_nonzero(np.signbit(kept[1:]) != np.signbit(kept[:-1])))


def _oscillator_scale(config: PhysicalConfig, qn: QuantumNumbers) -> float:
    p = derived(config, qn)
    return config.mass * config.omega0 * p.delta


def _fv_system(k: float, coupling: float, n_cells: int):
    """Symmetrised tridiagonal on x in [0, 1], Dirichlet at x = 1.

    ``coupling`` is the dimensionless oscillator strength ``(m w0 delta)^2 L^4``.
    Returns ``(diag, offdiag, weights)`` for unknowns at nodes ``x_i = i/N``,
    ``i = 0 .. N-1``.
    """
    h = 1.0 / n_cells
    q = 2.0 * k + 2.0
    nodes = h * np.arange(n_cells)
    lo = np.maximum(nodes - 0.5 * h, 0.0)
    hi = nodes + 0.5 * h
    weight = (hi**q - lo**q) / q
    potential = coupling * (hi ** (q + 2) - lo ** (q + 2)) / (q + 2)
    flux = hi ** (2.0 * k + 1.0) / h  # face i + 1/2; face N-1/2 couples to the wall
    diag = potential + flux
    diag[1:] += flux[:-1]
    off = -flux[:-1]
    root_w = np.sqrt(weight)
    return diag / weight, off / (root_w[:-1] * root_w[1:]), weight


def _fv_eigen(k, coupling, n_cells, count, vectors=False):
    diag, off, weight = _fv_system(k, coupling, n_cells)
    if vectors:
        vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
        return vals, vecs
    vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1),
                            eigvals_only=True)
    return vals, None


def _observed_order(coarse, mid, fine):
    orders = []
    for c, m, f in zip(coarse, mid, fine):
        d1, d2 = abs(c - m), abs(m - f)
        floor = 1e-11 * abs(f)
        if d1 > floor and d2 > floor:
            orders.append(math.log2(d1 / d2))
    return float(np.median(orders)) if orders else math.nan


def radial_operator_eigenvalues(
    config: PhysicalConfig,
    qn: QuantumNumbers,
    count: int,
    domain: Domain | str = Domain.UNCONFINED,
    grid_points: int = 4000,
    *,
    grid_rtol: float = DEFAULT_GRID_RTOL,
) -> OracleResult:
    """Lowest ``count`` eigenvalues nu of the radial operator for ``(l, s)``.

    ``qn.n`` is ignored.  ``grid_points`` is the finest grid; the Richardson
    partner uses half as many cells and the order estimate a quarter.
    """
    domain = Domain(domain)
    if count < 1:
        raise ConfigError(f"count must be >= 1, got {count}")
    if grid_points < MIN_GRID_POINTS:
        raise ConfigError(f"grid_points must be >= {MIN_GRID_POINTS}, got {grid_points}")
    p = derived(config, qn)
    scale = _oscillator_scale(config, qn)
    if domain is Domain.UNCONFINED:
        if scale == 0:
            raise ZeroFrequency("unconfined domain needs m * omega0 > 0")
        # widen the box for highly excited states so the tail stays Gaussian
        xi_cut = max(UNCONFINED_XI_CUT, 8.0 * (count + p.k / 2.0))
        length = math.sqrt(xi_cut / scale)
    else:
        if config.omega == 0:
            raise UnboundedDomain("dirichlet_at_rho0 needs omega > 0")
        length = p.rho0
    if count > grid_points // 8:
        raise ConfigError(f"count={count} too large for grid_points={grid_points}")
    coupling = (scale * length**2) ** 2

    fine, vecs = _fv_eigen(p.k, coupling, grid_points, count, vectors=True)
    mid, _ = _fv_eigen(p.k, coupling, grid_points // 2, count)
    coarse, _ = _fv_eigen(p.k, coupling, grid_points // 4, count)
    to_nu = 1.0 / length**2
    extrapolated = fine + (fine - mid) / 3.0
    correction = np.abs(fine - mid) / 3.0
    rel = correction / np.abs(extrapolated)
    if np.any(rel > grid_rtol):
        raise GridTooCoarse(
            f"Richardson correction {rel.max():.3g} exceeds {grid_rtol:g}; "
            f"raise grid_points above {grid_points}"
        )
    nodes = tuple(count_sign_changes(vecs[:, j]) for j in range(count))
    return OracleResult(
        nus=tuple(float(v) for v in extrapolated * to_nu),
        grid_points=grid_points,
        domain=domain,
        convergence_order=_observed_order(coarse, mid, fine),
        residuals=tuple(float(c) for c in correction * to_nu),
        nodes=nodes,
        raw_nus=tuple(float(v) for v in fine * to_nu),
    )


def _kummer_params(config: PhysicalConfig, qn: QuantumNumbers):
    p = derived(config, qn)
    scale = _oscillator_scale(config, qn)
    if scale == 0:
        raise ZeroFrequency("Kummer form needs m * omega0 * delta > 0")
    return p, scale


def exact_hardwall_roots(
    config: PhysicalConfig,
    qn: QuantumNumbers,
    count: int,
    *,
    step: float = ROOT_SCAN_STEP,
    lambda_cap: float = ROOT_SCAN_CAP,
    lambda_tol: float = ROOT_LAMBDA_TOL,
) -> OracleResult:
    """First ``count`` values of nu with ``R(xi0) = 0``.

    Scans ``lam = nu / (4 m w0 delta)`` upward from 0 for sign changes of
    ``1F1(k/2 + 1/2 - lam, k + 1, xi0)`` and bisects each bracket to
    ``lambda_tol``.
    """
    if config.omega == 0:
        raise UnboundedDomain("hard-wall roots need omega > 0")
    p, scale = _kummer_params(config, qn)
    if count <= 0:
        return OracleResult((), 0, Domain.DIRICHLET_AT_RHO0, math.nan, ())
    b = p.k + 1.0
    a0 = p.k / 2.0 + 0.5
    xi0 = p.xi0

    def value(lam):
        return kummer_series(a0 - lam, b, xi0)

    roots, widths = [], []
    n_steps = int(math.floor(lambda_cap / step))
    scanned = 0
    prev_lam, prev_sign = 0.0, np.sign(value(0.0))
    j = 1
    while len(roots) < count and j <= n_steps:
        idx = np.arange(j, min(j + _SCAN_CHUNK, n_steps + 1))
        lams = idx * step
        signs = series_signs(a0 - lams, b, xi0)
        scanned += idx.size
        for lam, sg in zip(lams, signs):
            if sg == 0:
                roots.append(float(lam))
                widths.append(0.0)
            elif sg != prev_sign and prev_sign != 0:
                root, width = _bisect(value, prev_lam, float(lam), lambda_tol)
                roots.append(root)
                widths.append(width)
            prev_lam, prev_sign = float(lam), sg
            if len(roots) >= count:
                break
        j = int(idx[-1]) + 1
    if len(roots) < count:
        raise NoSignChange(
            f"found {len(roots)} of {count} roots below lambda = {lambda_cap:g}"
        )
    to_nu = 4.0 * scale
    return OracleResult(
        nus=tuple(r * to_nu for r in roots),
        grid_points=scanned,
        domain=Domain.DIRICHLET_AT_RHO0,
        convergence_order=math.nan,
        residuals=tuple(w * to_nu for w in widths),
    )


def _bisect(f, lo, hi, tol):
    flo = math.copysign(1.0, f(lo))
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0:
            return mid, 0.0
        if math.copysign(1.0, fm) == flo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), hi - lo


def kummer_a_parameter(config: PhysicalConfig, qn: QuantumNumbers, nu: float) -> float:
    p, scale = _kummer_params(config, qn)
    return p.k / 2.0 + 0.5 - nu / (4.0 * scale)


def evaluate_wavefunction(
    config: PhysicalConfig, qn: QuantumNumbers, nu: float, rho_grid
) -> WavefunctionSample:
    """Regular radial solution for the given nu, unnormalised (F(0) = 1).

    When ``A`` lies within 1e-9 of a nonpositive integer it is snapped to it
    and the terminating polynomial is used; otherwise the tiny
    non-terminating remainder would grow like ``e**xi`` at large ``xi``.
    """
    rho = np.asarray(rho_grid, float)
    if rho.ndim != 1 or rho.size == 0:
        raise ConfigError("rho_grid must be a non-empty 1-D sequence")
    if np.any(rho < 0) or np.any(np.diff(rho) <= 0):
        raise ConfigError("rho_grid must be non-negative and strictly increasing")
    p, scale = _kummer_params(config, qn)
    a = kummer_a_parameter(config, qn, nu)
    b = p.k + 1.0
    xi = scale * rho**2
    nearest = round(a)
    if nearest <= 0 and abs(a - nearest) <= 1e-9 * max(1.0, abs(a)):
        hyper = kummer_polynomial(-nearest, b, xi)
    else:
        hyper = kummer_series(a, b, xi, rtol=1e-10)
    values = np.exp(-xi / 2.0) * xi ** (p.k / 2.0) * hyper
    return WavefunctionSample(rho, values, nu=float(nu), meta={"A": a, "B": b})


def normalize_and_tail(sample: WavefunctionSample, rho0: float) -> WavefunctionSample:
    """Normalise so that the integral of R**2 rho over the grid is one.

    The grid must start at (or very near) the origin and reach far enough
    for the remaining tail to be negligible.  ``tail_mass`` is the fraction
    of that integral beyond ``rho0`` (0 when ``rho0`` is beyond the grid).
    """
    rho = np.asarray(sample.rho_grid, float)
    dens = np.asarray(sample.values, float) ** 2 * rho
    if not np.any(dens):
        raise ZeroNorm("wavefunction sample is identically zero")
    if rho.size < 3:
        raise ConfigError("need at least 3 samples to integrate")
    total = float(simpson(dens, x=rho))
    if rho0 >= rho[-1]:
        tail = 0.0
    elif rho0 <= rho[0]:
        tail = 1.0
    else:
        cumulative = cumulative_simpson(dens, x=rho, initial=0.0)
        inside = float(np.interp(rho0, rho, cumulative))
        tail = min(max((total - inside) / total, 0.0), 1.0)
    norm = math.sqrt(total)
    return replace(sample, values=np.asarray(sample.values) / norm, norm=norm, tail_mass=tail)


def unconfined_extent(config: PhysicalConfig, qn: QuantumNumbers) -> float:
    """Radius where ``m w0 delta rho**2`` reaches the Gaussian cutoff for level ``qn``."""
    p, scale = _kummer_params(config, qn)
    xi_cut = max(UNCONFINED_XI_CUT, 8.0 * (qn.n + 1 + p.k / 2.0))
    return math.sqrt(xi_cut / scale)
