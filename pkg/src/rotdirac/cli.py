"""Command-line front end.

    rotdirac spectrum     closed-form levels for a box of (n, l, s)
    rotdirac compare      closed-form nu against a numerical oracle
    rotdirac wavefunction sampled, normalised radial function
    rotdirac regimes      validity-regime ratios

Settings come from built-in defaults, then an optional JSON ``--config``
file, then command-line flags.  Data goes to stdout, diagnostics to stderr.

Exit codes: 0 ok, 2 bad configuration, 3 nonphysical level with strict
policy, 4 oracle failed to converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import statistics
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import (
    ConfigError,
    GridTooCoarse,
    NoConvergence,
    NonPhysicalRadicand,
    NonPositiveDiscriminant,
    NoSignChange,
    UnboundedDomain,
    ZeroFrequency,
)
from .model import Branch, PhysicalConfig, QuantumNumbers, derived, regime_check
from .oracle import (
    Domain,
    evaluate_wavefunction,
    exact_hardwall_roots,
    normalize_and_tail,
    radial_operator_eigenvalues,
    unconfined_extent,
)
from .spectra import (
    CLOSED_FORMS,
    DEFAULT_DEGENERACY_TOL,
    Model,
    hardwall_nu,
    quantized_nu_unconfined,
    spectrum_table,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONPHYSICAL = 3
EXIT_ORACLE = 4

#: internal quadrature grid for wavefunction normalisation
NORM_GRID_POINTS = 4001

_PHYSICAL_KEYS = ("mass", "omega0", "omega", "eta")
_TOLERANCE_KEYS = ("degeneracy_tol", "grid_rtol")
_DEFAULTS = {
    "physical": {"mass": 1.0, "omega0": 1e-5, "omega": 0.05, "eta": 0.8},
    "n_max": 5,
    "l_min": -2,
    "l_max": 2,
    "spins": [1, -1],
    "model": "unconfined",
    "output_format": "csv",
    "skip_nonphysical": False,
    "oracle_grid": 4000,
    "antiparticle": False,
    "tolerance_overrides": {},
}


@dataclass(frozen=True)
class RunConfig:
    physical: PhysicalConfig
    n_max: int = 5
    l_min: int = -2
    l_max: int = 2
    spins: tuple[int, ...] = (1, -1)
    model: Model = Model.UNCONFINED
    output_format: str = "csv"
    skip_nonphysical: bool = False
    oracle_grid: int = 4000
    antiparticle: bool = False
    tolerance_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_max < 0:
            raise ConfigError(f"n_max must be >= 0, got {self.n_max}")
        if self.l_min > self.l_max:
            raise ConfigError(f"l_min ({self.l_min}) exceeds l_max ({self.l_max})")
        if not self.spins or any(s not in (1, -1) for s in self.spins):
            raise ConfigError(f"spins must be a nonempty subset of {{+1, -1}}, got {self.spins}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"output_format must be csv or json, got {self.output_format!r}")
        if self.model not in CLOSED_FORMS:
            raise ConfigError(f"model must be one of {[m.value for m in CLOSED_FORMS]}")
        unknown = set(self.tolerance_overrides) - set(_TOLERANCE_KEYS)
        if unknown:
            raise ConfigError(f"unknown tolerance overrides: {sorted(unknown)}")

    @property
    def degeneracy_tol(self) -> float:
        return self.tolerance_overrides.get("degeneracy_tol", DEFAULT_DEGENERACY_TOL)

    @property
    def grid_rtol(self) -> float:
        return self.tolerance_overrides.get("grid_rtol", 1e-3)

    @property
    def branches(self) -> tuple[Branch, ...]:
        if self.antiparticle:
            return (Branch.PARTICLE, Branch.ANTIPARTICLE)
        return (Branch.PARTICLE,)

    @property
    def family(self) -> str:
        return "hardwall" if self.model in (Model.HARDWALL, Model.HARDWALL_NONREL) else "unconfined"

    def as_dict(self) -> dict:
        return {
            "physical": {k: getattr(self.physical, k) for k in _PHYSICAL_KEYS},
            "n_max": self.n_max,
            "l_min": self.l_min,
            "l_max": self.l_max,
            "spins": list(self.spins),
            "model": self.model.value,
            "output_format": self.output_format,
            "skip_nonphysical": self.skip_nonphysical,
            "oracle_grid": self.oracle_grid,
            "antiparticle": self.antiparticle,
            "tolerance_overrides": dict(sorted(self.tolerance_overrides.items())),
        }


# -- configuration ---------------------------------------------------------


def _strict_int(name, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def _strict_real(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = set(data) - set(_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "physical" in data:
        if not isinstance(data["physical"], dict):
            raise ConfigError("'physical' must be an object")
        bad = set(data["physical"]) - set(_PHYSICAL_KEYS)
        if bad:
            raise ConfigError(f"unknown physical keys: {sorted(bad)}")
    return data


def build_run_config(args: argparse.Namespace) -> RunConfig:
    merged = json.loads(json.dumps(_DEFAULTS))
    if args.config:
        data = load_config_file(args.config)
        merged["physical"].update(data.pop("physical", {}))
        merged.update(data)
    for key, flag in (("mass", "mass"), ("omega0", "omega0"), ("omega", "omega"), ("eta", "eta")):
        if getattr(args, flag) is not None:
            merged["physical"][key] = getattr(args, flag)
    for key in ("n_max", "l_min", "l_max", "model", "oracle_grid"):
        if getattr(args, key) is not None:
            merged[key] = getattr(args, key)
    if args.format is not None:
        merged["output_format"] = args.format
    if args.spin:
        merged["spins"] = sorted(set(args.spin), reverse=True)
    if args.skip_nonphysical:
        merged["skip_nonphysical"] = True
    if args.antiparticle:
        merged["antiparticle"] = True
    overrides = dict(merged.get("tolerance_overrides") or {})
    for key in _TOLERANCE_KEYS:
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)

    phys = PhysicalConfig(**{k: _strict_real(k, merged["physical"][k]) for k in _PHYSICAL_KEYS})
    spins = merged["spins"]
    if not isinstance(spins, list):
        raise ConfigError("spins must be a list")
    try:
        model = Model(merged["model"])
    except ValueError as exc:
        raise ConfigError(f"unknown model {merged['model']!r}") from exc
    if not isinstance(merged["skip_nonphysical"], bool) or not isinstance(merged["antiparticle"], bool):
        raise ConfigError("skip_nonphysical and antiparticle must be booleans")
    return RunConfig(
        physical=phys,
        n_max=_strict_int("n_max", merged["n_max"]),
        l_min=_strict_int("l_min", merged["l_min"]),
        l_max=_strict_int("l_max", merged["l_max"]),
        spins=tuple(_strict_int("spin", s) for s in spins),
        model=model,
        output_format=merged["output_format"],
        skip_nonphysical=merged["skip_nonphysical"],
        oracle_grid=_strict_int("oracle_grid", merged["oracle_grid"]),
        antiparticle=merged["antiparticle"],
        tolerance_overrides={k: _strict_real(k, v) for k, v in overrides.items()},
    )


# -- serialisation ---------------------------------------------------------


def _clean(value):
    """Plain JSON-safe Python value; NaN/inf become None."""
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _csv_cell(value) -> str:
    value = _clean(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(payload: dict, fmt: str) -> str:
    """Serialise ``{"meta", "columns", "rows", "summary"}`` deterministically."""
    columns = payload["columns"]
    rows = payload["rows"]
    if fmt == "json":
        doc = {
            "meta": _clean(payload["meta"]),
            "summary": _clean(payload.get("summary", {})),
            "rows": [{c: _clean(r[c]) for c in columns} for r in rows],
        }
        return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"
    buf = io.StringIO()
    header = {"meta": _clean(payload["meta"]), "summary": _clean(payload.get("summary", {}))}
    buf.write("# " + json.dumps(header, separators=(",", ":"), allow_nan=False) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_csv_cell(r[c]) for c in columns])
    return buf.getvalue()


def _meta(command: str, run: RunConfig, **extra) -> dict:
    meta = {"command": command, "version": __version__, "run": run.as_dict()}
    meta.update(extra)
    return meta


# -- commands --------------------------------------------------------------

SPECTRUM_COLUMNS = [
    "model", "n", "l", "s", "branch", "zeta", "delta", "nu", "energy", "physical",
    "case1_ratio", "case1_ok", "case2_value", "case2_ok",
]


def cmd_spectrum(run: RunConfig) -> dict:
    policy = "skip" if run.skip_nonphysical else "raise"
    levels = spectrum_table(
        run.physical, run.n_max, run.l_min, run.l_max, run.spins, run.model,
        branches=run.branches, on_nonphysical=policy,
    )
    rows = []
    for lv in levels:
        p = derived(run.physical, lv.qn)
        rows.append({
            "model": lv.model.value, "n": lv.qn.n, "l": lv.qn.l, "s": lv.qn.s,
            "branch": lv.qn.branch.value, "zeta": p.zeta, "delta": p.delta,
            "nu": lv.nu, "energy": lv.energy, "physical": lv.physical,
            "case1_ratio": lv.regime.case1_ratio, "case1_ok": lv.regime.case1_ok,
            "case2_value": lv.regime.case2_value, "case2_ok": lv.regime.case2_ok,
        })
    return {"meta": _meta("spectrum", run), "columns": SPECTRUM_COLUMNS, "rows": rows,
            "summary": {"levels": len(rows)}}


COMPARE_COLUMNS = ["oracle", "n", "l", "s", "nu_analytic", "nu_oracle", "rel_deviation",
                   "oracle_error_estimate"]


def _trend(devs: list[float]) -> str:
    mags = [abs(d) for d in devs]
    if len(mags) < 2:
        return "n/a"
    if all(b < a for a, b in zip(mags, mags[1:])):
        return "decreasing"
    if all(b > a for a, b in zip(mags, mags[1:])):
        return "increasing"
    return "mixed"


def cmd_compare(run: RunConfig, count: int | None = None) -> dict:
    count = run.n_max + 1 if count is None else count
    if count < 0:
        raise ConfigError(f"count must be >= 0, got {count}")
    family = run.family
    rows, orders, trends = [], [], {}
    if count > 0:
        for l in range(run.l_min, run.l_max + 1):
            for s in run.spins:
                base = QuantumNumbers(0, l, s)
                if family == "unconfined":
                    oracle_name = "radial_fd"
                    res = radial_operator_eigenvalues(
                        run.physical, base, count, Domain.UNCONFINED, run.oracle_grid,
                        grid_rtol=run.grid_rtol,
                    )
                    orders.append(res.convergence_order)
                    analytic = quantized_nu_unconfined
                else:
                    oracle_name = "kummer_roots"
                    res = exact_hardwall_roots(run.physical, base, count)
                    analytic = hardwall_nu
                devs = []
                for n in range(count):
                    ana = analytic(run.physical, QuantumNumbers(n, l, s))
                    dev = (ana - res.nus[n]) / res.nus[n]
                    devs.append(dev)
                    rows.append({
                        "oracle": oracle_name, "n": n, "l": l, "s": s,
                        "nu_analytic": ana, "nu_oracle": res.nus[n], "rel_deviation": dev,
                        "oracle_error_estimate": res.residuals[n],
                    })
                trends[f"l={l},s={s:+d}"] = _trend(devs)
    abs_devs = [abs(r["rel_deviation"]) for r in rows]
    finite_orders = [o for o in orders if math.isfinite(o)]
    summary = {
        "family": family,
        "rows": len(rows),
        "max_rel_deviation": max(abs_devs) if abs_devs else None,
        "median_rel_deviation": statistics.median(abs_devs) if abs_devs else None,
        "convergence_order": statistics.median(finite_orders) if finite_orders else None,
        "deviation_trend": trends,
    }
    return {"meta": _meta("compare", run, count=count), "columns": COMPARE_COLUMNS,
            "rows": rows, "summary": summary}


WAVEFUNCTION_COLUMNS = ["rho", "R"]


def cmd_wavefunction(run: RunConfig, n: int, l: int, s: int, samples: int) -> dict:
    if samples < 2:
        raise ConfigError(f"samples must be >= 2, got {samples}")
    cfg = run.physical
    qn = QuantumNumbers(n, l, s)
    p = derived(cfg, qn)
    if run.family == "unconfined":
        nu = quantized_nu_unconfined(cfg, qn)
        extent = unconfined_extent(cfg, qn)
    else:
        nu = exact_hardwall_roots(cfg, QuantumNumbers(0, l, s), n + 1).nus[n]
        extent = p.rho0
    # graded toward the origin, where R ~ rho**k is not smooth for fractional k
    fine = extent * np.linspace(0.0, 1.0, NORM_GRID_POINTS) ** 2
    normed = normalize_and_tail(evaluate_wavefunction(cfg, qn, nu, fine), p.rho0)
    out_grid = extent * np.arange(1, samples + 1) / samples
    values = evaluate_wavefunction(cfg, qn, nu, out_grid).values / normed.norm
    rows = [{"rho": float(r), "R": float(v)} for r, v in zip(out_grid, values)]
    summary = {"nu": nu, "norm": normed.norm, "tail_mass": normed.tail_mass,
               "rho0": p.rho0, "extent": extent}
    return {"meta": _meta("wavefunction", run, n=n, l=l, s=s, samples=samples),
            "columns": WAVEFUNCTION_COLUMNS, "rows": rows, "summary": summary}


REGIME_COLUMNS = ["case1_ratio", "case1_ok", "case1_applicable", "case2_value", "case2_ok"]


def cmd_regimes(run: RunConfig) -> dict:
    rep = regime_check(run.physical)
    row = {
        "case1_ratio": rep.case1_ratio,
        "case1_ok": rep.case1_ok,
        "case1_applicable": rep.case1_ok is not None,
        "case2_value": rep.case2_value,
        "case2_ok": rep.case2_ok,
    }
    # free text stays out of the rows so every CSV cell is a token
    return {"meta": _meta("regimes", run), "columns": REGIME_COLUMNS, "rows": [row],
            "summary": {"notes": rep.notes}}


# -- argument parsing ------------------------------------------------------


def _spin(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"spin must be +1 or -1, got {text!r}") from None
    if value not in (1, -1):
        raise argparse.ArgumentTypeError(f"spin must be +1 or -1, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="JSON file mirroring the RunConfig fields")
    g.add_argument("--mass", type=float)
    g.add_argument("--omega0", type=float, help="Dirac oscillator frequency")
    g.add_argument("--omega", type=float, help="angular velocity of the rotating frame")
    g.add_argument("--eta", type=float, help="deficit parameter in (0, 1]")
    g.add_argument("--n-max", dest="n_max", type=int)
    g.add_argument("--l-min", dest="l_min", type=int)
    g.add_argument("--l-max", dest="l_max", type=int)
    g.add_argument("--spin", type=_spin, action="append",
                   help="+1 or -1; repeat for both (default both)")
    g.add_argument("--model", choices=[m.value for m in CLOSED_FORMS])
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--oracle-grid", dest="oracle_grid", type=int)
    g.add_argument("--skip-nonphysical", dest="skip_nonphysical", action="store_true",
                   help="drop levels with a negative radicand instead of failing")
    g.add_argument("--antiparticle", action="store_true",
                   help="also list the negative-energy branch")
    g.add_argument("--degeneracy-tol", dest="degeneracy_tol", type=float)
    g.add_argument("--grid-rtol", dest="grid_rtol", type=float,
                   help="largest accepted Richardson correction of the eigensolver")

    parser = argparse.ArgumentParser(
        prog="rotdirac",
        description="Dirac oscillator spectra in a rotating frame around a cosmic string.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="closed-form energy table")
    cp = sub.add_parser("compare", parents=[common], help="closed form against oracle")
    cp.add_argument("--count", type=int, help="levels per (l, s); default n_max + 1")
    wp = sub.add_parser("wavefunction", parents=[common], help="sampled radial function")
    wp.add_argument("--n", type=int, default=0)
    wp.add_argument("--l", type=int, default=0)
    wp.add_argument("--s", type=_spin, default=1)
    wp.add_argument("--samples", type=int, default=200)
    sub.add_parser("regimes", parents=[common], help="validity-regime report")
    return parser


def run_command(args: argparse.Namespace) -> tuple[dict, str]:
    run = build_run_config(args)
    if args.command == "spectrum":
        payload = cmd_spectrum(run)
    elif args.command == "compare":
        payload = cmd_compare(run, args.count)
    elif args.command == "wavefunction":
        payload = cmd_wavefunction(run, args.n, args.l, args.s, args.samples)
    else:
        payload = cmd_regimes(run)
    return payload, run.output_format


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, fmt = run_command(args)
    except (ConfigError, ZeroFrequency, UnboundedDomain, NonPositiveDiscriminant) as exc:
        print(f"rotdirac: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonPhysicalRadicand as exc:
        print(f"rotdirac: nonphysical level: {exc} (use --skip-nonphysical to drop)",
              file=sys.stderr)
        return EXIT_NONPHYSICAL
    except (GridTooCoarse, NoSignChange, NoConvergence) as exc:
        print(f"rotdirac: oracle failed: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    sys.stdout.write(render(payload, fmt))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
