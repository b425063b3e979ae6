"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line (collected into the
pytest terminal summary as well) before asserting.  Run directly with
``python tests/test_acceptance.py`` for just the verdict lines.
"""

import contextlib
import io
import json
import math
import subprocess
import sys
import time

import numpy as np

from rotdirac.cli import main
from rotdirac.kummer import kummer_asymptotic, kummer_polynomial, kummer_series
from rotdirac.model import PhysicalConfig, QuantumNumbers
from rotdirac.oracle import Domain, exact_hardwall_roots, radial_operator_eigenvalues
from rotdirac.spectra import (
    energy_hardwall,
    energy_hardwall_nonrel,
    energy_unconfined,
    energy_unconfined_nonrel,
    hardwall_nu,
    quantized_nu_unconfined,
)

try:
    from conftest import VERDICTS
except ImportError:  # run as a script
    VERDICTS = []

DESK = PhysicalConfig(1.0, 1e-5, 0.05, 0.8)
WALL = PhysicalConfig(1.0, 1e-3, 0.1, 0.8)

# (hardwall_nu - root) / root for n = 0..10, frozen from the first verified run
HARDWALL_BASELINE = {
    0: [
        -0.03350214755845081, -0.007329836588145363, -0.0030890272763009325,
        -0.0016893751384135266, -0.0010626004708871673, -0.0007292916058172335,
        -0.0005312772093146787, -0.00040415836868383346, -0.0003177369512138577,
        -0.0002563316118296924, -0.00021114441407102716,
    ],
    1: [
        0.08714120235495977, 0.02863314477653786, 0.014189924144546234,
        0.00846588304606827, 0.0056220592678449845, 0.004004461982102204,
        0.0029969441941703322, 0.0023270635973500525, 0.0018591502169251495,
        0.0015194443458592707, 0.0012650355124021575,
    ],
}


def verdict(number, checks):
    """Record and print the verdict for one criterion; ``checks`` is ``[(label, ok)]``."""
    ok = all(passed for _, passed in checks)
    failed = [label for label, passed in checks if not passed]
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}"
    if failed:
        line += " (failed: " + "; ".join(failed) + ")"
    print(line)
    VERDICTS.append(line)
    assert ok, line


def test_criterion_1_unconfined_vs_ode():
    start = time.perf_counter()
    devs, orders, nodes_ok = [], [], True
    for l in range(-2, 3):
        for s in (1, -1):
            res = radial_operator_eigenvalues(DESK, QuantumNumbers(0, l, s), 6, Domain.UNCONFINED, 2000)
            orders.append(res.convergence_order)
            nodes_ok &= res.nodes == tuple(range(6))
            for n, nu in enumerate(res.nus):
                exact = quantized_nu_unconfined(DESK, QuantumNumbers(n, l, s))
                devs.append(abs(nu - exact) / exact)
    elapsed = time.perf_counter() - start
    verdict(1, [
        (f"max rel deviation {max(devs):.3g} <= 1e-4", max(devs) <= 1e-4),
        (f"runtime {elapsed:.2f}s <= 10s", elapsed <= 10.0),
        ("60 levels checked", len(devs) == 60),
        ("node counts equal n", nodes_ok),
    ])


def test_criterion_2_hardwall_vs_roots():
    start = time.perf_counter()
    measured = {}
    for l in (0, 1):
        roots = exact_hardwall_roots(WALL, QuantumNumbers(0, l, 1), 11)
        measured[l] = [
            (hardwall_nu(WALL, QuantumNumbers(n, l, 1)) - r) / r for n, r in enumerate(roots.nus)
        ]
    elapsed = time.perf_counter() - start
    checks = [(f"runtime {elapsed:.2f}s <= 5s", elapsed <= 5.0)]
    for l, dev in measured.items():
        checks.append((f"l={l}: |dev(10)| < |dev(0)|", abs(dev[10]) < abs(dev[0])))
        checks.append((f"l={l}: |dev| <= 10% for n >= 5", all(abs(d) <= 0.10 for d in dev[5:])))
        checks.append((
            f"l={l}: matches frozen baseline",
            np.allclose(dev, HARDWALL_BASELINE[l], rtol=1e-6, atol=1e-12),
        ))
    verdict(2, checks)


def test_criterion_3_flat_space():
    cfg = PhysicalConfig(1.0, 0.5, 0.0, 1.0)
    closed, oracle = [], []
    for l in range(0, 4):
        res = radial_operator_eigenvalues(cfg, QuantumNumbers(0, l, 1), 6, Domain.UNCONFINED, 2000)
        for n in range(6):
            exact = math.sqrt(1.0 + 4.0 * 0.5 * n)
            e = energy_unconfined(cfg, QuantumNumbers(n, l, 1)).energy
            closed.append(abs(e - exact) / exact)
            nu = quantized_nu_unconfined(cfg, QuantumNumbers(n, l, 1))
            oracle.append(abs(res.nus[n] - nu) / nu)
    verdict(3, [
        (f"closed form max rel error {max(closed):.3g} <= 1e-12", max(closed) <= 1e-12),
        (f"ODE oracle max rel error {max(oracle):.3g} <= 1e-4", max(oracle) <= 1e-4),
    ])


def test_criterion_4_degeneracy_breaking():
    w0 = 0.5
    flat = PhysicalConfig(1.0, w0, 0.0, 1.0)
    cone = PhysicalConfig(1.0, w0, 0.0, 0.8)
    a, b = QuantumNumbers(2, 0, 1), QuantumNumbers(1, -1, 1)
    gap_flat = abs(energy_unconfined(flat, a).energy - energy_unconfined(flat, b).energy)
    ea, eb = energy_unconfined(cone, a).energy, energy_unconfined(cone, b).energy
    expected = abs(math.sqrt(1 + 8.5 * w0) - math.sqrt(1 + 8 * w0))
    verdict(4, [
        (f"flat gap {gap_flat:.3g} <= 1e-12", gap_flat <= 1e-12),
        ("cone radicands 1+8 w0 and 1+8.5 w0",
         math.isclose(ea**2, 1 + 8 * w0, rel_tol=1e-12) and math.isclose(eb**2, 1 + 8.5 * w0, rel_tol=1e-12)),
        (f"cone split {abs(ea - eb):.6g} equals analytic {expected:.6g}",
         math.isclose(abs(ea - eb), expected, rel_tol=1e-10)),
        ("cone split > 1e-3", abs(ea - eb) > 1e-3),
    ])


def test_criterion_5_taylor_scaling():
    qn = QuantumNumbers(3, 1, 1)
    pairs = {
        "unconfined": (energy_unconfined, energy_unconfined_nonrel),
        "hardwall": (energy_hardwall, energy_hardwall_nonrel),
    }
    checks = []
    for name, (rel, nonrel) in pairs.items():
        for m in (1e2, 1e3, 1e4):
            diffs = []
            for mass in (m, 2 * m):
                cfg = PhysicalConfig(mass, 0.1, 0.1, 0.8)
                diffs.append(abs(rel(cfg, qn).energy - nonrel(cfg, qn).energy))
            ratio = diffs[0] / diffs[1]
            checks.append((f"{name} m={m:g}: ratio {ratio:.4f} in [1.8, 2.2]", 1.8 <= ratio <= 2.2))
    verdict(5, checks)


def _contiguity_and_derivative(rng, draws=500):
    worst_contig, worst_deriv = 0.0, 0.0
    h = 1e-5
    for _ in range(draws):
        a = rng.uniform(-10, 10)
        b = rng.uniform(1, 10)
        x = rng.uniform(0.1, 5)
        f = kummer_series(a, b, x)
        lhs = f - kummer_series(a - 1, b, x)
        rhs = x / b * kummer_series(a, b + 1, x)
        worst_contig = max(worst_contig, abs(lhs - rhs) / max(abs(rhs), abs(f)))
        fd = (kummer_series(a, b, x + h) - kummer_series(a, b, x - h)) / (2 * h)
        exact = a / b * kummer_series(a + 1, b + 1, x)
        worst_deriv = max(worst_deriv, abs(fd - exact) / max(1.0, abs(exact), abs(f)))
    return worst_contig, worst_deriv


def test_criterion_6_kummer_engine():
    x = np.linspace(0.0, 5.0, 101)
    exp_err = float(np.max(np.abs(kummer_series(1.0, 1.0, x) - np.exp(x)) / np.exp(x)))
    poly_err = 0.0
    for n in range(51):
        for b in (1.0, 1.125, 2.0, 3.7):
            for xv in (0.05, 0.5, 2.0, 5.0):
                p = kummer_polynomial(n, b, xv)
                s = kummer_series(-n, b, xv)
                if p != s:  # exact zeros occur, e.g. 1F1(-1; 2; 2)
                    poly_err = max(poly_err, abs(p - s) / abs(s))
    contig, deriv = _contiguity_and_derivative(np.random.default_rng(20240611))
    asym = []
    for A in (-10.0, -20.0, -40.0):
        s = kummer_series(A, 2.0, 0.2)
        asym.append(abs(kummer_asymptotic(A, 2.0, 0.2) - s) / abs(s))
    verdict(6, [
        (f"exp identity max rel error {exp_err:.3g} <= 1e-12", exp_err <= 1e-12),
        (f"polynomial vs series {poly_err:.3g} <= 1e-13", poly_err <= 1e-13),
        (f"contiguity {contig:.3g} <= 1e-10", contig <= 1e-10),
        (f"derivative {deriv:.3g} <= 1e-6", deriv <= 1e-6),
        ("asymptotic error monotone decreasing over A = -10, -20, -40 "
         f"(measured {asym[0]:.4f}, {asym[1]:.4f}, {asym[2]:.4f})",
         asym[0] > asym[1] > asym[2]),
    ])


def test_criterion_7_oracle_consistency():
    checks = []
    for l in (0, 1):
        qn = QuantumNumbers(0, l, 1)
        fd = radial_operator_eigenvalues(WALL, qn, 5, Domain.DIRICHLET_AT_RHO0, 4000)
        roots = exact_hardwall_roots(WALL, qn, 5)
        dev = max(abs(a - b) / b for a, b in zip(fd.nus, roots.nus))
        checks.append((f"l={l}: FD vs roots {dev:.3g} <= 1e-4", dev <= 1e-4))
        checks.append((f"l={l}: nodes {fd.nodes} equal n", fd.nodes == (0, 1, 2, 3, 4)))
        checks.append((f"l={l}: order {fd.convergence_order:.3f} in [1.5, 2.5]",
                       1.5 <= fd.convergence_order <= 2.5))
    un = radial_operator_eigenvalues(DESK, QuantumNumbers(0, 0, 1), 5, Domain.UNCONFINED, 2000)
    checks.append((f"unconfined nodes {un.nodes} equal n", un.nodes == (0, 1, 2, 3, 4)))
    checks.append((f"unconfined order {un.convergence_order:.3f} in [1.5, 2.5]",
                   1.5 <= un.convergence_order <= 2.5))
    verdict(7, checks)


def _invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


DESK_FLAGS = ["--mass", "1", "--omega0", "1e-5", "--omega", "0.05", "--eta", "0.8"]
WALL_FLAGS = ["--mass", "1", "--omega0", "1e-3", "--omega", "0.1", "--eta", "0.8"]


def test_criterion_8_cli_determinism():
    commands = [
        ["spectrum", *DESK_FLAGS],
        ["spectrum", *WALL_FLAGS, "--model", "hardwall"],
        ["compare", *DESK_FLAGS],
        ["compare", *WALL_FLAGS, "--model", "hardwall", "--l-min", "0", "--l-max", "1",
         "--spin", "1", "--count", "11"],
        ["wavefunction", *DESK_FLAGS, "--n", "2"],
        ["wavefunction", *WALL_FLAGS, "--model", "hardwall", "--n", "1"],
        ["regimes", *DESK_FLAGS],
    ]
    checks = []
    for cmd in commands:
        for fmt in ("csv", "json"):
            first = _invoke([*cmd, "--format", fmt])
            second = _invoke([*cmd, "--format", fmt])
            checks.append((f"{' '.join(cmd[:1])} {fmt} byte-identical",
                           first[0] == 0 and first[1] == second[1] and first[1] != ""))
    # separate interpreters, so no in-process caching can mask drift
    procs = [
        subprocess.run([sys.executable, "-m", "rotdirac", "spectrum", *DESK_FLAGS, "--format", "json"],
                       capture_output=True, check=False)
        for _ in range(2)
    ]
    checks.append(("separate processes byte-identical",
                   procs[0].returncode == 0 and procs[0].stdout == procs[1].stdout))
    json.loads(procs[0].stdout)

    matrix = [
        (0, ["regimes", *DESK_FLAGS]),
        (0, ["compare", *DESK_FLAGS, "--count", "0"]),
        (2, ["spectrum", "--eta", "1.5"]),
        (2, ["spectrum", "--config", "/nonexistent/run.json"]),
        (3, ["spectrum", "--omega0", "1e-4", "--omega", "0.45", "--eta", "1",
             "--n-max", "0", "--l-min", "-8", "--l-max", "8"]),
        (4, ["compare", *DESK_FLAGS, "--oracle-grid", "200", "--count", "20", "--grid-rtol", "1e-9"]),
    ]
    for expected, argv in matrix:
        code, out, err = _invoke(argv)
        clean = (out != "") if expected == 0 else (out == "" and err != "")
        checks.append((f"exit {expected} for {argv[0]} ({code})", code == expected and clean))
    verdict(8, checks)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
