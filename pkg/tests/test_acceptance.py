"""Acceptance criteria, each checked at its stated tolerance.

Every criterion records one PASS/FAIL line (shown in the pytest terminal
summary, or printed when this file is run as a script).
"""

from __future__ import annotations

import itertools
import time

import numpy as np

from ballinterp.cli import main as cli_main
from ballinterp.convergence import GridSpec, convergence_experiment, fit_rate, unit_circle_configs
from ballinterp.disc1d import (DiscConfig, disc_decay, disc_defect, disc_grid, disc_interpolant,
                               max_blaschke_modulus)
from ballinterp.lines import validate_config
from ballinterp.polyjet import (Jet, NodeSet, Poly, hermite_polynomial, multiset_count,
                                poly_divmod, quotient_power)
from ballinterp.reconstruct import g_general, g_single_lines, in_tail
from ballinterp.rng import SplitMix64
from ballinterp.series2d import TaylorSeries2, geometric_sum
from ballinterp.suites import (hefer_suite, monomial_suite, path_equivalence_suite, random_config,
                               random_point, random_series, random_slopes, reconstruction_suite,
                               standard_monomial_configs)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []


def record(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number} ({name}): {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_1_reconstruction_identity():
    res, dt = _timed(lambda: reconstruction_suite(seed=7, trials=200, points=20, max_degree=8,
                                                  radius=0.8, tol=1e-8))
    ok = res.passed and dt <= 30
    record(1, "f = G(f) + tail", ok,
           f"max |f-G-tail|/(1+|f|) = {res.max_error:.3e} <= 1e-8 over {res.cases} points, {dt:.1f}s <= 30s")
    assert ok, res.line()


def test_criterion_2_monomial_decomposition():
    cfgs = standard_monomial_configs()
    res, dt = _timed(lambda: monomial_suite(cfgs, kmax=8, points=20, seed=7, tol=1e-9))
    ok = res.passed and dt <= 30 and len(cfgs) >= 3
    record(2, "pv + interp = z^k", ok,
           f"max rel residual {res.max_error:.3e} <= 1e-9, k1,k2 <= 8, {len(cfgs)} configs x 20 points, {dt:.1f}s")
    assert ok, res.line()


def test_criterion_3_path_equivalence_and_single_lines():
    paths = path_equivalence_suite(seed=7, trials=200, points=20, tol=1e-9)
    rng = SplitMix64(70)
    worst = 0.0
    for _ in range(200):
        etas = random_slopes(rng, rng.randint(1, 3))
        cfg = validate_config(0, [(e, 1) for e in etas], 0)
        f = random_series(rng, rng.randint(1, 8))
        for _ in range(20):
            z = random_point(rng, 0.8, [cfg])
            b = g_general(f, cfg, z)
            worst = max(worst, abs(g_single_lines(f, etas, z) - b) / (1 + abs(b)))
    ok = paths.passed and worst <= 1e-9
    record(3, "line-data path and single-line formula", ok,
           f"coefficient vs line-data {paths.max_error:.3e}, single-line vs general {worst:.3e} (tol 1e-9)")
    assert ok, paths.line()


def _random_poly(rng: SplitMix64, deg: int) -> Poly:
    c = [rng.complex_in_box(1.0) for _ in range(deg + 1)]
    c[-1] = c[-1] or 1
    return Poly(tuple(c))


def _random_nodes(rng: SplitMix64) -> NodeSet:
    # 1..4 nodes in the closed unit disc, pairwise >= 0.3 apart, multiplicities 1..3
    pts: list[complex] = []
    target = rng.randint(1, 4)
    while len(pts) < target:
        e = rng.complex_in_box(1.0)
        if abs(e) <= 1 and all(abs(e - f) >= 0.3 for f in pts):
            pts.append(e)
    return NodeSet(tuple((e, rng.randint(1, 3)) for e in pts))


def _coeff_err(a: Poly, b: Poly) -> float:
    n = max(len(a.coeffs), len(b.coeffs), 1)
    pa = list(a.coeffs) + [0] * (n - len(a.coeffs))
    pb = list(b.coeffs) + [0] * (n - len(b.coeffs))
    scale = 1 + max(abs(c) for c in pa + pb)
    return max(abs(x - y) for x, y in zip(pa, pb)) / scale


def test_criterion_4_division_and_hermite():
    rng = SplitMix64(4)
    q_err = r_err = j_err = 0.0
    for _ in range(500):
        nodes = _random_nodes(rng)
        g = nodes.node_poly()
        k = rng.randint(0, 14)
        q_err = max(q_err, _coeff_err(quotient_power(k, nodes), poly_divmod(Poly.monomial(k), g)[0]))
        p = _random_poly(rng, rng.randint(0, 12))
        h = hermite_polynomial(nodes, [Jet.of_poly(p, e, m - 1) for e, m in nodes.nodes])
        r_err = max(r_err, _coeff_err(h, poly_divmod(p, g)[1]))
        for e, m in nodes.nodes:
            for a, b in zip(h.taylor_at(e, m - 1).coeffs, p.taylor_at(e, m - 1).coeffs):
                j_err = max(j_err, abs(a - b) / (1 + abs(b)))
    counts_ok = all(
        multiset_count(m, q) == sum(1 for v in itertools.product(range(q + 1), repeat=m) if sum(v) == q)
        for m in range(1, 5) for q in range(9))
    ok = q_err <= 1e-10 and r_err <= 1e-10 and j_err <= 1e-9 and counts_ok
    record(4, "division, Hermite remainder, jet matching, counts", ok,
           f"quotient {q_err:.2e}, remainder {r_err:.2e} (tol 1e-10), jets {j_err:.2e} (tol 1e-9), "
           f"counts exact: {counts_ok}")
    assert ok


def test_criterion_5_geometric_decay():
    f = geometric_sum(0.6, 40)
    rep, dt = _timed(lambda: convergence_experiment(f, unit_circle_configs(range(1, 11)), GridSpec(0.4, 200, 7)))
    sups = [r.sup_error for r in rep.rows]
    decreasing = all(b < a for a, b in zip(sups, sups[1:]))
    med = rep.median_ratio()
    ok = decreasing and med <= 0.9 and rep.fitted_rate < 1 and dt <= 60 and rep.points == 200
    record(5, "geometric error decay", ok,
           f"strictly decreasing: {decreasing}, median ratio {med:.4f} <= 0.9, fitted rate {rep.fitted_rate:.4f} < 1, "
           f"{rep.points} points, {dt:.1f}s <= 60s")
    assert ok, rep.to_csv()


def test_criterion_6_reproduction_region_and_linearity():
    rng = SplitMix64(6)
    worst_in = worst_out = lin = 0.0
    for _ in range(40):
        cfg = random_config(rng)
        for _ in range(5):
            z = random_point(rng, 0.8, [cfg])
            for k1 in range(7):
                for k2 in range(7 - k1):
                    m = z[0] ** k1 * z[1] ** k2
                    g = g_general(TaylorSeries2.from_dict(k1 + k2, {(k1, k2): 1}), cfg, z)
                    if in_tail(cfg, k1, k2):
                        worst_in = max(worst_in, abs(g))
                    else:
                        worst_out = max(worst_out, abs(g - m))
            f, h = random_series(rng, 8), random_series(rng, 6)
            a, b = rng.complex_in_box(2), rng.complex_in_box(2)
            rhs = a * g_general(f, cfg, z) + b * g_general(h, cfg, z)
            lin = max(lin, abs(g_general(f * a + h * b, cfg, z) - rhs) / (1 + abs(rhs)))
    ok = worst_in <= 1e-10 and worst_out <= 1e-10 and lin <= 1e-9
    record(6, "exact reproduction region and linearity", ok,
           f"outside tail |G-m| {worst_out:.2e}, inside tail |G| {worst_in:.2e} (tol 1e-10), linearity {lin:.2e} (tol 1e-9)")
    assert ok


def test_criterion_7_hefer():
    res = hefer_suite(seed=11, cases=1000, radius=0.9, tol=1e-10)
    record(7, "Hefer decomposition", res.passed, f"max rel error {res.max_error:.3e} <= 1e-10 over {res.cases} cases")
    assert res.passed, res.line()


def _disc_suite():
    rng = SplitMix64(8)
    nodes: list[complex] = []
    while len(nodes) < 12:
        e = rng.complex_in_box(0.5)
        if abs(e) <= 0.5:
            nodes.append(e)
    pts = disc_grid(0.5)
    cfg = DiscConfig(tuple(nodes), 4096)
    match = 0.0
    ident = 0.0
    for deg in range(11):
        coeffs = [rng.complex_in_box(1) for _ in range(deg + 1)]

        def p(z, c=coeffs):
            return np.polyval(c[::-1], z)
        vals = [complex(p(e)) for e in nodes]
        match = max(match, max(abs(disc_interpolant(cfg, vals, e) - v) for e, v in zip(nodes, vals)))
        ident = max(ident, max(abs(complex(p(z)) - disc_interpolant(cfg, vals, z) - disc_defect(cfg, p, z))
                               for z in pts[::4]))

    def f(z):
        return np.exp(z) / (1 - 0.3 * z)
    sups = disc_decay(f, nodes, pts)
    return match, ident, sups, fit_rate(range(1, 13), sups), max_blaschke_modulus(nodes, pts)


def test_criterion_8_disc():
    (match, ident, sups, rate, bound), dt = _timed(_disc_suite)
    monotone = all(b <= a for a, b in zip(sups, sups[1:]))
    ok = match <= 1e-10 and ident <= 1e-6 and monotone and rate < 1 and rate <= bound + 0.05 and dt <= 10
    record(8, "disc interpolation", ok,
           f"node match {match:.2e} (1e-10), remainder identity {ident:.2e} (1e-6), monotone defect: {monotone}, "
           f"fitted ratio {rate:.4f} < 1 and <= max|phi| + 0.05 = {bound + 0.05:.4f}, {dt:.1f}s <= 10s")
    assert ok


def test_criterion_9_cli_determinism(tmp_path):
    import json
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "function": {"fixture": "geometric_sum", "degree": 16, "params": {"c": 0.55}},
        "configs": [{"m1": 1, "middle": [{"eta": [0.4, 0.3], "m": 2}, {"eta": [-1.1, 0.2], "m": 1}], "mn": 1},
                    {"m1": 0, "middle": [{"eta": [0.7, -0.5], "m": 3}], "mn": 2}],
        "grid": {"radius": 0.6, "count": 40, "seed": 5},
    }))
    one_cfg = tmp_path / "one.json"
    one_cfg.write_text(json.dumps({
        "function": {"fixture": "geometric_product", "degree": 12, "params": {"c1": 0.5, "c2": [0, -0.4]}},
        "config": {"m1": 1, "middle": [{"eta": [0.4, 0.3], "m": 2}], "mn": 1},
        "grid": {"radius": 0.7, "count": 60, "seed": 9},
    }))
    same = True
    for cmd, path in [("convergence", spec), ("reconstruct", one_cfg)]:
        outs = []
        for i in range(2):
            out = tmp_path / f"{cmd}{i}.csv"
            assert cli_main([cmd, "--config", str(path), "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        same = same and outs[0] == outs[1] and len(outs[0]) > 0
    record(9, "CLI determinism", same, "two runs of identical RunSpecs produce byte-identical CSV (reconstruct, convergence)")
    assert same


if __name__ == "__main__":
    import pathlib
    import tempfile

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(pathlib.Path(d))
                else:
                    fn()
            except AssertionError:
                pass
