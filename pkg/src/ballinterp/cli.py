"""Command-line runner for the verification suites and experiments.

Usage::

    ballinterp <command> [--config PATH] [--out PATH] [--seed INT] [--tol REAL] [--kmax INT]

``--config`` points at a RunSpec JSON envelope::

    {"function": <series spec>, "config": <line config> | "configs": [...],
     "grid": {"radius": r, "count": n, "seed": s}, "tolerances": {...}, "suite": {...}}

A bare line-configuration JSON is accepted as well.  Exit codes: 0 success,
1 tolerance breach, 2 invalid input.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .convergence import (GridSpec, convergence_experiment, fit_rate, fmt, guarded_grid,
                          unit_circle_configs)
from .disc1d import DiscConfig, disc_defect, disc_grid, disc_interpolant, max_blaschke_modulus
from .lines import DomainGuard, LineConfig, config_from_json, validate_config
from .reconstruct import g_general, interp_part_monomial, pv_remainder_monomial, tail_sum
from .rng import SplitMix64
from .series2d import TaylorSeries2, build_series, eval2, geometric_sum
from .suites import random_point, reconstruction_suite, standard_monomial_configs

COMMANDS = ("verify-identity", "monomial-check", "reconstruct", "convergence", "disc")

DEFAULT_TOL = {
    "verify-identity": 1e-8,
    "monomial-check": 1e-9,
    "reconstruct": 1e-8,
    "disc": 1e-6,
}

_CONFIG_KEYS = {"m1", "middle", "mn", "delta"}


class SpecError(ValueError):
    """Invalid RunSpec."""


@dataclass
class RunSpec:
    command: str
    function: dict | None = None
    configs: list[tuple[LineConfig, DomainGuard]] = field(default_factory=list)
    grid: GridSpec | None = None
    out: str | None = None
    seed: int | None = None
    tol: float | None = None
    kmax: int | None = None
    suite: dict = field(default_factory=dict)

    def tolerance(self) -> float:
        return self.tol if self.tol is not None else DEFAULT_TOL.get(self.command, math.nan)


def parse_runspec(command: str, obj: dict | None) -> RunSpec:
    """Validate a RunSpec envelope (or a bare line configuration)."""
    spec = RunSpec(command)
    if obj is None:
        return spec
    if not isinstance(obj, dict):
        raise SpecError("RunSpec must be a JSON object")
    if set(obj) <= _CONFIG_KEYS:
        spec.configs = [config_from_json(obj)]
        return spec
    if "command" in obj and obj["command"] != command:
        raise SpecError(f"RunSpec is for {obj['command']!r}, not {command!r}")
    spec.function = obj.get("function")
    if spec.function is not None and not isinstance(spec.function, dict):
        raise SpecError("'function' must be a series spec object")
    raw = obj.get("configs", [obj["config"]] if "config" in obj else [])
    if isinstance(raw, dict) and "unit_circle" in raw:
        counts = raw["unit_circle"]
        spec.configs = [(c, DomainGuard()) for c in unit_circle_configs([int(k) for k in counts])]
    else:
        if not isinstance(raw, list):
            raise SpecError("'configs' must be a list of line configurations")
        spec.configs = [config_from_json(c) for c in raw]
    if "grid" in obj:
        g = obj["grid"]
        try:
            spec.grid = GridSpec(float(g["radius"]), int(g["count"]), int(g.get("seed", 0)))
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed grid: {exc}") from exc
    tols = obj.get("tolerances", {})
    if isinstance(tols, (int, float)):
        spec.tol = float(tols)
    elif isinstance(tols, dict):
        if command in tols:
            spec.tol = float(tols[command])
        elif "default" in tols:
            spec.tol = float(tols["default"])
    else:
        raise SpecError("'tolerances' must be a number or an object")
    spec.suite = dict(obj.get("suite", {}))
    if "seed" in obj:
        spec.seed = int(obj["seed"])
    if "kmax" in obj:
        spec.kmax = int(obj["kmax"])
    return spec


def format_complex(c: complex) -> str:
    """``a+bj`` with 17 significant digits; parseable by ``complex()``."""
    im = fmt(c.imag)
    if im[0] not in "+-":
        im = "+" + im
    return f"{fmt(c.real)}{im}j"


# ---------------------------------------------------------------------------
# commands

class _Result:
    def __init__(self):
        self.csv: str | None = None
        self.lines: list[str] = []
        self.code = 0


def _function(spec: RunSpec, default: TaylorSeries2) -> TaylorSeries2:
    return build_series(spec.function) if spec.function is not None else default


def _seed(spec: RunSpec, fallback: int) -> int:
    return spec.seed if spec.seed is not None else fallback


def _grid(spec: RunSpec, default: GridSpec) -> GridSpec:
    g = spec.grid or default
    if spec.seed is not None:
        g = GridSpec(g.radius, g.count, spec.seed)
    return g


def cmd_verify_identity(spec: RunSpec) -> _Result:
    r = _Result()
    tol = spec.tolerance()
    res = reconstruction_suite(seed=_seed(spec, 7), trials=int(spec.suite.get("trials", 200)),
                               points=int(spec.suite.get("points", 20)),
                               max_degree=int(spec.suite.get("max_degree", 8)),
                               radius=float(spec.suite.get("radius", 0.8)), tol=tol)
    r.lines.append(f"max residual {fmt(res.max_error)}")
    r.lines.append(res.line())
    r.csv = "name,max_error,tolerance,cases\n" + f"verify-identity,{fmt(res.max_error)},{fmt(tol)},{res.cases}\n"
    r.code = 0 if res.passed else 1
    return r


def cmd_monomial_check(spec: RunSpec) -> _Result:
    r = _Result()
    tol = spec.tolerance()
    kmax = spec.kmax if spec.kmax is not None else 8
    if kmax < 0:
        raise SpecError("kmax must be >= 0")
    cfgs = spec.configs or [(c, DomainGuard()) for c in standard_monomial_configs()]
    points = int(spec.suite.get("points", 20))
    radius = float(spec.suite.get("radius", 0.8))
    rng = SplitMix64(_seed(spec, 7))
    buf = io.StringIO()
    buf.write("config,k1,k2,z1_re,z1_im,z2_re,z2_im,pv,interp,residual\n")
    worst, where = 0.0, ""
    for ci, (cfg, guard) in enumerate(cfgs):
        pv_max = it_max = 0.0
        for _ in range(points):
            z = random_point(rng, radius, [cfg], guard)
            for k1 in range(kmax + 1):
                for k2 in range(kmax + 1):
                    mono = z[0] ** k1 * z[1] ** k2
                    pv = pv_remainder_monomial(k1, k2, cfg, z, guard)
                    it = interp_part_monomial(k1, k2, cfg, z, guard)
                    res = abs(pv + it - mono)
                    rel = res / (1 + abs(mono))
                    pv_max, it_max = max(pv_max, abs(pv)), max(it_max, abs(it))
                    if rel > worst:
                        worst, where = rel, f"config {ci}, k=({k1},{k2}), z={z}"
                    buf.write(f"{ci},{k1},{k2},{fmt(z[0].real)},{fmt(z[0].imag)},{fmt(z[1].real)},"
                              f"{fmt(z[1].imag)},{format_complex(pv)},{format_complex(it)},{fmt(res)}\n")
        r.lines.append(f"config {ci} {json.dumps(cfg.to_json())}: max |pv| {fmt(pv_max)}, max |interp| {fmt(it_max)}")
    ok = worst <= tol
    r.lines.append(f"{'PASS' if ok else 'FAIL'} monomial decomposition pv + interp = z^k for k1,k2 <= {kmax}: "
                   f"max relative residual {fmt(worst)} (tol {tol:g})" + ("" if ok else f"; worst at {where}"))
    r.csv = buf.getvalue()
    r.code = 0 if ok else 1
    return r


def cmd_reconstruct(spec: RunSpec) -> _Result:
    r = _Result()
    tol = spec.tolerance()
    if len(spec.configs) > 1:
        raise SpecError("reconstruct takes exactly one line configuration")
    cfg, guard = spec.configs[0] if spec.configs else (validate_config(0, [(0.5, 1)], 0), DomainGuard())
    f = _function(spec, geometric_sum(0.6, 20))
    grid = _grid(spec, GridSpec(0.8, 50, 7))
    pts = guarded_grid(grid, [cfg], guard)
    buf = io.StringIO()
    buf.write("z1_re,z1_im,z2_re,z2_im,f,g,tail,residual\n")
    worst, where = 0.0, ""
    for z in pts:
        fz = eval2(f, z)
        gz = g_general(f, cfg, z, guard)
        tz = tail_sum(f, cfg, z)
        res = abs(fz - gz - tz)
        if res / (1 + abs(fz)) > worst:
            worst, where = res / (1 + abs(fz)), f"z={z}"
        buf.write(f"{fmt(z[0].real)},{fmt(z[0].imag)},{fmt(z[1].real)},{fmt(z[1].imag)},"
                  f"{format_complex(fz)},{format_complex(gz)},{format_complex(tz)},{fmt(res)}\n")
    ok = worst <= tol
    r.lines.append(f"{'PASS' if ok else 'FAIL'} reconstruction identity f = G(f) + tail on {len(pts)} grid points: "
                   f"max relative residual {fmt(worst)} (tol {tol:g})" + ("" if ok else f"; worst at {where}"))
    r.csv = buf.getvalue()
    r.code = 0 if ok else 1
    return r


def cmd_convergence(spec: RunSpec) -> _Result:
    r = _Result()
    f = _function(spec, geometric_sum(0.6, 40))
    if spec.configs:
        guards = {g for _, g in spec.configs}
        if len(guards) > 1:
            raise SpecError("all configurations of a convergence run must share one guard delta")
        cfgs, guard = [c for c, _ in spec.configs], guards.pop()
    else:
        cfgs, guard = unit_circle_configs(range(1, 11)), DomainGuard()
    rep = convergence_experiment(f, cfgs, _grid(spec, GridSpec(0.4, 200, 7)), guard)
    r.csv = rep.to_csv()
    r.lines.append(f"{len(cfgs)} configurations on {rep.points} grid points: fitted rate {fmt(rep.fitted_rate)}, "
                   f"median ratio {fmt(rep.median_ratio())}")
    return r


def _disc_function(spec: RunSpec):
    """Polynomial from ``function`` (``{"coeffs": [[re, im], ...]}``) or ``exp(z)/(1 - 0.3 z)``."""
    fn = spec.function
    if fn is None:
        return lambda z: np.exp(z) / (1 - 0.3 * z)
    try:
        coeffs = [complex(float(a), float(b)) for a, b in fn["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"disc function needs 'coeffs': [[re, im], ...]: {exc}") from exc
    return lambda z: np.polyval(coeffs[::-1], z)


def cmd_disc(spec: RunSpec) -> _Result:
    r = _Result()
    tol = spec.tolerance()
    rng = SplitMix64(_seed(spec, 7))
    count = int(spec.suite.get("nodes", 12))
    node_radius = float(spec.suite.get("node_radius", 0.5))
    quad = int(spec.suite.get("quadrature_points", 4096))
    nodes: list[complex] = []
    while len(nodes) < count:
        e = rng.complex_in_box(node_radius)
        if abs(e) <= node_radius:
            nodes.append(e)
    f = _disc_function(spec)
    pts = disc_grid(float(spec.suite.get("radius", 0.5)))
    cfg = DiscConfig(tuple(nodes), quad)

    vals = [complex(f(np.array([e]))[0]) for e in nodes]
    match = max(abs(disc_interpolant(cfg, vals, e) - v) for e, v in zip(nodes, vals))
    ident = max(abs(complex(f(np.array([z]))[0]) - disc_interpolant(cfg, vals, z) - disc_defect(cfg, f, z))
                for z in pts)
    sups = []
    for n in range(1, count + 1):
        sub = DiscConfig(tuple(nodes[:n]), quad)
        sups.append(max(abs(disc_defect(sub, f, z)) for z in pts))
    rate = fit_rate(range(1, count + 1), sups)
    bound = max_blaschke_modulus(nodes, pts)

    checks = [
        ("node-value matching", match <= 1e-10, f"max {fmt(match)} (tol 1e-10)"),
        ("remainder identity f = interpolant + defect", ident <= tol, f"max {fmt(ident)} (tol {tol:g})"),
        ("defect decay", max(sups) == 0 or (rate < 1 and rate <= bound + 0.05),
         f"fitted ratio {fmt(rate)}, Blaschke bound {fmt(bound)}"),
    ]
    for name, ok, msg in checks:
        r.lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {msg}")
    buf = io.StringIO()
    buf.write("N,sup_defect\n")
    for n, s in enumerate(sups, 1):
        buf.write(f"{n},{fmt(s)}\n")
    buf.write(f"# fitted_rate={fmt(rate)}\n")
    r.csv = buf.getvalue()
    r.code = 0 if all(ok for _, ok, _ in checks) else 1
    return r


_DISPATCH = {
    "verify-identity": cmd_verify_identity,
    "monomial-check": cmd_monomial_check,
    "reconstruct": cmd_reconstruct,
    "convergence": cmd_convergence,
    "disc": cmd_disc,
}


def run(spec: RunSpec, stdout=None, stderr=None) -> int:
    """Execute ``spec``; CSV goes to ``spec.out`` (or stdout), the summary to stdout (or stderr)."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    result = _DISPATCH[spec.command](spec)
    if spec.out:
        with open(spec.out, "w", newline="") as fh:
            fh.write(result.csv or "")
        summary = stdout
    else:
        if result.csv:
            stdout.write(result.csv)
        summary = stderr
    for line in result.lines:
        print(line, file=summary)
    return result.code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ballinterp", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="RunSpec or line-configuration JSON file")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--seed", type=int, help="override the RunSpec seed")
    p.add_argument("--tol", type=float, help="override the pass/fail tolerance")
    p.add_argument("--kmax", type=int, help="largest monomial exponent for monomial-check")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        obj: Any = None
        if args.config:
            with open(args.config) as fh:
                obj = json.load(fh)
        spec = parse_runspec(args.command, obj)
        spec.out = args.out or spec.out
        for name in ("seed", "tol", "kmax"):
            if getattr(args, name) is not None:
                setattr(spec, name, getattr(args, name))
        if spec.tol is not None and not spec.tol >= 0:
            raise SpecError("tolerance must be nonnegative")
        return run(spec)
    except (OSError, ValueError, KeyError, TypeError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
