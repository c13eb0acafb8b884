"""Seeded random generators and the verification suites built on them.

Everything here draws from :class:`SplitMix64`, so a seed fixes every sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .lines import DomainGuard, LineConfig, hefer_pn, g_eval, in_domain, validate_config
from .reconstruct import ReconstructionMode, g_general, interp_part_monomial, pv_remainder_monomial, tail_sum
from .rng import SplitMix64
from .series2d import TaylorSeries2, eval2


def random_series(rng: SplitMix64, degree: int, scale: float = 1.0) -> TaylorSeries2:
    return TaylorSeries2.from_dict(degree, {
        (k1, l - k1): rng.complex_in_box(scale)
        for l in range(degree + 1) for k1 in range(l + 1)})


def random_slopes(rng: SplitMix64, count: int, rmin: float = 0.3, rmax: float = 2.0,
                  separation: float = 0.3) -> list[complex]:
    """``count`` slopes with moduli in ``[rmin, rmax]``, pairwise at least ``separation`` apart."""
    out: list[complex] = []
    for _ in range(100_000):
        if len(out) == count:
            return out
        r = rng.uniform(rmin, rmax)
        th = rng.uniform(0, 2 * math.pi)
        e = complex(r * math.cos(th), r * math.sin(th))
        if all(abs(e - f) >= separation for f in out):
            out.append(e)
    raise RuntimeError("could not place well-separated slopes")


def random_config(rng: SplitMix64, max_middle: int = 3, max_mult: int = 3) -> LineConfig:
    """At least one middle line; every middle multiplicity is in ``1..max_mult``."""
    k = rng.randint(1, max_middle)
    etas = random_slopes(rng, k)
    middle = [(e, rng.randint(1, max_mult)) for e in etas]
    return validate_config(rng.randint(0, max_mult), middle, rng.randint(0, max_mult))


def random_point(rng: SplitMix64, radius: float, cfgs: Sequence[LineConfig] = (),
                 guard: DomainGuard = DomainGuard()) -> tuple[complex, complex]:
    """Uniform point of the real 4-ball of ``radius`` passing the guard of every ``cfg``."""
    for _ in range(100_000):
        x = [rng.uniform(-radius, radius) for _ in range(4)]
        if sum(v * v for v in x) > radius * radius:
            continue
        z = (complex(x[0], x[1]), complex(x[2], x[3]))
        if all(in_domain(c, guard, z) for c in cfgs):
            return z
    raise RuntimeError("no admissible point found")


@dataclass(frozen=True)
class SuiteResult:
    """Worst case of a randomized identity check."""

    name: str
    max_error: float
    tolerance: float
    cases: int
    worst: str = ""

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        msg = f"{verdict} {self.name}: max error {self.max_error:.3e} (tol {self.tolerance:.1e}, {self.cases} cases)"
        if not self.passed and self.worst:
            msg += f"; worst at {self.worst}"
        return msg


def reconstruction_suite(seed: int = 7, trials: int = 200, points: int = 20, max_degree: int = 8,
                         radius: float = 0.8, tol: float = 1e-8) -> SuiteResult:
    """``|f - G(f) - tail| / (1 + |f|)`` over random series, configs and guarded points."""
    rng = SplitMix64(seed)
    worst, where, cases = 0.0, "", 0
    for trial in range(trials):
        f = random_series(rng, rng.randint(1, max_degree))
        cfg = random_config(rng)
        for _ in range(points):
            z = random_point(rng, radius, [cfg])
            fz = eval2(f, z)
            err = abs(fz - g_general(f, cfg, z) - tail_sum(f, cfg, z)) / (1 + abs(fz))
            cases += 1
            if err > worst:
                worst, where = err, f"trial {trial}, cfg {cfg.to_json()}, z {z}"
    return SuiteResult("reconstruction identity f = G(f) + tail", worst, tol, cases, where)


def path_equivalence_suite(seed: int = 7, trials: int = 200, points: int = 20, max_degree: int = 8,
                           radius: float = 0.8, tol: float = 1e-9) -> SuiteResult:
    """Coefficient path against line-data path, relative to ``1 + |G|``."""
    rng = SplitMix64(seed)
    worst, where, cases = 0.0, "", 0
    for trial in range(trials):
        f = random_series(rng, rng.randint(1, max_degree))
        cfg = random_config(rng)
        for _ in range(points):
            z = random_point(rng, radius, [cfg])
            a = g_general(f, cfg, z)
            b = g_general(f, cfg, z, mode=ReconstructionMode.LINE_DATA)
            err = abs(a - b) / (1 + abs(a))
            cases += 1
            if err > worst:
                worst, where = err, f"trial {trial}, cfg {cfg.to_json()}, z {z}"
    return SuiteResult("coefficient path = line-data path", worst, tol, cases, where)


def monomial_suite(cfgs: Sequence[LineConfig], kmax: int = 8, points: int = 20, seed: int = 7,
                   radius: float = 0.8, tol: float = 1e-9) -> SuiteResult:
    """``|pv + interp - z^k| / (1 + |z^k|)`` for ``k1, k2 <= kmax``."""
    rng = SplitMix64(seed)
    worst, where, cases = 0.0, "", 0
    for cfg in cfgs:
        for _ in range(points):
            z = random_point(rng, radius, [cfg])
            for k1 in range(kmax + 1):
                for k2 in range(kmax + 1):
                    mono = z[0] ** k1 * z[1] ** k2
                    pv = pv_remainder_monomial(k1, k2, cfg, z)
                    it = interp_part_monomial(k1, k2, cfg, z)
                    err = abs(pv + it - mono) / (1 + abs(mono))
                    cases += 1
                    if err > worst:
                        worst, where = err, f"k=({k1},{k2}), cfg {cfg.to_json()}, z {z}"
    return SuiteResult("monomial decomposition pv + interp = z^k", worst, tol, cases, where)


def hefer_suite(seed: int = 11, cases: int = 1000, radius: float = 0.9, tol: float = 1e-10) -> SuiteResult:
    """``|g(zeta) - g(z) - <P, zeta - z>| / (1 + |g(zeta)| + |g(z)|)``."""
    rng = SplitMix64(seed)
    worst, where = 0.0, ""
    for i in range(cases):
        cfg = random_config(rng)
        zeta = random_point(rng, radius)
        z = random_point(rng, radius)
        p1, p2 = hefer_pn(cfg, zeta, z)
        gz, gw = g_eval(cfg, z), g_eval(cfg, zeta)
        lhs = gw - gz
        rhs = p1 * (zeta[0] - z[0]) + p2 * (zeta[1] - z[1])
        err = abs(lhs - rhs) / (1 + abs(gw) + abs(gz))
        if err > worst:
            worst, where = err, f"case {i}, cfg {cfg.to_json()}, zeta {zeta}, z {z}"
    return SuiteResult("Hefer decomposition", worst, tol, cases, where)


def standard_monomial_configs() -> list[LineConfig]:
    """Three configurations covering simple, multiple and axis-carrying line sets."""
    return [
        validate_config(0, [(0.5, 1)], 0),
        validate_config(1, [(0.7 + 0.4j, 2), (-1.3 + 0.2j, 1)], 2),
        validate_config(2, [(0.4j, 3), (1.1, 1), (-0.8 - 1.2j, 2)], 1),
    ]
