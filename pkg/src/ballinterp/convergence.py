"""Sample grids on a ball of C^2 and the geometric error-decay experiment."""

from __future__ import annotations

import io
import math
import statistics
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .lines import DomainGuard, LineConfig, in_domain, validate_config
from .reconstruct import g_general
from .rng import SplitMix64
from .series2d import TaylorSeries2, eval2

_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True)
class GridSpec:
    radius: float
    count: int
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.radius < 1:
            raise ValueError("grid radius must lie in (0, 1)")
        if self.count < 1:
            raise ValueError("grid count must be >= 1")


def _radical_inverse(i: int, base: int) -> float:
    inv, f = 0.0, 1.0 / base
    while i:
        i, d = divmod(i, base)
        inv += d * f
        f /= base
    return inv


def ball_grid(spec: GridSpec, accept: Callable[[tuple[complex, complex]], bool] = lambda z: True,
              max_draws: int = 1_000_000) -> list[tuple[complex, complex]]:
    """Shifted Halton points of the real 4-ball of radius ``spec.radius``.

    Points are taken in Halton order (bases 2, 3, 5, 7) after a seeded
    Cranley-Patterson shift, rejected outside the ball or by ``accept``,
    until ``spec.count`` points are collected.
    """
    rng = SplitMix64(spec.seed)
    shift = [rng.uniform() for _ in _PRIMES]
    r = spec.radius
    out: list[tuple[complex, complex]] = []
    i = 0
    while len(out) < spec.count:
        i += 1
        if i > max_draws:
            raise ValueError(f"only {len(out)} of {spec.count} grid points passed the guard")
        x = [r * (2 * ((_radical_inverse(i, b) + s) % 1.0) - 1) for b, s in zip(_PRIMES, shift)]
        if x[0] ** 2 + x[1] ** 2 + x[2] ** 2 + x[3] ** 2 >= r * r:
            continue
        z = (complex(x[0], x[1]), complex(x[2], x[3]))
        if accept(z):
            out.append(z)
    return out


def guarded_grid(spec: GridSpec, cfgs: Sequence[LineConfig],
                 guard: DomainGuard = DomainGuard()) -> list[tuple[complex, complex]]:
    return ball_grid(spec, lambda z: all(in_domain(c, guard, z) for c in cfgs))


def fmt(x: float) -> str:
    """17 significant digits, round-trippable."""
    return format(x, ".17g")


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    N: int
    sup_error: float
    mean_error: float
    ratio_to_prev: float


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...]
    fitted_rate: float
    grid: GridSpec
    points: int = field(default=0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,N,sup_error,mean_error,ratio_to_prev\n")
        for r in self.rows:
            buf.write(f"{r.n},{r.N},{fmt(r.sup_error)},{fmt(r.mean_error)},{fmt(r.ratio_to_prev)}\n")
        buf.write(f"# fitted_rate={fmt(self.fitted_rate)}\n")
        return buf.getvalue()

    def median_ratio(self) -> float:
        ratios = [r.ratio_to_prev for r in self.rows[1:]]
        return statistics.median(ratios) if ratios else math.nan


def fit_rate(ns: Sequence[int], errors: Sequence[float]) -> float:
    """``exp`` of the least-squares slope of ``log(error)`` against ``N``; zeros are skipped."""
    pts = [(n, math.log(e)) for n, e in zip(ns, errors) if e > 0]
    if len(pts) < 2 or len({n for n, _ in pts}) < 2:
        return math.nan
    x, y = np.array(pts).T
    slope = np.polyfit(x, y, 1)[0]
    return float(math.exp(slope))


def convergence_experiment(f: TaylorSeries2, cfgs: Sequence[LineConfig], grid: GridSpec,
                           guard: DomainGuard = DomainGuard()) -> ConvergenceReport:
    """``sup`` and mean of ``|f - G(f)|`` over a guarded grid, one row per configuration."""
    points = guarded_grid(grid, cfgs, guard)
    fvals = [eval2(f, z) for z in points]
    rows = []
    prev = None
    for cfg in cfgs:
        errs = [abs(fz - g_general(f, cfg, z, guard)) for z, fz in zip(points, fvals)]
        sup = max(errs)
        mean = math.fsum(errs) / len(errs)
        if prev is None:
            ratio = math.nan
        elif prev == 0:
            ratio = math.nan if sup == 0 else math.inf
        else:
            ratio = sup / prev
        rows.append(ConvergenceRow(cfg.n, cfg.N, sup, mean, ratio))
        prev = sup
    rate = fit_rate([r.N for r in rows], [r.sup_error for r in rows])
    return ConvergenceReport(tuple(rows), rate, grid, len(points))


def unit_circle_configs(counts: Sequence[int]) -> list[LineConfig]:
    """Simple-line configurations with ``k`` equally spaced slopes ``exp(2 pi i j / k)``."""
    return [validate_config(0, [(complex(math.cos(2 * math.pi * j / k), math.sin(2 * math.pi * j / k)), 1)
                                for j in range(k)], 0)
            for k in counts]
