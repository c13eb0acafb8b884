"""Blaschke-product interpolation on the unit disc, with a contour-integral remainder.

For distinct nodes ``eta_1..eta_N`` in the disc and ``f`` holomorphic near the
closed disc, a residue computation gives

    f(z) = sum_l (1 - |eta_l|^2) prod_{j != l} phi_j(z) / phi_j(eta_l) * f(eta_l) / (1 - conj(eta_l) z)
           + B(z) (1 / 2 pi i) \\oint f(zeta) dzeta / (B(zeta) (zeta - z)),

with ``B = prod phi_{eta_l}``.  The first sum is the interpolant, the second
term the defect.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .polyjet import NodeCollisionError, coincident


@dataclass(frozen=True)
class DiscConfig:
    nodes: tuple[complex, ...]
    quadrature_points: int = 4096

    def __post_init__(self):
        nodes = tuple(complex(e) for e in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if self.quadrature_points < 1:
            raise ValueError("quadrature_points must be positive")
        for i, e in enumerate(nodes):
            if not abs(e) < 1:
                raise ValueError(f"node {e!r} is not inside the unit disc")
            for f in nodes[:i]:
                if coincident(e, f, 1.0):
                    raise NodeCollisionError(f"duplicate node {e!r}")


def blaschke_eval(eta: complex, z: complex) -> complex:
    """``(z - eta) / (1 - conj(eta) z)``."""
    den = 1 - eta.conjugate() * z
    if den == 0:
        raise ZeroDivisionError(f"pole of the Blaschke factor at z = {z!r}")
    return (z - eta) / den


def blaschke_product(nodes: Sequence[complex], z: complex) -> complex:
    out = 1 + 0j
    for e in nodes:
        out *= blaschke_eval(e, z)
    return out


def disc_interpolant(cfg: DiscConfig, f_values: Sequence[complex], z: complex) -> complex:
    if len(f_values) != len(cfg.nodes):
        raise ValueError(f"expected {len(cfg.nodes)} values, got {len(f_values)}")
    z = complex(z)
    acc = 0j
    for l, (el, fl) in enumerate(zip(cfg.nodes, f_values)):
        w = (1 - abs(el) ** 2) * fl / (1 - el.conjugate() * z)
        for j, ej in enumerate(cfg.nodes):
            if j != l:
                w *= blaschke_eval(ej, z) / blaschke_eval(ej, el)
        acc += w
    return acc


def disc_defect(cfg: DiscConfig, f: Callable, z: complex, max_modulus: float = 0.95) -> complex:
    """Trapezoidal value of the contour remainder at ``z``.

    ``f`` must accept a numpy array of points on the unit circle.
    """
    z = complex(z)
    if abs(z) > max_modulus:
        raise ValueError(f"|z| = {abs(z):.3g} exceeds the quadrature gate {max_modulus}")
    m = cfg.quadrature_points
    zeta = np.exp(2j * np.pi * np.arange(m) / m)
    b = np.ones(m, dtype=complex)
    for e in cfg.nodes:
        b *= (zeta - e) / (1 - np.conj(e) * zeta)
    # dzeta / (2 pi i) = zeta dtheta / (2 pi)
    integrand = np.asarray(f(zeta), dtype=complex) * zeta / (b * (zeta - z))
    return complex(blaschke_product(cfg.nodes, z) * integrand.mean())


def max_blaschke_modulus(nodes: Sequence[complex], points: Sequence[complex]) -> float:
    """``max |phi_eta(z)|`` over the given nodes and points."""
    return max(abs(blaschke_eval(e, z)) for e in nodes for z in points)


def disc_grid(radius: float, rings: int = 8, per_ring: int = 32) -> list[complex]:
    """Polar grid of the closed disc of the given radius (deterministic, no origin duplicates)."""
    pts = [0j]
    for r in range(1, rings + 1):
        rho = radius * r / rings
        pts.extend(rho * cmath.exp(2j * math.pi * k / per_ring) for k in range(per_ring))
    return pts


def disc_decay(f: Callable, nodes: Sequence[complex], points: Sequence[complex],
               quadrature_points: int = 4096) -> list[float]:
    """``sup |defect|`` over ``points`` using the first ``N`` nodes, for ``N = 1..len(nodes)``."""
    out = []
    for n in range(1, len(nodes) + 1):
        cfg = DiscConfig(tuple(nodes[:n]), quadrature_points)
        out.append(max(abs(disc_defect(cfg, f, z)) for z in points))
    return out
