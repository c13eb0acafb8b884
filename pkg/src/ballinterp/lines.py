"""The configuration of interpolation lines through the origin.

The divisor is ``g(z) = z1^m1 * prod_p (z1 - eta_p z2)^{m_p} * z2^mn``.  The
axis ``{z1 = 0}`` (eta = 0) and the axis ``{z2 = 0}`` (eta = infinity) are
carried only by the multiplicities ``m1`` and ``mn``; the middle slopes are
nonzero finite complex numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .polyjet import coincident


class ConfigError(ValueError):
    """Invalid line configuration."""


class DomainError(ValueError):
    """Point outside the guarded domain (on or too close to a line, or outside the ball)."""


@dataclass(frozen=True)
class DomainGuard:
    delta: float = 1e-6

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigError("guard delta must be positive")


@dataclass(frozen=True)
class LineConfig:
    """Canonical line configuration; build it with :func:`validate_config`."""

    m1: int
    middle: tuple[tuple[complex, int], ...]
    mn: int

    @property
    def etas(self) -> list[complex]:
        return [e for e, _ in self.middle]

    @property
    def mults(self) -> list[int]:
        """Middle multiplicities ``m_2 .. m_{n-1}``."""
        return [m for _, m in self.middle]

    @property
    def n(self) -> int:
        """Number of lines counting both axes."""
        return len(self.middle) + 2

    @property
    def N(self) -> int:
        return self.m1 + sum(self.mults) + self.mn

    def multiplicities(self) -> list[int]:
        """``[m_1, m_2, ..., m_n]`` indexed from line 1."""
        return [self.m1, *self.mults, self.mn]

    @property
    def has_middle(self) -> bool:
        return any(m > 0 for m in self.mults)

    def to_json(self) -> dict:
        return {
            "m1": self.m1,
            "middle": [{"eta": [e.real, e.imag], "m": m} for e, m in self.middle],
            "mn": self.mn,
        }


def validate_config(m1: int, middle: Sequence[tuple[complex, int]], mn: int) -> LineConfig:
    """Canonicalize a raw configuration.

    Middle lines are sorted by nondecreasing ``|eta|`` (stable, so equal moduli
    keep their input order).  Duplicate or zero slopes are rejected.
    """
    if int(m1) != m1 or int(mn) != mn or m1 < 0 or mn < 0:
        raise ConfigError("axis multiplicities must be nonnegative integers")
    mid = []
    for eta, m in middle:
        eta = complex(eta)
        if not math.isfinite(eta.real) or not math.isfinite(eta.imag):
            raise ConfigError(f"non-finite slope {eta!r}")
        if int(m) != m or m < 0:
            raise ConfigError(f"multiplicity {m!r} must be a nonnegative integer")
        mid.append((eta, int(m)))
    scale = max((abs(e) for e, _ in mid), default=0.0)
    for i, (e, _) in enumerate(mid):
        if coincident(e, 0, scale):
            raise ConfigError("slope 0 is the axis z1=0; use m1 instead")
        for f, _ in mid[:i]:
            if coincident(e, f, scale):
                raise ConfigError(f"duplicate slope {e!r}")
    mid.sort(key=lambda em: abs(em[0]))
    return LineConfig(int(m1), tuple(mid), int(mn))


def config_from_json(obj: Mapping | str) -> tuple[LineConfig, DomainGuard]:
    """Parse ``{"m1": .., "middle": [{"eta": [re, im], "m": ..}], "mn": .., "delta": ..}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        middle = []
        for entry in obj.get("middle", []):
            eta = entry["eta"]
            if isinstance(eta, (list, tuple)):
                eta = complex(float(eta[0]), float(eta[1]))
            else:
                eta = complex(float(eta))
            middle.append((eta, entry["m"]))
        cfg = validate_config(obj.get("m1", 0), middle, obj.get("mn", 0))
        guard = DomainGuard(float(obj["delta"])) if "delta" in obj else DomainGuard()
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(f"malformed config JSON: {exc}") from exc
    return cfg, guard


def capital_n_u(cfg: LineConfig, p: int, u: int) -> int:
    """``u + m_{p+1} + ... + m_n`` with lines indexed ``1..n``."""
    ms = cfg.multiplicities()
    if not 1 <= p <= len(ms):
        raise ConfigError(f"line index {p} outside 1..{len(ms)}")
    if not 0 <= u < ms[p - 1]:
        raise ConfigError(f"u={u} must satisfy 0 <= u < m_{p} = {ms[p - 1]}")
    return u + sum(ms[p:])


def alpha(eta: complex) -> float:
    """Modulus of ``z1`` where the line ``z1 = eta z2`` meets the unit sphere."""
    a = abs(eta)
    return a / math.sqrt(1 + a * a)


def g_eval(cfg: LineConfig, z: tuple[complex, complex]) -> complex:
    z1, z2 = z
    out = z1**cfg.m1 * z2**cfg.mn
    for e, m in cfg.middle:
        out *= (z1 - e * z2) ** m
    return complex(out)


def hefer_pn(cfg: LineConfig, zeta: tuple[complex, complex],
             z: tuple[complex, complex]) -> tuple[complex, complex]:
    """Holomorphic ``(P1, P2)`` with ``g(zeta) - g(z) = P1 (zeta1 - z1) + P2 (zeta2 - z2)``.

    Obtained by telescoping the ordered factor product: ``m1`` copies of
    ``z1``, then each middle factor, then ``mn`` copies of ``z2``; factors
    before the current one are taken at ``zeta``, factors after it at ``z``.
    """
    w1, w2 = zeta
    z1, z2 = z
    lin_z = [z1 - e * z2 for e in cfg.etas]
    lin_w = [w1 - e * w2 for e in cfg.etas]
    ms = cfg.mults

    # tail_z[p] = prod_{j >= p} lin_z[j]^m_j * z2^mn
    tail_z = [0j] * (len(ms) + 1)
    tail_z[-1] = z2**cfg.mn
    for p in range(len(ms) - 1, -1, -1):
        tail_z[p] = tail_z[p + 1] * lin_z[p] ** ms[p]

    p1 = sum(w1 ** (cfg.m1 - 1 - u) * z1**u for u in range(cfg.m1)) * tail_z[0]
    p2 = 0j
    head_w = w1**cfg.m1
    for p, (eta, m) in enumerate(cfg.middle):
        s = sum(lin_w[p] ** (m - 1 - u) * lin_z[p] ** u for u in range(m))
        term = head_w * s * tail_z[p + 1]
        p1 += term
        p2 -= eta * term
        head_w *= lin_w[p] ** m
    p2 += head_w * sum(w2 ** (cfg.mn - 1 - u) * z2**u for u in range(cfg.mn))
    return complex(p1), complex(p2)


def in_domain(cfg: LineConfig, guard: DomainGuard, z: tuple[complex, complex]) -> bool:
    """Inside the open ball and at relative distance ``delta`` from the excluded lines."""
    z1, z2 = z
    norm = math.hypot(abs(z1), abs(z2))
    if not norm < 1:
        return False
    tol = guard.delta * (1 + norm)
    if abs(z2) < tol:
        return False
    if cfg.m1 > 0 and abs(z1) < tol:
        return False
    return all(abs(z1 - e * z2) >= tol for e in cfg.etas)


def off_middle_lines(cfg: LineConfig, guard: DomainGuard, z: tuple[complex, complex]) -> bool:
    """Only the middle-line part of :func:`in_domain` (plus the ball)."""
    z1, z2 = z
    norm = math.hypot(abs(z1), abs(z2))
    if not norm < 1:
        return False
    tol = guard.delta * (1 + norm)
    return all(abs(z1 - e * z2) >= tol for e in cfg.etas)
