"""Bivariate truncated Taylor series ``f(z) = sum a[k1,k2] z1^k1 z2^k2``, ``k1+k2 <= D``.

The truncated series is the exact input object of the library: every identity
downstream holds exactly for it.  How well it represents some transcendental
function is the caller's budget, see :func:`coefficient_tail_bound`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .polyjet import Jet, binomial


def _offset(k1: int, k2: int) -> int:
    # total-degree-major triangular layout
    l = k1 + k2
    return l * (l + 1) // 2 + k1


@dataclass(frozen=True, eq=False)
class TaylorSeries2:
    """Dense triangular table of coefficients ``a[k1, k2]`` for ``k1 + k2 <= degree``."""

    degree: int
    _flat: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        flat = np.asarray(self._flat, dtype=complex).copy()
        size = (self.degree + 1) * (self.degree + 2) // 2
        if flat.shape != (size,):
            raise ValueError(f"expected {size} coefficients, got {flat.shape}")
        if not np.all(np.isfinite(flat)):
            raise ValueError("non-finite coefficient")
        flat.setflags(write=False)
        object.__setattr__(self, "_flat", flat)
        # plain-Python mirror for scalar access in inner loops
        object.__setattr__(self, "_py", tuple(complex(x) for x in flat))
        # slice-sum jets keyed by (center, order); they do not depend on z
        object.__setattr__(self, "_slice_cache", {})

    # -- construction -----------------------------------------------------
    @classmethod
    def zeros(cls, degree: int) -> "TaylorSeries2":
        return cls(degree, np.zeros((degree + 1) * (degree + 2) // 2, dtype=complex))

    @classmethod
    def from_dict(cls, degree: int, coeffs: Mapping[tuple[int, int], complex]) -> "TaylorSeries2":
        flat = np.zeros((degree + 1) * (degree + 2) // 2, dtype=complex)
        for (k1, k2), c in coeffs.items():
            if k1 < 0 or k2 < 0:
                raise ValueError(f"negative exponent {(k1, k2)}")
            if k1 + k2 <= degree:
                flat[_offset(k1, k2)] += c
        return cls(degree, flat)

    @classmethod
    def from_monomials(cls, degree: int, terms: Iterable[tuple[int, int, complex]]) -> "TaylorSeries2":
        acc: dict[tuple[int, int], complex] = {}
        for k1, k2, c in terms:
            acc[(k1, k2)] = acc.get((k1, k2), 0) + c
        return cls.from_dict(degree, acc)

    # -- access -------------------------------------------------------------
    def __getitem__(self, idx: tuple[int, int]) -> complex:
        k1, k2 = idx
        if k1 < 0 or k2 < 0 or k1 + k2 > self.degree:
            return 0j
        return self._py[_offset(k1, k2)]

    def items(self):
        """Yield ``((k1, k2), a)`` by ascending total degree."""
        for l in range(self.degree + 1):
            for k1 in range(l + 1):
                yield (k1, l - k1), self._py[_offset(k1, l - k1)]

    def nonzero_items(self):
        return ((k, c) for k, c in self.items() if c != 0)

    def with_degree(self, degree: int) -> "TaylorSeries2":
        return TaylorSeries2.from_dict(degree, dict(self.nonzero_items()))

    # -- algebra ------------------------------------------------------------
    def __add__(self, other: "TaylorSeries2") -> "TaylorSeries2":
        d = max(self.degree, other.degree)
        a, b = self.with_degree(d), other.with_degree(d)
        return TaylorSeries2(d, a._flat + b._flat)

    def __sub__(self, other: "TaylorSeries2") -> "TaylorSeries2":
        return self + other * -1

    def __mul__(self, other: "TaylorSeries2 | complex") -> "TaylorSeries2":
        if not isinstance(other, TaylorSeries2):
            return TaylorSeries2(self.degree, self._flat * other)
        d = max(self.degree, other.degree)
        acc: dict[tuple[int, int], complex] = {}
        for (i1, i2), x in self.nonzero_items():
            for (j1, j2), y in other.nonzero_items():
                if i1 + i2 + j1 + j2 <= d:
                    key = (i1 + j1, i2 + j2)
                    acc[key] = acc.get(key, 0) + x * y
        return TaylorSeries2.from_dict(d, acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TaylorSeries2):
            return NotImplemented
        d = max(self.degree, other.degree)
        return bool(np.array_equal(self.with_degree(d)._flat, other.with_degree(d)._flat))

    def __call__(self, z1: complex, z2: complex) -> complex:
        return eval2(self, (z1, z2))

    # -- JSON -------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [[k1, k2, c.real, c.imag] for (k1, k2), c in self.nonzero_items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "TaylorSeries2":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            degree = int(obj["degree"])
            terms = [(int(k1), int(k2), complex(float(re), float(im)))
                     for k1, k2, re, im in obj.get("coeffs", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed series JSON: {exc}") from exc
        for k1, k2, _ in terms:
            if k1 + k2 > degree:
                raise ValueError(f"coefficient ({k1},{k2}) exceeds degree {degree}")
        return cls.from_monomials(degree, terms)


# ---------------------------------------------------------------------------
# fixtures

def geometric_product(c1: complex, c2: complex, degree: int) -> TaylorSeries2:
    """Truncation of ``1 / ((1 - c1 z1)(1 - c2 z2))``."""
    if abs(c1) >= 1 or abs(c2) >= 1:
        raise ValueError("singularity meets the closed unit ball (need |c1|, |c2| < 1)")
    return TaylorSeries2.from_dict(degree, {
        (k1, l - k1): c1**k1 * c2 ** (l - k1)
        for l in range(degree + 1) for k1 in range(l + 1)})


def geometric_sum(c: complex, degree: int) -> TaylorSeries2:
    """Truncation of ``1 / (1 - c (z1 + z2))``; needs ``|c| sqrt(2) < 1``."""
    if abs(c) * math.sqrt(2) >= 1:
        raise ValueError("singularity meets the closed unit ball (need |c| sqrt(2) < 1)")
    return TaylorSeries2.from_dict(degree, {
        (k1, l - k1): c**l * math.comb(l, k1)
        for l in range(degree + 1) for k1 in range(l + 1)})


FIXTURES = {
    "geometric_product": lambda degree, c1, c2: geometric_product(c1, c2, degree),
    "geometric_sum": lambda degree, c: geometric_sum(c, degree),
}


def _complex_param(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def build_series(spec: Mapping) -> TaylorSeries2:
    """Build a series from a declarative spec.

    Accepted forms::

        {"degree": D, "coeffs": [[k1, k2, re, im], ...]}          # series JSON
        {"monomials": [[k1, k2, c], ...], "degree": D}            # c real or [re, im]
        {"fixture": name, "degree": D, "params": {...}}
        {"sum": [spec, ...]} / {"product": [spec, ...]}
    """
    if "fixture" in spec:
        name = spec["fixture"]
        if name not in FIXTURES:
            raise ValueError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
        params = {k: _complex_param(v) for k, v in spec.get("params", {}).items()}
        try:
            return FIXTURES[name](int(spec["degree"]), **params)
        except TypeError as exc:
            raise ValueError(f"bad parameters for fixture {name!r}: {exc}") from exc
    if "monomials" in spec:
        terms = [(int(k1), int(k2), _complex_param(c)) for k1, k2, c in spec["monomials"]]
        degree = int(spec.get("degree", max((k1 + k2 for k1, k2, _ in terms), default=0)))
        return TaylorSeries2.from_monomials(degree, terms)
    if "sum" in spec or "product" in spec:
        parts = [build_series(s) for s in spec.get("sum", spec.get("product"))]
        if not parts:
            raise ValueError("empty sum/product")
        out = parts[0]
        for p in parts[1:]:
            if "sum" in spec:
                out = out + p
            else:
                # exact polynomial product unless a degree is requested
                out = out.with_degree(out.degree + p.degree) * p
        if "degree" in spec:
            out = out.with_degree(int(spec["degree"]))
        return out
    if "degree" in spec:
        return TaylorSeries2.from_json(spec)
    raise ValueError(f"unrecognised series spec keys: {sorted(spec)}")


# ---------------------------------------------------------------------------
# evaluation and restrictions

def eval2(f: TaylorSeries2, z: tuple[complex, complex], compensated: bool = False) -> complex:
    """Evaluate ``f`` at ``z``, accumulating by ascending total degree."""
    z1, z2 = complex(z[0]), complex(z[1])
    p1 = [1 + 0j]
    p2 = [1 + 0j]
    for _ in range(f.degree):
        p1.append(p1[-1] * z1)
        p2.append(p2[-1] * z2)
    if compensated:
        terms = [c * p1[k1] * p2[k2] for (k1, k2), c in f.items()]
        return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    acc = 0j
    for (k1, k2), c in f.items():
        acc += c * p1[k1] * p2[k2]
    return acc


def slice_sums(f: TaylorSeries2, t: Jet) -> list[Jet]:
    """Entry ``l`` is the jet of ``t -> sum_{k1+k2=l} a[k1,k2] t^k1``.

    Equivalently the ``v^l`` coefficient of ``f(t v, v)``.  Only the center
    and order of ``t`` matter; results are cached on ``f``.
    """
    key = (t.center, t.order)
    hit = f._slice_cache.get(key)
    if hit is not None:
        return hit
    eta, r = t.center, t.order
    epow = [1 + 0j]
    for _ in range(f.degree):
        epow.append(epow[-1] * eta)
    out = []
    for l in range(f.degree + 1):
        # coefficient s: sum_{k1 >= s} C(k1, s) a[k1, l-k1] eta^(k1-s)
        coeffs = []
        for s in range(r + 1):
            acc = 0j
            for k1 in range(s, l + 1):
                c = f._py[_offset(k1, l - k1)]
                if c != 0:
                    acc += binomial(k1, s) * c * epow[k1 - s]
            coeffs.append(acc)
        out.append(Jet(eta, tuple(coeffs)))
    f._slice_cache[key] = out
    return out


def line_restriction_jets(f: TaylorSeries2, eta: complex, s: int) -> list[complex]:
    """Coefficients in ``v`` of ``(1/s!) (d^s f / dz1^s)(eta v, v)``.

    Entry ``l`` is ``sum_{k1+k2 = l+s, k1 >= s} C(k1, s) a[k1,k2] eta^(k1-s)``,
    for ``l = 0..D`` (entries with ``l > D - s`` are zero).
    """
    if s < 0 or s > f.degree:
        raise ValueError(f"derivative order {s} outside 0..{f.degree}")
    eta = complex(eta)
    out = [0j] * (f.degree + 1)
    for l in range(f.degree - s + 1):
        acc = 0j
        for k1 in range(s, l + s + 1):
            c = f[k1, l + s - k1]
            if c != 0:
                acc += binomial(k1, s) * c * eta ** (k1 - s)
        out[l] = acc
    return out


def axis_coefficients(f: TaylorSeries2, axis: str, u: int) -> list[complex]:
    """Row ``a[u, .]`` for ``axis="z1=0"``, column ``a[., u]`` for ``axis="z2=0"``."""
    if u < 0 or u > f.degree:
        raise ValueError(f"order {u} outside 0..{f.degree}")
    if axis == "z1=0":
        return [f[u, k] for k in range(f.degree + 1)]
    if axis == "z2=0":
        return [f[k, u] for k in range(f.degree + 1)]
    raise ValueError(f"axis must be 'z1=0' or 'z2=0', got {axis!r}")


def coefficient_tail_bound(m: float, x: float, n: int) -> float:
    """Closed form of ``m * sum_{l >= n} (l + 1) x^l``."""
    if not 0 <= x < 1:
        raise ValueError("need 0 <= x < 1")
    return m * x**n * ((n + 1) - n * x) / (1 - x) ** 2


def cauchy_coefficient_bound(sup: float, r1: float, r2: float, k1: int, k2: int) -> float:
    """Cauchy estimate ``|a[k1,k2]| <= sup / (r1^k1 r2^k2)`` on the closed bidisc of radii ``(r1, r2)``."""
    return sup / (r1**k1 * r2**k2)
