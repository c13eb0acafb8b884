"""Univariate complex polynomials, jets and multiplicity-aware Lagrange interpolation.

A :class:`Jet` is a truncated Taylor expansion around a fixed center, stored
Taylor-normalized: ``coeffs[s] = h^{(s)}(center) / s!``.  With that storage the
derivative evaluations in the Hermite-Lagrange operator reduce to reading one
coefficient of a jet quotient, so no factorials appear at assembly time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

_INT64_MAX = 2**63 - 1


def _check_finite(values: Iterable[complex]) -> None:
    for v in values:
        if not cmath.isfinite(v):
            raise ValueError(f"non-finite value {v!r}")


class NodeCollisionError(ValueError):
    """Two interpolation nodes coincide (or a jet reciprocal hits a zero)."""


# ---------------------------------------------------------------------------
# Poly

@dataclass(frozen=True)
class Poly:
    """Polynomial with ascending complex coefficients.

    The representation is canonical: trailing coefficients that are exactly
    zero are dropped, so the zero polynomial has ``coeffs == ()``.  Nothing is
    trimmed by tolerance.
    """

    coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        c = [complex(x) for x in self.coeffs]
        _check_finite(c)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, k: int, coeff: complex = 1.0) -> "Poly":
        return cls((0,) * k + (coeff,))

    @classmethod
    def from_roots(cls, roots: Iterable[complex]) -> "Poly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-x for x in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly | complex") -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0j] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(tuple(out))

    __rmul__ = __mul__

    def scale(self, s: complex) -> "Poly":
        return Poly(tuple(s * x for x in self.coeffs))

    def __call__(self, x: complex) -> complex:
        return self.eval(x)

    def eval(self, x: complex) -> complex:
        """Horner evaluation."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        return poly_divmod(self, other)

    def taylor_at(self, center: complex, order: int) -> "Jet":
        return Jet.of_poly(self, center, order)


def poly_divmod(p: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Euclidean division ``p = g*q + r`` with ``deg r < deg g``.

    Raises
    ------
    ZeroDivisionError
        If ``g`` is the zero polynomial.
    """
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p.coeffs)
    dg = g.degree
    lead = g.coeffs[-1]
    if len(rem) <= dg:
        return Poly(), p
    quo = [0j] * (len(rem) - dg)
    for i in range(len(rem) - 1, dg - 1, -1):
        c = rem[i] / lead
        quo[i - dg] = c
        if c == 0:
            continue
        for j, gc in enumerate(g.coeffs):
            rem[i - dg + j] -= c * gc
    # the top of rem is cancelled by construction; keep it exactly zero
    return Poly(tuple(quo)), Poly(tuple(rem[:dg]))


# ---------------------------------------------------------------------------
# Jet

@dataclass(frozen=True)
class Jet:
    """Truncated Taylor expansion ``sum_s coeffs[s] (t - center)^s``.

    Arithmetic between jets requires equal centers and equal orders.
    """

    center: complex
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        c = tuple(complex(x) for x in self.coeffs)
        if not c:
            raise ValueError("a jet needs at least one coefficient")
        _check_finite(c + (complex(self.center),))
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "center", complex(self.center))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: complex, center: complex, order: int) -> "Jet":
        return cls(center, (value,) + (0j,) * order)

    @classmethod
    def variable(cls, center: complex, order: int) -> "Jet":
        """The jet of ``t`` itself."""
        return cls(center, ((center, 1.0) + (0.0,) * order)[: order + 1])

    @classmethod
    def of_poly(cls, p: Poly, center: complex, order: int) -> "Jet":
        """Re-expand ``p`` around ``center`` and truncate at ``order``."""
        out = [0j] * (order + 1)
        d = p
        fact = 1
        for s in range(order + 1):
            out[s] = d.eval(center) / fact
            d = d.derivative()
            fact *= s + 1
            if d.is_zero():
                break
        return cls(center, tuple(out))

    def _check(self, other: "Jet") -> None:
        if other.center != self.center or len(other.coeffs) != len(self.coeffs):
            raise ValueError("jet arithmetic needs equal centers and orders")

    def __add__(self, other: "Jet | complex") -> "Jet":
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.center, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))
        return Jet(self.center, (self.coeffs[0] + other,) + self.coeffs[1:])

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.center, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "Jet | complex") -> "Jet":
        return self + (-other)

    def __rsub__(self, other: complex) -> "Jet":
        return (-self) + other

    def __mul__(self, other: "Jet | complex") -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.center, tuple(other * a for a in self.coeffs))
        self._check(other)
        a, b = self.coeffs, other.coeffs
        return Jet(self.center, tuple(
            sum(a[i] * b[s - i] for i in range(s + 1)) for s in range(len(a))))

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.coeffs
        if a[0] == 0:
            raise NodeCollisionError(
                f"reciprocal of a jet vanishing at its center {self.center!r}")
        inv0 = 1 / a[0]
        r = [inv0]
        for s in range(1, len(a)):
            r.append(-inv0 * sum(a[i] * r[s - i] for i in range(1, s + 1)))
        return Jet(self.center, tuple(r))

    def __truediv__(self, other: "Jet | complex") -> "Jet":
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1 / other)

    def __rtruediv__(self, other: complex) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, k: int) -> "Jet":
        if k < 0:
            return self.reciprocal() ** (-k)
        result = Jet.constant(1.0, self.center, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot raise the order of a jet")
        return Jet(self.center, self.coeffs[: order + 1])

    @property
    def value(self) -> complex:
        return self.coeffs[0]


def powers(j: Jet, kmax: int) -> list[Jet]:
    """``[j**0, j**1, ..., j**kmax]`` by repeated multiplication."""
    out = [Jet.constant(1.0, j.center, j.order)]
    for _ in range(kmax):
        out.append(out[-1] * j)
    return out


# ---------------------------------------------------------------------------
# Nodes and the Hermite-Lagrange operator

def coincident(a: complex, b: complex, scale: float) -> bool:
    return abs(a - b) < 1e-12 * (1 + scale)


@dataclass(frozen=True)
class NodeSet:
    """Distinct nodes ``eta`` with nonnegative multiplicities."""

    nodes: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        nodes = tuple((complex(e), int(m)) for e, m in self.nodes)
        _check_finite(e for e, _ in nodes)
        if any(m < 0 for _, m in nodes):
            raise ValueError("multiplicities must be nonnegative")
        scale = max((abs(e) for e, _ in nodes), default=0.0)
        for i in range(len(nodes)):
            for j in range(i):
                if coincident(nodes[i][0], nodes[j][0], scale):
                    raise NodeCollisionError(
                        f"nodes {nodes[j][0]!r} and {nodes[i][0]!r} coincide")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def of(cls, *pairs: tuple[complex, int]) -> "NodeSet":
        return cls(tuple(pairs))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.nodes)

    @property
    def etas(self) -> list[complex]:
        return [e for e, _ in self.nodes]

    def node_poly(self) -> Poly:
        """``prod_j (X - eta_j)^{m_j}``."""
        p = Poly((1,))
        for e, m in self.nodes:
            for _ in range(m):
                p = p * Poly((-e, 1))
        return p

    def cofactor_jet(self, p: int, order: int) -> Jet:
        """Jet at ``eta_p`` of ``1 / prod_{j != p} (t - eta_j)^{m_j}``."""
        eta = self.nodes[p][0]
        t = Jet.variable(eta, order)
        den = Jet.constant(1.0, eta, order)
        for j, (e, m) in enumerate(self.nodes):
            if j != p and m:
                den = den * (t - e) ** m
        return den.reciprocal()


def multiset_count(m: int, q: int) -> int:
    """Number of ``(v_1..v_m)`` in N^m summing to ``q``, i.e. C(q+m-1, m-1)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if q < 0:
        return 0
    # multiplicative binomial; each partial product is itself a binomial
    c = 1
    for i in range(1, m):
        c = c * (q + i) // i
        if c > _INT64_MAX:
            raise OverflowError(f"multiset_count({m}, {q}) exceeds int64")
    return c


def quotient_power(k: int, nodes: NodeSet) -> Poly:
    """Quotient of ``X^k`` by ``prod (X - eta_j)^{m_j}`` in closed form.

    Coefficient of ``X^{k-N-u}`` is the sum over ``v_1+...+v_n = u`` of
    ``prod_j C(v_j+m_j-1, v_j) eta_j^{v_j}``; the multi-index sum is
    accumulated node by node as a Cauchy product.
    """
    n_total = nodes.total
    if k < n_total:
        return Poly()
    umax = k - n_total
    h = [1 + 0j] + [0j] * umax
    for eta, m in nodes.nodes:
        if m == 0:
            continue
        w = [multiset_count(m, v) * eta**v for v in range(umax + 1)]
        h = [sum(h[i] * w[u - i] for i in range(u + 1)) for u in range(umax + 1)]
    # h[u] multiplies X^{umax-u}
    return Poly(tuple(reversed(h)))


def _active(nodes: NodeSet, jets: Sequence[Optional[Jet]]):
    if len(jets) != len(nodes.nodes):
        raise ValueError("one jet per node is required")
    for p, ((eta, m), jet) in enumerate(zip(nodes.nodes, jets)):
        if m == 0:
            continue
        if jet is None or jet.order != m - 1 or jet.center != eta:
            raise ValueError(f"node {p} needs a jet of order {m - 1} at {eta!r}")
        yield p, eta, m, jet


def residue_sum(nodes: NodeSet, jets: Sequence[Optional[Jet]]) -> complex:
    """``sum_p [h / prod_{j!=p}(t-eta_j)^{m_j}]_{m_p-1}`` at each ``eta_p``.

    This is the Hermite-Lagrange operator without its node-polynomial factor.
    """
    total = 0j
    for p, _, m, jet in _active(nodes, jets):
        total += (jet * nodes.cofactor_jet(p, m - 1)).coeffs[m - 1]
    return total


def hermite_L(nodes: NodeSet, jets: Sequence[Optional[Jet]], x: complex) -> complex:
    """Hermite-Lagrange operator applied to ``h``, evaluated at ``x``.

    Parameters
    ----------
    nodes : NodeSet
        Nodes and multiplicities.
    jets : sequence of Jet or None
        For a node with ``m_p >= 1``, the jet of ``t -> h(t, eta_p)`` at
        ``eta_p`` of order exactly ``m_p - 1``.  Entries for ``m_p = 0`` are
        ignored.
    x : complex
        Evaluation point.

    Returns
    -------
    complex
        ``prod_j (x-eta_j)^{m_j} * residue_sum``; zero when every
        multiplicity vanishes.
    """
    if nodes.total == 0:
        return 0j
    return nodes.node_poly().eval(x) * residue_sum(nodes, jets)


def hermite_polynomial(nodes: NodeSet, f_jets: Sequence[Optional[Jet]]) -> Poly:
    """Hermite interpolation polynomial of degree <= N-1 matching the jets.

    The coefficients solve the confluent Vandermonde system (row ``(p, s)``
    holds the ``s``-th Taylor coefficient of ``X^k`` at ``eta_p``) with a
    pivoted LU solve.  This is the same polynomial as ``hermite_L`` applied
    to ``f(t)/(X-t)``, but far better conditioned than expanding the cofactor
    form and more robust than a Newton expansion when nodes sit far from 0.
    """
    active = list(_active(nodes, f_jets))
    n = nodes.total
    if n == 0:
        return Poly()
    a = np.zeros((n, n), dtype=complex)
    b = np.zeros(n, dtype=complex)
    row = 0
    for _, eta, m, jet in active:
        for s in range(m):
            a[row, s:] = [math.comb(k, s) * eta ** (k - s) for k in range(s, n)]
            b[row] = jet.coeffs[s]
            row += 1
    return Poly(tuple(complex(c) for c in np.linalg.solve(a, b)))


def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0
