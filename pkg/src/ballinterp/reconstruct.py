"""Reconstruction of ``f`` from its jets on the configured lines.

``f = G(f) + tail`` where ``tail`` collects the Taylor terms with
``k1 + k2 >= N``, ``k1 >= m1`` and ``k2 >= mn``.

``G`` is evaluated with polynomial z-prefactors throughout (no ``z1/z2``
arguments), so the only singular sets are the configured lines themselves.
Every t-derivative is a jet coefficient at a node; jets of the inner series
are assembled from slice sums ``S_l(t) = sum_{k1+k2=l} a[k1,k2] t^k1``, which
on the line-data path are read off the restrictions of ``f`` and its
``z1``-derivatives to the middle lines.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

from .lines import (ConfigError, DomainError, DomainGuard, LineConfig, in_domain,
                    off_middle_lines, validate_config)
from .polyjet import Jet, powers
from .series2d import (TaylorSeries2, axis_coefficients, eval2, line_restriction_jets,
                       slice_sums)


class ReconstructionMode(enum.Enum):
    COEFFICIENT = "coefficient"
    LINE_DATA = "line-data"


@dataclass(frozen=True)
class LineData:
    """Restriction data of ``f`` to the divisor of a configuration.

    Attributes
    ----------
    cfg : LineConfig
        The configuration the data was taken on.
    degree : int
        Truncation degree ``D`` of the underlying series.
    middle : tuple
        ``middle[p][s][l]`` is the ``v^l`` coefficient of
        ``(1/s!) (d^s f/dz1^s)(eta_p v, v)`` for ``s < m_p``.
    rows : tuple
        ``rows[u][k2] = a[u, k2]`` for ``u < m1`` (data on ``z1 = 0``).
    columns : tuple
        ``columns[u][k1] = a[k1, u]`` for ``u < mn`` (data on ``z2 = 0``).
    """

    cfg: LineConfig
    degree: int
    middle: tuple[tuple[tuple[complex, ...], ...], ...]
    rows: tuple[tuple[complex, ...], ...]
    columns: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        d = self.degree
        if len(self.middle) != len(self.cfg.middle):
            raise ValueError("one entry per middle line is required")
        for (_, m), per_s in zip(self.cfg.middle, self.middle):
            if len(per_s) != m or any(len(a) != d + 1 for a in per_s):
                raise ValueError("middle-line arrays inconsistent with cfg/degree")
        if len(self.rows) != self.cfg.m1 or any(len(r) != d + 1 for r in self.rows):
            raise ValueError("axis rows inconsistent with m1/degree")
        if len(self.columns) != self.cfg.mn or any(len(c) != d + 1 for c in self.columns):
            raise ValueError("axis columns inconsistent with mn/degree")

    # the source interface shared with _CoefficientSource
    def slices(self, t: Jet) -> list[Jet]:
        for (eta, m), per_s in zip(self.cfg.middle, self.middle):
            if eta == t.center:
                if t.order > m - 1:
                    raise ValueError(
                        f"line data at {eta!r} only carries derivatives up to order {m - 1}")
                # d^s/ds of S_l at eta, normalized, sits at index l - s of line s
                out = []
                for l in range(self.degree + 1):
                    out.append(Jet(eta, tuple(per_s[s][l - s] if l >= s else 0j
                                              for s in range(t.order + 1))))
                return out
        raise ValueError(f"no line data at slope {t.center!r}")

    def row(self, u: int) -> Sequence[complex]:
        if not 0 <= u < len(self.rows):
            raise ValueError(f"row {u} is not part of the data on z1=0")
        return self.rows[u]

    def column(self, u: int) -> Sequence[complex]:
        if not 0 <= u < len(self.columns):
            raise ValueError(f"column {u} is not part of the data on z2=0")
        return self.columns[u]


class _CoefficientSource:
    def __init__(self, f: TaylorSeries2):
        self.f = f
        self.degree = f.degree

    def slices(self, t: Jet) -> list[Jet]:
        return slice_sums(self.f, t)

    def row(self, u: int) -> Sequence[complex]:
        return [self.f[u, k] for k in range(self.degree + 1)]

    def column(self, u: int) -> Sequence[complex]:
        return [self.f[k, u] for k in range(self.degree + 1)]


Source = Union[TaylorSeries2, LineData]


def _source(f: Source):
    if isinstance(f, TaylorSeries2):
        return _CoefficientSource(f)
    if isinstance(f, LineData):
        return f
    raise TypeError(f"expected TaylorSeries2 or LineData, got {type(f).__name__}")


def extract_line_data(f: TaylorSeries2, cfg: LineConfig) -> LineData:
    d = f.degree
    middle = tuple(
        tuple(tuple(line_restriction_jets(f, eta, s)) if s <= d else (0j,) * (d + 1)
              for s in range(m))
        for eta, m in cfg.middle)
    rows = tuple(tuple(axis_coefficients(f, "z1=0", u)) if u <= d else (0j,) * (d + 1)
                 for u in range(cfg.m1))
    cols = tuple(tuple(axis_coefficients(f, "z2=0", u)) if u <= d else (0j,) * (d + 1)
                 for u in range(cfg.mn))
    return LineData(cfg, d, middle, rows, cols)


# ---------------------------------------------------------------------------
# inner series as jets in t

class _NodeContext:
    """Jets in ``t`` of the inner series for one jet variable ``t`` and weight ``w``.

    All methods return the series without their z-monomial prefactors.
    """

    def __init__(self, src, z: tuple[complex, complex], t: Jet, w: complex):
        self.src = src
        self.z1, self.z2 = complex(z[0]), complex(z[1])
        self.t = t
        self.w2 = abs(w) ** 2
        self.degree = src.degree
        self._slices = None
        self._bpow = None
        self._tinv = None

    def _zero(self) -> Jet:
        return Jet.constant(0.0, self.t.center, self.t.order)

    @property
    def tinv(self) -> Jet:
        if self._tinv is None:
            if self.t.center == 0:
                raise ValueError("inner series need a jet centered away from t = 0")
            self._tinv = self.t.reciprocal()
        return self._tinv

    @property
    def slices(self) -> list[Jet]:
        if self._slices is None:
            self._slices = self.src.slices(self.t)
        return self._slices

    @property
    def bpow(self) -> list[Jet]:
        # B(t) = (z2 + |w|^2 z1 / t) / (1 + |w|^2)
        if self._bpow is None:
            b = (self.tinv * (self.w2 * self.z1) + self.z2) * (1 / (1 + self.w2))
            self._bpow = powers(b, self.degree + 1)
        return self._bpow

    def _weighted(self, thr: int, shift: int) -> Jet:
        acc = self._zero()
        s, bp = self.slices, self.bpow
        for l in range(max(thr, 0), self.degree + 1):
            acc = acc + s[l] * bp[l - thr + shift]
        return acc

    def inner0(self, thr: int, p_eta: complex) -> Jet:
        """``(1 + |w|^2 p_eta/t)/(1+|w|^2) * sum_{l>=thr} S_l B^{l-thr}``."""
        acc = self._weighted(thr, 0)
        if acc.coeffs == self._zero().coeffs:
            return acc
        pref = (self.tinv * (self.w2 * p_eta) + 1) * (1 / (1 + self.w2))
        return pref * acc

    def inner0_top(self, n_total: int, m1: int) -> Jet:
        """``t^{-m1} sum_{l>=N} S_l B^{l-N+1}``."""
        acc = self._weighted(n_total, 1)
        return acc * self.tinv**m1 if m1 else acc

    def inner1(self, u1: int, thr: int) -> Jet:
        """``sum_{k1<=u1, k2>=thr-k1} a t^k1 z2^{k1+k2-thr}``."""
        acc = self._zero()
        tp = None
        for k1 in range(u1 + 1):
            row = self.src.row(k1)
            c = 0j
            for k2 in range(max(thr - k1, 0), self.degree - k1 + 1):
                if row[k2] != 0:
                    c += row[k2] * self.z2 ** (k1 + k2 - thr)
            if c != 0:
                tp = tp or powers(self.t, u1)
                acc = acc + tp[k1] * c
        return acc

    def inner1_top(self, m1: int, n_total: int) -> Jet:
        """``sum_{k1<=m1-1, k2>=N-k1} a t^{k1-m1} z2^{k1+k2-N+1}``."""
        acc = self._zero()
        for k1 in range(m1):
            row = self.src.row(k1)
            c = 0j
            for k2 in range(max(n_total - k1, 0), self.degree - k1 + 1):
                if row[k2] != 0:
                    c += row[k2] * self.z2 ** (k1 + k2 - n_total + 1)
            if c != 0:
                acc = acc + self.tinv ** (m1 - k1) * c
        return acc

    def inner2(self, p_eta: complex, thr: int, mn: int) -> Jet:
        """``p_eta * sum_{k2<=mn-1, k1>=thr-k2} a t^{thr-1-k2} z1^{k1+k2-thr}``."""
        acc = self._zero()
        for k2 in range(mn):
            col = self.src.column(k2)
            c = 0j
            for k1 in range(max(thr - k2, 0), self.degree - k2 + 1):
                if col[k1] != 0:
                    c += col[k1] * self.z1 ** (k1 + k2 - thr)
            if c != 0:
                acc = acc + self._tpow(thr - 1 - k2) * (p_eta * c)
        return acc

    def inner2_top(self, n_total: int, m1: int, mn: int) -> Jet:
        """``sum_{k2<=mn-1, k1>=N-k2} a t^{N-m1-1-k2} z1^{k1+k2-N+1}``."""
        acc = self._zero()
        for k2 in range(mn):
            col = self.src.column(k2)
            c = 0j
            for k1 in range(max(n_total - k2, 0), self.degree - k2 + 1):
                if col[k1] != 0:
                    c += col[k1] * self.z1 ** (k1 + k2 - n_total + 1)
            if c != 0:
                acc = acc + self._tpow(n_total - m1 - 1 - k2) * c
        return acc

    def _tpow(self, k: int) -> Jet:
        return self.t**k if k >= 0 else self.tinv ** (-k)


# ---------------------------------------------------------------------------
# R^0, R^1, R^2 with their z-monomial factors

def _check_variant(variant: str) -> None:
    if variant not in ("indexed", "top-N"):
        raise ValueError(f"variant must be 'indexed' or 'top-N', got {variant!r}")


def r0_series(f: Source, z: tuple[complex, complex], t: Jet, w: complex,
              p_eta: complex, threshold: int, variant: str = "indexed", m1: int = 0) -> Jet:
    """Jet in ``t`` of the weighted residual series.

    ``indexed``: ``(1+|w|^2 p_eta/t)/(1+|w|^2) * sum_{l>=thr} S_l(t) B^{l-thr} * z2^thr``
    where ``B(t) = (z2 + |w|^2 z1/t)/(1+|w|^2)``; use ``p_eta = 0`` for the
    ``z1 = 0`` group.

    ``top-N``: ``(z1/z2)^m1 * sum_{l>=thr} S_l(t) t^{-m1} B^{l-thr+1} * z2^{thr-1}``.
    """
    _check_variant(variant)
    if t.center == 0:
        raise ValueError("r0_series needs a jet centered away from t = 0")
    ctx = _NodeContext(_source(f), z, t, w)
    z1, z2 = complex(z[0]), complex(z[1])
    if variant == "indexed":
        return ctx.inner0(threshold, p_eta) * z2**threshold
    return ctx.inner0_top(threshold, m1) * ((z1 / z2) ** m1 * z2 ** (threshold - 1))


def r1_series(f: Source, z: tuple[complex, complex], t: Jet, u1: int, threshold: int,
              variant: str = "indexed", m1: int = 0) -> Jet:
    """``indexed``: ``sum_{k1<=u1, k2>=thr-k1} a t^k1 z2^{k1+k2}``.

    ``top-N``: ``(z1/z2)^m1 sum_{k1<=m1-1, k2>=thr-k1} a t^{k1-m1} z2^{k1+k2}``.
    """
    _check_variant(variant)
    z1, z2 = complex(z[0]), complex(z[1])
    if variant == "indexed":
        ctx = _NodeContext(_source(f), z, t, 0)
        return ctx.inner1(u1, threshold) * z2**threshold
    if m1 and t.center == 0:
        raise ValueError("top-N R1 has negative powers of t; center must be nonzero")
    ctx = _NodeContext(_source(f), z, t, 0)
    return ctx.inner1_top(m1, threshold) * ((z1 / z2) ** m1 * z2 ** (threshold - 1))


def r2_series(f: Source, z: tuple[complex, complex], t: Jet, eta_p: complex, threshold: int,
              mn: int, variant: str = "indexed", m1: int = 0) -> Jet:
    """``indexed``: ``eta_p sum_{k2<=mn-1, k1>=thr-k2} a t^{thr-1-k2} z1^{k1+k2-thr} z2^thr``.

    ``top-N``: ``(z1/z2)^m1 sum_{k2<=mn-1, k1>=thr-k2} a t^{thr-m1-1-k2} z1^{k1+k2-thr+1} z2^{thr-1}``.
    """
    _check_variant(variant)
    z1, z2 = complex(z[0]), complex(z[1])
    ctx = _NodeContext(_source(f), z, t, 0)
    if variant == "indexed":
        return ctx.inner2(eta_p, threshold, mn) * z2**threshold
    return ctx.inner2_top(threshold, m1, mn) * ((z1 / z2) ** m1 * z2 ** (threshold - 1))


# ---------------------------------------------------------------------------
# G

def _cofactor(t: Jet, others: Sequence[tuple[complex, int]]) -> Jet:
    """Jet of ``1 / prod (t - eta_j)^{o_j}`` over ``others``."""
    den = Jet.constant(1.0, t.center, t.order)
    for eta, o in others:
        if o:
            den = den * (t - eta) ** o
    return den.reciprocal()


def _check_source_cfg(f: Source, cfg: LineConfig) -> None:
    if isinstance(f, LineData) and f.cfg != cfg:
        raise ConfigError("line data was extracted for a different configuration")


def _resolve(f: Source, cfg: LineConfig, mode: ReconstructionMode | None) -> Source:
    if mode is ReconstructionMode.LINE_DATA and isinstance(f, TaylorSeries2):
        return extract_line_data(f, cfg)
    if mode is ReconstructionMode.COEFFICIENT and isinstance(f, LineData):
        raise ValueError("the coefficient path needs a TaylorSeries2")
    _check_source_cfg(f, cfg)
    return f


def g_general(f: Source, cfg: LineConfig, z: tuple[complex, complex],
              guard: DomainGuard = DomainGuard(),
              mode: ReconstructionMode | None = None) -> complex:
    """Evaluate the reconstruction ``G(f)`` at ``z``.

    Parameters
    ----------
    f : TaylorSeries2 or LineData
        A series selects the coefficient path, line data the line-data
        path; ``mode`` can force line-data extraction from a series.
    cfg : LineConfig
    z : (complex, complex)
        Must pass :func:`in_domain`.
    guard : DomainGuard

    Raises
    ------
    DomainError
        If ``z`` is outside the guarded domain.
    """
    if not in_domain(cfg, guard, z):
        raise DomainError(f"point {z!r} is outside the guarded domain")
    f = _resolve(f, cfg, mode)
    if not cfg.has_middle:
        return g_axes_only(f, cfg.m1, cfg.mn, z)
    src = _source(f)
    z1, z2 = complex(z[0]), complex(z[1])
    m1, mn, n_total = cfg.m1, cfg.mn, cfg.N
    mid = cfg.middle
    lin = [z1 - e * z2 for e, _ in mid]

    # after[p] = prod_{j>p} lin_j^{m_j} * z2^mn ; after[-1] spans all middle lines
    after = [0j] * (len(mid) + 1)
    after[len(mid)] = z2**mn
    for p in range(len(mid) - 1, -1, -1):
        after[p] = after[p + 1] * lin[p] ** mid[p][1]
    all_mid = after[0]

    ctx = {q: _NodeContext(src, z, Jet.variable(eta, m - 1), eta)
           for q, (eta, m) in enumerate(mid) if m > 0}
    cof_full = {q: _cofactor(ctx[q].t, [mid[j] for j in range(len(mid)) if j != q])
                for q in ctx}

    total = 0j

    # z1-axis groups, u1 = 0..m1-1
    for u1 in range(m1):
        thr = u1 + n_total - m1
        acc = 0j
        for q, c in ctx.items():
            h = c.inner0(thr, 0) - c.inner1(u1, thr)
            jet = h * c.tinv ** (u1 + 1) * cof_full[q]
            acc += jet.coeffs[-1]
        total += z1**u1 * all_mid * acc

    # middle-line groups (p, u_p)
    for p, (eta_p, m_p) in enumerate(mid):
        for u in range(m_p):
            thr = u + sum(m for _, m in mid[p + 1:]) + mn
            nodes = [(p, u + 1)] + [(q, mid[q][1]) for q in range(p + 1, len(mid))
                                    if mid[q][1] > 0]
            acc = 0j
            for q, order in nodes:
                c = ctx[q]
                h = (c.inner0(thr, eta_p) - c.inner2(eta_p, thr, mn)).truncate(order - 1)
                t = c.t.truncate(order - 1)
                others = [(mid[j][0], o) for j, o in nodes if j != q]
                acc += (h * _cofactor(t, others)).coeffs[-1]
            total += lin[p] ** u * after[p + 1] * acc

    # z2-axis partial Taylor sum
    for u in range(mn):
        col = src.column(u)
        total += z2**u * sum(col[k1] * z1**k1 for k1 in range(src.degree + 1 - u))

    # top-N groups
    head = z1**m1 * z2**mn
    for p, c in ctx.items():
        m_p = mid[p][1]
        h = (c.inner1_top(m1, n_total) + c.inner2_top(n_total, m1, mn)
             - c.inner0_top(n_total, m1)) * cof_full[p]
        pre = head
        for j, (_, mj) in enumerate(mid):
            if j != p:
                pre *= lin[j] ** mj
        total += pre * sum(z2 ** (m_p - 1 - s) * lin[p] ** s * h.coeffs[s] for s in range(m_p))
    return total


def g_axes_only(f: Source, m1: int, mn: int, z: tuple[complex, complex]) -> complex:
    """Inclusion-exclusion of the partial Taylor sums along both axes."""
    src = _source(f)
    z1, z2 = complex(z[0]), complex(z[1])
    d = src.degree
    total = 0j
    for k1 in range(m1):
        row = src.row(k1)
        total += z1**k1 * sum(row[k2] * z2**k2 for k2 in range(d + 1 - k1))
        total -= z1**k1 * sum(row[k2] * z2**k2 for k2 in range(min(mn, d + 1 - k1)))
    for k2 in range(mn):
        col = src.column(k2)
        total += z2**k2 * sum(col[k1] * z1**k1 for k1 in range(d + 1 - k2))
    return total


def g_single_lines(f: Source, etas: Sequence[complex], z: tuple[complex, complex],
                   guard: DomainGuard = DomainGuard()) -> complex:
    """Reconstruction from values of ``f`` on simple lines ``z1 = eta z2``.

    Uses only ``f(eta v, v)`` coefficients.  ``z2 = 0`` is admissible; only
    the lines themselves are excluded.  The slopes are taken in the
    canonical modulus order.
    """
    cfg = validate_config(0, [(e, 1) for e in etas], 0)
    if not cfg.middle:
        raise ConfigError("at least one line is required")
    if not off_middle_lines(cfg, guard, z):
        raise DomainError(f"point {z!r} is on or too close to a line")
    if isinstance(f, LineData):
        _check_source_cfg(f, cfg)
        vals = [per_s[0] for per_s in f.middle]
        degree = f.degree
    else:
        vals = [line_restriction_jets(f, e, 0) for e in cfg.etas]
        degree = f.degree
    es = cfg.etas
    n = len(es)
    z1, z2 = complex(z[0]), complex(z[1])
    lin = [z1 - e * z2 for e in es]
    bq = [(z2 + e.conjugate() * z1) / (1 + abs(e) ** 2) for e in es]

    def tail(q: int, thr: int, shift: int) -> complex:
        return sum(bq[q] ** (l - thr + shift) * vals[q][l] for l in range(max(thr, 0), degree + 1))

    total = 0j
    for i in range(n):
        thr = n - i - 1
        prod = 1 + 0j
        for j in range(i + 1, n):
            prod *= lin[j]
        inner = 0j
        for q in range(i, n):
            w = 1 / (1 + abs(es[q]) ** 2)
            den = 1 + 0j
            for j in range(i, n):
                if j != q:
                    den *= es[q] - es[j]
            inner += (1 + es[i] * es[q].conjugate()) * w / den * tail(q, thr, 0)
        total += prod * inner
    for i in range(n):
        lag = 1 + 0j
        for j in range(n):
            if j != i:
                lag *= lin[j] / (es[i] - es[j])
        total -= lag * tail(i, n, 1)
    return total


def tail_sum(f: TaylorSeries2, cfg: LineConfig, z: tuple[complex, complex]) -> complex:
    """Sum of the Taylor terms with ``k1+k2 >= N``, ``k1 >= m1``, ``k2 >= mn``."""
    z1, z2 = complex(z[0]), complex(z[1])
    return sum((c * z1**k1 * z2**k2 for (k1, k2), c in f.nonzero_items()
                if in_tail(cfg, k1, k2)), 0j)


def in_tail(cfg: LineConfig, k1: int, k2: int) -> bool:
    return k1 + k2 >= cfg.N and k1 >= cfg.m1 and k2 >= cfg.mn


def tail_series(f: TaylorSeries2, cfg: LineConfig) -> TaylorSeries2:
    return TaylorSeries2.from_dict(
        f.degree, {k: c for k, c in f.nonzero_items() if in_tail(cfg, *k)})


def reconstruction_residual(f: TaylorSeries2, cfg: LineConfig, z: tuple[complex, complex],
                            guard: DomainGuard = DomainGuard(), **kw) -> complex:
    """``f(z) - G(f)(z) - tail(z)``; zero up to rounding."""
    return eval2(f, z) - g_general(f, cfg, z, guard, **kw) - tail_sum(f, cfg, z)


# ---------------------------------------------------------------------------
# per-monomial decomposition

def _require_middle(cfg: LineConfig, guard: DomainGuard, z) -> None:
    if not cfg.has_middle:
        raise ConfigError("the monomial decomposition needs a middle line with m_p >= 1")
    if not in_domain(cfg, guard, z):
        raise DomainError(f"point {z!r} is outside the guarded domain")


def _b_jet(t: Jet, z1: complex, z2: complex) -> Jet:
    w2 = abs(t.center) ** 2
    return (t.reciprocal() * (w2 * z1) + z2) * (1 / (1 + w2))


def pv_remainder_monomial(k1: int, k2: int, cfg: LineConfig, z: tuple[complex, complex],
                          guard: DomainGuard = DomainGuard()) -> complex:
    """Principal-value part of ``z1^k1 z2^k2``: the tail indicator term minus the top-N groups."""
    _require_middle(cfg, guard, z)
    z1, z2 = complex(z[0]), complex(z[1])
    m1, mn, n_total = cfg.m1, cfg.mn, cfg.N
    mid = cfg.middle
    out = z1**k1 * z2**k2 if in_tail(cfg, k1, k2) else 0j
    if k1 + k2 < n_total:
        return out
    ind_row = k1 <= m1 - 1 and k2 >= n_total - k1
    ind_col = k2 <= mn - 1 and k1 >= n_total - k2
    for p, (eta, m_p) in enumerate(mid):
        if m_p == 0:
            continue
        t = Jet.variable(eta, m_p - 1)
        weight = t.reciprocal() ** m1 * _cofactor(t, [mid[j] for j in range(len(mid)) if j != p])
        bracket = -(t**k1 * _b_jet(t, z1, z2) ** (k1 + k2 - n_total + 1))
        if ind_row:
            bracket = bracket + t**k1 * z2 ** (k1 + k2 - n_total + 1)
        if ind_col:
            bracket = bracket + t ** (n_total - 1 - k2) * z1 ** (k1 + k2 - n_total + 1)
        bracket = bracket * weight
        pre = z1**m1 * z2**mn
        for j, (e, mj) in enumerate(mid):
            if j != p:
                pre *= (z1 - e * z2) ** mj
        lin = z1 - eta * z2
        out += pre * sum(z2 ** (m_p - 1 - s) * lin**s * bracket.coeffs[s] for s in range(m_p))
    return out


def interp_part_monomial(k1: int, k2: int, cfg: LineConfig, z: tuple[complex, complex],
                         guard: DomainGuard = DomainGuard()) -> complex:
    """Interpolation (residue) part of ``z1^k1 z2^k2``; adds with the PV part to the monomial."""
    _require_middle(cfg, guard, z)
    z1, z2 = complex(z[0]), complex(z[1])
    m1, mn, n_total = cfg.m1, cfg.mn, cfg.N
    mid = cfg.middle
    lin = [z1 - e * z2 for e, _ in mid]
    out = 0j

    all_mid = z2**mn
    for l, (_, m) in zip(lin, mid):
        all_mid *= l**m
    for u1 in range(m1):
        thr = u1 + n_total - m1
        acc = 0j
        for p, (eta, m_p) in enumerate(mid):
            if m_p == 0:
                continue
            t = Jet.variable(eta, m_p - 1)
            w2 = abs(eta) ** 2
            br = Jet.constant(0.0, eta, m_p - 1)
            if k1 + k2 >= thr:
                br = br + t**k1 * _b_jet(t, z1, z2) ** (k1 + k2 - thr) * (1 / (1 + w2))
            if k1 <= u1 and k2 >= thr - k1:
                br = br - t**k1 * z2 ** (k1 + k2 - thr)
            jet = br / t ** (u1 + 1) * _cofactor(t, [mid[j] for j in range(len(mid)) if j != p])
            acc += jet.coeffs[-1]
        out += z1**u1 * all_mid * acc

    for p, (eta_p, m_p) in enumerate(mid):
        for u in range(m_p):
            thr = u + sum(m for _, m in mid[p + 1:]) + mn
            pre = lin[p] ** u * z2**mn
            for j in range(p + 1, len(mid)):
                pre *= lin[j] ** mid[j][1]
            nodes = [(p, u + 1)] + [(q, mid[q][1]) for q in range(p + 1, len(mid))
                                    if mid[q][1] > 0]
            first = k1 + k2 >= thr
            second = k2 <= mn - 1 and k1 >= thr - k2
            if not (first or second):
                continue
            acc = 0j
            for q, order in nodes:
                eta_q = mid[q][0]
                t = Jet.variable(eta_q, order - 1)
                w2 = abs(eta_q) ** 2
                br = Jet.constant(0.0, eta_q, order - 1)
                if first:
                    pref = (t.reciprocal() * (w2 * eta_p) + 1) * (1 / (1 + w2))
                    br = br + pref * t**k1 * _b_jet(t, z1, z2) ** (k1 + k2 - thr)
                if second:
                    br = br - t ** (thr - 1 - k2) * (eta_p * z1 ** (k1 + k2 - thr))
                others = [(mid[j][0], o) for j, o in nodes if j != q]
                acc += (br * _cofactor(t, others)).coeffs[-1]
            out += pre * acc

    if k2 <= mn - 1:
        out += z1**k1 * z2**k2
    return out
