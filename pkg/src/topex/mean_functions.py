"""Forward/backward integral means, iterated means over a delta schedule,
Weierstrass-type generators, graph sampling and the x-translation of graph
points.

Everything runs on uniform-grid samples. A :class:`SampledFunction` keeps a
cumulative-integral table built from the piecewise-quadratic interpolant of
its samples (composite Simpson at even nodes), so an integral between any two
points of the domain costs O(1).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError
from .index_algebra import SignString

DEFAULT_INTERVALS = 10_000
# Slack allowed when checking that a query lies inside a grid's domain.
_EDGE_RTOL = 1e-12


def _sigma(value) -> int:
    if value in (1, "+", "p"):
        return 1
    if value in (-1, "-", "−", "m"):
        return -1
    raise DomainError(f"sign must be + or -, got {value!r}")


@dataclass(frozen=True)
class WeierstrassParams:
    """``f(t) = sum_{k < terms} amp**k * cos(freq**k * pi * t)``."""

    amp: float = 0.5
    freq: int = 13
    terms: int = 30

    def __post_init__(self):
        if not 0.0 < self.amp < 1.0:
            raise DomainError(f"amp must lie in (0, 1), got {self.amp}")
        if int(self.freq) != self.freq or self.freq < 3 or self.freq % 2 == 0:
            raise DomainError(f"freq must be an odd integer >= 3, got {self.freq}")
        if int(self.terms) != self.terms or self.terms < 1:
            raise DomainError(f"terms must be a positive integer, got {self.terms}")
        object.__setattr__(self, "freq", int(self.freq))
        object.__setattr__(self, "terms", int(self.terms))
        if self.amp * self.freq <= 1 + 1.5 * math.pi:
            warnings.warn(f"amp*freq = {self.amp * self.freq:g} <= 1 + 3*pi/2; the sum may be differentiable",
                          stacklevel=2)

    @classmethod
    def parse(cls, text: str) -> "WeierstrassParams":
        """``"amp,freq,terms"`` with any trailing fields optional."""
        parts = [p for p in text.split(",") if p.strip()]
        if len(parts) > 3:
            raise DomainError(f"expected amp,freq,terms, got {text!r}")
        kw = {}
        try:
            for name, conv, raw in zip(("amp", "freq", "terms"), (float, int, int), parts):
                kw[name] = conv(raw)
        except ValueError:
            raise DomainError(f"could not parse Weierstrass parameters {text!r}") from None
        return cls(**kw)


def weierstrass(params: WeierstrassParams | None = None) -> Callable:
    """Evaluator accepting scalars or arrays."""
    params = params or WeierstrassParams()

    def f(t):
        arr = np.asarray(t, dtype=np.float64)
        out = _kernels.weierstrass(np.ascontiguousarray(arr.ravel()), params.amp, float(params.freq), params.terms)
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    f.params = params
    return f


def _grid(a: float, b: float, n: int) -> np.ndarray:
    # Single formula for node coordinates: sampling and the derivative check
    # must hit bit-identical abscissae for rough sources.
    return float(a) + ((float(b) - float(a)) / n) * np.arange(n + 1)


class SampledFunction:
    """Samples of a function on ``a + i*h``, ``i = 0..N`` with ``N`` even."""

    def __init__(self, a: float, b: float, values):
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.ndim != 1:
            raise DomainError("samples must be one-dimensional")
        n = values.shape[0] - 1
        if n < 2 or n % 2:
            raise DomainError(f"need an even number (>= 2) of grid intervals, got {n}")
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise DomainError(f"invalid domain [{a}, {b}]")
        if not np.all(np.isfinite(values)):
            raise DomainError("samples contain non-finite values")
        self.a = float(a)
        self.b = float(b)
        self.values = values
        self.h = (self.b - self.a) / n
        self.prefix = _kernels.simpson_prefix(values, self.h)

    @classmethod
    def from_callable(cls, f: Callable, a: float, b: float, n: int = DEFAULT_INTERVALS) -> "SampledFunction":
        x = _grid(a, b, n)
        try:
            y = np.asarray(f(x), dtype=np.float64)
            if y.shape != x.shape:
                raise TypeError
        except TypeError:
            y = np.array([f(float(t)) for t in x], dtype=np.float64)
        return cls(a, b, y)

    @property
    def intervals(self) -> int:
        return self.values.shape[0] - 1

    @property
    def nodes(self) -> np.ndarray:
        return _grid(self.a, self.b, self.intervals)

    def node(self, i: int) -> float:
        return float(self.nodes[i])

    def _check(self, x):
        x = np.asarray(x, dtype=np.float64)
        slack = _EDGE_RTOL * max(abs(self.a), abs(self.b), self.b - self.a)
        if np.any(x < self.a - slack) or np.any(x > self.b + slack):
            bad = x[(x < self.a - slack) | (x > self.b + slack)].ravel()[0]
            raise DomainError(f"{bad} lies outside the sampled domain [{self.a}, {self.b}]")
        return x

    def __call__(self, x):
        """Piecewise-quadratic interpolant of the samples."""
        x = self._check(x)
        out = _kernels.interpolate(self.values, self.a, self.h, np.ascontiguousarray(x.ravel()))
        return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)

    def integral(self, x):
        """``∫_a^x`` of the interpolant."""
        x = self._check(x)
        out = _kernels.prefix_integral(self.prefix, self.values, self.a, self.h, np.ascontiguousarray(x.ravel()))
        return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)

    def mean(self, x, delta: float, sigma=1):
        """``(sigma/delta) * ∫_x^{x + sigma*delta} f``; ``f(x)`` when ``delta == 0``."""
        s = _sigma(sigma)
        delta = float(delta)
        if delta < 0:
            raise DomainError(f"delta must be non-negative, got {delta}")
        if delta == 0:
            return self(x)
        x = np.asarray(x, dtype=np.float64)
        return s / delta * (self.integral(x + s * delta) - self.integral(x))

    def __repr__(self):
        return f"SampledFunction([{self.a}, {self.b}], {self.intervals} intervals)"


def mean(f: SampledFunction, x, delta: float, sigma=1):
    return f.mean(x, delta, sigma)


@dataclass(frozen=True)
class DeltaSchedule:
    """``delta_0 > delta_1 > ... > delta_n >= 0``; only the last entry may be 0."""

    deltas: tuple[float, ...]
    eps0: float | None = None

    def __post_init__(self):
        d = tuple(float(v) for v in self.deltas)
        if not d:
            raise DomainError("delta schedule is empty")
        for i, v in enumerate(d):
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"delta[{i}] = {v} must be a non-negative real")
            if v == 0 and i != len(d) - 1:
                raise DomainError(f"delta[{i}] = 0 is only allowed as the last entry")
            if i and not v < d[i - 1]:
                raise DomainError(f"deltas must be strictly decreasing: delta[{i - 1}]={d[i - 1]}, delta[{i}]={v}")
        if d[0] == 0:
            raise DomainError("delta_0 must be positive")
        if self.eps0 is not None and not d[0] < self.eps0:
            raise DomainError(f"delta_0 = {d[0]} must be below eps_0 = {self.eps0}")
        object.__setattr__(self, "deltas", d)

    @classmethod
    def coerce(cls, deltas) -> "DeltaSchedule":
        return deltas if isinstance(deltas, DeltaSchedule) else cls(tuple(deltas))

    def __len__(self):
        return len(self.deltas)

    def __getitem__(self, i):
        return self.deltas[i]


def _restrict(g: SampledFunction, s: int, delta: float) -> tuple[int, int]:
    """Node range of ``g`` where ``[x, x + s*delta]`` stays in its domain.

    The range starts on an even node and spans a multiple of four intervals
    so that every other node again forms a valid grid.
    """
    n = g.intervals
    shift = delta / g.h
    lo_t, hi_t = (0.0, n - shift) if s > 0 else (shift, float(n))
    i0 = math.ceil(lo_t - 1e-9)
    i1 = math.floor(hi_t + 1e-9)
    i0 += i0 % 2
    i1 -= (i1 - i0) % 4
    if i1 - i0 < 4:
        raise DomainError(f"delta {delta} leaves no room on the grid [{g.a}, {g.b}]")
    return i0, i1


def _materialize(g: SampledFunction, s: int, delta: float, i0: int, i1: int) -> SampledFunction:
    idx = np.arange(i0, i1 + 1)
    x = g.a + g.h * idx
    if delta == 0:
        vals = g.values[i0:i1 + 1].copy()
    else:
        upper = _kernels.prefix_integral(g.prefix, g.values, g.a, g.h, x + s * delta)
        vals = s / delta * (upper - g.prefix[i0:i1 + 1])
    return SampledFunction(g.a + g.h * i0, g.a + g.h * i1, vals)


class IteratedMean:
    """Evaluator of the nested mean ``F^{s_0..s_n}_{d_0..d_n}`` of sampled data.

    Level ``k`` is ``(s_k/d_k) ∫_x^{x + s_k d_k}`` of level ``k-1`` (level
    ``-1`` is ``f``). Levels ``0..n-1`` are tabulated on the nodes of ``f``'s
    grid that keep all nested ranges inside the domain; the last level is
    evaluated directly at the query points.
    """

    def __init__(self, f: SampledFunction, signs, deltas, _ranges=None):
        self.f = f
        self.signs = SignString.parse(signs)
        self.deltas = DeltaSchedule.coerce(deltas)
        if len(self.signs) != len(self.deltas):
            raise DomainError(f"{len(self.signs)} signs but {len(self.deltas)} deltas")
        self._s = self.signs.as_ints()
        levels = [f]
        ranges = []
        for k in range(len(self._s) - 1):
            g = levels[-1]
            if _ranges is None:
                i0, i1 = _restrict(g, self._s[k], self.deltas[k])
            else:
                i0, i1 = _ranges[k]
            ranges.append((i0, i1))
            levels.append(_materialize(g, self._s[k], self.deltas[k], i0, i1))
        self.levels = levels
        self.ranges = ranges
        lo, hi = self.valid_range
        if not lo <= hi:
            raise DomainError(f"delta {self.deltas[-1]} exhausts the remaining range [{levels[-1].a}, {levels[-1].b}]")

    @property
    def valid_range(self) -> tuple[float, float]:
        """Closed x-range on which the final level can be evaluated."""
        g = self.levels[-1]
        s, d = self._s[-1], self.deltas[-1]
        return (g.a, g.b - d) if s > 0 else (g.a + d, g.b)

    def __call__(self, x):
        lo, hi = self.valid_range
        xa = np.asarray(x, dtype=np.float64)
        slack = _EDGE_RTOL * max(abs(lo), abs(hi), 1.0)
        if np.any(xa < lo - slack) or np.any(xa > hi + slack):
            raise DomainError(f"x outside the valid range [{lo}, {hi}] of this iterated mean")
        return self.levels[-1].mean(x, self.deltas[-1], self._s[-1])

    def coarse(self) -> "IteratedMean | None":
        """Same chain on every other grid node, or ``None`` if the grid does not halve."""
        if self.f.intervals % 4:
            return None
        f2 = SampledFunction(self.f.a, self.f.b, self.f.values[::2])
        return IteratedMean(f2, self.signs, self.deltas, _ranges=[(i0 // 2, i1 // 2) for i0, i1 in self.ranges])

    def evaluate(self, x):
        """Value and a two-grid Richardson error estimate ``|F_h - F_2h| / 15``."""
        val = self(x)
        c = self.coarse()
        if c is None:
            err = np.full(np.shape(val), np.nan)
        else:
            err = np.abs(np.asarray(val) - np.asarray(c(x))) / 15.0
        return val, (float(err) if np.ndim(val) == 0 else err)


def iterated_mean(f: SampledFunction, x, signs, deltas):
    return IteratedMean(f, signs, deltas)(x)


def mean_derivative_check(f: SampledFunction, x: float, delta: float, sigma=1,
                          source: Callable | None = None, snap: bool = True) -> tuple[float, float]:
    """Numerical x-derivative of the mean against ``(s/delta)(f(x + s*delta) - f(x))``.

    With ``snap`` the point and the width are moved to the grid, where the
    interpolant and ``source`` agree, so the identity holds for any sampled
    continuous function. The numerical side is a Richardson-extrapolated
    central difference at sub-grid steps, exact for the piecewise-cubic
    mean of the interpolant up to rounding.
    """
    s = _sigma(sigma)
    if delta <= 0:
        raise DomainError("the derivative check needs delta > 0")
    g = source if source is not None else f
    if snap:
        i = int(round((x - f.a) / f.h))
        m = max(1, int(round(delta / f.h)))
        if not (0 <= i <= f.intervals and 0 <= i + s * m <= f.intervals):
            raise DomainError(f"x = {x} with delta = {delta} leaves the sampled domain")
        x = f.node(i)
        delta = f.h * m
        analytic = s / delta * (float(g(f.node(i + s * m))) - float(g(x)))
    else:
        analytic = s / delta * (float(g(x + s * delta)) - float(g(x)))
    hs = [f.h / 2, f.h / 4, f.h / 8]
    lo, hi = (f.a, f.b - delta) if s > 0 else (f.a + delta, f.b)
    if x - hs[0] < lo or x + hs[0] > hi:
        raise DomainError(f"x = {x} too close to the edge of the valid range [{lo}, {hi}]")

    def fd(step):
        return (f.mean(x + step, delta, s) - f.mean(x - step, delta, s)) / (2 * step)

    d1, d2, d3 = (fd(step) for step in hs)
    ra = 2 * d2 - d1
    rb = 2 * d3 - d2
    numeric = (4 * rb - ra) / 3
    return float(numeric), analytic


class GraphPoint(NamedTuple):
    coords: tuple[float, float]
    tags: tuple[float, ...]


def graph_points(fs: Sequence[SampledFunction], signs, deltas, xs) -> list[tuple[GraphPoint, ...]]:
    """Samples ``(x, F_i(x))`` of each function's iterated mean, tagged ``(d_n, ..., d_0)``."""
    deltas = DeltaSchedule.coerce(deltas)
    xs = np.asarray(xs, dtype=np.float64).ravel()
    if xs.size == 0:
        return []
    tags = tuple(reversed(deltas.deltas))
    cols = [np.atleast_1d(IteratedMean(f, signs, deltas)(xs)) for f in fs]
    return [tuple(GraphPoint((float(x), float(c[k])), tags) for c in cols) for k, x in enumerate(xs)]


def translate(points, delta0: float):
    """Shift first coordinates by ``delta0``; second coordinates and tags are unchanged."""
    if isinstance(points, GraphPoint):
        (x, y), tags = points
        return GraphPoint((x + delta0, y), tags)
    if isinstance(points, tuple) and len(points) == 2 and all(isinstance(v, (int, float)) for v in points):
        return (points[0] + delta0, points[1])
    out = [translate(p, delta0) for p in points]
    return tuple(out) if isinstance(points, tuple) else out


def extra_level_convergence(f: SampledFunction, x: float, signs, deltas, delta_next: Sequence[float],
                         sigma_next="+") -> list[tuple[float, float]]:
    """Rows ``(d, |F with one more level of width d - F|)`` at ``x``.

    An extra level of width 0 reproduces the shorter mean exactly.
    """
    signs = SignString.parse(signs)
    deltas = DeltaSchedule.coerce(deltas)
    s = "+" if _sigma(sigma_next) > 0 else "-"
    base = float(IteratedMean(f, signs, deltas)(x))
    rows = []
    for d in delta_next:
        d = float(d)
        if d == 0:
            rows.append((0.0, 0.0))
            continue
        ext = IteratedMean(f, SignString(signs.signs + s), deltas.deltas + (d,))
        rows.append((d, abs(float(ext(x)) - base)))
    return rows
