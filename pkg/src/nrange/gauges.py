"""Absolute gauges on R^2.

An absolute gauge is a norm |(a, b)| on R^2 that depends only on (|a|, |b|)
and normalizes the axes: |(1, 0)| = |(0, 1)| = 1. Every such gauge satisfies
the sandwich max(|a|, |b|) <= |(a, b)| <= |a| + |b| and is nondecreasing in
each of |a|, |b|.

Two representations are provided: the p-gauges (:class:`LpGauge`) and
piecewise-linear gauges (:class:`PiecewiseGauge`) given by the convex profile
psi(t) = |(1 - t, t)| on [0, 1], so that |(a, b)| = (|a| + |b|) psi(|b| /
(|a| + |b|)). Piecewise-linear gauges are closed under duality: the dual is
computed exactly by polygon polarity of the unit ball.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NormDefinitionError

__all__ = [
    "AbsoluteGauge",
    "LpGauge",
    "PiecewiseGauge",
    "CapReport",
    "face_height",
    "cap_diameter",
    "delta_for_cap_diameter",
    "gauge_from_name",
]

_DELTA_GRID = [2.0 ** -k for k in range(1, 21)]


class AbsoluteGauge:
    """Base class. Subclasses are immutable and hashable."""

    def value(self, a, b):
        """|(a, b)|, elementwise over broadcast arrays."""
        raise NotImplementedError

    def dual(self):
        """The dual gauge |(c, d)|* = max {|ac| + |bd| : |(a, b)| <= 1}."""
        raise NotImplementedError

    def profile(self, t):
        """psi(t) = |(1 - t, t)| for t in [0, 1]."""
        t = np.asarray(t, dtype=float)
        return self.value(1.0 - t, t)

    def subgradient(self, a, b):
        """One subgradient (alpha, beta) of the gauge at (a, b) >= 0.

        Satisfies alpha*a + beta*b = |(a, b)| and |(alpha, beta)|* <= 1,
        with alpha, beta >= 0. The choice at kinks is deterministic.
        """
        raise NotImplementedError

    def subdiff_is_singleton(self, a, b):
        """Whether the subdifferential at (a, b) >= 0, (a, b) != 0 is a point."""
        raise NotImplementedError

    def describe(self):
        raise NotImplementedError


@dataclass(frozen=True)
class LpGauge(AbsoluteGauge):
    """|(a, b)| = (|a|^p + |b|^p)^(1/p), with p = inf meaning max(|a|, |b|)."""

    p: float

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise NormDefinitionError(f"gauge exponent must be >= 1, got {self.p}")

    def value(self, a, b):
        a = np.abs(np.asarray(a, dtype=float))
        b = np.abs(np.asarray(b, dtype=float))
        if np.isinf(self.p):
            return np.maximum(a, b)
        if self.p == 1.0:
            return a + b
        if self.p == 2.0:
            return np.hypot(a, b)
        m = np.maximum(a, b)
        out = np.where(
            m > 0,
            m * (np.abs(a / np.where(m > 0, m, 1.0)) ** self.p
                 + np.abs(b / np.where(m > 0, m, 1.0)) ** self.p) ** (1.0 / self.p),
            0.0,
        )
        return out

    def dual(self):
        if np.isinf(self.p):
            return LpGauge(1.0)
        if self.p == 1.0:
            return LpGauge(np.inf)
        return LpGauge(self.p / (self.p - 1.0))

    def subgradient(self, a, b):
        a = float(a)
        b = float(b)
        v = float(self.value(a, b))
        if v == 0.0:
            return (0.0, 0.0)
        if np.isinf(self.p):
            # active coordinate, first index on ties
            if a >= b:
                return (1.0, 0.0)
            return (0.0, 1.0)
        if self.p == 1.0:
            return (1.0, 1.0)
        return ((a / v) ** (self.p - 1.0), (b / v) ** (self.p - 1.0))

    def subdiff_is_singleton(self, a, b):
        a = float(a)
        b = float(b)
        if a == 0.0 and b == 0.0:
            return False
        if np.isinf(self.p):
            return abs(a - b) > 1e-9 * max(a, b)
        if self.p == 1.0:
            return a > 0.0 and b > 0.0
        return True

    def describe(self):
        return f"lp-gauge(p={self.p})"


def _prune_collinear(points, tol=1e-13):
    """Remove points that are not vertices of the convex chain.

    ``points`` walk the boundary of a convex region in order. Interior
    (collinear) points are dropped; endpoints are kept.
    """
    pts = [points[0]]
    for q in points[1:]:
        if max(abs(q[0] - pts[-1][0]), abs(q[1] - pts[-1][1])) > tol:
            pts.append(q)
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        ax, ay = out[-1]
        bx, by = pts[i]
        cx, cy = pts[i + 1]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        scale = max(abs(bx - ax), abs(by - ay), abs(cx - ax), abs(cy - ay), 1e-30)
        if abs(cross) > tol * scale:
            out.append(pts[i])
    out.append(pts[-1])
    return out


@dataclass(frozen=True)
class PiecewiseGauge(AbsoluteGauge):
    """Piecewise-linear absolute gauge given by profile breakpoints.

    ``ts`` and ``psis`` are matching tuples with ts[0] = 0, ts[-1] = 1,
    psis[0] = psis[-1] = 1, psi convex and max(1 - t, t) <= psi <= 1.
    """

    ts: tuple
    psis: tuple

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        ps = np.asarray(self.psis, dtype=float)
        if ts.ndim != 1 or ts.shape != ps.shape or ts.size < 2:
            raise NormDefinitionError("breakpoints must be two matching 1-d sequences")
        if abs(ts[0]) > 0 or abs(ts[-1] - 1.0) > 0:
            raise NormDefinitionError("profile breakpoints must start at 0 and end at 1")
        if np.any(np.diff(ts) <= 0):
            raise NormDefinitionError("profile breakpoints must be strictly increasing")
        if abs(ps[0] - 1.0) > 1e-12 or abs(ps[-1] - 1.0) > 1e-12:
            raise NormDefinitionError("profile must equal 1 at both endpoints")
        lo = np.maximum(1.0 - ts, ts)
        if np.any(ps < lo - 1e-12) or np.any(ps > 1.0 + 1e-12):
            raise NormDefinitionError("profile must satisfy max(1-t, t) <= psi <= 1")
        slopes = np.diff(ps) / np.diff(ts)
        if np.any(np.diff(slopes) < -1e-10):
            raise NormDefinitionError("profile must be convex")

    def _t(self):
        return np.asarray(self.ts, dtype=float)

    def _psi(self):
        return np.asarray(self.psis, dtype=float)

    def value(self, a, b):
        a = np.abs(np.asarray(a, dtype=float))
        b = np.abs(np.asarray(b, dtype=float))
        s = a + b
        t = np.divide(b, s, out=np.zeros_like(s), where=s > 0)
        return s * np.interp(t, self._t(), self._psi())

    def quadrant_vertices(self):
        """Vertices of the unit sphere polygon in the closed positive quadrant."""
        ts = self._t()
        ps = self._psi()
        pts = [((1.0 - t) / p, t / p) for t, p in zip(ts, ps)]
        return _prune_collinear(pts)

    def dual(self):
        quad = self.quadrant_vertices()
        # extend by mirrored neighbours so facets through the axis points
        # are present, then prune collinear points once more
        first = quad[1]
        last = quad[-2]
        chain = [(first[0], -first[1])] + quad + [(-last[0], last[1])]
        chain = _prune_collinear(chain)
        duals = []
        for (ax, ay), (bx, by) in zip(chain[:-1], chain[1:]):
            det = ax * by - ay * bx
            if abs(det) < 1e-15:
                continue
            # v with <v, (ax, ay)> = <v, (bx, by)> = 1
            vx = (by - ay) / det
            vy = (ax - bx) / det
            if vx >= -1e-12 and vy >= -1e-12:
                duals.append((max(vx, 0.0), max(vy, 0.0)))
        duals.sort(key=lambda v: v[1] / (v[0] + v[1]))
        ts_d = []
        ps_d = []
        for vx, vy in duals:
            s = vx + vy
            t = vy / s
            if ts_d and abs(t - ts_d[-1]) < 1e-12:
                continue
            ts_d.append(t)
            ps_d.append(1.0 / s)
        if abs(ts_d[0]) > 1e-12:
            ts_d.insert(0, 0.0)
            ps_d.insert(0, 1.0)
        else:
            ts_d[0] = 0.0
            ps_d[0] = 1.0
        if abs(ts_d[-1] - 1.0) > 1e-12:
            ts_d.append(1.0)
            ps_d.append(1.0)
        else:
            ts_d[-1] = 1.0
            ps_d[-1] = 1.0
        return PiecewiseGauge(tuple(ts_d), tuple(ps_d))

    def _slope_at(self, t):
        ts = self._t()
        ps = self._psi()
        i = int(np.searchsorted(ts, t, side="right")) - 1
        i = min(max(i, 0), ts.size - 2)
        return (ps[i + 1] - ps[i]) / (ts[i + 1] - ts[i])

    def subgradient(self, a, b):
        a = float(a)
        b = float(b)
        s = a + b
        if s == 0.0:
            return (0.0, 0.0)
        t = b / s
        psi = float(np.interp(t, self._t(), self._psi()))
        sl = self._slope_at(t)
        return (psi - t * sl, psi + (1.0 - t) * sl)

    def subdiff_is_singleton(self, a, b):
        a = float(a)
        b = float(b)
        s = a + b
        if s == 0.0:
            return False
        t = b / s
        if t <= 0.0:
            return face_height(self.dual()) <= 1e-12
        if t >= 1.0:
            return face_height(_swap(self.dual())) <= 1e-12
        ts = self._t()
        ps = self._psi()
        i = int(np.searchsorted(ts, t, side="right")) - 1
        i = min(max(i, 0), ts.size - 2)
        if abs(t - ts[i]) < 1e-12 and i > 0:
            left = (ps[i] - ps[i - 1]) / (ts[i] - ts[i - 1])
            right = (ps[i + 1] - ps[i]) / (ts[i + 1] - ts[i])
            return abs(left - right) < 1e-12
        return True

    def describe(self):
        pts = ", ".join(f"{t:g}:{p:g}" for t, p in zip(self.ts, self.psis))
        return f"pl-gauge({pts})"


def _swap(gauge):
    """The gauge with coordinates exchanged: |(a, b)|_swapped = |(b, a)|."""
    if isinstance(gauge, LpGauge):
        return gauge
    ts = 1.0 - np.asarray(gauge.ts, dtype=float)[::-1]
    ps = np.asarray(gauge.psis, dtype=float)[::-1]
    ts[0] = 0.0
    ts[-1] = 1.0
    return PiecewiseGauge(tuple(ts), tuple(ps))


@lru_cache(maxsize=None)
def face_height(gauge, tol=1e-10):
    """Largest b in [0, 1] with |(1, b)| = 1 (the flat edge above (1, 0)).

    Bisection on the exact floating predicate |(1, b)| <= 1; the returned
    value is a certified member of the flat set, located to within ``tol``.
    """
    if float(gauge.value(1.0, 1.0)) <= 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if float(gauge.value(1.0, mid)) <= 1.0:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class CapReport:
    """Diameter report for the cap {(a, b) in the unit ball : a > 1 - delta,
    b >= face height}, measured in the gauge's own metric."""

    delta: float
    face_height: float
    diameter: float
    witness: tuple


def _upper_boundary(gauge, a_vals, b_hi=1.0):
    """Largest b with |(a, b)| <= 1 for each a (vectorized bisection)."""
    lo = np.zeros_like(a_vals)
    hi = np.full_like(a_vals, b_hi)
    # grow hi where needed (can only happen for degenerate gauges; |(a,b)| >= b
    # so b <= 1 always works as an upper start)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        ok = gauge.value(a_vals, mid) <= 1.0
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


@lru_cache(maxsize=None)
def _cap_diameter_cached(gauge, delta, step):
    b0 = face_height(gauge)
    n = max(int(np.ceil(delta / step)) + 1, 2)
    a_vals = np.linspace(1.0 - delta, 1.0, n)
    b_top = _upper_boundary(gauge, a_vals)
    b_top = np.maximum(b_top, b0)
    pts = np.concatenate(
        [
            np.stack([a_vals, np.full_like(a_vals, b0)], axis=1),
            np.stack([a_vals, b_top], axis=1),
        ]
    )
    best = 0.0
    bi = (0, 0)
    chunk = 256
    for i in range(0, pts.shape[0], chunk):
        block = pts[i : i + chunk]
        d = gauge.value(
            np.abs(block[:, None, 0] - pts[None, :, 0]),
            np.abs(block[:, None, 1] - pts[None, :, 1]),
        )
        j = int(np.argmax(d))
        if d.flat[j] > best:
            best = float(d.flat[j])
            bi = (i + j // pts.shape[0], j % pts.shape[0])
    return CapReport(
        delta=float(delta),
        face_height=float(b0),
        diameter=best,
        witness=(tuple(pts[bi[0]]), tuple(pts[bi[1]])),
    )


def cap_diameter(gauge, delta, step=1e-3):
    """Diameter of the cap {(a, b) in the unit ball : a > 1 - delta,
    b >= face_height(gauge)}, by dense boundary discretization.

    The diameter of the closed cap is attained between boundary points, so
    the lower and upper boundary curves are sampled with grid step <= the
    given ``step`` and the maximum pairwise gauge distance is returned.
    """
    if not (0.0 < delta <= 2.0):
        raise ValueError(f"delta must be in (0, 2], got {delta}")
    return _cap_diameter_cached(gauge, float(delta), float(step))


@lru_cache(maxsize=None)
def delta_for_cap_diameter(gauge, eps):
    """Largest delta on the grid {2^-1, ..., 2^-20} whose cap diameter is
    below ``eps``. Raises if even the smallest grid delta is too wide."""
    for delta in _DELTA_GRID:
        if cap_diameter(gauge, delta).diameter < eps:
            return delta
    raise NormDefinitionError(
        f"no delta in the search grid brings the cap diameter below {eps}"
    )


def gauge_from_name(name):
    """Parse a gauge description: 'l1', 'l2', 'linf', 'lp:<p>' or
    'pl:<t>:<psi>,<t>:<psi>,...'."""
    s = name.strip().lower()
    if s == "l1":
        return LpGauge(1.0)
    if s == "l2":
        return LpGauge(2.0)
    if s == "linf":
        return LpGauge(np.inf)
    if s.startswith("lp:"):
        body = s[3:]
        p = np.inf if body in ("inf", "infinity") else float(body)
        return LpGauge(p)
    if s.startswith("pl:"):
        ts = []
        ps = []
        for item in s[3:].split(","):
            t_str, _, p_str = item.partition(":")
            if not p_str:
                raise NormDefinitionError(f"bad breakpoint {item!r} in gauge {name!r}")
            ts.append(float(t_str))
            ps.append(float(p_str))
        return PiecewiseGauge(tuple(ts), tuple(ps))
    raise NormDefinitionError(f"unknown gauge name {name!r}")
