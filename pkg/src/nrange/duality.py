"""States (norming functionals) and one-sided directional derivatives.

For a unit vector u the states are the dual-unit functionals attaining
f(u) = 1; they form the subdifferential of the norm at u.  The one-sided
derivative

    tau(u, y) = lim_{a -> 0+} (||u + a y|| - 1) / a = max { f(y) : f state }

is evaluated two ways and returned as a bracket: a states-side maximum
(exact when the state set is a known singleton or polyhedron) and a
difference-quotient upper bound along a descending alpha grid.  Convexity
makes every quotient an upper bound for the limit, so the bracket is
certified.
"""

from dataclasses import dataclass

import numpy as np

from .errors import UnitVectorError
from .gauges import LpGauge, PiecewiseGauge
from .rng import stream
from .spaces import AbsoluteSum, Lp, MaxOf, Pullback, SumOf

__all__ = [
    "StateSet",
    "state_set",
    "dual_ball_vertices",
    "DerivativeBracket",
    "tau",
    "ALPHA_GRID",
]

# descending dyadic grid; quotients along it decrease monotonically
ALPHA_GRID = tuple(2.0 ** (-k) for k in range(1, 31))

_FACE_TOL = 1e-9
_VERTEX_CAP = 20000
_POLY_DIM_CAP = 12
_MISSING = object()


def _gauge_quadrant_extremes(gauge):
    """Extreme points of a gauge's unit ball in the closed first quadrant,
    or None when the gauge ball is not polygonal."""
    if isinstance(gauge, LpGauge):
        if gauge.p == 1.0:
            return [(1.0, 0.0), (0.0, 1.0)]
        if np.isinf(gauge.p):
            return [(1.0, 1.0)]
        return None
    if isinstance(gauge, PiecewiseGauge):
        return [tuple(v) for v in gauge.quadrant_vertices()]
    return None


def dual_ball_vertices(expr, cap=_VERTEX_CAP):
    """A finite superset of the extreme points of the dual unit ball, as
    rows of an array, or None when the ball is not (known) polyhedral or
    the enumeration would exceed ``cap``.

    Results for the default cap are cached on the expression instance;
    search loops rebuild state sets at every evaluation point.
    """
    if cap == _VERTEX_CAP:
        cached = getattr(expr, "_dual_vertex_cache", _MISSING)
        if cached is _MISSING:
            cached = _dual_ball_vertices(expr, cap)
            expr._dual_vertex_cache = cached
        return cached
    return _dual_ball_vertices(expr, cap)


def _dual_ball_vertices(expr, cap):
    if isinstance(expr, Lp):
        if expr.dim == 1:
            return np.array([[1.0], [-1.0]])
        if np.isinf(expr.p):
            return np.concatenate([np.eye(expr.dim), -np.eye(expr.dim)], axis=0)
        if expr.p == 1.0:
            if 2 ** expr.dim > cap:
                return None
            grid = np.array(
                np.meshgrid(*([[-1.0, 1.0]] * expr.dim), indexing="ij")
            ).reshape(expr.dim, -1).T
            return grid
        return None
    if isinstance(expr, Pullback):
        inner = dual_ball_vertices(expr.inner, cap)
        if inner is None:
            return None
        return inner @ expr.matrix
    if isinstance(expr, MaxOf):
        parts = []
        total = 0
        for t in expr.terms:
            v = dual_ball_vertices(t, cap)
            if v is None:
                return None
            total += len(v)
            if total > cap:
                return None
            parts.append(v)
        return np.concatenate(parts, axis=0)
    if isinstance(expr, SumOf):
        acc = None
        for t in expr.terms:
            v = dual_ball_vertices(t, cap)
            if v is None:
                return None
            if acc is None:
                acc = v
            else:
                if len(acc) * len(v) > cap:
                    return None
                acc = (acc[:, None, :] + v[None, :, :]).reshape(-1, expr.dim)
        return acc
    if isinstance(expr, AbsoluteSum):
        coeffs = _gauge_quadrant_extremes(expr.gauge.dual())
        if coeffs is None:
            return None
        lv = dual_ball_vertices(expr.left, cap)
        rv = dual_ball_vertices(expr.right, cap)
        if lv is None or rv is None:
            return None
        kl = expr.left.dim
        rows = []
        for al, be in coeffs:
            if al <= 1e-15 and be <= 1e-15:
                continue
            if al <= 1e-15:
                block = np.zeros((len(rv), expr.dim))
                block[:, kl:] = be * rv
                rows.append(block)
            elif be <= 1e-15:
                block = np.zeros((len(lv), expr.dim))
                block[:, :kl] = al * lv
                rows.append(block)
            else:
                if len(lv) * len(rv) > cap:
                    return None
                block = np.zeros((len(lv) * len(rv), expr.dim))
                block[:, :kl] = np.repeat(al * lv, len(rv), axis=0)
                block[:, kl:] = np.tile(be * rv, (len(lv), 1))
                rows.append(block)
        total = sum(len(b) for b in rows)
        if total > cap or not rows:
            return None
        return np.concatenate(rows, axis=0)
    return None


@dataclass
class StateSet:
    """States of a space at a unit vector.

    kind is 'singleton' (provably unique functional), 'polyhedral' (all
    extreme states enumerated), or 'generic' (one analytic state plus
    perturbation samples; maxima over it are lower bounds only).
    """

    space: object
    point: np.ndarray
    kind: str
    base: np.ndarray
    vertices: np.ndarray = None

    @property
    def exact(self):
        return self.kind in ("singleton", "polyhedral")

    def support(self):
        return self.base

    def functionals(self):
        if self.kind == "polyhedral":
            return self.vertices
        return self.base[None, :]

    def max_pairing(self, y):
        """max f(y) over the represented states: exact for singleton and
        polyhedral kinds, a lower bound for generic."""
        y = np.asarray(y, dtype=float)
        if self.kind == "polyhedral":
            vals = self.vertices @ y
            i = int(np.argmax(vals))
            return float(vals[i]), self.vertices[i]
        return float(self.base @ y), self.base

    def sample(self, count=64, seed=0, eta=1e-6):
        """Functionals near the state set: the analytic state plus states at
        perturbed points that still pair with the base point up to 1e-9."""
        out = [self.base]
        if self.kind == "polyhedral":
            out = list(self.vertices)
        elif self.kind == "generic":
            rng = stream(seed, 7)
            for _ in range(count):
                d = rng.standard_normal(self.space.dim)
                try:
                    up = self.space.unit(self.point + eta * d)
                except UnitVectorError:
                    continue
                f = self.space.support(up)
                if float(f @ self.point) >= 1.0 - _FACE_TOL:
                    out.append(f)
        return np.array(out)

    def contains(self, f, tol=1e-8):
        f = np.asarray(f, dtype=float)
        if float(f @ self.point) < 1.0 - tol:
            return False
        return self.space.dual(f).upper <= 1.0 + tol


def state_set(expr, u, tol=1e-8):
    """Classify and build the state set of ``expr`` at the unit vector u."""
    u = expr.require_unit(u, tol)
    f0 = expr.support(u)
    if expr.support_is_unique(u):
        return StateSet(expr, u, "singleton", f0)
    if expr.dim <= _POLY_DIM_CAP:
        verts = dual_ball_vertices(expr)
        if verts is not None:
            pair = verts @ u
            face = verts[pair >= 1.0 - _FACE_TOL]
            if len(face) > 0:
                return StateSet(expr, u, "polyhedral", f0, vertices=face)
    return StateSet(expr, u, "generic", f0)


@dataclass(frozen=True)
class DerivativeBracket:
    """Bracket for a one-sided norm derivative.

    lower comes from states (exact when ``exact``), upper from difference
    quotients plus a safety margin.  trace holds the recorded (alpha,
    quotient) pairs, nonincreasing in quotient by construction.
    """

    lower: float
    upper: float
    exact: bool
    witness: np.ndarray
    trace: tuple

    @property
    def width(self):
        return self.upper - self.lower


def quotient_trace(expr, u, y, alphas=ALPHA_GRID):
    """Difference quotients (||u + a y|| - 1)/a along a descending grid.

    Recording stops at the rounding floor: at the first increase (the true
    sequence is nonincreasing, so any increase is noise) or when successive
    quotients differ by less than 1e-11.
    """
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    trace = []
    for a in alphas:
        q = (float(expr.norm(u + a * y)) - 1.0) / a
        if trace and q > trace[-1][1]:
            break
        stop = bool(trace) and trace[-1][1] - q < 1e-11
        trace.append((a, q))
        if stop:
            break
    return tuple(trace)


def tau(expr, u, y, states=None, alphas=ALPHA_GRID, margin=1e-8, unit_tol=1e-8):
    """One-sided derivative of the norm at unit u in direction y.

    Returns a :class:`DerivativeBracket`.  When the state set at u is exact
    (singleton or polyhedral) the lower endpoint equals the derivative and
    ``exact`` is True; the quotient upper bound is still reported.
    """
    if states is None:
        states = state_set(expr, u, tol=unit_tol)
    else:
        u = expr.require_unit(u, unit_tol)
    u = states.point
    lower, witness = states.max_pairing(np.asarray(y, dtype=float))
    if states.kind == "generic":
        extra = states.sample(count=32, seed=11)
        vals = extra @ np.asarray(y, dtype=float)
        i = int(np.argmax(vals))
        if float(vals[i]) > lower:
            lower, witness = float(vals[i]), extra[i]
    trace = quotient_trace(expr, u, y, alphas)
    upper = trace[-1][1] + margin
    upper = max(upper, lower)
    return DerivativeBracket(lower, upper, states.exact, witness, trace)
