"""Spatial and intrinsic numerical ranges of an operator on a pair.

For an operator T on a pair (domain embedded by J into Y):

  * spatial range W: values f(Tx) over unit x and states f at Jx;
  * intrinsic range V: values phi(T) over norm-one functionals phi on the
    operator space with phi(J) = 1.

The convex hull of W sits inside V.  The largest real part of V equals the
limit of (||J + a T||_op - 1)/a as a -> 0+, so it is evaluated with the
same descending-grid quotient discipline as directional derivatives, with
a multistart search supplying each operator norm.  The spatial supremum is
searched directly through state sets.
"""

from dataclasses import dataclass

import numpy as np

from .duality import ALPHA_GRID, state_set
from .optimize import SearchConfig, sphere_maximize
from .rng import stream

__all__ = [
    "SpatialEstimate",
    "IntrinsicBracket",
    "GapReport",
    "sup_spatial",
    "max_intrinsic",
    "range_points",
    "gap_report",
]


@dataclass
class SpatialEstimate:
    """Search estimate of sup Re W: a certified lower bound with witness.

    ``pointwise_exact`` records whether the winning point's state set was
    exact (singleton or polyhedral), i.e. the value is the true maximum of
    f(Tx) at that x.
    """

    value: float
    x: np.ndarray
    functional: np.ndarray
    pointwise_exact: bool
    evals: int

    @property
    def lower(self):
        return self.value


@dataclass
class IntrinsicBracket:
    """Bracket for max Re V.

    upper is the last recorded operator-norm quotient plus a safety
    margin; its reliability rests on the multistart search behind each
    operator norm.  lower is the spatial estimate (co W lies inside V).
    trace holds (alpha, quotient) pairs, nonincreasing by construction.
    """

    lower: float
    upper: float
    trace: tuple
    witness_x: np.ndarray
    spatial: SpatialEstimate

    @property
    def width(self):
        return self.upper - self.lower


@dataclass
class GapReport:
    w_max: SpatialEstimate
    w_min: SpatialEstimate
    v_max: IntrinsicBracket
    v_min: IntrinsicBracket
    gap: float


def _spatial_objective(pair, op):
    space = pair.space
    j = pair.embedding
    t = op.matrix

    def value(x):
        jx = j @ x
        st = state_set(space, jx)
        val, _ = st.max_pairing(t @ x)
        return val

    return value


def sup_spatial(pair, op, cfg=None, polish_samples=96):
    """Search sup of f(Tx) over unit x and states f at Jx.

    The returned value is a certified lower bound of sup Re W; it is the
    exact pointwise maximum at the winning x when the state set there is
    singleton or polyhedral.
    """
    if cfg is None:
        cfg = SearchConfig(budget=1500, starts=8)
    obj = _spatial_objective(pair, op)
    res = sphere_maximize(obj, pair.domain.unit, pair.k, cfg)
    st = pair.states_at(res.point)
    tx = op.apply(res.point)
    val, wit = st.max_pairing(tx)
    if st.kind == "generic":
        extra = st.sample(count=polish_samples, seed=cfg.seed + 17)
        vals = extra @ tx
        i = int(np.argmax(vals))
        if float(vals[i]) > val:
            val, wit = float(vals[i]), extra[i]
    return SpatialEstimate(
        value=float(val),
        x=res.point,
        functional=wit,
        pointwise_exact=st.exact,
        evals=res.evals,
    )


def _opnorm_lower(pair, mat, cfg, extra_starts):
    space = pair.space
    res = sphere_maximize(
        lambda x: float(space.norm(mat @ x)),
        pair.domain.unit,
        pair.k,
        cfg,
        extra_starts=extra_starts,
    )
    return res


def max_intrinsic(pair, op, cfg=None, alphas=ALPHA_GRID, margin=1e-8):
    """Bracket max Re V(T) through operator-norm difference quotients.

    Each grid alpha gets a multistart search for ||J + alpha T||, warm
    started from previous winners and the spatial witness; every winner is
    re-evaluated at every alpha (cheap matrix norms) so the recorded trace
    reflects one consistent family of certificates.  Recording stops at the
    rounding floor, exactly as for directional derivatives.
    """
    if cfg is None:
        cfg = SearchConfig(budget=900, starts=6)
    spatial = sup_spatial(pair, op, cfg)
    j = pair.embedding
    t = op.matrix
    space = pair.space

    winners = [spatial.x]
    per_alpha = []
    for i, a in enumerate(alphas):
        res = _opnorm_lower(
            pair, j + a * t, cfg.with_seed(cfg.seed + 1000 + i), winners
        )
        winners.append(res.point)
        per_alpha.append((a, res.point))
        if len(per_alpha) >= 2:
            # recording discipline below decides the true stop; searching
            # far past the rounding floor would waste the whole budget
            q_prev = (float(space.norm((j + per_alpha[-2][0] * t) @ per_alpha[-2][1])) - 1.0) / per_alpha[-2][0]
            q_here = (float(space.norm((j + a * t) @ res.point)) - 1.0) / a
            if q_here > q_prev or q_prev - q_here < 1e-11:
                break

    # cross-polish: every winner scored at every recorded alpha
    pts = np.array(winners)
    trace = []
    best_x = spatial.x
    for a, _ in per_alpha:
        vals = space.norm(pts @ (j + a * t).T)
        i = int(np.argmax(vals))
        q = (float(vals[i]) - 1.0) / a
        if trace and q > trace[-1][1]:
            break
        stop = bool(trace) and trace[-1][1] - q < 1e-11
        trace.append((a, q))
        best_x = pts[i]
        if stop:
            break
    upper = trace[-1][1] + margin

    # quotient winners approximate the spatial argmax as alpha shrinks;
    # scoring them on the states side can only raise the certified lower
    sp_obj = _spatial_objective(pair, op)
    for w in winners:
        v = float(sp_obj(w))
        if v > spatial.value:
            st = state_set(space, j @ w)
            val, wit = st.max_pairing(t @ w)
            spatial = SpatialEstimate(
                value=float(val),
                x=w,
                functional=wit,
                pointwise_exact=st.exact,
                evals=spatial.evals,
            )
    lower = min(spatial.value, upper)
    return IntrinsicBracket(
        lower=lower,
        upper=upper,
        trace=tuple(trace),
        witness_x=best_x,
        spatial=spatial,
    )


def range_points(pair, op, count=200, seed=0):
    """Sampled spatial-range values f(Tx), one row (value, exactness) per
    sampled pair."""
    rng = stream(seed, 51)
    vals = []
    for _ in range(count):
        try:
            x = pair.domain.unit(rng.standard_normal(pair.k))
        except Exception:
            continue
        st = pair.states_at(x)
        fs = st.sample(count=8, seed=int(rng.integers(0, 2**31)))
        tx = op.apply(x)
        for f in fs:
            vals.append(float(f @ tx))
    return np.array(vals)


def _negate(op):
    from .pairs import OperatorSpec

    return OperatorSpec(op.pair, -op.matrix)


def gap_report(pair, op, cfg=None):
    """Two-sided range summary and the spatial/intrinsic gap.

    gap = (upper estimate of max Re V) - (spatial search value); up to
    search error it is nonnegative, and large values flag operators whose
    intrinsic range strictly exceeds the closed spatial range.
    """
    v_max = max_intrinsic(pair, op, cfg)
    v_min = max_intrinsic(pair, _negate(op), cfg)
    return GapReport(
        w_max=v_max.spatial,
        w_min=v_min.spatial,
        v_max=v_max,
        v_min=v_min,
        gap=float(v_max.upper - v_max.spatial.value),
    )
