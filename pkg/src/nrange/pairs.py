"""Embedded subspace pairs, attaining pairs, and Bishop-Phelps-Bollobas
style repair.

A :class:`SubspacePair` is a domain R^k isometrically embedded into an
ambient space Y by a matrix J; the domain norm is the pullback of Y's norm,
so J is an isometry by construction.  A pair (x, f) with unit x and
dual-unit f is *attaining* when f(Jx) = 1, i.e. f is a state at Jx.

Repair takes a near-attaining pair and returns an attaining pair nearby,
with the distance measured as max(||x1 - x0||_X, ||f1 - f0||_Y*).
"""

from dataclasses import dataclass

import numpy as np

from .duality import state_set
from .errors import PreconditionError, RepairError, UnitVectorError
from .gauges import delta_for_cap_diameter, face_height
from .optimize import SearchConfig, sphere_maximize
from .rng import stream
from .spaces import AbsoluteSum, Lp, Pullback, attaining_direction

__all__ = [
    "SubspacePair",
    "identity_pair",
    "OperatorSpec",
    "AttainingPair",
    "NearestState",
    "nearest_state",
    "RepairResult",
    "bpb_repair_classical",
    "bpb_repair_absolute",
    "sample_near_attaining",
    "pair_distance",
]


class SubspacePair:
    """A domain R^k carried into the ambient space by a full-rank matrix."""

    def __init__(self, space, embedding=None):
        if embedding is None:
            embedding = np.eye(space.dim)
        j = np.asarray(embedding, dtype=float)
        if j.ndim != 2 or j.shape[0] != space.dim:
            raise ValueError(
                f"embedding must be ({space.dim} x k), got {j.shape}"
            )
        sv = np.linalg.svd(j, compute_uv=False)
        if j.shape[1] > j.shape[0] or sv[-1] <= 1e-10 * sv[0]:
            raise ValueError("embedding must have full column rank")
        self.space = space
        self.embedding = j
        self.domain = Pullback(j, space)
        ok, _ = self.domain.is_norm()
        if not ok:
            raise ValueError("pulled-back domain norm is degenerate")

    @property
    def k(self):
        return self.embedding.shape[1]

    def embed(self, x):
        return self.embedding @ np.asarray(x, dtype=float)

    def states_at(self, x, tol=1e-8):
        """Ambient states at the embedded point: the fiber of the pair set
        over x."""
        return state_set(self.space, self.embed(x), tol=tol)

    def describe(self):
        return f"pair(domain dim {self.k} -> {self.space.describe()})"


def identity_pair(space):
    return SubspacePair(space)


@dataclass
class OperatorSpec:
    """An operator from the pair's domain into the ambient space."""

    pair: SubspacePair
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.pair.space.dim, self.pair.k):
            raise ValueError(
                f"operator must be ({self.pair.space.dim} x {self.pair.k}),"
                f" got {m.shape}"
            )
        self.matrix = m

    def apply(self, x):
        return self.matrix @ np.asarray(x, dtype=float)


@dataclass
class AttainingPair:
    x: np.ndarray
    functional: np.ndarray
    pairing: float


@dataclass
class NearestState:
    distance: float
    functional: np.ndarray
    exact: bool


def _face_lp(space, vertices, f):
    """Exact distance from f to the convex hull of state vertices when the
    dual norm is l1 or linf (ambient space linf or l1)."""
    from scipy.optimize import linprog

    n = space.dim
    big = len(vertices)
    vt = vertices.T  # (n, big)
    if np.isinf(space.p):
        # dual norm is l1: minimize sum t_i
        c = np.concatenate([np.zeros(big), np.ones(n)])
        a_ub = np.block([[vt, -np.eye(n)], [-vt, -np.eye(n)]])
        b_ub = np.concatenate([f, -f])
        bounds = [(0, None)] * big + [(0, None)] * n
        a_eq = np.concatenate([np.ones((1, big)), np.zeros((1, n))], axis=1)
    else:
        # dual norm is linf: minimize t
        c = np.concatenate([np.zeros(big), [1.0]])
        a_ub = np.block(
            [[vt, -np.ones((n, 1))], [-vt, -np.ones((n, 1))]]
        )
        b_ub = np.concatenate([f, -f])
        bounds = [(0, None)] * big + [(0, None)]
        a_eq = np.concatenate([np.ones((1, big)), np.zeros((1, 1))], axis=1)
    res = linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0], bounds=bounds,
        method="highs",
    )
    if res.status != 0:
        return None
    lam = res.x[:big]
    g = vt @ lam
    return float(res.fun), g


def nearest_state(states, f, sample_count=96, seed=5):
    """Distance in the dual norm from f to the state set.

    Exact for singleton states with an exact dual and for polyhedral states
    over l1/linf ambient spaces (solved as a linear program); otherwise the
    reported distance is the minimum over represented functionals, an upper
    bound on the true distance.
    """
    f = np.asarray(f, dtype=float)
    space = states.space
    if states.kind == "singleton":
        d = space.dual(f - states.base)
        return NearestState(d.upper, states.base, d.exact)
    if states.kind == "polyhedral":
        if isinstance(space, Lp) and (np.isinf(space.p) or space.p == 1.0):
            got = _face_lp(space, states.vertices, f)
            if got is not None:
                dist, g = got
                return NearestState(dist, g, True)
        cands = [states.base] + list(states.vertices)
    else:
        cands = list(states.sample(count=sample_count, seed=seed))
    best = None
    best_g = None
    exact_all = True
    for g in cands:
        d = space.dual(f - g)
        exact_all = exact_all and d.exact
        if best is None or d.upper < best:
            best, best_g = d.upper, g
    return NearestState(float(best), best_g, False)


@dataclass
class RepairResult:
    x: np.ndarray
    functional: np.ndarray
    dx: float
    dy: float
    pairing: float
    t: float = 0.0
    case: str = ""

    @property
    def distance(self):
        return max(self.dx, self.dy)


def pair_distance(pair, x0, f0, x1, f1):
    """max of the domain-norm and dual-norm displacements."""
    dx = float(pair.domain.norm(np.asarray(x1) - np.asarray(x0)))
    dy = pair.space.dual(np.asarray(f1) - np.asarray(f0)).upper
    return max(dx, dy)


def _attaining_start(pair, f0, cfg):
    """A unit domain vector maximizing f0 over the embedded ball."""
    x = attaining_direction(pair.domain, pair.embedding.T @ f0)
    if x is not None:
        return x
    res = sphere_maximize(
        lambda v: float(f0 @ (pair.embedding @ v)),
        pair.domain.unit,
        pair.k,
        cfg,
    )
    return res.point


def _repair_grid(eps):
    ts = {0.0, 1.0}
    t = eps * eps / 32.0
    while t < 1.0:
        ts.add(t)
        t *= 2.0
    for t in np.linspace(0.0, 1.0, 9):
        ts.add(float(t))
    return sorted(ts)


def bpb_repair_classical(pair, x0, f0, eps, cfg=None):
    """Repair a near-attaining pair into an attaining one within eps.

    Requires deficiency 1 - f0(J x0) < eps^2 / 4.  Walks from x0 toward a
    direction attaining f0, taking the nearest state at each step, and
    returns the best pair found; raises :class:`RepairError` carrying the
    best attempt if nothing lands strictly inside eps.
    """
    if cfg is None:
        cfg = SearchConfig(budget=600, starts=6)
    dom = pair.domain
    x0 = dom.require_unit(x0, tol=1e-8)
    f0 = np.asarray(f0, dtype=float)
    nf = pair.space.dual(f0)
    if not (abs(nf.upper - 1.0) <= 1e-6):
        raise UnitVectorError(f"functional must be dual-unit, norm {nf.upper!r}")
    f0 = f0 / nf.upper
    deficiency = 1.0 - float(f0 @ pair.embed(x0))
    threshold = eps * eps / 4.0
    if not (deficiency < threshold):
        raise PreconditionError(
            f"deficiency {deficiency:.3e} not below eps^2/4 = {threshold:.3e}",
            threshold=threshold,
        )

    x_att = _attaining_start(pair, f0, cfg)
    best = None

    def consider(t, xt):
        nonlocal best
        st = pair.states_at(xt)
        ns = nearest_state(st, f0)
        dx = float(dom.norm(xt - x0))
        fx = ns.functional
        cand = RepairResult(
            x=xt,
            functional=fx,
            dx=dx,
            dy=ns.distance,
            pairing=float(fx @ pair.embed(xt)),
            t=t,
        )
        if best is None or cand.distance < best.distance:
            best = cand
        return cand.distance

    for t in _repair_grid(eps):
        try:
            xt = dom.unit((1.0 - t) * x0 + t * x_att)
        except UnitVectorError:
            continue
        d = consider(t, xt)
        if d < 0.5 * eps:
            break

    # local refinement around the best t found
    if best is not None and best.distance >= 0.5 * eps:
        span = 0.25
        t0 = best.t
        for _ in range(6):
            for t in np.linspace(max(0.0, t0 - span), min(1.0, t0 + span), 5):
                try:
                    xt = dom.unit((1.0 - t) * x0 + t * x_att)
                except UnitVectorError:
                    continue
                consider(float(t), xt)
            t0 = best.t
            span *= 0.5

    if best is None or not (best.distance < eps):
        raise RepairError(
            "no attaining pair found within eps",
            best=best,
            best_distance=None if best is None else best.distance,
        )
    return best


def bpb_repair_absolute(space, x0, f0, eps, cfg=None):
    """Repair for absolute sums: the domain is the left summand.

    The input pair is (x0, f0) with x0 a left-summand unit vector and f0 a
    dual-unit functional on the whole sum that nearly attains at (x0, 0).
    The deficiency must be below min(delta1(eps/3), eps^2/36), where delta1
    comes from the dual gauge's cap-diameter profile.  The left part of f0
    is repaired classically at eps/3; the right part is kept if its dual
    norm is at most the dual gauge's face height b0, else scaled down to
    b0.  Either way the glued functional is exactly dual-unit and attains
    at the repaired left point.
    """
    if not isinstance(space, AbsoluteSum):
        raise ValueError("absolute repair needs an AbsoluteSum space")
    e, fsp = space.left, space.right
    gd = space.gauge.dual()
    b0 = face_height(gd)
    delta1 = delta_for_cap_diameter(gd, eps / 3.0)
    threshold = min(delta1, eps * eps / 36.0)

    x0 = e.require_unit(x0, tol=1e-8)
    f0 = np.asarray(f0, dtype=float)
    nf = space.dual(f0)
    if not (abs(nf.upper - 1.0) <= 1e-6):
        raise UnitVectorError(f"functional must be dual-unit, norm {nf.upper!r}")
    f0 = f0 / nf.upper
    fx, fz = f0[: e.dim], f0[e.dim :]
    y0 = np.concatenate([x0, np.zeros(fsp.dim)])
    deficiency = 1.0 - float(f0 @ y0)
    if not (deficiency < threshold):
        raise PreconditionError(
            f"deficiency {deficiency:.3e} not below {threshold:.3e}"
            f" = min(delta1(eps/3), eps^2/36)",
            threshold=threshold,
        )

    nfx = e.dual(fx).upper
    sub = bpb_repair_classical(identity_pair(e), x0, fx / nfx, eps / 3.0, cfg)

    nfz = fsp.dual(fz).upper
    if nfz <= b0:
        fz1, case = fz, "kept"
    else:
        fz1, case = fz * (b0 / nfz), "scaled"

    f1 = np.concatenate([sub.functional, fz1])
    x1 = sub.x
    pairing = float(f1 @ np.concatenate([x1, np.zeros(fsp.dim)]))
    norm1 = space.dual(f1).upper
    if abs(pairing - 1.0) > 1e-8 or abs(norm1 - 1.0) > 1e-8:
        raise RepairError(
            f"glued pair not attaining: pairing {pairing!r}, dual norm {norm1!r}",
            best=None,
        )
    dx = float(e.norm(x1 - x0))
    dy = space.dual(f1 - f0).upper
    out = RepairResult(
        x=x1, functional=f1, dx=dx, dy=dy, pairing=pairing, t=sub.t, case=case
    )
    if not (out.distance < eps):
        raise RepairError(
            "glued pair exceeds eps", best=out, best_distance=out.distance
        )
    return out


@dataclass
class RestrictionReport:
    trials: int
    worst_pairing_error: float
    worst_dual_excess: float

    @property
    def passed(self):
        return self.worst_pairing_error <= 1e-8 and self.worst_dual_excess <= 1e-8


def check_state_restriction(pair, u, trials=50, seed=0):
    """Verify that ambient states at Ju restrict to domain states at u.

    For sampled ambient states f, the pulled-back functional J^T f must
    pair to 1 with u; its domain dual norm is at most the ambient dual norm
    of f, so the ambient certificate is what gets checked.  Reports the
    worst deviations.
    """
    dom = pair.domain
    u = dom.require_unit(u, tol=1e-8)
    st = pair.states_at(u)
    fs = st.sample(count=trials, seed=seed)
    worst_pair = 0.0
    worst_dual = 0.0
    for f in fs:
        g = pair.embedding.T @ f
        worst_pair = max(worst_pair, abs(float(g @ u) - 1.0))
        d = pair.space.dual(f)
        # with an inexact bracket only a lower bound above 1 is a real
        # violation; the upper endpoint would report bracket slack
        excess = (d.upper if d.exact else d.lower) - 1.0
        worst_dual = max(worst_dual, max(0.0, excess))
    return RestrictionReport(len(fs), worst_pair, worst_dual)


def sample_near_attaining(pair, eps, seed, max_shrink=60):
    """A random near-attaining pair with deficiency strictly below eps^2/4.

    Perturbs an exactly attaining pair on the point side, the functional
    side, or both; perturbation sizes shrink until the deficiency clears
    the repair precondition.
    """
    rng = stream(seed, 31)
    dom = pair.domain
    threshold = eps * eps / 4.0
    for _ in range(24):
        x_att = dom.unit(rng.standard_normal(pair.k))
        st = pair.states_at(x_att)
        f_att = st.support()
        mode = ["dual", "point", "both"][int(rng.integers(0, 3))]
        h = rng.standard_normal(pair.space.dim)
        d = rng.standard_normal(pair.k)
        s = 0.5 * eps
        r = 0.5 * eps
        for _ in range(max_shrink):
            f0 = f_att + (s * h if mode in ("dual", "both") else 0.0)
            nf = pair.space.dual(f0).upper
            if nf <= 0:
                s *= 0.5
                continue
            f0 = f0 / nf
            try:
                x0 = (
                    dom.unit(x_att + r * d)
                    if mode in ("point", "both")
                    else x_att
                )
            except UnitVectorError:
                r *= 0.5
                continue
            deficiency = 1.0 - float(f0 @ pair.embed(x0))
            if deficiency < 0.98 * threshold:
                return x0, f0
            s *= 0.5
            r *= 0.5
    raise RepairError("could not sample a near-attaining pair")
