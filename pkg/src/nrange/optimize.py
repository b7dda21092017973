"""Derivative-free maximization over unit spheres.

The searcher is deterministic for a fixed seed and monotone in budget: a
larger ``budget`` evaluates a strict superset of the points a smaller one
does (starts are consumed sequentially, each start's random directions come
from its own counter-based stream), so the best value can only improve.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import UnitVectorError
from .rng import stream

__all__ = ["SearchConfig", "SearchResult", "sphere_maximize", "hull_interval"]


@dataclass(frozen=True)
class SearchConfig:
    budget: int = 2000
    starts: int = 8
    seed: int = 0
    step_init: float = 0.5
    step_decay: float = 0.8
    step_floor: float = 1e-7
    include_basis: bool = True

    def with_seed(self, seed):
        return replace(self, seed=seed)


@dataclass
class SearchResult:
    value: float
    point: np.ndarray
    evals: int
    start_index: int


def _start_points(dim, cfg, extra_starts):
    pts = []
    for x in extra_starts or []:
        pts.append(np.asarray(x, dtype=float))
    if cfg.include_basis:
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = 1.0
            pts.append(e)
            pts.append(-e)
        pts.append(np.ones(dim))
    k = 0
    while len(pts) < max(cfg.starts, len(pts)):
        if len(pts) >= cfg.starts:
            break
        rng = stream(cfg.seed, 1, k)
        pts.append(rng.standard_normal(dim))
        k += 1
    return pts


def sphere_maximize(objective, project, dim, cfg=None, extra_starts=None):
    """Maximize ``objective`` over the unit sphere defined by ``project``.

    project maps any nonzero vector to its unit sphere (raising
    UnitVectorError near the kernel).  Starts are tried in a fixed order:
    caller-supplied points, signed basis vectors, the all-ones vector, then
    seeded random directions.  All starts are scored up front; each then
    runs a step-decay pattern search with random and coordinate directions
    inside an equal budget window.
    """
    if cfg is None:
        cfg = SearchConfig()
    starts = []
    for raw in _start_points(dim, cfg, extra_starts):
        try:
            starts.append(project(np.asarray(raw, dtype=float)))
        except UnitVectorError:
            continue
    if not starts:
        raise UnitVectorError("no feasible start point on the sphere")

    # every start is scored before any descent begins, so cheap global
    # structure (basis directions, warm starts) is never starved by the
    # budget; each start then ascends inside its own budget window
    best_val = -np.inf
    best_x = None
    best_idx = -1
    evals = 0
    vals = []
    for idx, x in enumerate(starts):
        if evals >= cfg.budget:
            break
        v = float(objective(x))
        evals += 1
        vals.append(v)
        if v > best_val:
            best_val, best_x, best_idx = v, x, idx

    window = max(0, (cfg.budget - evals) // max(1, len(vals)))
    for idx in range(len(vals)):
        left = min(window, cfg.budget - evals)
        if left <= 0:
            break
        x, val = starts[idx], vals[idx]
        rng = stream(cfg.seed, 2, idx)
        step = cfg.step_init
        while step > cfg.step_floor and left > 0:
            improved = False
            dirs = []
            for _ in range(2):
                d = rng.standard_normal(dim)
                n = float(np.linalg.norm(d))
                if n > 0:
                    dirs.append(d / n)
            ci = int(rng.integers(0, dim))
            e = np.zeros(dim)
            e[ci] = 1.0
            dirs.append(e)
            for d in dirs:
                for sgn in (1.0, -1.0):
                    if left <= 0:
                        break
                    try:
                        cand = project(x + sgn * step * d)
                    except UnitVectorError:
                        continue
                    cv = float(objective(cand))
                    evals += 1
                    left -= 1
                    if cv > val:
                        x, val = cand, cv
                        improved = True
                if left <= 0:
                    break
            if not improved:
                step *= cfg.step_decay
        if val > best_val:
            best_val, best_x, best_idx = val, x, idx

    return SearchResult(best_val, best_x, evals, best_idx)


def hull_interval(values):
    """Smallest interval containing the given real values."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise ValueError("hull of an empty collection")
    return float(np.min(arr)), float(np.max(arr))
