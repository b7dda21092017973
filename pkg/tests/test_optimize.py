import numpy as np
import pytest

from nrange.errors import UnitVectorError
from nrange.optimize import SearchConfig, hull_interval, sphere_maximize
from nrange.rng import stream
from nrange.spaces import Lp


def _quadratic(dim, seed):
    rng = stream(seed)
    m = rng.standard_normal((dim, dim))
    a = 0.5 * (m + m.T)
    lam = float(np.max(np.linalg.eigvalsh(a)))
    vec = np.linalg.eigh(a)[1][:, -1]
    return a, lam, vec


def test_search_is_deterministic():
    a, _, _ = _quadratic(4, 31)
    space = Lp(2.0, 4)
    obj = lambda x: float(x @ a @ x)
    cfg = SearchConfig(budget=600, starts=6, seed=5)
    r1 = sphere_maximize(obj, space.unit, 4, cfg)
    r2 = sphere_maximize(obj, space.unit, 4, cfg)
    assert r1.value == r2.value
    assert np.array_equal(r1.point, r2.point)
    assert r1.evals == r2.evals


def test_best_value_monotone_in_budget():
    a, _, _ = _quadratic(5, 32)
    space = Lp(2.0, 5)
    obj = lambda x: float(x @ a @ x)
    vals = []
    for budget in (100, 300, 900, 2700):
        cfg = SearchConfig(budget=budget, starts=8, seed=2)
        vals.append(sphere_maximize(obj, space.unit, 5, cfg).value)
    assert all(u <= v + 1e-15 for u, v in zip(vals, vals[1:]))


def test_finds_top_eigenvalue_of_quadratic_form():
    a, lam, _ = _quadratic(5, 33)
    space = Lp(2.0, 5)
    obj = lambda x: float(x @ a @ x)
    cfg = SearchConfig(budget=4000, starts=10, seed=0)
    res = sphere_maximize(obj, space.unit, 5, cfg)
    assert res.value <= lam + 1e-12
    assert lam - res.value <= 1e-4
    assert abs(np.linalg.norm(res.point) - 1.0) <= 1e-12
    assert res.evals <= 4000


def test_planted_start_is_used():
    a, lam, vec = _quadratic(6, 34)
    space = Lp(2.0, 6)
    obj = lambda x: float(x @ a @ x)
    # budget only covers scoring the starts, so the planted optimum must win
    cfg = SearchConfig(budget=14, starts=1, seed=0)
    res = sphere_maximize(obj, space.unit, 6, cfg, extra_starts=[vec])
    assert res.start_index == 0
    assert res.value == pytest.approx(lam, abs=1e-12)


def test_infeasible_projection_raises():
    def reject(x):
        raise UnitVectorError("kernel")

    with pytest.raises(UnitVectorError):
        sphere_maximize(lambda x: 0.0, reject, 3, SearchConfig(budget=50))


def test_with_seed_returns_new_config():
    cfg = SearchConfig(budget=123, starts=4, seed=9)
    other = cfg.with_seed(77)
    assert other.seed == 77
    assert other.budget == 123 and other.starts == 4
    assert cfg.seed == 9


def test_hull_interval():
    lo, hi = hull_interval([3.0, -1.5, 2.0])
    assert (lo, hi) == (-1.5, 3.0)
    with pytest.raises(ValueError):
        hull_interval([])
