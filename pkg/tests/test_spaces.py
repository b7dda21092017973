import numpy as np
import pytest

from nrange.errors import DimensionMismatch, UnitVectorError
from nrange.gauges import LpGauge
from nrange.rng import stream
from nrange.spaces import (
    AbsoluteSum,
    Lp,
    MaxOf,
    Pullback,
    SumOf,
    attaining_direction,
    check_norm_axioms,
)


def _tree_zoo():
    return [
        Lp(1.0, 3),
        Lp(2.0, 3),
        Lp(np.inf, 3),
        Lp(1.7, 2),
        AbsoluteSum(LpGauge(1.0), Lp(np.inf, 2), Lp(2.0, 2)),
        AbsoluteSum(LpGauge(np.inf), Lp(1.0, 2), Lp(3.0, 1)),
        Pullback(np.array([[1.0, 0.5], [0.0, 1.0], [1.0, -1.0]]), Lp(2.0, 3)),
        MaxOf([Lp(1.0, 2), Lp(np.inf, 2)]),
        SumOf([Lp(2.0, 2), Lp(np.inf, 2)]),
    ]


def test_axioms_hold_on_tree_zoo():
    for space in _tree_zoo():
        rep = check_norm_axioms(space, samples=150, seed=3)
        assert rep.is_norm, space.describe()
        assert rep.homogeneity_error <= 1e-9
        assert rep.triangle_violation <= 1e-9
        ok, smin = space.is_norm()
        assert ok and smin > 1e-12


def test_norm_values_frozen():
    y = AbsoluteSum(LpGauge(1.0), Lp(np.inf, 3), Lp(2.0, 2))
    v = np.array([1.0, -1.0, 0.5, 0.3, 0.4])
    assert float(y.norm(v)) == pytest.approx(1.5, abs=1e-12)
    m = MaxOf([Lp(1.0, 2), Lp(np.inf, 2)])
    assert float(m.norm(np.array([0.5, -0.5]))) == pytest.approx(1.0)
    s = SumOf([Lp(1.0, 2), Lp(np.inf, 2)])
    assert float(s.norm(np.array([0.5, -0.5]))) == pytest.approx(1.5)
    pb = Pullback(np.array([[2.0, 0.0], [0.0, 1.0]]), Lp(np.inf, 2))
    assert float(pb.norm(np.array([1.0, 1.0]))) == pytest.approx(2.0)


def test_batched_norm_matches_rowwise():
    rng = stream(5, 1)
    for space in _tree_zoo():
        block = rng.standard_normal((8, space.dim))
        batch = np.asarray(space.norm(block))
        rows = np.array([float(space.norm(r)) for r in block])
        assert np.allclose(batch, rows, atol=1e-13)


def test_lp_dual_is_conjugate_exponent():
    rng = stream(5, 2)
    f = rng.standard_normal(4)
    d = Lp(3.0, 4).dual(f)
    assert d.exact
    assert d.upper == pytest.approx(float(np.sum(np.abs(f) ** 1.5) ** (1 / 1.5)))
    d1 = Lp(1.0, 4).dual(f)
    assert d1.exact and d1.upper == pytest.approx(float(np.max(np.abs(f))))
    di = Lp(np.inf, 4).dual(f)
    assert di.exact and di.upper == pytest.approx(float(np.sum(np.abs(f))))


def test_dual_bracket_vs_circle_grid():
    """Dim-2 dual norms against a dense sweep of the unit circle."""
    theta = np.linspace(0.0, 2.0 * np.pi, 200001)
    ray = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    spaces = [
        Lp(1.7, 2),
        AbsoluteSum(LpGauge(2.0), Lp(2.0, 1), Lp(2.0, 1)),
        Pullback(np.array([[1.0, 0.4], [-0.2, 1.0]]), Lp(1.3, 2)),
        MaxOf([Lp(1.0, 2), Lp(np.inf, 2)]),
        SumOf([Lp(2.0, 2), Lp(1.0, 2)]),
    ]
    rng = stream(5, 3)
    for space in spaces:
        sphere = ray / np.asarray(space.norm(ray))[:, None]
        for _ in range(4):
            f = rng.standard_normal(2)
            brute = float(np.max(sphere @ f))
            d = space.dual(f)
            assert d.lower - 1e-6 <= brute <= d.upper + 1e-6, space.describe()
            if d.exact:
                assert d.upper == pytest.approx(brute, abs=1e-6)


def test_dual_lower_never_exceeds_upper():
    rng = stream(5, 4)
    for space in _tree_zoo():
        for _ in range(6):
            d = space.dual(rng.standard_normal(space.dim))
            assert d.lower <= d.upper + 1e-12
            assert (d.width == 0.0) if d.exact else True


def test_support_pairs_to_norm_and_is_dual_feasible():
    rng = stream(5, 5)
    for space in _tree_zoo():
        for _ in range(12):
            u = rng.standard_normal(space.dim)
            n = float(space.norm(u))
            f = space.support(u)
            assert float(f @ u) == pytest.approx(n, rel=1e-9, abs=1e-9)
            d = space.dual(f)
            bound = d.upper if d.exact else d.lower
            assert bound <= 1.0 + 1e-9


def test_attaining_direction_reaches_dual_value():
    rng = stream(5, 6)
    for space in (Lp(2.0, 3), Lp(3.0, 3), Lp(1.0, 3), Lp(np.inf, 3)):
        f = rng.standard_normal(3)
        x = attaining_direction(space, f)
        assert float(space.norm(x)) == pytest.approx(1.0, abs=1e-10)
        assert float(f @ x) == pytest.approx(space.dual(f).upper, abs=1e-9)


def test_unit_normalizes_and_rejects_zero():
    space = Lp(2.0, 3)
    u = space.unit(np.array([3.0, 0.0, 4.0]))
    assert float(space.norm(u)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(UnitVectorError):
        space.unit(np.zeros(3))
    with pytest.raises(UnitVectorError):
        space.require_unit(np.array([1.0, 1.0, 1.0]))


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        Lp(2.0, 3).norm(np.ones(4))
    with pytest.raises(DimensionMismatch):
        Pullback(np.ones((2, 3)), Lp(2.0, 3))


def test_rank_deficient_pullback_is_seminorm():
    mat = np.array([[1.0, 1.0], [1.0, 1.0]])
    pb = Pullback(mat, Lp(2.0, 2))
    ok, smin = pb.is_norm()
    assert not ok
    assert smin <= 1e-12
    # vanishing direction
    assert float(pb.norm(np.array([1.0, -1.0]))) == pytest.approx(0.0, abs=1e-12)


def test_pullback_dual_minimum_preimage():
    """For invertible matrices the dual is an exact pullback through the
    inverse transpose; cross-check on a frozen example."""
    a = np.array([[2.0, 1.0], [0.0, 1.0]])
    pb = Pullback(a, Lp(1.0, 2))
    f = np.array([1.0, 0.5])
    # ||f||* = ||a^-T f||_inf
    g = np.linalg.solve(a.T, f)
    d = pb.dual(f)
    assert d.exact
    assert d.upper == pytest.approx(float(np.max(np.abs(g))), abs=1e-12)


def test_tall_pullback_dual_by_linear_program():
    """Non-square pullback of sup and l1 norms has an exact dual via the
    minimum-norm preimage; verify against the circle grid."""
    theta = np.linspace(0.0, 2.0 * np.pi, 400001)
    ray = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    for inner in (Lp(np.inf, 3), Lp(1.0, 3)):
        pb = Pullback(np.array([[1.0, 0.0], [0.0, 1.0], [0.7, -0.3]]), inner)
        sphere = ray / np.asarray(pb.norm(ray))[:, None]
        rng = stream(5, 7)
        for _ in range(4):
            f = rng.standard_normal(2)
            d = pb.dual(f)
            brute = float(np.max(sphere @ f))
            assert d.exact
            assert d.upper == pytest.approx(brute, abs=1e-5)


def test_unrepresentable_pullback_functional_has_infinite_dual():
    # the seminorm kernel direction supports no bounded functional with a
    # component along it
    mat = np.array([[1.0, 1.0]])
    pb = Pullback(mat, Lp(2.0, 1))
    d = pb.dual(np.array([1.0, -1.0]))
    assert d.upper == np.inf
