import itertools

import numpy as np
import pytest

from nrange.families import (
    FAMILY_IDS,
    make_family,
    reference_quotient,
    structured_opnorm,
    sweep,
)
from nrange.optimize import SearchConfig
from nrange.ranges import sup_spatial
from nrange.spaces import Lp

SIGN_FAMILIES = ("remark_case1", "example32", "prop33")
EUCLID_FAMILIES = ("thm21", "example34")


def _brute_opnorm_signs(inst, alpha):
    # the domain is (isometric to) a max-norm cube, so the operator norm
    # is attained at a sign vector
    mat = inst.pair.embedding + alpha * inst.op.matrix
    best = 0.0
    for bits in itertools.product((-1.0, 1.0), repeat=inst.pair.k):
        v = float(inst.pair.space.norm(mat @ np.array(bits)))
        best = max(best, v)
    return best


def _brute_opnorm_circle(inst, alpha, n=200001):
    # euclidean domain of dimension 2: scan the unit circle
    th = np.linspace(0.0, 2.0 * np.pi, n)
    xs = np.stack([np.cos(th), np.sin(th)], axis=1)
    mat = inst.pair.embedding + alpha * inst.op.matrix
    vals = np.asarray(inst.pair.space.norm(xs @ mat.T))
    return float(np.max(vals))


def test_closed_form_laws_at_selected_points():
    inst = make_family("thm21", 4)
    assert reference_quotient(inst, 1.0) == pytest.approx(0.6, abs=1e-12)
    inst32 = make_family("example32", 20)
    sigma = 1.0 - 2.0 ** -20
    want = ((1.1) * sigma - 1.0) / 0.1
    assert reference_quotient(inst32, 0.1) == pytest.approx(want, abs=1e-12)
    assert reference_quotient(inst32, 0.1) > 0.99998


def test_structured_norm_matches_sign_enumeration():
    for fam in SIGN_FAMILIES:
        for m in (2, 3):
            inst = make_family(fam, m)
            for alpha in (1.0, 0.3, 0.03):
                brute = _brute_opnorm_signs(inst, alpha)
                assert abs(brute - structured_opnorm(inst, alpha)) <= 1e-9, (
                    fam, m, alpha)


def test_structured_norm_matches_circle_scan_on_euclidean_domains():
    for fam in EUCLID_FAMILIES:
        inst = make_family(fam, 2)
        for alpha in (1.0, 0.3):
            brute = _brute_opnorm_circle(inst, alpha)
            got = structured_opnorm(inst, alpha)
            assert brute <= got + 1e-9
            assert got - brute <= 1e-4, (fam, alpha)


def test_case2_oracle_norm_matches_circle_scan():
    inst = make_family("remark_case2", 2)
    for alpha in (1.0, 0.5):
        brute = _brute_opnorm_circle(inst, alpha)
        got = structured_opnorm(inst, alpha)
        assert brute <= got + 1e-9
        assert got - brute <= 1e-6


def test_case2_quotient_stays_clear_of_vanishing():
    inst = make_family("remark_case2", 8)
    q = reference_quotient(inst, 1.0)
    assert inst.reference_kind == "oracle-only"
    assert q == pytest.approx(0.7329344670461311, abs=1e-9)
    assert q > (np.sqrt(2.0) - 1.0) / 2.0


def test_spatial_range_vanishes_for_every_family():
    for fam in FAMILY_IDS:
        inst = make_family(fam, 4)
        est = sup_spatial(inst.pair, inst.op,
                          SearchConfig(budget=400, starts=6, seed=1))
        assert abs(est.value) <= 1e-8, (fam, est.value)


def test_embeddings_reproduce_intended_domains():
    for fam in FAMILY_IDS:
        inst = make_family(fam, 4)
        assert inst.isometry_defect(samples=100, seed=0) <= 1e-10, fam


def test_attainment_deficit_scales():
    assert make_family("thm21", 4).eta == pytest.approx(0.2, abs=1e-15)
    assert make_family("example32", 8).eta == pytest.approx(2.0 ** -8, abs=1e-18)
    assert make_family("remark_case2", 8).eta == pytest.approx(0.125, abs=1e-15)


def test_optimizer_mode_confirms_structured_norms():
    structured = sweep("example34", [4, 16], [1.0, 0.3],
                       mode="structured-exact", budget=600, seed=2)
    searched = sweep("example34", [4, 16], [1.0, 0.3],
                     mode="optimizer", budget=600, seed=2)
    for (ra, rb) in zip(structured.rows, searched.rows):
        assert ra[:2] == rb[:2]
        # the searched norm is a lower bound of the structured one
        assert rb[2] <= ra[2] + 1e-9
        assert ra[2] - rb[2] <= 5e-3


def test_quotient_trends_toward_the_double_limit():
    # growing m at fixed alpha pushes the quotient toward 1; shrinking
    # alpha at fixed m drives it to zero
    qs = []
    for m in (4, 16, 64, 256):
        inst = make_family("thm21", m)
        qs.append(reference_quotient(inst, 0.5))
    assert all(a < b for a, b in zip(qs, qs[1:]))
    assert qs[-1] > 0.98

    inst8 = make_family("thm21", 8)
    assert reference_quotient(inst8, 1e-4) == 0.0
    assert structured_opnorm(inst8, 1e-4) == 1.0


def test_sweep_rows_follow_the_laws():
    prof = sweep("remark_case1", [3, 9], [1.0, 0.1], budget=300, seed=0)
    assert prof.max_reference_error() <= 1e-9
    assert prof.max_supw() <= 1e-8
    assert len(prof.rows) == 4


def test_custom_base_for_the_functional_family():
    base = Lp(1.0, 3)
    v0 = np.array([0.5, 0.25, 0.25])
    inst = make_family("prop33", 3, base=base, functional=v0)
    assert inst.eta == pytest.approx(0.5, abs=1e-12)
    assert reference_quotient(inst, 1.0) == pytest.approx(0.0, abs=1e-12)
    assert inst.isometry_defect() <= 1e-10


def test_family_constructor_rejections():
    with pytest.raises(ValueError):
        make_family("nope", 4)
    with pytest.raises(ValueError):
        make_family("thm21", 1)
    with pytest.raises(ValueError):
        make_family("prop33", 3, base=Lp(1.0, 3))
    with pytest.raises(ValueError):
        make_family("prop33", 3, base=Lp(1.0, 3),
                    functional=np.array([2.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        sweep("thm21", [4], [0.5], mode="exhaustive")
    with pytest.raises(ValueError):
        sweep("thm21", [], [0.5])
