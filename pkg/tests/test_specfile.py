import os

import numpy as np
import pytest

from nrange.errors import SpecError
from nrange.specfile import RANDOMIZED_TASK_KINDS, TASK_KINDS, parse_spec

SPEC_DIR = os.path.join(os.path.dirname(__file__), "..", "specs")


def _parse(*lines):
    return parse_spec("\n".join(lines) + "\n")


def _err(*lines):
    with pytest.raises(SpecError) as info:
        _parse(*lines)
    return info.value


def test_shipped_spec_files_parse():
    for fname, want_tasks in (
        ("demo.nrspec", {"norm_at_point", "corner_derivative", "turn_range",
                         "flatness", "roundness", "polygon_caps"}),
        ("superreflexive_m16.nrspec", {"superreflexive"}),
    ):
        with open(os.path.join(SPEC_DIR, fname)) as fh:
            spec = parse_spec(fh.read())
        assert set(spec.tasks) >= want_tasks, fname


def test_round_trip_is_idempotent():
    text = "\n".join([
        "[space y]",
        "kind = lp",
        "p = inf",
        "dim = 3",
        "",
        "[matrix t]",
        "data = 1 0 0; 0 0.5 0; 0 0 2",
        "",
        "[pair p]",
        "space = y",
        "",
        "[operator op]",
        "pair = p",
        "matrix = t",
        "",
        "[task r]",
        "kind = range",
        "operator = op",
        "seed = 3",
        "out = r.csv",
        "",
    ])
    spec = parse_spec(text)
    once = spec.to_text()
    assert parse_spec(once).to_text() == once
    again = parse_spec(once)
    assert set(again.tasks) == set(spec.tasks)
    assert again.tasks["r"].kind == "range"


def test_typed_task_parameters():
    spec = _parse(
        "[space y]", "kind = lp", "p = 2", "dim = 2",
        "[task s]", "kind = ssd", "space = y", "point = 0 1",
        "eps = 0.1 0.2", "samples = 50", "seed = 4", "out = s.csv",
    )
    task = spec.tasks["s"]
    assert task.params["seed"] == 4 and isinstance(task.params["seed"], int)
    assert task.params["eps"] == [0.1, 0.2]
    assert isinstance(task.params["point"], np.ndarray)
    assert spec.pairs == {}


def test_omitted_embedding_means_identity():
    spec = _parse(
        "[space y]", "kind = lp", "p = 2", "dim = 3",
        "[pair p]", "space = y",
    )
    assert np.array_equal(spec.pairs["p"].embedding, np.eye(3))


def test_low_level_line_diagnostics():
    assert _err("[space a").line == 1
    assert _err("", "[space]").line == 2
    assert _err("[blob x]").line == 1
    assert _err("p = 2").line == 1
    assert _err("[space a]", "kind").line == 2
    assert _err("[space a]", "= 3").line == 2
    assert _err("[space a]", "kind = lp", "kind = lp").line == 3


def test_duplicate_names_are_rejected():
    err = _err(
        "[space a]", "kind = lp", "p = 2", "dim = 2",
        "[space a]", "kind = lp", "p = 1", "dim = 2",
    )
    assert "duplicate" in str(err)
    assert err.line == 5


def test_space_section_validation():
    assert "unknown or missing kind" in str(_err("[space a]", "kind = weird"))
    assert "unknown keys" in str(_err(
        "[space a]", "kind = lp", "p = 2", "dim = 2", "extra = 1"))
    assert "missing keys" in str(_err("[space a]", "kind = lp", "p = 2"))
    assert "p must be a number" in str(_err(
        "[space a]", "kind = lp", "p = two", "dim = 2"))
    assert "undefined space" in str(_err(
        "[space a]", "kind = absolute-sum", "gauge = l1",
        "left = nope", "right = nope",
    ))
    err = _err("[space a]", "kind = max", "terms = a, a")
    assert "refers to itself" in str(err)
    assert err.line == 1


def test_matrix_section_validation():
    assert "ragged" in str(_err("[matrix m]", "data = 1 2; 3"))
    assert "exactly the key 'data'" in str(_err("[matrix m]", "rows = 1 2"))
    assert "expected numbers" in str(_err("[matrix m]", "data = 1 x"))
    err = _err(
        "[space y]", "kind = lp", "p = 2", "dim = 2",
        "[space a]", "kind = pullback", "matrix = nope", "inner = y",
    )
    assert "undefined matrix" in str(err)
    assert err.line == 5


def test_pair_and_operator_shape_checks():
    err = _err(
        "[space y]", "kind = lp", "p = 2", "dim = 2",
        "[matrix e]", "data = 1 0",
        "[pair p]", "space = y", "embedding = e",
    )
    assert "pair 'p'" in str(err)
    err2 = _err(
        "[space y]", "kind = lp", "p = 2", "dim = 2",
        "[matrix t]", "data = 1",
        "[pair p]", "space = y",
        "[operator op]", "pair = p", "matrix = t",
    )
    assert "operator 'op'" in str(err2)
    assert "undefined pair" in str(_err(
        "[space y]", "kind = lp", "p = 2", "dim = 2",
        "[matrix t]", "data = 1 0; 0 1",
        "[operator op]", "pair = nope", "matrix = t",
    ))


def test_task_section_validation():
    base = ("[space y]", "kind = lp", "p = 2", "dim = 2")
    assert "unknown or missing kind" in str(_err(
        *base, "[task t]", "kind = warp", "out = t.csv"))
    assert "missing 'out'" in str(_err(
        *base, "[task t]", "kind = convexity", "eps = 0.5", "seed = 1"))
    assert "unknown keys" in str(_err(
        *base, "[task t]", "kind = convexity", "eps = 0.5", "seed = 1",
        "out = t.csv", "wat = 1"))
    assert "vector length" in str(_err(
        *base, "[task t]", "kind = eval", "space = y", "vector = 1 0 0",
        "out = t.csv"))
    assert "point/direction" in str(_err(
        *base, "[task t]", "kind = tau", "space = y", "point = 1 0",
        "direction = 1", "out = t.csv"))
    assert "unknown family" in str(_err(
        *base, "[task t]", "kind = gap-sweep", "family = nope", "m = 4",
        "alpha = 1", "seed = 1", "out = t.csv"))
    assert "bad mode" in str(_err(
        *base, "[task t]", "kind = gap-sweep", "family = thm21", "m = 4",
        "alpha = 1", "mode = brute", "seed = 1", "out = t.csv"))
    assert "must be an integer" in str(_err(
        *base, "[task t]", "kind = convexity", "space = y", "eps = 0.5",
        "seed = 1.5", "out = t.csv"))


def test_every_randomized_kind_demands_a_seed():
    base = (
        "[space y]", "kind = lp", "p = 2", "dim = 2",
        "[matrix t]", "data = 0 1; -1 0",
        "[pair p]", "space = y",
        "[operator op]", "pair = p", "matrix = t",
    )
    bodies = {
        "range": ("operator = op",),
        "gap-sweep": ("family = thm21", "m = 4", "alpha = 1"),
        "bpb-repair": ("pair = p", "eps = 0.3"),
        "bpb-modulus": ("pair = p", "eps = 0.3"),
        "ssd": ("space = y", "point = 1 0", "eps = 0.2"),
        "convexity": ("space = y", "eps = 0.5"),
        "smoothness": ("space = y", "t = 0.1"),
    }
    assert set(bodies) == set(RANDOMIZED_TASK_KINDS)
    for kind, extra in bodies.items():
        err = _err(*base, f"[task t]", f"kind = {kind}", *extra, "out = t.csv")
        assert "needs an explicit seed" in str(err), kind
    # deterministic kinds do not
    spec = _parse(*base, "[task t]", "kind = eval", "space = y",
                  "vector = 1 0", "out = t.csv")
    assert spec.tasks["t"].kind == "eval"


def test_gauge_names_in_tasks():
    spec = _parse("[task a]", "kind = absnorm", "gauge = lp:1.5",
                  "delta = 0.1", "out = a.csv")
    assert spec.tasks["a"].params["gauge"].p == 1.5
    assert "task 'a'" in str(_err(
        "[task a]", "kind = absnorm", "gauge = xyz", "delta = 0.1",
        "out = a.csv"))


def test_task_kind_tables_are_consistent():
    assert set(RANDOMIZED_TASK_KINDS) <= set(TASK_KINDS)
    assert "eval" not in RANDOMIZED_TASK_KINDS
    assert "absnorm" not in RANDOMIZED_TASK_KINDS
