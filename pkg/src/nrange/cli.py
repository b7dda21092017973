"""Command line front end.

Subcommands mirror the task kinds of the spec-file format plus ``verify``:

    nrange eval|tau|range|gap-sweep|ssd|convexity|smoothness|absnorm
           --spec FILE [--task NAME] [--seed N] [--budget N] [--starts N]
           [--out DIR]
    nrange bpb repair|modulus --spec FILE ...
    nrange gap-sweep --family ID --m "4 16" --alpha "1 0.3" --seed N ...
    nrange verify [--out DIR] [--criteria 1,3,10]

Exit status: 0 on success, 1 on usage or input errors, 2 when a task ran
but a numerical postcondition failed.
"""

import argparse
import os
import sys

import numpy as np

from .duality import tau
from .errors import NRangeError, SpecError
from .families import FAMILY_IDS, sweep
from .gauges import cap_diameter, delta_for_cap_diameter, face_height
from .moduli import (
    bpb_modulus,
    modulus_of_convexity,
    ssd_modulus,
    uniform_smoothness_profile,
)
from .optimize import SearchConfig
from .pairs import bpb_repair_classical, sample_near_attaining
from .ranges import gap_report
from .report import write_csv, write_curves
from .specfile import RANDOMIZED_TASK_KINDS, TaskRecord, parse_spec

__all__ = ["main", "run_task", "TaskOutcome"]

_USAGE_EXIT = 1
_POSTCONDITION_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(_USAGE_EXIT)


class TaskOutcome:
    def __init__(self, ok, paths, note=""):
        self.ok = ok
        self.paths = paths
        self.note = note


def _resolve(out_dir, path):
    if os.path.isabs(path):
        return path
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, path)


def _svg_path(params, out_dir, default=None):
    if "svg" in params:
        return _resolve(out_dir, params["svg"])
    if default is not None:
        return _resolve(out_dir, default)
    return None


def _search_cfg(params, budget, starts):
    kw = {}
    if params.get("budget") is not None:
        kw["budget"] = params["budget"]
    if params.get("starts") is not None:
        kw["starts"] = params["starts"]
    if params.get("seed") is not None:
        kw["seed"] = params["seed"]
    base = SearchConfig(budget=budget, starts=starts)
    return SearchConfig(
        budget=kw.get("budget", base.budget),
        starts=kw.get("starts", base.starts),
        seed=kw.get("seed", base.seed),
    )


def _run_eval(params, out_dir):
    space = params["space"]
    v = params["vector"]
    rows = [("norm", float(space.norm(v)), float(space.norm(v)), True)]
    f = params.get("functional")
    if f is not None:
        d = space.dual(f)
        rows.append(("dual_norm", d.lower, d.upper, d.exact))
        rows.append(("pairing", float(f @ v), float(f @ v), True))
    path = write_csv(
        _resolve(out_dir, params["out"]),
        ("quantity", "lower", "upper", "exact"),
        rows,
    )
    return TaskOutcome(True, [path])


def _run_tau(params, out_dir):
    space = params["space"]
    u = space.unit(params["point"])
    br = tau(space, u, params["direction"])
    rows = [("quotient", a, q) for a, q in br.trace]
    rows += [
        ("lower", "", br.lower),
        ("upper", "", br.upper),
        ("exact", "", br.exact),
    ]
    path = write_csv(
        _resolve(out_dir, params["out"]), ("record", "alpha", "value"), rows
    )
    paths = [path]
    svg = _svg_path(params, out_dir)
    if svg:
        xs = [a for a, _ in br.trace]
        ys = [q for _, q in br.trace]
        paths.append(
            write_curves(
                svg,
                [("difference quotient", xs, ys)],
                "alpha",
                "quotient",
                "norm derivative quotients",
                logx=True,
            )
        )
    quotients = [q for _, q in br.trace]
    ok = all(b <= a + 1e-10 for a, b in zip(quotients, quotients[1:]))
    note = "" if ok else "recorded quotients not monotone"
    return TaskOutcome(ok, paths, note)


def _run_range(params, out_dir):
    op = params["operator"]
    cfg = _search_cfg(params, budget=1500, starts=8)
    rep = gap_report(op.pair, op, cfg)
    w_max = rep.w_max.value
    w_min = -rep.w_min.value
    row = (
        w_max,
        w_min,
        rep.v_max.lower,
        rep.v_max.upper,
        -rep.v_min.upper,
        -rep.v_min.lower,
        rep.gap,
    )
    path = write_csv(
        _resolve(out_dir, params["out"]),
        (
            "sup_re_w",
            "inf_re_w",
            "max_re_v_lower",
            "max_re_v_upper",
            "min_re_v_lower",
            "min_re_v_upper",
            "gap",
        ),
        [row],
    )
    ok = (
        w_max <= rep.v_max.upper + 1e-6 + rep.v_max.width
        and -w_min <= rep.v_min.upper + 1e-6 + rep.v_min.width
    )
    note = "" if ok else "spatial estimate escapes the intrinsic bracket"
    return TaskOutcome(ok, [path], note)


def _run_gap_sweep(params, out_dir):
    mode = params.get("mode", "structured-exact")
    prof = sweep(
        params["family"],
        params["m"],
        params["alpha"],
        mode=mode,
        budget=params.get("budget", 400),
        seed=params["seed"],
    )
    rows = [
        (params["family"], m, a, q, r, s, abs(q - r))
        for m, a, q, r, s in prof.rows
    ]
    path = write_csv(
        _resolve(out_dir, params["out"]),
        ("family", "m", "alpha", "quotient", "reference", "sup_re_w",
         "abs_error"),
        rows,
    )
    paths = [path]
    stem = params["out"]
    default_svg = os.path.splitext(stem)[0] + ".svg"
    svg = _svg_path(params, out_dir, default=default_svg)
    curves = []
    for a in params["alpha"]:
        pts = [(m, q) for m, aa, q, _, _ in prof.rows if aa == float(a)]
        curves.append(
            (f"alpha={a:g}", [m for m, _ in pts], [q for _, q in pts])
        )
    m_vals = params["m"]
    paths.append(
        write_curves(
            svg,
            curves,
            "m",
            "gap quotient",
            f"{params['family']}: quotient versus truncation size",
            logx=max(m_vals) / max(min(m_vals), 1) >= 8,
        )
    )
    ok = True
    note = ""
    if mode == "structured-exact":
        err = prof.max_reference_error()
        ok = err <= 1e-6
        note = f"max |quotient - reference| = {err:.3g}"
    return TaskOutcome(ok, paths, note)


def _run_bpb_repair(params, out_dir):
    pair = params["pair"]
    trials = params.get("trials", 50)
    seed = params["seed"]
    rows = []
    ok = True
    for eps in params["eps"]:
        for t in range(trials):
            x0, f0 = sample_near_attaining(pair, eps, seed=seed * 100003 + t)
            deficiency = 1.0 - float(f0 @ pair.embed(x0))
            try:
                res = bpb_repair_classical(pair, x0, f0, eps)
                good = res.distance < eps
                rows.append(
                    (eps, t, deficiency, res.dx, res.dy, res.distance, good)
                )
            except NRangeError:
                good = False
                rows.append((eps, t, deficiency, "", "", "", False))
            ok = ok and good
    path = write_csv(
        _resolve(out_dir, params["out"]),
        ("eps", "trial", "deficiency", "dx", "dy", "distance", "success"),
        rows,
    )
    note = "" if ok else "some repairs missed the target distance"
    return TaskOutcome(ok, [path], note)


def _run_bpb_modulus(params, out_dir):
    pair = params["pair"]
    curve = bpb_modulus(
        pair,
        params["eps"],
        trials=params.get("trials", 80),
        seed=params["seed"],
    )
    rows = [(e, v, curve.certification) for e, v in curve.as_rows()]
    path = write_csv(
        _resolve(out_dir, params["out"]),
        ("eps", "delta", "certification"),
        rows,
    )
    vals = list(curve.values)
    ok = all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    note = "" if ok else "modulus values not monotone"
    return TaskOutcome(ok, [path], note)


def _run_ssd(params, out_dir):
    space = params["space"]
    u = space.unit(params["point"])
    curve = ssd_modulus(
        space,
        u,
        params["eps"],
        samples=params.get("samples", 300),
        seed=params["seed"],
    )
    rows = [(e, v, curve.certification) for e, v in curve.as_rows()]
    path = write_csv(
        _resolve(out_dir, params["out"]),
        ("eps", "zeta", "certification"),
        rows,
    )
    paths = [path]
    svg = _svg_path(params, out_dir)
    if svg:
        paths.append(
            write_curves(
                svg,
                [("zeta", list(curve.eps), list(curve.values))],
                "eps",
                "zeta",
                "strong subdifferentiability modulus",
            )
        )
    vals = list(curve.values)
    ok = all(0.0 <= v <= 1.0 + 1e-12 for v in vals) and all(
        b >= a - 1e-12 for a, b in zip(vals, vals[1:])
    )
    note = "" if ok else "modulus values out of range or not monotone"
    return TaskOutcome(ok, paths, note)


def _run_convexity(params, out_dir):
    space = params["space"]
    curve = modulus_of_convexity(
        space,
        params["eps"],
        samples=params.get("samples", 200),
        seed=params["seed"],
    )
    rows = [(e, v, curve.certification) for e, v in curve.as_rows()]
    path = write_csv(
        _resolve(out_dir, params["out"]),
        ("eps", "delta", "certification"),
        rows,
    )
    paths = [path]
    svg = _svg_path(params, out_dir)
    if svg:
        paths.append(
            write_curves(
                svg,
                [("delta", list(curve.eps), list(curve.values))],
                "eps",
                "delta",
                "modulus of convexity",
            )
        )
    vals = list(curve.values)
    ok = all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    note = "" if ok else "modulus values not monotone"
    return TaskOutcome(ok, paths, note)


def _run_smoothness(params, out_dir):
    space = params["space"]
    curve = uniform_smoothness_profile(
        space,
        params["t"],
        samples=params.get("samples", 200),
        seed=params["seed"],
    )
    rows = [(t, v, curve.certification) for t, v in curve.as_rows()]
    path = write_csv(
        _resolve(out_dir, params["out"]),
        ("t", "defect", "certification"),
        rows,
    )
    paths = [path]
    svg = _svg_path(params, out_dir)
    if svg:
        paths.append(
            write_curves(
                svg,
                [("defect", list(curve.eps), list(curve.values))],
                "t",
                "defect",
                "uniform smoothness profile",
                logx=True,
            )
        )
    ok = all(v >= -1e-12 for v in curve.values)
    note = "" if ok else "negative smoothness defect"
    return TaskOutcome(ok, paths, note)


def _run_absnorm(params, out_dir):
    gauge = params["gauge"]
    rows = [("face_height", "", face_height(gauge))]
    deltas = params.get("delta", [2.0 ** -k for k in range(1, 11)])
    diams = []
    for d in deltas:
        rep = cap_diameter(gauge, d)
        diams.append(rep.diameter)
        rows.append(("cap_diameter", d, rep.diameter))
    ok = True
    note = ""
    for e in params.get("eps", []):
        try:
            rows.append(("delta_for", e, delta_for_cap_diameter(gauge, e)))
        except NRangeError:
            rows.append(("delta_for", e, float("nan")))
            ok = False
            note = f"no grid delta brings the cap diameter below {e:g}"
    path = write_csv(
        _resolve(out_dir, params["out"]), ("record", "param", "value"), rows
    )
    paths = [path]
    svg = _svg_path(params, out_dir)
    if svg:
        paths.append(
            write_curves(
                svg,
                [("cap diameter", list(deltas), diams)],
                "delta",
                "diameter",
                "cap diameter versus delta",
                logx=True,
            )
        )
    pairs_sorted = sorted(zip(deltas, diams))
    mono = all(
        a <= b + 1e-12
        for (_, a), (_, b) in zip(pairs_sorted, pairs_sorted[1:])
    )
    if not mono:
        ok = False
        note = "cap diameter not monotone in delta"
    return TaskOutcome(ok, paths, note)


_RUNNERS = {
    "eval": _run_eval,
    "tau": _run_tau,
    "range": _run_range,
    "gap-sweep": _run_gap_sweep,
    "bpb-repair": _run_bpb_repair,
    "bpb-modulus": _run_bpb_modulus,
    "ssd": _run_ssd,
    "convexity": _run_convexity,
    "smoothness": _run_smoothness,
    "absnorm": _run_absnorm,
}


def run_task(task, out_dir=".", overrides=None):
    """Execute one parsed task record; returns a TaskOutcome."""
    params = dict(task.params)
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        params[key] = val
    if task.kind in RANDOMIZED_TASK_KINDS and params.get("seed") is None:
        raise SpecError(f"task {task.name!r} needs a seed")
    return _RUNNERS[task.kind](params, out_dir)


def _load_spec(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise SpecError(f"cannot read {path}: {err}")
    return parse_spec(text)


def _run_from_spec(args, kind):
    spec = _load_spec(args.spec)
    names = [n for n, t in spec.tasks.items() if t.kind == kind]
    if args.task is not None:
        if args.task not in spec.tasks:
            raise SpecError(f"no task named {args.task!r} in {args.spec}")
        if spec.tasks[args.task].kind != kind:
            raise SpecError(
                f"task {args.task!r} has kind"
                f" {spec.tasks[args.task].kind!r}, not {kind!r}"
            )
        names = [args.task]
    if not names:
        raise SpecError(f"{args.spec} defines no task of kind {kind!r}")
    overrides = {
        "seed": getattr(args, "seed", None),
        "budget": getattr(args, "budget", None),
        "starts": getattr(args, "starts", None),
    }
    failed = []
    for name in names:
        outcome = run_task(spec.tasks[name], args.out, overrides)
        status = "ok" if outcome.ok else "POSTCONDITION FAILED"
        tail = f" ({outcome.note})" if outcome.note else ""
        print(f"{name}: wrote {', '.join(outcome.paths)} [{status}]{tail}")
        if not outcome.ok:
            failed.append(name)
    if failed:
        print(f"{len(failed)} task(s) failed a numerical postcondition")
        return _POSTCONDITION_EXIT
    return 0


def _num_list(text, typ, what):
    try:
        return [typ(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise SpecError(f"bad {what} list {text!r}")


def _cmd_gap_sweep(args):
    if args.spec is not None:
        return _run_from_spec(args, "gap-sweep")
    if args.family is None or args.m is None or args.alpha is None:
        raise SpecError("gap-sweep needs --spec, or --family/--m/--alpha")
    if args.seed is None:
        raise SpecError("gap-sweep is randomized and needs an explicit --seed")
    if args.family not in FAMILY_IDS:
        raise SpecError(f"unknown family {args.family!r}")
    params = {
        "family": args.family,
        "m": _num_list(args.m, int, "m"),
        "alpha": _num_list(args.alpha, float, "alpha"),
        "mode": args.mode,
        "seed": args.seed,
        "out": "gap_sweep.csv",
    }
    if args.budget is not None:
        params["budget"] = args.budget
    task = TaskRecord("gap-sweep", "gap-sweep", params, 0)
    outcome = run_task(task, args.out)
    status = "ok" if outcome.ok else "POSTCONDITION FAILED"
    tail = f" ({outcome.note})" if outcome.note else ""
    print(f"gap-sweep: wrote {', '.join(outcome.paths)} [{status}]{tail}")
    return 0 if outcome.ok else _POSTCONDITION_EXIT


def _cmd_verify(args):
    from . import acceptance

    wanted = None
    if args.criteria:
        wanted = set(_num_list(args.criteria, int, "criteria"))
    results = acceptance.run_all(indices=wanted, out_dir=args.out)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"[{r.index:2d}] {mark} {r.name} ({r.seconds:.1f}s): {r.detail}")
    rows = [(r.index, r.name, r.passed, r.detail) for r in results]
    path = write_csv(
        _resolve(args.out, "verify.csv"),
        ("criterion", "name", "passed", "detail"),
        rows,
    )
    bad = sum(1 for r in results if not r.passed)
    print(f"wrote {path}; {len(results) - bad}/{len(results)} criteria passed")
    return 0 if bad == 0 else _POSTCONDITION_EXIT


def _add_common(p, spec_required=True):
    p.add_argument("--spec", required=spec_required, help="task file")
    p.add_argument("--task", help="run only this task from the file")
    p.add_argument("--seed", type=int, help="override task seeds")
    p.add_argument("--budget", type=int, help="override search budgets")
    p.add_argument("--starts", type=int, help="override search start counts")
    p.add_argument("--out", default=".", help="output directory")


def _build_parser():
    parser = _Parser(
        prog="nrange",
        description="numerical ranges, norm derivatives, and attainment"
        " moduli for finite-dimensional operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in ("eval", "tau", "range", "ssd", "convexity", "smoothness",
                 "absnorm"):
        p = sub.add_parser(kind, help=f"run {kind} tasks from a task file")
        _add_common(p)
        p.set_defaults(func=lambda a, k=kind: _run_from_spec(a, k))

    p = sub.add_parser("gap-sweep", help="family gap sweeps")
    _add_common(p, spec_required=False)
    p.add_argument("--family", choices=FAMILY_IDS)
    p.add_argument("--m", help="truncation sizes, e.g. '4 16 64'")
    p.add_argument("--alpha", help="alphas, e.g. '1 0.3 0.1'")
    p.add_argument(
        "--mode",
        default="structured-exact",
        choices=("structured-exact", "optimizer"),
    )
    p.set_defaults(func=_cmd_gap_sweep)

    bpb = sub.add_parser("bpb", help="attainment repair tasks")
    bsub = bpb.add_subparsers(dest="bpb_command", required=True)
    p = bsub.add_parser("repair", help="run bpb-repair tasks")
    _add_common(p)
    p.set_defaults(func=lambda a: _run_from_spec(a, "bpb-repair"))
    p = bsub.add_parser("modulus", help="run bpb-modulus tasks")
    _add_common(p)
    p.set_defaults(func=lambda a: _run_from_spec(a, "bpb-modulus"))

    p = sub.add_parser("verify", help="run the built-in acceptance checks")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--criteria", help="subset to run, e.g. '1,3,10'")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as err:
        print(f"nrange: {err}", file=sys.stderr)
        return _USAGE_EXIT
    except NRangeError as err:
        print(f"nrange: {err}", file=sys.stderr)
        return _POSTCONDITION_EXIT


if __name__ == "__main__":
    sys.exit(main())
