"""Strict line-oriented task files.

A file is a sequence of sections.  A section starts with ``[kind name]``
where kind is one of space, matrix, pair, operator, task; the body is
``key = value`` lines.  Blank lines and ``#`` comments are ignored.  All
names must resolve, dimensions are checked at load, unknown keys are
rejected, and every randomized task kind must carry an explicit seed --
each violation raises :class:`SpecError` with the offending line number.

Section reference::

    [space NAME]            norm expression
      kind = lp             p = <float or inf>, dim = <int>
      kind = absolute-sum   gauge = <gauge>, left = <space>, right = <space>
      kind = pullback       matrix = <matrix>, inner = <space>
      kind = max | sum      terms = <space>, <space>, ...

    [matrix NAME]
      data = a b c; d e f   rows separated by ';'

    [pair NAME]             domain embedded in an ambient space
      space = <space>
      embedding = <matrix>  optional; omitted means identity

    [operator NAME]
      pair = <pair>
      matrix = <matrix>

    [task NAME]
      kind = eval | tau | range | gap-sweep | bpb-repair | bpb-modulus
             | ssd | convexity | smoothness | absnorm
      out = <csv path>      svg = <svg path> (optional)
      ... task-specific keys (see _TASK_KEYS)

Gauge names: ``l1``, ``l2``, ``linf``, ``lp:<p>``, or
``pl:t:psi,t:psi,...`` for piecewise-linear profiles.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NRangeError, SpecError
from .gauges import gauge_from_name
from .pairs import OperatorSpec, SubspacePair
from .spaces import AbsoluteSum, Lp, MaxOf, Pullback, SumOf

__all__ = ["SpecFile", "TaskRecord", "parse_spec", "RANDOMIZED_TASK_KINDS"]

_SECTION_KINDS = ("space", "matrix", "pair", "operator", "task")

TASK_KINDS = (
    "eval",
    "tau",
    "range",
    "gap-sweep",
    "bpb-repair",
    "bpb-modulus",
    "ssd",
    "convexity",
    "smoothness",
    "absnorm",
)

RANDOMIZED_TASK_KINDS = (
    "range",
    "gap-sweep",
    "bpb-repair",
    "bpb-modulus",
    "ssd",
    "convexity",
    "smoothness",
)

_SPACE_KEYS = {
    "lp": {"kind", "p", "dim"},
    "absolute-sum": {"kind", "gauge", "left", "right"},
    "pullback": {"kind", "matrix", "inner"},
    "max": {"kind", "terms"},
    "sum": {"kind", "terms"},
}

_TASK_KEYS = {
    "eval": {"space", "vector", "functional"},
    "tau": {"space", "point", "direction"},
    "range": {"operator", "seed", "budget", "starts"},
    "gap-sweep": {"family", "m", "alpha", "mode", "seed", "budget"},
    "bpb-repair": {"pair", "eps", "trials", "seed", "budget"},
    "bpb-modulus": {"pair", "eps", "trials", "seed", "budget"},
    "ssd": {"space", "point", "eps", "samples", "seed"},
    "convexity": {"space", "eps", "samples", "seed"},
    "smoothness": {"space", "t", "samples", "seed"},
    "absnorm": {"gauge", "delta", "eps"},
}
_TASK_COMMON = {"kind", "out", "svg"}


@dataclass
class TaskRecord:
    name: str
    kind: str
    params: dict
    line: int


@dataclass
class SpecFile:
    spaces: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)
    operators: dict = field(default_factory=dict)
    tasks: dict = field(default_factory=dict)
    sections: list = field(default_factory=list)  # (kind, name, {key: raw}, line)

    def to_text(self):
        """Canonical text form; parsing it again reproduces the structure."""
        chunks = []
        for kind, name, body, _ in self.sections:
            lines = [f"[{kind} {name}]"]
            for k, v in body.items():
                lines.append(f"{k} = {v}")
            chunks.append("\n".join(lines))
        return "\n\n".join(chunks) + "\n"


def _parse_sections(text):
    sections = []
    current = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SpecError("unterminated section header", line=ln)
            head = line[1:-1].split()
            if len(head) != 2:
                raise SpecError(
                    "section header must be [kind name]", line=ln
                )
            kind, name = head
            if kind not in _SECTION_KINDS:
                raise SpecError(f"unknown section kind {kind!r}", line=ln)
            current = (kind, name, {}, ln)
            sections.append(current)
            continue
        if current is None:
            raise SpecError("key outside any section", line=ln)
        if "=" not in line:
            raise SpecError("expected key = value", line=ln)
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if not key:
            raise SpecError("empty key", line=ln)
        if key in current[2]:
            raise SpecError(f"duplicate key {key!r}", line=ln)
        current[2][key] = val
    return sections


def _floats(val, line, what):
    try:
        out = [float(tok) for tok in val.split()]
    except ValueError:
        raise SpecError(f"{what}: expected numbers, got {val!r}", line=line)
    if not out:
        raise SpecError(f"{what}: empty list", line=line)
    return out


def _matrix(val, line):
    rows = [r.strip() for r in val.split(";")]
    data = [_floats(r, line, "matrix row") for r in rows if r]
    if not data:
        raise SpecError("matrix: no rows", line=line)
    width = len(data[0])
    if any(len(r) != width for r in data):
        raise SpecError("matrix: ragged rows", line=line)
    return np.array(data, dtype=float)


def _parse_p(val, line):
    if val.lower() in ("inf", "infinity"):
        return np.inf
    try:
        return float(val)
    except ValueError:
        raise SpecError(f"p must be a number or inf, got {val!r}", line=line)


class _Resolver:
    def __init__(self, sections):
        self.space_bodies = {}
        self.spec = SpecFile(sections=sections)
        self._building = set()
        for kind, name, body, ln in sections:
            table = {
                "space": self.space_bodies,
                "matrix": self.spec.matrices,
                "pair": self.spec.pairs,
                "operator": self.spec.operators,
                "task": self.spec.tasks,
            }[kind]
            if name in table:
                raise SpecError(f"duplicate {kind} name {name!r}", line=ln)
            if kind == "matrix":
                if set(body) != {"data"}:
                    raise SpecError(
                        "matrix section takes exactly the key 'data'", line=ln
                    )
                table[name] = _matrix(body["data"], ln)
            else:
                table[name] = (body, ln)

    def space(self, name, line):
        if name in self.spec.spaces:
            return self.spec.spaces[name]
        if name not in self.space_bodies:
            raise SpecError(f"undefined space {name!r}", line=line)
        if name in self._building:
            raise SpecError(f"space {name!r} refers to itself", line=line)
        self._building.add(name)
        body, ln = self.space_bodies[name]
        expr = self._build_space(name, body, ln)
        self._building.discard(name)
        self.spec.spaces[name] = expr
        return expr

    def matrix(self, name, line):
        if name not in self.spec.matrices:
            raise SpecError(f"undefined matrix {name!r}", line=line)
        return self.spec.matrices[name]

    def _build_space(self, name, body, ln):
        kind = body.get("kind")
        if kind not in _SPACE_KEYS:
            raise SpecError(
                f"space {name!r}: unknown or missing kind {kind!r}", line=ln
            )
        extra = set(body) - _SPACE_KEYS[kind]
        if extra:
            raise SpecError(
                f"space {name!r}: unknown keys {sorted(extra)}", line=ln
            )
        missing = _SPACE_KEYS[kind] - set(body)
        if missing:
            raise SpecError(
                f"space {name!r}: missing keys {sorted(missing)}", line=ln
            )
        try:
            if kind == "lp":
                return Lp(_parse_p(body["p"], ln), int(body["dim"]))
            if kind == "absolute-sum":
                return AbsoluteSum(
                    gauge_from_name(body["gauge"]),
                    self.space(body["left"], ln),
                    self.space(body["right"], ln),
                )
            if kind == "pullback":
                return Pullback(
                    self.matrix(body["matrix"], ln), self.space(body["inner"], ln)
                )
            terms = [
                self.space(t.strip(), ln)
                for t in body["terms"].split(",")
                if t.strip()
            ]
            return MaxOf(terms) if kind == "max" else SumOf(terms)
        except SpecError:
            raise
        except (NRangeError, ValueError) as err:
            raise SpecError(f"space {name!r}: {err}", line=ln)

    def finish(self):
        for name in list(self.space_bodies):
            self.space(name, self.space_bodies[name][1])
        for name, (body, ln) in list(self.spec.pairs.items()):
            extra = set(body) - {"space", "embedding"}
            if extra:
                raise SpecError(
                    f"pair {name!r}: unknown keys {sorted(extra)}", line=ln
                )
            if "space" not in body:
                raise SpecError(f"pair {name!r}: missing 'space'", line=ln)
            space = self.space(body["space"], ln)
            emb = (
                self.matrix(body["embedding"], ln)
                if "embedding" in body
                else None
            )
            try:
                self.spec.pairs[name] = SubspacePair(space, emb)
            except (NRangeError, ValueError) as err:
                raise SpecError(f"pair {name!r}: {err}", line=ln)
        for name, (body, ln) in list(self.spec.operators.items()):
            extra = set(body) - {"pair", "matrix"}
            if extra:
                raise SpecError(
                    f"operator {name!r}: unknown keys {sorted(extra)}", line=ln
                )
            missing = {"pair", "matrix"} - set(body)
            if missing:
                raise SpecError(
                    f"operator {name!r}: missing keys {sorted(missing)}", line=ln
                )
            pname = body["pair"]
            if pname not in self.spec.pairs:
                raise SpecError(f"undefined pair {pname!r}", line=ln)
            try:
                self.spec.operators[name] = OperatorSpec(
                    self.spec.pairs[pname], self.matrix(body["matrix"], ln)
                )
            except (NRangeError, ValueError) as err:
                raise SpecError(f"operator {name!r}: {err}", line=ln)
        for name, (body, ln) in list(self.spec.tasks.items()):
            self.spec.tasks[name] = self._build_task(name, body, ln)
        return self.spec

    def _build_task(self, name, body, ln):
        kind = body.get("kind")
        if kind not in TASK_KINDS:
            raise SpecError(
                f"task {name!r}: unknown or missing kind {kind!r}", line=ln
            )
        allowed = _TASK_KEYS[kind] | _TASK_COMMON
        extra = set(body) - allowed
        if extra:
            raise SpecError(
                f"task {name!r}: unknown keys {sorted(extra)}", line=ln
            )
        if "out" not in body:
            raise SpecError(f"task {name!r}: missing 'out'", line=ln)
        if kind in RANDOMIZED_TASK_KINDS and "seed" not in body:
            raise SpecError(
                f"task {name!r}: kind {kind!r} is randomized and needs an"
                " explicit seed",
                line=ln,
            )
        params = {"out": body["out"]}
        if "svg" in body:
            params["svg"] = body["svg"]
        for key in _TASK_KEYS[kind] & set(body):
            val = body[key]
            if key in ("seed", "budget", "starts", "trials", "samples"):
                try:
                    params[key] = int(val)
                except ValueError:
                    raise SpecError(
                        f"task {name!r}: {key} must be an integer", line=ln
                    )
            elif key in ("vector", "functional", "point", "direction"):
                params[key] = np.array(_floats(val, ln, key))
            elif key in ("eps", "alpha", "t", "delta"):
                params[key] = _floats(val, ln, key)
            elif key == "m":
                params[key] = [int(x) for x in _floats(val, ln, key)]
            elif key == "space":
                params[key] = self.space(val, ln)
            elif key == "operator":
                if val not in self.spec.operators:
                    raise SpecError(f"undefined operator {val!r}", line=ln)
                params[key] = self.spec.operators[val]
            elif key == "pair":
                if val not in self.spec.pairs:
                    raise SpecError(f"undefined pair {val!r}", line=ln)
                params[key] = self.spec.pairs[val]
            elif key == "gauge":
                try:
                    params[key] = gauge_from_name(val)
                except (NRangeError, ValueError) as err:
                    raise SpecError(f"task {name!r}: {err}", line=ln)
            else:
                params[key] = val
        self._check_task_dims(name, kind, params, ln)
        return TaskRecord(name, kind, params, ln)

    def _check_task_dims(self, name, kind, params, ln):
        def need(key):
            if key not in params:
                raise SpecError(f"task {name!r}: missing {key!r}", line=ln)

        if kind == "eval":
            need("space")
            need("vector")
            if params["vector"].shape != (params["space"].dim,):
                raise SpecError(
                    f"task {name!r}: vector length does not match space dim",
                    line=ln,
                )
            f = params.get("functional")
            if f is not None and f.shape != (params["space"].dim,):
                raise SpecError(
                    f"task {name!r}: functional length does not match space"
                    " dim",
                    line=ln,
                )
        elif kind == "tau":
            need("space")
            need("point")
            need("direction")
            d = params["space"].dim
            if params["point"].shape != (d,) or params["direction"].shape != (d,):
                raise SpecError(
                    f"task {name!r}: point/direction must have length {d}",
                    line=ln,
                )
        elif kind == "range":
            need("operator")
        elif kind == "gap-sweep":
            need("family")
            need("m")
            need("alpha")
            from .families import FAMILY_IDS

            if params["family"] not in FAMILY_IDS:
                raise SpecError(
                    f"task {name!r}: unknown family {params['family']!r}",
                    line=ln,
                )
            if params.get("mode", "structured-exact") not in (
                "structured-exact",
                "optimizer",
            ):
                raise SpecError(f"task {name!r}: bad mode", line=ln)
        elif kind in ("bpb-repair", "bpb-modulus"):
            need("pair")
            need("eps")
        elif kind == "ssd":
            need("space")
            need("point")
            need("eps")
            if params["point"].shape != (params["space"].dim,):
                raise SpecError(
                    f"task {name!r}: point length does not match space dim",
                    line=ln,
                )
        elif kind == "convexity":
            need("space")
            need("eps")
        elif kind == "smoothness":
            need("space")
            need("t")
        elif kind == "absnorm":
            need("gauge")


def parse_spec(text):
    """Parse and fully validate a task file; raises SpecError on any
    violation, with the line number."""
    return _Resolver(_parse_sections(text)).finish()
