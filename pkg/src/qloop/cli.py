"""Command-line front end.

Reads one JSON job (``--spec FILE`` or stdin), runs it, writes a
deterministic JSON report.  Exit codes: 0 success, 1 mathematical failure
(a relation violation, a failed Yang-Baxter check, a failed suite entry),
2 usage error (bad arguments, schema violation, invalid zeta).

Example::

    echo '{"command": "drinfeld-poly", "diagram": "A1", "node": 1, "alpha": "3/1"}' | qloop
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional

import jsonschema

from .algebra import verify_relations
from .repmod import ConstructionError, drinfeld_polynomials, evaluation_module, tensor
from .rmatrix import solve_intertwiner, unipotence_check, yang_baxter_check
from .root_data import DiagramError, diagram_from_json
from .scalar import ZetaError, check_zeta, rational_from_str, rational_to_str
from .structure import (
    cyclicity_report,
    detect_orientation,
    generated_submodule,
    highest_weight_tensor,
    is_cocyclic,
    standard_module,
)

COMMANDS = ("build", "verify-relations", "tensor", "cyclic", "cocyclic", "drinfeld-poly", "rmatrix", "ybe", "standard-suite")

_RATIONAL = {"oneOf": [{"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}, {"type": "integer"}]}
_DIAGRAM = {
    "oneOf": [
        {"type": "string", "pattern": r"^[ADEade]_?\d+$"},
        {
            "type": "object",
            "properties": {"type": {"type": "string"}, "rank": {"type": "integer", "minimum": 1}},
            "required": ["type", "rank"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "vertices": {"type": "array", "items": {"type": "integer"}},
                "edges": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
                "name": {"type": "string"},
            },
            "required": ["edges"],
            "additionalProperties": False,
        },
    ]
}
_FACTOR = {
    "type": "object",
    "properties": {"node": {"type": "integer", "minimum": 1}, "alpha": _RATIONAL, "tau": {"type": "integer"}},
    "required": ["node"],
    "additionalProperties": False,
}
_PATTERN = {"type": "array", "minItems": 1, "items": _FACTOR}

JOB_SCHEMA = {
    "type": "object",
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "diagram": _DIAGRAM,
        "zeta": _RATIONAL,
        "node": {"type": "integer", "minimum": 1},
        "alpha": _RATIONAL,
        "tau": {"type": "integer"},
        "factors": {"type": "array", "minItems": 1, "items": _FACTOR},
        "coproduct": {"enum": ["circ", "bullet"]},
        "mode_bound": {"type": "integer", "minimum": 0},
        "series_order": {"type": "integer", "minimum": 0},
        "full": {"type": "boolean"},
        "diagrams": {"type": "array", "items": _DIAGRAM},
        "zetas": {"type": "array", "items": _RATIONAL},
        "patterns": {"type": "array", "items": _PATTERN},
    },
    "additionalProperties": False,
}


class UsageError(Exception):
    pass


def validate_job(job) -> dict:
    """Schema check; raises :class:`UsageError` naming the offending field."""
    v = jsonschema.Draft202012Validator(JOB_SCHEMA)
    errors = sorted(v.iter_errors(job), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
        if e.validator == "additionalProperties":
            known = set(e.schema.get("properties", {}))
            extra = sorted(set(e.instance) - known)
            raise UsageError(f"{path}: unknown field(s) {', '.join(extra)}")
        raise UsageError(f"{path}: {e.message}")
    if "command" not in job:
        raise UsageError("$.command: missing")
    return job


# ------------------------------------------------------------------ helpers


def _rational(x) -> Fraction:
    return Fraction(x) if isinstance(x, int) else rational_from_str(x)


def _zeta(job) -> Fraction:
    return check_zeta(_rational(job.get("zeta", "2/1")))


def _factors(job) -> List[dict]:
    if "factors" in job:
        return job["factors"]
    if "node" in job:
        return [{"node": job["node"], "alpha": job.get("alpha", "1/1"), "tau": job.get("tau", 0)}]
    raise UsageError("$: a module needs 'node' or 'factors'")


def _build_factors(job, check: bool = False):
    d = diagram_from_json(job.get("diagram", "A1"))
    zeta = _zeta(job)
    mods = []
    for f in _factors(job):
        alpha = _rational(f.get("alpha", "1/1"))
        m = evaluation_module(d, f["node"], alpha * zeta ** f.get("tau", 0), zeta, check=check)
        mods.append(m)
    return mods


def _build(job, check: bool = False):
    mods = _build_factors(job, check)
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m, job.get("coproduct", "circ"))
    return out


def _pattern_json(p):
    return [[f["node"], rational_to_str(_rational(f.get("alpha", "1/1"))), f.get("tau", 0)] for f in p]


# ---------------------------------------------------------------- commands


def cmd_build(job):
    return _build(job, check=True).to_json(), 0


def cmd_tensor(job):
    M = _build(job)
    return M.to_json(), 0


def cmd_verify(job):
    M = _build(job)
    rep = verify_relations(M, job.get("mode_bound", 3))
    return rep.to_json(full=job.get("full", False)), 0 if rep.ok else 1


def cmd_cyclic(job):
    M = _build(job)
    sub = generated_submodule(M, highest_weight_tensor(M))
    return {"cyclic": sub.is_full(), "submodule_dim": sub.dim, "witness_basis_size": sub.dim, "dimension": M.dim}, 0


def cmd_cocyclic(job):
    M = _build(job)
    return {"cocyclic": is_cocyclic(M, highest_weight_tensor(M)), "dimension": M.dim}, 0


def cmd_drinfeld(job):
    M = _build(job)
    P = drinfeld_polynomials(M)
    return {"drinfeld_polynomials": P.to_json(), "zeta": rational_to_str(M.zeta)}, 0


def cmd_rmatrix(job):
    mods = _build_factors(job)
    if len(mods) != 2:
        raise UsageError("$.factors: rmatrix needs exactly two factors")
    res = solve_intertwiner(*mods)
    out = {"intertwiner": res.to_json()}
    if res.matrix is not None and res.invertible:
        out["unipotence"] = unipotence_check(mods[0], mods[1], res).to_json()
    return out, 0


def cmd_ybe(job):
    mods = _build_factors(job)
    if len(mods) != 3:
        raise UsageError("$.factors: ybe needs exactly three factors")
    res = yang_baxter_check(*mods)
    return res.to_json(), 0 if res.ok else 1


DEFAULT_SUITE = {
    "diagrams": ["A1", "A2"],
    "zetas": ["2/1"],
    "patterns": [
        [{"node": 1, "alpha": "1/1", "tau": 2}, {"node": 1, "alpha": "1/1", "tau": 0}],
        [{"node": 1, "alpha": "1/1", "tau": 0}, {"node": 1, "alpha": "1/1", "tau": 2}],
        [{"node": 1, "alpha": "1/1", "tau": 3}, {"node": 1, "alpha": "1/1", "tau": 0}],
        [{"node": 1, "alpha": "1/1", "tau": 0}, {"node": 1, "alpha": "1/1", "tau": 3}],
        [{"node": 1, "alpha": "1/1", "tau": 4}, {"node": 1, "alpha": "1/1", "tau": 2}, {"node": 1, "alpha": "1/1", "tau": 0}],
        [{"node": 1, "alpha": "1/1", "tau": 0}, {"node": 1, "alpha": "1/1", "tau": 2}, {"node": 1, "alpha": "1/1", "tau": 4}],
    ],
}


def _suite_entry(args):
    diagram, zeta, pattern, orientation = args
    d = diagram_from_json(diagram)
    factors = [(f["node"], _rational(f.get("alpha", "1/1")), f.get("tau", 0)) for f in pattern]
    key = {"diagram": diagram if isinstance(diagram, str) else d.to_json(), "zeta": rational_to_str(zeta), "pattern": _pattern_json(pattern)}
    if any(n not in d.vertices for n, _, _ in factors):
        return dict(key, skipped="node outside diagram")
    M = standard_module(factors, zeta, "circ", d)
    rep = cyclicity_report(M)
    shifts = [t for _, _, t in factors]
    desc = all(a >= b for a, b in zip(shifts, shifts[1:]))
    asc = all(a <= b for a, b in zip(shifts, shifts[1:]))
    # the monotone direction matching the orientation must be cyclic; the
    # opposite one must be cocyclic
    good, other = (desc, asc) if orientation == "descending" else (asc, desc)
    expect = {}
    if good:
        expect["cyclic"] = True
    if other:
        expect["cocyclic"] = True
    ok = all(getattr(rep, k) == v for k, v in expect.items())
    return dict(key, **rep.to_json(), expected=expect, ok=ok)


def standard_suite(config: dict, jobs: int = 1):
    """Cyclicity/cocyclicity over every (diagram, zeta, pattern) combination.

    Missing keys of ``config`` fall back to :data:`DEFAULT_SUITE`.  Returns
    ``(report, exit_code)``; entries are sorted by key, so the report does
    not depend on ``jobs``.
    """
    cfg = {k: config.get(k, DEFAULT_SUITE[k]) for k in ("diagrams", "zetas", "patterns")}
    zetas = [check_zeta(_rational(z)) for z in cfg["zetas"]]
    for dg in cfg["diagrams"]:
        diagram_from_json(dg)
    tasks = []
    orientation = {}
    for z in zetas:
        if cfg["diagrams"] and cfg["patterns"]:
            orientation[z] = detect_orientation(z)
        for dg in cfg["diagrams"]:
            for p in cfg["patterns"]:
                tasks.append((dg, z, p, orientation[z]))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_suite_entry, tasks))
    else:
        results = [_suite_entry(t) for t in tasks]
    results.sort(key=lambda r: json.dumps([r["diagram"], r["zeta"], r["pattern"]], sort_keys=True))
    failed = sum(1 for r in results if r.get("ok") is False)
    out = {
        "orientation": {rational_to_str(z): o for z, o in sorted(orientation.items())},
        "results": results,
        "checked": len(results),
        "failed": failed,
    }
    return out, 0 if failed == 0 else 1


HANDLERS = {
    "build": cmd_build,
    "tensor": cmd_tensor,
    "verify-relations": cmd_verify,
    "cyclic": cmd_cyclic,
    "cocyclic": cmd_cocyclic,
    "drinfeld-poly": cmd_drinfeld,
    "rmatrix": cmd_rmatrix,
    "ybe": cmd_ybe,
}


def execute(job: dict, jobs: int = 1):
    """Validate and run a job; returns ``(report, exit_code)``."""
    job = validate_job(job)
    cmd = job["command"]
    try:
        if cmd == "standard-suite":
            report, code = standard_suite(job, jobs)
        else:
            report, code = HANDLERS[cmd](job)
    except ConstructionError as exc:
        return {"command": cmd, "error": str(exc), "report": exc.report.to_json()}, 1
    except (ZetaError, DiagramError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return dict(report, command=cmd), code


def _dump(obj, pretty: bool) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qloop", description="Exact computations with quantum loop algebra modules.")
    p.add_argument("command", nargs="?", choices=COMMANDS, help="command; may instead be given in the JSON job")
    p.add_argument("--spec", metavar="FILE", help="JSON job file (default: stdin)")
    p.add_argument("--pretty", action="store_true", help="indented output")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes for standard-suite")
    p.add_argument("--mode-bound", type=int, metavar="K", help="override the job's mode_bound")
    p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.spec:
            with open(args.spec) as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        job = json.loads(text) if text.strip() else {}
        if not isinstance(job, dict):
            raise UsageError("$: job must be a JSON object")
        if args.command:
            if job.get("command", args.command) != args.command:
                raise UsageError(f"$.command: {job['command']!r} conflicts with argument {args.command!r}")
            job["command"] = args.command
        if args.mode_bound is not None:
            job["mode_bound"] = args.mode_bound
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        report, code = execute(job, args.jobs)
    except (UsageError, json.JSONDecodeError, OSError) as exc:
        print(f"qloop: error: {exc}", file=sys.stderr)
        return 2
    text = _dump(report, args.pretty)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
