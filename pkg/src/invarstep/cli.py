"""Command-line front end: parse a problem document, dispatch analyses, emit reports.

Input is a JSON document (path or stdin). Reports go to stdout, diagnostics to
stderr. Exit codes: 0 = success / invariance holds, 1 = invariance violated or
threshold zero, 2 = input error, 3 = numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from . import __version__, invariance, oracle, report, sets, thresholds
from .errors import (InvarStepError, NoConvergence, NotFlowInvariant,
                     Overflow, ParseError, SingularShift, UnsupportedSet,
                     ValidationError)
from .examples import BUILTIN
from .invariance import Outcome
from .sets import (Ellipsoid, HPolyhedron, LorenzCone, PolyhedralCone,
                   PolyhedronPair, SetSpec, VPolyhedron)
from .systems import EulerMap, LinearSystem, Method, simulate

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


@dataclass
class ProblemSpec:
    system: LinearSystem
    set_spec: Optional[SetSpec]
    method: Optional[Method]
    point: Optional[np.ndarray]
    dt: Optional[float]
    steps: int
    samples: int
    seed: int
    tol: float
    tol_dt: float
    doc: Dict


_SET_BUILDERS = {
    "ellipsoid": lambda d: Ellipsoid(Q=_matrix(d, "Q")),
    "h-polyhedron": lambda d: HPolyhedron(G=_matrix(d, "G"), b=_vector(d, "b")),
    "v-polyhedron": lambda d: VPolyhedron(vertices=_matrix(d, "vertices"),
                                          rays=d.get("rays", [])),
    "polyhedron-pair": lambda d: PolyhedronPair(
        h=HPolyhedron(G=_matrix(d, "G"), b=_vector(d, "b")),
        v=VPolyhedron(vertices=_matrix(d, "vertices"), rays=d.get("rays", []))),
    "lorenz-cone": lambda d: (LorenzCone(Q=_matrix(d, "Q"), u_n=_vector(d, "u_n"))
                              if "u_n" in d else LorenzCone.from_q(_matrix(d, "Q"))),
    "polyhedral-cone": lambda d: PolyhedralCone(rays=_matrix(d, "rays"),
                                                facet_normals=_matrix(d, "facet_normals")),
}


def _matrix(d: Dict, key: str):
    if key not in d:
        raise ParseError(f"missing field '{key}' in set description")
    return d[key]


def _vector(d: Dict, key: str):
    if key not in d:
        raise ParseError(f"missing field '{key}' in set description")
    return d[key]


def parse_spec(doc: Dict, require_set: bool = True) -> ProblemSpec:
    """Validate a problem document and build the working objects."""
    if not isinstance(doc, dict):
        raise ParseError("problem document must be a JSON object")
    if "system" not in doc:
        raise ParseError("missing field 'system'")
    sysdoc = doc["system"]
    set_spec: Optional[SetSpec] = None
    if isinstance(sysdoc, dict) and "example" in sysdoc:
        name = sysdoc["example"]
        if name not in BUILTIN:
            raise ParseError(f"unknown example '{name}'; choose from {sorted(BUILTIN)}")
        system, set_spec = BUILTIN[name]()
    elif isinstance(sysdoc, dict) and "A" in sysdoc:
        try:
            system = LinearSystem(np.asarray(sysdoc["A"], dtype=float))
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad system matrix: {exc}") from exc
    else:
        raise ParseError("field 'system' needs either 'A' or 'example'")

    if "set" in doc:
        setdoc = doc["set"]
        if not isinstance(setdoc, dict) or "type" not in setdoc:
            raise ParseError("field 'set' must be an object with a 'type'")
        kind = setdoc["type"]
        if kind not in _SET_BUILDERS:
            raise ParseError(f"unknown set type '{kind}'; choose from {sorted(_SET_BUILDERS)}")
        try:
            set_spec = _SET_BUILDERS[kind](setdoc)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad set description: {exc}") from exc
    if require_set and set_spec is None:
        raise ParseError("missing field 'set' (and no built-in example chosen)")

    method = None
    if "method" in doc:
        try:
            method = Method(doc["method"])
        except ValueError as exc:
            raise ParseError(
                f"unknown method '{doc['method']}'; choose forward-euler or "
                "backward-euler") from exc

    point = None
    if doc.get("point") is not None:
        point = np.asarray(doc["point"], dtype=float).reshape(-1)

    spec = ProblemSpec(
        system=system, set_spec=set_spec, method=method, point=point,
        dt=float(doc["dt"]) if doc.get("dt") is not None else None,
        steps=int(doc.get("steps", 100)),
        samples=int(doc.get("samples", 10000)),
        seed=int(doc.get("seed", 0)),
        tol=float(doc.get("tol", 1e-9)),
        tol_dt=float(doc.get("tol_dt", 1e-9)),
        doc=doc,
    )
    _validate_spec(spec)
    return spec


def _validate_spec(spec: ProblemSpec):
    if spec.tol <= 0 or spec.tol_dt <= 0:
        raise ValidationError("tolerances must be positive")
    if spec.set_spec is not None and spec.system.dim != sets.dimension(spec.set_spec):
        raise ValidationError(
            f"system dimension {spec.system.dim} differs from set dimension "
            f"{sets.dimension(spec.set_spec)}")
    if spec.point is not None and spec.point.size != spec.system.dim:
        raise ValidationError("point dimension differs from system dimension")
    if spec.set_spec is not None:
        vr = sets.validate_set(spec.set_spec, spec.tol)
        if not vr.ok:
            raise ValidationError("; ".join(m for _, _, m in vr.failures))
    if spec.dt is not None and spec.dt < 0:
        raise ValidationError("dt must be nonnegative")


# ---------------------------------------------------------------------------
# Result rendering
# ---------------------------------------------------------------------------

def _verdict_dict(v: invariance.Verdict) -> Dict:
    out = {"outcome": v.outcome.value, "margin": v.margin,
           "certificate": v.certificate}
    if v.witness is not None:
        out["witness"] = v.witness
    return out


def _threshold_dict(r: thresholds.ThresholdReport, tol: float) -> Dict:
    return {"kind": r.kind.value, "value": r.value, "inclusive": r.inclusive,
            "basis": r.basis, "tolerance": tol, "diagnostics": r.diagnostics}


def _require(value, name: str):
    if value is None:
        raise ValidationError(f"command needs '{name}' (flag or document field)")
    return value


def run_command(spec: ProblemSpec, command: str) -> Dict:
    """Dispatch one CLI command and collect its results."""
    results: Dict = {}
    s = spec.set_spec
    a = spec.system.A

    if command == "validate":
        vr = sets.validate_set(s, spec.tol)
        results["valid"] = vr.ok
        results["failures"] = [
            {"invariant": name, "margin": margin, "message": msg}
            for name, margin, msg in vr.failures]
        return results

    if command == "check":
        method = _require(spec.method, "method")
        results["continuous"] = _verdict_dict(_continuous_check(a, s, spec))
        dt = _require(spec.dt, "dt")
        m = thresholds.systems.step_matrix(spec.system, method, dt)
        results["discrete"] = dict(_verdict_dict(_discrete_check(m, s, spec)), dt=dt)
        return results

    if command == "threshold":
        method = _require(spec.method, "method")
        if spec.point is not None and isinstance(s, (Ellipsoid, LorenzCone)) \
                and method == Method.BACKWARD_EULER:
            local = thresholds.local_backward_euler(a, s, spec.point, spec.tol)
            results["local"] = _threshold_dict(local, spec.tol)
        if method == Method.BACKWARD_EULER:
            certified = thresholds.backward_euler_uniform(a, s, spec.tol, seed=spec.seed)
        elif isinstance(s, PolyhedronPair):
            certified = thresholds.forward_euler_uniform_polyhedron(a, s, spec.tol)
        else:
            certified = None
        if certified is not None:
            results["certified"] = _threshold_dict(certified, spec.tol)
        optimal = thresholds.optimal_uniform(a, s, method, tol=spec.tol,
                                             tol_dt=spec.tol_dt)
        results["optimal"] = _threshold_dict(optimal, spec.tol_dt)
        emp = oracle.empirical_threshold(EulerMap(spec.system, method), s,
                                         n=spec.samples, dt_hi=_empirical_ceiling(optimal),
                                         seed=spec.seed, tol=spec.tol)
        results["empirical"] = _threshold_dict(emp, spec.tol)
        return results

    if command == "simulate":
        method = _require(spec.method, "method")
        dt = _require(spec.dt, "dt")
        x0 = _require(spec.point, "point")
        res = simulate(EulerMap(spec.system, method), dt, x0, spec.steps,
                       guard=s, tol=spec.tol)
        results["trajectory"] = res.states
        results["first_exit"] = res.first_exit
        if res.margins is not None:
            results["margins"] = res.margins
        return results

    if command == "verify":
        method = _require(spec.method, "method")
        dt = _require(spec.dt, "dt")
        rep = oracle.sample_verify(EulerMap(spec.system, method), dt, s,
                                   n=spec.samples, seed=spec.seed, tol=spec.tol)
        results["violations"] = rep.violations
        results["max_excursion"] = rep.max_excursion
        results["min_margin"] = rep.min_margin
        results["witnesses"] = rep.witnesses
        results["samples"] = rep.n
        if rep.warnings:
            results["warnings"] = rep.warnings
        return results

    raise ParseError(f"unknown command '{command}'")


def _empirical_ceiling(optimal: thresholds.ThresholdReport) -> float:
    if optimal.value > 0 and np.isfinite(optimal.value):
        return 2.0 * optimal.value
    return 10.0


def _continuous_check(a, s, spec: ProblemSpec) -> invariance.Verdict:
    if isinstance(s, Ellipsoid):
        return invariance.continuous_ellipsoid(a, s, spec.tol)
    if isinstance(s, PolyhedronPair):
        return invariance.continuous_polyhedron(a, s, spec.tol)
    if isinstance(s, PolyhedralCone):
        return invariance.cross_positive_polyhedral(a, s, spec.tol)
    if isinstance(s, LorenzCone):
        return invariance.continuous_lorenz_necessary(a, s, n_samples=spec.samples,
                                                      seed=spec.seed, tol=spec.tol)
    raise UnsupportedSet(f"no continuous check for {type(s).__name__}")


def _discrete_check(m, s, spec: ProblemSpec) -> invariance.Verdict:
    if isinstance(s, Ellipsoid):
        return invariance.discrete_ellipsoid(m, s, spec.tol)
    if isinstance(s, PolyhedronPair):
        return invariance.discrete_polyhedron(m, s, spec.tol)
    if isinstance(s, LorenzCone):
        return invariance.discrete_lorenz(m, s, spec.tol)
    if isinstance(s, PolyhedralCone):
        return invariance.discrete_polyhedral_cone(m, s, spec.tol)
    raise UnsupportedSet(f"no discrete check for {type(s).__name__}")


def _exit_code(command: str, results: Dict) -> int:
    if command == "validate":
        return EXIT_OK if results["valid"] else EXIT_VIOLATED
    if command == "check":
        bad = any(results[k]["outcome"] == Outcome.FAILS.value
                  for k in ("continuous", "discrete") if k in results)
        return EXIT_VIOLATED if bad else EXIT_OK
    if command == "threshold":
        value = results["optimal"]["value"]
        return EXIT_VIOLATED if value <= 0 else EXIT_OK
    if command == "simulate":
        return EXIT_VIOLATED if results.get("first_exit") is not None else EXIT_OK
    if command == "verify":
        return EXIT_VIOLATED if results["violations"] > 0 else EXIT_OK
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _read_document(path: Optional[str]) -> Dict:
    import json
    try:
        if path is None or path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except OSError as exc:
        raise ParseError(f"cannot read input: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def _render_text(rep: Dict) -> str:
    lines = [f"invarstep {rep['version']} :: {rep['command']}"]

    def walk(prefix: str, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}{k}.", v) if isinstance(v, (dict,)) else \
                    lines.append(f"  {prefix}{k} = {report.dumps(report.jsonable(v))}")
        else:
            lines.append(f"  {prefix[:-1]} = {obj}")

    walk("", rep["results"])
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invarstep",
                                description="Invariance-preserving steplength analysis "
                                            "for Euler discretizations")
    p.add_argument("command",
                   choices=["validate", "check", "threshold", "simulate", "verify"])
    p.add_argument("--input", default=None, help="JSON problem document ('-' for stdin)")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--tol-dt", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--method", choices=[m.value for m in Method], default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        doc = _read_document(args.input)
        for flag in ("tol", "samples", "seed", "dt", "steps", "method"):
            v = getattr(args, flag)
            if v is not None:
                doc[flag] = v
        if args.tol_dt is not None:
            doc["tol_dt"] = args.tol_dt
        spec = parse_spec(doc)
        results = run_command(spec, args.command)
        code = _exit_code(args.command, results)
    except (ParseError, ValidationError, UnsupportedSet) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoConvergence, SingularShift, Overflow, NotFlowInvariant) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InvarStepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    rep = {
        "schema_version": report.SCHEMA_VERSION,
        "tool": "invarstep",
        "version": __version__,
        "command": args.command,
        "input": spec.doc,
        "seed": spec.seed,
        "results": results,
        "timing_s": time.perf_counter() - started,
    }
    if args.format == "json":
        print(report.dumps(rep))
    else:
        print(_render_text(report.loads(report.dumps(rep))))
    return code


if __name__ == "__main__":
    sys.exit(main())
