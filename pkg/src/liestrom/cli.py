"""Batch front end: run verifications, solves and searches from JSON problem
files and emit deterministic JSON (or text) reports.

Exit codes: 0 = all checks pass / solved, 1 = checked and failed, 2 = usage
or parse error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, algebra, bundle, connection, serialize, strominger
from .core import DEFAULT_TOL, LiestromError
from .strominger import Verdict


def _report_header(command: str, tol: float) -> dict:
    return {"command": command, "version": __version__, "tolerance": tol}


def _emit(report: dict, as_text: bool) -> None:
    if as_text:
        for line in _text_lines(report):
            print(line)
    else:
        print(serialize.dumps_canonical(report))


def _text_lines(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            value = obj[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{prefix}{key}:")
                lines.extend(_text_lines(value, prefix + "  "))
            else:
                lines.append(f"{prefix}{key}: {value}")
    elif isinstance(obj, list):
        for value in obj:
            lines.extend(_text_lines(value, prefix + "  "))
    else:
        lines.append(f"{prefix}{obj}")
    return lines


def _resolve_t(problem, override) -> float:
    raw = override if override is not None else problem.t
    if raw is None:
        raise serialize.ParameterError("no connection parameter: set \"t\" or pass --t")
    return connection.parse_t(raw)


def _frame_for(problem, tol):
    metric = problem.metric()
    return algebra.orthonormalize(problem.algebra, metric, tol)


def cmd_verify(problem, t, tol, as_text) -> int:
    report = _report_header("verify", tol)
    report["t"] = t
    validation = algebra.validate(problem.algebra, tol)
    report["checks"] = {"validate": validation.to_json_dict()}
    report["classification"] = algebra.classify3d(problem.algebra, tol).value
    if not validation.passed:
        report["passed"] = False
        _emit(report, as_text)
        return 1
    frame = _frame_for(problem, tol)
    unimod = algebra.is_unimodular(problem.algebra, tol)
    balanced = frame.balanced(tol)
    props = connection.verify_propositions(frame, tol)
    curv = connection.curvature_at(frame, t)
    direct = connection.tr_r_wedge_r(curv, tol)
    closed = connection.tr_r_wedge_r_closed(frame, t)
    trace_dev = (direct - closed).max_abs()
    tr_r = connection.first_chern(curv).scale(2.0 * np.pi / 1j)
    trace_real = (tr_r - tr_r.conjugate()).max_abs() <= tol
    rr_real = (direct - direct.conjugate()).max_abs() <= tol
    checks = report["checks"]
    checks["unimodular"] = unimod
    checks["balanced"] = balanced
    checks["balanced_matches_unimodular"] = balanced == unimod
    checks["propositions"] = props.to_json_dict()
    checks["curvature_trace_match"] = {"residual": trace_dev, "pass": trace_dev < tol}
    report["observations"] = {
        "r_bidegrees": [list(bd) for bd in curv.R.bidegrees()],
        "tr_r_is_real": trace_real,
        "tr_r_wedge_r_is_real_22": rr_real
        and all(bd == (2, 2) for bd in direct.bidegrees()),
    }
    passed = (
        validation.passed
        and props.all_passed
        and trace_dev < tol
        and balanced == unimod
    )
    report["passed"] = passed
    _emit(report, as_text)
    return 0 if passed else 1


def cmd_flat_solve(problem, t, tol, as_text) -> int:
    solve = strominger.flat_report(problem.algebra, problem.metric(), t, tol)
    report = _report_header("flat-solve", tol)
    report["report"] = solve.to_json_dict()
    _emit(report, as_text)
    return 0 if solve.verdict in (Verdict.UNIQUE, Verdict.INDETERMINATE) else 1


def _rep_and_twist(problem, frame, tol):
    if problem.representation_spec is None:
        raise serialize.ParameterError("this command needs a \"representation\" section")
    rep = serialize.representation_from_json(problem.representation_spec, frame)
    B = serialize.twist_matrix_from_json(problem.twist_spec, rep.m)
    return rep, bundle.make_twist(rep, B, tol)


def cmd_bundle_solve(problem, t, tol, as_text) -> int:
    frame = _frame_for(problem, tol)
    rep, twist = _rep_and_twist(problem, frame, tol)
    solve = bundle.solve_full_system(frame, rep, twist, t, tol)
    report = _report_header("bundle-solve", tol)
    report["fiber_dimension"] = rep.m
    report["report"] = solve.to_json_dict()
    _emit(report, as_text)
    return 0 if solve.verdict in (Verdict.UNIQUE, Verdict.INDETERMINATE) else 1


def cmd_search_metric(problem, t, tol, cfg, as_text) -> int:
    metric, residual, raw = strominger.metric_search(problem.algebra, t, cfg, tol)
    solve = strominger.flat_report(problem.algebra, metric, t, tol)
    report = _report_header("search-metric", tol)
    report["config"] = {
        "seed": cfg.seed, "restarts": cfg.restarts, "max_iters": cfg.max_iters,
        "initial_step": cfg.initial_step, "target_sign": cfg.target_sign,
    }
    report["method"] = raw.method
    report["best"] = {
        "residual": residual,
        "restart": raw.restart,
        "metric_H": serialize.matrix_to_json(metric.H),
        "verdict": solve.verdict.value,
        "alpha_prime": solve.alpha_prime,
    }
    report["restart_residuals"] = raw.restart_values
    report["evaluations"] = raw.evaluations
    _emit(report, as_text)
    return 0 if residual < tol else 1


def cmd_search_twist(problem, t, tol, cfg, as_text) -> int:
    frame = _frame_for(problem, tol)
    if problem.representation_spec is None:
        raise serialize.ParameterError("search-twist needs a \"representation\" section")
    rep = serialize.representation_from_json(problem.representation_spec, frame)
    B, residual, raw = bundle.twist_search(frame, rep, t, cfg, tol)
    report = _report_header("search-twist", tol)
    report["config"] = {
        "seed": cfg.seed, "restarts": cfg.restarts, "max_iters": cfg.max_iters,
        "initial_step": cfg.initial_step, "target_sign": cfg.target_sign,
    }
    report["method"] = raw.method
    report["best"] = {
        "residual": residual,
        "restart": raw.restart,
        "B": serialize.matrix_to_json(B),
    }
    report["restart_residuals"] = raw.restart_values
    report["evaluations"] = raw.evaluations
    _emit(report, as_text)
    return 0 if residual < tol else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liestrom",
        description="Invariant Hermitian geometry and reduced Strominger solves "
        "on complex Lie groups, driven by JSON problem files.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("verify", "flat-solve", "bundle-solve", "search-metric", "search-twist"):
        p = sub.add_parser(name)
        p.add_argument("problem", help="path to a JSON problem file")
        p.add_argument("--t", default=None,
                       help="connection parameter: a number or chern | bismut | "
                            "first-canonical | conformal | minimal-torsion")
        p.add_argument("--tol", type=float, default=None, help="comparison tolerance")
        p.add_argument("--seed", type=int, default=None, help="search seed override")
        p.add_argument("--restarts", type=int, default=None, help="search restarts override")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--json", dest="as_text", action="store_false", default=False)
        mode.add_argument("--text", dest="as_text", action="store_true")
    return parser


_KIND_FOR_SUBCOMMAND = {
    "verify": "verify",
    "flat-solve": "flat-solve",
    "bundle-solve": "bundle-solve",
    "search-metric": "search",
    "search-twist": "search",
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = serialize.load_problem(args.problem)
    except (OSError, ValueError, LiestromError) as exc:
        print(f"error: cannot read problem file: {exc}", file=sys.stderr)
        return 2

    expected = _KIND_FOR_SUBCOMMAND[args.subcommand]
    if problem.kind != expected:
        print(
            f"error: problem kind {problem.kind!r} does not fit subcommand "
            f"{args.subcommand!r} (expected {expected!r})",
            file=sys.stderr,
        )
        return 2

    tol = args.tol if args.tol is not None else problem.tol
    try:
        if args.subcommand in ("search-metric", "search-twist"):
            cfg = serialize.search_config_from_json(
                problem.search_spec, seed=args.seed, restarts=args.restarts
            )
            t = _resolve_t(problem, args.t) if (problem.t is not None or args.t) else -1.0
            if args.subcommand == "search-metric":
                return cmd_search_metric(problem, t, tol, cfg, args.as_text)
            return cmd_search_twist(problem, t, tol, cfg, args.as_text)
        t = _resolve_t(problem, args.t)
        if args.subcommand == "verify":
            return cmd_verify(problem, t, tol, args.as_text)
        if args.subcommand == "flat-solve":
            return cmd_flat_solve(problem, t, tol, args.as_text)
        return cmd_bundle_solve(problem, t, tol, args.as_text)
    except (LiestromError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
