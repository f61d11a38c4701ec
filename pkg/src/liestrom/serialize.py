"""JSON schemas for problem files and reports.

Algebra input (1-based indices, only i < j entries, omitted entries zero):

    {"n": 3, "c": [[i, j, k, re, im], ...]}
    {"catalog": "sl2"} | {"catalog": "solvable_c", "alpha": ..., ...}

Metric: "identity" | "canonical" | {"H": [[[re, im], ...] row, ...]}.
Representation: {"m": 2, "rho": [matrix, ...]} with row-major matrices of
[re, im] pairs, or {"sym_power": k} for the sl2 frame.  Twist: a matrix under
"B" or "identity".

A problem file carries exactly one of the four problem kinds under
"problem": verify | flat-solve | bundle-solve | search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import algebra, bundle
from .core import DEFAULT_TOL, InputShapeError, ParameterError
from .optim import SearchConfig

PROBLEM_KINDS = ("verify", "flat-solve", "bundle-solve", "search")


def _complex_from(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ParameterError(f"expected a real number or [re, im] pair, got {value!r}")


def matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array([[_complex_from(entry) for entry in row] for row in rows])
    except (TypeError, ParameterError) as exc:
        raise ParameterError(f"bad matrix payload: {exc}") from exc


def matrix_to_json(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def algebra_from_json(obj: dict) -> algebra.LieAlgebraData:
    if "catalog" in obj:
        params = {k: v for k, v in obj.items() if k != "catalog"}
        for key in ("alpha", "beta", "gamma"):
            if key in params:
                params[key] = _complex_from(params[key])
        return algebra.catalog(obj["catalog"], **params)
    try:
        n = int(obj["n"])
        entries = {}
        for i, j, k, re, im in obj.get("c", []):
            entries[(int(i) - 1, int(j) - 1, int(k) - 1)] = complex(float(re), float(im))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"bad algebra payload: {exc}") from exc
    return algebra.LieAlgebraData(n, entries)


def algebra_to_json(alg: algebra.LieAlgebraData) -> dict:
    rows = [
        [i + 1, j + 1, k + 1, float(v.real), float(v.imag)]
        for (i, j, k), v in sorted(alg.c.items())
    ]
    return {"n": alg.n, "c": rows}


def metric_from_json(obj, alg: algebra.LieAlgebraData) -> algebra.HermitianMetricData:
    from .strominger import semisimple_canonical_metric

    if obj is None or obj == "identity":
        return algebra.identity_metric(alg.n)
    if obj == "canonical":
        return semisimple_canonical_metric(alg)
    if isinstance(obj, dict) and "H" in obj:
        return algebra.HermitianMetricData(matrix_from_json(obj["H"]))
    raise ParameterError(f"bad metric payload: {obj!r}")


def representation_from_json(obj: dict, frame: algebra.InvariantFrame) -> bundle.RepresentationData:
    if "sym_power" in obj:
        return bundle.sym_power_rep(frame, int(obj["sym_power"]))
    try:
        m = int(obj["m"])
        mats = [matrix_from_json(rows) for rows in obj["rho"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"bad representation payload: {exc}") from exc
    return bundle.RepresentationData(m=m, rho=mats)


def twist_matrix_from_json(obj, m: int) -> np.ndarray:
    if obj is None or obj == "identity":
        return np.eye(m, dtype=complex)
    return matrix_from_json(obj)


def search_config_from_json(obj: dict | None, seed=None, restarts=None) -> SearchConfig:
    obj = dict(obj or {})
    if seed is not None:
        obj["seed"] = seed
    if restarts is not None:
        obj["restarts"] = restarts
    allowed = {
        "seed", "restarts", "max_iters", "initial_step", "shrink",
        "min_step", "stop_at", "perturbation", "target_sign",
    }
    unknown = set(obj) - allowed
    if unknown:
        raise ParameterError(f"unknown search options: {sorted(unknown)}")
    try:
        return SearchConfig(**obj)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"bad search options: {exc}") from exc


@dataclass
class ProblemFile:
    """Parsed problem file; exactly one of the four problem kinds."""

    kind: str
    algebra: algebra.LieAlgebraData
    metric_spec: object
    t: object
    tol: float
    representation_spec: dict | None
    twist_spec: object
    search_spec: dict = field(default_factory=dict)

    def metric(self) -> algebra.HermitianMetricData:
        return metric_from_json(self.metric_spec, self.algebra)


def problem_from_dict(obj: dict) -> ProblemFile:
    if not isinstance(obj, dict):
        raise ParameterError("problem file must hold a JSON object")
    kind = obj.get("problem")
    if kind not in PROBLEM_KINDS:
        raise ParameterError(f"problem kind must be one of {PROBLEM_KINDS}, got {kind!r}")
    alg = algebra_from_json(obj.get("algebra", {}))
    return ProblemFile(
        kind=kind,
        algebra=alg,
        metric_spec=obj.get("metric"),
        t=obj.get("t"),
        tol=float(obj.get("tol", DEFAULT_TOL)),
        representation_spec=obj.get("representation"),
        twist_spec=obj.get("B"),
        search_spec=obj.get("search", {}),
    )


def load_problem(path: str) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    return problem_from_dict(payload)


def to_jsonable(value):
    """Recursively convert reports to plain JSON types (complex -> [re, im])."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    raise InputShapeError(f"cannot serialize {type(value)!r}")


def dumps_canonical(obj) -> str:
    """Byte-deterministic JSON for fixed input: sorted keys, fixed separators."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)
