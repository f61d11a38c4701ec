"""Seeded multi-restart derivative-free minimization.

The local method is compass (pattern) search: probe +/- step along every
coordinate, move to the best strict improvement, otherwise shrink the step.
Restarts run sequentially from deterministic seeded starting points and are
merged by (best value, restart index), so results do not depend on any
scheduling and identical configs reproduce bit-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TARGET_SIGNS = ("any", "positive", "negative")


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 8
    max_iters: int = 250
    initial_step: float = 0.25
    shrink: float = 0.5
    min_step: float = 1e-9
    stop_at: float = 1e-13
    perturbation: float = 0.5
    target_sign: str = "any"

    def __post_init__(self):
        if self.target_sign not in TARGET_SIGNS:
            raise ValueError(f"target_sign must be one of {TARGET_SIGNS}")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")


@dataclass
class SearchResult:
    x: np.ndarray
    value: float
    restart: int
    restart_values: list[float] = field(default_factory=list)
    evaluations: int = 0
    method: str = "compass"


def compass_search(fn, x0: np.ndarray, cfg: SearchConfig) -> tuple[np.ndarray, float, int]:
    x = np.array(x0, dtype=float)
    fx = float(fn(x))
    evals = 1
    step = cfg.initial_step
    for _ in range(cfg.max_iters):
        if step < cfg.min_step or fx <= cfg.stop_at:
            break
        best_fc, best_cand = fx, None
        for i in range(x.size):
            for delta in (step, -step):
                cand = x.copy()
                cand[i] += delta
                fc = float(fn(cand))
                evals += 1
                if fc < best_fc:
                    best_fc, best_cand = fc, cand
        if best_cand is None:
            step *= cfg.shrink
        else:
            x, fx = best_cand, best_fc
    return x, fx, evals


def multi_restart(fn, x0: np.ndarray, cfg: SearchConfig) -> SearchResult:
    """Run compass search from x0 and from seeded perturbations of it."""
    rng = np.random.default_rng(cfg.seed)
    best = None
    values = []
    total_evals = 0
    for r in range(cfg.restarts):
        if r == 0:
            start = np.array(x0, dtype=float)
        else:
            start = np.array(x0, dtype=float) + cfg.perturbation * rng.standard_normal(
                len(x0)
            )
        x, fx, evals = compass_search(fn, start, cfg)
        values.append(fx)
        total_evals += evals
        if best is None or (fx, r) < (best.value, best.restart):
            best = SearchResult(x=x, value=fx, restart=r)
    best.restart_values = values
    best.evaluations = total_evals
    return best
