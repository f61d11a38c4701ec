"""Shared numeric conventions and exception types."""

from __future__ import annotations

import numpy as np

# Comparison tolerance for residuals and verdicts (absolute, desk-scale inputs;
# scale-relative where a routine says so).
DEFAULT_TOL = 1e-9

# Coefficients at or below this magnitude are dropped after every form
# operation.  Kept well below DEFAULT_TOL so pruning never masks a residual.
PRUNE_TOL = 1e-12


class LiestromError(Exception):
    """Base class for package errors."""


class InputShapeError(LiestromError):
    """Tensor, matrix or form dimensions do not fit the operation."""


class MetricError(LiestromError):
    """Metric is not Hermitian positive definite, or a metric post-condition failed."""


class ParameterError(LiestromError):
    """Catalog parameters outside the admissible range."""


class ClassificationError(LiestromError):
    """Operation applied to an algebra of the wrong isomorphism class."""


class NotSemisimpleError(LiestromError):
    """Killing form is degenerate."""


class RepresentationError(LiestromError):
    """Matrices do not represent the Lie algebra within tolerance."""


def max_abs(a) -> float:
    arr = np.asarray(a)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


def is_hermitian(H: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    H = np.asarray(H)
    scale = max(1.0, max_abs(H))
    return max_abs(H - H.conj().T) <= tol * scale
