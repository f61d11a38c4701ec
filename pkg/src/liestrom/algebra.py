"""Complex Lie algebras given by structure constants.

Conventions: a basis e_1..e_n with [e_i, e_j] = c^k_{ij} e_k.  Only entries
with i < j are stored (0-based tuples (i, j, k) internally; the JSON schema in
``serialize`` is 1-based), so antisymmetry holds by construction.  The adjoint
matrix of e_i is (ad e_i)[k, j] = c^k_{ij}.

A Hermitian metric is a Gram matrix H[i, j] = <e_i, e_j>, conjugate-linear in
the first slot.  Orthonormalization is deterministic via the Cholesky factor
H = L L^H and P = (L^H)^{-1}: the columns of P are the orthonormal basis in
the original coordinates and P^H H P = I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import forms
from .core import (
    DEFAULT_TOL,
    PRUNE_TOL,
    InputShapeError,
    MetricError,
    ParameterError,
    max_abs,
    is_hermitian,
)

SQRT2 = math.sqrt(2.0)


@dataclass
class LieAlgebraData:
    """Structure constants of a complex Lie algebra (i < j entries only)."""

    n: int
    c: dict[tuple[int, int, int], complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise InputShapeError("dimension must be >= 1")
        clean = {}
        for (i, j, k), v in self.c.items():
            if not (0 <= i < j < self.n and 0 <= k < self.n):
                raise InputShapeError(f"bad structure index ({i}, {j}, {k}) for n={self.n}")
            v = complex(v)
            if v != 0:
                clean[(i, j, k)] = v
        self.c = clean

    def tensor(self) -> np.ndarray:
        """Dense antisymmetrized tensor T[i, j, k] = c^k_{ij}."""
        T = np.zeros((self.n, self.n, self.n), dtype=complex)
        for (i, j, k), v in self.c.items():
            T[i, j, k] = v
            T[j, i, k] = -v
        return T

    @classmethod
    def from_tensor(cls, T: np.ndarray, tol: float = DEFAULT_TOL) -> "LieAlgebraData":
        T = np.asarray(T, dtype=complex)
        n = T.shape[0]
        if T.shape != (n, n, n):
            raise InputShapeError("structure tensor must be n x n x n")
        scale = max(1.0, max_abs(T))
        if max_abs(T + np.swapaxes(T, 0, 1)) > tol * scale:
            raise InputShapeError("structure tensor is not antisymmetric in (i, j)")
        entries = {}
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    if abs(T[i, j, k]) > PRUNE_TOL:
                        entries[(i, j, k)] = complex(T[i, j, k])
        return cls(n, entries)


@dataclass
class HermitianMetricData:
    """Gram matrix of a left-invariant Hermitian metric on the chosen basis."""

    H: np.ndarray

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=complex)
        if self.H.ndim != 2 or self.H.shape[0] != self.H.shape[1]:
            raise InputShapeError("metric Gram matrix must be square")


def identity_metric(n: int) -> HermitianMetricData:
    return HermitianMetricData(np.eye(n, dtype=complex))


@dataclass
class ValidationReport:
    antisymmetry_ok: bool
    jacobi_residual: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "antisymmetry_ok": self.antisymmetry_ok,
            "jacobi_residual": self.jacobi_residual,
            "passed": self.passed,
        }


class ClassificationTag(str, Enum):
    ABELIAN = "abelian"
    HEISENBERG = "heisenberg"
    SOLVABLE_C = "solvable_c"
    SL2 = "sl2"
    NOT_UNIMODULAR = "not_unimodular"
    NOT_DIM3 = "not_dim3"


def ad_matrices(T: np.ndarray) -> np.ndarray:
    """Adjoint matrices ad[i] with (ad e_i)[k, j] = c^k_{ij}."""
    T = np.asarray(T, dtype=complex)
    return np.swapaxes(T, 1, 2)  # ad[i][k, j] = T[i, j, k]


def jacobi_residual(T: np.ndarray) -> float:
    """Max over (j,k,l,r) of |sum_i c^i_{jk} c^r_{il} + c^i_{kl} c^r_{ij} + c^i_{lj} c^r_{ik}|."""
    T = np.asarray(T, dtype=complex)
    t1 = np.einsum("jki,ilr->jklr", T, T)
    t2 = np.einsum("kli,ijr->jklr", T, T)
    t3 = np.einsum("lji,ikr->jklr", T, T)
    return max_abs(t1 + t2 + t3)


def validate(alg: LieAlgebraData, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check the structure-constant invariants.

    Antisymmetry is exact by storage; the report carries the max Jacobi
    residual and passes iff it is below ``tol``.
    """
    residual = jacobi_residual(alg.tensor())
    return ValidationReport(antisymmetry_ok=True, jacobi_residual=residual, passed=residual < tol)


def is_unimodular(alg: LieAlgebraData, tol: float = DEFAULT_TOL) -> bool:
    """True iff tr(ad x) = 0 for every basis vector x."""
    ad = ad_matrices(alg.tensor())
    traces = np.einsum("ikk->i", ad)
    return max_abs(traces) < tol


def killing_form(alg: LieAlgebraData) -> np.ndarray:
    """kappa(e_i, e_j) = tr(ad e_i . ad e_j)."""
    ad = ad_matrices(alg.tensor())
    return np.einsum("iab,jba->ij", ad, ad)


def transform_structure(T: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Structure tensor in the basis f_b = sum_a Q[a, b] e_a."""
    T = np.asarray(T, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    Qinv = np.linalg.inv(Q)
    return np.einsum("ia,jb,ijk,mk->abm", Q, Q, T, Qinv)


def change_of_basis(alg: LieAlgebraData, Q: np.ndarray, tol: float = DEFAULT_TOL) -> LieAlgebraData:
    """The same algebra written in the basis f_b = sum_a Q[a, b] e_a."""
    Q = np.asarray(Q, dtype=complex)
    if Q.shape != (alg.n, alg.n):
        raise InputShapeError("change-of-basis matrix must be n x n")
    if abs(np.linalg.det(Q)) < tol:
        raise InputShapeError("change-of-basis matrix is singular")
    return LieAlgebraData.from_tensor(transform_structure(alg.tensor(), Q), tol)


@dataclass
class InvariantFrame:
    """Metric-orthonormal basis of an algebra: base data, the change-of-basis
    matrix P (columns = orthonormal basis in original coordinates), the
    structure tensor in that basis and its adjoint matrices."""

    base: LieAlgebraData
    P: np.ndarray
    c_on: np.ndarray
    ad: np.ndarray

    @property
    def n(self) -> int:
        return self.base.n

    def differential(self) -> forms.FrameDifferential:
        return forms.FrameDifferential.from_structure(self.c_on)

    def omega(self) -> forms.InvForm:
        return forms.omega(self.n)

    def ddbar_omega(self) -> forms.InvForm:
        return forms.ddbar_omega(self.differential())

    def balanced(self, tol: float = DEFAULT_TOL) -> bool:
        return forms.balanced_check(self.differential(), tol)

    def jacobi_residual(self) -> float:
        return jacobi_residual(self.c_on)

    def rotated(self, U: np.ndarray, tol: float = DEFAULT_TOL) -> "InvariantFrame":
        """Replace the orthonormal basis by basis . U for unitary U."""
        U = np.asarray(U, dtype=complex)
        if U.shape != (self.n, self.n):
            raise InputShapeError("rotation must be n x n")
        if max_abs(U.conj().T @ U - np.eye(self.n)) > tol * max(1.0, max_abs(U)):
            raise InputShapeError("rotation matrix is not unitary")
        c_new = transform_structure(self.c_on, U)
        return InvariantFrame(base=self.base, P=self.P @ U, c_on=c_new, ad=ad_matrices(c_new))

    def to_base_coframe(self, form: forms.InvForm) -> forms.InvForm:
        """Rewrite a form over this frame's coframe in the base coframe."""
        return form.change_coframe(np.linalg.inv(self.P))


def orthonormalize(alg: LieAlgebraData, metric: HermitianMetricData,
                   tol: float = DEFAULT_TOL) -> InvariantFrame:
    """Orthonormal frame of ``alg`` for ``metric`` via Cholesky (deterministic)."""
    H = metric.H
    if H.shape != (alg.n, alg.n):
        raise InputShapeError("metric dimension does not match the algebra")
    if not is_hermitian(H, tol):
        raise MetricError("metric Gram matrix is not Hermitian")
    eigenvalues = np.linalg.eigvalsh(H)
    if eigenvalues.min() <= tol:
        raise MetricError("metric Gram matrix is not positive definite")
    L = np.linalg.cholesky(H)
    P = np.linalg.inv(L.conj().T)
    c_on = transform_structure(alg.tensor(), P)
    return InvariantFrame(base=alg, P=P, c_on=c_on, ad=ad_matrices(c_on))


def identity_frame(alg: LieAlgebraData) -> InvariantFrame:
    return orthonormalize(alg, identity_metric(alg.n))


def _numeric_rank(M: np.ndarray, tol: float) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol))


def derived_dim(alg: LieAlgebraData, tol: float = DEFAULT_TOL) -> int:
    """Dimension of [g, g] = span of all bracket images."""
    T = alg.tensor()
    cols = [T[i, j, :] for i in range(alg.n) for j in range(i + 1, alg.n)]
    if not cols:
        return 0
    return _numeric_rank(np.stack(cols, axis=1), tol)


def classify3d(alg: LieAlgebraData, tol: float = DEFAULT_TOL) -> ClassificationTag:
    """Place a 3-dimensional unimodular algebra in its isomorphism class.

    The decision uses only isomorphism invariants: dim[g, g], the Killing
    rank and unimodularity, with numeric rank thresholds at ``tol``.
    """
    if alg.n != 3:
        return ClassificationTag.NOT_DIM3
    if not is_unimodular(alg, tol):
        return ClassificationTag.NOT_UNIMODULAR
    dim = derived_dim(alg, tol)
    if dim == 0:
        return ClassificationTag.ABELIAN
    if dim == 1:
        return ClassificationTag.HEISENBERG
    if dim == 2:
        return ClassificationTag.SOLVABLE_C
    if _numeric_rank(killing_form(alg), tol) == 3:
        return ClassificationTag.SL2
    raise InputShapeError("3-dim unimodular algebra with unexpected invariants (Jacobi violated?)")


# -- catalog -----------------------------------------------------------------


def abelian(n: int = 3) -> LieAlgebraData:
    return LieAlgebraData(n, {})


def heisenberg() -> LieAlgebraData:
    """[x, y] = h with h = e_1: the only independent entry is c^1_{23} = 1."""
    return LieAlgebraData(3, {(1, 2, 0): 1.0})


def solvable_c(alpha: complex, beta: complex, gamma: complex) -> LieAlgebraData:
    """The 2-dim-derived solvable family: [e1,e3] = a e1 + b e2,
    [e2,e3] = g e1 - a e2, [e1,e2] = 0; needs a^2 + b g != 0."""
    alpha, beta, gamma = complex(alpha), complex(beta), complex(gamma)
    if abs(alpha**2 + beta * gamma) < DEFAULT_TOL:
        raise ParameterError("degenerate parameters: alpha^2 + beta*gamma = 0")
    entries = {
        (0, 2, 0): alpha,
        (0, 2, 1): beta,
        (1, 2, 0): gamma,
        (1, 2, 1): -alpha,
    }
    return LieAlgebraData(3, entries)


def sl2c() -> LieAlgebraData:
    """sl(2, C) on the basis {E, F, H/sqrt(2)}, orthonormal for <U, V> = tr(U V^H).

    Brackets of the rescaled basis: [e1, e2] = sqrt(2) e3,
    [e1, e3] = -sqrt(2) e1, [e2, e3] = sqrt(2) e2.
    """
    return LieAlgebraData(3, {(0, 1, 2): SQRT2, (0, 2, 0): -SQRT2, (1, 2, 1): SQRT2})


def direct_sum(a: LieAlgebraData, b: LieAlgebraData) -> LieAlgebraData:
    entries = dict(a.c)
    off = a.n
    for (i, j, k), v in b.c.items():
        entries[(i + off, j + off, k + off)] = v
    return LieAlgebraData(a.n + b.n, entries)


def catalog(name: str, **params) -> LieAlgebraData:
    """Catalog dispatcher used by the CLI problem files."""
    name = name.lower().replace("-", "_")
    if name == "abelian":
        return abelian(int(params.get("n", 3)))
    if name == "heisenberg":
        return heisenberg()
    if name == "solvable_c":
        try:
            return solvable_c(params["alpha"], params["beta"], params["gamma"])
        except KeyError as exc:
            raise ParameterError(f"solvable_c needs parameter {exc}") from exc
    if name == "sl2":
        return sl2c()
    raise ParameterError(f"unknown catalog algebra {name!r}")
