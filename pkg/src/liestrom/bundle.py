"""Non-flat sector: representations, the twisted bundle metric, Chern
curvature, the reduced Hermitian-Yang-Mills residual, and the full anomaly
equation with both curvature terms.

For a representation rho of the frame basis and a positive Hermitian twist B,
the curvature of the twisted bundle metric is gauge-equivalent to the
constant-coefficient representative

    F0 = -(1/2) sum_{i,j} e^i ^ eb^j (x) [B^{-1} rho_i B, rho_j^H],

whose trace vanishes termwise.  With e'_m = B^{-1/2} rho_m B^{1/2} the trace
invariant collapses to

    tr F ^ F = sum_{m,n} d e^m ^ d eb^n tr(e'_m e'_n^H)

and reduced Hermitian-Yang-Mills reads sum_i [e'_i, e'_i^H] = 0.  Every
quantity consumed downstream is conjugation-invariant, so dropping the
position-dependent gauge factor is exact; the equivalences are asserted in
the test suite rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import forms
from .algebra import InvariantFrame, classify3d, heisenberg, is_unimodular, sl2c
from .connection import tr_r_wedge_r_closed
from .core import (
    DEFAULT_TOL,
    ClassificationError,
    InputShapeError,
    MetricError,
    RepresentationError,
    max_abs,
    is_hermitian,
)
from .optim import SearchConfig, multi_restart
from .strominger import SolveReport, Verdict, fit_coupling

SQRT2 = math.sqrt(2.0)


@dataclass
class RepresentationData:
    """Images rho[i] = rho_*(e_i) of the orthonormal frame basis."""

    m: int
    rho: list[np.ndarray]

    def __post_init__(self):
        self.rho = [np.asarray(r, dtype=complex) for r in self.rho]
        for r in self.rho:
            if r.shape != (self.m, self.m):
                raise InputShapeError("representation matrices must be m x m")


def homomorphism_residual(frame: InvariantFrame, rep: RepresentationData) -> float:
    """max_{i,j} | [rho_i, rho_j] - sum_k c^k_{ij} rho_k |."""
    n = frame.n
    worst = 0.0
    for i in range(n):
        for j in range(n):
            target = sum(frame.c_on[i, j, k] * rep.rho[k] for k in range(n))
            comm = rep.rho[i] @ rep.rho[j] - rep.rho[j] @ rep.rho[i]
            worst = max(worst, max_abs(comm - target))
    return worst


def _check_rep(frame: InvariantFrame, rep: RepresentationData, tol: float):
    res = homomorphism_residual(frame, rep)
    if res >= tol:
        raise RepresentationError(f"homomorphism residual {res:.3e} >= {tol:.1e}")


@dataclass
class TwistData:
    """Positive Hermitian twist B with its principal square root and the
    conjugated basis images e'_i = B^{-1/2} rho_i B^{1/2}."""

    B: np.ndarray
    Bhalf: np.ndarray
    eprime: list[np.ndarray]


def make_twist(rep: RepresentationData, B: np.ndarray, tol: float = DEFAULT_TOL) -> TwistData:
    B = np.asarray(B, dtype=complex)
    if B.shape != (rep.m, rep.m):
        raise InputShapeError("twist matrix must match the fiber dimension")
    if not is_hermitian(B, tol):
        raise MetricError("twist matrix is not Hermitian")
    evals, vecs = np.linalg.eigh(B)
    if evals.min() <= 0:
        raise MetricError("twist matrix is not positive definite")
    sqrt_evals = np.sqrt(np.clip(evals, tol, None))
    Bhalf = (vecs * sqrt_evals) @ vecs.conj().T
    Bhalf_inv = (vecs * (1.0 / sqrt_evals)) @ vecs.conj().T
    eprime = [Bhalf_inv @ r @ Bhalf for r in rep.rho]
    return TwistData(B=B, Bhalf=Bhalf, eprime=eprime)


def curvature_F(frame: InvariantFrame, rep: RepresentationData, twist: TwistData,
                tol: float = DEFAULT_TOL) -> forms.InvForm:
    """Constant-gauge Chern curvature of the twisted bundle metric."""
    _check_rep(frame, rep, tol)
    n = frame.n
    Binv = np.linalg.inv(twist.B)
    conjugated = [Binv @ r @ twist.B for r in rep.rho]
    F = forms.InvForm.zero(n, m=rep.m)
    for i in range(n):
        for j in range(n):
            Y = rep.rho[j].conj().T
            comm = conjugated[i] @ Y - Y @ conjugated[i]
            if max_abs(comm) == 0.0:
                continue
            word = forms.generator(n, i).wedge(forms.generator(n, j, bar=True))
            F = F + word.tensor(-0.5 * comm)
    return F


def hym_residual(twist: TwistData) -> np.ndarray:
    """sum_i [e'_i, e'_i^H]; Hermitian, traceless, and zero iff reduced HYM holds."""
    m = twist.eprime[0].shape[0]
    total = np.zeros((m, m), dtype=complex)
    for e in twist.eprime:
        eh = e.conj().T
        total += e @ eh - eh @ e
    return total


def hym_contraction(frame: InvariantFrame, F: forms.InvForm) -> np.ndarray:
    """Coefficient matrix of F ^ omega^(n-1) (a top-degree matrix form).

    Vanishes exactly when the reduced residual does; used as the cross-check
    against the frame-level formula.
    """
    n = frame.n
    power = forms.omega_power(n, n - 1)
    top = F.wedge(power)
    full_word = (1 << (2 * n)) - 1
    return np.asarray(top.coeff(full_word))


def gram_matrix(mats: list[np.ndarray]) -> np.ndarray:
    """G[i, j] = tr(m_i m_j^H)."""
    k = len(mats)
    G = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            G[i, j] = np.sum(mats[i] * np.conj(mats[j]))
    return G


def tr_f_wedge_f(frame: InvariantFrame, twist: TwistData) -> forms.InvForm:
    """sum_{m,n} d e^m ^ d eb^n tr(e'_m e'_n^H)."""
    fd = frame.differential()
    G = gram_matrix(twist.eprime)
    total = forms.InvForm.zero(frame.n)
    for a in range(frame.n):
        for b in range(frame.n):
            if abs(G[a, b]) == 0.0:
                continue
            total = total + fd.de[a].wedge(fd.debar[b]).scale(G[a, b])
    return total


_SL2_REFERENCE = sl2c().tensor()
_HEISENBERG_REFERENCE = heisenberg().tensor()


def sym_power_rep(frame: InvariantFrame, k: int) -> RepresentationData:
    """Symmetric-power representation of the sl2 frame on Sym^k C^2 (m = k+1).

    Built on the binomially weighted monomial basis, which makes the compact
    form act unitarily: the raising image has entries sqrt(i (k - i + 1)),
    the lowering image is its transpose, and the Cartan image is
    diag(k - 2i)/sqrt(2).  k = 1 reproduces the standard representation.
    """
    if k < 1:
        raise InputShapeError("symmetric power must be >= 1")
    if frame.n != 3 or max_abs(frame.c_on - _SL2_REFERENCE) > DEFAULT_TOL:
        raise ClassificationError("symmetric-power representations need the sl2 catalog frame")
    m = k + 1
    raise_mat = np.zeros((m, m), dtype=complex)
    for i in range(1, k + 1):
        raise_mat[i - 1, i] = math.sqrt(i * (k - i + 1))
    cartan = np.diag([k - 2.0 * i for i in range(m)]).astype(complex)
    return RepresentationData(m=m, rho=[raise_mat, raise_mat.T.copy(), cartan / SQRT2])


def heisenberg_standard_rep(frame: InvariantFrame) -> RepresentationData:
    """Upper-triangular 3 x 3 representation of the Heisenberg catalog frame:
    the center goes to E_13, the other two basis vectors to E_12 and E_23."""
    if frame.n != 3 or max_abs(frame.c_on - _HEISENBERG_REFERENCE) > DEFAULT_TOL:
        raise ClassificationError("the standard nilpotent representation needs the "
                                  "Heisenberg catalog frame")

    def unit(r, c):
        mat = np.zeros((3, 3), dtype=complex)
        mat[r, c] = 1.0
        return mat

    return RepresentationData(m=3, rho=[unit(0, 2), unit(0, 1), unit(1, 2)])


def solve_full_system(frame: InvariantFrame, rep: RepresentationData, twist: TwistData,
                      t: float, tol: float = DEFAULT_TOL) -> SolveReport:
    """Joint verdict for reduced HYM plus the anomaly equation with both
    curvature terms.

    LHS = i del delbar omega; shape = (1/4)(tr R ^ R - tr F ^ F).  UNIQUE
    requires both the coupling fit and the HYM residual to pass ``tol``; the
    anomaly-only verdict and alpha' stay visible in the report either way.
    """
    _check_rep(frame, rep, tol)
    hym = max_abs(hym_residual(twist))
    lhs = frame.ddbar_omega()
    shape = (tr_r_wedge_r_closed(frame, t) - tr_f_wedge_f(frame, twist)).scale(0.25)
    fit = fit_coupling(lhs, shape, tol)
    if hym < tol:
        verdict = fit.verdict
    else:
        verdict = Verdict.NO_SOLUTION
    return SolveReport(
        classification=classify3d(frame.base, tol).value,
        unimodular=is_unimodular(frame.base, tol),
        balanced=frame.balanced(tol),
        t=t,
        verdict=verdict,
        alpha_prime=fit.alpha_prime,
        alpha_sign=fit.sign,
        anomaly_verdict=fit.verdict,
        residuals={
            "anomaly": fit.residual,
            "hym": hym,
            "jacobi": frame.jacobi_residual(),
        },
        propositions=None,
    )


# -- twist search --------------------------------------------------------------

_DIAG_CLIP = 8.0


def _twist_param_size(m: int) -> int:
    return m + m * (m - 1)


def _twist_from_params(x: np.ndarray, m: int) -> np.ndarray:
    """Unit-determinant positive Hermitian matrix from Cholesky parameters."""
    logs = np.clip(x[:m], -_DIAG_CLIP, _DIAG_CLIP)
    logs = logs - logs.mean()
    L = np.zeros((m, m), dtype=complex)
    for i in range(m):
        L[i, i] = math.exp(float(logs[i]))
    k = m
    for i in range(m):
        for j in range(i):
            L[i, j] = x[k] + 1j * x[k + 1]
            k += 2
    B = L @ L.conj().T
    det = np.linalg.det(B).real
    return B / det ** (1.0 / m)


def twist_search(frame: InvariantFrame, rep: RepresentationData, t: float,
                 cfg: SearchConfig, tol: float = DEFAULT_TOL):
    """Minimize the reduced HYM residual over unit-determinant twists.

    The parameter t is recorded with the result but does not enter the
    objective; HYM does not involve the connection family.  Deterministic per
    config; returns (B, residual, raw search result).
    """
    _check_rep(frame, rep, tol)
    m = rep.m

    def objective(x: np.ndarray) -> float:
        B = _twist_from_params(x, m)
        try:
            twist = make_twist(rep, B, tol)
        except MetricError:
            return 1e6
        return float(np.linalg.norm(hym_residual(twist)))

    x0 = np.zeros(_twist_param_size(m))
    result = multi_restart(objective, x0, cfg)
    best_B = _twist_from_params(result.x, m)
    return best_B, result.value, result
