import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import liestrom as ls
from liestrom.algebra import ClassificationTag, ad_matrices, derived_dim, transform_structure
from liestrom.core import InputShapeError, MetricError, ParameterError

import oracles
from conftest import catalog_algebras, corrupted_algebra


# -- validation ------------------------------------------------------------------


def test_validate_abelian_passes():
    report = ls.validate(ls.abelian(3))
    assert report.passed and report.jacobi_residual == 0.0


def test_validate_sl2_passes():
    report = ls.validate(ls.sl2c())
    assert report.passed
    assert report.jacobi_residual < 1e-12


def test_validate_matches_loop_oracle_on_catalog():
    for name, alg in catalog_algebras():
        got = ls.validate(alg).jacobi_residual
        expected = oracles.jacobi_residual_loops(alg.tensor())
        assert got == pytest.approx(expected, abs=1e-12), name


def test_validate_rejects_genuine_jacobi_violation():
    bad = corrupted_algebra()
    report = ls.validate(bad)
    assert not report.passed
    assert report.jacobi_residual == pytest.approx(
        oracles.jacobi_residual_loops(bad.tensor())
    )
    assert report.jacobi_residual == pytest.approx(1.0)


def test_structure_entries_validated():
    with pytest.raises(InputShapeError):
        ls.LieAlgebraData(3, {(1, 0, 2): 1.0})  # needs i < j
    with pytest.raises(InputShapeError):
        ls.LieAlgebraData(3, {(0, 1, 3): 1.0})
    with pytest.raises(InputShapeError):
        ls.LieAlgebraData.from_tensor(np.ones((3, 3, 3)))  # not antisymmetric


def test_tensor_roundtrip():
    alg = ls.solvable_c(1.0, 2.0, 0.0)
    back = ls.LieAlgebraData.from_tensor(alg.tensor())
    assert back.c == alg.c


# -- unimodularity / killing --------------------------------------------------------


def test_unimodular_examples():
    assert ls.is_unimodular(ls.heisenberg())
    assert ls.is_unimodular(ls.solvable_c(1, 0, 0))
    assert not ls.is_unimodular(ls.LieAlgebraData(2, {(0, 1, 1): 1.0}))


def test_unimodular_matches_trace_oracle():
    for name, alg in catalog_algebras():
        ads = oracles.ad_loops(alg.tensor())
        expected = max(abs(np.trace(a)) for a in ads) < 1e-9
        assert ls.is_unimodular(alg) == expected, name


def test_killing_form_nilpotent_and_abelian_vanish():
    assert np.allclose(ls.killing_form(ls.heisenberg()), 0)
    assert np.allclose(ls.killing_form(ls.abelian(4)), 0)


def test_killing_form_sl2_table():
    kappa = ls.killing_form(ls.sl2c())
    expected = np.array([[0, 4, 0], [4, 0, 0], [0, 0, 4]], dtype=complex)
    np.testing.assert_allclose(kappa, expected, atol=1e-12)
    np.testing.assert_allclose(kappa, oracles.killing_loops(ls.sl2c().tensor()), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_killing_form_of_nilpotent_vanishes_under_basis_change(seed):
    rng = np.random.default_rng(seed)
    Q = oracles.random_invertible(rng, 3)
    alg = ls.change_of_basis(ls.heisenberg(), Q)
    assert np.max(np.abs(ls.killing_form(alg))) < 1e-9


# -- orthonormalization ------------------------------------------------------------


def test_orthonormalize_identity_metric_is_noop():
    alg = ls.sl2c()
    frame = ls.identity_frame(alg)
    np.testing.assert_allclose(frame.P, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(frame.c_on, alg.tensor(), atol=1e-14)


def test_sl2_hilbert_schmidt_basis_is_already_orthonormal():
    E = np.array([[0, 1], [0, 0]], dtype=complex)
    F = np.array([[0, 0], [1, 0]], dtype=complex)
    H = np.array([[1, 0], [0, -1]], dtype=complex)
    basis = [E, F, H / np.sqrt(2)]
    gram = oracles.gram_hs(basis)
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-14)
    frame = ls.orthonormalize(ls.sl2c(), ls.HermitianMetricData(gram))
    np.testing.assert_allclose(frame.P, np.eye(3), atol=1e-12)


def test_orthonormalize_diagonal_metric_heisenberg():
    frame = ls.orthonormalize(ls.heisenberg(), ls.HermitianMetricData(np.diag([4.0, 1.0, 1.0])))
    np.testing.assert_allclose(frame.P, np.diag([0.5, 1.0, 1.0]), atol=1e-14)
    assert frame.c_on[1, 2, 0] == pytest.approx(2.0)
    expected = oracles.change_of_basis_loops(ls.heisenberg().tensor(), np.diag([0.5, 1.0, 1.0]))
    np.testing.assert_allclose(frame.c_on, expected, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_orthonormalize_invariants(seed):
    rng = np.random.default_rng(seed)
    alg = ls.sl2c() if seed % 2 else ls.heisenberg()
    H = oracles.random_spd(rng, 3)
    frame = ls.orthonormalize(alg, ls.HermitianMetricData(H))
    np.testing.assert_allclose(frame.P.conj().T @ H @ frame.P, np.eye(3), atol=1e-10)
    np.testing.assert_allclose(frame.ad, ad_matrices(frame.c_on), atol=1e-14)
    assert frame.jacobi_residual() < 1e-9
    expected = oracles.change_of_basis_loops(alg.tensor(), frame.P)
    np.testing.assert_allclose(frame.c_on, expected, atol=1e-10)


def test_orthonormalize_rejects_bad_metrics():
    alg = ls.heisenberg()
    with pytest.raises(MetricError):
        ls.orthonormalize(alg, ls.HermitianMetricData(np.diag([1.0, -1.0, 1.0])))
    nonherm = np.eye(3, dtype=complex)
    nonherm[0, 1] = 1.0
    with pytest.raises(MetricError):
        ls.orthonormalize(alg, ls.HermitianMetricData(nonherm))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_pushed_metric_frames_have_matching_gram_spectra(seed):
    # the same metric expressed in two bases gives unitarily related frames
    rng = np.random.default_rng(seed)
    alg = ls.sl2c()
    Q = oracles.random_invertible(rng, 3)
    alg2 = ls.change_of_basis(alg, Q)
    H1 = oracles.random_spd(rng, 3)
    H2 = Q.conj().T @ H1 @ Q
    g1 = oracles.gram_hs(list(ls.orthonormalize(alg, ls.HermitianMetricData(H1)).ad))
    g2 = oracles.gram_hs(list(ls.orthonormalize(alg2, ls.HermitianMetricData(H2)).ad))
    np.testing.assert_allclose(np.linalg.eigvalsh(g1), np.linalg.eigvalsh(g2), atol=1e-9)


def test_rotated_frame_requires_unitary(sl2_frame=None):
    frame = ls.identity_frame(ls.sl2c())
    with pytest.raises(InputShapeError):
        frame.rotated(np.diag([2.0, 1.0, 1.0]))


# -- classification -------------------------------------------------------------------


def test_classify_catalog():
    assert ls.classify3d(ls.abelian(3)) is ClassificationTag.ABELIAN
    assert ls.classify3d(ls.heisenberg()) is ClassificationTag.HEISENBERG
    assert ls.classify3d(ls.solvable_c(1, 0, 0)) is ClassificationTag.SOLVABLE_C
    assert ls.classify3d(ls.sl2c()) is ClassificationTag.SL2
    assert ls.classify3d(ls.abelian(4)) is ClassificationTag.NOT_DIM3
    assert ls.classify3d(ls.LieAlgebraData(3, {(0, 1, 1): 1.0})) is ClassificationTag.NOT_UNIMODULAR


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 2**31))
def test_classification_is_basis_invariant(which, seed):
    rng = np.random.default_rng(seed)
    alg = [ls.abelian(3), ls.heisenberg(), ls.solvable_c(0.5 + 1j, 2.0, -0.25j), ls.sl2c()][which]
    tag = ls.classify3d(alg)
    Q = oracles.random_invertible(rng, 3)
    moved = ls.change_of_basis(alg, Q)
    assert ls.validate(moved).passed
    assert ls.classify3d(moved) is tag


def test_derived_dim_catalog():
    assert derived_dim(ls.abelian(3)) == 0
    assert derived_dim(ls.heisenberg()) == 1
    assert derived_dim(ls.solvable_c(1, 2, 0)) == 2
    assert derived_dim(ls.sl2c()) == 3


# -- catalog ---------------------------------------------------------------------------


def test_catalog_members_validate_and_classify():
    for name, expected in [
        ("abelian", ClassificationTag.ABELIAN),
        ("heisenberg", ClassificationTag.HEISENBERG),
        ("sl2", ClassificationTag.SL2),
    ]:
        alg = ls.catalog(name)
        assert ls.validate(alg).passed
        assert ls.classify3d(alg) is expected
    alg = ls.catalog("solvable_c", alpha=1.0, beta=0.0, gamma=0.0)
    assert ls.classify3d(alg) is ClassificationTag.SOLVABLE_C


def test_heisenberg_catalog_entry():
    assert ls.heisenberg().c == {(1, 2, 0): 1.0}


def test_solvable_catalog_matches_printed_adjoints():
    alpha, beta, gamma = 0.3 + 0.1j, -1.25, 0.75j
    ads = oracles.ad_loops(ls.solvable_c(alpha, beta, gamma).tensor())
    expected_ad3 = -np.array([[alpha, gamma, 0], [beta, -alpha, 0], [0, 0, 0]])
    np.testing.assert_allclose(ads[2], expected_ad3, atol=1e-14)
    np.testing.assert_allclose(ads[0][:, 2], [alpha, beta, 0], atol=1e-14)
    np.testing.assert_allclose(ads[1][:, 2], [gamma, -alpha, 0], atol=1e-14)


def test_solvable_catalog_rejects_degenerate_parameters():
    with pytest.raises(ParameterError):
        ls.solvable_c(0, 0, 0)
    with pytest.raises(ParameterError):
        ls.solvable_c(1.0, 1.0, -1.0)  # alpha^2 + beta*gamma = 0


def test_sl2_catalog_matches_matrix_bracket_oracle():
    E = np.array([[0, 1], [0, 0]], dtype=complex)
    F = np.array([[0, 0], [1, 0]], dtype=complex)
    H = np.array([[1, 0], [0, -1]], dtype=complex)
    basis = [E, F, H / np.sqrt(2)]
    T = np.zeros((3, 3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            bracket = basis[i] @ basis[j] - basis[j] @ basis[i]
            for k in range(3):
                T[i, j, k] = np.sum(bracket * np.conj(basis[k]))
    np.testing.assert_allclose(ls.sl2c().tensor(), T, atol=1e-14)


def test_direct_sum_blocks():
    ss = ls.direct_sum(ls.sl2c(), ls.heisenberg())
    assert ss.n == 6
    assert ls.validate(ss).passed
    assert ls.is_unimodular(ss)
    T = ss.tensor()
    assert np.max(np.abs(T[:3, 3:, :])) == 0.0
    np.testing.assert_allclose(T[3:, 3:, 3:], ls.heisenberg().tensor(), atol=1e-14)


def test_catalog_dispatcher_rejects_unknown():
    with pytest.raises(ParameterError):
        ls.catalog("so3")
    with pytest.raises(ParameterError):
        ls.catalog("solvable_c", alpha=1.0)  # missing parameters
