"""Optimizer, exact 2-form oracle, face checks, circle criterion, stabilizer."""

import numpy as np
import pytest

from hkcalib import (
    basis_form,
    bryant_harvey,
    classify,
    comass_estimate,
    comass_exact_2form,
    evaluate,
    named_form,
    psi,
    psi_pp,
    random_face,
    random_form,
    random_plane,
    sl_forms,
    standard_face,
    stabilizer_dimension,
    theta,
    u1_face_criterion,
    verify_faces,
    volume_form,
    wedge_power,
)
from hkcalib.comass import ComassOptions, gram_matrix_2form
from hkcalib.exterior import AlternatingForm


FAST = ComassOptions(max_iters=300)


# ---------------------------------------------------------------------------
# estimator basics
# ---------------------------------------------------------------------------

def test_decomposable_unit_form(model1):
    rep = comass_estimate(basis_form(4, [0, 1]), starts=16, seed=0, options=FAST)
    assert rep.comass == pytest.approx(1.0, abs=1e-9)
    assert rep.status == "converged"
    P = rep.best_frame.projector()
    assert np.max(np.abs(P - np.diag([1, 1, 0, 0]))) < 1e-6
    assert rep.grad_norm < 1e-7
    # reported comass is the value on the reported frame
    assert evaluate(basis_form(4, [0, 1]), rep.best_frame.columns) == pytest.approx(
        rep.comass, abs=1e-12)


def test_kahler_power_faces_are_complex(model2):
    nf = named_form(model2, "kahler", p=2)
    rep = comass_estimate(nf.form, starts=60, seed=1, options=FAST)
    assert rep.comass == pytest.approx(1.0, abs=1e-6)
    assert classify(model2, rep.best_frame).is_complex("I")


def test_theta1_on_h1_full_space_face(model1):
    rep = comass_estimate(theta(model1, 1).form, starts=8, seed=2, options=FAST)
    assert rep.comass == pytest.approx(1.0, abs=1e-9)
    assert rep.best_frame.k == 4


def test_zero_form_short_circuits():
    rep = comass_estimate(AlternatingForm(4, 2), starts=4, seed=0)
    assert rep.comass == 0.0 and rep.best_frame is None


def test_degree_zero_rejected(model1):
    with pytest.raises(ValueError, match="degree >= 1"):
        comass_estimate(AlternatingForm.scalar(4, 2.0))


# ---------------------------------------------------------------------------
# exact spectral oracle for 2-forms
# ---------------------------------------------------------------------------

def test_exact_2form_examples(model1):
    assert comass_exact_2form(model1.omega_I) == pytest.approx(1.0)
    assert comass_exact_2form(3.0 * model1.omega_I) == pytest.approx(3.0)
    both = model1.omega_I + model1.omega_J
    # oracle: (I + J)^2 = -2 Id, so the Gram matrix is sqrt(2) orthogonal
    A = gram_matrix_2form(both)
    assert np.allclose(A.T @ A, 2.0 * np.eye(4), atol=1e-12)
    assert comass_exact_2form(both) == pytest.approx(np.sqrt(2.0))


def test_estimator_matches_exact_on_random_2forms():
    worst = 0.0
    for s in range(10):
        f = random_form(8, 2, np.random.default_rng(500 + s))
        est = comass_estimate(f, starts=12, seed=s, options=FAST).comass
        worst = max(worst, abs(est - comass_exact_2form(f)))
    assert worst < 1e-6


# ---------------------------------------------------------------------------
# estimator invariants
# ---------------------------------------------------------------------------

def test_witness_never_undercut(model2, rng):
    f = random_form(8, 4, rng)
    witnesses = [random_plane(model2, 4, rng) for _ in range(3)]
    best = max(abs(evaluate(f, W.columns)) for W in witnesses)
    rep = comass_estimate(f, starts=2, seed=0, options=FAST,
                          witnesses=tuple(witnesses))
    assert rep.comass >= best - 1e-12


def test_homogeneity(rng):
    f = random_form(6, 3, rng)
    c = 2.75
    a = comass_estimate(f, starts=24, seed=3, options=FAST).comass
    b = comass_estimate(c * f, starts=24, seed=3, options=FAST).comass
    assert b == pytest.approx(c * a, rel=1e-8)


def test_subadditivity(rng):
    f, g = random_form(6, 2, rng), random_form(6, 2, rng)
    cf = comass_exact_2form(f)
    cg = comass_exact_2form(g)
    cfg = comass_exact_2form(f + g)
    assert cfg <= cf + cg + 1e-8


def test_determinism(model2):
    f = theta(model2, 1).form
    a = comass_estimate(f, starts=20, seed=9, options=FAST)
    b = comass_estimate(f, starts=20, seed=9, options=FAST)
    assert a.comass == b.comass
    assert np.array_equal(a.best_frame.columns, b.best_frame.columns)
    assert a.iters_histogram == b.iters_histogram


def test_bh_outside_region_finds_witness(model2):
    nf = bryant_harvey(model2, 1.0, 1.0, 1.0)
    rep = comass_estimate(nf.form, starts=8, seed=4, options=FAST,
                          witnesses=(standard_face(model2, "quaternionic", 1),))
    assert rep.comass >= 3.0 - 1e-9


# ---------------------------------------------------------------------------
# face verification harness
# ---------------------------------------------------------------------------

def test_verify_faces_theta(model2, rng):
    positives = [random_face(model2, "quaternionic", 1, rng) for _ in range(25)]
    negatives = [random_plane(model2, 4, rng) for _ in range(25)]
    verdict = verify_faces(theta(model2, 1), positives, negatives)
    assert verdict.passed
    assert verdict.to_dict()["positive_max_err"] < 1e-9


def test_verify_faces_reports_offenders(model2, rng):
    # a quaternionic frame is not a face of the Lagrangian calibration
    wrong = [standard_face(model2, "quaternionic", 1)]
    verdict = verify_faces(psi_pp(model2, 2), wrong, [])
    assert not verdict.passed
    frame, value = verdict.offending_positive[0]
    assert value == pytest.approx(0.0, abs=1e-9)


def test_verify_faces_lagrangian_vs_quaternionic(model2, rng):
    nf = psi_pp(model2, 2)
    positives = [random_face(model2, "complex_lagrangian", None, rng)
                 for _ in range(25)]
    negatives = [random_plane(model2, 4, rng) for _ in range(25)]
    negatives.append(standard_face(model2, "quaternionic", 1))
    assert verify_faces(nf, positives, negatives).passed


def test_bh_sector_two_faces(model2, rng):
    # with weights (1, mu, nu) in the second sector the faces are I-complex
    # isotropic planes
    nf = bryant_harvey(model2, 1.0, -0.5, -0.25)
    assert nf.region_ok
    positives = [random_face(model2, "complex_lagrangian", None, rng)
                 for _ in range(25)]
    assert verify_faces(nf, positives, []).passed


# ---------------------------------------------------------------------------
# circle-grid criterion
# ---------------------------------------------------------------------------

def test_u1_criterion_on_lagrangian_faces(model2, rng):
    f = psi(model2, 2).form
    for _ in range(10):
        W = random_face(model2, "complex_lagrangian", None, rng)
        verdict = u1_face_criterion(model2, f, W)
        assert verdict.grid_is_face and verdict.projected_is_face
        assert verdict.agree
        assert np.max(np.abs(verdict.grid_values - 1.0)) < 1e-9


def test_u1_criterion_on_generic_planes(model2, rng):
    f = psi(model2, 2).form
    for _ in range(10):
        W = random_plane(model2, 4, rng)
        verdict = u1_face_criterion(model2, f, W)
        assert not verdict.grid_is_face and not verdict.projected_is_face
        assert verdict.agree


def test_u1_criterion_degenerates_for_balanced_input(model2, rng):
    # a form that is already balanced has constant grid values
    f = psi_pp(model2, 2).form
    W = random_plane(model2, 4, rng)
    verdict = u1_face_criterion(model2, f, W)
    assert np.max(verdict.grid_values) - np.min(verdict.grid_values) < 1e-10
    assert verdict.agree


# ---------------------------------------------------------------------------
# stabilizer dimensions
# ---------------------------------------------------------------------------

def test_stabilizer_of_symplectic_form(model1):
    rep = stabilizer_dimension(model1.omega_I)
    assert rep.dimension == 10          # sp(4, R)
    assert rep.gap_ok


def test_stabilizer_of_volume_form():
    rep = stabilizer_dimension(volume_form(4))
    assert rep.dimension == 15          # sl(4, R)
    rep8 = stabilizer_dimension(volume_form(8))
    assert rep8.dimension == 63


def test_stabilizer_of_coisotropic_sl_form(model2):
    # honest measured value: the kernel is the full 36-dimensional
    # stabilizer algebra of omega_J (any 6-form on R^8 has kernel >= 36,
    # since the derivation map lands in the 28-dimensional Lambda^6);
    # the compact sp(2) of dimension 10 sits strictly inside it
    rep = stabilizer_dimension(sl_forms(model2, 1).form)
    assert rep.dimension == 36
    assert rep.gap_ok
    wj = stabilizer_dimension(model2.omega_J)
    assert wj.dimension == 36           # sp(8, R), same dimension


def test_stabilizer_contains_sp_n(model2, rng):
    from hkcalib.subspaces import sp_algebra_sample
    from hkcalib.quaternionic import derivation_matrix
    f = sl_forms(model2, 1).form
    Y = sp_algebra_sample(model2, rng)
    out = derivation_matrix(Y, 8, 6).T @ f.coeffs
    assert np.max(np.abs(out)) < 1e-10
