"""Plane generators and the classification predicates."""

import numpy as np
import pytest

from hkcalib import (
    classify,
    evaluate,
    holomorphic_symplectic,
    lefschetz,
    lefschetz_adjoint,
    psi_pp,
    random_face,
    random_plane,
    random_sp_n,
    standard_face,
    theta,
    weight_decompose,
)
from hkcalib.exterior import AlternatingForm, index_tuples, tuple_rank
from hkcalib.quaternionic import act_on_form
from hkcalib.subspaces import SubspaceFrame, sp_algebra_sample


# ---------------------------------------------------------------------------
# random planes
# ---------------------------------------------------------------------------

def test_random_plane_is_orthonormal_and_seeded(model2):
    a = random_plane(model2, 3, np.random.default_rng(1))
    b = random_plane(model2, 3, np.random.default_rng(1))
    c = random_plane(model2, 3, np.random.default_rng(2))
    assert np.allclose(a.columns, b.columns)
    # distinct seeds give distinct planes (principal angles bounded away)
    overlap = np.linalg.svd(a.columns.T @ c.columns, compute_uv=False)
    assert np.max(np.abs(a.columns.T @ a.columns - np.eye(3))) < 1e-12
    assert overlap.min() < 1 - 1e-6


def test_full_space_plane_classifies_quaternionic(model2):
    F = random_plane(model2, 8, np.random.default_rng(3))
    cls = classify(model2, F)
    assert cls.quaternionic
    assert cls.coisotropic and cls.symplectic_rank == model2.n


def test_mean_of_omega_over_random_planes_vanishes(model1):
    # antipodal symmetry of the Haar measure kills the expectation
    rng = np.random.default_rng(4)
    vals = np.array([evaluate(model1.omega_I, random_plane(model1, 2, rng).columns)
                     for _ in range(10_000)])
    stderr = vals.std() / np.sqrt(len(vals))
    assert abs(vals.mean()) < 3 * stderr


# ---------------------------------------------------------------------------
# Sp(n) sampling
# ---------------------------------------------------------------------------

def test_sp_algebra_sample_commutes_and_is_skew(model2, rng):
    Y = sp_algebra_sample(model2, rng)
    assert np.max(np.abs(Y + Y.T)) < 1e-12
    for lab in "IJK":
        L = model2.structure(lab)
        assert np.max(np.abs(Y @ L - L @ Y)) < 1e-12


def test_random_sp_n_preserves_structure(model2, rng):
    g = random_sp_n(model2, rng)
    assert np.max(np.abs(g.T @ g - np.eye(8))) < 1e-10
    assert np.linalg.det(g) == pytest.approx(1.0, abs=1e-9)
    for lab in "IJK":
        w = model2.omega(lab)
        moved = act_on_form(g, w)
        assert np.max(np.abs(moved.coeffs - w.coeffs)) < 1e-10


def test_random_sp_n_preserves_theta(model2, rng):
    th = theta(model2, 1).form
    g = random_sp_n(model2, rng)
    assert np.max(np.abs(act_on_form(g, th).coeffs - th.coeffs)) < 1e-9


# ---------------------------------------------------------------------------
# structured faces and round-trips
# ---------------------------------------------------------------------------

def test_standard_lagrangian_restricts_both_omegas_to_zero(model2):
    F = standard_face(model2, "complex_lagrangian")
    for lab in "JK":
        w = model2.omega(lab)
        vals = [evaluate(w, F.columns[:, [a, b]])
                for a in range(4) for b in range(a + 1, 4)]
        assert np.max(np.abs(vals)) < 1e-14
    cls = classify(model2, F)
    assert cls.is_complex("I") and cls.isotropic and not cls.quaternionic


def test_standard_quaternionic_line(model2):
    F = standard_face(model2, "quaternionic", 1)
    assert np.allclose(F.columns, np.eye(8)[:, :4])
    assert classify(model2, F).quaternionic


def test_coisotropic_restricted_rank(model2):
    # the standard coisotropic frame of complex dimension n + k restricts
    # the holomorphic pairing to complex symplectic rank k
    for k in (0, 1, 2):
        F = standard_face(model2, "complex_coisotropic", k)
        cls = classify(model2, F)
        assert cls.coisotropic
        assert cls.symplectic_rank == k


@pytest.mark.parametrize("kind,param", [
    ("quaternionic", 1),
    ("quaternionic", 2),
    ("complex_lagrangian", None),
    ("complex_isotropic", 1),
    ("complex_coisotropic", 0),
    ("complex_coisotropic", 1),
    ("complex_coisotropic", 2),
])
def test_generator_classifier_round_trip(model2, kind, param):
    rng = np.random.default_rng(hash((kind, param)) % 2 ** 31)
    for _ in range(100):
        F = random_face(model2, kind, param, rng)
        assert classify(model2, F).matches(kind), (kind, param)


def test_round_trip_on_j_structure(model2):
    rng = np.random.default_rng(17)
    om = holomorphic_symplectic(model2, "J")
    for _ in range(25):
        F = random_face(model2, "complex_lagrangian", None, rng, structure="J")
        cls = classify(model2, F, omega=om, structure="J")
        assert cls.matches("complex_lagrangian", structure="J")


def test_classification_is_sp_invariant(model2, rng):
    for kind, param in [("quaternionic", 1), ("complex_lagrangian", None),
                        ("complex_coisotropic", 1)]:
        F = standard_face(model2, kind, param)
        g = random_sp_n(model2, rng)
        moved = SubspaceFrame(g @ F.columns)
        assert classify(model2, moved).matches(kind)


def test_span_e_je_is_not_i_complex(model1):
    cols = np.eye(4)[:, [0, 2]]
    cls = classify(model1, SubspaceFrame(cols))
    assert not cls.is_complex("I")
    # omega_J(e_1, Je_1) = 1, so the plane is not isotropic for the pairing
    assert not cls.isotropic
    assert cls.is_complex("J")


def test_classify_margins_are_reported(model2, rng):
    F = random_plane(model2, 4, rng)
    cls = classify(model2, F)
    assert cls.margins["complex"]["I"] > 1e-3
    assert cls.margins["isotropy"] >= 0.0


def test_face_generators_validate_parameters(model2):
    with pytest.raises(ValueError):
        standard_face(model2, "quaternionic", 3)
    with pytest.raises(ValueError):
        standard_face(model2, "complex_isotropic", 2)
    with pytest.raises(ValueError, match="unknown face kind"):
        standard_face(model2, "special", 1)


# ---------------------------------------------------------------------------
# annihilation by both Lefschetz operators forces balanced type
# ---------------------------------------------------------------------------

def _plane_multivector_form(model, frame):
    """The degree-k form with the Plucker coefficients of the plane."""
    k = frame.k
    rm = tuple_rank(model.dim, k)
    f = AlternatingForm(model.dim, k)
    for tup, idx in rm.items():
        f.coeffs[idx] = np.linalg.det(frame.columns[list(tup), :])
    return f


def test_doubly_lagrangian_plane_vector_is_balanced(model2, rng):
    # if wedging and contracting by both omega_J and omega_K kill the
    # plane's 2p-vector, that vector is of type (p, p) with respect to I
    for _ in range(10):
        F = random_face(model2, "complex_lagrangian", None, rng)
        xi = _plane_multivector_form(model2, F)
        for lab in "JK":
            w = model2.omega(lab)
            assert lefschetz(xi, w).is_zero(1e-10)
            assert lefschetz_adjoint(xi, w).is_zero(1e-10)
        dec = weight_decompose(model2, xi, "I")
        off = sum(part.norm() ** 2 for w_, part in dec.components.items()
                  if w_ != 0)
        assert np.sqrt(off) < 1e-10
        assert dec.component(0).norm() == pytest.approx(xi.norm(), rel=1e-10)


def test_frame_serialization_round_trip(model2, rng):
    F = random_face(model2, "quaternionic", 1, rng)
    d = F.to_dict()
    rebuilt = SubspaceFrame(np.array(d["columns"]).T, d["orientation"])
    assert np.allclose(rebuilt.columns, F.columns)


def test_orientation_flip_negates_values(model2, rng):
    F = random_face(model2, "quaternionic", 1, rng)
    th = theta(model2, 1)
    assert th.evaluate(F.flipped().oriented_columns()) == pytest.approx(
        -th.evaluate(F.oriented_columns()), abs=1e-12)
