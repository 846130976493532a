"""Model space, operator actions, weights, su(2), Lefschetz, positivity."""

from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcalib import (
    act_on_form,
    basis_form,
    build_model,
    casimir_matrix,
    casimir_projector_max,
    casimir_spectrum,
    evaluate,
    hodge_part,
    holomorphic_symplectic,
    inner_product,
    is_H_real,
    is_q_positive,
    lefschetz,
    lefschetz_adjoint,
    lefschetz_matrix,
    hodge_star,
    random_form,
    su2_cartan,
    weight_decompose,
    weight_project,
    wedge,
    wedge_power,
)
from hkcalib.quaternionic import ComplexForm, circle_action
from hkcalib.catalog import explicit_psi_pp, psi_pp


# ---------------------------------------------------------------------------
# model construction
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_quaternion_relations_hold_entrywise(n):
    m = build_model(n)
    eye = np.eye(4 * n)
    assert np.max(np.abs(m.I @ m.I + eye)) < 1e-14
    assert np.max(np.abs(m.J @ m.J + eye)) < 1e-14
    assert np.max(np.abs(m.I @ m.J - m.K)) < 1e-14
    assert np.max(np.abs(m.J @ m.I + m.K)) < 1e-14


def test_model_rejects_bad_n():
    with pytest.raises(ValueError, match="supported range"):
        build_model(0)
    with pytest.raises(ValueError, match="supported range"):
        build_model(5)


def test_fundamental_forms_are_skew(model2, rng):
    for lab in "IJK":
        w = model2.omega(lab)
        for _ in range(100):
            x, y = rng.standard_normal((2, 8))
            pair = np.column_stack([x, y])
            anti = np.column_stack([y, x])
            assert evaluate(w, pair) == pytest.approx(-evaluate(w, anti), abs=1e-10)


def test_mixed_square_products_on_r8(model2):
    # (w_I^2+w_J^2+w_K^2)^2 = 120 Vol with three pure fourth powers of 24
    # forces every cross term w_L^2 ^ w_M^2 (L != M) to be 8 Vol
    vol = model2.vol.coeffs
    cross = wedge(wedge_power(model2.omega_I, 2), wedge_power(model2.omega_J, 2))
    assert np.allclose(cross.coeffs, 8.0 * vol, atol=1e-12)


# ---------------------------------------------------------------------------
# precomposition action
# ---------------------------------------------------------------------------

def test_act_identity_and_invariance(model1, rng):
    f = random_form(4, 2, rng)
    assert np.allclose(act_on_form(np.eye(4), f).coeffs, f.coeffs)
    assert np.allclose(act_on_form(model1.I, model1.omega_I).coeffs,
                       model1.omega_I.coeffs, atol=1e-14)


def test_act_multiplicative_over_wedge(rng):
    A = rng.standard_normal((6, 6))
    a, b = random_form(6, 1, rng), random_form(6, 2, rng)
    lhs = act_on_form(A, wedge(a, b))
    rhs = wedge(act_on_form(A, a), act_on_form(A, b))
    assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) < 1e-10


def test_j_conjugates_the_holomorphic_pairing(model1):
    # J maps the weight +2 component to weight -2 (type (2,0) <-> (0,2))
    om = holomorphic_symplectic(model1, "I")
    jom = act_on_form(model1.J, om)
    plus = weight_project(model1, jom, "I", 2)
    minus = weight_project(model1, jom, "I", -2)
    assert plus.norm() < 1e-12
    assert minus.norm() == pytest.approx(jom.norm(), rel=1e-12)


# ---------------------------------------------------------------------------
# weight decomposition
# ---------------------------------------------------------------------------

def test_weight_project_invariant_form(model1):
    w0 = weight_project(model1, model1.omega_I, "I", 0)
    assert np.allclose(w0.re.coeffs, model1.omega_I.coeffs, atol=1e-14)
    assert w0.im.norm() < 1e-14


def test_weight_project_carries_omega_j_in_pm2(model1):
    dec = weight_decompose(model1, model1.omega_J, "I")
    assert dec.component(0).norm() < 1e-13
    total = dec.component(2).norm() ** 2 + dec.component(-2).norm() ** 2
    assert total == pytest.approx(model1.omega_J.norm() ** 2, rel=1e-12)


def test_weight_zero_of_rotated_square_display(model2):
    # (1/2) Re((w_K + i w_I)^2) has balanced part -1/2 w_I^2 + 1/4 (w_J^2+w_K^2)
    rot = ComplexForm(model2.omega_K, model2.omega_I)
    sq = rot.power(2).re / 2.0
    part = weight_project(model2, sq, "I", 0)
    target = (-0.5 * wedge_power(model2.omega_I, 2)
              + 0.25 * (wedge_power(model2.omega_J, 2)
                        + wedge_power(model2.omega_K, 2)))
    assert np.max(np.abs(part.re.coeffs - target.coeffs)) < 1e-12
    assert part.im.norm() < 1e-12


@pytest.mark.parametrize("lab", ["I", "J", "K"])
def test_weight_components_sum_to_identity(model2, rng, lab):
    f = random_form(8, 3, rng)
    dec = weight_decompose(model2, f, lab)
    total = dec.total()
    assert np.max(np.abs(total.re.coeffs - f.coeffs)) < 1e-12
    assert total.im.norm() < 1e-12


def test_weight_component_equivariance(model2, rng):
    # rho_L(t) acts on the weight-w piece as e^{iwt}
    f = random_form(8, 2, rng)
    dec = weight_decompose(model2, f, "J")
    t = 0.37
    R = circle_action(model2, "J", t)
    for w, part in dec.components.items():
        rotated = act_on_form(R, part)
        expected = np.exp(1j * w * t) * part
        assert np.max(np.abs(rotated.coeffs - expected.coeffs)) < 1e-11


def test_weight_project_out_of_range_is_zero(model1, rng):
    f = random_form(4, 2, rng)
    assert weight_project(model1, f, "I", 3).norm() == 0.0
    assert weight_project(model1, f, "I", 8).norm() == 0.0


# ---------------------------------------------------------------------------
# Hodge parts
# ---------------------------------------------------------------------------

def test_hodge_part_fixes_balanced_powers(model2):
    f = wedge_power(model2.omega_I, 2)
    part = hodge_part(model2, f, "I", 2, 2)
    assert np.allclose(part.coeffs, f.coeffs, atol=1e-12)


def test_hodge_part_of_pairing_power_at_n1(model1):
    # (1,1)-part of Re(w_I - i w_K) is the p = 1 closed form, omega_I
    pair = ComplexForm(model1.omega_I, -model1.omega_K)
    part = hodge_part(model1, pair.power(1).re, "I", 1, 1)
    assert np.allclose(part.coeffs, explicit_psi_pp(model1, 1).coeffs, atol=1e-14)
    assert np.allclose(part.coeffs, model1.omega_I.coeffs, atol=1e-14)


def test_two_zero_part_of_omega_j(model1):
    om = holomorphic_symplectic(model1, "I")
    part = hodge_part(model1, ComplexForm(model1.omega_J), "I", 2, 0)
    assert np.max(np.abs(part.coeffs - 0.5 * om.coeffs)) < 1e-13


def test_hodge_part_idempotent_and_orthogonal(model2, rng):
    f = ComplexForm(random_form(8, 2, rng), random_form(8, 2, rng))
    part = hodge_part(model2, f, "I", 2, 0)
    again = hodge_part(model2, part, "I", 2, 0)
    assert np.max(np.abs(again.coeffs - part.coeffs)) < 1e-12
    other = weight_project(model2, part, "I", 0)
    assert other.norm() < 1e-12


def test_hodge_part_requires_matching_degree(model1, rng):
    with pytest.raises(ValueError, match="does not sum"):
        hodge_part(model1, random_form(4, 2, rng), "I", 2, 1)


# ---------------------------------------------------------------------------
# su(2) generators and Casimir
# ---------------------------------------------------------------------------

def test_cartan_eigenvalues_on_one_forms(model1):
    h = su2_cartan(model1, "I", 1)
    evals = np.linalg.eigvals(-1j * (h + 0j))
    evals = np.sort_complex(evals)
    assert np.allclose(sorted(evals.real), [-1, -1, 1, 1], atol=1e-12)
    assert np.max(np.abs(evals.imag)) < 1e-12


def test_cartan_derivative_matches_numeric_flow(model1):
    # d/dt rho_I(t) omega_J at t = 0, two-sided difference
    eps = 1e-6
    plus = act_on_form(circle_action(model1, "I", eps), model1.omega_J)
    minus = act_on_form(circle_action(model1, "I", -eps), model1.omega_J)
    numeric = (plus.coeffs - minus.coeffs) / (2 * eps)
    h = su2_cartan(model1, "I", 2)
    assert np.max(np.abs(h @ model1.omega_J.coeffs - numeric)) < 1e-8
    # the recorded sign convention of the precomposition generator
    assert np.allclose(h @ model1.omega_J.coeffs, -2.0 * model1.omega_K.coeffs,
                       atol=1e-12)


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_su2_bracket_relations(model2, degree):
    # with h_L = d/dt rho_L(t)|_0 the triple satisfies [h_I, h_J] = -2 h_K
    # (equivalently (h_I, -h_J, h_K) is a standard su(2) triple)
    hi = su2_cartan(model2, "I", degree)
    hj = su2_cartan(model2, "J", degree)
    hk = su2_cartan(model2, "K", degree)
    assert np.max(np.abs(hi @ hj - hj @ hi + 2 * hk)) < 1e-12
    assert np.max(np.abs(hj @ hk - hk @ hj + 2 * hi)) < 1e-12
    assert np.max(np.abs(hk @ hi - hi @ hk + 2 * hj)) < 1e-12


def test_casimir_spectrum_on_two_forms(model1):
    spec = casimir_spectrum(model1, 2)
    assert [(round(v), mult) for v, mult in spec] == [(0, 3), (8, 3)]


def test_casimir_spectrum_values_are_m_m_plus_2(model2):
    for degree in (1, 2, 3):
        allowed = {m * (m + 2) for m in range(degree + 1)
                   if (m - degree) % 2 == 0}
        for v, _ in casimir_spectrum(model2, degree):
            assert any(abs(v - a) < 1e-8 for a in allowed), (degree, v)


def test_max_projector_fixes_triplet_and_is_projection(model1):
    P = casimir_matrix(model1, 2)  # warm the cache
    for lab in "IJK":
        w = model1.omega(lab)
        out = casimir_projector_max(model1, w)
        assert np.allclose(out.coeffs, w.coeffs, atol=1e-12)
    from hkcalib.quaternionic import casimir_max_projector
    P = casimir_max_projector(model1, 2)
    assert np.max(np.abs(P @ P - P)) < 1e-12
    assert np.max(np.abs(P - P.T)) < 1e-12
    h = su2_cartan(model1, "J", 2)
    assert np.max(np.abs(P @ h - h @ P)) < 1e-12


def test_max_projector_of_omega_power_is_coisotropic_calibration(model2):
    # frozen constant: the projection of w_I^3 equals 3 w_I ^ psi_pp(2,2),
    # a positive multiple (the constant is measured, not assumed)
    out = casimir_projector_max(model2, wedge_power(model2.omega_I, 3))
    cand = wedge(model2.omega_I, psi_pp(model2, 2).form)
    assert np.max(np.abs(out.coeffs - 3.0 * cand.coeffs)) < 1e-10


# ---------------------------------------------------------------------------
# Lefschetz operators
# ---------------------------------------------------------------------------

def test_adjoint_traces_norm(model1):
    lam = lefschetz_adjoint(model1.omega_I, model1.omega_I)
    # oracle: transpose-matrix application; the value is the monomial norm^2
    assert lam.coeffs[0] == pytest.approx(inner_product(model1.omega_I,
                                                        model1.omega_I))
    assert lam.coeffs[0] == pytest.approx(2.0)


def test_adjoint_kills_disjoint_monomial(model1):
    out = lefschetz_adjoint(basis_form(4, [0, 2]), model1.omega_I)
    assert abs(out.coeffs[0]) < 1e-15


def test_adjoint_is_matrix_transpose(model2, rng):
    f = random_form(8, 4, rng)
    g = random_form(8, 2, rng)
    omega = model2.omega_J
    lhs = inner_product(lefschetz(g, omega), f)
    rhs = inner_product(g, lefschetz_adjoint(f, omega))
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_adjoint_agrees_with_star_conjugation_up_to_sign(model2, rng):
    f = random_form(8, 4, rng)
    omega = model2.omega_J
    direct = lefschetz_adjoint(f, omega)
    starred = hodge_star(lefschetz(hodge_star(f), omega))
    err = min(np.max(np.abs(direct.coeffs - starred.coeffs)),
              np.max(np.abs(direct.coeffs + starred.coeffs)))
    assert err < 1e-12


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_lefschetz_commutator_acts_by_type_difference(model2, degree):
    # [L_{w_J}, Lambda_{w_K}] multiplies a (p,q)-form (wrt I) by i(p - q)
    rng = np.random.default_rng(degree)
    f = ComplexForm(random_form(8, degree, rng), random_form(8, degree, rng))
    for p in range(degree + 1):
        q = degree - p
        part = hodge_part(model2, f, "I", p, q)
        if part.norm() < 1e-12:
            continue
        lambda_of_l = lefschetz_adjoint(lefschetz(part, model2.omega_J),
                                        model2.omega_K)
        if degree >= 2:
            l_of_lambda = lefschetz(lefschetz_adjoint(part, model2.omega_K),
                                    model2.omega_J)
            comm = l_of_lambda - lambda_of_l
        else:
            comm = -1.0 * lambda_of_l
        expected = 1j * (p - q) * part
        assert np.max(np.abs(comm.coeffs - expected.coeffs)) < 1e-10, (p, q)


# ---------------------------------------------------------------------------
# H-reality and positivity
# ---------------------------------------------------------------------------

def test_pairing_is_h_real_and_strictly_positive(model2):
    om = holomorphic_symplectic(model2, "I")
    assert is_H_real(model2, om)
    assert is_q_positive(model2, om, strict=True)


def test_negative_pairing_is_real_but_not_positive(model1):
    om = holomorphic_symplectic(model1, "I")
    assert is_H_real(model1, -1.0 * om)
    assert not is_q_positive(model1, -1.0 * om)


def test_phase_rotated_pairing_is_not_h_real(model1):
    om = holomorphic_symplectic(model1, "I")
    assert not is_H_real(model1, 1j * om)


def test_h_real_pairing_scalar_is_real(model2, rng):
    # eta(x, J conj(x)) is real for H-real eta and arbitrary (1,0) x
    om = holomorphic_symplectic(model2, "I")
    for _ in range(20):
        v = rng.standard_normal(8)
        x = v - 1j * (model2.I @ v)
        val = om.evaluate(np.column_stack([x, model2.J @ np.conj(x)]))
        assert abs(val.imag) < 1e-12 * max(1.0, abs(val.real))


def test_positivity_rejects_off_type_input(model1, rng):
    junk = ComplexForm(random_form(4, 2, rng), random_form(4, 2, rng))
    with pytest.raises(ValueError, match="pure type"):
        is_q_positive(model1, junk)
