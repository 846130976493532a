"""Constructors for the named calibration forms, exactly normalized.

Every constructor returns a NamedForm whose AlternatingForm evaluates to
exactly 1 on the standard model face of its claimed class (asserted at
build time, never silently rescaled). The families:

* theta(p)  = (omega_I^2 + omega_J^2 + omega_K^2)^p / c_p, faces the
  quaternionic p-planes, with c_p = sum_{k=0}^p (p!)^2/(k!)^2 (2k)! 4^{p-k}.
* xi(p)     = (omega_J^2 + omega_K^2)^p / ((p!)^2 4^p), same faces.
* psi(p)    = (1/p!) Re(Omega^p) with Omega = omega_I - i omega_K, the
  degree-2p special-Lagrangian-type form; psi_pp(p) is its (p,p)-part with
  respect to I, calibrating complex Lagrangian (p = n) or complex
  isotropic (p < n) planes.
* phi_coisotropic(p): (n+p, n+p)-part of (1/(2^p p! n!)) Omega^n ^ omega_I^p,
  calibrating complex coisotropic planes of complex dimension n + p.
* bryant_harvey(l, m, v) = (l/2) omega_I^2 + (m/2) omega_J^2 + (v/2) omega_K^2,
  a comass-1 form exactly when -1 <= l, m, v <= 1 and -1 <= l+m+v <= 1.
* sl_forms(i): the J-distinguished family (1/(2^i i!)) Re((Phi)^{n,n}_J) ^
  omega_J^i built from the holomorphic volume form Phi = Omega_I^n / n!
  (|Phi| = 2^n); pointwise the (I <-> J)-role swap of psi_pp / phi_coisotropic.

Pairing conventions for psi. Two unit-phase choices of the defining
(2,0)-form appear in the literature and differ by i:

  "standard"  Omega = omega_I - i omega_K   (default; +1 on complex-oriented
                                             Lagrangian frames, weakly positive)
  "rotated"   Omega = omega_K + i omega_I   (= i times standard; its (2,2)-part
                                             is -1/2 omega_I^2 + 1/4 (omega_J^2
                                             + omega_K^2), the classical
                                             degree-two display; vanishes at odd p)

The two differ by the phase (-1)^{floor(p/2)} at even p; all face values in
this package refer to the standard pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .exterior import AlternatingForm, evaluate, wedge, wedge_power
from .quaternionic import (
    ComplexForm,
    QuaternionicModel,
    hodge_part,
    holomorphic_symplectic,
    weight_project,
)
from .subspaces import standard_face

FACE_QUATERNIONIC = "quaternionic"
FACE_COMPLEX_LAGRANGIAN = "complex_lagrangian"
FACE_COMPLEX_ISOTROPIC = "complex_isotropic"
FACE_COMPLEX_COISOTROPIC = "complex_coisotropic"
FACE_MIXED = "mixed_per_region"

PAIRINGS = ("standard", "rotated")

_NORMALIZATION_TOL = 1e-9


@dataclass
class NamedForm:
    """A catalog entry: a named, exactly normalized calibration form."""

    name: str
    params: dict
    form: AlternatingForm
    face_class: str | None
    region_ok: bool | None = None

    @property
    def degree(self) -> int:
        return self.form.degree

    @property
    def dim(self) -> int:
        return self.form.dim

    def evaluate(self, frame) -> float:
        return evaluate(self.form, frame)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "degree": self.degree,
            "ambient_dim": self.dim,
            "coeff_vector": [float(c) for c in self.form.coeffs],
            "face_class": self.face_class,
            "region_ok": self.region_ok,
        }


def _assert_unit_on(form: AlternatingForm, frame, what: str):
    val = evaluate(form, frame.oriented_columns())
    if abs(val - 1.0) > _NORMALIZATION_TOL:
        raise AssertionError(
            f"normalization of {what} is off: value {val!r} on its standard face")


def _cached(model: QuaternionicModel, key, builder):
    if key not in model._cache:
        model._cache[key] = builder()
    return model._cache[key]


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def c_constant(p: int) -> int:
    """c_p = sum_{k=0}^{p} (p!)^2 / (k!)^2 * (2k)! * 4^(p-k).

    The k = 0 term is included: c_1 = 6 and c_2 = 120, matching the
    brute-force wedge (omega_I^2+omega_J^2+omega_K^2)^p against Vol.
    """
    if p < 1:
        raise ValueError("c_constant needs p >= 1")
    fp = factorial(p)
    return sum((fp * fp) // (factorial(k) ** 2) * factorial(2 * k) * 4 ** (p - k)
               for k in range(p + 1))


def in_bryant_harvey_region(lam: float, mu: float, nu: float) -> bool:
    """Exact comass-1 region of the quadratic 4-form family (boundary included)."""
    return (max(abs(lam), abs(mu), abs(nu)) <= 1.0
            and -1.0 <= lam + mu + nu <= 1.0)


# ---------------------------------------------------------------------------
# quaternionic-face calibrations
# ---------------------------------------------------------------------------

def theta(model: QuaternionicModel, p: int) -> NamedForm:
    """(omega_I^2 + omega_J^2 + omega_K^2)^p / c_p; value 1 on every
    quaternionic p-plane."""
    _check_p(model, p)

    def build():
        base = (wedge(model.omega_I, model.omega_I)
                + wedge(model.omega_J, model.omega_J)
                + wedge(model.omega_K, model.omega_K))
        form = wedge_power(base, p) / c_constant(p)
        nf = NamedForm("theta", {"n": model.n, "p": p}, form, FACE_QUATERNIONIC)
        _assert_unit_on(form, standard_face(model, "quaternionic", p), "theta")
        return nf

    return _cached(model, ("catalog", "theta", p), build)


def xi(model: QuaternionicModel, p: int) -> NamedForm:
    """(omega_J^2 + omega_K^2)^p / ((p!)^2 4^p); same faces as theta(p)."""
    _check_p(model, p)

    def build():
        base = (wedge(model.omega_J, model.omega_J)
                + wedge(model.omega_K, model.omega_K))
        form = wedge_power(base, p) / (factorial(p) ** 2 * 4 ** p)
        nf = NamedForm("xi", {"n": model.n, "p": p}, form, FACE_QUATERNIONIC)
        _assert_unit_on(form, standard_face(model, "quaternionic", p), "xi")
        return nf

    return _cached(model, ("catalog", "xi", p), build)


def _check_p(model, p, lo=1):
    if not lo <= p <= model.n:
        raise ValueError(f"p = {p} out of range [{lo}, {model.n}]")


# ---------------------------------------------------------------------------
# Lagrangian / isotropic family
# ---------------------------------------------------------------------------

def lagrangian_pairing(model: QuaternionicModel, pairing: str = "standard") -> ComplexForm:
    """The defining (2,0)-type pair for the psi family (see module docs)."""
    if pairing == "standard":
        return ComplexForm(model.omega_I, -model.omega_K)
    if pairing == "rotated":
        return ComplexForm(model.omega_K, model.omega_I)
    raise ValueError(f"pairing must be one of {PAIRINGS}")


def psi(model: QuaternionicModel, p: int, pairing: str = "standard") -> NamedForm:
    """The real 2p-form (1/p!) Re(Omega^p); comass 1.

    Its faces are the phase-aligned Lagrangian-type planes; the projected
    psi_pp below is the form whose faces are complex planes.
    """
    _check_p(model, p)

    def build():
        omega = lagrangian_pairing(model, pairing)
        form = omega.power(p).re / factorial(p)
        face = FACE_COMPLEX_LAGRANGIAN if p == model.n else FACE_COMPLEX_ISOTROPIC
        nf = NamedForm("psi", {"n": model.n, "p": p, "pairing": pairing}, form, face)
        if pairing == "standard":
            _assert_unit_on(form, _psi_standard_face(model, p), "psi")
        return nf

    return _cached(model, ("catalog", "psi", p, pairing), build)


def psi_pp(model: QuaternionicModel, p: int, pairing: str = "standard") -> NamedForm:
    """The (p,p)-part of psi with respect to I, by exact weight projection.

    Standard pairing: value 1 on complex-oriented complex Lagrangian
    (p = n) or complex isotropic (p < n) frames, and weakly positive on
    complex frames. Rotated pairing: (-1)^(p/2) times the standard form
    for even p (the degree-two display convention) and zero for odd p.
    """
    _check_p(model, p)

    def build():
        base = psi(model, p, pairing).form
        form = hodge_part(model, base, "I", p, p)
        face = FACE_COMPLEX_LAGRANGIAN if p == model.n else FACE_COMPLEX_ISOTROPIC
        nf = NamedForm("psi_pp", {"n": model.n, "p": p, "pairing": pairing}, form, face)
        if pairing == "standard":
            _assert_unit_on(form, _psi_standard_face(model, p), "psi_pp")
        return nf

    return _cached(model, ("catalog", "psi_pp", p, pairing), build)


def _psi_standard_face(model, p):
    if p == model.n:
        return standard_face(model, "complex_lagrangian")
    return standard_face(model, "complex_isotropic", p)


def explicit_psi_pp(model: QuaternionicModel, p: int) -> AlternatingForm:
    """Closed-form polynomial for psi_pp (standard pairing):

        (1/p!) sum_{k=0}^{floor(p/2)} (-1)^k/4^k C(p,2k) C(2k,k)
               omega_I^(p-2k) ^ (omega_J^2 + omega_K^2)^k

    Must coincide with the projection construction to 1e-12.
    """
    _check_p(model, p)
    jj_kk = (wedge(model.omega_J, model.omega_J)
             + wedge(model.omega_K, model.omega_K))
    total = AlternatingForm(model.dim, 2 * p)
    for k in range(p // 2 + 1):
        coeff = (-0.25) ** k * comb(p, 2 * k) * comb(2 * k, k)
        term = wedge(wedge_power(model.omega_I, p - 2 * k), wedge_power(jj_kk, k))
        total = total + coeff * term
    return total / factorial(p)


# ---------------------------------------------------------------------------
# coisotropic family
# ---------------------------------------------------------------------------

def phi_coisotropic(model: QuaternionicModel, p: int) -> tuple[NamedForm, NamedForm]:
    """(n+p, n+p)-parts with respect to I of the real and imaginary parts of
    (1/(2^p p! n!)) Omega^n ^ omega_I^p (standard pairing).

    The real part evaluates to 1 on the standard coisotropic frame of
    complex dimension n + p; the imaginary part projects to zero
    identically (only one phase survives the balanced projection) and is
    returned as an explicit zero form.
    """
    if not 0 <= p <= model.n:
        raise ValueError(f"p = {p} out of range [0, {model.n}]")

    def build():
        n = model.n
        omega = lagrangian_pairing(model, "standard")
        scaled = omega.power(n).wedge(wedge_power(model.omega_I, p))
        scaled = scaled / (2 ** p * factorial(p) * factorial(n))
        re_part = hodge_part(model, scaled.re, "I", n + p, n + p)
        im_part = hodge_part(model, scaled.im, "I", n + p, n + p)
        params = {"n": n, "p": p}
        nf_re = NamedForm("phi_coiso", params, re_part, FACE_COMPLEX_COISOTROPIC)
        nf_im = NamedForm("phi_coiso_im", params, im_part, FACE_COMPLEX_COISOTROPIC)
        _assert_unit_on(re_part, standard_face(model, "complex_coisotropic", p),
                        "phi_coisotropic")
        if not im_part.is_zero(1e-10):
            raise AssertionError("imaginary coisotropic part unexpectedly nonzero")
        return nf_re, nf_im

    return _cached(model, ("catalog", "phi_coiso", p), build)


# ---------------------------------------------------------------------------
# quadratic 4-form family
# ---------------------------------------------------------------------------

def bryant_harvey(model: QuaternionicModel, lam: float, mu: float,
                  nu: float) -> NamedForm:
    """(lam/2) omega_I^2 + (mu/2) omega_J^2 + (nu/2) omega_K^2.

    Out-of-region parameters are allowed; region membership is recorded on
    the NamedForm. Inside the region the faces are quaternionic planes or
    complex isotropic planes depending on the parameter sector.
    """
    form = (0.5 * lam * wedge(model.omega_I, model.omega_I)
            + 0.5 * mu * wedge(model.omega_J, model.omega_J)
            + 0.5 * nu * wedge(model.omega_K, model.omega_K))
    return NamedForm(
        "bryant_harvey",
        {"n": model.n, "lambda": float(lam), "mu": float(mu), "nu": float(nu)},
        form, FACE_MIXED, region_ok=in_bryant_harvey_region(lam, mu, nu))


# ---------------------------------------------------------------------------
# J-distinguished (holomorphic-volume) family
# ---------------------------------------------------------------------------

def sl_volume(model: QuaternionicModel) -> ComplexForm:
    """Phi = Omega_I^n / n!, the holomorphic volume form of (H^n, I);
    |Phi| = 2^n in the quaternionic Hermitian metric."""
    return holomorphic_symplectic(model, "I").power(model.n) / factorial(model.n)


def sl_forms(model: QuaternionicModel, i: int) -> NamedForm:
    """The degree-(2n + 2i) form (1/(2^i i!)) Re((Phi)^{n,n}_J) ^ omega_J^i.

    Pointwise the (I <-> J)-role swap of psi_pp (i = 0) and of
    phi_coisotropic (i > 0): faces are J-complex planes that are Lagrangian
    (i = 0) or coisotropic with respect to omega_K + i omega_I.
    """
    if not 0 <= i <= model.n:
        raise ValueError(f"i = {i} out of range [0, {model.n}]")

    def build():
        n = model.n
        phi = sl_volume(model)
        base = weight_project(model, phi, "J", 0)
        if base.im.norm() > 1e-10 * max(1.0, base.re.norm()):
            raise AssertionError("(n,n)_J-part of the holomorphic volume is not real")
        form = wedge(base.re, wedge_power(model.omega_J, i)) / (2 ** i * factorial(i))
        face = FACE_COMPLEX_LAGRANGIAN if i == 0 else FACE_COMPLEX_COISOTROPIC
        nf = NamedForm("v", {"n": n, "i": i, "structure": "J"}, form, face)
        kind = "complex_lagrangian" if i == 0 else "complex_coisotropic"
        param = None if i == 0 else i
        _assert_unit_on(form, standard_face(model, kind, param, structure="J"),
                        "sl_forms")
        return nf

    return _cached(model, ("catalog", "v", i), build)


# ---------------------------------------------------------------------------
# catalog dispatch (shared by the CLI)
# ---------------------------------------------------------------------------

def named_form(model: QuaternionicModel, name: str, **params) -> NamedForm:
    """Build a catalog entry by short name; used by the CLI form selector.

    "psi" resolves to the projected psi_pp (the form whose faces are the
    complex planes); "psi-raw" exposes the unprojected real power.
    """
    name = name.replace("-", "_")
    if name == "theta":
        return theta(model, params["p"])
    if name == "xi":
        return xi(model, params["p"])
    if name in ("psi", "psi_pp"):
        return psi_pp(model, params["p"], params.get("pairing", "standard"))
    if name == "psi_raw":
        return psi(model, params["p"], params.get("pairing", "standard"))
    if name == "phi_coiso":
        return phi_coisotropic(model, params["p"])[0]
    if name in ("bh", "bryant_harvey"):
        return bryant_harvey(model, params["lambda"], params["mu"], params["nu"])
    if name == "v":
        return sl_forms(model, params["i"])
    if name == "omega_i":
        return NamedForm("omega_i", {"n": model.n}, model.omega_I.copy(), None)
    if name == "kahler":
        p = params["p"]
        form = wedge_power(model.omega_I, p) / factorial(p)
        return NamedForm("kahler", {"n": model.n, "p": p}, form, None)
    if name == "vol":
        return NamedForm("vol", {"n": model.n}, model.vol.copy(), None)
    raise ValueError(f"unknown form name {name!r}")
