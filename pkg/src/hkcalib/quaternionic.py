"""The model quaternionic Hermitian space H^n = R^{4n}.

Provides the three complex-structure matrices I, J, K with I J = K, the
fundamental 2-forms omega_L(x, y) = g(Lx, y), the extension of linear
operators to forms by precomposition in every slot, U(1) weight
decompositions and Hodge (p,q)-parts, the su(2) generators and Casimir
spectral projector onto the maximal-weight component, Lefschetz operators
with their metric adjoints, and reality/positivity tests for (2,0)-forms.

Conventions
-----------
* Basis order is (e_1, Ie_1, Je_1, Ke_1, ..., e_n, ..., Ke_n); the metric
  is the identity in this basis and Vol = e^1 ^ Ie^1 ^ ... ^ Ke^n.
* Operators act on forms by precomposition, (A.f)(v_1, ..., v_k)
  = f(A v_1, ..., A v_k); the circle rho_L(t) = cos(t) Id + sin(t) L acts
  the same way, and a form has weight w when rho_L(t) f = e^{iwt} f.
  Hodge type (p, q) with respect to L corresponds to weight p - q.
* With h_L := d/dt rho_L(t)|_{t=0} on forms, the recorded sign facts are
  h_I(omega_J) = -2 omega_K and [h_I, h_J] = -2 h_K; equivalently
  (h_I, -h_J, h_K) is a standard su(2) triple. The Casimir
  C = -(h_I^2 + h_J^2 + h_K^2) does not depend on these signs and acts on
  the weight-m isotypic component as m(m + 2); the 2-form triplet
  omega_I, omega_J, omega_K has eigenvalue 8.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .exterior import (
    AlternatingForm,
    _wedge_table,
    evaluate,
    index_array,
    index_tuples,
    tuple_rank,
    volume_form,
    wedge,
)

STRUCTURE_LABELS = ("I", "J", "K")

_IDENTITY_TOL = 1e-12

# 4x4 blocks of I, J, K on one quaternionic line, basis (e, Ie, Je, Ke)
_I_BLOCK = np.array([
    [0., -1., 0., 0.],
    [1., 0., 0., 0.],
    [0., 0., 0., -1.],
    [0., 0., 1., 0.]])
_J_BLOCK = np.array([
    [0., 0., -1., 0.],
    [0., 0., 0., 1.],
    [1., 0., 0., 0.],
    [0., -1., 0., 0.]])
_K_BLOCK = _I_BLOCK @ _J_BLOCK


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

class QuaternionicModel:
    """Immutable container for (R^{4n}, g, I, J, K) and derived forms.

    Instances are hashable by identity; derived operator matrices are
    memoized in an internal read-mostly cache, so concurrent readers are
    safe once a model is built.
    """

    def __init__(self, I: np.ndarray, J: np.ndarray, K: np.ndarray,
                 n: int | None = None):
        dim = I.shape[0]
        if dim % 4:
            raise ValueError("quaternionic model dimension must be 4n")
        for name, L in (("I", I), ("J", J), ("K", K)):
            if L.shape != (dim, dim):
                raise ValueError(f"{name} has shape {L.shape}, expected {(dim, dim)}")
        _check_quaternion_relations(I, J, K)
        self.n = dim // 4 if n is None else n
        self.dim = dim
        self.I = I.copy()
        self.J = J.copy()
        self.K = K.copy()
        for M in (self.I, self.J, self.K):
            M.setflags(write=False)
        self.g = np.eye(dim)
        self.omega_I = _fundamental_form(self.I)
        self.omega_J = _fundamental_form(self.J)
        self.omega_K = _fundamental_form(self.K)
        self.vol = volume_form(dim)
        self.basis_labels = tuple(
            f"{prefix}e{i + 1}" for i in range(dim // 4)
            for prefix in ("", "I", "J", "K"))
        self._cache: dict = {}

    def structure(self, L) -> np.ndarray:
        """Resolve a structure label ('I', 'J', 'K') or pass a matrix through."""
        if isinstance(L, str):
            try:
                return getattr(self, L)
            except AttributeError:
                raise ValueError(f"unknown structure label {L!r}") from None
        return np.asarray(L, dtype=float)

    def omega(self, L: str) -> AlternatingForm:
        if L not in STRUCTURE_LABELS:
            raise ValueError(f"unknown structure label {L!r}")
        return getattr(self, f"omega_{L}")

    def __repr__(self):
        return f"QuaternionicModel(n={self.n}, dim={self.dim})"


def _check_quaternion_relations(I, J, K, tol=_IDENTITY_TOL):
    dim = I.shape[0]
    eye = np.eye(dim)
    checks = {
        "I^2 = -Id": I @ I + eye,
        "J^2 = -Id": J @ J + eye,
        "K^2 = -Id": K @ K + eye,
        "I J = K": I @ J - K,
        "J I = -K": J @ I + K,
        "I isometry": I.T @ I - eye,
        "J isometry": J.T @ J - eye,
        "K isometry": K.T @ K - eye,
    }
    for name, resid in checks.items():
        err = np.max(np.abs(resid))
        if err > tol:
            raise ValueError(f"quaternionic relation {name} fails by {err:.3e}")


def _fundamental_form(L: np.ndarray) -> AlternatingForm:
    """omega_L(x, y) = g(Lx, y) as a 2-form; validates antisymmetry."""
    dim = L.shape[0]
    skew = L.T  # matrix of the bilinear form (x, y) -> (Lx) . y
    if np.max(np.abs(skew + skew.T)) > _IDENTITY_TOL:
        raise ValueError("g(L., .) is not antisymmetric")
    pairs = index_array(dim, 2)
    f = AlternatingForm(dim, 2)
    f.coeffs[:] = skew[pairs[:, 0], pairs[:, 1]]
    return f


def build_model(n: int) -> QuaternionicModel:
    """Model space H^n with basis (e_i, Ie_i, Je_i, Ke_i) per line.

    The quaternion action is wired so that I J = K holds as a composition
    of matrices; the relations are asserted at build time, not assumed.
    Supported range: 1 <= n <= 4 (ambient dimension up to 16).
    """
    if not 1 <= n <= 4:
        raise ValueError(f"quaternionic dimension n={n} outside supported range [1, 4]")
    dim = 4 * n
    I = np.zeros((dim, dim))
    J = np.zeros((dim, dim))
    K = np.zeros((dim, dim))
    for i in range(n):
        s = 4 * i
        I[s:s + 4, s:s + 4] = _I_BLOCK
        J[s:s + 4, s:s + 4] = _J_BLOCK
        K[s:s + 4, s:s + 4] = _K_BLOCK
    model = QuaternionicModel(I, J, K, n=n)
    for lab in STRUCTURE_LABELS:
        L = model.structure(lab)
        w = model.omega(lab)
        for i in range(n):
            e_i = np.eye(dim)[:, 4 * i]
            if abs(evaluate(w, np.column_stack([e_i, L @ e_i])) - 1.0) > _IDENTITY_TOL:
                raise AssertionError(f"omega_{lab}(e_{i+1}, {lab} e_{i+1}) != 1")
    return model


def model_with_swapped_roles(model: QuaternionicModel) -> QuaternionicModel:
    """The same space with the hypercomplex triple (J, I, -K).

    Swapping the first two structures and negating the third preserves the
    quaternion relations; it is the role swap used to identify the
    J-distinguished calibrations with their I-distinguished counterparts.
    """
    return QuaternionicModel(model.J, model.I, -model.K, n=model.n)


def unit_structure(model: QuaternionicModel, direction) -> np.ndarray:
    """aI + bJ + cK for a unit vector (a, b, c) on the twistor sphere."""
    a, b, c = direction
    nrm = np.sqrt(a * a + b * b + c * c)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError("twistor direction must be a unit vector")
    return a * model.I + b * model.J + c * model.K


# ---------------------------------------------------------------------------
# complex-valued forms
# ---------------------------------------------------------------------------

class ComplexForm:
    """Ordered pair (real part, imaginary part) of equal-degree forms."""

    __slots__ = ("re", "im")

    def __init__(self, re: AlternatingForm, im: AlternatingForm | None = None):
        if im is None:
            im = AlternatingForm(re.dim, re.degree)
        if (re.dim, re.degree) != (im.dim, im.degree):
            raise ValueError("real and imaginary parts must match in dim and degree")
        self.re = re
        self.im = im

    @property
    def dim(self):
        return self.re.dim

    @property
    def degree(self):
        return self.re.degree

    @staticmethod
    def from_complex_coeffs(dim: int, degree: int, coeffs: np.ndarray) -> "ComplexForm":
        c = np.asarray(coeffs, dtype=complex)
        return ComplexForm(AlternatingForm(dim, degree, c.real),
                           AlternatingForm(dim, degree, c.imag))

    @property
    def coeffs(self) -> np.ndarray:
        return self.re.coeffs + 1j * self.im.coeffs

    def conjugate(self) -> "ComplexForm":
        return ComplexForm(self.re.copy(), -self.im)

    def __add__(self, other):
        other = as_complex_form(other)
        return ComplexForm(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = as_complex_form(other)
        return ComplexForm(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return ComplexForm(-self.re, -self.im)

    def __mul__(self, z):
        z = complex(z)
        return ComplexForm(z.real * self.re - z.imag * self.im,
                           z.real * self.im + z.imag * self.re)

    __rmul__ = __mul__

    def __truediv__(self, z):
        return self * (1.0 / complex(z))

    def wedge(self, other) -> "ComplexForm":
        other = as_complex_form(other)
        return ComplexForm(
            wedge(self.re, other.re) - wedge(self.im, other.im),
            wedge(self.re, other.im) + wedge(self.im, other.re))

    def power(self, p: int) -> "ComplexForm":
        out = ComplexForm(AlternatingForm.scalar(self.dim, 1.0))
        for _ in range(p):
            out = out.wedge(self)
        return out

    def evaluate(self, frame) -> complex:
        return complex(evaluate(self.re, frame)) + 1j * complex(evaluate(self.im, frame))

    def norm(self) -> float:
        """|f| with |f|^2 = |Re f|^2 + |Im f|^2."""
        return float(np.hypot(self.re.norm(), self.im.norm()))

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.re.is_zero(tol) and self.im.is_zero(tol)

    def __repr__(self):
        return f"ComplexForm(dim={self.dim}, degree={self.degree}, |f|={self.norm():.6g})"


def as_complex_form(f) -> ComplexForm:
    return f if isinstance(f, ComplexForm) else ComplexForm(f)


def holomorphic_symplectic(model: QuaternionicModel, L: str = "I") -> ComplexForm:
    """The (2,0)-form of weight +2 for the chosen structure.

    Cyclic convention: Omega_I = omega_J + i omega_K, Omega_J = omega_K +
    i omega_I, Omega_K = omega_I + i omega_J.
    """
    nxt = {"I": ("J", "K"), "J": ("K", "I"), "K": ("I", "J")}[L]
    return ComplexForm(model.omega(nxt[0]), model.omega(nxt[1]))


# ---------------------------------------------------------------------------
# operator actions on forms
# ---------------------------------------------------------------------------

_CHUNK_ENTRIES = 4_000_000


def _pullback_coeffs(A: np.ndarray, coeffs: np.ndarray, dim: int, k: int) -> np.ndarray:
    """Coefficients of f(A., ..., A.): out[S] = sum_T f[T] det(A[T, S])."""
    if k == 0:
        return coeffs.copy()
    tup = index_array(dim, k)
    rows = A[tup, :]                       # (m, k, dim)
    m = tup.shape[0]
    nz = np.abs(coeffs) > 0
    rows_nz, coeffs_nz = rows[nz], coeffs[nz]
    out = np.empty(m, dtype=coeffs.dtype)
    chunk = max(1, _CHUNK_ENTRIES // max(1, rows_nz.shape[0] * k * k))
    for lo in range(0, m, chunk):
        sel = tup[lo:lo + chunk]           # (c, k) output tuples
        sub = rows_nz[:, :, sel.T]         # (m_nz, k, k, c) via column gather
        sub = np.moveaxis(sub, 3, 1)       # (m_nz, c, k, k)
        dets = np.linalg.det(sub)
        out[lo:lo + chunk] = coeffs_nz @ dets
    return out


def act_on_form(A: np.ndarray, f):
    """Precomposition action: (A . f)(v_1, ..., v_k) = f(A v_1, ..., A v_k).

    Defined for any square matrix A (invertibility not required);
    multiplicative over wedge. For A = J this exchanges the (p, q) and
    (q, p) Hodge components taken with respect to I.
    """
    A = np.asarray(A, dtype=float)
    if isinstance(f, ComplexForm):
        return ComplexForm(act_on_form(A, f.re), act_on_form(A, f.im))
    if A.shape != (f.dim, f.dim):
        raise ValueError(f"operator shape {A.shape} does not match R^{f.dim}")
    return AlternatingForm(
        f.dim, f.degree, _pullback_coeffs(A, f.coeffs, f.dim, f.degree))


def circle_action(model: QuaternionicModel, L, t: float) -> np.ndarray:
    """rho_L(t) = cos(t) Id + sin(t) L on vectors."""
    Lm = model.structure(L)
    return np.cos(t) * np.eye(model.dim) + np.sin(t) * Lm


# ---------------------------------------------------------------------------
# weight decomposition (exact discrete Fourier projection)
# ---------------------------------------------------------------------------

@dataclass
class WeightDecomposition:
    """U(1) weight components of a form for one complex structure.

    components[w] rotates as e^{iwt} under rho_L(t); the components sum to
    the decomposed form. Weights carry the parity of the degree and are
    bounded by it, which is what makes the finite Fourier average exact.
    """

    structure: str
    degree: int
    components: dict

    def total(self) -> ComplexForm:
        out = None
        for part in self.components.values():
            out = part if out is None else out + part
        return out

    def component(self, w: int) -> ComplexForm:
        if w in self.components:
            return self.components[w]
        first = next(iter(self.components.values()))
        return ComplexForm(AlternatingForm(first.dim, first.degree))


def weight_decompose(model: QuaternionicModel, f, L="I") -> WeightDecomposition:
    """Split f into U(1)_L weight components by exact DFT averaging.

    Averages e^{-iwt_j} rho_L(t_j) f over N = 2 deg + 2 equispaced angles;
    since every weight is an integer with |w| <= deg, the average recovers
    each component exactly (up to roundoff).
    """
    cf = as_complex_form(f)
    k = cf.degree
    Lm = model.structure(L)
    label = L if isinstance(L, str) else "custom"
    N = 2 * k + 2
    coeffs = cf.coeffs
    rotated = []
    for j in range(N):
        t = 2 * np.pi * j / N
        R = np.cos(t) * np.eye(model.dim) + np.sin(t) * Lm
        rotated.append(_pullback_coeffs(R, coeffs, model.dim, k))
    rotated = np.array(rotated)            # (N, m) complex
    tgrid = 2 * np.pi * np.arange(N) / N
    comps = {}
    for w in range(-k, k + 1):
        if (w - k) % 2:
            continue
        phases = np.exp(-1j * w * tgrid)
        comps[w] = ComplexForm.from_complex_coeffs(
            model.dim, k, phases @ rotated / N)
    return WeightDecomposition(structure=label, degree=k, components=comps)


def weight_project(model: QuaternionicModel, f, L, w: int) -> ComplexForm:
    """The weight-w component of f under rho_L; zero for out-of-range w."""
    cf = as_complex_form(f)
    k = cf.degree
    if abs(w) > k or (w - k) % 2:
        return ComplexForm(AlternatingForm(cf.dim, k))
    return weight_decompose(model, cf, L).components[w]


def hodge_part(model: QuaternionicModel, f, L, p: int, q: int):
    """The (p, q)-part of f with respect to L; equals weight p - q.

    Requires p + q = deg(f). A real input with p = q comes back as a real
    AlternatingForm; everything else is a ComplexForm.
    """
    cf = as_complex_form(f)
    if p + q != cf.degree:
        raise ValueError(f"(p, q) = ({p}, {q}) does not sum to degree {cf.degree}")
    part = weight_project(model, cf, L, p - q)
    if p == q and not isinstance(f, ComplexForm):
        resid = part.im.norm()
        if resid > 1e-9 * max(1.0, part.re.norm()):
            raise AssertionError(
                f"(p,p)-part of a real form came out non-real ({resid:.3e})")
        return part.re
    return part


# ---------------------------------------------------------------------------
# su(2) generators, Casimir, maximal-weight projector
# ---------------------------------------------------------------------------

def derivation_matrix(X: np.ndarray, dim: int, k: int) -> np.ndarray:
    """Matrix of the degree-k multivector derivation v1^..^vk ->
    sum_a v1 ^ .. ^ X v_a ^ .. ^ vk in the monomial basis."""
    m = comb(dim, k)
    rank = tuple_rank(dim, k)
    D = np.zeros((m, m))
    Xcols = [np.nonzero(X[:, c])[0] for c in range(dim)]
    for t_idx, T in enumerate(index_tuples(dim, k)):
        tset = set(T)
        for a in range(k):
            for r in Xcols[T[a]]:
                if r in tset and r != T[a]:
                    continue
                if r == T[a]:
                    D[t_idx, t_idx] += X[r, T[a]]
                    continue
                newt = list(T)
                newt[a] = r
                srt = sorted(newt)
                sign = _sort_sign(newt)
                D[rank[tuple(srt)], t_idx] += sign * X[r, T[a]]
    return D


def _sort_sign(seq) -> float:
    order = np.argsort(seq, kind="stable")
    perm = list(order)
    sign = 1.0
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def su2_cartan(model: QuaternionicModel, L, degree: int) -> np.ndarray:
    """h_L = d/dt rho_L(t)|_{t=0} as a matrix on degree-k coefficients.

    Skew-symmetric; the eigenvalues of -i h_L on complexified forms are the
    integer weights. Recorded sign facts: h_I(omega_J) = -2 omega_K and
    [h_I, h_J] = -2 h_K (so (h_I, -h_J, h_K) is a standard su(2) triple).
    """
    label = L if isinstance(L, str) else None
    key = ("cartan", label, degree)
    if label is not None and key in model._cache:
        return model._cache[key]
    Lm = model.structure(L)
    # precomposition generator = transpose of the multivector derivation
    h = derivation_matrix(Lm, model.dim, degree).T
    if label is not None:
        h.setflags(write=False)
        model._cache[key] = h
    return h


def casimir_matrix(model: QuaternionicModel, degree: int) -> np.ndarray:
    """C = -(h_I^2 + h_J^2 + h_K^2); symmetric PSD with spectrum in
    {m(m+2) : 0 <= m <= degree, m = degree mod 2}."""
    key = ("casimir", degree)
    if key not in model._cache:
        hs = [su2_cartan(model, lab, degree) for lab in STRUCTURE_LABELS]
        C = -sum(h @ h for h in hs)
        C = 0.5 * (C + C.T)
        C.setflags(write=False)
        model._cache[key] = C
    return model._cache[key]


def casimir_spectrum(model: QuaternionicModel, degree: int, tol: float = 1e-8):
    """Sorted distinct Casimir eigenvalues with multiplicities."""
    evals = np.linalg.eigvalsh(casimir_matrix(model, degree))
    out = []
    for v in evals:
        if out and abs(v - out[-1][0]) <= tol * max(1.0, abs(v)) + tol:
            out[-1][1] += 1
        else:
            out.append([float(v), 1])
    return [(v, mult) for v, mult in out]


def casimir_max_projector(model: QuaternionicModel, degree: int,
                          tol: float = 1e-8) -> np.ndarray:
    """Spectral projector of the Casimir onto its top eigenvalue on
    degree-k forms; idempotent, symmetric, commutes with the su(2) action."""
    key = ("casimir_proj", degree)
    if key not in model._cache:
        evals, evecs = np.linalg.eigh(casimir_matrix(model, degree))
        top = evals[-1]
        sel = evals > top - tol * max(1.0, abs(top)) - tol
        V = evecs[:, sel]
        P = V @ V.T
        P.setflags(write=False)
        model._cache[key] = P
    return model._cache[key]


def casimir_projector_max(model: QuaternionicModel, f: AlternatingForm) -> AlternatingForm:
    """Project f onto the maximal-weight su(2) isotypic component of its degree."""
    P = casimir_max_projector(model, f.degree)
    return AlternatingForm(f.dim, f.degree, P @ f.coeffs)


# ---------------------------------------------------------------------------
# Lefschetz operators
# ---------------------------------------------------------------------------

def lefschetz(f, omega: AlternatingForm):
    """L_omega(f) = f ^ omega."""
    if isinstance(f, ComplexForm):
        return ComplexForm(wedge(f.re, omega), wedge(f.im, omega))
    return wedge(f, omega)


def lefschetz_matrix(omega: AlternatingForm, degree: int) -> np.ndarray:
    """Matrix of wedging by a 2-form, degree -> degree + 2."""
    if omega.degree != 2:
        raise ValueError("lefschetz operator expects a 2-form")
    dim = omega.dim
    a_idx, b_idx, signs = _wedge_table(dim, degree, 2)
    m_out, m_in = comb(dim, degree + 2), comb(dim, degree)
    M = np.zeros((m_out, m_in))
    weights = signs * omega.coeffs[b_idx]
    np.add.at(M, (np.repeat(np.arange(m_out), a_idx.shape[1]), a_idx.ravel()),
              weights.ravel())
    return M


def lefschetz_adjoint(f, omega: AlternatingForm):
    """Adjoint of wedging by omega, via the transpose matrix in the
    orthonormal monomial basis; degree drops by 2.

    Coincides with +/- (star L star) up to the degree-dependent sign of
    the double star, which is asserted in the test suite rather than used
    on the main path.
    """
    if isinstance(f, ComplexForm):
        return ComplexForm(lefschetz_adjoint(f.re, omega),
                           lefschetz_adjoint(f.im, omega))
    if f.degree < 2:
        raise ValueError("adjoint Lefschetz needs degree >= 2")
    M = lefschetz_matrix(omega, f.degree - 2)
    return AlternatingForm(f.dim, f.degree - 2, M.T @ f.coeffs)


# ---------------------------------------------------------------------------
# H-real and positive (2p, 0)-forms
# ---------------------------------------------------------------------------

def _purity_residual(model, f: ComplexForm, L: str) -> float:
    """Relative mass of f outside the (deg, 0) weight component wrt L."""
    dec = weight_decompose(model, f, L)
    total = f.re.norm() ** 2 + f.im.norm() ** 2
    if total == 0:
        return 0.0
    top = dec.components[f.degree]
    top_mass = top.re.norm() ** 2 + top.im.norm() ** 2
    return float(np.sqrt(max(0.0, total - top_mass) / total))


def _require_pure_top_type(model, f: ComplexForm, tol: float):
    resid = _purity_residual(model, f, "I")
    if resid > tol:
        raise ValueError(
            f"form is not of pure type ({f.degree}, 0) with respect to I "
            f"(off-type fraction {resid:.3e})")


def is_H_real(model: QuaternionicModel, f: ComplexForm,
              tol: float = 1e-10) -> bool:
    """Whether the (2p, 0)-form satisfies J(conj f) = f.

    The map eta -> J(conj eta) is the real structure on (2p, 0)-forms;
    fixed points are the quaternionically real ones.
    """
    f = as_complex_form(f)
    if f.degree % 2:
        raise ValueError("H-reality is defined for even-degree (2p, 0)-forms")
    _require_pure_top_type(model, f, max(tol, 1e-8))
    image = act_on_form(model.J, f.conjugate())
    diff = image - f
    scale = max(1.0, f.norm())
    return bool(np.hypot(diff.re.norm(), diff.im.norm()) <= tol * scale)


def _holomorphic_basis(model: QuaternionicModel) -> np.ndarray:
    """Orthonormal complex basis of the (1, 0) subspace wrt I, columns."""
    proj = 0.5 * (np.eye(model.dim) - 1j * model.I)
    # the projector has rank dim/2; an SVD of its column space gives a basis
    u, s, _ = np.linalg.svd(proj)
    return u[:, : model.dim // 2]


def hermitian_pairing_matrix(model: QuaternionicModel, f: ComplexForm) -> np.ndarray:
    """H[a, b] = f(x_a, J conj(x_b)) over a (1,0)-basis; Hermitian for
    H-real 2-forms."""
    f = as_complex_form(f)
    if f.degree != 2:
        raise ValueError("the positivity pairing is defined for 2-forms")
    basis = _holomorphic_basis(model)
    m = basis.shape[1]
    H = np.empty((m, m), dtype=complex)
    for b in range(m):
        jybar = model.J @ np.conj(basis[:, b])
        for a in range(m):
            H[a, b] = f.evaluate(np.column_stack([basis[:, a], jybar]))
    return H


def is_q_positive(model: QuaternionicModel, f: ComplexForm,
                  strict: bool = False, tol: float = 1e-10) -> bool:
    """Positivity of an H-real (2, 0)-form via its Hermitian pairing.

    Weak variant: all eigenvalues >= -tol; strict: all > tol.
    """
    f = as_complex_form(f)
    _require_pure_top_type(model, f, max(tol, 1e-8))
    H = hermitian_pairing_matrix(model, f)
    herm_defect = np.max(np.abs(H - H.conj().T))
    if herm_defect > 1e-8 * max(1.0, np.max(np.abs(H))):
        raise ValueError(
            f"pairing matrix is not Hermitian (defect {herm_defect:.3e}); "
            "is the form H-real?")
    evals = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
    if strict:
        return bool(evals.min() > tol)
    return bool(evals.min() >= -tol)
