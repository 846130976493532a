"""Oriented-plane generators and classifiers on the quaternionic model.

Generators produce orthonormal frames for Haar-random planes, for the
compact symplectic group Sp(n) (matrices commuting with I, J, K), and for
the structured families the calibrations single out: quaternionic planes,
complex Lagrangian / isotropic planes, and complex coisotropic planes.
The classifier works backwards, deciding membership from basis-free
predicates (projector commutation, restricted-form ranks) with explicit
margins so tests can assert separation instead of a brittle boolean.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exterior import ORTHONORMAL_TOL
from .quaternionic import (
    ComplexForm,
    QuaternionicModel,
    STRUCTURE_LABELS,
    holomorphic_symplectic,
)

FACE_KINDS = ("quaternionic", "complex_lagrangian", "complex_isotropic",
              "complex_coisotropic")

#: role triples (L, M1, M2): L is the distinguished structure, M1/M2 the
#: complementary pair with L M1 = M2, mirroring (I, J, K) for each choice.
_ROLE_TRIPLES = {
    "I": ("I", "J", "K", 1.0),
    "J": ("J", "I", "K", -1.0),
    "K": ("K", "J", "I", -1.0),
}


@dataclass
class SubspaceFrame:
    """An orthonormal k-frame spanning an oriented k-plane."""

    columns: np.ndarray
    orientation: int = 1
    label: str = ""

    def __post_init__(self):
        self.columns = np.asarray(self.columns, dtype=float)
        gram = self.columns.T @ self.columns
        err = np.max(np.abs(gram - np.eye(self.k)), initial=0.0)
        if err > ORTHONORMAL_TOL:
            raise ValueError(f"frame not orthonormal (deviation {err:.3e})")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    @property
    def k(self) -> int:
        return self.columns.shape[1]

    def oriented_columns(self) -> np.ndarray:
        """Columns with the orientation sign folded into the first one."""
        if self.orientation == 1:
            return self.columns
        cols = self.columns.copy()
        cols[:, 0] = -cols[:, 0]
        return cols

    def flipped(self) -> "SubspaceFrame":
        return SubspaceFrame(self.columns, -self.orientation, self.label)

    def projector(self) -> np.ndarray:
        return self.columns @ self.columns.T

    def to_dict(self) -> dict:
        return {
            "columns": [list(map(float, c)) for c in self.columns.T],
            "orientation": self.orientation,
            "label": self.label,
        }


@dataclass
class SubspaceClass:
    """Classification flags for a plane, with decision margins."""

    complex_wrt: dict
    quaternionic: bool
    isotropic: bool
    symplectic_rank: int | None
    coisotropic: bool
    margins: dict = field(default_factory=dict)

    def is_complex(self, label: str) -> bool:
        return self.complex_wrt[label]

    def matches(self, kind: str, structure: str = "I") -> bool:
        if kind == "quaternionic":
            return self.quaternionic
        if kind == "complex_lagrangian":
            return self.complex_wrt[structure] and self.isotropic
        if kind == "complex_isotropic":
            return self.complex_wrt[structure] and self.isotropic
        if kind == "complex_coisotropic":
            return self.complex_wrt[structure] and self.coisotropic
        raise ValueError(f"unknown face kind {kind!r}")


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

def random_plane(model: QuaternionicModel, k: int,
                 rng: np.random.Generator) -> SubspaceFrame:
    """Haar-uniform k-plane: orthonormalized Gaussian matrix."""
    if not 1 <= k <= model.dim:
        raise ValueError(f"plane dimension {k} out of range [1, {model.dim}]")
    A = rng.standard_normal((model.dim, k))
    Q, R = np.linalg.qr(A)
    Q = Q * np.sign(np.diag(R))
    return SubspaceFrame(Q, label="random")


def sp_algebra_sample(model: QuaternionicModel, rng: np.random.Generator,
                      scale: float = 1.0) -> np.ndarray:
    """Random element of sp(n): skew-symmetric and commuting with I, J, K.

    A Gaussian skew matrix is averaged over conjugation by {Id, I, J, K},
    which projects onto the commutant.
    """
    X = rng.standard_normal((model.dim, model.dim)) * scale
    X = 0.5 * (X - X.T)
    I, J, K = model.I, model.J, model.K
    Y = 0.25 * (X - I @ X @ I - J @ X @ J - K @ X @ K)
    return Y


def random_sp_n(model: QuaternionicModel, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random element of Sp(n), by exponentiating the algebra.

    Output is orthogonal, commutes with I, J, K (residuals < 1e-10), and
    has determinant +1.
    """
    Y = sp_algebra_sample(model, rng)
    Q = scipy.linalg.expm(Y)
    for lab in STRUCTURE_LABELS:
        L = model.structure(lab)
        resid = np.max(np.abs(Q @ L - L @ Q))
        if resid > 1e-10:
            raise AssertionError(f"Sp(n) sample fails to commute with {lab}: {resid:.3e}")
    return Q


def random_rotation(k: int, rng: np.random.Generator) -> np.ndarray:
    """Haar element of SO(k) (in-plane reparametrization of a frame)."""
    if k == 1:
        return np.ones((1, 1))
    A = rng.standard_normal((k, k))
    Q, R = np.linalg.qr(A)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q = Q[:, list(range(1, k)) + [0]] if k % 2 == 0 else -Q
    return Q


# ---------------------------------------------------------------------------
# structured faces
# ---------------------------------------------------------------------------

def _role_matrices(model: QuaternionicModel, structure: str):
    if structure not in _ROLE_TRIPLES:
        raise ValueError(f"structure must be one of {STRUCTURE_LABELS}")
    l1, m1, m2, sgn = _ROLE_TRIPLES[structure]
    return model.structure(l1), model.structure(m1), sgn * model.structure(m2)


def standard_face(model: QuaternionicModel, kind: str, param: int | None = None,
                  structure: str = "I") -> SubspaceFrame:
    """The coordinate model plane of each face family.

    kind/param:
      - "quaternionic", p:       span(e_1, Ie_1, Je_1, Ke_1, ..., Ke_p)
      - "complex_lagrangian":    span(e_1, Le_1, ..., e_n, Le_n)
      - "complex_isotropic", p:  first 2p columns of the Lagrangian frame (p < n)
      - "complex_coisotropic", k: Lagrangian frame plus (M1 e_a, M2 e_a) for
        a <= k, where (L, M1, M2) is the role triple of `structure`

    Frames are listed in the orientation on which the matching calibration
    evaluates to +1.
    """
    n, dim = model.n, model.dim
    eye = np.eye(dim)
    L, M1, M2 = _role_matrices(model, structure)
    if kind == "quaternionic":
        p = _check_param(param, 1, n, "quaternionic dimension p")
        cols = eye[:, : 4 * p]
        return SubspaceFrame(cols, label=f"quaternionic({p})")
    if kind == "complex_lagrangian":
        cols = _lagrangian_columns(model, L, n)
        return SubspaceFrame(cols, label=f"complex_lagrangian[{structure}]")
    if kind == "complex_isotropic":
        p = _check_param(param, 1, n - 1, "isotropic complex dimension p")
        cols = _lagrangian_columns(model, L, n)[:, : 2 * p]
        return SubspaceFrame(cols, label=f"complex_isotropic({p})[{structure}]")
    if kind == "complex_coisotropic":
        k = _check_param(param, 0, n, "coisotropic excess k")
        lag = _lagrangian_columns(model, L, n)
        extra = []
        for a in range(k):
            e_a = eye[:, 4 * a]
            extra.extend([M1 @ e_a, M2 @ e_a])
        cols = np.column_stack([lag] + extra) if extra else lag
        return SubspaceFrame(cols, label=f"complex_coisotropic({n + k})[{structure}]")
    raise ValueError(f"unknown face kind {kind!r}")


def _lagrangian_columns(model: QuaternionicModel, L: np.ndarray, n: int) -> np.ndarray:
    eye = np.eye(model.dim)
    cols = []
    for a in range(n):
        e_a = eye[:, 4 * a]
        cols.extend([e_a, L @ e_a])
    return np.column_stack(cols)


def _check_param(param, lo, hi, what) -> int:
    if param is None or not lo <= param <= hi:
        raise ValueError(f"{what} must lie in [{lo}, {hi}], got {param}")
    return int(param)


def random_face(model: QuaternionicModel, kind: str, param: int | None,
                rng: np.random.Generator, structure: str = "I") -> SubspaceFrame:
    """Sp(n)-rotation of the standard face, with a random in-plane SO(k)
    reparametrization (plane value and classification are unchanged)."""
    std = standard_face(model, kind, param, structure)
    g = random_sp_n(model, rng)
    O = random_rotation(std.k, rng)
    return SubspaceFrame(g @ std.columns @ O, label=std.label + "+spn")


def random_complex_plane(model: QuaternionicModel, complex_dim: int,
                         rng: np.random.Generator,
                         structure: str = "I") -> SubspaceFrame:
    """A uniformly random L-complex plane of the given complex dimension,
    framed in its complex orientation (v_1, L v_1, v_2, L v_2, ...).

    Unlike the face generators these planes are generically not isotropic;
    they are the sample space of the Wirtinger-type bounds.
    """
    L = model.structure(structure)
    if not 1 <= complex_dim <= model.dim // 2:
        raise ValueError(f"complex dimension {complex_dim} out of range")
    cols = []
    guard = 0
    while len(cols) < 2 * complex_dim:
        v = rng.standard_normal(model.dim)
        for u in cols:
            v -= (u @ v) * u
        nrm = np.linalg.norm(v)
        guard += 1
        if nrm < 1e-6:
            if guard > 100 * complex_dim:
                raise RuntimeError("failed to draw a complex plane")
            continue
        v /= nrm
        cols.extend([v, L @ v])
    return SubspaceFrame(np.column_stack(cols),
                         label=f"complex({complex_dim})[{structure}]")


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _complex_basis_of(model: QuaternionicModel, W: np.ndarray,
                      structure: str) -> np.ndarray:
    """Orthonormal complex basis (columns) of the (1,0)-part of span(W)."""
    L = model.structure(structure)
    holo = 0.5 * (W - 1j * (L @ W))        # (1,0)-projections of the columns
    # column space over C has dimension k/2 when W is L-complex
    q, r = np.linalg.qr(holo)
    keep = np.abs(np.diag(r)) > 1e-10 * max(1.0, np.abs(np.diag(r)).max())
    return q[:, keep]


def classify(model: QuaternionicModel, frame: SubspaceFrame,
             omega: ComplexForm | None = None, structure: str = "I",
             tol: float = 1e-8) -> SubspaceClass:
    """Classify a plane: L-complexity, quaternionicity, isotropy, coisotropy.

    L-complexity is tested by projector commutation |P L - L P| < tol
    (basis-free, with the deviation recorded as a margin). Isotropy and the
    restricted rank are measured against `omega` (default: the holomorphic
    symplectic form of `structure`). Coisotropy means the restricted form
    has the minimal possible complex rank 2(d - n) for a d-complex-
    dimensional subspace.
    """
    if omega is None:
        omega = holomorphic_symplectic(model, structure)
    W = frame.columns
    P = frame.projector()
    complex_wrt, cmargins = {}, {}
    for lab in STRUCTURE_LABELS:
        L = model.structure(lab)
        dev = float(np.max(np.abs(P @ L - L @ P)))
        complex_wrt[lab] = dev < tol
        cmargins[lab] = dev
    quaternionic = all(complex_wrt.values())

    # restriction of omega to the plane, in the real frame
    k = frame.k
    rest = np.zeros((k, k), dtype=complex)
    for a in range(k):
        for b in range(a + 1, k):
            rest[a, b] = omega.evaluate(W[:, [a, b]])
            rest[b, a] = -rest[a, b]
    iso_margin = float(np.max(np.abs(rest), initial=0.0))
    isotropic = iso_margin < tol

    symplectic_rank = None
    coisotropic = False
    rank_margin = None
    if complex_wrt[structure] and k % 2 == 0:
        basis = _complex_basis_of(model, W, structure)
        d = basis.shape[1]
        m = np.zeros((d, d), dtype=complex)
        for a in range(d):
            for b in range(a + 1, d):
                m[a, b] = omega.evaluate(basis[:, [a, b]])
                m[b, a] = -m[a, b]
        sv = np.linalg.svd(m, compute_uv=False) if d else np.array([])
        rank = int((sv > tol).sum())
        symplectic_rank = rank // 2
        minimal = max(0, 2 * (d - model.n))
        coisotropic = d >= model.n and rank == minimal
        kept = sv[sv > tol]
        dropped = sv[sv <= tol]
        rank_margin = {
            "smallest_kept": float(kept.min()) if kept.size else None,
            "largest_dropped": float(dropped.max()) if dropped.size else 0.0,
        }

    return SubspaceClass(
        complex_wrt=complex_wrt,
        quaternionic=quaternionic,
        isotropic=isotropic,
        symplectic_rank=symplectic_rank,
        coisotropic=coisotropic,
        margins={
            "complex": cmargins,
            "isotropy": iso_margin,
            "restricted_rank": rank_margin,
        },
    )
