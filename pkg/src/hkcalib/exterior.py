"""Dense exterior algebra over a Euclidean vector space.

Alternating k-forms are stored as dense coefficient vectors over the
strictly increasing k-tuples of basis indices, in lexicographic order.
The basis is orthonormal, which makes the monomial basis of each degree
orthonormal as well; every operation below (wedge, evaluation on frames,
interior product, Hodge star, inner product) reduces to precomputed
index/sign tables plus dense numpy arithmetic.

Scale target is ambient dimension <= 16 (C(16, 8) = 12870 coefficients),
where dense storage beats any sparse bookkeeping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

MAX_DIM = 16

#: columns of an asserted-orthonormal frame must satisfy |Q^T Q - I| < this
ORTHONORMAL_TOL = 1e-10


# ---------------------------------------------------------------------------
# index tables
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def index_tuples(dim: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All strictly increasing k-tuples from range(dim), lexicographic."""
    if not 0 <= k <= dim:
        raise ValueError(f"degree {k} out of range for dimension {dim}")
    return tuple(itertools.combinations(range(dim), k))


@lru_cache(maxsize=None)
def index_array(dim: int, k: int) -> np.ndarray:
    """Same as index_tuples, as an (m, k) int array."""
    tups = index_tuples(dim, k)
    arr = np.array(tups, dtype=np.intp).reshape(len(tups), k)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def tuple_rank(dim: int, k: int) -> dict:
    return {t: i for i, t in enumerate(index_tuples(dim, k))}


def _merge_sign(positions: tuple[int, ...], ka: int) -> int:
    # sign of the (ka, kb)-shuffle that puts the a-part at `positions`
    return -1 if (sum(positions) - ka * (ka - 1) // 2) % 2 else 1


@lru_cache(maxsize=None)
def _wedge_table(dim: int, ka: int, kb: int):
    """Split table for wedge: for each output tuple, all (a, b) splits.

    Returns (a_idx, b_idx, signs), each of shape (m_out, n_splits), where
    out[u] = sum_s signs[u, s] * a[a_idx[u, s]] * b[b_idx[u, s]].
    """
    k = ka + kb
    rank_a = tuple_rank(dim, ka)
    rank_b = tuple_rank(dim, kb)
    out_tuples = index_tuples(dim, k)
    n_splits = comb(k, ka)
    a_idx = np.empty((len(out_tuples), n_splits), dtype=np.intp)
    b_idx = np.empty_like(a_idx)
    signs = np.empty((len(out_tuples), n_splits), dtype=np.float64)
    splits = list(itertools.combinations(range(k), ka))
    for u, tup in enumerate(out_tuples):
        for s, pos in enumerate(splits):
            sel = set(pos)
            ta = tuple(tup[p] for p in pos)
            tb = tuple(tup[p] for p in range(k) if p not in sel)
            a_idx[u, s] = rank_a[ta]
            b_idx[u, s] = rank_b[tb]
            signs[u, s] = _merge_sign(pos, ka)
    for arr in (a_idx, b_idx, signs):
        arr.setflags(write=False)
    return a_idx, b_idx, signs


@lru_cache(maxsize=None)
def _contract_table(dim: int, k: int):
    """Interior-product table: out[S] = sum_r sign * v[r] * f[S + {r}]."""
    rank_in = tuple_rank(dim, k)
    out_tuples = index_tuples(dim, k - 1)
    width = dim - (k - 1)
    in_idx = np.empty((len(out_tuples), width), dtype=np.intp)
    v_idx = np.empty_like(in_idx)
    signs = np.empty((len(out_tuples), width), dtype=np.float64)
    for o, S in enumerate(out_tuples):
        col = 0
        sset = set(S)
        for r in range(dim):
            if r in sset:
                continue
            pos = sum(1 for s in S if s < r)
            full = tuple(sorted(S + (r,)))
            in_idx[o, col] = rank_in[full]
            v_idx[o, col] = r
            signs[o, col] = -1.0 if pos % 2 else 1.0
            col += 1
    for arr in (in_idx, v_idx, signs):
        arr.setflags(write=False)
    return in_idx, v_idx, signs


@lru_cache(maxsize=None)
def _hodge_table(dim: int, k: int):
    """Complement ranks and signs: *(e^T) = sign(T) e^{T^c}."""
    rank_out = tuple_rank(dim, k)
    comp_rank = np.empty(comb(dim, k), dtype=np.intp)
    signs = np.empty(comb(dim, k), dtype=np.float64)
    rank_c = tuple_rank(dim, dim - k)
    for i, T in enumerate(index_tuples(dim, k)):
        Tc = tuple(x for x in range(dim) if x not in set(T))
        comp_rank[i] = rank_c[Tc]
        # sign of the permutation (T, T^c) of (0..dim-1)
        s = sum(T) - k * (k - 1) // 2
        signs[i] = -1.0 if s % 2 else 1.0
    comp_rank.setflags(write=False)
    signs.setflags(write=False)
    return comp_rank, signs


# ---------------------------------------------------------------------------
# forms and frames
# ---------------------------------------------------------------------------

class AlternatingForm:
    """A real alternating k-form on R^dim, dense over increasing tuples."""

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs=None):
        if not 1 <= dim <= MAX_DIM:
            raise ValueError(f"ambient dimension {dim} not in [1, {MAX_DIM}]")
        if not 0 <= degree <= dim:
            raise ValueError(f"degree {degree} out of range [0, {dim}]")
        m = comb(dim, degree)
        if coeffs is None:
            c = np.zeros(m)
        else:
            c = np.asarray(coeffs, dtype=float).reshape(-1).copy()
            if c.shape[0] != m:
                raise ValueError(f"expected {m} coefficients, got {c.shape[0]}")
        self.dim = dim
        self.degree = degree
        self.coeffs = c

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def zero(dim: int, degree: int) -> "AlternatingForm":
        return AlternatingForm(dim, degree)

    @staticmethod
    def scalar(dim: int, value: float) -> "AlternatingForm":
        f = AlternatingForm(dim, 0)
        f.coeffs[0] = value
        return f

    def copy(self) -> "AlternatingForm":
        return AlternatingForm(self.dim, self.degree, self.coeffs)

    # -- ring/vector-space structure ------------------------------------------

    def _check_same_space(self, other: "AlternatingForm"):
        if self.dim != other.dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.dim} vs {other.dim}")
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check_same_space(other)
        return AlternatingForm(self.dim, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_same_space(other)
        return AlternatingForm(self.dim, self.degree, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlternatingForm(self.dim, self.degree, -self.coeffs)

    def __mul__(self, scalar):
        return AlternatingForm(self.dim, self.degree, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / float(scalar))

    def wedge(self, other: "AlternatingForm") -> "AlternatingForm":
        return wedge(self, other)

    def evaluate(self, frame) -> float:
        return evaluate(self, frame)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.coeffs), initial=0.0) <= tol)

    def __repr__(self):
        return (f"AlternatingForm(dim={self.dim}, degree={self.degree}, "
                f"|coeffs|={self.norm():.6g})")


def zero_form(dim: int, degree: int) -> AlternatingForm:
    return AlternatingForm(dim, degree)


def basis_form(dim: int, indices, value: float = 1.0) -> AlternatingForm:
    """The monomial value * e^{i1} ^ ... ^ e^{ik} for arbitrary index order."""
    idx = list(indices)
    k = len(idx)
    if len(set(idx)) < k:
        return AlternatingForm(dim, k)
    order = np.argsort(idx)
    sign = np.linalg.det(np.eye(k)[order]) if k else 1.0
    f = AlternatingForm(dim, k)
    f.coeffs[tuple_rank(dim, k)[tuple(sorted(idx))]] = value * sign
    return f


def volume_form(dim: int) -> AlternatingForm:
    """e^1 ^ e^2 ^ ... ^ e^dim in the ambient basis order."""
    return basis_form(dim, range(dim))


def random_form(dim: int, degree: int, rng: np.random.Generator,
                scale: float = 1.0) -> AlternatingForm:
    return AlternatingForm(
        dim, degree, scale * rng.standard_normal(comb(dim, degree)))


@dataclass(frozen=True)
class FrameMatrix:
    """A list of k vectors in R^dim, stored as the columns of a matrix."""

    dim: int
    k: int
    columns: np.ndarray

    @staticmethod
    def from_columns(columns, require_orthonormal: bool = False) -> "FrameMatrix":
        cols = np.asarray(columns, dtype=float)
        if cols.ndim != 2:
            raise ValueError("frame must be a 2-d array of column vectors")
        dim, k = cols.shape
        if require_orthonormal:
            gram = cols.T @ cols
            err = np.max(np.abs(gram - np.eye(k)), initial=0.0)
            if err > ORTHONORMAL_TOL:
                raise ValueError(
                    f"frame not orthonormal: max Gram deviation {err:.3e}")
        return FrameMatrix(dim, k, cols)

    def is_orthonormal(self, tol: float = ORTHONORMAL_TOL) -> bool:
        gram = self.columns.T @ self.columns
        return bool(np.max(np.abs(gram - np.eye(self.k)), initial=0.0) <= tol)


def _frame_columns(frame) -> np.ndarray:
    if isinstance(frame, FrameMatrix):
        return frame.columns
    cols = np.asarray(frame)
    if cols.ndim == 1:
        cols = cols[:, None]
    return cols


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def wedge(a: AlternatingForm, b: AlternatingForm) -> AlternatingForm:
    """Exterior product a ^ b.

    Bilinear, associative, graded-commutative. Degrees must satisfy
    deg(a) + deg(b) <= dim; larger sums are an error rather than a
    silently absorbed zero.
    """
    if a.dim != b.dim:
        raise ValueError(f"ambient dimension mismatch: {a.dim} vs {b.dim}")
    k = a.degree + b.degree
    if k > a.dim:
        raise ValueError(
            f"wedge degree {a.degree}+{b.degree} exceeds dimension {a.dim}")
    if a.degree == 0:
        return AlternatingForm(b.dim, b.degree, a.coeffs[0] * b.coeffs)
    if b.degree == 0:
        return AlternatingForm(a.dim, a.degree, b.coeffs[0] * a.coeffs)
    a_idx, b_idx, signs = _wedge_table(a.dim, a.degree, b.degree)
    out = np.einsum("us,us,us->u", signs, a.coeffs[a_idx], b.coeffs[b_idx])
    return AlternatingForm(a.dim, k, out)


def wedge_power(f: AlternatingForm, p: int) -> AlternatingForm:
    """f ^ f ^ ... ^ f (p factors); p = 0 gives the constant 1."""
    out = AlternatingForm.scalar(f.dim, 1.0)
    for _ in range(p):
        out = wedge(out, f)
    return out


def _minors(coeff_len_tuples: np.ndarray, frame_cols: np.ndarray) -> np.ndarray:
    """det of frame rows selected by each tuple; frame may be complex."""
    sub = frame_cols[coeff_len_tuples, :]
    return np.linalg.det(sub)


def evaluate(f: AlternatingForm, frame):
    """Value f(v_1, ..., v_k) on the frame columns.

    Multilinear and alternating in the columns; equals the coefficient
    pairing of f with the decomposable k-vector of the frame. Complex
    column matrices are accepted (bilinear extension).
    """
    cols = _frame_columns(frame)
    if cols.shape[0] != f.dim:
        raise ValueError(
            f"frame lives in R^{cols.shape[0]}, form in R^{f.dim}")
    if cols.shape[1] != f.degree:
        raise ValueError(
            f"degree/column-count mismatch: form degree {f.degree}, "
            f"{cols.shape[1]} columns")
    if f.degree == 0:
        return float(f.coeffs[0])
    dets = _minors(index_array(f.dim, f.degree), cols)
    val = f.coeffs @ dets
    return val if np.iscomplexobj(cols) else float(val)


def evaluate_batch(f: AlternatingForm, frames: np.ndarray) -> np.ndarray:
    """evaluate over a stack of frames, shape (B, dim, k) -> (B,)."""
    if f.degree == 0:
        return np.full(frames.shape[0], f.coeffs[0])
    dets = np.linalg.det(frames[:, index_array(f.dim, f.degree), :])
    return dets @ f.coeffs


def contract(f: AlternatingForm, v) -> AlternatingForm:
    """Interior product i_v f: (i_v f)(w_2, ..., w_k) = f(v, w_2, ..., w_k)."""
    if f.degree == 0:
        raise ValueError("cannot contract a degree-0 form")
    vec = np.asarray(v, dtype=float).reshape(-1)
    if vec.shape[0] != f.dim:
        raise ValueError(f"vector lives in R^{vec.shape[0]}, form in R^{f.dim}")
    in_idx, v_idx, signs = _contract_table(f.dim, f.degree)
    out = np.einsum("ow,ow,ow->o", signs, f.coeffs[in_idx], vec[v_idx])
    return AlternatingForm(f.dim, f.degree - 1, out)


def hodge_star(f: AlternatingForm) -> AlternatingForm:
    """Hodge dual: g ^ (*f) = <g, f> Vol for all g of equal degree.

    On this even-dimensional orthonormal model ** = (-1)^{k(dim-k)}, i.e.
    the identity on even degrees and minus the identity on odd ones.
    """
    comp_rank, signs = _hodge_table(f.dim, f.degree)
    out = np.zeros(comb(f.dim, f.dim - f.degree))
    out[comp_rank] = signs * f.coeffs
    return AlternatingForm(f.dim, f.dim - f.degree, out)


def inner_product(f: AlternatingForm, g: AlternatingForm) -> float:
    """Euclidean pairing in which the increasing monomials are orthonormal."""
    f._check_same_space(g)
    return float(f.coeffs @ g.coeffs)


def norm(f: AlternatingForm) -> float:
    return f.norm()
