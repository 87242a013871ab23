"""Numerical substrate: tolerances, pseudoinverses, subspaces and projections.

Everything downstream works on plain float64 numpy arrays.  Subspaces are
canonicalized to orthonormal bases at construction (no lazy spans), which
makes every invariant checkable at module boundaries.  All public objects
are immutable values and all operations are pure functions, so unrestricted
concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotContained, NotPsd

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "Subspace",
    "PsdOperator",
    "ObliqueProjection",
    "as_matrix",
    "as_vector",
    "spectral_norm",
    "numerical_rank",
    "subspace_from_span",
    "nullspace_of",
    "complement",
    "intersect",
    "subspace_sum",
    "subtract",
    "contains",
    "subspace_equal",
    "preimage",
    "ortho_projector",
    "moore_penrose",
    "friedrichs_angle",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by every operation.

    Parameters
    ----------
    rank_rel : float
        Relative singular-value cutoff for rank decisions; a singular value
        sitting exactly at ``rank_rel * sigma_max`` still counts toward the
        rank (exclusion is strict).
    eq_abs : float
        Absolute threshold for matrix/vector equality tests.
    psd_neg : float
        Magnitude below which negative eigenvalues are clipped to zero.
    """

    rank_rel: float = 1e-10
    eq_abs: float = 1e-8
    psd_neg: float = 1e-10

    def __post_init__(self):
        for name in ("rank_rel", "eq_abs", "psd_neg"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie strictly in (0, 1), got {value!r}")


DEFAULT_TOL = Tolerance()


def as_matrix(values, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Validate and convert input to a finite float64 2-D array."""
    m = np.asarray(values, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    if rows is not None and m.shape[0] != rows:
        raise DimensionMismatch(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise DimensionMismatch(f"expected {cols} columns, got {m.shape[1]}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return m


def as_vector(values, dim: int | None = None) -> np.ndarray:
    """Validate and convert input to a finite float64 1-D array."""
    v = np.asarray(values, dtype=float).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"expected a vector of length {dim}, got {v.shape[0]}")
    if v.size and not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite (no NaN/Inf)")
    return v


def spectral_norm(m) -> float:
    """Largest singular value; 0.0 for empty matrices."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def _rank_from_values(s: np.ndarray, tol: Tolerance, scale: float | None = None) -> int:
    # Ties at the cutoff are included in the rank (deterministic behaviour).
    # ``scale`` anchors the cutoff for matrices formed as products, whose own
    # largest singular value may be pure cancellation noise.
    if s.size == 0 or s[0] <= 0.0:
        return 0
    anchor = s[0] if scale is None else max(s[0], scale)
    return int(np.count_nonzero(s >= tol.rank_rel * anchor))


def numerical_rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    """Count singular values above the relative cutoff ``rank_rel * sigma_max``."""
    m = as_matrix(m)
    if m.size == 0 or not m.any():
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return _rank_from_values(s, tol)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Subspace:
    """A subspace of R^n held as an orthonormal basis.

    ``basis`` has shape ``(ambient_dim, dim)`` with orthonormal columns; the
    zero subspace is represented by a ``(n, 0)`` basis.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis, rows=self.ambient_dim)
        object.__setattr__(self, "basis", _readonly(b))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """The orthogonal projector matrix onto this subspace."""
        return self.basis @ self.basis.T


def subspace_from_span(
    vectors, tol: Tolerance = DEFAULT_TOL, *, scale: float | None = None
) -> Subspace:
    """Subspace spanned by the columns of ``vectors`` (may be rank deficient).

    ``scale`` optionally anchors the rank cutoff; pass the norm of the
    original operator when the columns are images under it, so that columns
    consisting of cancellation noise do not inflate the dimension.
    """
    v = as_matrix(vectors)
    n = v.shape[0]
    if v.shape[1] == 0 or not v.any():
        return Subspace(n, np.zeros((n, 0)))
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    r = _rank_from_values(s, tol, scale)
    return Subspace(n, u[:, :r])


def nullspace_of(m, tol: Tolerance = DEFAULT_TOL, *, scale: float | None = None) -> Subspace:
    """Orthonormal basis of the nullspace of a matrix.

    ``scale`` anchors the rank cutoff as in :func:`subspace_from_span`.
    """
    m = as_matrix(m)
    n = m.shape[1]
    if m.size == 0 or not m.any():
        return Subspace(n, np.eye(n))
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    r = _rank_from_values(s, tol, scale)
    return Subspace(n, vt[r:].T)


def complement(s: Subspace) -> Subspace:
    """Orthogonal complement S^perp."""
    n, k = s.ambient_dim, s.dim
    if k == 0:
        return Subspace(n, np.eye(n))
    if k == n:
        return Subspace(n, np.zeros((n, 0)))
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(n, u[:, k:])


def _check_same_ambient(s1: Subspace, s2: Subspace) -> None:
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )


def intersect(s1: Subspace, s2: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Intersection, computed as the complement of the sum of complements."""
    _check_same_ambient(s1, s2)
    joined = np.hstack([complement(s1).basis, complement(s2).basis])
    return complement(subspace_from_span(joined, tol))


def subspace_sum(s1: Subspace, s2: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Span of the union of the two bases."""
    _check_same_ambient(s1, s2)
    return subspace_from_span(np.hstack([s1.basis, s2.basis]), tol)


def contains(outer: Subspace, inner: Subspace, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``inner`` is contained in ``outer`` within tolerance."""
    _check_same_ambient(outer, inner)
    if inner.dim == 0:
        return True
    residual = inner.basis - outer.projector() @ inner.basis
    return float(np.linalg.norm(residual)) <= tol.eq_abs * outer.ambient_dim


def subspace_equal(s1: Subspace, s2: Subspace, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Basis-independent equality: Frobenius distance between projectors."""
    _check_same_ambient(s1, s2)
    gap = np.linalg.norm(s1.projector() - s2.projector())
    return float(gap) <= tol.eq_abs * s1.ambient_dim


def preimage(w, s: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """The preimage ``{x : Wx in S}``, the nullspace of ``P_{S^perp} W``.

    The rank decision on the product is anchored at the norm of ``W``, so an
    invariant subspace (where the product cancels to roundoff) is handled
    correctly.
    """
    w = as_matrix(w, rows=s.ambient_dim, cols=s.ambient_dim)
    blocker = complement(s).projector() @ w
    return nullspace_of(blocker, tol, scale=spectral_norm(w))


@dataclass(frozen=True)
class ObliqueProjection:
    """An idempotent matrix with certified range and nullspace subspaces."""

    matrix: np.ndarray
    range: Subspace
    nullspace: Subspace

    def __post_init__(self):
        n = self.range.ambient_dim
        object.__setattr__(self, "matrix", _readonly(as_matrix(self.matrix, n, n)))

    def verify(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        """Check idempotency and the range/nullspace certificates."""
        p, n = self.matrix, self.range.ambient_dim
        ok = np.linalg.norm(p @ p - p) <= tol.eq_abs * n
        ok &= np.linalg.norm(p @ self.range.basis - self.range.basis) <= tol.eq_abs * n
        ok &= np.linalg.norm(p @ self.nullspace.basis) <= tol.eq_abs * n
        ok &= self.range.dim + self.nullspace.dim == n
        return bool(ok)


def ortho_projector(s: Subspace) -> ObliqueProjection:
    """Orthogonal projection onto ``s`` (symmetric idempotent)."""
    return ObliqueProjection(s.projector(), s, complement(s))


def moore_penrose(w, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD with the relative rank cutoff.

    Satisfies the four Penrose identities within tolerance; characterized by
    ``W W+ = P_{R(W)}`` and ``W+ W = P_{R(W^T)}``.
    """
    w = as_matrix(w)
    if w.size == 0 or not w.any():
        return np.zeros((w.shape[1], w.shape[0]))
    u, s, vt = np.linalg.svd(w, full_matrices=False)
    r = _rank_from_values(s, tol)
    return (vt[:r].T / s[:r]) @ u[:, :r].T


def subtract(s: Subspace, inner: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """The relative complement ``S (-) N = S ∩ N^perp``; requires N ⊆ S."""
    if not contains(s, inner, tol):
        raise NotContained("the subtracted subspace is not contained in the first")
    return intersect(s, complement(inner), tol)


def friedrichs_angle(s1: Subspace, s2: Subspace, tol: Tolerance = DEFAULT_TOL) -> float:
    """Cosine of the Friedrichs angle between two subspaces.

    The common intersection is removed before measuring, so the result is 0
    whenever either subspace coincides with the intersection.  (The Dixmier
    convention keeps the intersection and would return 1 for overlapping
    subspaces; the compatibility criteria this library serves use the
    Friedrichs one.)  A nonzero angle (cosine < 1) is equivalent to the sum
    being closed, which is automatic here; the value itself quantifies the
    relative position.
    """
    _check_same_ambient(s1, s2)
    meet = intersect(s1, s2, tol)
    if meet.dim:
        r1 = intersect(s1, complement(meet), tol)
        r2 = intersect(s2, complement(meet), tol)
    else:
        r1, r2 = s1, s2
    if r1.dim == 0 or r2.dim == 0:
        return 0.0
    cosines = np.linalg.svd(r1.basis.T @ r2.basis, compute_uv=False)
    return float(min(1.0, cosines[0]))


@dataclass(frozen=True)
class PsdOperator:
    """A symmetric positive semidefinite matrix with cached spectral data.

    The constructor :meth:`from_matrix` performs one eigendecomposition and
    derives the numerical rank, the square root, the pseudoinverses and the
    projector onto the range.  In finite dimension the ranges of ``A`` and
    ``A^{1/2}`` coincide; both are spanned by the leading eigenvectors.
    """

    base: np.ndarray
    eigvals: np.ndarray
    eigvecs: np.ndarray
    rank: int
    sqrt: np.ndarray
    pinv: np.ndarray
    sqrt_pinv: np.ndarray
    range_proj: np.ndarray
    range_subspace: Subspace
    null_subspace: Subspace

    def __post_init__(self):
        for name in ("base", "eigvals", "eigvecs", "sqrt", "pinv", "sqrt_pinv", "range_proj"):
            object.__setattr__(self, name, _readonly(np.asarray(getattr(self, name), dtype=float)))

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    @classmethod
    def from_matrix(cls, matrix, tol: Tolerance = DEFAULT_TOL) -> "PsdOperator":
        """Build from a symmetric PSD matrix.

        Raises
        ------
        NotPsd
            If the matrix is not symmetric within ``eq_abs`` or has an
            eigenvalue below ``-psd_neg``.  Eigenvalues in ``(-psd_neg, 0)``
            are clipped to zero.
        """
        m = as_matrix(matrix)
        n = m.shape[0]
        if m.shape[1] != n:
            raise DimensionMismatch(f"weight matrix must be square, got {m.shape}")
        scale = 1.0 + float(np.linalg.norm(m))
        if np.linalg.norm(m - m.T) > tol.eq_abs * scale:
            raise NotPsd("weight matrix is not symmetric within tolerance")
        w, v = np.linalg.eigh((m + m.T) / 2.0)
        w, v = w[::-1], v[:, ::-1]
        if w.size and w[-1] < -tol.psd_neg:
            raise NotPsd(f"weight matrix has negative eigenvalue {w[-1]:.3e}")
        w = np.clip(w, 0.0, None)
        r = _rank_from_values(w, tol)
        # Eigenvalues under the rank cutoff are solver noise around zero;
        # zeroing them keeps the square root exactly null on the computed
        # nullspace (sqrt would otherwise amplify 1e-16 noise to 1e-8).
        w[r:] = 0.0
        vr = v[:, :r]
        sqrt = (vr * np.sqrt(w[:r])) @ vr.T
        pinv = (vr / w[:r]) @ vr.T
        sqrt_pinv = (vr / np.sqrt(w[:r])) @ vr.T
        return cls(
            base=m,
            eigvals=w,
            eigvecs=v,
            rank=r,
            sqrt=sqrt,
            pinv=pinv,
            sqrt_pinv=sqrt_pinv,
            range_proj=vr @ vr.T,
            range_subspace=Subspace(n, vr),
            null_subspace=Subspace(n, v[:, r:]),
        )
