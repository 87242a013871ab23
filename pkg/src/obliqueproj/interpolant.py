"""Minimal-seminorm interpolants: least squares with a singular PSD weight.

For a factor ``T`` with ``A = T^T T``, the interpolants of ``x`` along a
subspace ``S`` are the minimizers of ``||T z||`` over the affine set
``x + S`` (equivalently, of the seminorm ``|z|_A``).  The minimizer set is
an affine subspace ``z* + N`` with ``N = S ∩ N(A)``; it collapses to a
point exactly when that overlap is trivial, and the minimal-Euclidean-norm
member is ``(I - P) x`` for the weighted projection ``P`` onto ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPsd
from .linalg import (
    DEFAULT_TOL,
    PsdOperator,
    Subspace,
    Tolerance,
    as_matrix,
    as_vector,
    intersect,
    moore_penrose,
    nullspace_of,
)
from .oblique import weighted_projection


@dataclass(frozen=True)
class SplineResult:
    """Outcome of a minimal-seminorm interpolation.

    ``minimizer`` is the minimal-Euclidean-norm optimum, ``value`` the
    attained seminorm, ``unique`` whether the optimum set is a single point,
    and ``freedom`` the subspace ``S ∩ N(A)`` of directions along which the
    optimum is degenerate (the full solution set is ``minimizer + freedom``).
    """

    minimizer: np.ndarray
    value: float
    unique: bool
    freedom: Subspace


def seminorm(weight: PsdOperator, x, tol: Tolerance = DEFAULT_TOL) -> float:
    """The seminorm ``|x|_A = <Ax, x>^{1/2}`` induced by the weight.

    Quadratic forms in ``(-psd_neg, 0)`` are clipped to zero; anything more
    negative raises ``NotPsd``.
    """
    x = as_vector(x, weight.dim)
    q = float(x @ (weight.base @ x))
    if q < -tol.psd_neg:
        raise NotPsd(f"the quadratic form is negative ({q:.3e}); the weight is not PSD")
    return float(np.sqrt(max(q, 0.0)))


def spline(t_factor, span: Subspace, x, tol: Tolerance = DEFAULT_TOL) -> SplineResult:
    """Minimize ``||T (x + s)||`` over ``s`` in the subspace.

    The weight is always formed as ``T^T T``; use :func:`spline_with_weight`
    to pass a PSD weight directly.  The minimizer is ``(I - P) x`` for the
    weighted projection ``P``, which is the unique optimum of minimal
    Euclidean norm.  The optimum set is nonempty for every ``x`` exactly
    when the pair (weight, subspace) is compatible, which finite dimension
    guarantees.  ``x`` already in the subspace is a normal degenerate case
    (zero minimizer), not an error.
    """
    t = as_matrix(t_factor, cols=span.ambient_dim)
    x = as_vector(x, span.ambient_dim)
    weight = PsdOperator.from_matrix(t.T @ t, tol)
    proj = weighted_projection(weight, span, tol)
    minimizer = x - proj.matrix @ x
    freedom = intersect(span, weight.null_subspace, tol)
    return SplineResult(
        minimizer=minimizer,
        value=seminorm(weight, minimizer, tol),
        unique=freedom.dim == 0,
        freedom=freedom,
    )


def spline_with_weight(
    weight: PsdOperator, span: Subspace, x, tol: Tolerance = DEFAULT_TOL
) -> SplineResult:
    """Convenience entry point taking the PSD weight; uses ``T = A^{1/2}``."""
    return spline(weight.sqrt, span, x, tol)


def spline_by_normal_equations(t_factor, span: Subspace, x, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Independent solver for the same minimization, used to validate :func:`spline`.

    Solves ``min_c ||T (x + B c)||`` by pseudoinverse normal equations over
    the coefficient vector, then picks the minimal-Euclidean-norm member of
    the optimum set (the set is an affine translate of ``S ∩ N(T)``).
    """
    t = as_matrix(t_factor, cols=span.ambient_dim)
    x = as_vector(x, span.ambient_dim)
    design = t @ span.basis
    coeff = moore_penrose(design, tol) @ (-(t @ x))
    optimum = x + span.basis @ coeff
    freedom = intersect(span, nullspace_of(t, tol), tol)
    return optimum - freedom.projector() @ optimum
