"""Reduced solutions of the operator equation ``A X = B``.

The equation is solvable exactly when the column space of ``B`` is contained
in the column space of ``A``; among all solutions there is a unique one,
the reduced solution, whose rows live in the row space of ``A`` and whose
nullspace coincides with that of ``B``.  Its squared spectral norm equals
the least ``lam`` with ``B B^T <= lam A A^T``.  With closed ranges (always,
in finite dimension) the reduced solution is ``A^+ B``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoSolution
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, moore_penrose, spectral_norm

__all__ = ["ReducedSolution", "range_inclusion", "reduced_solution",
           "least_squares_solution", "minimal_lambda"]


@dataclass(frozen=True)
class ReducedSolution:
    """Solution ``D`` of ``A X = B`` with minimality certificate.

    ``norm_sq`` is the squared spectral norm of ``D`` (the least ``lam``
    with ``B B^T <= lam A A^T``); ``residual`` is ``||A D - B||_F``.
    """

    matrix: np.ndarray
    norm_sq: float
    residual: float


def _check_rows(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"row counts differ: A has {a.shape[0]}, B has {b.shape[0]}"
        )


def range_inclusion(b, a, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the column space of ``b`` is contained in that of ``a``.

    Decided by the projector residual ``||(I - A A^+) B|| <= eq_abs ||B||``,
    which is equivalent to ``rank([A | B]) = rank(A)`` under the same cutoff.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    _check_rows(a, b)
    if b.size == 0 or not b.any():
        return True
    residual = b - a @ (moore_penrose(a, tol) @ b)
    return float(np.linalg.norm(residual)) <= tol.eq_abs * float(np.linalg.norm(b))


def _solve(a: np.ndarray, b: np.ndarray, tol: Tolerance) -> ReducedSolution:
    d = moore_penrose(a, tol) @ b
    residual = float(np.linalg.norm(a @ d - b))
    return ReducedSolution(d, spectral_norm(d) ** 2, residual)


def reduced_solution(a, b, tol: Tolerance = DEFAULT_TOL) -> ReducedSolution:
    """The reduced solution ``D = A^+ B`` of ``A X = B``.

    Feasibility is decided by :func:`range_inclusion` first; near-feasible
    systems are rejected rather than silently least-squares-solved (use
    :func:`least_squares_solution` to opt into the fallback explicitly).

    Raises
    ------
    NoSolution
        If the range inclusion fails, i.e. the equation is unsolvable.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    _check_rows(a, b)
    if not range_inclusion(b, a, tol):
        raise NoSolution("R(B) is not contained in R(A); the equation AX=B is unsolvable")
    return _solve(a, b, tol)


def least_squares_solution(a, b, tol: Tolerance = DEFAULT_TOL) -> ReducedSolution:
    """``A^+ B`` without the feasibility gate.

    When the equation is unsolvable this is only a least-squares minimizer
    of ``||A X - B||``, not a reduced solution; the nonzero ``residual``
    field records the defect.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    _check_rows(a, b)
    return _solve(a, b, tol)


def minimal_lambda(a, b, tol: Tolerance = DEFAULT_TOL) -> float:
    """The least ``lam > 0`` with ``B B^T <= lam A A^T``.

    Computed from the reduced solution (the infimum equals its squared
    spectral norm) rather than by semidefinite search; an independent
    PSD-pencil check is kept as a test oracle only.
    """
    return reduced_solution(a, b, tol).norm_sq
