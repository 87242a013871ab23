"""Weighted-Hermitian projections for a PSD weight A and a subspace S.

A projection Q with range S is Hermitian for the semi-inner product
``(x, y) -> <Ax, y>`` exactly when ``A Q = Q^T A``, equivalently when its
nullspace lies inside ``A^{-1}(S^perp)``.  The pair (A, S) is *compatible*
when such a projection exists, which in finite dimension is always the
case.  The distinguished member ``P`` with nullspace
``A^{-1}(S^perp) (-) N``, where ``N = S ∩ N(A)``, has minimal operator norm
in the family; the whole family is ``P`` plus an arbitrary map from
``S^perp`` into ``N``.

Three constructions of ``P`` are provided: the block/reduced-solution
assembly (default), the pseudoinverse formula, and the closed formula for
invertible weights.  They agree within tolerance and are cross-checked in
the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import douglas
from .errors import (
    DimensionMismatch,
    Incompatible,
    InconsistentDiagnostics,
    NoSolution,
    RangeMismatch,
    Singular,
)
from .linalg import (
    DEFAULT_TOL,
    ObliqueProjection,
    PsdOperator,
    Subspace,
    Tolerance,
    as_matrix,
    complement,
    contains,
    intersect,
    moore_penrose,
    nullspace_of,
    preimage,
    subspace_equal,
    subspace_from_span,
    subspace_sum,
    subtract,
)


@dataclass(frozen=True)
class BlockDecomposition:
    """2x2 block form of the weight in the frame (basis of S, basis of S^perp).

    ``a`` is the S-to-S block, ``b`` the S^perp-to-S block and ``c`` the
    S^perp-to-S^perp block; reassembling ``[[a, b], [b^T, c]]`` in the frame
    recovers the weight.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    frame: tuple[Subspace, Subspace]

    def reassemble(self) -> np.ndarray:
        bs, bp = self.frame[0].basis, self.frame[1].basis
        return (
            bs @ self.a @ bs.T
            + bs @ self.b @ bp.T
            + bp @ self.b.T @ bs.T
            + bp @ self.c @ bp.T
        )


@dataclass(frozen=True)
class CompatibilityReport:
    """Full diagnostic record for a pair (A, S).

    ``chain`` holds six necessary conditions for compatibility, evaluated as
    finite-dimensional subspace predicates; in exact arithmetic all are true
    and they respect the implications 1->2->4->5, 2<->3, 5<->6.  Under
    aggressive tolerances individual flags can fail, which makes the report
    a health check for numerically ill-posed inputs.

    ``projected_pair_compatible`` and ``shifted_pair_compatible`` record
    that compatibility is insensitive to projecting S onto the range of the
    weight, or to enlarging S by the weight's nullspace.
    """

    compatible: bool
    degenerate: Subspace
    preimage_of_complement: Subspace
    coupling: np.ndarray | None
    projection: ObliqueProjection | None
    chain: tuple[bool, bool, bool, bool, bool, bool]
    sum_check: bool
    projected_pair_compatible: bool
    shifted_pair_compatible: bool


def _check_pair(weight: PsdOperator, span: Subspace) -> None:
    if weight.dim != span.ambient_dim:
        raise DimensionMismatch(
            f"weight acts on R^{weight.dim} but the subspace lives in R^{span.ambient_dim}"
        )


def block_decompose(weight: PsdOperator, span: Subspace) -> BlockDecomposition:
    """Represent the weight in the orthonormal frame adapted to ``span``.

    The frame is pinned by the canonical orthonormalization of the inputs,
    so results are reproducible bit for bit for identical input data.
    """
    _check_pair(weight, span)
    perp = complement(span)
    bs, bp = span.basis, perp.basis
    return BlockDecomposition(
        a=bs.T @ weight.base @ bs,
        b=bs.T @ weight.base @ bp,
        c=bp.T @ weight.base @ bp,
        frame=(span, perp),
    )


def is_compatible(weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether some projection onto ``span`` is Hermitian for the weight.

    Decided by the range inclusion ``R(b) ⊆ R(a)`` of the block entries,
    which is equivalent to the coupling equation ``a X = b`` being solvable
    and to ``H = S + A^{-1}(S^perp)``.  In exact finite-dimensional
    arithmetic this always holds.
    """
    blocks = block_decompose(weight, span)
    return douglas.range_inclusion(blocks.b, blocks.a, tol)


def degenerate_overlap(weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """The overlap ``N = S ∩ N(A)`` that parametrizes the projection family."""
    _check_pair(weight, span)
    return intersect(span, weight.null_subspace, tol)


def weighted_projection(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> ObliqueProjection:
    """The minimal-norm weight-Hermitian projection onto ``span``.

    Assembled in the frame of :func:`block_decompose` as ``[I, d; 0, 0]``
    where ``d`` is the reduced solution of the coupling equation
    ``a X = b``; the certified nullspace is ``A^{-1}(S^perp) (-) N``.
    No regularization is applied to a nearly singular ``a`` block, since
    that would change the nullspace of the result.

    Raises
    ------
    Incompatible
        If the coupling equation is numerically unsolvable.
    """
    blocks = block_decompose(weight, span)
    bs, bp = blocks.frame[0].basis, blocks.frame[1].basis
    try:
        coupling = douglas.reduced_solution(blocks.a, blocks.b, tol).matrix
    except NoSolution as exc:
        raise Incompatible(
            "the coupling equation between the blocks of the weight is unsolvable"
        ) from exc
    matrix = bs @ bs.T + bs @ coupling @ bp.T
    pre = preimage(weight.base, complement(span), tol)
    overlap = degenerate_overlap(weight, span, tol)
    return ObliqueProjection(matrix, span, subtract(pre, overlap, tol))


def weighted_projection_invertible(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> ObliqueProjection:
    """Closed formula ``P (P A P + (I-P) A (I-P))^{-1} A`` for invertible weights.

    Raises
    ------
    Singular
        If the weight does not have full numerical rank.
    """
    _check_pair(weight, span)
    if weight.rank < weight.dim:
        raise Singular("the closed formula requires a weight of full rank")
    p = span.projector()
    q = np.eye(weight.dim) - p
    middle = p @ weight.base @ p + q @ weight.base @ q
    matrix = p @ np.linalg.solve(middle, weight.base)
    return ObliqueProjection(matrix, span, nullspace_of(matrix, tol))


def weighted_projection_pinv(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> ObliqueProjection:
    """Pseudoinverse construction ``(P A P)^+ P A`` plus the overlap projector.

    ``(P A P)^+ P A`` is the minimal-norm projection onto ``S (-) N``; adding
    the orthogonal projector onto ``N`` recovers the full projection.  Always
    applicable in finite dimension, where ``P A P`` has closed range.
    """
    _check_pair(weight, span)
    p = span.projector()
    reduced = moore_penrose(p @ weight.base @ p, tol) @ (p @ weight.base)
    overlap = degenerate_overlap(weight, span, tol)
    matrix = reduced + overlap.projector()
    return ObliqueProjection(matrix, span, nullspace_of(matrix, tol))


def is_weight_hermitian(
    projection: ObliqueProjection,
    weight: PsdOperator,
    span: Subspace,
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    """Whether ``A Q = Q^T A`` for a projection ``Q`` with range ``span``.

    Both the algebraic test and the equivalent nullspace containment
    ``N(Q) ⊆ A^{-1}(S^perp)`` are evaluated; they must agree, otherwise the
    inputs are pathologically conditioned.

    Raises
    ------
    RangeMismatch
        If the projection's range is not ``span``.
    InconsistentDiagnostics
        If the two equivalent tests disagree numerically.
    """
    _check_pair(weight, span)
    if not subspace_equal(projection.range, span, tol):
        raise RangeMismatch("the projection's range differs from the given subspace")
    a, q = weight.base, projection.matrix
    scale = 1.0 + float(np.linalg.norm(a))
    algebraic = float(np.linalg.norm(a @ q - q.T @ a)) <= tol.eq_abs * scale
    pre = preimage(weight.base, complement(span), tol)
    containment = contains(pre, projection.nullspace, tol)
    if algebraic != containment:
        raise InconsistentDiagnostics(
            "the algebraic symmetry test and the nullspace containment test disagree"
        )
    return algebraic


def projection_family_member(
    weight: PsdOperator,
    span: Subspace,
    coefficients,
    tol: Tolerance = DEFAULT_TOL,
) -> ObliqueProjection:
    """A member of the family of weight-Hermitian projections onto ``span``.

    The family is the minimal projection plus an arbitrary map from
    ``S^perp`` into the overlap ``N = S ∩ N(A)``; ``coefficients`` is that
    map as a ``(dim N, n - dim S)`` matrix in the stored orthonormal bases.
    When the overlap is trivial the family is a singleton and only an empty
    coefficient matrix is accepted.
    """
    base = weighted_projection(weight, span, tol)
    overlap = degenerate_overlap(weight, span, tol)
    perp = complement(span)
    t = as_matrix(coefficients, rows=overlap.dim, cols=perp.dim)
    matrix = base.matrix + overlap.basis @ t @ perp.basis.T
    return ObliqueProjection(matrix, span, nullspace_of(matrix, tol))


def _chain_flags(
    weight: PsdOperator, span: Subspace, compatible: bool, tol: Tolerance
) -> tuple[bool, bool, bool, bool, bool, bool]:
    null = weight.null_subspace
    rng = weight.range_subspace
    scale = float(weight.eigvals[0]) if weight.eigvals.size else 0.0
    overlap = intersect(span, null, tol)
    image = subspace_from_span(weight.base @ span.basis, tol, scale=scale)
    image_sqrt = subspace_from_span(weight.sqrt @ span.basis, tol, scale=np.sqrt(scale))
    shifted = subspace_sum(span, null, tol)

    # 2/4: the image (resp. sqrt image) of S is closed inside the range,
    # i.e. taking closures adds nothing: image ∩ R = image.
    flag2 = subspace_equal(intersect(image, rng, tol), image, tol)
    flag4 = subspace_equal(intersect(image_sqrt, rng, tol), image_sqrt, tol)
    # 3: pulling the image back recovers S + N(A).
    flag3 = subspace_equal(preimage(weight.base, image, tol), shifted, tol)
    # 5: S + N(A) is closed; recorded as rank consistency of the sum.
    flag5 = shifted.dim == span.dim + null.dim - overlap.dim
    # 6: the projection of S onto the range has the consistent dimension.
    projected_dim = subspace_from_span(weight.range_proj @ span.basis, tol, scale=1.0).dim
    flag6 = projected_dim == span.dim - overlap.dim
    return (compatible, flag2, flag3, flag4, flag5, flag6)


def compatibility_diagnostics(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> CompatibilityReport:
    """Evaluate the full compatibility diagnostic record for (A, S)."""
    _check_pair(weight, span)
    blocks = block_decompose(weight, span)
    compatible = douglas.range_inclusion(blocks.b, blocks.a, tol)
    pre = preimage(weight.base, complement(span), tol)
    overlap = degenerate_overlap(weight, span, tol)
    sum_check = subspace_sum(span, pre, tol).dim == weight.dim

    coupling = None
    projection = None
    if compatible:
        coupling = douglas.reduced_solution(blocks.a, blocks.b, tol).matrix
        bs, bp = blocks.frame[0].basis, blocks.frame[1].basis
        matrix = bs @ bs.T + bs @ coupling @ bp.T
        projection = ObliqueProjection(matrix, span, subtract(pre, overlap, tol))

    projected = subspace_from_span(weight.range_proj @ span.basis, tol, scale=1.0)
    shifted = subspace_sum(span, weight.null_subspace, tol)
    return CompatibilityReport(
        compatible=compatible,
        degenerate=overlap,
        preimage_of_complement=pre,
        coupling=coupling,
        projection=projection,
        chain=_chain_flags(weight, span, compatible, tol),
        sum_check=sum_check,
        projected_pair_compatible=is_compatible(weight, projected, tol),
        shifted_pair_compatible=is_compatible(weight, shifted, tol),
    )


def chain_respects_implications(chain: tuple[bool, ...]) -> bool:
    """Whether six diagnostic flags respect 1->2->4->5, 2<->3 and 5<->6."""
    c1, c2, c3, c4, c5, c6 = chain
    implications = (not c1 or c2) and (not c2 or c4) and (not c4 or c5)
    return implications and c2 == c3 and c5 == c6
