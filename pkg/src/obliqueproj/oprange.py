"""The Hilbert structure carried by the range of the weight's square root.

The range ``R(A^{1/2})`` carries an inner product making ``A^{1/2}`` a
coisometry: the norm of ``u`` is the norm of its minimal-norm preimage
(the *witness* ``w = (A^{1/2})^+ u``, orthogonal to the nullspace).  In
finite dimension this range space is realized isometrically by witness
coordinates in the eigenbasis of the weight, so the exotic inner product
becomes the ordinary one and all identities become plain matrix identities.

In that chart live the canonical orthogonal projection onto the image of S
(which exists whether or not the pair is compatible), and the extensions of
ambient operators that leave the weight's nullspace invariant.  The module
exposes both, plus the identities tying them to the weighted projection:
the extension of the weighted projection *is* the chart projection, and the
chart projection maps the weight's range onto the image of S exactly when
the pair is compatible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentDiagnostics, NotExtendable, NotInRange, WeightMismatch
from .linalg import (
    DEFAULT_TOL,
    PsdOperator,
    Subspace,
    Tolerance,
    as_matrix,
    as_vector,
    complement,
    intersect,
    subspace_equal,
    subspace_from_span,
    subspace_sum,
)
from .oblique import is_compatible, weighted_projection


@dataclass(frozen=True)
class RangeVector:
    """A vector of the weight's range with its membership certificate.

    ``witness`` is the unique preimage of ``ambient`` under ``A^{1/2}``
    that is orthogonal to the nullspace; its Euclidean norm is the range
    space norm of ``ambient``.
    """

    weight: PsdOperator
    ambient: np.ndarray
    witness: np.ndarray


def in_weight_range(weight: PsdOperator, u, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Membership test against R(A)."""
    u = as_vector(u, weight.dim)
    gap = u - weight.range_proj @ u
    return float(np.linalg.norm(gap)) <= tol.eq_abs * (1.0 + float(np.linalg.norm(u)))


def in_weight_sqrt_range(weight: PsdOperator, u, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Membership test against R(A^{1/2}).

    Equal to R(A) in finite dimension; kept as a separate test because the
    two can disagree near rank boundaries, and the disagreement is a useful
    diagnostic.
    """
    u = as_vector(u, weight.dim)
    gap = u - weight.sqrt @ (weight.sqrt_pinv @ u)
    return float(np.linalg.norm(gap)) <= tol.eq_abs * (1.0 + float(np.linalg.norm(u)))


def lift(weight: PsdOperator, u, tol: Tolerance = DEFAULT_TOL) -> RangeVector:
    """Certify ``u`` as a member of the range space and attach its witness.

    Raises
    ------
    NotInRange
        If ``u`` is farther from R(A) than ``eq_abs * (1 + ||u||)``.
    """
    u = as_vector(u, weight.dim)
    if not in_weight_range(weight, u, tol):
        raise NotInRange("the vector is not in the range of the weight within tolerance")
    return RangeVector(weight, u, weight.sqrt_pinv @ u)


def range_inner(x: RangeVector, y: RangeVector) -> float:
    """Range-space inner product: plain inner product of the witnesses."""
    if x.weight is not y.weight and not np.array_equal(x.weight.base, y.weight.base):
        raise WeightMismatch("range vectors are governed by different weights")
    return float(x.witness @ y.witness)


def range_norm(x: RangeVector) -> float:
    """Range-space norm, the minimum norm over all preimages."""
    return float(np.linalg.norm(x.witness))


def chart_basis(weight: PsdOperator) -> np.ndarray:
    """Orthonormal ambient basis of the chart (leading eigenvectors)."""
    return weight.eigvecs[:, : weight.rank]


def chart_coords(weight: PsdOperator, u, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Chart coordinates of a range vector (length = rank of the weight)."""
    return chart_basis(weight).T @ lift(weight, u, tol).witness


def chart_image(weight: PsdOperator, columns, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Chart image of the span of given ambient range vectors."""
    cols = as_matrix(columns, rows=weight.dim)
    coords = chart_basis(weight).T @ (weight.sqrt_pinv @ cols)
    return subspace_from_span(coords, tol)


def unchart(weight: PsdOperator, coords) -> np.ndarray:
    """Ambient range vector represented by chart coordinates."""
    coords = as_vector(coords, weight.rank)
    return weight.sqrt @ (chart_basis(weight) @ coords)


@dataclass(frozen=True)
class RangeSpaceProjection:
    """The orthogonal projection, in the chart, onto the image of a subspace.

    ``coord_matrix`` is symmetric idempotent (orthogonality in the range
    space equals symmetry in the witness chart); ``range_image`` is the
    chart image of ``A^{1/2}(S)`` and ``null_image`` its orthocomplement,
    the chart image of ``S^perp ∩ R(A^{1/2})``.
    """

    weight: PsdOperator
    target: Subspace
    coord_matrix: np.ndarray
    range_image: Subspace
    null_image: Subspace

    def apply(self, x: RangeVector) -> RangeVector:
        """Project a certified range vector; the result lies in the image of S."""
        if x.weight is not self.weight and not np.array_equal(
            x.weight.base, self.weight.base
        ):
            raise WeightMismatch("the range vector is governed by a different weight")
        vr = chart_basis(self.weight)
        witness = vr @ (self.coord_matrix @ (vr.T @ x.witness))
        return RangeVector(self.weight, self.weight.sqrt @ witness, witness)


def range_space_projection(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> RangeSpaceProjection:
    """The chart-orthogonal projection onto the closure of the image of S.

    Exists for every pair, compatible or not.  The chart image of the
    target is spanned by the coordinates of ``A^{1/2} S``.
    """
    vr = chart_basis(weight)
    sqrt_scale = float(np.sqrt(weight.eigvals[0])) if weight.eigvals.size else 0.0
    image = subspace_from_span(vr.T @ (weight.sqrt @ span.basis), tol, scale=sqrt_scale)
    return RangeSpaceProjection(
        weight=weight,
        target=span,
        coord_matrix=image.projector(),
        range_image=image,
        null_image=complement(image),
    )


def is_chart_extendable(
    weight: PsdOperator, operator, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, bool]:
    """The two extension conditions for an ambient operator.

    Returns ``(nullspace invariant, adjoint-range included)``: whether the
    operator maps N(A) into N(A), and whether ``R(B^T A^{1/2})`` lies in
    ``R(A^{1/2})``.  The second is automatic in finite dimension but is
    evaluated anyway so tolerance asymmetries stay visible.
    """
    from .douglas import range_inclusion

    b = as_matrix(operator, rows=weight.dim, cols=weight.dim)
    image_of_null = b @ weight.null_subspace.basis
    scale = 1.0 + float(np.linalg.norm(image_of_null))
    invariant = float(np.linalg.norm(weight.range_proj @ image_of_null)) <= tol.eq_abs * scale
    bounded = range_inclusion(b.T @ weight.sqrt, weight.sqrt, tol)
    return invariant, bounded


def chart_extension(
    weight: PsdOperator, operator, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Chart matrix of the operator induced on the range space.

    The induced operator ``C`` satisfies ``C . chart(A x) = chart(A B x)``
    for every ``x`` and is the unique chart operator doing so.  Realized as
    ``A^{1/2} B (A^{1/2})^+`` pushed into chart coordinates.

    Raises
    ------
    NotExtendable
        If the operator does not leave the nullspace of the weight
        invariant (or, never in finite dimension, fails the adjoint-range
        inclusion).
    """
    b = as_matrix(operator, rows=weight.dim, cols=weight.dim)
    invariant, bounded = is_chart_extendable(weight, b, tol)
    if not invariant:
        raise NotExtendable("the operator does not map the weight's nullspace into itself")
    if not bounded:
        raise NotExtendable("the adjoint-range inclusion against R(A^{1/2}) fails")
    vr = chart_basis(weight)
    return vr.T @ (weight.sqrt @ b @ weight.sqrt_pinv) @ vr


def extension_matches_projection(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Whether the extension of the weighted projection is the chart projection.

    True for every compatible pair; this is the bridge identity between the
    ambient oblique picture and the range-space orthogonal picture.
    Propagates ``Incompatible`` from the projection construction.
    """
    proj = weighted_projection(weight, span, tol)
    extended = chart_extension(weight, proj.matrix, tol)
    chart_proj = range_space_projection(weight, span, tol).coord_matrix
    scale = 1.0 + float(np.linalg.norm(chart_proj))
    return float(np.linalg.norm(extended - chart_proj)) <= 10.0 * tol.eq_abs * scale


def chart_projected_range(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> tuple[Subspace, bool]:
    """Image of R(A) under the chart projection, mapped back to ambient space.

    Returns the subspace and whether it equals ``A(S)``; the equality holds
    exactly when the pair is compatible.
    """
    proj = range_space_projection(weight, span, tol)
    vr = chart_basis(weight)
    scale = float(weight.eigvals[0]) if weight.eigvals.size else 0.0
    range_coords = vr.T @ (weight.sqrt_pinv @ vr)
    image_cols = weight.sqrt @ vr @ (proj.coord_matrix @ range_coords)
    image = subspace_from_span(image_cols, tol)
    target = subspace_from_span(weight.base @ span.basis, tol, scale=scale)
    return image, subspace_equal(image, target, tol)


def induced_projection(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """The ambient idempotent obtained by conjugating the chart projection.

    Composes the inverse of the weight on its range, the chart projection
    and the weight; requires (and, in finite dimension, automatically has)
    the chart projection mapping R(A) into R(A).  For a compatible pair it
    equals the range projector times the weighted projection.
    """
    proj = range_space_projection(weight, span, tol)
    vr = chart_basis(weight)
    ambient_chart = weight.sqrt @ vr @ proj.coord_matrix @ vr.T @ weight.sqrt_pinv
    return weight.pinv @ ambient_chart @ weight.base


def complement_density_check(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Two equivalent density statements about ``S^perp ∩ R(A)`` in the chart.

    The closure of ``S^perp ∩ R(A)`` fills the orthocomplement of the image
    of S exactly when ``A(S) + S^perp ∩ R(A)`` is dense in the range space;
    in finite dimension density means equality and both sides are evaluated
    as chart-subspace identities.

    Raises
    ------
    InconsistentDiagnostics
        If the two equivalent statements disagree numerically.
    """
    proj = range_space_projection(weight, span, tol)
    perp_meet_range = intersect(complement(span), weight.range_subspace, tol)
    chart_perp = chart_image(weight, perp_meet_range.basis, tol)
    closure_fills = subspace_equal(chart_perp, proj.null_image, tol)
    total = subspace_sum(proj.range_image, chart_perp, tol)
    sum_dense = total.dim == weight.rank
    if closure_fills != sum_dense:
        raise InconsistentDiagnostics(
            "the closure identity and the dense-sum identity disagree"
        )
    return closure_fills


def compatibility_decompositions(
    weight: PsdOperator, span: Subspace, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, bool, bool]:
    """Three equivalent decomposition conditions for compatibility.

    i) the block criterion; ii) ``R(A^{1/2})`` splits into the sqrt image of
    S plus its orthocomplement within the range; iii) ``R(A)`` splits into
    ``A(S)`` plus ``S^perp ∩ R(A)``, with ``A(S)`` closed inside ``R(A)``.
    All three agree, and agree with :func:`is_compatible`, on every
    well-conditioned input.
    """
    rng = weight.range_subspace
    first = is_compatible(weight, span, tol)
    scale = float(weight.eigvals[0]) if weight.eigvals.size else 0.0

    image_sqrt = subspace_from_span(weight.sqrt @ span.basis, tol, scale=np.sqrt(scale))
    split_sqrt = subspace_sum(
        image_sqrt, intersect(complement(image_sqrt), rng, tol), tol
    )
    second = subspace_equal(split_sqrt, rng, tol)

    image = subspace_from_span(weight.base @ span.basis, tol, scale=scale)
    split = subspace_sum(image, intersect(complement(span), rng, tol), tol)
    third = subspace_equal(split, rng, tol) and subspace_equal(
        intersect(image, rng, tol), image, tol
    )
    return first, second, third
