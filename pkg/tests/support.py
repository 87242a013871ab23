"""Shared instance generators and independent oracles for the test suite."""

import numpy as np

from obliqueproj import PsdOperator, Subspace, subspace_from_span


def random_orthogonal(rng, n):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return q


def make_psd(rng, n, rank):
    """Random PSD matrix with the given rank; nonzero eigenvalues in [0.5, 2]."""
    q = random_orthogonal(rng, n)
    ev = np.zeros(n)
    ev[:rank] = rng.uniform(0.5, 2.0, size=rank)
    return PsdOperator.from_matrix((q * ev) @ q.T)


def make_subspace(rng, n, k) -> Subspace:
    if k == 0:
        return Subspace(n, np.zeros((n, 0)))
    return subspace_from_span(rng.normal(size=(n, k)))


def make_pair(rng, n=None, rank=None, k=None):
    """Random (weight, subspace) pair over dims 2..8 and all ranks."""
    if n is None:
        n = int(rng.integers(2, 9))
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    if k is None:
        k = int(rng.integers(0, n + 1))
    return make_psd(rng, n, rank), make_subspace(rng, n, k)


def singular_values_by_eig(m):
    """Singular values via the eigenvalues of M^T M (independent of SVD)."""
    m = np.asarray(m, dtype=float)
    ev = np.linalg.eigvalsh(m.T @ m)
    return np.sqrt(np.clip(ev, 0.0, None))[::-1]


def intersection_by_nullspace(b1, b2):
    """Brute-force intersection oracle: common vectors from the nullspace of
    the stacked system ``b1 alpha = b2 beta``."""
    import scipy.linalg

    if b1.shape[1] == 0 or b2.shape[1] == 0:
        return np.zeros((b1.shape[0], 0))
    stacked = np.hstack([b1, -b2])
    null = scipy.linalg.null_space(stacked)
    return b1 @ null[: b1.shape[1]]


def column_space_contained(b, a, tol=1e-8):
    """Column-space inclusion oracle via numpy's matrix_rank."""
    ra = np.linalg.matrix_rank(a, tol=tol)
    rab = np.linalg.matrix_rank(np.hstack([a, b]), tol=tol)
    return rab == ra


def min_lambda_by_pencil(a, b, lo=0.0, hi=None, iters=80):
    """PSD-pencil oracle: bisect the least lam with lam A A^T - B B^T >= 0."""
    aat = a @ a.T
    bbt = b @ b.T
    if hi is None:
        hi = 1.0
        while np.linalg.eigvalsh(hi * aat - bbt).min() < -1e-12 and hi < 1e12:
            hi *= 2.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.linalg.eigvalsh(mid * aat - bbt).min() >= -1e-12:
            hi = mid
        else:
            lo = mid
    return hi


def seminorm_grid_min(t, basis, x, radius=3.0, rounds=4, points=81):
    """Iteratively refined grid scan of ``||T (x + B c)||`` over the box
    ``|c_i| <= radius``; supports 1-D and 2-D coefficient spaces."""
    k = basis.shape[1]
    assert k in (1, 2)
    center = np.zeros(k)
    width = radius
    best = np.inf
    for _ in range(rounds):
        axes = [np.linspace(c - width, c + width, points) for c in center]
        if k == 1:
            grid = axes[0].reshape(1, -1)
        else:
            g0, g1 = np.meshgrid(axes[0], axes[1], indexing="ij")
            grid = np.vstack([g0.ravel(), g1.ravel()])
        values = np.linalg.norm(t @ (x[:, None] + basis @ grid), axis=0)
        idx = int(np.argmin(values))
        best = float(values[idx])
        center = grid[:, idx]
        width *= 2.0 / (points - 1)
    return best, center
