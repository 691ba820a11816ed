"""Dense complex linear algebra for hermitian metrics.

A metric on ``C^d`` is stored as its Gram matrix ``G`` (``<v, w> = w^* G v``).
Linear maps are plain ``(rows, cols)`` complex arrays acting on column vectors.
"""

import numpy as np

from .errors import RankError, ShapeError

HERMITIAN_TOL = 1e-12
RANK_RTOL = 1e-9


def as_matrix(a, rows=None, cols=None):
    """Return ``a`` as a 2-d complex array, checking optional dimensions."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d array, got shape {m.shape}")
    if rows is not None and m.shape[0] != rows:
        raise ShapeError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise ShapeError(f"expected {cols} columns, got {m.shape[1]}")
    return m


def hermitize(G, tol=None):
    """Symmetrize ``G`` to ``(G + G^*)/2`` after checking it is nearly hermitian.

    ``tol`` is relative to the largest entry; ``None`` uses ``HERMITIAN_TOL``.
    """
    G = as_matrix(G)
    if G.shape[0] != G.shape[1]:
        raise ShapeError(f"Gram matrix must be square, got {G.shape}")
    tol = HERMITIAN_TOL if tol is None else tol
    scale = max(1.0, float(np.max(np.abs(G)))) if G.size else 1.0
    if G.size and np.max(np.abs(G - G.conj().T)) > tol * scale:
        raise ShapeError("matrix is not hermitian")
    return (G + G.conj().T) / 2


def is_positive_definite(G, tol=1e-12):
    """True iff the smallest eigenvalue of the hermitian matrix ``G`` exceeds ``tol``.

    Examples
    --------
    >>> is_positive_definite([[2, 1j], [-1j, 2]])
    True
    >>> is_positive_definite([[1, 2], [2, 1]])
    False
    """
    G = hermitize(G, max(tol, HERMITIAN_TOL))
    if G.shape[0] == 0:
        return True
    return bool(np.linalg.eigvalsh(G)[0] > tol)


def rank(A, rtol=RANK_RTOL):
    """Numerical rank with a threshold relative to the largest singular value."""
    A = as_matrix(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def kernel_basis(A, rtol=RANK_RTOL):
    """Orthonormal (standard inner product) basis of ``ker A`` as columns."""
    A = as_matrix(A)
    n = A.shape[1]
    if A.shape[0] == 0 or n == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(A)
    r = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return vh[r:].conj().T


def image_basis(A, rtol=RANK_RTOL):
    """Orthonormal (standard inner product) basis of ``im A`` as columns."""
    A = as_matrix(A)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(A)
    r = int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0
    return u[:, :r]


def sub_metric(G, f):
    """Metric induced on the source of the injection ``f``: ``f^* G f``."""
    G = hermitize(G)
    f = as_matrix(f, rows=G.shape[0])
    if rank(f) != f.shape[1]:
        raise RankError("sub_metric needs an injective map")
    return hermitize(f.conj().T @ G @ f, 1e-9)


def quotient_metric(G, g):
    """Metric on the target of the surjection ``g`` induced by ``(ker g)^perp``.

    The squared norm of ``w`` is the minimum of ``v^* G v`` over ``g v = w``,
    which gives the Gram matrix ``(g G^{-1} g^*)^{-1}``.
    """
    G = hermitize(G)
    g = as_matrix(g, cols=G.shape[0])
    if rank(g) != g.shape[0]:
        raise RankError("quotient_metric needs a surjective map")
    if g.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    inner = g @ np.linalg.solve(G, g.conj().T)
    return hermitize(np.linalg.inv(hermitize(inner, 1e-9)), 1e-9)


def schur_quotient(G, M, C):
    """Unchecked, batched ``C^* (G - G M (M^* G M)^{-1} M^* G) C``.

    All arguments may carry matching leading batch dimensions.
    """
    GC = G @ C
    CGC = np.conj(np.swapaxes(C, -1, -2)) @ GC
    if M.shape[-1] == 0:
        out = CGC
    else:
        Mh = np.conj(np.swapaxes(M, -1, -2))
        MGM = Mh @ G @ M
        MGC = Mh @ GC
        out = CGC - np.conj(np.swapaxes(MGC, -1, -2)) @ np.linalg.solve(MGM, MGC)
    return (out + np.conj(np.swapaxes(out, -1, -2))) / 2


def image_columns(G, M, rank):
    """Batched basis of ``im M`` with ``rank`` columns, chosen by the top eigenvectors of ``M^* G M``."""
    if M.shape[-1] == rank:
        return M
    Mh = np.conj(np.swapaxes(M, -1, -2))
    _, V = np.linalg.eigh(Mh @ G @ M)
    return M @ V[..., :, M.shape[-1] - rank:]


def complement_quotient_gram(G, M, C):
    """Gram matrix of ``ambient / im M`` in the basis given by the classes of ``C``.

    Equivalently the ambient metric restricted to ``(im M)^perp``, expressed
    through the orthogonal projections of the columns of ``C``.
    """
    G = hermitize(G)
    N = G.shape[0]
    M = as_matrix(M, rows=N)
    C = as_matrix(C, rows=N)
    if M.shape[1]:
        if rank(M) != M.shape[1]:
            raise RankError("M must be injective")
        if rank(M.conj().T @ G @ M) != M.shape[1]:
            raise RankError("M^* G M is singular")
    if rank(np.hstack([M, C])) != M.shape[1] + C.shape[1] or M.shape[1] + C.shape[1] != N:
        raise RankError("columns of C do not project to a basis of the cokernel")
    return schur_quotient(G, M, C)


def is_short_exact(f, g, tol=RANK_RTOL):
    """True iff ``0 -> A --f--> B --g--> C -> 0`` is exact.

    ``f`` is ``(dim B, dim A)`` and ``g`` is ``(dim C, dim B)``.
    """
    f = as_matrix(f)
    g = as_matrix(g)
    if f.shape[0] != g.shape[1]:
        raise ShapeError(f"maps do not compose: {f.shape} then {g.shape}")
    rf, rg = rank(f, tol), rank(g, tol)
    if rf != f.shape[1] or rg != g.shape[0] or rf + rg != f.shape[0]:
        return False
    if f.size and g.size:
        comp = g @ f
        scale = max(1.0, np.linalg.norm(f, 2) * np.linalg.norm(g, 2))
        if np.max(np.abs(comp)) > max(tol, 1e-10) * scale:
            return False
    return True


def random_gram(dim, rng, spread=1.0):
    """Random hermitian positive-definite matrix, eigenvalues roughly in ``[0.5, 0.5 + 2 spread]``."""
    a = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2 * max(dim, 1))
    return hermitize(spread * (a @ a.conj().T) + 0.5 * np.eye(dim), 1e-9)


def random_invertible(dim, rng):
    """Random complex matrix with singular values in ``[0.5, 2]``."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(a)
    return q * rng.uniform(0.5, 2.0, size=dim)
