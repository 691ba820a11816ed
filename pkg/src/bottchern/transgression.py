"""Gram matrices of transgression bundles over a base times ``(P^1)^n``.

For an emi cube ``F`` the ambient bundle is ``⊕_{alpha <= 0} F_alpha`` (each
block twisted by line bundles whose trivializing generators all have squared
norm ``1/(1 + |t_i|^2)``), and the transgression bundle is the cokernel of
``psi`` with the quotient metric.

On the affine chart of axis ``k`` the column of ``psi`` for ``(alpha, k)``
is the identity into block ``alpha`` plus ``t_k * phi_{alpha,k}`` into block
``alpha + e_k``.  In the chart at infinity (``tau_k = 1/t_k``) the same
column is rescaled to ``(tau_k * identity, phi_{alpha,k})``.  For ``n >= 2``
``psi`` is not injective (a vertex with several ``-1`` entries feeds several
columns), so its image is first reduced to a column basis of rank
``N - dim F_(0,...,0)``.

All evaluators are vectorized: fiber points are arrays of shape ``(..., n)``.
"""

import itertools

import numpy as np

from . import cubes as _cubes
from . import linalg
from .errors import PreconditionError


def fiber_weight(x):
    """``∏_i 1/(1 + |x_i|^2)`` over the last axis of ``x``."""
    x = np.asarray(x, dtype=complex)
    return np.prod(1.0 / (1.0 + np.abs(x) ** 2), axis=-1)


class BundleFamily:
    """Pointwise evaluator for the transgression bundle of an emi cube.

    Parameters
    ----------
    cube : MetrizedCube
        Exact cube; must be emi unless ``check_emi=False``.
    base_metrics : dict, optional
        Maps vertices ``alpha <= 0`` to callables ``s -> Gram`` (for instance
        :class:`~bottchern.expr.MetricFamilyExpr`) that override the constant
        metrics of ``cube``.
    """

    def __init__(self, cube, base_metrics=None, check_emi=True):
        if check_emi and base_metrics is None and not _cubes.is_emi(cube):
            raise PreconditionError("transgression needs an emi cube; apply lambda first")
        self.cube = cube
        self.n = cube.n
        self.base_metrics = dict(base_metrics or {})
        self.blocks = [a for a in _cubes.vertices(cube.n) if max(a, default=-1) <= 0]
        self.offsets = {}
        off = 0
        for a in self.blocks:
            self.offsets[a] = off
            off += cube.dims[a]
        self.ambient_dim = off
        zero = (0,) * cube.n
        self.rank = cube.dims[zero]
        self.complement = np.zeros((off, self.rank), dtype=complex)
        self.complement[self.offsets[zero]:self.offsets[zero] + self.rank] = np.eye(self.rank)
        cols = [(a, k) for a in self.blocks for k in range(cube.n) if a[k] == -1]
        self.columns = cols
        widths = [cube.dims[a] for a, _ in cols]
        self.psi_dim = int(sum(widths))
        self._ident = np.zeros((cube.n, off, self.psi_dim), dtype=complex)
        self._phi = np.zeros((cube.n, off, self.psi_dim), dtype=complex)
        c = 0
        for (a, k), w in zip(cols, widths):
            tgt = _cubes._bump(a, k)
            r0, r1 = self.offsets[a], self.offsets[tgt]
            self._ident[k, r0:r0 + w, c:c + w] = np.eye(w)
            self._phi[k, r1:r1 + cube.dims[tgt], c:c + w] = cube.arrows[a, k]
            c += w

    def vertex_gram(self, alpha, s=0.0):
        alpha = tuple(alpha)
        if alpha in self.base_metrics:
            return np.asarray(self.base_metrics[alpha](s), dtype=complex)
        return self.cube.grams[alpha]

    def block_gram(self, s=0.0):
        """Unweighted block-diagonal ambient Gram, shape ``s.shape + (N, N)``."""
        s = np.asarray(s, dtype=complex)
        H = np.zeros(s.shape + (self.ambient_dim, self.ambient_dim), dtype=complex)
        for a in self.blocks:
            o, d = self.offsets[a], self.cube.dims[a]
            H[..., o:o + d, o:o + d] = self.vertex_gram(a, s)
        return H

    def ambient_gram(self, s, t):
        """Block-diagonal ``H_alpha(s) * ∏ 1/(1 + |t_i|^2)``."""
        w = fiber_weight(t)
        return self.block_gram(s) * w[..., None, None]

    def psi_matrix(self, t, chart=None):
        """Matrix of ``psi`` at fiber points ``t`` (shape ``(..., n)``).

        ``chart[k]`` true means the ``k``-th coordinate is ``tau_k = 1/t_k``.
        """
        t = np.asarray(t, dtype=complex)
        if t.shape[-1] != self.n:
            raise PreconditionError(f"expected {self.n} fiber coordinates, got {t.shape[-1]}")
        chart = (False,) * self.n if chart is None else tuple(chart)
        M = np.zeros(t.shape[:-1] + (self.ambient_dim, self.psi_dim), dtype=complex)
        for k in range(self.n):
            x = t[..., k][..., None, None]
            if chart[k]:
                M = M + x * self._ident[k] + self._phi[k]
            else:
                M = M + self._ident[k] + x * self._phi[k]
        return M

    def frame(self, chart=None):
        """Constant cokernel frame adapted to a chart pattern.

        For the axes ``S`` flagged in ``chart`` the frame is assembled from
        the vertices ``beta`` with ``beta_k = ±1`` on ``S`` and ``0``
        elsewhere: a basis of ``F_beta`` is lifted through the composite
        map from ``gamma`` (``beta`` with ``1`` lowered to ``0``).  At
        ``tau_k = 0`` this frame is complementary to the image of ``psi``,
        so the resulting Gram stays well conditioned on the whole chart.
        With no flagged axis it is the ``F_(0,...,0)`` block.
        """
        chart = (False,) * self.n if chart is None else tuple(chart)
        if not any(chart):
            return self.complement
        cube = self.cube
        choices = [(-1, 1) if flag else (0,) for flag in chart]
        parts = []
        for beta in itertools.product(*choices):
            d = cube.dims[beta]
            if not d:
                continue
            gamma = tuple(0 if b == 1 else b for b in beta)
            lift = np.linalg.pinv(cube.composite(gamma, beta))
            block = np.zeros((self.ambient_dim, d), dtype=complex)
            o = self.offsets[gamma]
            block[o:o + cube.dims[gamma]] = lift
            parts.append(block)
        if not parts:
            return np.zeros((self.ambient_dim, 0), dtype=complex)
        return np.concatenate(parts, axis=1)

    def gram(self, s, t, chart=None, complement=None):
        """Gram matrix of the transgression bundle in the basis ``complement``.

        The default complement is the ``F_(0,...,0)`` block.  Result shape is
        ``broadcast(s.shape, t.shape[:-1]) + (r, r)``.
        """
        t = np.asarray(t, dtype=complex)
        if t.shape[-1] != self.n:
            raise PreconditionError(f"expected {self.n} fiber coordinates, got {t.shape[-1]}")
        C = self.complement if complement is None else complement
        H = self.block_gram(s)
        M = self.psi_matrix(t, chart)
        shape = np.broadcast_shapes(H.shape[:-2], M.shape[:-2])
        H = np.broadcast_to(H, shape + H.shape[-2:])
        M = np.broadcast_to(M, shape + M.shape[-2:])
        M = linalg.image_columns(H, M, self.ambient_dim - self.rank)
        G = linalg.schur_quotient(H, M, C)
        return G * fiber_weight(t)[..., None, None]


def psi_matrix(F, t):
    return BundleFamily(F).psi_matrix(t)


def ambient_gram(F, s, t):
    return BundleFamily(F).ambient_gram(s, t)


def transgression_gram(F, s=0.0, t=None, base_metrics=None):
    """Quotient Gram of ``tr_n(F)`` at ``(s, t)``."""
    fam = BundleFamily(F, base_metrics)
    if t is None:
        t = np.zeros(F.n)
    return fam.gram(s, t)


def _face_metrics(base_metrics, k, j):
    if not base_metrics:
        return None
    return {a[:k] + a[k + 1:]: m for a, m in base_metrics.items() if a[k] == j}


def transgression_inductive(F, s=0.0, t=None, base_metrics=None):
    """``tr_n`` computed as ``tr_1`` along the last axis of ``tr_{n-1}`` of the faces."""
    t = np.zeros(F.n) if t is None else np.asarray(t, dtype=complex)
    if F.n <= 1:
        return transgression_gram(F, s, t, base_metrics)
    k = F.n - 1
    inner = t[..., :k]
    g_sub = transgression_inductive(_cubes.face(F, F.n, -1), s, inner, _face_metrics(base_metrics, k, -1))
    g_mid = transgression_inductive(_cubes.face(F, F.n, 0), s, inner, _face_metrics(base_metrics, k, 0))
    phi = F.arrows[(0,) * k + (-1,), k]
    d_sub, d_mid = phi.shape[1], phi.shape[0]
    shape = np.broadcast_shapes(g_sub.shape[:-2], g_mid.shape[:-2])
    H = np.zeros(shape + (d_sub + d_mid, d_sub + d_mid), dtype=complex)
    H[..., :d_sub, :d_sub] = g_sub
    H[..., d_sub:, d_sub:] = g_mid
    x = t[..., k]
    M = np.zeros(np.shape(x) + (d_sub + d_mid, d_sub), dtype=complex)
    M[..., :d_sub, :] = np.eye(d_sub)
    M[..., d_sub:, :] = np.asarray(x)[..., None, None] * phi
    C = np.zeros((d_sub + d_mid, d_mid), dtype=complex)
    C[d_sub:] = np.eye(d_mid)
    G = linalg.schur_quotient(H, np.broadcast_to(M, shape + M.shape[-2:]), C)
    return G / (1.0 + np.abs(x) ** 2)[..., None, None]


def restriction_grams(F, i, s, t_other):
    """Grams compared by the restriction isometries along axis ``i`` (1-based).

    Returns ``(at_zero, face_zero, at_infinity, faces_infinity)`` where
    ``at_zero`` is ``tr_n(F)`` at ``t_i = 0``, ``face_zero`` is
    ``tr_{n-1}`` of the ``0`` face, ``at_infinity`` is ``tr_n(F)`` at
    ``tau_i = 0`` in a basis adapted to the splitting, and
    ``faces_infinity`` is the block sum of ``tr_{n-1}`` of the ``-1`` and
    ``1`` faces, in that order.
    """
    k = i - 1
    fam = BundleFamily(F)
    t_other = np.asarray(t_other, dtype=complex)
    full = np.insert(t_other, k, 0.0, axis=-1)
    at_zero = fam.gram(s, full)
    f0 = _cubes.face(F, i, 0)
    face_zero = _face_gram(f0, s, t_other)

    chart = tuple(j == k for j in range(F.n))
    zero = (0,) * F.n
    low = zero[:k] + (-1,) + zero[k + 1:]
    high = zero[:k] + (1,) + zero[k + 1:]
    d_low, d_high = F.dims[low], F.dims[high]
    C = np.zeros((fam.ambient_dim, d_low + d_high), dtype=complex)
    o = fam.offsets[low]
    C[o:o + d_low, :d_low] = np.eye(d_low)
    g = F.arrows[zero, k]
    o0 = fam.offsets[zero]
    C[o0:o0 + F.dims[zero], d_low:] = np.linalg.pinv(g)
    at_inf = fam.gram(s, full, chart=chart, complement=C)
    g_low = _face_gram(_cubes.face(F, i, -1), s, t_other)
    g_high = _face_gram(_cubes.face(F, i, 1), s, t_other)
    shape = np.broadcast_shapes(g_low.shape[:-2], g_high.shape[:-2])
    blocks = np.zeros(shape + (d_low + d_high, d_low + d_high), dtype=complex)
    blocks[..., :d_low, :d_low] = g_low
    blocks[..., d_low:, d_low:] = g_high
    return at_zero, face_zero, at_inf, blocks


def _face_gram(G, s, t):
    return BundleFamily(G).gram(s, t)


def restriction_residual(F, i, points=20, seed=0, scale=1.0):
    """Largest entry deviation in the restriction isometries along axis ``i``."""
    if F.n < 1:
        raise PreconditionError("restriction needs n >= 1")
    rng = np.random.default_rng(seed)
    t_other = scale * (rng.standard_normal((points, F.n - 1)) + 1j * rng.standard_normal((points, F.n - 1)))
    a0, f0, ainf, finf = restriction_grams(F, i, 0.0, t_other)
    return float(max(np.max(np.abs(a0 - f0), initial=0.0), np.max(np.abs(ainf - finf), initial=0.0)))


def inductive_residual(F, points=20, seed=0, scale=1.0):
    """Largest deviation between direct and inductive transgression Grams."""
    rng = np.random.default_rng(seed)
    t = scale * (rng.standard_normal((points, F.n)) + 1j * rng.standard_normal((points, F.n)))
    return float(np.max(np.abs(transgression_gram(F, 0.0, t) - transgression_inductive(F, 0.0, t)), initial=0.0))


def tensor_factorization_residual(F, G, points=20, seed=0, scale=1.0):
    """Largest deviation between ``tr(F ⊗ G)`` and the Kronecker product of ``tr(F)``, ``tr(G)``."""
    rng = np.random.default_rng(seed)
    n, m = F.n, G.n
    t = scale * (rng.standard_normal((points, n + m)) + 1j * rng.standard_normal((points, n + m)))
    whole = transgression_gram(_cubes.tensor_cube(F, G), 0.0, t)
    a = transgression_gram(F, 0.0, t[:, :n])
    b = transgression_gram(G, 0.0, t[:, n:])
    kron = np.einsum("pij,pkl->pikjl", a, b).reshape(whole.shape)
    return float(np.max(np.abs(whole - kron), initial=0.0))
