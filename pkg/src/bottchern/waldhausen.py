"""Waldhausen S-construction simplices and the cube map ``Cub``.

An element of ``S_n`` is a diagram ``{E_{i,j}}_{0<=i<=j<=n}`` with
``E_{i,i} = 0`` in which every ``E_{i,j} -> E_{i,k} -> E_{j,k}`` is short
exact.  It is stored through its generating maps ``E_{i,j} -> E_{i,j+1}``
(horizontal) and ``E_{i,j} -> E_{i+1,j}`` (vertical).
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .chains import ChainElement, boundary
from .cubes import MetrizedCube, TOL, _close, vertices
from .errors import ExactnessError, PreconditionError


@dataclass(frozen=True, eq=False)
class SSimplex:
    n: int
    dims: dict
    grams: dict
    horizontal: dict
    vertical: dict

    def indices(self):
        return [(i, j) for i in range(self.n + 1) for j in range(i, self.n + 1)]

    def map(self, src, dst):
        """Structure map ``E_src -> E_dst`` for ``src <= dst`` componentwise."""
        (a, b), (c, d) = src, dst
        if a > c or b > d or c > d or a > b:
            raise PreconditionError(f"no structure map {src} -> {dst}")
        m = np.eye(self.dims[src], dtype=complex)
        for j in range(b, d):
            m = self.horizontal[a, j] @ m
        for i in range(a, c):
            m = self.vertical[i, d] @ m
        return m

    def validate(self, tol=1e-9):
        for i in range(self.n + 1):
            if self.dims[i, i]:
                raise ExactnessError(f"E_{i},{i} must be zero")
        for i in range(self.n + 1):
            for j in range(i, self.n):
                if i + 1 <= j:
                    # square (i,j) -> (i,j+1) -> (i+1,j+1) versus (i,j) -> (i+1,j) -> (i+1,j+1)
                    a = self.vertical[i, j + 1] @ self.horizontal[i, j]
                    b = self.horizontal[i + 1, j] @ self.vertical[i, j]
                    if not _close(a, b, tol):
                        raise ExactnessError(f"square at ({i},{j}) does not commute")
        for i in range(self.n + 1):
            for j in range(i, self.n + 1):
                for k in range(j, self.n + 1):
                    if not linalg.is_short_exact(self.map((i, j), (i, k)), self.map((i, k), (j, k)), tol):
                        raise ExactnessError(f"E_{i},{j} -> E_{i},{k} -> E_{j},{k} is not short exact")
        return self


def random_s_simplex(n, max_dim=2, seed=0, rng=None):
    """Seeded random element of ``S_n`` built from a split flag with random bases and metrics."""
    if not 1 <= n <= 5:
        raise PreconditionError("random S-simplices need 1 <= n <= 5")
    rng = np.random.default_rng(seed) if rng is None else rng
    mult = [int(rng.integers(0, max_dim + 1)) for _ in range(n)]
    if sum(mult) == 0:
        mult[int(rng.integers(n))] = 1
    offsets = np.concatenate([[0], np.cumsum(mult)])

    def layout(i, j):
        return list(range(offsets[i], offsets[j]))

    dims, grams, P = {}, {}, {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            d = int(offsets[j] - offsets[i])
            dims[i, j] = d
            grams[i, j] = linalg.random_gram(d, rng)
            P[i, j] = linalg.random_invertible(d, rng)

    def select(src, dst):
        ls, ld = layout(*src), layout(*dst)
        m = np.zeros((len(ld), len(ls)), dtype=complex)
        for r, x in enumerate(ld):
            if x in ls:
                m[r, ls.index(x)] = 1.0
        return np.linalg.inv(P[dst]) @ m @ P[src]

    horizontal = {(i, j): select((i, j), (i, j + 1)) for i in range(n + 1) for j in range(i, n)}
    vertical = {(i, j): select((i, j), (i + 1, j)) for j in range(n + 1) for i in range(j)}
    return SSimplex(n, dims, grams, horizontal, vertical)


def s_face(E, k):
    """The simplicial face ``d_k`` deleting index ``k``."""
    if not 0 <= k <= E.n:
        raise IndexError(f"face index {k} out of range for S_{E.n}")
    if E.n == 0:
        raise PreconditionError("S_0 has no faces")
    sigma = [a for a in range(E.n + 1) if a != k]
    m = E.n - 1
    dims, grams = {}, {}
    for a in range(m + 1):
        for b in range(a, m + 1):
            dims[a, b] = E.dims[sigma[a], sigma[b]]
            grams[a, b] = E.grams[sigma[a], sigma[b]]
    horizontal = {(a, b): E.map((sigma[a], sigma[b]), (sigma[a], sigma[b + 1]))
                  for a in range(m + 1) for b in range(a, m)}
    vertical = {(a, b): E.map((sigma[a], sigma[b]), (sigma[a + 1], sigma[b]))
                for b in range(m + 1) for a in range(b)}
    return SSimplex(m, dims, grams, horizontal, vertical)


def s_boundary(chain):
    """Waldhausen differential ``d = sum_k (-1)^k d_k`` on a list of ``(SSimplex, coeff)``."""
    if isinstance(chain, SSimplex):
        chain = [(chain, 1)]
    return [(s_face(E, k), c * (-1) ** k) for E, c in chain for k in range(E.n + 1)]


def _cub_label(alpha, labels):
    if not alpha:
        return labels[0], labels[1]
    head, rest = alpha[0], alpha[1:]
    if head == -1:
        return None if 1 in rest else (labels[0], labels[1])
    if head == 0:
        return _cub_label(rest, labels[:1] + labels[2:])
    return _cub_label(rest, labels[1:])


def cub_labels(n):
    """Vertex labels ``alpha -> (i, j)`` (``None`` for zero) of ``Cub`` on ``S_n``."""
    return {alpha: _cub_label(alpha, list(range(n + 1))) for alpha in vertices(n - 1)}


def cub(E):
    """The exact ``(n-1)``-cube attached to ``E`` in ``S_n``.

    Along the first axis the cube reads ``E_{0,1} -> E_{0,k} -> E_{1,k}``
    patterns recursively; faces satisfy the standard face identities of the
    construction and every edge is exact.
    """
    if E.n < 1:
        raise PreconditionError("Cub needs simplicial degree >= 1")
    m = E.n - 1
    labels = cub_labels(E.n)
    dims, grams, arrows = {}, {}, {}
    for alpha, lab in labels.items():
        if lab is None:
            dims[alpha], grams[alpha] = 0, np.zeros((0, 0), dtype=complex)
        else:
            dims[alpha], grams[alpha] = E.dims[lab], E.grams[lab]
    for alpha, lab in labels.items():
        for k in range(m):
            if alpha[k] == 1:
                continue
            beta = alpha[:k] + (alpha[k] + 1,) + alpha[k + 1:]
            tgt = labels[beta]
            if lab is None or tgt is None:
                arrows[alpha, k] = np.zeros((dims[beta], dims[alpha]), dtype=complex)
            else:
                arrows[alpha, k] = E.map(lab, tgt)
    return MetrizedCube(m, dims, grams, arrows)


def cub_chain(chain, tol=TOL):
    """``Cub`` extended linearly to a list of ``(SSimplex, coeff)``."""
    if isinstance(chain, SSimplex):
        chain = [(chain, 1)]
    return ChainElement([(cub(E), c) for E, c in chain], tol)


def cub_chain_map_residual(E, tol=TOL):
    """``d Cub E - Cub d E`` reduced modulo degenerates (zero chain when ``E`` is in ``S_1``)."""
    if E.n == 1:
        return ChainElement()
    return boundary(ChainElement.of(cub(E), 1)) - cub_chain(s_boundary(E), tol)
