"""Metrized exact n-cubes of finite-dimensional hermitian vector spaces.

A cube is a functor from ``{-1, 0, 1}^n`` (with the product order) to
hermitian vector spaces.  Vertex ``alpha`` carries ``C^{dims[alpha]}`` with a
Gram matrix; for every vertex with ``alpha[k] < 1`` the arrow along axis ``k``
(0-based in storage) is the matrix of ``F(alpha -> alpha + e_k)``.

Public operations take axes 1-based (``i in 1..n``) so that ``face(F, i, j)``
reads like the usual face notation.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ExactnessError, PreconditionError, ShapeError

TOL = 1e-10


def vertices(n):
    """All indices of ``{-1,0,1}^n`` in lexicographic order."""
    return list(itertools.product((-1, 0, 1), repeat=n))


def _bump(alpha, k, delta=1):
    a = list(alpha)
    a[k] += delta
    return tuple(a)


def _insert(alpha, k, value):
    return tuple(alpha[:k]) + (value,) + tuple(alpha[k:])


def _close(a, b, tol):
    if a.shape != b.shape:
        return False
    if a.size == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return bool(np.max(np.abs(a - b)) <= tol * scale)


@dataclass(frozen=True, eq=False)
class MetrizedCube:
    n: int
    dims: dict
    grams: dict
    arrows: dict

    def __post_init__(self):
        for alpha in vertices(self.n):
            d = self.dims[alpha]
            if self.grams[alpha].shape != (d, d):
                raise ShapeError(f"Gram at {alpha} has shape {self.grams[alpha].shape}, expected {(d, d)}")
            for k in range(self.n):
                if alpha[k] < 1:
                    shape = (self.dims[_bump(alpha, k)], d)
                    if self.arrows[alpha, k].shape != shape:
                        raise ShapeError(f"arrow {alpha} along axis {k + 1} has shape "
                                         f"{self.arrows[alpha, k].shape}, expected {shape}")

    # construction helpers

    @classmethod
    def build(cls, n, dims, grams, arrows):
        """Normalize containers to complex arrays and construct."""
        dims = {tuple(a): int(d) for a, d in dims.items()}
        grams = {tuple(a): np.asarray(g, dtype=complex).reshape(dims[tuple(a)], dims[tuple(a)])
                 for a, g in grams.items()}
        arr = {}
        for (a, k), m in arrows.items():
            a = tuple(a)
            arr[a, k] = np.asarray(m, dtype=complex).reshape(dims[_bump(a, k)], dims[a])
        return cls(n, dims, grams, arr)

    @classmethod
    def point(cls, gram):
        """The 0-cube ``(C^d, gram)``."""
        g = np.atleast_2d(np.asarray(gram, dtype=complex))
        if g.size == 0:
            g = np.zeros((0, 0), dtype=complex)
        return cls.build(0, {(): g.shape[0]}, {(): g}, {})

    @classmethod
    def sequence(cls, h_sub, f, h_mid, g, h_quot):
        """The 1-cube ``(A, h_sub) --f--> (B, h_mid) --g--> (C, h_quot)``."""
        parts = [np.atleast_2d(np.asarray(h, dtype=complex)) for h in (h_sub, h_mid, h_quot)]
        parts = [p if p.size else np.zeros((0, 0), dtype=complex) for p in parts]
        d = [p.shape[0] for p in parts]
        return cls.build(1, {(-1,): d[0], (0,): d[1], (1,): d[2]},
                         {(-1,): parts[0], (0,): parts[1], (1,): parts[2]},
                         {((-1,), 0): np.reshape(np.asarray(f, dtype=complex), (d[1], d[0])),
                          ((0,), 0): np.reshape(np.asarray(g, dtype=complex), (d[2], d[1]))})

    @classmethod
    def zero(cls, n):
        dims = {a: 0 for a in vertices(n)}
        grams = {a: np.zeros((0, 0), dtype=complex) for a in dims}
        arrows = {(a, k): np.zeros((0, 0), dtype=complex)
                  for a in dims for k in range(n) if a[k] < 1}
        return cls(n, dims, grams, arrows)

    # accessors

    def arrow(self, alpha, i):
        """Arrow ``alpha -> alpha + e_i`` (``i`` 1-based)."""
        return self.arrows[tuple(alpha), i - 1]

    def composite(self, alpha, beta):
        """The map ``F(alpha -> beta)`` for ``alpha <= beta``, composed along axes in order."""
        alpha, beta = tuple(alpha), tuple(beta)
        if any(a > b for a, b in zip(alpha, beta)):
            raise PreconditionError(f"{alpha} is not below {beta}")
        m = np.eye(self.dims[alpha], dtype=complex)
        cur = alpha
        for k in range(self.n):
            while cur[k] < beta[k]:
                m = self.arrows[cur, k] @ m
                cur = _bump(cur, k)
        return m

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return all(d == 0 for d in self.dims.values())

    def signature(self):
        """Hashable structural key: degree and vertex dimensions."""
        return (self.n,) + tuple(self.dims[a] for a in vertices(self.n))

    def edges(self):
        """Yield ``(axis k 0-based, beta)`` for every edge along axis ``k``."""
        for k in range(self.n):
            for beta in vertices(self.n - 1):
                yield k, beta

    def validate(self, tol=1e-9):
        """Raise :class:`ExactnessError` naming the first failing square or edge."""
        for alpha in vertices(self.n):
            if self.dims[alpha] and not linalg.is_positive_definite(self.grams[alpha], 0.0):
                raise ExactnessError(f"metric at vertex {alpha} is not positive definite")
            for k in range(self.n):
                for l in range(k + 1, self.n):
                    if alpha[k] < 1 and alpha[l] < 1:
                        a = self.arrows[_bump(alpha, k), l] @ self.arrows[alpha, k]
                        b = self.arrows[_bump(alpha, l), k] @ self.arrows[alpha, l]
                        if not _close(a, b, tol):
                            raise ExactnessError(f"square at {alpha} on axes ({k + 1}, {l + 1}) "
                                                 "does not commute")
        for k, beta in self.edges():
            lo, mid = _insert(beta, k, -1), _insert(beta, k, 0)
            if not linalg.is_short_exact(self.arrows[lo, k], self.arrows[mid, k], tol):
                raise ExactnessError(f"edge along axis {k + 1} at {_insert(beta, k, '*')} "
                                     "is not short exact")
        return self

    def is_exact(self, tol=1e-9):
        try:
            self.validate(tol)
        except ExactnessError:
            return False
        return True


def cubes_close(F, G, tol=TOL):
    """Structural equality with Gram/arrow entries compared to relative ``tol``."""
    if F.n != G.n or F.signature() != G.signature():
        return False
    for a in vertices(F.n):
        if not _close(F.grams[a], G.grams[a], tol):
            return False
    for key, m in F.arrows.items():
        if not _close(m, G.arrows[key], tol):
            return False
    return True


def face(F, i, j):
    """The face with coordinate ``i`` (1-based) frozen to ``j``."""
    if not 1 <= i <= F.n:
        raise IndexError(f"face index {i} out of range for a {F.n}-cube")
    if j not in (-1, 0, 1):
        raise ValueError(f"face value must be -1, 0 or 1, got {j}")
    k = i - 1
    dims, grams, arrows = {}, {}, {}
    for b in vertices(F.n - 1):
        a = _insert(b, k, j)
        dims[b] = F.dims[a]
        grams[b] = F.grams[a]
        for l in range(F.n - 1):
            if b[l] < 1:
                arrows[b, l] = F.arrows[a, l if l < k else l + 1]
    return MetrizedCube(F.n - 1, dims, grams, arrows)


def degeneracy(F, i, j):
    """The degenerate ``(n+1)``-cube ``s^j_i F`` (``i`` in ``1..n+1``, ``j`` in ``{-1, 1}``).

    It vanishes where ``alpha_i == j`` and repeats ``F`` elsewhere, joined by
    identities along axis ``i``.
    """
    if not 1 <= i <= F.n + 1:
        raise IndexError(f"degeneracy index {i} out of range for a {F.n}-cube")
    if j not in (-1, 1):
        raise ValueError(f"degeneracy value must be -1 or 1, got {j}")
    k = i - 1
    n = F.n + 1
    dims, grams, arrows = {}, {}, {}
    for a in vertices(n):
        b = a[:k] + a[k + 1:]
        if a[k] == j:
            dims[a], grams[a] = 0, np.zeros((0, 0), dtype=complex)
        else:
            dims[a], grams[a] = F.dims[b], F.grams[b]
    for a in vertices(n):
        b = a[:k] + a[k + 1:]
        for l in range(n):
            if a[l] == 1:
                continue
            target = _bump(a, l)
            if l == k:
                if a[k] != j and target[k] != j:
                    arrows[a, l] = np.eye(dims[a], dtype=complex)
                else:
                    arrows[a, l] = np.zeros((dims[target], dims[a]), dtype=complex)
            elif a[k] == j:
                arrows[a, l] = np.zeros((0, 0), dtype=complex)
            else:
                arrows[a, l] = F.arrows[b, l if l < k else l - 1]
    return MetrizedCube(n, dims, grams, arrows)


def is_degenerate(F, tol=TOL):
    """True iff ``F`` equals ``s^j_i G`` for some ``i, j, G``.

    Zero cubes of every degree count as degenerate (the zero 0-cube is the
    boundary of ``s^1_1`` of any 0-cube).
    """
    if F.is_zero():
        return True
    for k in range(F.n):
        for j in (-1, 1):
            keep = (0, 1) if j == -1 else (-1, 0)
            if _slice_is_degenerate(F, k, j, keep, tol):
                return True
    return False


def _slice_is_degenerate(F, k, j, keep, tol):
    lo, hi = keep
    for b in vertices(F.n - 1):
        if F.dims[_insert(b, k, j)]:
            return False
    for b in vertices(F.n - 1):
        a_lo, a_hi = _insert(b, k, lo), _insert(b, k, hi)
        if F.dims[a_lo] != F.dims[a_hi]:
            return False
        ident = F.arrows[a_lo, k]
        if not _close(ident, np.eye(F.dims[a_lo], dtype=complex), tol):
            return False
        if not _close(F.grams[a_lo], F.grams[a_hi], tol):
            return False
        for l in range(F.n):
            if l != k and b[l if l < k else l - 1] < 1:
                if not _close(F.arrows[a_lo, l], F.arrows[a_hi, l], tol):
                    return False
    return True


# induced metrics


def induced_quotient_metric(F, alpha, k):
    """Metric on vertex ``alpha`` (with ``alpha[k] == 1``) induced from ``alpha - e_k``."""
    src = _bump(alpha, k, -1)
    return linalg.quotient_metric(F.grams[src], F.arrows[src, k])


def is_emi(F, tol=1e-9):
    """True iff every ``alpha_i = 1`` vertex carries the metric induced from ``alpha_i = 0``."""
    for alpha in vertices(F.n):
        for k in range(F.n):
            if alpha[k] == 1 and F.dims[alpha]:
                if not _close(F.grams[alpha], induced_quotient_metric(F, alpha, k), tol):
                    return False
    return True


def _with_grams(F, grams):
    return MetrizedCube(F.n, F.dims, grams, F.arrows)


def induce_metrics(F):
    """Replace every metric off ``{alpha <= 0}`` by the induced quotient metric."""
    order = sorted(vertices(F.n), key=lambda a: sum(x == 1 for x in a))
    grams = dict(F.grams)
    for alpha in order:
        ones = [k for k in range(F.n) if alpha[k] == 1]
        if ones:
            k = ones[0]
            src = _bump(alpha, k, -1)
            grams[alpha] = linalg.quotient_metric(grams[src], F.arrows[src, k])
    return _with_grams(F, grams)


def complete_emi(n, dims, grams, arrows, tol=1e-9):
    """Build the unique emi cube from its ``alpha <= 0`` part.

    ``dims``/``grams`` are indexed by ``alpha <= 0`` and ``arrows`` by
    ``(alpha, k)`` (axis 0-based) with ``alpha + e_k <= 0``.  Vertices off
    ``{alpha <= 0}`` are built as quotients of the vertex obtained by lowering
    every ``1`` to ``0``, by the images of its neighbours one step down in
    those coordinates.
    """
    base = {tuple(a): int(d) for a, d in dims.items()}
    bgram = {tuple(a): np.asarray(g, dtype=complex).reshape(base[tuple(a)], base[tuple(a)])
             for a, g in grams.items()}
    barrow = {(tuple(a), k): np.asarray(m, dtype=complex).reshape(base[_bump(tuple(a), k)], base[tuple(a)])
              for (a, k), m in arrows.items()}
    nonpos = [a for a in vertices(n) if max(a, default=-1) <= 0]
    for a in nonpos:
        if a not in base:
            raise PreconditionError(f"missing vertex {a}")
        for k in range(n):
            if a[k] == -1 and (a, k) not in barrow:
                raise PreconditionError(f"missing arrow at {a} along axis {k + 1}")

    def low_map(beta, gamma):
        m = np.eye(base[beta], dtype=complex)
        cur = beta
        for k in range(n):
            while cur[k] < gamma[k]:
                m = barrow[cur, k] @ m
                cur = _bump(cur, k)
        return m

    quot = {}
    dims_out, grams_out = {}, {}
    for alpha in vertices(n):
        S = [k for k in range(n) if alpha[k] == 1]
        beta = tuple(0 if x == 1 else x for x in alpha)
        if not S:
            q = np.eye(base[beta], dtype=complex)
        else:
            imgs = [low_map(_bump(beta, k, -1), beta) for k in S]
            span = np.hstack(imgs) if imgs else np.zeros((base[beta], 0))
            K = linalg.image_basis(span)
            q = linalg.kernel_basis(K.conj().T).conj().T if K.shape[1] else np.eye(base[beta], dtype=complex)
        quot[alpha] = (beta, q)
        dims_out[alpha] = q.shape[0]
        grams_out[alpha] = bgram[beta] if not S else (
            linalg.quotient_metric(bgram[beta], q) if q.shape[0] else np.zeros((0, 0), dtype=complex))
    arrows_out = {}
    for alpha in vertices(n):
        beta, q = quot[alpha]
        for k in range(n):
            if alpha[k] == 1:
                continue
            tgt = _bump(alpha, k)
            tbeta, tq = quot[tgt]
            lift = q.conj().T  # q has orthonormal rows
            if alpha[k] == -1:
                phi = barrow[beta, k]
            else:
                phi = np.eye(base[beta], dtype=complex)
            arrows_out[alpha, k] = tq @ phi @ lift
    F = MetrizedCube(n, dims_out, grams_out, arrows_out)
    F.validate(tol)
    return F


def path_independence_residual(F):
    """Largest difference between the two inductions of the ``(1, 1)`` metric of a 2-cube.

    Only the metric at ``(0, 0)`` is used: it is pushed to ``(1, 0)`` and
    ``(0, 1)`` and from there to ``(1, 1)`` along the remaining axis.
    """
    if F.n != 2:
        raise PreconditionError("path independence is stated for 2-cubes")
    if F.dims[1, 1] == 0:
        return 0.0
    h = F.grams[0, 0]
    h10 = linalg.quotient_metric(h, F.arrows[(0, 0), 0])
    h01 = linalg.quotient_metric(h, F.arrows[(0, 0), 1])
    a = linalg.quotient_metric(h10, F.arrows[(1, 0), 1])
    b = linalg.quotient_metric(h01, F.arrows[(0, 1), 0])
    return float(np.max(np.abs(a - b)))


def perturbation_breaks_emi(F, factor=2.0, tol=1e-9):
    """For an emi cube: does rescaling each single nonzero vertex off ``{alpha <= 0}`` break emi?

    Returns ``(checked, all_broken)`` where ``checked`` counts the perturbed vertices.
    """
    checked, broken = 0, True
    for alpha in vertices(F.n):
        if max(alpha, default=-1) <= 0 or not F.dims[alpha]:
            continue
        grams = dict(F.grams)
        grams[alpha] = factor * grams[alpha]
        checked += 1
        if is_emi(_with_grams(F, grams), tol):
            broken = False
    return checked, broken


def lambda1(F, i):
    """Same cube with the metrics of the face ``alpha_i = 1`` replaced by induced ones."""
    k = i - 1
    grams = dict(F.grams)
    for alpha in vertices(F.n):
        if alpha[k] == 1:
            grams[alpha] = induced_quotient_metric(F, alpha, k)
    return _with_grams(F, grams)


def lambda2(F, i):
    """Correction cube: ``face(F,i,1) --id--> face(lambda1(F,i),i,1) --> 0`` along axis ``i``."""
    k = i - 1
    old = face(F, i, 1)
    new = face(lambda1(F, i), i, 1)
    dims, grams, arrows = {}, {}, {}
    for a in vertices(F.n):
        b = a[:k] + a[k + 1:]
        if a[k] == 1:
            dims[a], grams[a] = 0, np.zeros((0, 0), dtype=complex)
        else:
            dims[a] = old.dims[b]
            grams[a] = old.grams[b] if a[k] == -1 else new.grams[b]
    for a in vertices(F.n):
        b = a[:k] + a[k + 1:]
        for l in range(F.n):
            if a[l] == 1:
                continue
            if l == k:
                tgt = _bump(a, l)
                arrows[a, l] = (np.eye(dims[a], dtype=complex) if a[k] == -1
                                else np.zeros((dims[tgt], dims[a]), dtype=complex))
            elif a[k] == 1:
                arrows[a, l] = np.zeros((0, 0), dtype=complex)
            else:
                arrows[a, l] = old.arrows[b, l if l < k else l - 1]
    return MetrizedCube(F.n, dims, grams, arrows)


def tensor_cube(F, G):
    """Kronecker product cube ``(F ⊗ G)_{alpha, beta} = F_alpha ⊗ G_beta``."""
    n, m = F.n, G.n
    dims, grams, arrows = {}, {}, {}
    for a in vertices(n):
        for b in vertices(m):
            dims[a + b] = F.dims[a] * G.dims[b]
            grams[a + b] = np.kron(F.grams[a], G.grams[b])
    for a in vertices(n):
        for b in vertices(m):
            for k in range(n):
                if a[k] < 1:
                    arrows[a + b, k] = np.kron(F.arrows[a, k], np.eye(G.dims[b], dtype=complex))
            for k in range(m):
                if b[k] < 1:
                    arrows[a + b, n + k] = np.kron(np.eye(F.dims[a], dtype=complex), G.arrows[b, k])
    return MetrizedCube(n + m, dims, grams, arrows)


def scale_metrics(F, c):
    """Multiply every metric by the positive constant ``c``."""
    return _with_grams(F, {a: c * g for a, g in F.grams.items()})


# random generation


def split_cube(n, multiplicities):
    """Split exact cube built from pieces labelled by ``{-1, 1}^n``.

    Vertex ``alpha`` is the direct sum of the pieces ``gamma`` with
    ``gamma_i == alpha_i`` wherever ``alpha_i != 0``; arrows are the
    coordinate inclusions/projections.  Metrics are identities.
    """
    pieces = list(itertools.product((-1, 1), repeat=n))
    layout = {}
    for alpha in vertices(n):
        idx = []
        for p in pieces:
            if all(a == 0 or a == g for a, g in zip(alpha, p)):
                idx.extend((p, r) for r in range(multiplicities[p]))
        layout[alpha] = idx
    dims = {a: len(v) for a, v in layout.items()}
    arrows = {}
    for alpha in vertices(n):
        pos = {key: c for c, key in enumerate(layout[alpha])}
        for k in range(n):
            if alpha[k] < 1:
                tgt = _bump(alpha, k)
                m = np.zeros((dims[tgt], dims[alpha]), dtype=complex)
                for row, key in enumerate(layout[tgt]):
                    if key in pos:
                        m[row, pos[key]] = 1.0
                arrows[alpha, k] = m
    grams = {a: np.eye(d, dtype=complex) for a, d in dims.items()}
    return MetrizedCube(n, dims, grams, arrows)


def random_exact_cube(n, max_dim=2, seed=0, emi=True, rng=None):
    """Seeded random exact ``n``-cube.

    Piece multiplicities are drawn from ``0..max_dim``; every vertex gets a
    random change of basis and (on ``alpha <= 0``, or everywhere when
    ``emi=False``) a random positive-definite metric.  With ``emi=True`` the
    remaining metrics are the induced ones.
    """
    if n > 4:
        raise PreconditionError("random cubes are limited to n <= 4")
    rng = np.random.default_rng(seed) if rng is None else rng
    pieces = list(itertools.product((-1, 1), repeat=n))
    mult = {p: int(rng.integers(0, max_dim + 1)) for p in pieces}
    if n == 0:
        mult[()] = max(1, mult[()])
    elif sum(mult.values()) == 0:
        mult[pieces[int(rng.integers(len(pieces)))]] = 1
    if not emi and n:
        # keep the top vertex nonzero so the random metric there is visibly not induced
        top = (1,) * n
        mult[top] = max(1, mult[top])
    S = split_cube(n, mult)
    P = {a: linalg.random_invertible(d, rng) for a, d in S.dims.items()}
    Pinv = {a: np.linalg.inv(p) for a, p in P.items()}
    arrows = {(a, k): Pinv[_bump(a, k)] @ m @ P[a] for (a, k), m in S.arrows.items()}
    grams = {a: linalg.random_gram(d, rng) for a, d in S.dims.items()}
    F = MetrizedCube(n, dict(S.dims), grams, arrows)
    return induce_metrics(F) if emi else F


# JSON


def _encode_matrix(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _decode_matrix(data, rows, cols, what):
    arr = np.array([[complex(e[0], e[1]) if isinstance(e, (list, tuple)) else complex(e)
                     for e in row] for row in data], dtype=complex) if len(data) else np.zeros((0, cols))
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=complex)
    if arr.shape != (rows, cols):
        raise ShapeError(f"{what}: expected shape {(rows, cols)}, got {arr.shape}")
    return arr


def _key(alpha):
    return ",".join(str(x) for x in alpha)


def cube_to_json(F):
    """Serialize to the cube JSON schema (all vertices, ``emi_complete = false``)."""
    out = {"n": F.n, "emi_complete": False, "vertices": {}, "arrows": {}}
    for a in vertices(F.n):
        out["vertices"][_key(a)] = {"dim": F.dims[a], "gram": _encode_matrix(F.grams[a])}
    for (a, k), m in sorted(F.arrows.items()):
        out["arrows"][f"{_key(a)}->{_key(_bump(a, k))}"] = _encode_matrix(m)
    return out


def cube_from_json(data):
    """Parse the cube JSON schema; applies emi completion when requested."""
    try:
        n = int(data["n"])
        emi = bool(data.get("emi_complete", False))
        verts = data["vertices"]
        arrs = data.get("arrows", {})
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"cube JSON missing field: {exc}") from None
    if n < 0:
        raise ShapeError("n must be non-negative")

    def parse_alpha(s):
        s = s.strip()
        alpha = tuple(int(x) for x in s.split(",")) if s else ()
        if len(alpha) != n or any(x not in (-1, 0, 1) for x in alpha):
            raise ShapeError(f"bad vertex index {s!r} for n={n}")
        return alpha

    dims, grams = {}, {}
    for key, v in verts.items():
        a = parse_alpha(key)
        d = int(v["dim"])
        dims[a] = d
        grams[a] = _decode_matrix(v.get("gram", []), d, d, f"gram at {key}")
    arrows = {}
    for key, m in arrs.items():
        src, _, dst = key.partition("->")
        a, b = parse_alpha(src), parse_alpha(dst)
        diff = [y - x for x, y in zip(a, b)]
        if sorted(diff) != [0] * (n - 1) + [1]:
            raise ShapeError(f"arrow {key!r} is not a unit step")
        k = diff.index(1)
        if a not in dims or b not in dims:
            raise ShapeError(f"arrow {key!r} references a missing vertex")
        arrows[a, k] = _decode_matrix(m, dims[b], dims[a], f"arrow {key}")
    if emi:
        return complete_emi(n, {a: d for a, d in dims.items() if max(a, default=-1) <= 0},
                            {a: g for a, g in grams.items() if max(a, default=-1) <= 0},
                            {(a, k): m for (a, k), m in arrows.items() if max(_bump(a, k), default=-1) <= 0})
    missing = [a for a in vertices(n) if a not in dims]
    if missing:
        raise ShapeError(f"missing vertices {missing}")
    for a in vertices(n):
        for k in range(n):
            if a[k] < 1 and (a, k) not in arrows:
                raise ShapeError(f"missing arrow {_key(a)}->{_key(_bump(a, k))}")
    return MetrizedCube(n, dims, grams, arrows)
