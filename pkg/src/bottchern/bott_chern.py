"""Bott-Chern numbers and functions of metrized exact cubes.

The Chern character of an exact ``n``-cube is obtained in three steps: the
cube is replaced by its ``lambda`` image (a chain of emi cubes), each emi
cube gives the transgression bundle over ``(P^1)^n``, and the Chern form
``tr exp(-K)`` of that bundle is integrated against a log-type kernel on
the fiber.

Two targets are provided.  ``"W"`` pairs with the closed form of
``I'(W_n)`` and yields a single complex number per cube.  ``"TW"`` keeps the
Thom-Whitney structure: the Chern form is embedded as ``(ch, ch, 1 ⊗ ch)``,
cupped with ``W_n`` and integrated, giving a :class:`TWValue`.

Over a point only odd ``n`` pair nontrivially with ``I'(W_n)``: for even
``n`` the degree count rules out a top-degree integrand, so the ``W`` value
is zero without quadrature (the ``TW`` target still integrates).
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import chains
from . import cubes as _cubes
from . import linalg
from .chern_weil import ch0_point
from .errors import PreconditionError, ScopeError
from .expr import MetricFamilyExpr
from .fiber_forms import evaluate_at, i_prime
from .quadrature import QuadratureScheme, default_scheme, integrate_fiber_many, w_triple_components
from .transgression import BundleFamily

MAX_N = 3

# finite-difference settings for the fiber Chern forms: one fiber factor can
# afford Richardson extrapolation, more factors use the plain stencil
FIBER_STEPS = {1: (1e-3, True), 2: (1e-4, False), 3: (1e-4, False)}


@dataclass
class TWValue:
    """Value of a Thom-Whitney pairing over a point.

    ``r`` and ``f`` are the numbers from the two ends, ``p`` and ``q`` are
    the ascending ``ε``-coefficients of the ``1`` and ``dε`` parts of the
    middle component.
    """

    r: complex
    f: complex
    p: list
    q: list

    @classmethod
    def constant(cls, c):
        return cls(complex(c), complex(c), [complex(c)], [])

    def scale(self, c):
        return TWValue(c * self.r, c * self.f, [c * x for x in self.p], [c * x for x in self.q])

    def __add__(self, other):
        return TWValue(self.r + other.r, self.f + other.f, _padd(self.p, other.p), _padd(self.q, other.q))

    def __sub__(self, other):
        return self + other.scale(-1)

    def cup(self, other):
        """``(r r', f f', ω ω')`` with ``dε ∧ dε = 0``."""
        p = _pmul(self.p, other.p)
        q = _padd(_pmul(self.p, other.q), _pmul(self.q, other.p))
        return TWValue(self.r * other.r, self.f * other.f, p, q)

    def max_abs(self):
        return float(max([abs(self.r), abs(self.f)] + [abs(x) for x in self.p + self.q]))

    def endpoint_residual(self):
        """``|p(0) - r| + |p(1) - f|``."""
        p0 = self.p[0] if self.p else 0j
        return abs(p0 - self.r) + abs(sum(self.p) - self.f)

    def to_json(self):
        def enc(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {"r": enc(self.r), "f": enc(self.f), "eps": [enc(z) for z in self.p],
                "deps": [enc(z) for z in self.q]}


def _padd(a, b):
    size = max(len(a), len(b))
    return [(a[k] if k < len(a) else 0j) + (b[k] if k < len(b) else 0j) for k in range(size)]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0j] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@dataclass
class BottChernResult:
    """A Bott-Chern number (target ``W``) or Thom-Whitney value (target ``TW``)."""

    value: object
    n: int
    target: str
    sigma: int
    truncation: float
    scheme: object = None
    terms: int = 0
    notes: list = field(default_factory=list)
    runtime: float = 0.0

    def to_json(self):
        if isinstance(self.value, TWValue):
            value = self.value.to_json()
        else:
            value = [float(np.real(self.value)), float(np.imag(self.value))]
        scheme = None
        if isinstance(self.scheme, QuadratureScheme):
            scheme = {"radial": self.scheme.radial, "angular": self.scheme.angular,
                      "cutoff": self.scheme.cutoff, "rule": self.scheme.rule}
        return {"n": self.n, "target": self.target, "value": value, "sigma": self.sigma,
                "truncation": self.truncation, "scheme": scheme, "terms": self.terms,
                "notes": list(self.notes), "runtime": self.runtime}


def _check_scope(n):
    if n > MAX_N:
        raise ScopeError(f"cube dimension {n} exceeds the supported bound {MAX_N}")


def _zero_value(target):
    return 0j if target == "W" else TWValue(0j, 0j, [], [])


def _kernels(n, target):
    if target == "W":
        return [i_prime(n).form]
    r, f, X, Y = w_triple_components(n)
    return [r, f] + [form for _, form in X] + [form for _, form in Y]


def _assemble(n, target, values):
    if target == "W":
        return values[0]
    r, f, X, Y = w_triple_components(n)
    p = [0j] * (max((k for k, _ in X), default=-1) + 1)
    q = [0j] * (max((k for k, _ in Y), default=-1) + 1)
    rest = values[2:]
    for (k, _), v in zip(X, rest[:len(X)]):
        p[k] += v
    for (k, _), v in zip(Y, rest[len(X):]):
        q[k] += v
    return TWValue(values[0], values[1], p, q)


def chern_form_integrand(family, s=0.0, step=None, richardson=None):
    """Pointwise ``tr exp(-K)`` of the transgression bundle along the fiber.

    Returns ``ch(x, chart)`` usable by the fiber integrators; in each chart
    pattern the Gram is expressed in the adapted constant frame.
    """
    n = family.n
    default_step, default_rich = FIBER_STEPS.get(n, (1e-4, False))
    step = default_step if step is None else step
    richardson = default_rich if richardson is None else richardson
    frames = {}

    def ch(x, chart):
        chart = tuple(chart)
        if chart not in frames:
            frames[chart] = family.frame(chart)
        C = frames[chart]

        def H(z):
            return family.gram(s, z, chart, C)

        return ch0_point(H, x, step, richardson)

    return ch


def emi_cube_value(F, target="W", scheme=None, s=0.0, base_metrics=None, step=None, richardson=None):
    """Pairing of one emi cube (no ``lambda`` applied); returns ``(value, truncation)``."""
    n = F.n
    _check_scope(n)
    if n == 0:
        G = BundleFamily(F, base_metrics, check_emi=False).block_gram(s)
        rank = float(G.shape[-1])
        return (rank + 0j if target == "W" else TWValue.constant(rank)), 0.0
    family = BundleFamily(F, base_metrics, check_emi=base_metrics is None)
    if family.rank == 0:
        return _zero_value(target), 0.0
    if target == "W" and n % 2 == 0 and base_metrics is None:
        # ch_0 over a point has even fiber degrees and the kernel has degree
        # n - 1, so no product reaches the top degree 2n
        return 0j, 0.0
    scheme = default_scheme(n) if scheme is None else scheme
    ch = chern_form_integrand(family, s, step, richardson)
    kernels = _kernels(n, target)

    def integrand(x, chart):
        form = ch(x, chart)
        return [form.wedge(evaluate_at(k, x, chart)) for k in kernels]

    results = integrate_fiber_many(integrand, n, scheme, charts=True, strict=False)
    values = [r.value for r in results]
    trunc = max((r.truncation for r in results), default=0.0)
    return _assemble(n, target, values), trunc


def ch_of_chain(c, target="W", scheme=None, step=None, richardson=None):
    """Chern character of a chain of exact cubes over a point, per degree.

    ``lambda`` is applied first, so non-emi terms are allowed.  Returns a
    dict mapping each degree present in ``c`` to a :class:`BottChernResult`.
    """
    if target not in ("W", "TW"):
        raise PreconditionError(f"unknown target {target!r}")
    if isinstance(c, _cubes.MetrizedCube):
        c = chains.ChainElement.of(c)
    out = {}
    degrees = sorted({cube.n for cube, _ in c.terms})
    for n in degrees:
        _check_scope(n)
    for n in degrees:
        start = time.perf_counter()
        part = chains.ChainElement([(cube, k) for cube, k in c.terms if cube.n == n], c.tol)
        reduced = chains.lambda_total(part)
        total = _zero_value(target)
        trunc = 0.0
        notes = []
        if reduced.is_zero():
            notes.append("degenerate: reduced in chain")
        for cube, coeff in reduced:
            val, tr = emi_cube_value(cube, target, scheme, step=step, richardson=richardson)
            total = total + (val * coeff if target == "W" else val.scale(coeff))
            trunc += abs(coeff) * tr
        if n > 0 and n % 2 == 0 and target == "W":
            notes.append("even n over a point: pairing vanishes by type")
        sigma = i_prime(n).sigma if n >= 1 else 1
        out[n] = BottChernResult(total, n, target, sigma, trunc, scheme or (default_scheme(n) if n else None),
                                 len(reduced), notes, time.perf_counter() - start)
    return out


def bott_chern(F, target="W", scheme=None, step=None, richardson=None):
    """:class:`BottChernResult` of a single exact cube over a point."""
    _check_scope(F.n)
    res = ch_of_chain(chains.ChainElement([(F, 1)], drop_degenerate=False), target, scheme, step, richardson)
    if F.n in res:
        return res[F.n]
    return BottChernResult(_zero_value(target), F.n, target, i_prime(F.n).sigma if F.n else 1, 0.0,
                           scheme, 0, ["degenerate: reduced in chain"])


def bott_chern_value(F, target="W", scheme=None):
    """Shortcut for ``bott_chern(F).value``."""
    return bott_chern(F, target, scheme).value


def ch_of_s_chain(chain, target="W", scheme=None):
    """Chern character of a chain of S-simplices: ``Cub``, then ``lambda``, then ``ch``."""
    from .waldhausen import cub_chain

    return ch_of_chain(cub_chain(chain), target, scheme)


# closed-form examples


def line_cube(b, a):
    """The 1-cube ``0 -> (C, b) --id--> (C, a) -> 0``."""
    return _cubes.MetrizedCube.sequence([[b]], [[1]], [[a]], np.zeros((0, 1)), np.zeros((0, 0)))


def line_value(x, scheme=None):
    """``ch_1`` of ``0 -> (C, x) -> (C, 1) -> 0`` (expected ``-log(x)/2``)."""
    return bott_chern(line_cube(x, 1.0), "W", scheme).value


# verifiers


def verify_cocycle(F, scheme=None):
    """``|Σ_{i,j} (-1)^{i+j} ch_1(face(F, i, j))|`` for an emi 2-cube over a point."""
    if F.n != 2:
        raise PreconditionError("cocycle check takes a 2-cube")
    total = 0j
    for i in (1, 2):
        for j in (-1, 0, 1):
            face = _cubes.face(F, i, j)
            total += (-1) ** (i + j) * bott_chern(face, "W", scheme).value
    return abs(total)


def verify_multiplicativity(F, G, scheme=None):
    """Residual of ``ch(F ⊗ G)_TW = ch(F)_TW ∪ ch(G)_TW`` over a point (``n + m <= 2``)."""
    if F.n + G.n > 2:
        raise ScopeError("multiplicativity is checked for n + m <= 2")
    whole = bott_chern(_cubes.tensor_cube(F, G), "TW", scheme).value
    a = bott_chern(F, "TW", scheme).value
    b = bott_chern(G, "TW", scheme).value
    return (whole - a.cup(b)).max_abs()


def verify_log_additivity(scheme=None, c=3.0, x=2.0, y=5.0):
    """Residuals of ``g(4) - 2 g(2)`` and ``g(cx) - g(cy) - (g(x) - g(y))``."""
    g = {v: line_value(v, scheme) for v in (4.0, 2.0, c * x, c * y, x, y)}
    first = abs(g[4.0] - 2 * g[2.0])
    second = abs(g[c * x] - g[c * y] - (g[x] - g[y]))
    return max(first, second)


# the ddbar identity over a one-dimensional base


@dataclass
class SequenceFamily:
    """A short exact sequence ``A --f--> B --g--> C`` with metrics depending on ``s``.

    ``sub`` and ``mid`` are :class:`MetricFamilyExpr` (or callables
    ``s -> Gram``); ``quot`` may be ``None`` for the induced quotient metric.
    """

    sub: object
    mid: object
    f: np.ndarray
    g: np.ndarray
    quot: object = None

    @classmethod
    def from_json(cls, data):
        def fam(entry):
            return None if entry is None else MetricFamilyExpr(entry)

        f = np.asarray([[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in data["f"]])
        g = np.asarray([[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in data["g"]])
        return cls(fam(data["sub"]), fam(data["mid"]), f, g, fam(data.get("quot")))

    def induced(self, s):
        """Induced quotient metric ``(g H^{-1} g^*)^{-1}`` batched over ``s``."""
        H = np.asarray(self.mid(s), dtype=complex)
        g = np.asarray(self.g, dtype=complex)
        inner = g @ np.linalg.solve(H, np.broadcast_to(g.conj().T, H.shape[:-2] + g.conj().T.shape))
        return np.linalg.inv(inner)

    def quotient(self, s):
        return self.induced(s) if self.quot is None else np.asarray(self.quot(s), dtype=complex)

    def template(self, s0=0.0):
        return _cubes.MetrizedCube.sequence(self.sub(s0), self.f, self.mid(s0), self.g, self.quotient(s0))

    def validate(self, points):
        points = np.asarray(points, dtype=complex)
        for name, fam in (("sub", self.sub), ("mid", self.mid), ("quot", self.quot)):
            if fam is None:
                continue
            G = np.asarray(fam(points), dtype=complex)
            for idx in np.ndindex(points.shape):
                if not linalg.is_positive_definite(G[idx], tol=0.0):
                    raise PreconditionError(f"metric family {name!r} is not positive-definite at s={points[idx]}")
        if not linalg.is_short_exact(self.f, self.g):
            raise PreconditionError("the maps f, g do not form a short exact sequence")


def family_ch1(fam, s, scheme=None, step=None, richardson=None):
    """``ch_1`` of the family at the base point ``s`` (a scalar).

    If the quotient metric is not the induced one the ``lambda`` correction
    ``(C, h_quot) --id--> (C, h_induced) -> 0`` is added.
    """
    scheme = scheme or EQ2_SCHEME
    F = fam.template(s)
    metrics = {(-1,): fam.sub, (0,): fam.mid}
    value, _ = emi_cube_value(F, "W", scheme, s=s, base_metrics=metrics, step=step, richardson=richardson)
    if fam.quot is not None:
        d = fam.g.shape[0]
        corr = _cubes.MetrizedCube.sequence(fam.quot(s), np.eye(d), fam.induced(s), np.zeros((0, d)),
                                            np.zeros((0, 0)))
        cvalue, _ = emi_cube_value(corr, "W", scheme, s=s,
                                   base_metrics={(-1,): fam.quot, (0,): fam.induced},
                                   step=step, richardson=richardson)
        value += cvalue
    return value


EQ2_SCHEME = QuadratureScheme(128, 4, 16.0)


def _laplacian_weights(h):
    # fourth-order central second difference
    return [(-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12)], h ** 2


def eq2_sides(fam, grid, h=0.0125, scheme=None):
    """Both sides of ``-2 ∂∂̄ ch_1 = ch_0(A) + ch_0(C) - ch_0(B)`` on the grid.

    Returns ``(lhs, rhs)``: arrays of the ``ds ∧ ds̄`` coefficients at the
    grid points.  The left side differentiates fiber-quadrature values of
    ``ch_1`` with a fourth-order stencil of spacing ``h``.
    """
    grid = np.asarray(grid, dtype=complex)
    weights, denom = _laplacian_weights(h)
    cache = {}

    def value(s):
        key = (round(s.real, 12), round(s.imag, 12))
        if key not in cache:
            cache[key] = family_ch1(fam, s, scheme)
        return cache[key]

    lhs = np.zeros(grid.shape, dtype=complex)
    for idx in np.ndindex(grid.shape):
        s = complex(grid[idx])
        lap = 0j
        for direction in (1.0, 1j):
            for k, w in weights:
                lap += w * value(s + k * h * direction)
        # ∂_s ∂_s̄ = Δ/4
        lhs[idx] = -2 * 0.25 * lap / denom

    def ch0_part(metric):
        def H(z):
            return np.asarray(metric(z[..., 0]), dtype=complex)

        form = ch0_point(H, grid.reshape(-1, 1), 1e-3, True)
        return form.coefficient((0, 1)).reshape(grid.shape)

    rhs = ch0_part(fam.sub) + ch0_part(fam.quotient) - ch0_part(fam.mid)
    return lhs, rhs


def base_grid(points=9, radius=0.5):
    xs = np.linspace(-radius, radius, points)
    return xs[:, None] + 1j * xs[None, :]


def verify_eq2(fam, grid=None, h=0.0125, scheme=None):
    """Largest grid residual between the two sides of the ``∂∂̄`` identity."""
    grid = base_grid() if grid is None else grid
    fam.validate(grid)
    lhs, rhs = eq2_sides(fam, grid, h, scheme)
    return float(np.max(np.abs(lhs - rhs)))


def eq2_families():
    """Two rank-one families and one rank-two family used by the verifier suite."""
    e1 = np.array([[1.0], [0.0]])
    p2 = np.array([[0.0, 1.0]])
    return {
        "exp-weight": SequenceFamily(MetricFamilyExpr.scalar("exp(1/(1+s*sbar))"), MetricFamilyExpr.scalar("1"),
                                     np.eye(1), np.zeros((0, 1))),
        "linear-weights": SequenceFamily(MetricFamilyExpr.scalar("2+s*sbar"),
                                         MetricFamilyExpr.scalar("1+3*s*sbar"), np.eye(1), np.zeros((0, 1))),
        "rank-two": SequenceFamily(MetricFamilyExpr.scalar("1+s*sbar"),
                                   MetricFamilyExpr([["2+s*sbar", "1/2*s"], ["1/2*sbar", "1+1/2*s*sbar"]]),
                                   e1, p2),
    }


def closed_form_line(b, a):
    """``-log(b/a)/2``, the value of ``0 -> (C, b) -> (C, a) -> 0``."""
    return -0.5 * math.log(b / a)
