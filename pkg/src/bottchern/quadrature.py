"""Integration over ``(P^1)^n`` fibers and the currents of the ``W_n`` forms.

Each factor is parametrized by ``t = exp(u + iθ)``, so ``dt/t = du + i dθ``
and ``log|t|^2 = 2u``; the area element is ``dt ∧ dt̄ = -2i |t|^2 du ∧ dθ``.
By default the radial variable uses the midpoint rule on ``[-U, U]``:
integrands here are analytic in a strip around the real ``u`` axis and decay
exponentially, so the equispaced rule converges geometrically (much faster
than Gauss–Legendre over the same long interval).  Gauss–Legendre is still
available.  The angular rule is the periodic trapezoid rule.

With ``charts=True`` nodes with ``u > 0`` in a factor are handed to the
integrand in the chart at infinity (coordinate ``tau = 1/t``), which keeps
Gram matrices well conditioned near ``t = ∞``.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeError, PreconditionError, ScopeError
from .pointforms import PointForm, merge_words

CHUNK = 4096


@dataclass(frozen=True)
class QuadratureScheme:
    """Tensor rule per factor: ``radial`` nodes in ``u``, ``angular`` nodes in ``θ``."""

    radial: int = 128
    angular: int = 64
    cutoff: float = 16.0
    rule: str = "midpoint"

    def __post_init__(self):
        if self.radial < 2 or self.angular < 1 or self.cutoff <= 0:
            raise ValueError("need radial >= 2, angular >= 1 and a positive cutoff")
        if self.angular > 1 and self.angular % 2:
            raise ValueError("angular node count must be even")
        if self.rule not in ("midpoint", "gauss-legendre"):
            raise ValueError(f"unknown radial rule {self.rule!r}")

    def radial_nodes(self):
        U = self.cutoff
        if self.rule == "midpoint":
            h = 2 * U / self.radial
            u = -U + h * (np.arange(self.radial) + 0.5)
            return u, np.full(self.radial, h)
        x, w = np.polynomial.legendre.leggauss(self.radial)
        return U * x, U * w

    def angular_nodes(self):
        theta = 2 * np.pi * np.arange(self.angular) / self.angular
        return theta, np.full(self.angular, 2 * np.pi / self.angular)

    def doubled(self):
        return QuadratureScheme(2 * self.radial, 2 * self.angular, self.cutoff, self.rule)


DEFAULT_SCHEMES = {
    1: QuadratureScheme(128, 64, 16.0),
    2: QuadratureScheme(48, 4, 12.0),
    3: QuadratureScheme(24, 2, 10.0),
}


def default_scheme(n):
    if n not in DEFAULT_SCHEMES:
        raise ScopeError(f"fiber dimension {n} is outside the supported range 1..3")
    return DEFAULT_SCHEMES[n]


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    truncation: float
    nodes: int
    scheme: QuadratureScheme


def top_word(n):
    return tuple(range(2 * n))


def _factor_nodes(scheme):
    u, wu = scheme.radial_nodes()
    th, wt = scheme.angular_nodes()
    uu, tt = np.meshgrid(u, th, indexing="ij")
    w = np.outer(wu, wt).ravel()
    outer = np.abs(uu.ravel()) >= 0.9 * scheme.cutoff
    return uu.ravel(), tt.ravel(), w, outer


def integrate_fiber(integrand, n, scheme=None, charts=False, chunk=CHUNK, strict=True):
    """``(2πi)^{-n} ∫_{(P^1)^n}`` of the top-degree part of ``integrand``.

    ``integrand(x, chart)`` receives chart coordinates ``x`` of shape
    ``(B, n)`` and a tuple of booleans (``True`` = coordinate ``1/t``) and
    returns a batched :class:`PointForm`.  The result also carries a
    truncation estimate: the summed magnitude of contributions from the
    outermost 10% of the radial range.  With ``strict=False`` an integrand
    without a top-degree part integrates to zero instead of raising.
    """
    def wrapped(x, chart):
        return [integrand(x, chart)]

    return integrate_fiber_many(wrapped, n, scheme, charts, chunk, strict)[0]


def integrate_fiber_many(integrand, n, scheme=None, charts=False, chunk=CHUNK, strict=True):
    """Like :func:`integrate_fiber` for an integrand returning a list of forms.

    Sharing the node loop lets expensive pointwise data (curvature, say) be
    paired against several kernels at once.  Returns one
    :class:`QuadratureResult` per form.
    """
    if n == 0:
        vals = integrand(np.zeros((1, 0), dtype=complex), ())
        return [QuadratureResult(complex(v.coefficient(())[0]), 0.0, 1, scheme) for v in vals]
    scheme = default_scheme(n) if scheme is None else scheme
    u, th, w, outer = _factor_nodes(scheme)
    m = len(u)
    word = top_word(n)
    re_parts, im_parts, trunc = None, None, None
    count = 0
    patterns = list(itertools.product((False, True), repeat=n)) if charts else [(False,) * n]
    for pattern in patterns:
        # node indices per factor compatible with this chart pattern
        if charts:
            sel = [np.nonzero((u > 0) == flag)[0] for flag in pattern]
        else:
            sel = [np.arange(m)] * n
        sizes = [len(s) for s in sel]
        total = int(np.prod(sizes))
        if total == 0:
            continue
        for start in range(0, total, chunk):
            flat = np.arange(start, min(start + chunk, total))
            idx = np.unravel_index(flat, sizes)
            cols = [sel[k][idx[k]] for k in range(n)]
            x = np.empty((len(flat), n), dtype=complex)
            weight = np.ones(len(flat))
            is_outer = np.zeros(len(flat), dtype=bool)
            jac = np.ones(len(flat), dtype=complex)
            for k in range(n):
                uk, tk = u[cols[k]], th[cols[k]]
                if pattern[k]:
                    x[:, k] = np.exp(-uk - 1j * tk)
                else:
                    x[:, k] = np.exp(uk + 1j * tk)
                weight = weight * w[cols[k]]
                is_outer |= outer[cols[k]]
                jac = jac * (-2j) * np.abs(x[:, k]) ** 2
            forms = integrand(x, pattern)
            if re_parts is None:
                re_parts = [[] for _ in forms]
                im_parts = [[] for _ in forms]
                trunc = [0.0] * len(forms)
            for r, form in enumerate(forms):
                if strict and form.terms and word not in form.terms and max(len(w) for w in form.terms) < 2 * n:
                    raise DegreeError("integrand has no top-degree component")
                c = form.coefficient(word)
                if np.shape(c) != (len(flat),):
                    c = np.broadcast_to(c, (len(flat),))
                contrib = c * jac * weight
                re_parts[r].append(float(np.sum(contrib.real)))
                im_parts[r].append(float(np.sum(contrib.imag)))
                trunc[r] += float(np.sum(np.abs(contrib[is_outer])))
            count += len(flat)
    norm = (2j * np.pi) ** n
    out = []
    for r in range(len(re_parts or [])):
        value = complex(math.fsum(re_parts[r]), math.fsum(im_parts[r])) / norm
        out.append(QuadratureResult(value, trunc[r] / (2 * np.pi) ** n, count, scheme))
    return out


def pair_with_current(n, family, kernel, scheme=None, charts=True):
    """``(2πi)^{-n} ∫ family ∧ kernel``.

    ``family(x, chart)`` returns a batched :class:`PointForm`; ``kernel`` is
    a symbolic ε-free fiber form (for instance the ``I'(W_n)`` closed form),
    evaluated in the same chart.  For ``n = 0`` this is plain evaluation.
    """
    from .fiber_forms import evaluate_at

    if n == 0:
        val = family(np.zeros((1, 0), dtype=complex), ())
        return QuadratureResult(complex(val.coefficient(())[0]), 0.0, 1, scheme)

    def integrand(x, chart):
        return family(x, chart).wedge(evaluate_at(kernel, x, chart))

    return integrate_fiber(integrand, n, scheme, charts)


# exterior derivative and face restriction of explicit test forms


def exterior_derivative(phi, x, step=1e-5):
    """Numeric ``dφ`` at points ``x`` (shape ``(B, m)``) by central differences.

    ``phi(x)`` returns a batched :class:`PointForm` with generators
    ``dz_c = 2c`` and ``dz̄_c = 2c + 1``.
    """
    x = np.asarray(x, dtype=complex)
    B, m = x.shape
    base = phi(x)
    out = PointForm({}, (B,))
    for c in range(m):
        h = step * (1.0 + np.abs(x[:, c]))
        derivs = {}
        for d, name in ((1.0, "x"), (1j, "y")):
            xp, xm = x.copy(), x.copy()
            xp[:, c] += d * h
            xm[:, c] -= d * h
            fp, fm = phi(xp), phi(xm)
            words = set(fp.terms) | set(fm.terms) | set(base.terms)
            derivs[name] = {w: (fp.coefficient(w) - fm.coefficient(w)) / (2 * h) for w in words}
        words = derivs["x"].keys()
        for w in words:
            dz = 0.5 * (derivs["x"][w] - 1j * derivs["y"][w])
            dzb = 0.5 * (derivs["x"][w] + 1j * derivs["y"][w])
            for g, coeff in ((2 * c, dz), (2 * c + 1, dzb)):
                sign, merged = merge_words((g,), w)
                if sign:
                    out = out + PointForm({merged: sign * coeff}, (B,))
    return out


def restrict_to_face(phi, i, j, far=1e8):
    """Pull back ``φ`` to the face ``t_i = 0`` (``j = 0``) or ``t_i = ∞`` (``j = 1``).

    The returned callable takes points with one fewer coordinate; terms
    containing ``dt_i`` or ``dt̄_i`` are dropped and higher generators are
    renumbered.  The point at infinity is approximated by ``t_i = far``.
    """
    k = i - 1
    value = 0.0 if j == 0 else far

    def restricted(y):
        y = np.asarray(y, dtype=complex)
        full = np.insert(y, k, value, axis=-1)
        form = phi(full)
        out = {}
        for w, v in form.terms.items():
            if 2 * k in w or 2 * k + 1 in w:
                continue
            nw = tuple(g if g < 2 * k else g - 2 for g in w)
            out[nw] = out[nw] + v if nw in out else v
        return PointForm(out, form.shape)

    return restricted


def w_triple_components(n):
    """The symbolic ``(W^1, W^2, ε-part polys, dε-part polys)`` of ``W_n``.

    The ε-parts are returned as lists of ``(power, form)`` with
    ``W^3 = Σ ε^k X_k + Σ ε^k dε Y_k``.
    """
    from .fiber_forms import SymbolicFiberForm, w_form

    W = w_form(n)
    xs, ys = {}, {}
    for key, c in W.w.terms.items():
        for k, coeff in enumerate(c.p):
            if coeff:
                xs.setdefault(k, {})[key] = coeff
        for k, coeff in enumerate(c.q):
            if coeff:
                ys.setdefault(k, {})[key] = coeff
    X = sorted((k, SymbolicFiberForm(v)) for k, v in xs.items())
    Y = sorted((k, SymbolicFiberForm(v)) for k, v in ys.items())
    return W.r, W.f, X, Y


def _pair(phi_or_dphi, kernel, n, scheme):
    """``(2πi)^{-n} ∫ φ ∧ kernel`` with ``φ`` given on the affine chart."""
    from .fiber_forms import evaluate_at

    def integrand(x, chart):
        return phi_or_dphi(x).wedge(evaluate_at(kernel, x))

    return integrate_fiber(integrand, n, scheme, charts=False, strict=False).value


def current_triple(n, phi, scheme=None, step=1e-5):
    """Evaluate ``d[W_n]`` on the test form ``φ`` component by component.

    Returns ``(c1, c2, p, q)``: the values for ``W^1`` and ``W^2`` and the
    ε-polynomials (ascending, complex coefficients) of the ``ε`` and ``dε``
    parts for ``W^3``.  The sign rule is ``dT(φ) = (-1)^{deg φ} T(dφ)`` for
    each homogeneous part of ``φ``, and ``d(p(ε) ⊗ T) = p'(ε) dε ⊗ T + p(ε) ⊗ dT``,
    ``d(q(ε) dε ⊗ T) = q(ε) dε ⊗ dT``.
    """
    scheme = scheme or QUADRATURE_TEST_SCHEMES[n]
    r, f, X, Y = w_triple_components(n)

    def dphi_signed(x):
        d = exterior_derivative(lambda y: phi(y), x, step)
        return PointForm({w: v * (-1) ** (len(w) - 1) for w, v in d.terms.items()}, d.shape)

    c1 = _pair(dphi_signed, r, n, scheme)
    c2 = _pair(dphi_signed, f, n, scheme)
    p = [0j] * (max((k for k, _ in X), default=0) + 1)
    q = [0j] * (max([k for k, _ in Y] + [k - 1 for k, _ in X if k > 0] + [0]) + 1)
    for k, form in X:
        p[k] += _pair(dphi_signed, form, n, scheme)
        if k > 0:
            q[k - 1] += k * _pair(phi, form, n, scheme)
    for k, form in Y:
        q[k] += _pair(dphi_signed, form, n, scheme)
    return c1, c2, p, q


def face_triple(n, phi, scheme=None, far=1e8):
    """``Σ_i Σ_j (-1)^{i+j} [W_{n-1}](φ restricted to face (i, j))`` in the same layout."""
    scheme_low = QUADRATURE_TEST_SCHEMES.get(n - 1)
    c1 = c2 = 0j
    p, q = [0j] * (n + 1), [0j] * (n + 1)
    for i in range(1, n + 1):
        for j in (0, 1):
            sign = (-1) ** (i + j)
            face = restrict_to_face(phi, i, j, far)
            if n == 1:
                val = complex(face(np.zeros((1, 0), dtype=complex)).coefficient(())[0])
                c1 += sign * val
                c2 += sign * val
                p[0] += sign * val
                continue
            r, f, X, Y = w_triple_components(n - 1)
            c1 += sign * _pair(face, r, n - 1, scheme_low)
            c2 += sign * _pair(face, f, n - 1, scheme_low)
            for k, form in X:
                p[k] += sign * _pair(face, form, n - 1, scheme_low)
            for k, form in Y:
                q[k] += sign * _pair(face, form, n - 1, scheme_low)
    return c1, c2, p, q


QUADRATURE_TEST_SCHEMES = {
    0: None,
    1: QuadratureScheme(128, 64, 16.0),
    2: QuadratureScheme(48, 16, 12.0),
}


def boundary_current_residual(n, phi, scheme=None, far=1e8):
    """Largest deviation in the boundary identity for ``[W_n]`` on the test form ``φ``.

    ``φ(t)`` returns a batched :class:`PointForm` on the affine chart that
    extends smoothly to ``(P^1)^n``; homogeneous parts of degree ``n - 1``
    exercise ``W^1``, ``W^2`` and the ``ε`` part of ``W^3``, parts of degree
    ``n`` exercise the ``dε`` part.
    """
    if n not in (1, 2):
        raise ScopeError("boundary identity is checked for n in {1, 2}")
    lhs = current_triple(n, phi, scheme)
    rhs = face_triple(n, phi, scheme, far)
    res = [abs(lhs[0] - rhs[0]), abs(lhs[1] - rhs[1])]
    for a, b in ((lhs[2], rhs[2]), (lhs[3], rhs[3])):
        size = max(len(a), len(b))
        a = list(a) + [0j] * (size - len(a))
        b = list(b) + [0j] * (size - len(b))
        res.extend(abs(x - y) for x, y in zip(a, b))
    return float(max(res))


# reference integrals on P^1


def tautological_degree(power=-1, scheme=None, step=1e-3):
    """``(2πi)^{-1} ∫_{P^1}`` of the degree-2 part of ``ch_0`` for ``h = (1 + |t|^2)^power``.

    ``power = -1`` is the weight of the line bundle ``I_x^{-1}`` and
    ``power = 1`` that of its dual.  Both charts use the same expression,
    which differs from the transformed metric by ``|τ|^{±2}``, a gauge factor
    that leaves the curvature unchanged.
    """
    from .chern_weil import ch0_point

    def H(z):
        return ((1.0 + np.abs(z[..., 0]) ** 2) ** power)[..., None, None] + 0j

    def integrand(x, chart):
        return ch0_point(H, x, step, True).degree_part(2)

    return integrate_fiber(integrand, 1, scheme or QUADRATURE_TEST_SCHEMES[1], charts=True)


def log_pairing(scheme=None, step=1e-3, charts=False):
    """``(2πi)^{-1} ∫ ch_0(I_x^{-1}) log|t|^2``, which vanishes since ``t -> 1/t`` flips the log.

    By default the whole sphere is covered by the affine chart, so the
    cancellation between the two hemispheres is not built into the node
    layout.
    """
    from .chern_weil import ch0_point

    def H(z):
        return (1.0 / (1.0 + np.abs(z[..., 0]) ** 2))[..., None, None] + 0j

    def integrand(x, chart):
        sign = -1.0 if chart[0] else 1.0
        return ch0_point(H, x, step, True).scale(sign * np.log(np.abs(x[:, 0]) ** 2))

    return integrate_fiber(integrand, 1, scheme or QUADRATURE_TEST_SCHEMES[1], charts=charts)


def boundary_test_forms():
    """Test forms ``name -> (n, φ)`` for :func:`boundary_current_residual`.

    Each extends smoothly over ``t_i = ∞``.  ``bump`` and ``balanced`` are
    functions (the second with equal values at ``0`` and ``∞``); ``mixed``
    has a degree-1 part, which reaches the ``dε`` part of the current;
    ``product`` is a two-factor product.
    """
    def bump(x):
        u = np.abs(x[:, 0]) ** 2
        return PointForm({(): 1 / (1 + u)}, (len(x),))

    def balanced(x):
        u = np.abs(x[:, 0]) ** 2
        return PointForm({(): u / (1 + u) ** 2}, (len(x),))

    def mixed(x):
        t = x[:, 0]
        u = np.abs(t) ** 2
        return PointForm({(): np.exp(-u), (0,): np.conj(t) / (1 + u) ** 2}, (len(x),))

    def product(x):
        u1 = np.abs(x[:, 0]) ** 2
        t = x[:, 1]
        u2 = np.abs(t) ** 2
        return PointForm({(): 1 / ((1 + u1) * (1 + u2)), (2,): np.conj(t) / ((1 + u1) * (1 + u2) ** 2)}, (len(x),))

    return {"bump": (1, bump), "balanced": (1, balanced), "mixed": (1, mixed), "product": (2, product)}
