"""Exact symbolic forms on ``(C^*)^n`` with coefficients polynomial in ``ε`` and ``dε``.

Generators (factor ``i`` is 1-based):

* ``A_i = dt_i/t_i`` and ``B_i = dt̄_i/t̄_i`` -- odd, ids ``2(i-1)`` and ``2(i-1)+1``;
* ``L_i = log(t_i t̄_i)`` -- even, stored as exponents.

A term ``q(ε) dε ⊗ X`` always keeps ``dε`` on the far left.  All coefficients
are :class:`fractions.Fraction`, so every identity here is checked exactly.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import PreconditionError, ScopeError, SingularityError
from .pointforms import PointForm, merge_words, sort_word

EPS_MAX_DEGREE = 8
MAX_N = 5

# ε-polynomials: tuples of Fractions, ascending powers, no trailing zeros


def _ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def padd(p, q):
    n = max(len(p), len(q))
    return _ptrim((p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n))


def pscale(p, c):
    return _ptrim(c * x for x in p)


def pmul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    if len(_ptrim(out)) > EPS_MAX_DEGREE + 1:
        raise ScopeError(f"ε-polynomial degree exceeds {EPS_MAX_DEGREE}")
    return _ptrim(out)


def peval(p, x):
    x = Fraction(x)
    return sum((c * x ** k for k, c in enumerate(p)), Fraction(0))


def pintegrate(p, a, b):
    """Exact ``∫_a^b p(ε) dε``."""
    a, b = Fraction(a), Fraction(b)
    return sum((c * (b ** (k + 1) - a ** (k + 1)) / (k + 1) for k, c in enumerate(p)), Fraction(0))


def ppow_linear(c0, c1, k):
    """``(c0 + c1 ε)^k`` as an ε-polynomial."""
    out = (Fraction(1),)
    for _ in range(k):
        out = pmul(out, (Fraction(c0), Fraction(c1)))
    return out


def pformat(p, var="eps"):
    parts = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        parts.append((c, mono))
    if not parts:
        return "0"
    out = ""
    for idx, (c, mono) in enumerate(parts):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = (str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}"))
        out += (("-" if sign == "-" else "") if idx == 0 else f" {sign} ") + body
    return out


@dataclass(frozen=True)
class EpsCoefficient:
    """``p(ε) + q(ε) dε``."""

    p: tuple = ()
    q: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "p", _ptrim(Fraction(x) for x in self.p))
        object.__setattr__(self, "q", _ptrim(Fraction(x) for x in self.q))

    def is_zero(self):
        return not self.p and not self.q

    def __add__(self, other):
        return EpsCoefficient(padd(self.p, other.p), padd(self.q, other.q))

    def scale(self, c):
        c = Fraction(c)
        return EpsCoefficient(pscale(self.p, c), pscale(self.q, c))

    def times(self, other, left_odd):
        """Product where ``other``'s ``dε`` must pass a form of parity ``left_odd``."""
        sign = -1 if left_odd else 1
        q = padd(pmul(self.q, other.p), pscale(pmul(self.p, other.q), sign))
        return EpsCoefficient(pmul(self.p, other.p), q)

    def has_eps(self):
        return bool(self.q) or len(self.p) > 1

    def __str__(self):
        if not self.q:
            return pformat(self.p)
        if not self.p:
            return f"({pformat(self.q)})*deps"
        return f"({pformat(self.p)}) + ({pformat(self.q)})*deps"


ONE = EpsCoefficient((Fraction(1),))


def _normalize_logs(logs):
    logs = list(logs)
    while logs and logs[-1] == 0:
        logs.pop()
    return tuple(logs)


def gen_name(g):
    i, bar = divmod(g, 2)
    return f"{'B' if bar else 'A'}{i + 1}"


def _log_text(logs):
    parts = []
    for i, e in enumerate(logs):
        if e == 1:
            parts.append(f"L{i + 1}")
        elif e > 1:
            parts.append(f"L{i + 1}^{e}")
    return parts


@dataclass(frozen=True)
class SymbolicFiberForm:
    """Sum of ``coefficient ⊗ (∏ L_i^{e_i}) · word`` over canonical keys ``(logs, word)``."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (logs, word), c in self.terms.items():
            if not isinstance(c, EpsCoefficient):
                c = EpsCoefficient((Fraction(c),))
            if c.is_zero():
                continue
            key = (_normalize_logs(logs), tuple(word))
            clean[key] = clean[key] + c if key in clean else c
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if not v.is_zero()})

    # constructors

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def constant(cls, c=1):
        return cls({((), ()): EpsCoefficient((Fraction(c),))})

    @classmethod
    def A(cls, i):
        return cls({((), (2 * (i - 1),)): ONE})

    @classmethod
    def B(cls, i):
        return cls({((), (2 * (i - 1) + 1,)): ONE})

    @classmethod
    def L(cls, i, power=1):
        logs = [0] * i
        logs[i - 1] = power
        return cls({(tuple(logs), ()): ONE})

    @classmethod
    def eps(cls, poly):
        """The ε-polynomial ``poly`` (ascending coefficients) times ``1``."""
        return cls({((), ()): EpsCoefficient(tuple(poly))})

    @classmethod
    def deps(cls, poly=(1,)):
        """``poly(ε) dε``."""
        return cls({((), ()): EpsCoefficient((), tuple(poly))})

    # algebra

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return SymbolicFiberForm(out)

    def scale(self, c):
        return SymbolicFiberForm({k: v.scale(c) for k, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return self.scale(c)

    def wedge(self, other):
        out = {}
        for (la, wa), ca in self.terms.items():
            for (lb, wb), cb in other.terms.items():
                sign, w = merge_words(wa, wb)
                if sign == 0:
                    continue
                c = ca.times(cb, len(wa) % 2 == 1).scale(sign)
                if c.is_zero():
                    continue
                n = max(len(la), len(lb))
                logs = tuple((la[k] if k < len(la) else 0) + (lb[k] if k < len(lb) else 0) for k in range(n))
                key = (_normalize_logs(logs), w)
                out[key] = out[key] + c if key in out else c
        return SymbolicFiberForm(out)

    def __mul__(self, other):
        if isinstance(other, SymbolicFiberForm):
            return self.wedge(other)
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, SymbolicFiberForm):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted((k, str(v)) for k, v in self.terms.items())))

    def is_zero(self):
        return not self.terms

    # structure

    def has_eps(self):
        return any(c.has_eps() for c in self.terms.values())

    def max_factor(self):
        m = 0
        for logs, word in self.terms:
            m = max(m, len(logs), *(g // 2 + 1 for g in word))
        return m

    def conj(self):
        """Complex conjugation: ``A_i <-> B_i``; ``L_i``, ``ε`` and rational coefficients are real."""
        out = {}
        for (logs, word), c in self.terms.items():
            sign, w = sort_word([g ^ 1 for g in word])
            key = (logs, w)
            c = c.scale(sign)
            out[key] = out[key] + c if key in out else c
        return SymbolicFiberForm(out)

    def type_counts(self):
        """Set of ``(#A, #B)`` bidegrees occurring."""
        return {(sum(1 for g in w if g % 2 == 0), sum(1 for g in w if g % 2 == 1)) for _, w in self.terms}

    def form_degrees(self):
        return {len(w) for _, w in self.terms}

    def at_eps(self, value):
        """Substitute ``ε = value`` and drop ``dε`` terms (restriction to an endpoint)."""
        return SymbolicFiberForm({k: EpsCoefficient((peval(c.p, value),)) for k, c in self.terms.items()})

    def eps_part(self):
        """Split into ``(p-terms, q-terms)`` as dicts ``key -> ε-poly``."""
        p = {k: c.p for k, c in self.terms.items() if c.p}
        q = {k: c.q for k, c in self.terms.items() if c.q}
        return p, q

    def to_text(self):
        """Canonical text: one signed term per key, sorted by degree then generators."""
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (len(k[1]), k[1], k[0]))
        out = ""
        for idx, key in enumerate(keys):
            logs, word = key
            c = self.terms[key]
            factors = _log_text(logs)
            if word:
                factors.append("^".join(gen_name(g) for g in word))
            mono = " * ".join(factors)
            if not c.has_eps():
                val = c.p[0]
                sign = "-" if val < 0 else "+"
                mag = abs(val)
                body = str(mag) if not mono else (mono if mag == 1 else f"{mag} * {mono}")
            else:
                sign = "+"
                body = f"[{c}]" + (f" * {mono}" if mono else "")
            if idx == 0:
                out += ("-" if sign == "-" else "") + body
            else:
                out += f" {sign} {body}"
        return out

    def to_json(self):
        rows = []
        for key in sorted(self.terms, key=lambda k: (len(k[1]), k[1], k[0])):
            logs, word = key
            c = self.terms[key]
            rows.append({"logs": list(logs), "word": [gen_name(g) for g in word],
                         "eps": [str(x) for x in c.p], "deps": [str(x) for x in c.q]})
        return rows

    def __str__(self):
        return self.to_text()

    __repr__ = __str__


def wedge(a, b):
    return a.wedge(b)


def wedge_all(forms):
    out = SymbolicFiberForm.constant(1)
    for f in forms:
        out = out.wedge(f)
    return out


@dataclass(frozen=True)
class TWTriple:
    """Thom–Whitney triple ``(r, f, w)`` with ``w|ε=0 = r`` and ``w|ε=1 = f``."""

    r: SymbolicFiberForm
    f: SymbolicFiberForm
    w: SymbolicFiberForm

    def endpoints_ok(self):
        return self.w.at_eps(0) == self.r and self.w.at_eps(1) == self.f

    def __eq__(self, other):
        return self.r == other.r and self.f == other.f and self.w == other.w

    def __hash__(self):
        return hash((self.r, self.f, self.w))

    def scale(self, c):
        return TWTriple(self.r.scale(c), self.f.scale(c), self.w.scale(c))

    def __neg__(self):
        return self.scale(-1)


UNIT = TWTriple(SymbolicFiberForm.constant(1), SymbolicFiberForm.constant(1), SymbolicFiberForm.constant(1))


def tw_cup(x, y):
    """Componentwise product of triples."""
    return TWTriple(x.r.wedge(y.r), x.f.wedge(y.f), x.w.wedge(y.w))


def embed(r, f, omega):
    """``E(r, f, ω) = (r, f, ε⊗f + (1-ε)⊗r + dε⊗ω)``."""
    eps = SymbolicFiberForm.eps((0, 1))
    one_minus = SymbolicFiberForm.eps((1, -1))
    return TWTriple(r, f, eps.wedge(f) + one_minus.wedge(r) + SymbolicFiberForm.deps().wedge(omega))


def formal_integral(w):
    """``q(ε) dε ⊗ φ -> (∫_0^1 q) φ`` and ``p(ε) ⊗ φ -> 0``."""
    return SymbolicFiberForm({k: EpsCoefficient((pintegrate(c.q, 0, 1),)) for k, c in w.terms.items() if c.q})


def lambda_form(i):
    """``(½(A_i - B_i), A_i, ½[(ε+1) A_i + (ε-1) B_i + dε L_i])``."""
    A, B, L = SymbolicFiberForm.A(i), SymbolicFiberForm.B(i), SymbolicFiberForm.L(i)
    half = Fraction(1, 2)
    w = (SymbolicFiberForm.eps((1, 1)).wedge(A) + SymbolicFiberForm.eps((-1, 1)).wedge(B)
         + SymbolicFiberForm.deps().wedge(L)).scale(half)
    return TWTriple((A - B).scale(half), A, w)


def _check_n(n, lo=1, hi=MAX_N):
    if not isinstance(n, (int, np.integer)) or not lo <= n <= hi:
        raise ScopeError(f"n must be an integer in [{lo}, {hi}], got {n!r}")


def w_form(n):
    """``W_n = λ_1 ∪ ... ∪ λ_n``."""
    _check_n(n)
    out = UNIT
    for i in range(1, n + 1):
        out = tw_cup(out, lambda_form(i))
    return out


def _perm_sign(perm):
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def p_term(i, n):
    """``P^i_n = Σ_σ sgn(σ) A_σ(1) ∧ ... ∧ A_σ(i) ∧ B_σ(i+1) ∧ ... ∧ B_σ(n)``."""
    _check_n(n)
    if not 0 <= i <= n:
        raise ScopeError(f"P^i_n needs 0 <= i <= n, got i={i}, n={n}")
    out = SymbolicFiberForm.zero()
    for perm in itertools.permutations(range(1, n + 1)):
        gens = [SymbolicFiberForm.A(k) for k in perm[:i]] + [SymbolicFiberForm.B(k) for k in perm[i:]]
        out = out + wedge_all(gens).scale(_perm_sign(perm))
    return out


def s_term(i, n):
    """``S^i_n = Σ_σ sgn(σ) L_σ(1) A_σ(2) ∧ ... ∧ A_σ(i) ∧ B_σ(i+1) ∧ ... ∧ B_σ(n)``."""
    _check_n(n)
    if not 1 <= i <= n:
        raise ScopeError(f"S^i_n needs 1 <= i <= n, got i={i}, n={n}")
    out = SymbolicFiberForm.zero()
    for perm in itertools.permutations(range(1, n + 1)):
        gens = ([SymbolicFiberForm.L(perm[0])] + [SymbolicFiberForm.A(k) for k in perm[1:i]]
                + [SymbolicFiberForm.B(k) for k in perm[i:]])
        out = out + wedge_all(gens).scale(_perm_sign(perm))
    return out


def w_expansion(n):
    """The triple rebuilt from the ``P^i_n``/``S^i_n`` expansions."""
    _check_n(n)
    two_n = Fraction(1, 2 ** n)
    fact = math.factorial
    r = SymbolicFiberForm.zero()
    w = SymbolicFiberForm.zero()
    for i in range(n + 1):
        P = p_term(i, n)
        c = Fraction(1, fact(i) * fact(n - i))
        r = r + P.scale(two_n * (-1) ** (n - i) * c)
        w = w + SymbolicFiberForm.eps(pscale(pmul(ppow_linear(1, 1, i), ppow_linear(-1, 1, n - i)), two_n * c)).wedge(P)
    for i in range(1, n + 1):
        c = Fraction(1, fact(i - 1) * fact(n - i))
        poly = pscale(pmul(ppow_linear(1, 1, i - 1), ppow_linear(-1, 1, n - i)), two_n * c)
        w = w + SymbolicFiberForm.deps(poly).wedge(s_term(i, n))
    f = wedge_all(SymbolicFiberForm.A(k) for k in range(1, n + 1))
    return TWTriple(r, f, w)


def verify_w_expansion(n):
    """True iff :func:`w_form` agrees exactly with :func:`w_expansion`."""
    if not 1 <= n <= 4:
        raise ScopeError("verify_w_expansion supports 1 <= n <= 4")
    return w_form(n) == w_expansion(n)


def eps_beta_integral(i, n):
    """Exact ``∫_{-1}^{1} (ε+1)^{i-1} (ε-1)^{n-i} / ((i-1)! (n-i)!) dε``."""
    if not 1 <= i <= n:
        raise ScopeError(f"need 1 <= i <= n, got i={i}, n={n}")
    poly = pmul(ppow_linear(1, 1, i - 1), ppow_linear(-1, 1, n - i)) if n <= EPS_MAX_DEGREE else None
    if poly is None:
        raise ScopeError("degree too large")
    return pintegrate(poly, -1, 1) / (math.factorial(i - 1) * math.factorial(n - i))


def eps_beta_closed_form(i, n):
    """``(-1)^(n-i) 2^n / n!``, the value :func:`eps_beta_integral` must produce."""
    return Fraction((-1) ** (n - i) * 2 ** n, math.factorial(n))


def project_real(z, weight):
    """``(z + (-1)^(weight-1) z̄) / 2``: projection onto ``(2πi)^(weight-1)``-real forms."""
    return (z + z.conj().scale((-1) ** (weight - 1))).scale(Fraction(1, 2))


def psi_project(t, n, p):
    """Image of a triple (or plain form) under the projection to the small complex.

    Only the branch ``n <= 2p - 1`` is implemented: take the ``ω`` component,
    keep bidegrees ``(p', q')`` with ``p' < p`` and ``q' < p``, and project to
    the real structure of weight ``p``.
    """
    if n >= 2 * p:
        raise ScopeError("only the branch n <= 2p - 1 is implemented")
    omega = t.w if isinstance(t, TWTriple) else t
    if omega.has_eps():
        raise PreconditionError("psi_project expects an ε-free form; integrate over ε first")
    kept = {}
    for (logs, word), c in omega.terms.items():
        a = sum(1 for g in word if g % 2 == 0)
        b = len(word) - a
        if len(word) == n - 1 and a < p and b < p:
            kept[logs, word] = c
    return project_real(SymbolicFiberForm(kept), p)


@dataclass(frozen=True)
class IPrime:
    """Closed form of the fibre-integration kernel, with the pipeline cross-check."""

    n: int
    form: SymbolicFiberForm
    pipeline: SymbolicFiberForm
    sigma: int


def i_prime_closed_form(n):
    """``(-1)^n / (2 n!) Σ_i (-1)^(i-1) S^i_n``."""
    _check_n(n)
    out = SymbolicFiberForm.zero()
    for i in range(1, n + 1):
        out = out + s_term(i, n).scale((-1) ** (i - 1))
    return out.scale(Fraction((-1) ** n, 2 * math.factorial(n)))


def i_prime_pipeline(n):
    """``π(∫_0^1 W_n^3)`` traced literally through the definitions."""
    _check_n(n)
    return psi_project(formal_integral(w_form(n).w), n, n)


def i_prime(n):
    """The kernel ``I'(W_n)`` (closed form) together with the pipeline sign ``σ_n``.

    ``σ_n`` is defined by ``pipeline == σ_n * closed form``; a mismatch beyond
    a global sign raises.

    >>> ip = i_prime(1)
    >>> print(ip.form, ip.sigma)
    -1/2 * L1 -1
    """
    form = i_prime_closed_form(n)
    pipe = i_prime_pipeline(n)
    if pipe == form:
        sigma = 1
    elif pipe == -form:
        sigma = -1
    else:
        raise AssertionError(f"pipeline and closed form differ beyond a sign at n={n}")
    return IPrime(n, form, pipe, sigma)


def evaluate_at(form, t, chart=None):
    """Substitute ``A_i -> dt_i/t_i``, ``B_i -> dt̄_i/t̄_i``, ``L_i -> log|t_i|^2``.

    ``t`` has shape ``(..., n)``; the result is a batched :class:`PointForm`
    whose generator ids coincide with the symbolic ones (``dt_i`` is ``2(i-1)``).
    If ``chart[k]`` is true the ``k``-th coordinate is ``tau = 1/t`` and the
    substitution becomes ``A -> -dtau/tau``, ``B -> -dtau_bar/tau_bar``,
    ``L -> -log|tau|^2``.
    """
    if form.has_eps():
        raise PreconditionError("evaluate_at needs an ε-free form")
    t = np.asarray(t, dtype=complex)
    if t.ndim == 0:
        t = t[None]
    if np.any(t == 0):
        raise SingularityError("forms with logarithmic poles cannot be evaluated at t_i = 0")
    shape = t.shape[:-1]
    n = t.shape[-1]
    if form.max_factor() > n:
        raise PreconditionError(f"form involves {form.max_factor()} factors but only {n} coordinates given")
    flip = np.where(np.asarray(chart if chart is not None else (False,) * n, dtype=bool), -1.0, 1.0)
    logs = flip * np.log(np.abs(t) ** 2)
    inv = flip / t
    invbar = np.conj(inv)
    out = {}
    for (lg, word), c in form.terms.items():
        val = np.full(shape, complex(c.p[0]) if c.p else 0.0, dtype=complex)
        for k, e in enumerate(lg):
            if e:
                val = val * logs[..., k] ** e
        for g in word:
            k, bar = divmod(g, 2)
            val = val * (invbar[..., k] if bar else inv[..., k])
        out[word] = out[word] + val if word in out else val
    return PointForm(out, shape)
