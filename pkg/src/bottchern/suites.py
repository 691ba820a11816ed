"""Verification suites shared by the command line and the acceptance tests.

Each suite is a function ``(seed, tol) -> list[Case]``; ``tol`` (if not
``None``) replaces the default tolerance of every numeric case.
"""

import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import bott_chern as bc
from . import chains
from . import cubes
from . import fiber_forms as ff
from . import quadrature as quad
from . import transgression as tg
from . import waldhausen as wd


@dataclass
class Case:
    name: str
    status: str
    value: object
    expected: object
    tolerance: float
    runtime: float
    provenance: str
    note: str = ""

    def to_json(self):
        out = asdict(self)
        for key in ("value", "expected"):
            out[key] = _jsonable(out[key])
        return out


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _numeric(name, value, expected, tol, provenance, note=""):
    err = abs(complex(value) - complex(expected))
    status = "pass" if err < tol else "fail"
    v = complex(value)
    shown = v.real if abs(v.imag) < 1e-15 else v
    return Case(name, status, shown, expected, tol, 0.0, provenance, note)


def _exact(name, ok, value, expected, provenance, note=""):
    return Case(name, "pass" if ok else "fail", value, expected, 0.0, 0.0, provenance, note)


def _timed(fn):
    with _Timer() as t:
        case = fn()
    case.runtime = t.elapsed
    return case


def _tol(default, override):
    return default if override is None else override


# exact symbolic suites


def suite_symbolic(seed=0, tol=None):
    out = []
    for n in range(1, 5):
        out.append(_timed(lambda n=n: _exact(f"w-expansion n={n}", ff.verify_w_expansion(n), True, True,
                                             "W_n equals its P/S expansion (exact rationals)")))
    for n in range(1, 5):
        def case(n=n):
            ip = ff.i_prime(n)
            ok = ip.pipeline == ip.form.scale(ip.sigma)
            return _exact(f"i-prime n={n}", ok, ip.sigma, "±1", "closed form vs integrated-projected W_n",
                          note=f"sigma_{n} = {ip.sigma:+d}")
        out.append(_timed(case))
    return out


def suite_beta(seed=0, tol=None):
    out = []
    for n in range(1, 7):
        for i in range(1, n + 1):
            def case(i=i, n=n):
                val = ff.eps_beta_integral(i, n)
                exp = ff.eps_beta_closed_form(i, n)
                other = Fraction((-1) ** (n + i - 1) * 2 ** n, math.factorial(n))
                note = "opposite sign to the alternative display (-1)^(n+i-1) 2^n/n!" if val == -other else ""
                return _exact(f"eps-beta i={i} n={n}", val == exp, val, exp,
                              "polynomial antiderivative on [-1, 1]", note)
            out.append(_timed(case))
    return out


# chain-level suites


def suite_dsquare(seed=0, tol=None):
    def case():
        bad = 0
        for k in range(200):
            F = cubes.random_exact_cube(1 + k % 3, 2, seed=seed + k, emi=bool(k % 2))
            if F.n >= 2 and not chains.boundary(chains.boundary(F)).is_zero():
                bad += 1
            elif F.n == 1 and chains.boundary(F).degree not in (0, None):
                bad += 1
        return _exact("d∘d = 0 on 200 cubes (n <= 3)", bad == 0, bad, 0, "integer chain arithmetic")
    return [_timed(case)]


def suite_lambda(seed=0, tol=None):
    def case():
        bad = 0
        for k in range(50):
            F = cubes.random_exact_cube(1 + k % 2, 2, seed=seed + k, emi=False)
            c = chains.ChainElement.of(F)
            lhs = chains.boundary(chains.lambda_total(c))
            rhs = chains.lambda_total(chains.boundary(c))
            if not lhs.equals(rhs):
                bad += 1
            if any(not cubes.is_emi(t) for t, _ in chains.lambda_total(c)):
                bad += 1
        return _exact("lambda chain map on 50 cubes", bad == 0, bad, 0, "d λ = λ d modulo degenerates")
    return [_timed(case)]


def suite_cub(seed=0, tol=None):
    def case():
        bad = 0
        for k in range(50):
            E = wd.random_s_simplex(1 + k % 4, 2, seed=seed + k)
            if not wd.cub_chain_map_residual(E).is_zero():
                bad += 1
        return _exact("Cub chain map on 50 simplices (n <= 4)", bad == 0, bad, 0, "d Cub = Cub d modulo degenerates")
    return [_timed(case)]


def suite_emi(seed=0, tol=None):
    t = _tol(1e-10, tol)

    def path():
        worst = max(cubes.path_independence_residual(cubes.random_exact_cube(2, 2, seed=seed + k, emi=False))
                    for k in range(50))
        return _numeric("path independence of induced metrics (50 seeds)", worst, 0.0, t,
                        "two inductions of the (1,1) metric")

    def unique():
        checked, broken = 0, 0
        for k in range(50):
            F = cubes.random_exact_cube(1 + k % 2, 2, seed=seed + k)
            c, ok = cubes.perturbation_breaks_emi(F)
            checked += c
            broken += c if ok else 0
        return _exact("uniqueness of emi metrics (50 seeds)", checked == broken and checked > 0,
                      broken, checked, "rescaling any induced metric breaks emi")
    return [_timed(path), _timed(unique)]


# analytic suites


def suite_normalization(seed=0, tol=None):
    t = _tol(1e-6, tol)
    return [
        _timed(lambda: _numeric("degree of I_x^{-1}", quad.tautological_degree(-1).value, 1.0, t,
                                "Chern-Weil integral over P^1")),
        _timed(lambda: _numeric("degree of I_x", quad.tautological_degree(1).value, -1.0, t,
                                "Chern-Weil integral over P^1")),
    ]


def suite_transgression(seed=0, tol=None):
    t_res, t_ind = _tol(1e-8, tol), _tol(1e-9, tol)

    def restriction():
        worst = 0.0
        for k in range(20):
            F = cubes.random_exact_cube(1 + k % 2, 2, seed=seed + k)
            for i in range(1, F.n + 1):
                worst = max(worst, tg.restriction_residual(F, i, seed=k))
        return _numeric("restriction isometries (20 cubes)", worst, 0.0, t_res, "faces of the transgression")

    def inductive():
        worst = max(tg.inductive_residual(cubes.random_exact_cube(1 + k % 2, 2, seed=seed + k), seed=k)
                    for k in range(20))
        return _numeric("inductive vs direct transgression (20 cubes)", worst, 0.0, t_ind, "iterated tr_1")
    return [_timed(restriction), _timed(inductive)]


def suite_tensor(seed=0, tol=None):
    t = _tol(1e-10, tol)

    def case():
        worst = 0.0
        for k in range(5):
            F = cubes.random_exact_cube(1, 2, seed=seed + 2 * k)
            G = cubes.random_exact_cube(1, 2, seed=seed + 2 * k + 1)
            worst = max(worst, tg.tensor_factorization_residual(F, G, points=20, seed=k))
        return _numeric("tensor factorization at 20 points", worst, 0.0, t, "Kronecker product of transgressions")
    return [_timed(case)]


def multiplicativity_cases():
    F = bc.line_cube(math.e ** 2, 1.0)
    return {
        "G = (C^2, I)": (F, cubes.MetrizedCube.point(np.eye(2))),
        "G = (C, 7)": (F, cubes.MetrizedCube.point([[7.0]])),
        "F, G 1-cubes": (F, bc.line_cube(3.0, 0.5)),
    }


def suite_multiplicativity(seed=0, tol=None):
    t = _tol(1e-6, tol)
    return [_timed(lambda F=F, G=G, name=name: _numeric(f"multiplicativity {name}", bc.verify_multiplicativity(F, G),
                                                         0.0, t, "TW value of F⊗G vs cup of values"))
            for name, (F, G) in multiplicativity_cases().items()]


CLOSED_FORM_RATIOS = {"e^2": math.e ** 2, "10": 10.0, "1/4": 0.25}


def suite_closed_form(seed=0, tol=None):
    t_val, t_add, t_scale = _tol(1e-6, tol), _tol(1e-5, tol), _tol(1e-8, tol)
    out = []
    for label, ratio in CLOSED_FORM_RATIOS.items():
        out.append(_timed(lambda ratio=ratio, label=label: _numeric(
            f"ch_1 of 0->(C,b)->(C,a)->0, b/a={label}", bc.line_value(ratio), -0.5 * math.log(ratio), t_val,
            "-log(b/a)/2")))
    out.append(_timed(lambda: _numeric("g(4) - 2 g(2)", bc.line_value(4.0) - 2 * bc.line_value(2.0), 0.0, t_add,
                                       "log additivity")))
    out.append(_timed(lambda: _numeric("g(1)", bc.line_value(1.0), 0.0, t_add, "isometric identity")))

    def scale():
        base = bc.bott_chern(bc.line_cube(3.0, 2.0)).value
        worst = max(abs(bc.bott_chern(bc.line_cube(3.0 * c, 2.0 * c)).value - base) for c in (1e-3, 1.0, 1e3))
        return _numeric("scale invariance c in {1e-3, 1, 1e3}", worst, 0.0, t_scale, "common rescaling of metrics")
    out.append(_timed(scale))
    return out


def degeneracy_samples(seed=0, count=20):
    """Seeded degenerate cubes: even indices are 1-cubes, odd ones 2-cubes."""
    out = []
    for k in range(count):
        n = 1 + k % 2
        rng = np.random.default_rng(seed + k)
        base = cubes.random_exact_cube(n - 1, 2 if n == 1 else 1, rng=rng)
        i = int(rng.integers(1, n + 1))
        j = int(rng.choice([-1, 1]))
        out.append(cubes.degeneracy(base, i, j))
    return out


def suite_degenerate(seed=0, tol=None):
    t = _tol(1e-5, tol)

    def case():
        reduced_ok = True
        worst = 0.0
        for D in degeneracy_samples(seed):
            res = bc.bott_chern(D, "W")
            reduced_ok &= res.value == 0 and "degenerate: reduced in chain" in res.notes
            target = "W" if D.n % 2 else "TW"
            val, _ = bc.emi_cube_value(D, target)
            worst = max(worst, abs(val) if target == "W" else val.max_abs())
        note = "chain reduction gives exact zero" if reduced_ok else "chain reduction missed a degenerate cube"
        c = _numeric("degenerate cubes computed by quadrature (20 seeds)", worst, 0.0, t,
                     "pairing annihilates degenerates", note)
        if not reduced_ok:
            c.status = "fail"
        return c

    quad_tol = _tol(1e-6, tol)
    return [_timed(case),
            _timed(lambda: _numeric("∫ log v / (1+v)^2 dv = 0", quad.log_pairing().value, 0.0, quad_tol,
                                    "t -> 1/t antisymmetry"))]


def suite_eq2(seed=0, tol=None):
    t = _tol(1e-4, tol)
    return [_timed(lambda fam=fam, name=name: _numeric(f"ddbar identity, family {name} (9x9 grid)",
                                                         bc.verify_eq2(fam), 0.0, t,
                                                         "-2∂∂̄ ch_1 vs Chern-Weil difference"))
            for name, fam in bc.eq2_families().items()]


def suite_cocycle(seed=0, tol=None):
    t = _tol(1e-5, tol)

    def case():
        worst = max(bc.verify_cocycle(cubes.random_exact_cube(2, 1, seed=seed + k)) for k in range(10))
        return _numeric("cocycle identity on 10 emi 2-cubes", worst, 0.0, t, "alternating sum of face values")
    return [_timed(case)]


def suite_boundary(seed=0, tol=None):
    out = []
    for name, (n, phi) in quad.boundary_test_forms().items():
        t = _tol(1e-5 if n == 1 else 1e-4, tol)
        out.append(_timed(lambda n=n, phi=phi, name=name, t=t: _numeric(
            f"boundary of [W_{n}] on test form {name}", quad.boundary_current_residual(n, phi), 0.0, t,
            "d[W_n] vs faces")))
    return out


SUITES = {
    "symbolic": suite_symbolic,
    "beta": suite_beta,
    "dsquare": suite_dsquare,
    "lambda": suite_lambda,
    "cub": suite_cub,
    "emi": suite_emi,
    "normalization": suite_normalization,
    "transgression": suite_transgression,
    "tensor": suite_tensor,
    "multiplicativity": suite_multiplicativity,
    "closed-form": suite_closed_form,
    "degenerate": suite_degenerate,
    "eq2": suite_eq2,
    "cocycle": suite_cocycle,
    "boundary": suite_boundary,
}


def run_suite(name, seed=0, tol=None):
    """Run one suite (or ``"all"``) and return ``{suite: [Case, ...]}``."""
    names = list(SUITES) if name == "all" else [name]
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
    return {n: SUITES[n](seed, tol) for n in names}
