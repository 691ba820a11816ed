import math

import numpy as np
import pytest

from bottchern import fiber_forms as ff
from bottchern import quadrature as quad
from bottchern.errors import DegreeError, ScopeError
from bottchern.pointforms import PointForm
from bottchern.quadrature import QuadratureScheme


def area(x, chart):
    u = np.abs(x[:, 0]) ** 2
    return PointForm({(0, 1): -1 / (1 + u) ** 2}, (len(x),))


def test_scheme_validation():
    with pytest.raises(ValueError):
        QuadratureScheme(1, 4, 10.0)
    with pytest.raises(ScopeError):
        quad.default_scheme(4)


def test_scheme_doubling():
    s = QuadratureScheme(10, 4, 5.0).doubled()
    assert (s.radial, s.angular, s.cutoff) == (20, 8, 5.0)


def test_gauss_legendre_rule():
    u, w = QuadratureScheme(20, 4, 3.0, "gauss-legendre").radial_nodes()
    assert np.isclose(w.sum(), 6.0)
    assert np.isclose(np.sum(w * u ** 2), 18.0)


@pytest.mark.parametrize("charts", [False, True])
def test_area_of_sphere(charts):
    res = quad.integrate_fiber(area, 1, charts=charts)
    assert abs(res.value - 1) < 1e-10
    assert res.truncation < 1e-10


def test_product_of_spheres():
    def prod(x, chart):
        a, b = area(x[:, :1], None), area(x[:, 1:], None)
        return PointForm({(0, 1, 2, 3): a.coefficient((0, 1)) * b.coefficient((0, 1))}, (len(x),))

    assert abs(quad.integrate_fiber(prod, 2).value - 1) < 1e-6


def test_missing_top_degree():
    def low(x, chart):
        return PointForm({(): np.ones(len(x))}, (len(x),))

    with pytest.raises(DegreeError):
        quad.integrate_fiber(low, 1)
    assert quad.integrate_fiber(low, 1, strict=False).value == 0


def test_many_shares_nodes():
    res = quad.integrate_fiber_many(lambda x, c: [area(x, c), area(x, c).scale(2)], 1)
    assert np.isclose(res[1].value, 2 * res[0].value)


def test_chunking_is_invisible():
    a = quad.integrate_fiber(area, 1, chunk=97).value
    b = quad.integrate_fiber(area, 1).value
    assert abs(a - b) < 1e-14


def test_tautological_degrees():
    assert abs(quad.tautological_degree(-1).value - 1) < 1e-6
    assert abs(quad.tautological_degree(1).value + 1) < 1e-6


def test_log_pairing_vanishes():
    assert abs(quad.log_pairing().value) < 1e-6


def test_doubling_nodes_is_stable():
    base = quad.QUADRATURE_TEST_SCHEMES[1]
    a = quad.tautological_degree(-1, base).value
    b = quad.tautological_degree(-1, base.doubled()).value
    assert abs(a - b) < 1e-5


def test_pair_with_current_against_kernel():
    # ∫ area ∧ (-½ log|t|^2) vanishes by the t -> 1/t symmetry
    res = quad.pair_with_current(1, area, ff.i_prime(1).form)
    assert abs(res.value) < 1e-8


def test_exterior_derivative_of_function():
    phi = lambda x: PointForm({(): x[:, 0] * np.conj(x[:, 0])}, (len(x),))
    x = np.array([[0.3 + 0.4j]])
    d = quad.exterior_derivative(phi, x)
    assert np.isclose(d.coefficient((0,))[0], np.conj(x[0, 0]))
    assert np.isclose(d.coefficient((1,))[0], x[0, 0])


def test_restrict_to_face_drops_normal_directions():
    phi = lambda x: PointForm({(0,): np.ones(len(x)), (2,): x[:, 0]}, (len(x),))
    face = quad.restrict_to_face(phi, 1, 0)
    out = face(np.array([[0.5j]]))
    assert set(out.terms) == {(0,)}
    assert out.coefficient((0,))[0] == 0


@pytest.mark.parametrize("name", ["bump", "balanced", "mixed", "product"])
def test_boundary_of_current(name):
    n, phi = quad.boundary_test_forms()[name]
    assert quad.boundary_current_residual(n, phi) < (1e-5 if n == 1 else 1e-4)


def test_boundary_scope():
    with pytest.raises(ScopeError):
        quad.boundary_current_residual(3, None)


def test_w_triple_components_reassemble():
    r, f, X, Y = quad.w_triple_components(2)
    W = ff.w_form(2)
    rebuilt = sum((ff.SymbolicFiberForm.eps([0] * k + [1]).wedge(form) for k, form in X), ff.SymbolicFiberForm.zero())
    rebuilt = rebuilt + sum((ff.SymbolicFiberForm.deps([0] * k + [1]).wedge(form) for k, form in Y),
                            ff.SymbolicFiberForm.zero())
    assert rebuilt == W.w and r == W.r and f == W.f
