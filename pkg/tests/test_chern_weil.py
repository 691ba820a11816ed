import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bottchern import chern_weil as cw
from bottchern.errors import SingularityError


def line(weight):
    return lambda z: weight(z[..., 0])[..., None, None] + 0j


fubini_study = line(lambda t: 1 / (1 + np.abs(t) ** 2))


def test_flat_metric_has_no_curvature():
    H = lambda z: np.broadcast_to(np.array([[2.0, 0.5j], [-0.5j, 1.0]]), z.shape[:-1] + (2, 2))
    ch = cw.ch0_point(H, np.array([[0.3 + 0.1j]]))
    assert np.allclose(ch.coefficient(()), 2)
    assert np.max(np.abs(ch.coefficient((0, 1)))) < 1e-6


@pytest.mark.parametrize("z", [0.0, 0.3 + 0.2j, -1.5j, 2.0])
def test_fubini_study_curvature(z):
    ch = cw.ch0_point(fubini_study, np.array([[z]]), richardson=True)
    # degree-2 part is -K = ∂∂̄ log h = -dz∧dz̄ / (1 + |z|^2)^2
    assert np.isclose(ch.coefficient((0, 1))[0], -1 / (1 + abs(z) ** 2) ** 2, rtol=1e-6)


def test_holomorphic_gauge_invariance():
    z = np.array([[0.4 - 0.3j, 0.2 + 0.1j]])

    def H(p):
        a, b = p[..., 0], p[..., 1]
        G = np.zeros(p.shape[:-1] + (2, 2), dtype=complex)
        G[..., 0, 0] = 2 + np.abs(a) ** 2
        G[..., 1, 1] = 1 + np.abs(b) ** 2
        G[..., 0, 1] = 0.5 * a * np.conj(b)
        G[..., 1, 0] = np.conj(G[..., 0, 1])
        return G

    def gauged(p):
        g = np.zeros(p.shape[:-1] + (2, 2), dtype=complex)
        g[..., 0, 0] = 1
        g[..., 0, 1] = p[..., 0] ** 2
        g[..., 1, 1] = np.exp(p[..., 1])
        return np.conj(np.swapaxes(g, -1, -2)) @ H(p) @ g

    a = cw.ch0_point(H, z, step=1e-3, richardson=True)
    b = cw.ch0_point(gauged, z, step=1e-3, richardson=True)
    for word in set(a.terms) | set(b.terms):
        assert np.allclose(a.coefficient(word), b.coefficient(word), atol=1e-7)


def test_direct_sum_is_additive():
    z = np.array([[0.5 + 0.5j]])
    h1 = lambda t: 1 / (1 + np.abs(t) ** 2)
    h2 = lambda t: np.exp(-np.abs(t) ** 2)

    def both(p):
        G = np.zeros(p.shape[:-1] + (2, 2), dtype=complex)
        G[..., 0, 0] = h1(p[..., 0])
        G[..., 1, 1] = h2(p[..., 0])
        return G

    total = cw.ch0_point(both, z, richardson=True).coefficient((0, 1))
    parts = cw.ch0_point(line(h1), z, richardson=True).coefficient((0, 1)) + \
        cw.ch0_point(line(h2), z, richardson=True).coefficient((0, 1))
    assert np.allclose(total, parts, atol=1e-8)


def test_richardson_improves_accuracy():
    z = np.array([[0.7 + 0.0j]])
    exact = -1 / (1 + 0.49) ** 2
    plain = abs(cw.ch0_point(fubini_study, z, step=1e-2).coefficient((0, 1))[0] - exact)
    rich = abs(cw.ch0_point(fubini_study, z, step=1e-2, richardson=True).coefficient((0, 1))[0] - exact)
    assert rich < plain / 10


def test_singular_gram_raises():
    with pytest.raises(SingularityError):
        cw.curvature(lambda z: np.zeros(z.shape[:-1] + (1, 1), dtype=complex), np.array([[0.1]]))


def test_ch0_top_degree_for_two_variables():
    def H(p):
        return (1 / ((1 + np.abs(p[..., 0]) ** 2) * (1 + np.abs(p[..., 1]) ** 2)))[..., None, None] + 0j

    ch = cw.ch0_point(H, np.array([[0.0, 0.0]]), richardson=True)
    # exp of a sum of two commuting curvature terms: the top part is their product
    assert np.isclose(ch.coefficient((0, 1, 2, 3))[0], 1.0, atol=1e-6)


@given(st.floats(0.5, 5.0), st.complex_numbers(max_magnitude=2))
def test_constant_rescaling_is_invisible(c, z):
    a = cw.ch0_point(fubini_study, np.array([[z]])).coefficient((0, 1))
    b = cw.ch0_point(lambda p: c * fubini_study(p), np.array([[z]])).coefficient((0, 1))
    assert np.allclose(a, b, atol=1e-6)
