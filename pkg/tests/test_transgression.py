import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bottchern import cubes, linalg
from bottchern import transgression as tg
from bottchern.cubes import MetrizedCube
from bottchern.errors import PreconditionError


def test_fiber_weight():
    assert np.isclose(tg.fiber_weight(np.array([1j, 2.0])), 0.5 * 0.2)


def test_gram_at_origin_is_the_zero_vertex():
    F = cubes.random_exact_cube(2, 2, seed=1)
    G = tg.transgression_gram(F)
    assert np.allclose(G, F.grams[0, 0])


def test_line_sequence_closed_form():
    # 0 -> (C, b) -> (C, a) -> 0: the quotient metric is a b / (a |t|^2 + b) times the fiber weight
    a, b = 3.0, 2.0
    F = MetrizedCube.sequence([[b]], [[1.0]], [[a]], np.zeros((0, 1)), np.zeros((0, 0)))
    t = np.array([[0.7 - 0.2j]])
    expected = a * b / (b + a * abs(t[0, 0]) ** 2) / (1 + abs(t[0, 0]) ** 2)
    assert np.isclose(tg.transgression_gram(F, 0.0, t)[0, 0, 0], expected)


def test_non_emi_cube_is_rejected():
    F = MetrizedCube.sequence([[1.0]], [[1], [0]], np.eye(2), [[0, 1]], [[3.0]])
    with pytest.raises(PreconditionError):
        tg.BundleFamily(F)


def test_wrong_number_of_fiber_coordinates():
    fam = tg.BundleFamily(cubes.random_exact_cube(2, seed=0))
    with pytest.raises(PreconditionError):
        fam.gram(0.0, np.zeros(3))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_rank(n):
    F = cubes.random_exact_cube(n, 2, seed=n)
    fam = tg.BundleFamily(F)
    t = np.full(n, 0.4 + 0.1j)
    M = fam.psi_matrix(t)
    assert np.linalg.matrix_rank(M) == fam.ambient_dim - fam.rank


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("seed", range(4))
def test_adapted_frames_are_positive_definite(n, seed):
    F = cubes.random_exact_cube(n, 2, seed=seed)
    fam = tg.BundleFamily(F)
    rng = np.random.default_rng(seed)
    for chart in [(True,) * n, (False,) * n] + ([(True, False), (False, True)] if n == 2 else []):
        C = fam.frame(chart)
        assert C.shape == (fam.ambient_dim, fam.rank)
        pts = 0.3 * (rng.standard_normal((10, n)) + 1j * rng.standard_normal((10, n)))
        pts[0] = 0.0
        G = fam.gram(0.0, pts, chart=chart, complement=C)
        assert all(linalg.is_positive_definite(g) for g in G)


def test_chart_change_is_a_holomorphic_gauge():
    F = cubes.random_exact_cube(1, 2, seed=7)
    fam = tg.BundleFamily(F)
    C = fam.frame((True,))

    def log_ratio(t):
        t = np.atleast_1d(t)[:, None]
        g0 = fam.gram(0.0, t)
        g1 = fam.gram(0.0, 1 / t, chart=(True,), complement=C)
        return np.log(np.linalg.det(g1).real) - np.log(np.linalg.det(g0).real)

    z, h = 0.8 + 0.6j, 1e-3
    lap = (log_ratio(z + h) + log_ratio(z - h) + log_ratio(z + 1j * h) + log_ratio(z - 1j * h) - 4 * log_ratio(z)) / h ** 2
    assert abs(lap[0]) < 1e-4


@pytest.mark.parametrize("seed", range(5))
def test_restriction_isometries(seed):
    F = cubes.random_exact_cube(2, 2, seed=seed)
    for i in (1, 2):
        assert tg.restriction_residual(F, i, seed=seed) < 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_inductive_construction(seed):
    assert tg.inductive_residual(cubes.random_exact_cube(2, 2, seed=seed), seed=seed) < 1e-9


def test_tensor_factorization():
    F = cubes.random_exact_cube(1, 2, seed=1)
    G = cubes.random_exact_cube(1, 2, seed=2)
    assert tg.tensor_factorization_residual(F, G) < 1e-10


def test_base_metric_override():
    F = MetrizedCube.sequence([[1.0]], [[1.0]], [[1.0]], np.zeros((0, 1)), np.zeros((0, 0)))
    metrics = {(-1,): lambda s: np.array([[2.0]]) * np.ones(np.shape(s) + (1, 1))}
    fam = tg.BundleFamily(F, base_metrics=metrics)
    g = fam.gram(np.array([0.0]), np.array([[1.0]]))
    assert np.isclose(g[0, 0, 0], 2.0 / 3.0 / 2.0)


@given(st.integers(1, 2), st.integers(0, 10_000), st.complex_numbers(max_magnitude=5))
def test_transgression_is_hermitian_positive(n, seed, z):
    F = cubes.random_exact_cube(n, 2, seed=seed)
    G = tg.transgression_gram(F, 0.0, np.full(n, z))
    assert np.allclose(G, np.conj(G.T))
    assert linalg.is_positive_definite(G)
