import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bottchern import cubes, linalg
from bottchern.cubes import MetrizedCube
from bottchern.errors import ExactnessError, ShapeError


def xi():
    """(C, b) --(1,0)--> (C^2, I) --(0,1)--> (C, q)."""
    return MetrizedCube.sequence([[2.0]], [[1], [0]], np.eye(2), [[0, 1]], [[3.0]])


def test_face_of_sequence_is_middle_vertex():
    F = cubes.face(xi(), 1, 0)
    assert F.n == 0 and F.dims[()] == 2
    assert np.allclose(F.grams[()], np.eye(2))


def test_face_index_out_of_range():
    with pytest.raises(IndexError):
        cubes.face(xi(), 2, 0)


def test_degeneracy_of_point():
    G = MetrizedCube.point([[5.0]])
    D = cubes.degeneracy(G, 1, 1)
    assert D.dims == {(-1,): 1, (0,): 1, (1,): 0}
    assert np.allclose(D.arrows[(-1,), 0], [[1]])
    assert cubes.face(D, 1, 1).is_zero()
    assert cubes.cubes_close(cubes.face(D, 1, -1), G)


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("j", [-1, 1])
def test_face_of_degeneracy(n, j):
    F = cubes.random_exact_cube(n, 2, seed=3)
    for i in range(1, n + 2):
        D = cubes.degeneracy(F, i, j)
        assert cubes.face(D, i, j).is_zero()
        assert cubes.cubes_close(cubes.face(D, i, -j), F)
        assert cubes.is_degenerate(D)
        D.validate()


def test_random_cube_is_deterministic_and_exact():
    a = cubes.random_exact_cube(3, 2, seed=11)
    b = cubes.random_exact_cube(3, 2, seed=11)
    assert cubes.cubes_close(a, b, tol=0.0)
    assert a.is_exact()


def test_random_non_emi_cubes_are_rarely_emi():
    hits = sum(not cubes.is_emi(cubes.random_exact_cube(1 + s % 2, 2, seed=s, emi=False)) for s in range(100))
    assert hits > 90


def test_is_emi_examples():
    assert not cubes.is_emi(MetrizedCube.sequence([[1.0]], [[1], [0]], np.eye(2), [[0, 1]], [[3.0]]))
    assert cubes.is_emi(MetrizedCube.point([[2.0]]))
    assert cubes.is_emi(MetrizedCube.sequence([[1.0]], [[1], [0]], np.eye(2), [[0, 1]], [[1.0]]))


def test_complete_emi_one_cube():
    F = cubes.complete_emi(1, {(-1,): 1, (0,): 2}, {(-1,): [[4.0]], (0,): np.eye(2)},
                           {((-1,), 0): [[1], [0]]})
    assert F.dims[(1,)] == 1
    assert np.allclose(F.grams[(1,)], [[1.0]])
    assert cubes.is_emi(F)


def test_complete_emi_zero_cube_unchanged():
    F = cubes.complete_emi(0, {(): 2}, {(): np.diag([1.0, 2.0])}, {})
    assert np.allclose(F.grams[()], np.diag([1.0, 2.0]))


def test_complete_emi_rejects_non_injective_data():
    with pytest.raises((ExactnessError, ValueError)):
        cubes.complete_emi(1, {(-1,): 1, (0,): 1}, {(-1,): [[1.0]], (0,): [[1.0]]}, {((-1,), 0): [[0.0]]})


@pytest.mark.parametrize("seed", range(10))
def test_path_independence(seed):
    F = cubes.random_exact_cube(2, 2, seed=seed, emi=False)
    assert cubes.path_independence_residual(F) < 1e-10


@pytest.mark.parametrize("seed", range(10))
def test_emi_metrics_are_unique(seed):
    F = cubes.random_exact_cube(2, 2, seed=seed)
    checked, broken = cubes.perturbation_breaks_emi(F)
    assert broken


def test_lambda1_replaces_quotient_metric():
    F = MetrizedCube.sequence([[1.0]], [[1], [0]], np.eye(2), [[0, 1]], [[3.0]])
    L = cubes.lambda1(F, 1)
    assert np.allclose(L.grams[(1,)], [[1.0]])
    assert np.allclose(L.grams[(-1,)], F.grams[(-1,)])
    assert np.allclose(L.grams[(0,)], F.grams[(0,)])


def test_lambda1_fixes_emi_cube():
    F = cubes.random_exact_cube(2, 2, seed=4)
    for i in (1, 2):
        assert cubes.cubes_close(cubes.lambda1(F, i), F)


def test_lambda2_of_emi_cube_is_degenerate():
    F = cubes.random_exact_cube(2, 2, seed=5)
    for i in (1, 2):
        L = cubes.lambda2(F, i)
        L.validate()
        assert cubes.is_degenerate(L)


def test_lambda2_dimensions():
    F = cubes.random_exact_cube(2, 2, seed=6, emi=False)
    L = cubes.lambda2(F, 1)
    top = cubes.face(F, 1, 1)
    for alpha in cubes.vertices(2):
        expected = 0 if alpha[0] == 1 else top.dims[alpha[1:]]
        assert L.dims[alpha] == expected
    L.validate()


def test_validate_names_failing_edge():
    F = MetrizedCube.sequence([[1.0]], [[1], [0]], np.eye(2), [[1, 0]], [[1.0]])
    with pytest.raises(ExactnessError, match="axis 1"):
        F.validate()


def test_tensor_with_unit_is_identity():
    F = cubes.random_exact_cube(1, 2, seed=2)
    T = cubes.tensor_cube(F, MetrizedCube.point([[1.0]]))
    assert cubes.cubes_close(T, F)


def test_tensor_dims_multiply():
    F = cubes.random_exact_cube(1, 2, seed=2)
    G = cubes.random_exact_cube(1, 2, seed=3)
    T = cubes.tensor_cube(F, G)
    assert T.n == 2
    assert T.dims[0, 0] == F.dims[(0,)] * G.dims[(0,)]
    T.validate()
    assert cubes.is_emi(T)


def test_json_roundtrip():
    F = cubes.random_exact_cube(2, 2, seed=8, emi=False)
    G = cubes.cube_from_json(json.loads(json.dumps(cubes.cube_to_json(F))))
    assert cubes.cubes_close(F, G, tol=1e-14)


def test_json_emi_completion():
    data = {"n": 1, "emi_complete": True,
            "vertices": {"-1": {"dim": 1, "gram": [[[2.0, 0.0]]]},
                         "0": {"dim": 2, "gram": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}},
            "arrows": {"-1->0": [[[1, 0]], [[0, 0]]]}}
    F = cubes.cube_from_json(data)
    assert cubes.is_emi(F) and F.dims[(1,)] == 1


@pytest.mark.parametrize("data", [
    {"vertices": {}},
    {"n": 1, "vertices": {"-1,0": {"dim": 1, "gram": [[[1, 0]]]}}},
    {"n": 0, "vertices": {"": {"dim": 2, "gram": [[[1, 0]]]}}},
])
def test_json_rejects_malformed_cubes(data):
    with pytest.raises(ShapeError):
        cubes.cube_from_json(data)


@given(st.integers(0, 3), st.integers(0, 10_000), st.booleans())
def test_random_cubes_satisfy_invariants(n, seed, emi):
    F = cubes.random_exact_cube(n, 2, seed=seed, emi=emi)
    F.validate()
    for alpha in cubes.vertices(n):
        if F.dims[alpha]:
            assert linalg.is_positive_definite(F.grams[alpha], tol=0.0)
    if emi:
        assert cubes.is_emi(F)


@given(st.integers(1, 2), st.integers(0, 10_000), st.floats(1.5, 10.0))
def test_scaling_an_induced_metric_breaks_emi(n, seed, factor):
    F = cubes.random_exact_cube(n, 2, seed=seed)
    assert cubes.perturbation_breaks_emi(F, factor)[1]
