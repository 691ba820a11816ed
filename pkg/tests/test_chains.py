import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bottchern import cubes
from bottchern.chains import ChainElement, boundary, lambda_total
from bottchern.cubes import MetrizedCube
from bottchern.errors import DegreeError


def test_boundary_of_sequence():
    xi = MetrizedCube.sequence([[2.0]], [[1], [0]], np.eye(2), [[0, 1]], [[3.0]])
    expected = ChainElement([(cubes.face(xi, 1, -1), 1), (cubes.face(xi, 1, 0), -1), (cubes.face(xi, 1, 1), 1)])
    assert boundary(xi).equals(expected)


def test_boundary_needs_positive_degree():
    with pytest.raises(DegreeError):
        boundary(MetrizedCube.point([[1.0]]))


def test_mixed_degrees_are_rejected():
    c = ChainElement([(MetrizedCube.point([[1.0]]), 1), (cubes.random_exact_cube(1, seed=1), 1)])
    with pytest.raises(DegreeError):
        c.degree


def test_degenerate_terms_vanish():
    D = cubes.degeneracy(cubes.random_exact_cube(1, seed=2), 2, 1)
    assert ChainElement.of(D).is_zero()


def test_like_terms_merge_and_cancel():
    F = cubes.random_exact_cube(1, seed=3)
    c = ChainElement([(F, 2), (F, -1)])
    assert len(c) == 1 and c.terms[0][1] == 1
    assert (c - c).is_zero()
    assert (3 * c).terms[0][1] == 3


@pytest.mark.parametrize("n", [2, 3])
def test_boundary_squared_vanishes(n):
    for seed in range(10):
        F = cubes.random_exact_cube(n, 2, seed=seed, emi=bool(seed % 2))
        assert boundary(boundary(F)).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_boundary_of_degenerate_is_degenerate(seed):
    F = cubes.random_exact_cube(2, 2, seed=seed)
    for i in (1, 2, 3):
        for j in (-1, 1):
            D = ChainElement([(cubes.degeneracy(F, i, j), 1)], drop_degenerate=False)
            assert boundary(D).is_zero()


def test_lambda_fixes_emi_cube():
    F = cubes.random_exact_cube(2, 2, seed=9)
    assert lambda_total(F).equals(ChainElement.of(F))


def test_lambda_is_identity_in_degree_zero():
    P = MetrizedCube.point(np.diag([1.0, 3.0]))
    assert lambda_total(P).equals(ChainElement.of(P))


def test_lambda_on_sequence_adds_correction():
    xi = MetrizedCube.sequence([[1.0]], [[1], [0]], np.eye(2), [[0, 1]], [[3.0]])
    terms = lambda_total(xi)
    assert len(terms) == 2
    assert all(cubes.is_emi(c) for c, _ in terms)


@given(st.integers(1, 2), st.integers(0, 10_000))
def test_lambda_is_a_chain_map(n, seed):
    F = cubes.random_exact_cube(n, 2, seed=seed, emi=False)
    lhs = boundary(lambda_total(F))
    rhs = lambda_total(boundary(F))
    assert lhs.equals(rhs)
    assert all(cubes.is_emi(c) for c, _ in lambda_total(F))
