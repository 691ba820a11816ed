import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bottchern import cubes
from bottchern import waldhausen as wd
from bottchern.chains import ChainElement, boundary


def faces_by_formula(E):
    """Compare every face of Cub E with the face identities of the construction."""
    C = wd.cub(E)
    n = E.n
    for i in range(1, n):
        X = E
        for k in range(n, i, -1):
            X = wd.s_face(X, k)
        G = wd.cub(X)
        for k in range(i, n - 1):
            G = cubes.degeneracy(G, k, 1)
        assert cubes.cubes_close(cubes.face(C, i, -1), G)
        assert cubes.cubes_close(cubes.face(C, i, 0), wd.cub(wd.s_face(E, i)))
        X = E
        for k in range(i - 1, -1, -1):
            X = wd.s_face(X, k)
        G = wd.cub(X)
        for k in range(1, i):
            G = cubes.degeneracy(G, k, -1)
        assert cubes.cubes_close(cubes.face(C, i, 1), G)


def test_cub_in_degree_one_is_the_vertex():
    E = wd.random_s_simplex(1, 2, seed=1)
    C = wd.cub(E)
    assert C.n == 0 and C.dims[()] == E.dims[0, 1]


def test_cub_in_degree_two_is_the_sequence():
    E = wd.random_s_simplex(2, 2, seed=2)
    C = wd.cub(E)
    assert C.n == 1
    assert [C.dims[(a,)] for a in (-1, 0, 1)] == [E.dims[0, 1], E.dims[0, 2], E.dims[1, 2]]
    assert np.allclose(C.arrows[(-1,), 0], E.map((0, 1), (0, 2)))


def test_cub_in_degree_three_has_expected_rows():
    E = wd.random_s_simplex(3, 2, seed=3)
    C = wd.cub(E)
    # the row through E_{0,1} -> E_{0,2} -> E_{1,2}
    row = cubes.face(C, 2, -1)
    assert [row.dims[(a,)] for a in (-1, 0, 1)] == [E.dims[0, 1], E.dims[0, 2], E.dims[1, 2]]
    # the bottom row 0 -> E_{2,3} -> E_{2,3}
    bottom = cubes.face(C, 1, 1)
    assert [bottom.dims[(a,)] for a in (-1, 0, 1)] == [0, E.dims[2, 3], E.dims[2, 3]]
    C.validate()


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("seed", range(3))
def test_face_identities(n, seed):
    faces_by_formula(wd.random_s_simplex(n, 2, seed=seed))


def test_s1_residual_is_empty():
    assert wd.cub_chain_map_residual(wd.random_s_simplex(1, seed=0)).is_zero()


def test_s2_chain_map_by_hand():
    E = wd.random_s_simplex(2, 2, seed=7)
    lhs = boundary(ChainElement.of(wd.cub(E)))
    rhs = wd.cub_chain(wd.s_boundary(E))
    assert lhs.equals(rhs)


def test_random_simplex_is_deterministic_and_valid():
    a = wd.random_s_simplex(3, 2, seed=5)
    b = wd.random_s_simplex(3, 2, seed=5)
    assert all(np.allclose(a.grams[k], b.grams[k]) for k in a.grams)
    a.validate()


@given(st.integers(1, 4), st.integers(0, 10_000))
def test_cub_is_a_chain_map(n, seed):
    E = wd.random_s_simplex(n, 2, seed=seed)
    wd.cub(E).validate()
    assert wd.cub_chain_map_residual(E).is_zero()
