import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bottchern import fiber_forms as ff
from bottchern.errors import PreconditionError, ScopeError, SingularityError
from bottchern.fiber_forms import SymbolicFiberForm as S


def test_generators_anticommute():
    a, b = S.A(1), S.B(2)
    assert a.wedge(b) == -b.wedge(a)
    assert a.wedge(a).is_zero()


def test_logs_commute_and_multiply():
    assert S.L(1).wedge(S.L(1)) == S.L(1, 2)
    assert S.L(1).wedge(S.A(2)) == S.A(2).wedge(S.L(1))


def test_deps_squares_to_zero():
    assert S.deps().wedge(S.deps()).is_zero()


def test_deps_passes_odd_forms_with_sign():
    assert S.A(1).wedge(S.deps()) == -S.deps().wedge(S.A(1))


def test_conjugation_swaps_holomorphic_and_antiholomorphic():
    assert S.A(1).conj() == S.B(1)
    assert S.A(1).wedge(S.B(2)).conj() == S.B(1).wedge(S.A(2))
    assert S.L(2).conj() == S.L(2)


def test_lambda_form_endpoints():
    t = ff.lambda_form(1)
    assert t.endpoints_ok()
    assert t.r == (S.A(1) - S.B(1)).scale(Fraction(1, 2))


def test_w1_text():
    assert ff.w_form(1).w.to_text() == "[(1/2)*deps] * L1 + [1/2 + 1/2*eps] * A1 + [-1/2 + 1/2*eps] * B1"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_w_form_matches_expansion(n):
    assert ff.verify_w_expansion(n)
    assert ff.w_form(n).endpoints_ok()


def test_w_expansion_is_not_trivially_true():
    wrong = ff.w_expansion(2)
    assert ff.w_form(2) != ff.TWTriple(wrong.r, wrong.f, wrong.w + S.deps().wedge(S.L(1)))


def test_p_term_extremes():
    assert ff.p_term(2, 2) == S.A(1).wedge(S.A(2)).scale(2)
    assert ff.p_term(0, 1) == S.B(1)


def test_i_prime_low_degrees():
    assert ff.i_prime(1).form.to_text() == "-1/2 * L1"
    expected = (S.L(2).wedge(S.A(1)) - S.L(2).wedge(S.B(1)) - S.L(1).wedge(S.A(2))
                + S.L(1).wedge(S.B(2))).scale(Fraction(1, 4))
    assert ff.i_prime(2).form == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_i_prime_pipeline_agrees_up_to_sign(n):
    ip = ff.i_prime(n)
    assert ip.sigma in (1, -1)
    assert ip.pipeline == ip.form.scale(ip.sigma)
    assert ip.form.form_degrees() == {n - 1}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_i_prime_is_real_of_weight_n(n):
    form = ff.i_prime(n).form
    assert form.conj() == form.scale((-1) ** (n - 1))


def test_eps_beta_values():
    assert ff.eps_beta_integral(1, 1) == 2
    assert ff.eps_beta_integral(1, 2) == -2
    assert ff.eps_beta_integral(2, 2) == 2
    for n in range(1, 7):
        for i in range(1, n + 1):
            assert ff.eps_beta_integral(i, n) == Fraction((-1) ** (n - i) * 2 ** n, math.factorial(n))


def test_eps_beta_scope():
    with pytest.raises(ScopeError):
        ff.eps_beta_integral(0, 2)


def test_psi_project_requires_eps_free_input():
    with pytest.raises(PreconditionError):
        ff.psi_project(ff.w_form(2), 2, 2)


def test_psi_project_scope():
    with pytest.raises(ScopeError):
        ff.psi_project(S.constant(1), 4, 2)


def test_w_form_scope():
    with pytest.raises(ScopeError):
        ff.w_form(0)


def test_evaluate_at_line():
    pf = ff.evaluate_at(S.L(1).wedge(S.A(1)), np.array([2.0 + 0j]))
    assert np.isclose(pf.coefficient((0,)), math.log(4) / 2)


def test_evaluate_at_chart_flip():
    t = np.array([0.5 + 0.5j])
    direct = ff.evaluate_at(S.L(1), t)
    flipped = ff.evaluate_at(S.L(1), 1 / t, chart=(True,))
    assert np.isclose(direct.coefficient(()), flipped.coefficient(()))


def test_evaluate_at_pole():
    with pytest.raises(SingularityError):
        ff.evaluate_at(S.L(1), np.array([0j]))


forms = st.sampled_from([S.A(1), S.B(1), S.A(2), S.B(2), S.L(1), S.L(2), S.constant(3), S.deps(), S.eps((1, 2))])


@given(forms, forms, forms)
def test_wedge_is_associative(a, b, c):
    assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))


@given(forms, forms)
def test_conjugation_is_multiplicative(a, b):
    assert a.wedge(b).conj() == a.conj().wedge(b.conj())
