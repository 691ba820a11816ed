"""One test per acceptance criterion, with the stated tolerances and runtime budgets."""

import time

import pytest

from bottchern import suites


def run(*names):
    start = time.perf_counter()
    cases = [c for name in names for c in suites.SUITES[name](0, None)]
    return cases, time.perf_counter() - start


def summary(cases):
    return "; ".join(f"{c.name}={c.value:.3g}" if isinstance(c.value, float) else f"{c.name}={c.value}"
                     for c in cases)


def check(report_line, number, title, cases, elapsed, budget=None):
    ok = all(c.status == "pass" for c in cases) and (budget is None or elapsed < budget)
    detail = f"{sum(c.status == 'pass' for c in cases)}/{len(cases)} cases, {elapsed:.1f}s"
    if budget is not None:
        detail += f" (budget {budget:g}s)"
    report_line(number, title, ok, detail)
    failed = [c for c in cases if c.status != "pass"]
    assert not failed, summary(failed)
    assert budget is None or elapsed < budget


def test_01_symbolic_w_expansion_and_i_prime(report_line):
    cases, t = run("symbolic")
    assert len(cases) == 8
    assert all("sigma_" in c.note for c in cases if c.name.startswith("i-prime"))
    check(report_line, 1, "W_n expansion and I'(W_n) closed form, n=1..4", cases, t, 5)


def test_02_eps_beta_integrals(report_line):
    cases, t = run("beta")
    assert len(cases) == 21
    assert all(c.note for c in cases), "sign discrepancy must be flagged on every case"
    check(report_line, 2, "eps-beta integrals, 1 <= i <= n <= 6", cases, t, 1)


def test_03_chain_maps(report_line):
    cases, t = run("dsquare", "lambda", "cub")
    check(report_line, 3, "d∘d, lambda and Cub chain maps", cases, t, 30)


def test_04_emi_path_independence_and_uniqueness(report_line):
    cases, t = run("emi")
    check(report_line, 4, "induced-metric path independence and uniqueness", cases, t)


def test_05_chern_weil_normalization(report_line):
    cases, t = run("normalization")
    assert [c.expected for c in cases] == [1.0, -1.0]
    check(report_line, 5, "degree of the tautological weights", cases, t, 60)


def test_06_transgression_restriction_and_induction(report_line):
    cases, t = run("transgression")
    assert [c.tolerance for c in cases] == [1e-8, 1e-9]
    check(report_line, 6, "transgression restrictions and inductive construction", cases, t)


def test_07_tensor_and_multiplicativity(report_line):
    cases, t = run("tensor", "multiplicativity")
    assert len(cases) == 4
    check(report_line, 7, "tensor factorization and multiplicativity", cases, t)


def test_08_closed_form(report_line):
    cases, t = run("closed-form")
    check(report_line, 8, "line-bundle closed form, additivity, scale invariance", cases, t, 120)


@pytest.mark.slow
def test_09_degenerate_vanishing(report_line):
    cases, t = run("degenerate")
    check(report_line, 9, "degenerate cubes and log pairing", cases, t)


@pytest.mark.slow
def test_10_ddbar_identity(report_line):
    cases, t = run("eq2")
    assert len(cases) == 3
    check(report_line, 10, "ddbar identity on a 9x9 grid, three families", cases, t, 600)


def test_11_cocycle(report_line):
    cases, t = run("cocycle")
    check(report_line, 11, "cocycle identity on emi 2-cubes", cases, t)


def test_12_boundary_of_current(report_line):
    cases, t = run("boundary")
    assert sorted(c.tolerance for c in cases) == [1e-5, 1e-5, 1e-5, 1e-4]
    check(report_line, 12, "boundary of the W_n currents", cases, t)
