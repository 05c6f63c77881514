import math

import numpy as np
import pytest
from numpy.polynomial.hermite import hermmul

from core.fock_core import make_fock_config
from core.special_functions import gradshteyn_7_375_2
from verification.lemma_suites import (
    SuiteResult,
    hermite_orthogonality_suite,
    lemma1_suite,
    lemma2_suite,
    lemma3_suite,
    lemma4_suite,
    lemma5_suite,
    run_all_suites,
    suite_table,
)


@pytest.fixture(scope="module")
def cfg25():
    return make_fock_config(25, gh_order=256)


def test_lemma1_suite_passes():
    result = lemma1_suite()
    failed = [name for name, row in result.details.items() if not row["passed"]]
    assert result.passed, failed
    assert result.details["f_at_zero"]["residual"] <= 1e-12
    assert all(result.details[f"cauchy_{m}"]["residual"] <= 1e-8 for m in range(7))
    assert len(result.details["ladder"]["rows"]) == 31


def test_lemma2_kronecker_property(cfg25):
    result = lemma2_suite(cfg25, n_max=25)
    assert result.passed
    assert result.max_residual < 1e-8
    assert len(result.details["kronecker"]["per_n"]) == 26


@pytest.mark.parametrize("n_max", [0, 3, 8, 12])
def test_hermite_orthogonality_suite(n_max):
    result = hermite_orthogonality_suite(n_max=n_max)
    assert result.passed, result.details
    assert result.details["orthogonal"]["residual"] <= 1e-12


def test_hermite_product_integrals_from_series():
    # H_n^2 expanded in the Hermite basis; the H_2k coefficient times ||H_2k||^2 is the integral
    for n in range(7):
        e_n = np.zeros(n + 1)
        e_n[n] = 1.0
        square = hermmul(e_n, e_n)
        assert square.size == 2 * n + 1
        for k in range(n + 1):
            exact = square[2 * k] * math.sqrt(math.pi) * 2.0 ** (2 * k) * math.factorial(2 * k)
            assert gradshteyn_7_375_2(k, n) == pytest.approx(exact, rel=1e-12)


def test_lemma3_suite_small(cfg25):
    result = lemma3_suite(cfg25, k_max=4, n_max=6)
    assert result.passed, result.details


def test_lemma4_suite_small(cfg25):
    result = lemma4_suite(cfg25, max_order=8, span=4)
    assert result.passed, result.details
    assert result.details["below_ladder_finite"]["passed"]


def test_lemma5_dual_path_small():
    result = lemma5_suite(n_states=4, max_dim=5, k_max=3, m_max=4, seed=3)
    assert result.passed, result.details
    assert result.details["dual_path"]["states"] == 4


def test_suite_failure_is_reported_not_raised():
    result = lemma2_suite(make_fock_config(4, gh_order=8), n_max=25)
    assert not result.passed
    assert result.details["error"]["error"] == "insufficient-quadrature"


def test_suite_table():
    results = [
        SuiteResult("a", True, 1e-12),
        SuiteResult("b", False, 0.5, seconds=1.234),
    ]
    table = suite_table(results)
    assert list(table.columns) == ["suite", "passed", "max_residual", "seconds"]
    assert table["passed"].tolist() == [True, False]
    assert results[1].to_dict()["seconds"] == 1.234


@pytest.mark.slow
def test_all_suites_at_acceptance_settings():
    results = run_all_suites(dim=25, gh_order=256)
    assert [r.name for r in results] == [
        "lemma1", "lemma2", "hermite_orthogonality", "lemma3", "lemma4", "lemma5",
    ]
    for r in results:
        assert r.passed, (r.name, r.details)
    assert results[1].max_residual < 1e-8
