import json
import math

import numpy as np
import pytest

from core.errors import (
    DensityMatrixError,
    DensityWarning,
    InsufficientQuadratureError,
    TruncationWarning,
    ValidationError,
)
from core.fock_core import (
    build_hermite_table,
    build_ladder_operators,
    commutator_residual,
    density_matrix_from_json,
    density_matrix_to_json,
    fidelity,
    gauss_hermite_rule,
    hermite_function,
    hermite_functions,
    make_density_matrix,
    make_fock_config,
    matrix_element,
    operator_matrix,
    pure_state,
    quadrature_pdf,
    reduce_angle,
    rotated_quadrature_matrix,
    trace_distance,
    DensityMatrix,
    MAX_GH_ORDER,
    QuadratureDistribution,
)


def test_hermite_function_values():
    assert hermite_function(0, 0.0) == pytest.approx(math.pi ** -0.25, abs=1e-15)
    assert hermite_function(3, 0.0) == 0.0
    # h_1(x) = sqrt(2) pi^(-1/4) x exp(-x^2/2)
    assert hermite_function(1, 1.0) == pytest.approx(math.sqrt(2) * math.pi ** -0.25 * math.exp(-0.5), rel=1e-14)


def test_hermite_functions_stay_finite_far_out():
    values = hermite_functions(200, np.array([-40.0, 0.0, 40.0]))
    assert np.all(np.isfinite(values))
    assert abs(values[200, 0]) < 1e-100


def test_hermite_table_is_orthonormal(cfg8):
    table = build_hermite_table(30, cfg8.x_grid)
    assert table.orthonormality_residual(64) < 1e-12
    assert table.recursion_residual() < 1e-10


def test_ladder_operators():
    ops = build_ladder_operators(6)
    one = np.zeros(6)
    one[1] = 1.0
    assert ops.a_matrix @ one == pytest.approx(np.eye(6)[0])

    commutator = ops.a_matrix @ ops.a_dagger_matrix - ops.a_dagger_matrix @ ops.a_matrix
    expected = np.eye(6)
    expected[-1, -1] = 1 - 6
    np.testing.assert_allclose(commutator, expected, atol=1e-14)
    np.testing.assert_allclose(np.diag(ops.number_matrix), np.arange(6))


def test_rotated_quadrature_endpoints():
    ops = build_ladder_operators(5)
    np.testing.assert_allclose(rotated_quadrature_matrix(0.0, 5), ops.position, atol=1e-15)
    np.testing.assert_allclose(rotated_quadrature_matrix(math.pi / 2, 5), ops.momentum, atol=1e-15)


def test_density_matrix_rejects_bad_input():
    with pytest.raises(DensityMatrixError):
        DensityMatrix(np.array([[1.0, 0.5], [0.0, 0.0]]))
    with pytest.raises(DensityMatrixError):
        DensityMatrix(np.ones((2, 3)))
    with pytest.raises(DensityMatrixError):
        make_density_matrix(np.diag([1.0, 1.0]))
    with pytest.raises(DensityMatrixError):
        make_density_matrix(np.diag([1.5, -0.5]))


def test_density_matrix_json(tmp_path):
    rho = pure_state([1, 1j, 0])
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(density_matrix_to_json(rho)))
    back = density_matrix_from_json(str(path))
    np.testing.assert_array_equal(back.entries, rho.entries)

    with pytest.raises(DensityMatrixError):
        density_matrix_from_json({"dim": 3, "re": [[1]], "im": [[0]]})


def test_fidelity_and_trace_distance():
    vac = pure_state([1, 0])
    one = pure_state([0, 1])
    plus = pure_state([1, 1])
    assert fidelity(vac, vac) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(vac, one) == pytest.approx(0.0, abs=1e-12)
    assert fidelity(vac, plus) == pytest.approx(0.5, abs=1e-12)
    assert trace_distance(vac, one) == pytest.approx(1.0, abs=1e-12)
    assert trace_distance(plus, plus) == pytest.approx(0.0, abs=1e-12)


def test_reduce_angle():
    assert reduce_angle(-math.pi / 2) == pytest.approx(3 * math.pi / 2)
    assert reduce_angle(2 * math.pi) == 0.0
    with pytest.raises(ValidationError):
        reduce_angle(math.inf)


def test_vacuum_and_one_photon_densities(cfg4, table4):
    x = cfg4.x_grid
    vac = quadrature_pdf(pure_state([1, 0, 0, 0]), 0.7, table4)
    np.testing.assert_allclose(vac.p, np.exp(-x * x) / math.sqrt(math.pi), atol=1e-14)
    assert vac.normalization() == pytest.approx(1.0, abs=1e-8)

    one = quadrature_pdf(pure_state([0, 1, 0, 0]), 2.1, table4)
    np.testing.assert_allclose(one.p, 2 * x * x * np.exp(-x * x) / math.sqrt(math.pi), atol=1e-14)


def test_quadrature_mean_matches_operator(cfg8):
    rng = np.random.default_rng(3)
    psi = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    rho = pure_state(np.concatenate([psi, [0, 0]]))
    table = build_hermite_table(7, cfg8.x_grid)
    for theta in (0.0, 0.4, 2.5, 5.0):
        dist = quadrature_pdf(rho, theta, table)
        direct = np.trace(rho.entries @ rotated_quadrature_matrix(theta, 8)).real
        assert dist.expectation(cfg8.x_grid) == pytest.approx(direct, abs=1e-10)
        assert dist.imag_residue < 1e-12


def test_quadrature_pdf_warns_at_truncation_edge(table4):
    with pytest.warns(TruncationWarning):
        quadrature_pdf(pure_state([0, 0, 0, 1]), 0.0, table4)


def test_matrix_elements(cfg4):
    assert matrix_element(lambda x: x, 1, 0, cfg4) == pytest.approx(2 ** -0.5, abs=1e-13)
    assert matrix_element(lambda x: x * x, 0, 0, cfg4) == pytest.approx(0.5, abs=1e-13)
    G = operator_matrix(lambda x: x, cfg4)
    np.testing.assert_allclose(G, build_ladder_operators(4).position, atol=1e-13)
    with pytest.raises(ValidationError):
        matrix_element(lambda x: x, -1, 0, cfg4)


def test_operator_matrix_certification_catches_low_order():
    cfg = make_fock_config(4, gh_order=8)
    with pytest.raises(InsufficientQuadratureError):
        operator_matrix(np.sign, cfg)


def test_commutation_relations_with_bounded_function():
    cfg = make_fock_config(60)
    phi = np.zeros(60, dtype=complex)
    phi[:3] = [0.6, 0.8j, 0.0]

    def g(x):
        return np.exp(-0.5 * x * x)

    def g_prime(x):
        return -x * np.exp(-0.5 * x * x)

    assert commutator_residual(g, g_prime, phi, cfg, relation=1) < 1e-8
    assert commutator_residual(g, g_prime, phi, cfg, relation=2) < 1e-8


def test_fock_config_validation():
    with pytest.raises(ValidationError):
        make_fock_config(0)
    cfg = make_fock_config(8)
    assert cfg.x_grid[0] == pytest.approx(-9.0)
    assert cfg.x_grid[-1] == pytest.approx(9.0)
    assert hash(cfg) == hash(make_fock_config(8))
    with pytest.raises(ValidationError):
        make_fock_config(8, gh_order=MAX_GH_ORDER + 1)


@pytest.mark.parametrize("order", [384, 512, 1024])
def test_gauss_hermite_rule_stays_finite_at_high_order(order):
    t, w = gauss_hermite_rule(order)
    assert np.all(np.isfinite(t)) and np.all(np.isfinite(w))
    assert np.all(w > 0)
    assert np.sum(w) == pytest.approx(math.sqrt(math.pi), rel=1e-10)
    assert np.sum(w * t * t) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-10)


def test_gauss_hermite_rule_rejects_bad_orders():
    with pytest.raises(ValidationError):
        gauss_hermite_rule(0)
    with pytest.raises(ValidationError):
        gauss_hermite_rule(2 * MAX_GH_ORDER + 1)


def test_certification_at_high_order():
    cfg = make_fock_config(4, gh_order=384)
    assert matrix_element(lambda x: x * x, 1, 1, cfg) == pytest.approx(1.5, abs=1e-12)
    G = operator_matrix(lambda x: np.exp(-x * x), cfg)
    assert np.all(np.isfinite(G))


def test_doubling_tolerance_is_configurable():
    with pytest.raises(ValidationError):
        make_fock_config(4, doubling_tol=0.0)
    loose = make_fock_config(4, gh_order=8, doubling_tol=10.0)
    assert np.all(np.isfinite(operator_matrix(np.sign, loose)))
    with pytest.raises(InsufficientQuadratureError):
        operator_matrix(np.sign, loose, tol=1e-9)
    strict = make_fock_config(4, gh_order=8)
    assert np.isfinite(matrix_element(np.sign, 1, 0, strict, tol=10.0))


def test_quadrature_pdf_logs_imaginary_residue(table4, caplog):
    vac = pure_state([1, 0, 0, 0])
    with caplog.at_level("WARNING", logger="core.fock_core"):
        quadrature_pdf(vac, 0.3, table4)
    assert "imaginary residue" not in caplog.text
    with caplog.at_level("WARNING", logger="core.fock_core"):
        quadrature_pdf(vac, 0.3, table4, imag_tol=-1.0)
    assert "imaginary residue" in caplog.text


def test_quadrature_distribution_check(table4):
    dist = quadrature_pdf(pure_state([0, 1, 0, 0]), 1.2, table4)
    assert dist.check()

    doubled = QuadratureDistribution(theta=1.2, x=dist.x, p=2 * dist.p)
    with pytest.warns(DensityWarning, match="integrates"):
        assert not doubled.check()
    assert doubled.check(normalization_tol=2.0)

    dipped = dist.p.copy()
    dipped[len(dipped) // 2] = -1e-6
    with pytest.warns(DensityWarning, match="dips"):
        assert not QuadratureDistribution(theta=1.2, x=dist.x, p=dipped).check()
    assert QuadratureDistribution(theta=1.2, x=dist.x, p=dipped).check(negativity_tol=-1e-5)


def _mixed_state(dim, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    entries = g @ g.conj().T
    return make_density_matrix(entries / np.trace(entries).real)


def test_quadrature_pdf_is_periodic_in_theta(table4):
    rho = _mixed_state(4, seed=12)
    for theta in (0.0, 1.0, 2.5, 6.0):
        base = quadrature_pdf(rho, theta, table4, edge_tol=math.inf)
        for turns in (-1, 1, 2):
            shifted = quadrature_pdf(rho, theta + 2 * math.pi * turns, table4, edge_tol=math.inf)
            assert shifted.theta == pytest.approx(base.theta, abs=1e-14)
            np.testing.assert_allclose(shifted.p, base.p, atol=1e-13)


def test_quadrature_pdf_is_lipschitz_in_theta(table4):
    rho = _mixed_state(4, seed=13)
    bound = 2 * rho.dim ** 2 * np.max(np.abs(rho.entries))
    step = 1e-6
    for theta in (0.2, 3.0, 2 * math.pi - 1e-7):
        first = quadrature_pdf(rho, theta, table4, edge_tol=math.inf)
        second = quadrature_pdf(rho, theta + step, table4, edge_tol=math.inf)
        assert np.max(np.abs(first.p - second.p)) <= bound * step


def test_matrix_element_is_symmetric(cfg8):
    kernels = (lambda x: x * x, lambda x: np.exp(-x * x), lambda x: np.cos(x))
    for g in kernels:
        for m, n in ((0, 1), (2, 5), (3, 7), (6, 6)):
            assert matrix_element(g, m, n, cfg8) == matrix_element(g, n, m, cfg8)
    G = operator_matrix(lambda x: np.cos(x), cfg8)
    np.testing.assert_allclose(G, G.T, atol=1e-13)
