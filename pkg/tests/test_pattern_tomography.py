import math
import warnings

import numpy as np
import pytest

from core.errors import (
    ClosedFormMismatchError,
    DensityWarning,
    GridTooCoarseError,
    InsufficientSamplesWarning,
    TruncationWarning,
    ValidationError,
)
from core.fock_core import (
    QuadratureDistribution,
    build_hermite_table,
    make_fock_config,
    pure_state,
    quadrature_pdf,
    trace_distance,
)
from core.special_functions import lemma4_diagonal, pattern_functions, pattern_kernel
from reconstruction.pattern_tomography import (
    angular_coefficient,
    build_pattern_system,
    compare_to_truth,
    jittered_angle_grid,
    lemma5_trace,
    load_quadrature_data,
    make_angle_grid,
    make_uniform_angle_grid,
    project_to_physical,
    reconstruct,
    required_angle_count,
    result_from_json,
    result_to_json,
    write_densities,
)
from simulation.measurement_sim import (
    StateSpec,
    make_state,
    random_density_matrix,
    sample_all_angles,
    write_sample_batches,
)


def exact_data(rho, count=None):
    cfg = make_fock_config(rho.dim)
    table = build_hermite_table(rho.dim - 1, cfg.x_grid)
    grid = make_uniform_angle_grid(count or required_angle_count(rho.dim, rho.dim - 1))
    return cfg, [quadrature_pdf(rho, float(t), table) for t in grid.angles]


def test_angle_grids():
    assert required_angle_count(4, 3) == 10
    grid = make_uniform_angle_grid(4)
    np.testing.assert_allclose(grid.angles, [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    assert grid.is_exact_for(2, 1)
    assert not grid.is_exact_for(4, 3)

    assert make_angle_grid(grid.angles).uniform
    jittered = jittered_angle_grid(12, 0.05, seed=2)
    assert not jittered.uniform
    assert jittered.weights.sum() == pytest.approx(1.0, abs=1e-14)

    with pytest.raises(ValidationError):
        make_angle_grid([1.0, 0.5])
    with pytest.raises(ValidationError):
        make_angle_grid([0.0, 7.0])


def test_angular_coefficient():
    grid = make_uniform_angle_grid(8)
    constant = {float(t): 1.0 for t in grid.angles}
    assert angular_coefficient(0, constant) == pytest.approx(1.0)
    cosine = {float(t): math.cos(t) for t in grid.angles}
    assert angular_coefficient(1, cosine) == pytest.approx(0.5, abs=1e-15)
    assert angular_coefficient(2, cosine) == pytest.approx(0.0, abs=1e-15)

    with pytest.raises(GridTooCoarseError):
        angular_coefficient(3, {float(t): 1.0 for t in make_uniform_angle_grid(4).angles}, dim=4)


def test_dual_path_on_random_state():
    rho = random_density_matrix(5, seed=21)
    cfg, data = exact_data(rho, required_angle_count(5, 4))
    kernels = pattern_functions(6, cfg.x_grid)
    for m in (0, 3, 6):
        by_angle = {d.theta: d.expectation(kernels[m]) for d in data}
        for k in range(5):
            from_data = angular_coefficient(k, by_angle, dim=5)
            from_rho = lemma5_trace(rho, k, pattern_kernel(m), cfg)
            assert abs(from_data - from_rho) <= 1e-9 * max(1.0, abs(from_rho))


def test_pattern_system_structure(cfg8):
    system = build_pattern_system(1, 3, cfg8)
    assert np.allclose(np.triu(system.M, 1), 0.0)
    expected = [lemma4_diagonal(1, l) for l in range(4)]
    np.testing.assert_allclose(np.diag(system.M), expected, rtol=1e-7)

    x = np.array([0.1 + 0.2j, -0.3j, 0.05, 0.0])
    recovered = system.solve(system.M @ x)
    np.testing.assert_allclose(recovered, x, atol=1e-12)
    assert np.max(system.residuals(recovered)) < 1e-12

    with pytest.raises(ValidationError):
        system.solve(np.zeros(3))


def test_reconstruct_vacuum_exact():
    cfg, data = exact_data(pure_state([1, 0, 0, 0]))
    result = reconstruct(data, 4, cfg)
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(result.rho_hat, expected, atol=1e-9)
    assert result.diagnostics["mode"] == "exact"
    assert result.diagnostics["exactness_certified"]


def test_reconstruct_random_state_exact():
    rho = random_density_matrix(4, seed=5)
    cfg, data = exact_data(rho)
    result = reconstruct(data, 4, cfg)
    report = compare_to_truth(result, rho)
    assert report["max_entry_error_hat"] <= 1e-7
    assert report["fidelity"] >= 1 - 1e-8
    assert result.diagnostics["hermitian_defect"] < 1e-9


def test_reconstruct_from_jittered_angles():
    rho = random_density_matrix(4, seed=17)
    cfg = make_fock_config(4)
    table = build_hermite_table(3, cfg.x_grid)
    grid = jittered_angle_grid(64, 1e-3, seed=5)
    assert not grid.uniform
    data = [quadrature_pdf(rho, float(t), table) for t in grid.angles]
    jittered = reconstruct(data, 4, cfg)
    _, uniform_data = exact_data(rho, 64)
    uniform = reconstruct(uniform_data, 4, cfg)
    assert np.max(np.abs(jittered.rho_hat - uniform.rho_hat)) <= 1e-2
    assert np.max(np.abs(jittered.rho_hat - rho.entries)) <= 1e-2


def test_reconstruct_tolerances():
    rho = random_density_matrix(3, seed=8)
    cfg, data = exact_data(rho)
    with pytest.raises(ClosedFormMismatchError):
        reconstruct(data, 3, cfg, rel_tol=1e-30)

    scaled = [QuadratureDistribution(theta=d.theta, x=d.x, p=1.5 * d.p) for d in data]
    with pytest.warns(DensityWarning):
        reconstruct(scaled, 3, cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("error", DensityWarning)
        reconstruct(scaled, 3, cfg, normalization_tol=1.0)


def test_reconstruct_rejects_bad_data():
    rho = pure_state([1, 0, 0, 0])
    cfg, data = exact_data(rho, count=6)
    with pytest.raises(GridTooCoarseError):
        reconstruct(data, 4, cfg)

    batches = sample_all_angles(rho, make_uniform_angle_grid(10).angles, 50, seed=1)
    with pytest.raises(ValidationError):
        reconstruct(data[:2] + batches[:2], 4, cfg)
    with pytest.raises(ValidationError):
        reconstruct([], 4, cfg)


def test_small_batches_warn():
    rho = pure_state([1, 0])
    grid = make_uniform_angle_grid(required_angle_count(2, 1))
    batches = sample_all_angles(rho, grid.angles, 200, seed=4)
    with pytest.warns(InsufficientSamplesWarning):
        result = reconstruct(batches, 2, make_fock_config(2))
    assert result.diagnostics["mode"] == "sampled"
    assert result.diagnostics["sample_counts"] == [200] * grid.count


def test_project_to_physical():
    rho_hat = np.array([[0.7, 0.6], [0.6, 0.4]], dtype=complex)
    rho = project_to_physical(rho_hat)
    assert rho.trace() == pytest.approx(1.0, abs=1e-14)
    assert rho.eigenvalues()[0] >= -1e-15


def test_expectations_do_not_separate_number_states():
    grid = make_uniform_angle_grid(16)
    results = []
    for n in (0, 1):
        rho = make_state(StateSpec("number", 4, n=n))
        for theta in grid.angles:
            dist = quadrature_pdf(rho, float(theta), build_hermite_table(3, make_fock_config(4).x_grid))
            assert abs(dist.expectation(dist.x)) < 1e-12
        cfg, data = exact_data(rho)
        results.append(reconstruct(data, 4, cfg))
    assert trace_distance(results[0].rho_phys, results[1].rho_phys) >= 0.9


def test_result_json_and_data_loading(tmp_path):
    rho = random_density_matrix(3, seed=8)
    cfg, data = exact_data(rho)
    write_densities(data, str(tmp_path / "exact"))
    loaded = load_quadrature_data(str(tmp_path / "exact"))
    assert len(loaded) == len(data)
    result = reconstruct(loaded, 3, cfg)

    path = tmp_path / "reconstruction.json"
    result_to_json(result, str(path))
    back = result_from_json(str(path))
    np.testing.assert_allclose(back.rho_hat, result.rho_hat, atol=0)
    assert back.diagnostics["mode"] == "exact"

    batches = sample_all_angles(rho, make_uniform_angle_grid(7).angles, 100, seed=2)
    write_sample_batches(batches, str(tmp_path / "samples"))
    assert len(load_quadrature_data(str(tmp_path / "samples"))) == 7

    with pytest.raises(FileNotFoundError):
        load_quadrature_data(str(tmp_path / "empty_dir_that_does_not_exist" / "x.json"))


@pytest.mark.slow
def test_exact_reconstruction_acceptance():
    for dim in (4, 6, 8):
        for seed in range(7):
            rho = random_density_matrix(dim, seed=100 * dim + seed)
            cfg, data = exact_data(rho)
            report = compare_to_truth(reconstruct(data, dim, cfg), rho)
            assert report["max_entry_error_hat"] <= 1e-7, (dim, seed)
            assert report["fidelity"] >= 1 - 1e-8, (dim, seed)


@pytest.mark.slow
def test_sampled_cat_state_acceptance():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        truth = make_state(StateSpec("cat", 4, alpha=1.5), strict=False)
        cfg = make_fock_config(4)
        angles = make_uniform_angle_grid(64).angles

        def error(count, seed):
            batches = sample_all_angles(truth, angles, count, seed=seed, edge_tol=math.inf)
            result = reconstruct(batches, 4, cfg)
            return result, float(np.linalg.norm(result.rho_hat - truth.entries))

        result, _ = error(10 ** 6, seed=7)
        assert compare_to_truth(result, truth)["trace_distance"] <= 0.05

        counts = np.array([10 ** 4, 10 ** 5, 10 ** 6])
        errors = [np.mean([error(int(n), seed)[1] for seed in (1, 2, 3)]) for n in counts]
        slope = np.polyfit(np.log(counts), np.log(errors), 1)[0]
        assert -0.65 <= slope <= -0.35
