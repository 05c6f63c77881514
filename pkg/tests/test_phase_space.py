import math

import numpy as np
import pandas as pd
import pytest

from core.errors import AngleCoverageError, DensityWarning, SupportWarning, ValidationError
from core.fock_core import DensityMatrix, build_hermite_table, make_density_matrix, pure_state, quadrature_pdf
from phase_space.phase_space import (
    PhaseSpaceGrid,
    RadonConfig,
    compare_wigner_paths,
    displacement_elements,
    grid_for_dim,
    grid_from_json,
    grid_to_csv,
    grid_to_json,
    half_circle_angles,
    husimi,
    make_phase_space_grid,
    radon_projection,
    smoothed_wigner,
    weyl_condition_scan,
    wigner_direct,
    wigner_inverse_radon,
)
from reconstruction.pattern_tomography import make_uniform_angle_grid
from simulation.measurement_sim import random_density_matrix, sample_all_angles


def exact_projections(rho, angles, x_points=4097):
    half = (math.sqrt(2 * rho.dim) + 3) * math.sqrt(2)
    table = build_hermite_table(rho.dim - 1, np.linspace(-half, half, x_points))
    return [quadrature_pdf(rho, float(t), table, edge_tol=math.inf) for t in angles]


def test_grid_validation():
    grid = make_phase_space_grid(3.0, 61)
    assert grid.values.shape == (61, 61)
    assert grid.dq == pytest.approx(0.1)
    with pytest.raises(ValidationError):
        PhaseSpaceGrid(np.array([0.0, 1.0, 3.0]), np.array([0.0, 1.0]))
    with pytest.raises(ValidationError):
        PhaseSpaceGrid(np.zeros(2), np.array([0.0, 1.0]))
    with pytest.raises(ValidationError):
        make_phase_space_grid(-1.0)


def test_wigner_reference_values():
    grid = grid_for_dim(2, 129)
    vac = wigner_direct(pure_state([1, 0]), grid)
    one = wigner_direct(pure_state([0, 1]), grid)
    assert vac.value_at(0, 0) == pytest.approx(1 / math.pi, abs=1e-14)
    assert one.value_at(0, 0) == pytest.approx(-1 / math.pi, abs=1e-14)
    assert vac.integral() == pytest.approx(1.0, abs=1e-3)
    assert one.integral() == pytest.approx(1.0, abs=1e-3)


def test_wigner_parity_identity():
    rho = random_density_matrix(5, seed=13)
    w = wigner_direct(rho, grid_for_dim(5, 129))
    parity = np.sum((-1.0) ** np.arange(5) * np.diag(rho.entries).real) / math.pi
    assert w.value_at(0, 0) == pytest.approx(parity, abs=1e-8)


def test_wigner_marginals_match_quadrature_densities():
    for dim, seed in ((3, 1), (6, 2)):
        rho = random_density_matrix(dim, seed=seed)
        w = wigner_direct(rho, grid_for_dim(dim, 256))
        table = build_hermite_table(dim - 1, np.linspace(-5, 5, 201))
        for theta in np.linspace(0, math.pi, 8, endpoint=False):
            marginal = radon_projection(w, float(theta), table.x)
            exact = quadrature_pdf(rho, float(theta), table, edge_tol=math.inf).p
            assert np.max(np.abs(marginal - exact)) <= 5e-3


def test_support_warning_on_small_grid():
    with pytest.warns(SupportWarning):
        wigner_direct(pure_state([1, 0]), make_phase_space_grid(1.0, 21))


def test_radon_config_validation():
    with pytest.raises(ValidationError):
        RadonConfig(filter="hann")
    with pytest.raises(ValidationError):
        RadonConfig(cutoff=0.0)
    with pytest.raises(ValidationError):
        RadonConfig(cutoff=1.5)
    with pytest.raises(ValidationError):
        RadonConfig(angle_count=4).check_dim(3)
    assert RadonConfig.from_dict({"filter": "ram-lak", "other": 1}).filter == "ram-lak"


@pytest.mark.parametrize("vector", [[1, 0], [0, 1]])
def test_back_projection_matches_direct_wigner(vector):
    rho = pure_state(vector)
    report = compare_wigner_paths(rho, RadonConfig(filter="ram-lak", angle_count=64, x_bins=256))
    assert report["sup_error"] <= 0.02
    if vector[1]:
        assert report["center_radon"] < -0.2


def test_back_projection_folds_full_circle():
    rho = pure_state([0, 1])
    dists = exact_projections(rho, make_uniform_angle_grid(64).angles)
    grid = grid_for_dim(2, 129)
    w = wigner_inverse_radon(dists, RadonConfig(angle_count=32), grid=grid)
    direct = wigner_direct(rho, grid)
    assert np.max(np.abs(w.values - direct.values)) <= 0.02


def test_back_projection_coverage_errors():
    rho = pure_state([1, 0])
    with pytest.raises(AngleCoverageError):
        wigner_inverse_radon(exact_projections(rho, [0.3]))
    with pytest.raises(AngleCoverageError):
        wigner_inverse_radon(exact_projections(rho, [0.0, 0.4, 2.0]))


def test_back_projection_from_samples():
    rho = pure_state([1, 0])
    batches = sample_all_angles(rho, half_circle_angles(32), 100000, seed=9)
    grid = make_phase_space_grid(4.0, 81)
    w = wigner_inverse_radon(batches, RadonConfig(cutoff=0.5, angle_count=32, x_bins=64), grid=grid)
    assert w.value_at(0, 0) == pytest.approx(1 / math.pi, abs=0.03)


def test_husimi_values():
    grid = grid_for_dim(2, 161)
    vac = husimi(pure_state([1, 0]), grid)
    one = husimi(pure_state([0, 1]), grid)
    assert vac.value_at(0, 0) == pytest.approx(1 / math.pi, abs=1e-14)
    assert one.value_at(0, 0) == pytest.approx(0.0, abs=1e-14)
    assert vac.integral() == pytest.approx(1.0, abs=1e-3)
    assert np.all(one.values >= 0)


def test_husimi_reports_negative_surfaces():
    grid = make_phase_space_grid(8.0, 161)
    unphysical = DensityMatrix(np.diag([1.2, -0.2]))
    with pytest.warns(DensityWarning):
        surface = husimi(unphysical, grid, edge_tol=math.inf)
    q, p = grid.mesh()
    r2 = 0.5 * (q * q + p * p)
    expected = np.exp(-r2) * (1.2 - 0.2 * r2) / math.pi
    visible = expected < -2e-12
    assert visible.any()
    np.testing.assert_allclose(surface.values[visible], expected[visible], rtol=1e-10)
    assert np.all(surface.values[(expected < 0) & (expected > -5e-13)] == 0.0)

    with pytest.warns(DensityWarning):
        husimi(random_density_matrix(3, seed=2), grid, negativity_tol=1.0)


def test_husimi_is_smoothed_wigner():
    rho = random_density_matrix(4, seed=6)
    grid = grid_for_dim(4, 257)
    smoothed = smoothed_wigner(wigner_direct(rho, grid))
    direct = husimi(rho, grid)
    assert np.max(np.abs(smoothed.values - direct.values)) <= 5e-3


def test_displacement_elements():
    alpha = np.array([0.3 + 0.4j])
    D = displacement_elements(alpha, 3)
    gauss = math.exp(-0.125)
    assert D[0, 0, 0] == pytest.approx(gauss)
    assert D[1, 0, 0] == pytest.approx(alpha[0] * gauss)
    assert D[0, 1, 0] == pytest.approx(-np.conj(alpha[0]) * gauss)


def test_weyl_scan():
    grid = make_phase_space_grid(4.0, 40)
    vacuum = weyl_condition_scan(pure_state([1, 0]), grid)
    assert vacuum.zero_fraction == 0.0
    assert not vacuum.zero_set_detected
    assert not vacuum.completeness_suspect

    mixed = weyl_condition_scan(make_density_matrix(np.eye(2) / 2), grid)
    assert mixed.zero_set_detected
    assert not mixed.completeness_suspect
    assert "heuristic" in mixed.to_dict()["note"]

    origin = weyl_condition_scan(pure_state([0, 1, 0]), make_phase_space_grid(1.0, 1))
    assert origin.values.values[0, 0] == pytest.approx(1.0, abs=1e-15)


def test_grid_export(tmp_path):
    w = wigner_direct(pure_state([1, 0]), make_phase_space_grid(5.0, 11))
    path = grid_to_csv(w, str(tmp_path / "w.csv"))
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["q", "p", "value"]
    assert len(frame) == 121
    assert frame["value"].max() == pytest.approx(1 / math.pi, rel=1e-15)

    grid_to_json(w, str(tmp_path / "w.json"))
    back = grid_from_json(str(tmp_path / "w.json"))
    np.testing.assert_array_equal(back.values, w.values)
    assert back.label == "wigner_direct"
