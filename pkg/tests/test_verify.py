import numpy as np
import numpy.testing as npt
import pytest

from poisson_grad import (
    CosineLattice,
    Field,
    GridSpec,
    LinearForcing,
    ShiftedQuadratic,
    action_gradient,
    boundary_check,
    el_residual,
    laplacian,
    minimize,
    node_coordinates,
    split_mean,
    wirtinger_check,
    wirtinger_constant,
)
from poisson_grad.solver import SolverConfig

from helpers import gaussian_field

TWO_PI = 2.0 * np.pi


class TestElResidual:
    def test_zero_field_is_critical_for_cosine(self):
        spec = GridSpec((1.0, 1.0), (8, 8), n=1)
        pot = CosineLattice([1.0], [TWO_PI], floor=0.1, p=2)
        residual, norms = el_residual(Field.zeros(spec), pot)
        npt.assert_array_equal(residual.values, 0.0)
        assert norms.l2 == 0.0 and norms.linf == 0.0

    def test_linear_forcing_direct_recomputation(self):
        spec = GridSpec((1.0,), (16,), n=2)
        rng = np.random.default_rng(1)
        f = Field(spec, rng.standard_normal(spec.shape))
        u = gaussian_field(spec, rng)
        residual, _ = el_residual(u, LinearForcing(f))
        direct = laplacian(u).values + f.values
        npt.assert_allclose(residual.values, direct, rtol=0, atol=1e-12)

    def test_negates_action_gradient(self):
        spec = GridSpec((1.0, 1.0), (8, 8), n=2)
        pot = ShiftedQuadratic((0.5, -0.25), floor=1.0, p=2)
        u = gaussian_field(spec, np.random.default_rng(4), scale=2.0)
        residual, _ = el_residual(u, pot)
        g = action_gradient(u, pot)
        scale = 1.0 + np.max(np.abs(g.values))
        assert np.max(np.abs(residual.values + g.values)) <= 1e-13 * scale

    def test_converged_solve_satisfies_tolerance(self):
        spec = GridSpec((1.0,), (32,), n=1)
        t = node_coordinates(spec)[..., 0]
        f = Field(spec, 0.01 * np.sin(TWO_PI * t))
        cfg = SolverConfig(max_iters=20000, tol_residual=1e-8)
        final, report = minimize(LinearForcing(f), Field.zeros(spec), cfg)
        assert report.status == "converged"
        _, norms = el_residual(final, LinearForcing(f))
        assert norms.l2 <= 1e-8


class TestBoundaryCheck:
    def test_closed_export_passes_exactly(self):
        spec = GridSpec((1.0, 2.0), (8, 6), n=2)
        u = gaussian_field(spec, np.random.default_rng(3))
        report = boundary_check(u.closed_values(), spec)
        assert report.passed
        for ax in report.axes:
            assert ax.value_mismatch == 0.0
            assert ax.quotient_mismatch == 0.0

    def test_corrupted_face_fails_on_that_axis(self):
        spec = GridSpec((1.0, 1.0), (8, 8), n=1)
        u = gaussian_field(spec, np.random.default_rng(5))
        closed = u.closed_values().copy()
        closed[8, 3, 0] += 0.1  # break one value on the axis-0 far face
        report = boundary_check(closed, spec)
        assert not report.passed
        assert report.axes[0].value_mismatch >= 0.1 * 0.99
        assert report.axes[1].value_mismatch == 0.0

    def test_external_periodic_sample_passes(self):
        spec = GridSpec((2.0,), (32,), n=1)
        t_closed = np.linspace(0.0, 2.0, 33)
        closed = np.sin(TWO_PI * t_closed / 2.0)[:, np.newaxis]
        report = boundary_check(closed, spec)
        assert report.passed
        assert report.axes[0].value_mismatch <= 1e-12
        assert report.axes[0].quotient_mismatch <= 1e-12

    def test_wrong_node_count_rejected(self):
        spec = GridSpec((1.0,), (8,), n=1)
        with pytest.raises(ValueError, match="shape"):
            boundary_check(np.zeros((8, 1)), spec)


class TestWirtinger:
    def test_constant_field(self):
        spec = GridSpec((1.0,), (16,), n=1)
        report = wirtinger_check(Field.constant(spec, 3.0))
        assert report.passed
        assert report.lhs <= 1e-13
        assert report.constant == pytest.approx(
            spec.spacings[0] / (2.0 * np.sin(np.pi / 16))
        )

    def test_lowest_mode_achieves_equality(self):
        spec = GridSpec((1.0,), (32,), n=1)
        t = node_coordinates(spec)[..., 0]
        u = Field(spec, np.sin(TWO_PI * t))
        report = wirtinger_check(u)
        assert report.passed
        assert report.lhs == pytest.approx(report.rhs, rel=1e-12)

    def test_lowest_mode_on_slackest_axis_p2(self):
        # axis 0 is coarser per unit length, so it sets the constant
        spec = GridSpec((2.0, 1.0), (16, 16), n=1)
        assert wirtinger_constant(spec) == pytest.approx(
            spec.spacings[0] / (2.0 * np.sin(np.pi / 16))
        )
        t = node_coordinates(spec)
        u = Field(spec, np.sin(TWO_PI * t[..., 0] / 2.0))
        report = wirtinger_check(u)
        assert report.lhs == pytest.approx(report.rhs, rel=1e-12)

    def test_random_zero_mean_sweep(self):
        spec = GridSpec((1.0, 1.0), (8, 8), n=2)
        rng = np.random.default_rng(11)
        for _ in range(100):
            _, tilde = split_mean(gaussian_field(spec, rng))
            assert wirtinger_check(tilde).passed

    @pytest.mark.parametrize("nodes", [8, 16, 32, 64])
    def test_constant_converges_to_continuum(self, nodes):
        extent = 2.0
        spec = GridSpec((extent,), (nodes,), n=1)
        gap = abs(wirtinger_constant(spec) - extent / TWO_PI)
        assert gap <= 1.1 * extent * np.pi / (12.0 * nodes**2)
