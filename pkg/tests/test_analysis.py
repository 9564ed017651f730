import math

import numpy as np
import pytest

from slchaos.analysis import (
    LyapunovEstimate,
    NewtonError,
    Spectrum3,
    char_poly_residual,
    classify_equilibrium,
    classify_spectrum,
    conjecture_report,
    divergence_probe,
    eigenvalues_3x3,
    lyapunov_from_field,
    max_lyapunov,
    newton_fixed_point,
    separation_slope,
)
from slchaos.dynamics import (
    LORENZ_STANDARD_PARAMS,
    SystemKind,
    SystemParams,
    jacobian,
)
from slchaos.timegauge import Gauge

ATTRACTOR_II = SystemParams(2.0, 0.3, 27.0)
GAUGE = Gauge(0.9, 2.0 / 3.0)


class TestEigenvalues:
    def test_diagonal(self):
        spec = eigenvalues_3x3(np.diag([3.0, -1.0, 2.0]))
        for got, want in zip(spec.eigenvalues, (3.0, 2.0, -1.0)):
            assert got == pytest.approx(want + 0j, abs=1e-12)

    def test_identity_triple_root(self):
        spec = eigenvalues_3x3(np.eye(3))
        for lam in spec.eigenvalues:
            assert lam == pytest.approx(1.0 + 0j, abs=1e-12)

    def test_attractor_ii_origin(self):
        """The block structure gives -c exactly plus the quadratic pair
        (-3 +/- sqrt(3.4))/2."""
        spec = eigenvalues_3x3(jacobian(SystemKind.SL, ATTRACTOR_II, (0.0, 0.0, 0.0)))
        lams = spec.eigenvalues
        root = math.sqrt(3.4)
        assert abs(lams[0] - (-3.0 + root) / 2.0) <= 1e-6
        assert abs(lams[1] - (-3.0 - root) / 2.0) <= 1e-6
        assert abs(lams[2] - (-27.0)) <= 1e-12
        assert all(lam.imag == 0.0 for lam in lams)

    def test_complex_pair_ordering(self):
        # companion-style matrix with spectrum {2, 1 +/- 2i}
        m = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [10.0, -9.0, 4.0]])
        spec = eigenvalues_3x3(m)
        assert spec.eigenvalues[0] == pytest.approx(2.0 + 0j, abs=1e-9)
        # conjugates sorted +imag first
        assert spec.eigenvalues[1] == pytest.approx(1.0 + 2.0j, abs=1e-9)
        assert spec.eigenvalues[2] == pytest.approx(1.0 - 2.0j, abs=1e-9)

    def test_double_root(self):
        spec = eigenvalues_3x3(np.diag([2.0, 2.0, -5.0]))
        assert spec.eigenvalues[0] == pytest.approx(2.0 + 0j, abs=1e-10)
        assert spec.eigenvalues[1] == pytest.approx(2.0 + 0j, abs=1e-10)
        assert spec.eigenvalues[2] == pytest.approx(-5.0 + 0j, abs=1e-10)

    def test_residual_invariant_random(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            m = rng.uniform(-30.0, 30.0, (3, 3))
            spec = eigenvalues_3x3(m)
            scale = max(1.0, np.max(np.abs(m)) ** 3)
            assert char_poly_residual(m, spec) <= 1e-9 * scale

    def test_against_lapack(self):
        """Independent oracle: numpy's iterative eigensolver must agree with
        the closed form on generic matrices."""
        rng = np.random.default_rng(1234)
        for _ in range(300):
            m = rng.uniform(-30.0, 30.0, (3, 3))
            ours = sorted(eigenvalues_3x3(m).eigenvalues, key=lambda v: (v.real, v.imag))
            ref = sorted(np.linalg.eigvals(m), key=lambda v: (v.real, v.imag))
            scale = max(1.0, float(np.max(np.abs(m))))
            for a, b in zip(ours, ref):
                assert abs(a - complex(b)) <= 1e-8 * scale

    def test_shape_and_finiteness_checks(self):
        with pytest.raises(ValueError):
            eigenvalues_3x3(np.zeros((2, 2)))
        bad = np.zeros((3, 3))
        bad[1, 1] = math.nan
        with pytest.raises(ValueError):
            eigenvalues_3x3(bad)


class TestClassification:
    def test_attractor_ii_origin_stable_node(self):
        assert classify_equilibrium(SystemKind.SL, ATTRACTOR_II, (0.0, 0.0, 0.0)) == "stable node"

    def test_lorenz_standard_origin_saddle(self):
        # quadratic lambda^2 + 11 lambda - 270 has the positive root
        # (-11 + sqrt(1201))/2 = 11.8277...
        spec = eigenvalues_3x3(jacobian(SystemKind.LORENZ_STANDARD, None, (0.0, 0.0, 0.0)))
        top = (-11.0 + math.sqrt(1201.0)) / 2.0
        assert spec.eigenvalues[0].real == pytest.approx(top, rel=1e-12)
        assert classify_spectrum(spec) == "saddle"

    def test_zero_matrix_marginal(self):
        assert classify_spectrum(eigenvalues_3x3(np.zeros((3, 3)))) == "marginal"

    def test_stable_focus_node(self):
        # b = -2 pushes the origin pair complex: lambda^2 + 2 lambda + 3
        spec = eigenvalues_3x3(jacobian(SystemKind.SL, SystemParams(1.0, -2.0, 27.0), (0.0, 0.0, 0.0)))
        assert classify_spectrum(spec) == "stable focus-node"

    def test_unstable(self):
        assert classify_spectrum(eigenvalues_3x3(np.diag([1.0, 2.0, 3.0]))) == "unstable"

    def test_rejects_non_equilibrium(self):
        with pytest.raises(ValueError, match="not an equilibrium"):
            classify_equilibrium(SystemKind.SL, ATTRACTOR_II, (1.0, 1.0, 1.0))

    def test_origin_never_unstable_for_moderate_params(self):
        # both quadratic roots have negative real parts whenever
        # a(1-b) > 0 and a+1 > 0, so the grid must produce only
        # stable/saddle/marginal labels
        for a in np.linspace(0.5, 5.0, 6):
            for b in np.linspace(0.0, 0.99, 6):
                for c in (1.0, 10.0, 50.0):
                    label = classify_equilibrium(SystemKind.SL, SystemParams(a, b, c), (0.0, 0.0, 0.0))
                    assert label not in ("unstable", "saddle")


class TestNewton:
    def test_zero_iterations_at_origin(self):
        eq = newton_fixed_point(SystemKind.SL, ATTRACTOR_II, (0.0, 0.0, 0.0))
        assert tuple(eq.point) == (0.0, 0.0, 0.0)
        assert eq.residual_norm == 0.0

    def test_refines_to_lorenz_wing_center(self):
        r = math.sqrt(72.0)
        eq = newton_fixed_point(SystemKind.LORENZ_STANDARD, None, (8.0, 9.0, 26.0))
        assert tuple(eq.point) == pytest.approx((r, r, 27.0), rel=1e-9)
        assert eq.residual_norm <= 1e-12

    def test_singular_jacobian_reported(self):
        # a = 0 zeroes the whole first Jacobian row
        with pytest.raises(NewtonError, match="singular"):
            newton_fixed_point(SystemKind.SL, SystemParams(0.0, 0.3, 27.0), (1.0, 1.0, 1.0))

    def test_exhausted_budget_reports_last_iterate(self):
        with pytest.raises(NewtonError, match="no convergence") as info:
            newton_fixed_point(
                SystemKind.LORENZ_STANDARD, None, (3.0, 7.0, 11.0), tol=0.0, max_iter=2
            )
        err = info.value
        assert len(err.last_point) == 3
        assert err.residual > 0.0


class TestLyapunov:
    def test_linear_field_oracle(self):
        rhs = lambda t, s: (-s[0], -2.0 * s[1], -3.0 * s[2])
        est = lyapunov_from_field(rhs, (1.0, 1.0, 1.0), 200.0, 0.5)
        assert abs(est.lambda_max - (-1.0)) <= 0.01

    def test_lorenz_standard_converged_value(self):
        est = max_lyapunov(SystemKind.LORENZ_STANDARD, None, None, (0.1, 0.1, 0.1), 1000.0, 0.5)
        assert est.lambda_max == pytest.approx(0.906, abs=0.1)
        assert est.time_variable == "t"

    def test_stable_equilibrium_contracts(self):
        est = max_lyapunov(SystemKind.SL, ATTRACTOR_II, GAUGE, (0.0, 0.0, 0.0), 500.0, 1.0)
        assert est.lambda_max < 0.0
        assert est.time_variable == "s"
        # contraction rate is the leading origin eigenvalue
        assert est.lambda_max == pytest.approx((-3.0 + math.sqrt(3.4)) / 2.0, abs=1e-3)

    def test_sl_requires_gauge(self):
        with pytest.raises(ValueError, match="gauge"):
            max_lyapunov(SystemKind.SL, ATTRACTOR_II, None, (0.1, 0.1, 0.1), 500.0, 1.0)

    def test_horizon_floor(self):
        with pytest.raises(ValueError):
            max_lyapunov(SystemKind.LORENZ_STANDARD, None, None, (0.1, 0.1, 0.1), 10.0, 0.5)
        with pytest.raises(ValueError):
            LyapunovEstimate(0.1, 10.0, 0.5, 0.0)

    def test_estimate_validation(self):
        with pytest.raises(ValueError):
            LyapunovEstimate(0.1, 1000.0, 0.5, 0.0, "q")
        with pytest.raises(ValueError):
            LyapunovEstimate(0.1, 1000.0, -0.5, 0.0)


class TestDivergenceProbe:
    def test_rejects_zero_offset(self):
        with pytest.raises(ValueError):
            divergence_probe(SystemKind.LORENZ_STANDARD, None, None, (0.1, 0.1, 0.1), 0.0, 10.0)

    def test_decay_at_stable_equilibrium(self):
        series = divergence_probe(SystemKind.SL, ATTRACTOR_II, GAUGE, (0.0, 0.0, 0.0), 1e-6, 50.0)
        assert series.time_variable == "s"
        assert series.separation[0] == 1e-6
        tail = series.separation[len(series.separation) // 10 :]
        assert np.all(np.diff(tail) < 0.0)
        assert separation_slope(series) < 0.0

    def test_lorenz_growth_window_slope(self):
        series = divergence_probe(SystemKind.LORENZ_STANDARD, None, None, (0.1, 0.1, 0.1), 1e-8, 40.0)
        slope = separation_slope(series)
        assert 0.7 <= slope <= 1.1

    def test_slope_sign_matches_lyapunov_for_sl(self):
        est = max_lyapunov(SystemKind.SL, ATTRACTOR_II, GAUGE, (0.1, 0.1, 0.1), 500.0, 1.0)
        series = divergence_probe(SystemKind.SL, ATTRACTOR_II, GAUGE, (0.1, 0.1, 0.1), 1e-8, 500.0)
        assert math.copysign(1.0, est.lambda_max) == math.copysign(1.0, separation_slope(series))


class TestConjecture:
    def test_attractor_ii_origin_witness(self):
        rep = conjecture_report(ATTRACTOR_II)
        assert rep.verdict == "satisfied"
        assert len(rep.equilibria_found) == 1
        assert rep.note == "origin only"

    def test_a235_satisfied(self):
        rep = conjecture_report(SystemParams(47.0 / 20.0, 0.3, 27.0))
        assert rep.verdict == "satisfied"
        assert rep.equilibria_found

    def test_lorenz_params_three_witnesses(self):
        rep = conjecture_report(LORENZ_STANDARD_PARAMS)
        assert rep.verdict == "satisfied"
        assert len(rep.equilibria_found) == 3
        assert "pair" in rep.note
