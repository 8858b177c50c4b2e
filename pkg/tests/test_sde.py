import math

import numpy as np
import pytest

from stochpop import (
    EmptySupportError,
    Grid,
    GrowthParams,
    LogisticParams,
    ModelCoefficients,
    NumericalError,
    ParameterDomainError,
    PathConfig,
    RngStream,
    empirical_density,
    histogram_density,
    make_coefficients,
    simulate_ensemble,
    simulate_path,
    simulate_qsd_ensemble,
)


class TestPathConfig:
    def test_validation(self):
        with pytest.raises(ParameterDomainError):
            PathConfig(t_end=1.0, dt=0.0)
        with pytest.raises(ParameterDomainError):
            PathConfig(t_end=0.5, dt=1.0)
        with pytest.raises(ParameterDomainError):
            PathConfig(t_end=1.0, dt=0.1, x0=0.0)
        with pytest.raises(ParameterDomainError):
            PathConfig(t_end=1.0, dt=0.1, scheme="milstein")

    def test_step_count(self):
        assert PathConfig(t_end=1.0, dt=1e-3).n_steps == 1000


class TestSimulatePath:
    def test_noise_free_equals_forward_euler(self):
        gp = GrowthParams(p=1, q=2, s=0.8)
        coeffs = make_coefficients(gp)
        cfg = PathConfig(t_end=5.0, dt=1e-2, x0=1.0)
        path = simulate_path(coeffs, 1.5, cfg, RngStream(1))
        x = 1.0
        for _ in range(cfg.n_steps):
            x = x + float(coeffs.f1(np.asarray(x))) * cfg.dt
        assert path.states[-1] == x  # bit-exact degeneration
        assert path.extinct_at is None
        assert len(path.states) == cfg.n_steps + 1

    def test_determinism_bytes(self):
        gp = GrowthParams(p=1, q=2, s=1, sigma=0.1, epsilon=0.2)
        coeffs = make_coefficients(gp)
        cfg = PathConfig(t_end=2.0, dt=1e-3, x0=0.5)
        a = simulate_path(coeffs, 1.5, cfg, RngStream(9, 3))
        b = simulate_path(coeffs, 1.5, cfg, RngStream(9, 3))
        assert a.states.tobytes() == b.states.tobytes()

    def test_growth_gaussian_regime_stays_positive(self):
        # q - p - sigma^2/2 > 0: persistence regime
        gp = GrowthParams(p=1, q=2, s=0.8, sigma=0.1)
        coeffs = make_coefficients(gp)
        cfg = PathConfig(t_end=50.0, dt=2e-3, x0=1.0)
        for seed in range(5):
            path = simulate_path(coeffs, 1.5, cfg, RngStream(100 + seed))
            assert path.extinct_at is None
            assert np.all(path.states > 0.0)

    def test_logistic_gaussian_path_bounded(self):
        lp = LogisticParams(s=0.5, k1=0.8, k2=1.2, beta_sens=5.0, sigma=0.1)
        coeffs = make_coefficients(lp)
        cfg = PathConfig(t_end=50.0, dt=2e-3, x0=1.0)
        for seed in range(20):
            path = simulate_path(coeffs, 1.5, cfg, RngStream(200 + seed))
            outside = np.mean((path.states < 0.5 * lp.k1) | (path.states > 1.5 * lp.k2))
            assert outside < 0.01

    def test_absorption_is_permanent(self):
        # strong downward drift forces extinction through zero
        down = ModelCoefficients(
            f1=lambda x: -5.0 * np.ones_like(np.asarray(x, dtype=float)),
            f2=lambda x: 0.0 * np.asarray(x, dtype=float),
            f3=lambda x: 0.0 * np.asarray(x, dtype=float),
            domain_hint=1.0,
            has_diffusion=False,
            has_jumps=False,
        )
        cfg = PathConfig(t_end=1.0, dt=1e-2, x0=0.2)
        path = simulate_path(down, 1.0, cfg, RngStream(5))
        assert path.extinct_at is not None
        dead = path.times >= path.extinct_at
        assert np.all(path.states[dead] == 0.0)
        assert np.all(path.states >= 0.0)

    def test_overflow_raises_with_step_index(self):
        boom = ModelCoefficients(
            f1=lambda x: np.asarray(x, dtype=float) ** 3,
            f2=lambda x: 0.0 * np.asarray(x, dtype=float),
            f3=lambda x: 0.0 * np.asarray(x, dtype=float),
            domain_hint=1.0,
            has_diffusion=False,
            has_jumps=False,
        )
        cfg = PathConfig(t_end=5.0, dt=0.5, x0=3.0)
        with pytest.raises(NumericalError) as err:
            simulate_path(boom, 1.0, cfg, RngStream(5))
        assert err.value.step is not None
        assert err.value.path == 0


class TestSimulateEnsemble:
    GP = GrowthParams(p=1, q=2, s=1, sigma=0.1, epsilon=0.1)

    def test_singleton_matches_single_path(self):
        coeffs = make_coefficients(self.GP)
        cfg = PathConfig(t_end=1.0, dt=1e-3, x0=0.5)
        ens = simulate_ensemble(coeffs, 1.5, cfg, 1, RngStream(77))
        path = simulate_path(coeffs, 1.5, cfg, RngStream(77, 0))
        assert ens.terminal_states[0] == path.states[-1]

    def test_deterministic_noise_free(self):
        coeffs = make_coefficients(GrowthParams(p=1, q=2, s=1))
        cfg = PathConfig(t_end=1.0, dt=1e-2, x0=0.5)
        ens = simulate_ensemble(coeffs, 1.5, cfg, 100, RngStream(3))
        assert np.unique(ens.terminal_states).size == 1

    def test_rerun_identical(self):
        coeffs = make_coefficients(self.GP)
        cfg = PathConfig(t_end=1.0, dt=1e-3, x0=0.5)
        a = simulate_ensemble(coeffs, 1.2, cfg, 500, RngStream(8))
        b = simulate_ensemble(coeffs, 1.2, cfg, 500, RngStream(8))
        assert a.terminal_states.tobytes() == b.terminal_states.tobytes()
        assert a.extinct_at.tobytes() == b.extinct_at.tobytes()

    def test_block_size_does_not_change_results(self):
        coeffs = make_coefficients(self.GP)
        cfg = PathConfig(t_end=0.5, dt=1e-3, x0=0.5)
        small = simulate_ensemble(coeffs, 1.2, cfg, 203, RngStream(8), block_size=7)
        large = simulate_ensemble(coeffs, 1.2, cfg, 203, RngStream(8), block_size=512)
        assert small.terminal_states.tobytes() == large.terminal_states.tobytes()
        assert small.max_states.tobytes() == large.max_states.tobytes()

    def test_weak_convergence_in_dt(self):
        # halving dt moves the mean by less than the Monte Carlo standard error
        gp = GrowthParams(p=1, q=2, s=0.8, sigma=0.1)
        coeffs = make_coefficients(gp)
        n = 100_000
        coarse = simulate_ensemble(
            coeffs, 1.5, PathConfig(t_end=5.0, dt=1e-2, x0=1.0), n, RngStream(91)
        )
        fine = simulate_ensemble(
            coeffs, 1.5, PathConfig(t_end=5.0, dt=5e-3, x0=1.0), n, RngStream(92)
        )
        se = np.std(fine.terminal_states) / math.sqrt(n)
        assert abs(coarse.terminal_states.mean() - fine.terminal_states.mean()) < 2 * se

    def test_needs_at_least_one_path(self):
        coeffs = make_coefficients(self.GP)
        with pytest.raises(ParameterDomainError):
            simulate_ensemble(coeffs, 1.2, PathConfig(t_end=1.0, dt=1e-2), 0, RngStream(1))


class TestQsdEnsemble:
    def test_matches_plain_conditional_at_short_horizon(self):
        # growth model, mild killing: both estimators target the same
        # conditioned density, so their histograms agree up to sampling noise
        gp = GrowthParams(p=1, q=2, s=1, sigma=0.0, epsilon=0.1)
        coeffs = make_coefficients(gp)
        grid = Grid(0.0, coeffs.domain_hint, 128)
        cfg = PathConfig(t_end=8.0, dt=1e-3, x0=0.5)
        plain = simulate_ensemble(coeffs, 1.0, cfg, 10_000, RngStream(55))
        fv = simulate_qsd_ensemble(coeffs, 1.0, cfg, 10_000, RngStream(56), grid.x_max)
        h_plain = empirical_density(plain, grid)
        h_fv = empirical_density(fv, grid)
        from stochpop import l1_distance

        assert l1_distance(h_plain, h_fv) < 0.12
        assert fv.extinction_count == 0
        assert fv.resample_events > 0
        assert np.all(fv.terminal_states > 0.0)
        assert np.all(fv.terminal_states < grid.x_max)

    def test_deterministic(self):
        gp = GrowthParams(p=1, q=2, s=1, sigma=0.0, epsilon=0.3)
        coeffs = make_coefficients(gp)
        cfg = PathConfig(t_end=1.0, dt=1e-3, x0=0.5)
        a = simulate_qsd_ensemble(coeffs, 1.0, cfg, 600, RngStream(4), 3.0)
        b = simulate_qsd_ensemble(coeffs, 1.0, cfg, 600, RngStream(4), 3.0)
        assert a.terminal_states.tobytes() == b.terminal_states.tobytes()
        assert a.resample_events == b.resample_events


class TestEmpiricalDensity:
    def test_point_mass(self):
        gp = GrowthParams(p=1, q=2, s=1)
        coeffs = make_coefficients(gp)
        cfg = PathConfig(t_end=1.0, dt=1e-2, x0=0.5)
        ens = simulate_ensemble(coeffs, 1.5, cfg, 50, RngStream(2))
        grid = Grid(0.0, 2.0, 64)
        field = empirical_density(ens, grid)
        assert field.integral() == pytest.approx(1.0, abs=1e-12)
        assert np.count_nonzero(field.values) == 1
        cell = np.digitize(ens.terminal_states[0], grid.edges) - 1
        assert field.values[cell] > 0

    def test_normal_surrogate_l1(self):
        rng = np.random.default_rng(123)
        samples = rng.standard_normal(10**6)
        grid = Grid(-5.0, 5.0, 200)
        field = histogram_density(samples, grid)
        x = grid.nodes
        exact = np.exp(-0.5 * x**2) / math.sqrt(2 * math.pi)
        assert np.trapezoid(np.abs(field.values - exact), x) < 0.01

    def test_all_extinct_surviving_only_errors(self):
        down = ModelCoefficients(
            f1=lambda x: -10.0 * np.ones_like(np.asarray(x, dtype=float)),
            f2=lambda x: 0.0 * np.asarray(x, dtype=float),
            f3=lambda x: 0.0 * np.asarray(x, dtype=float),
            domain_hint=1.0,
            has_diffusion=False,
            has_jumps=False,
        )
        cfg = PathConfig(t_end=1.0, dt=1e-2, x0=0.1)
        ens = simulate_ensemble(down, 1.0, cfg, 20, RngStream(6))
        assert ens.extinction_count == 20
        grid = Grid(0.0, 1.0, 32)
        with pytest.raises(EmptySupportError):
            empirical_density(ens, grid)
        # the all-paths variant still produces the extinction point mass
        field = empirical_density(ens, grid, survivors_only=False)
        assert field.values[0] > 0.0

    def test_levy_growth_histogram_mode_near_equilibrium(self):
        # this histogram is the Monte Carlo oracle for the stationary solver:
        # its mode must sit near the drift equilibrium ln(2)
        gp = GrowthParams(p=1, q=2, s=1, sigma=0.0, epsilon=0.1)
        coeffs = make_coefficients(gp)
        grid = Grid(0.0, coeffs.domain_hint, 128)
        ens = simulate_ensemble(
            coeffs, 1.0, PathConfig(t_end=20.0, dt=1e-3, x0=0.5), 20_000, RngStream(314)
        )
        field = empirical_density(ens, grid)
        from stochpop import find_modes

        cls = find_modes(field)
        assert cls.class_label == "peaked-unimodal"
        assert cls.mode_location == pytest.approx(math.log(2.0), abs=0.1)

    def test_survivors_exclude_domain_exits(self):
        gp = GrowthParams(p=1, q=2, s=1, sigma=0.0, epsilon=0.3)
        coeffs = make_coefficients(gp)
        cfg = PathConfig(t_end=5.0, dt=1e-3, x0=0.5)
        ens = simulate_ensemble(coeffs, 1.0, cfg, 2000, RngStream(13))
        tight = Grid(0.0, 2.0, 64)
        kept = np.isnan(ens.extinct_at) & (ens.max_states <= tight.x_max)
        assert kept.sum() > 0
        field = empirical_density(ens, tight)
        # mass equals the histogram of exactly the kept paths
        manual = histogram_density(ens.terminal_states[kept], tight)
        assert np.array_equal(field.values, manual.values)
