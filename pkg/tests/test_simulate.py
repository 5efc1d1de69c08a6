import math

import numpy as np
import pytest

from rankp import (
    ConfigError,
    DistributionSpec,
    DomainError,
    IncrementSchedule,
    MartingaleSpec,
    RankP,
    derive_d0,
    generate_paths,
    generate_trajectories,
    halfnormal_shift,
    monte_carlo_tail,
    preset_spec,
    sample_double_weibull,
    sample_halfnormal_power,
    validate_bound,
)
from rankp import _kernels

N = 100_000


class TestDistributionSpec:
    def test_validation(self):
        with pytest.raises(DomainError):
            DistributionSpec.double_weibull(1.0)
        with pytest.raises(DomainError):
            DistributionSpec.uniform_bounded(1.0, 0.0)
        with pytest.raises(DomainError):
            DistributionSpec.rademacher_scaled(0.0)
        with pytest.raises(DomainError):
            DistributionSpec("lognormal")

    def test_labels(self):
        assert DistributionSpec.point_mass(0.0).label() == "point_mass(0.0)"
        assert "double_weibull" in DistributionSpec.double_weibull(3.0).label()


class TestDoubleWeibull:
    def test_survival_function(self):
        for q in (1.5, 2.0, 3.0):
            values = np.abs(sample_double_weibull(q, N, seed=100 + int(10 * q)).values)
            for x in (0.5, 1.0, 1.5, 2.0, 2.5):
                emp = float(np.mean(values >= x))
                theo = math.exp(-(x**q) / q)
                assert abs(emp - theo) <= 0.01

    def test_symmetric_mean(self):
        s = sample_double_weibull(2.0, N, seed=5)
        v = s.values
        assert abs(v.mean()) <= 3.0 * v.std() / math.sqrt(N)

    def test_deterministic(self):
        a = sample_double_weibull(2.0, 1000, seed=7).values
        b = sample_double_weibull(2.0, 1000, seed=7).values
        np.testing.assert_array_equal(a, b)
        c = sample_double_weibull(2.0, 1000, seed=8).values
        assert not np.array_equal(a, c)

    def test_provenance(self):
        s = sample_double_weibull(2.0, 10, seed=7)
        assert s.provenance["generator"] == "double_weibull"
        assert s.provenance["seed"] == 7

    def test_rejects_bad_shape(self):
        with pytest.raises(DomainError):
            sample_double_weibull(1.0, 10, seed=0)


class TestHalfnormalPower:
    def test_shift_value(self):
        assert math.isclose(halfnormal_shift(2.0), math.sqrt(2.0 / math.pi), rel_tol=1e-12)

    def test_mean_near_zero(self):
        s = sample_halfnormal_power(2.0, N, seed=9)
        v = s.values
        assert abs(v.mean()) <= 3.0 * v.std() / math.sqrt(N)

    def test_rejects_shape_at_one(self):
        with pytest.raises(DomainError):
            sample_halfnormal_power(1.0, 10, seed=0)

    def test_support_bounded_below(self):
        s = sample_halfnormal_power(3.0, 10_000, seed=2)
        assert np.all(s.values >= -halfnormal_shift(3.0))


class TestGeneratePaths:
    def test_two_step_sign_walk_distribution(self):
        spec = MartingaleSpec(IncrementSchedule((1.0, 1.0)), "rademacher", DistributionSpec.point_mass(0.0), RankP(2))
        paths = generate_paths(spec, N, seed=21)
        values, counts = np.unique(paths.xin, return_counts=True)
        np.testing.assert_array_equal(values, [-2.0, 0.0, 2.0])
        freqs = counts / N
        assert abs(freqs[0] - 0.25) <= 0.01
        assert abs(freqs[1] - 0.50) <= 0.01
        assert abs(freqs[2] - 0.25) <= 0.01

    @pytest.mark.parametrize("law", ["uniform_signed", "rademacher", "adaptive_dependent"])
    def test_support_bound(self, law):
        spec = MartingaleSpec(IncrementSchedule((1.0,) * 20), law, DistributionSpec.uniform_bounded(-1, 1), RankP(1.5))
        paths = generate_paths(spec, 20_000, seed=31)
        total = spec.schedule.d
        drift_allowance = 4.0 * spec.schedule.n * np.spacing(total)
        assert np.max(np.abs(paths.xin - paths.xi0)) <= total + drift_allowance

    def test_adaptive_conditional_mean(self):
        spec = preset_spec("uniform-adaptive", 1.5)
        traj = generate_trajectories(spec, N, seed=41)
        steps = np.diff(traj, axis=1)
        for k in range(spec.schedule.n):
            prev_sign = np.sign(traj[:, k])
            prev_sign[prev_sign == 0.0] = 1.0
            product = steps[:, k] * prev_sign
            assert abs(product.mean()) <= 4.0 * product.std() / math.sqrt(N)
            assert abs(steps[:, k].mean()) <= 4.0 * steps[:, k].std() / math.sqrt(N)

    def test_trajectory_endpoints_match_kernel(self):
        spec = preset_spec("zero-uniform", 2.0)
        paths = generate_paths(spec, 5_000, seed=3)
        traj = generate_trajectories(spec, 5_000, seed=3)
        np.testing.assert_array_equal(traj[:, 0], paths.xi0)
        np.testing.assert_array_equal(traj[:, -1], paths.xin)

    def test_thread_count_invariance(self):
        spec = preset_spec("uniform-adaptive", 1.5)
        a = generate_paths(spec, 50_000, seed=17, threads=1)
        b = generate_paths(spec, 50_000, seed=17, threads=4)
        c = generate_paths(spec, 50_000, seed=17, threads=8)
        np.testing.assert_array_equal(a.xin, b.xin)
        np.testing.assert_array_equal(a.xin, c.xin)

    @pytest.mark.skipif(not _kernels.NUMBA_ENABLED, reason="numba backend unavailable")
    def test_backends_agree(self):
        d = np.ones(20)
        xi0 = np.linspace(-1, 1, 10_000)
        for law in (_kernels.LAW_UNIFORM, _kernels.LAW_RADEMACHER):
            a = _kernels.walk_endpoints(5, d, law, xi0, backend="numba")
            b = _kernels.walk_endpoints(5, d, law, xi0, backend="numpy")
            np.testing.assert_array_equal(a, b)
        a = _kernels.walk_endpoints(5, d, _kernels.LAW_ADAPTIVE, xi0, backend="numba")
        b = _kernels.walk_endpoints(5, d, _kernels.LAW_ADAPTIVE, xi0, backend="numpy")
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)

    def test_rejects_bad_law(self):
        with pytest.raises(DomainError):
            MartingaleSpec(IncrementSchedule((1.0,)), "brownian", DistributionSpec.point_mass(0.0), RankP(2))


class TestMonteCarloTail:
    def _paths(self, n=1000):
        spec = preset_spec("zero-rademacher", 2.0, n_steps=4)
        return generate_paths(spec, n, seed=2)

    def test_zero_threshold(self):
        assert monte_carlo_tail(self._paths(), 0.0, 1e-3).frequency == 1.0

    def test_beyond_support(self):
        assert monte_carlo_tail(self._paths(), 100.0, 1e-3).frequency == 0.0

    def test_slack_value(self):
        res = monte_carlo_tail(generate_paths(preset_spec("zero-rademacher", 2.0), N, seed=1), 1.0, 1e-3)
        assert math.isclose(res.ci_slack, 0.005876970001191999, rel_tol=1e-12)

    def test_frequency_counts_are_integers(self):
        res = monte_carlo_tail(self._paths(777), 2.0, 1e-3)
        assert math.isclose(res.frequency * 777, round(res.frequency * 777), abs_tol=1e-9)

    def test_rejects_bad_delta(self):
        with pytest.raises(DomainError):
            monte_carlo_tail(self._paths(), 1.0, 0.0)


class TestDeriveD0:
    def test_zero_point_mass(self):
        assert derive_d0(DistributionSpec.point_mass(0.0), 2.0, seed=1) == (0.0, "exact")

    def test_rejects_off_center_point_mass(self):
        with pytest.raises(DomainError):
            derive_d0(DistributionSpec.point_mass(0.5), 2.0, seed=1)

    def test_rejects_off_center_uniform(self):
        with pytest.raises(DomainError):
            derive_d0(DistributionSpec.uniform_bounded(-1.0, 3.0), 2.0, seed=1)

    def test_bounded_starts_use_exact_gamma(self):
        d0, prov = derive_d0(DistributionSpec.uniform_bounded(-1, 1), 2.0, seed=1)
        assert (d0, prov) == (1.0, "exact")
        d0, prov = derive_d0(DistributionSpec.rademacher_scaled(2.0), 2.0, seed=1)
        assert (d0, prov) == (2.0, "exact")

    def test_weibull_start_is_empirical(self):
        d0, prov = derive_d0(DistributionSpec.double_weibull(3.0), 1.5, seed=1)
        assert prov == "empirical"
        assert d0 > 0.0
        # deterministic in the seed
        again, _ = derive_d0(DistributionSpec.double_weibull(3.0), 1.5, seed=1)
        assert d0 == again


class TestValidateBound:
    def test_four_step_sign_walk(self):
        spec = preset_spec("zero-rademacher", 2.0, n_steps=4)
        report = validate_bound(spec, [0.0, 4.0], N, 1e-3, seed=19)
        assert report.all_passed
        row = report.rows[-1]
        assert math.isclose(row.bound_rank_p, 2.0 * math.exp(-2.0), rel_tol=1e-12)
        # exceedance needs all four signs equal: probability 2/16
        assert abs(row.empirical - 0.125) <= 0.01
        assert report.rows[0].bound_rank_p == 2.0
        assert report.rows[0].empirical == 1.0

    def test_uniform_start_low_rank(self):
        spec = MartingaleSpec(
            IncrementSchedule((1.0,) * 20),
            "uniform_signed",
            DistributionSpec.uniform_bounded(-1.0, 1.0),
            RankP(1.5),
        )
        grid = [float(v) for v in np.linspace(20 / 12, 20, 12)]
        report = validate_bound(spec, grid, N, 1e-3, seed=23)
        assert report.all_passed
        assert report.d0_provenance == "exact"
        assert report.epsilon_p is not None

    def test_report_metadata(self):
        spec = preset_spec("zero-rademacher", 2.0, n_steps=4)
        report = validate_bound(spec, [1.0], 1000, 1e-3, seed=3)
        assert report.seed == 3
        assert report.n_paths == 1000
        assert report.delta == 1e-3
        assert report.rows[0].ci_slack is not None

    def test_declared_d0_respected(self):
        spec = MartingaleSpec(
            IncrementSchedule((1.0,) * 4),
            "rademacher",
            DistributionSpec.point_mass(0.0),
            RankP(2),
            d0=0.5,
        )
        report = validate_bound(spec, [1.0], 1000, 1e-3, seed=3)
        assert report.d0 == 0.5
        assert report.d0_provenance == "declared"

    def test_determinism_across_threads(self):
        spec = preset_spec("weibull-uniform", 1.5)
        grid = [2.0, 8.0, 14.0, 20.0]
        r1 = validate_bound(spec, grid, 20_000, 1e-3, seed=29, threads=1)
        r4 = validate_bound(spec, grid, 20_000, 1e-3, seed=29, threads=4)
        assert r1.to_dict() == r4.to_dict()


class TestPresets:
    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset_spec("nope", 2.0)

    def test_weibull_ties_shape_to_conjugate(self):
        spec = preset_spec("weibull-uniform", 1.25)
        assert math.isclose(spec.start.q, 5.0, rel_tol=1e-12)

    def test_classic_alias(self):
        a = preset_spec("classic-azuma", 2.0)
        b = preset_spec("zero-rademacher", 2.0)
        assert a == b
