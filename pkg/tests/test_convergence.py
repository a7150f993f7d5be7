"""
Tests for Wasserstein distances, convergence experiments and subsequence extraction.
"""

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from uirisk.convergence import (
    builtin_sequence,
    comonotone_version,
    dyadic_schedule,
    es_convergence_experiment,
    grid_levels,
    lln_experiment,
    monotone_within_noise,
    normal_quadrature,
    parse_generator,
    subsequence_extract,
    w1,
    w1_consistency_check,
)
from uirisk.core.distribution import DiscreteDistribution, affine, mean
from uirisk.core.family import DistributionFamily
from uirisk.exceptions import ExpectationDominatedError, InconclusiveAtHorizonError, ParameterRangeError
from uirisk.measures.distortion import ESClip


def transport_lp(F, G):
    """w1 as the optimal transport linear program."""
    m, k = F.size, G.size
    cost = np.abs(F.atoms[:, None] - G.atoms[None, :]).ravel()
    rows = np.zeros((m + k, m * k))
    for i in range(m):
        rows[i, i * k:(i + 1) * k] = 1.0
    for j in range(k):
        rows[m + j, j::k] = 1.0
    result = linprog(cost, A_eq=rows, b_eq=np.concatenate((F.weights, G.weights)), bounds=(0, None), method="highs")
    return result.fun


class TestW1:
    """Exact 1-Wasserstein distance on finite laws."""

    def test_point_masses(self):
        """Should give the gap between two point masses."""
        assert w1(DiscreteDistribution.point(1.0), DiscreteDistribution.point(-2.5)) == pytest.approx(3.5)

    def test_shift(self):
        """Should equal the shift between a law and its translate."""
        X = normal_quadrature(50)
        assert w1(X, affine(X, shift=0.25)) == pytest.approx(0.25, abs=1e-12)

    def test_identity_and_symmetry(self, make_law):
        """Should vanish on equal laws and ignore argument order."""
        for _ in range(20):
            F, G = make_law(), make_law()
            assert w1(F, F) == 0.0
            assert w1(F, G) == pytest.approx(w1(G, F), rel=1e-12, abs=1e-15)

    def test_triangle(self, make_law):
        """Should satisfy the triangle inequality."""
        for _ in range(30):
            F, G, H = make_law(), make_law(), make_law()
            assert w1(F, H) <= w1(F, G) + w1(G, H) + 1e-12

    def test_matches_transport_lp(self, make_law):
        """Should equal the transport linear program."""
        for _ in range(25):
            F, G = make_law(scale=False), make_law(scale=False)
            assert w1(F, G) == pytest.approx(transport_lp(F, G), abs=1e-9)

    @pytest.mark.slow
    def test_matches_transport_lp_on_200_instances(self, make_law):
        """Should equal the transport linear program on 200 random pairs within 1e-10."""
        for _ in range(200):
            F, G = make_law(max_atoms=6, scale=False), make_law(max_atoms=6, scale=False)
            assert w1(F, G) == pytest.approx(transport_lp(F, G), abs=1e-10)

    @pytest.mark.slow
    def test_metric_axioms_on_1000_triples(self, make_law):
        """Should satisfy identity, symmetry and the triangle inequality on 10^3 triples."""
        for _ in range(1000):
            F, G, H = make_law(), make_law(), make_law()
            assert w1(F, F) == 0.0
            assert w1(F, G) == pytest.approx(w1(G, F), rel=1e-12, abs=1e-15)
            assert w1(F, H) <= w1(F, G) + w1(G, H) + 1e-12 * (1.0 + w1(F, G) + w1(G, H))

    def test_bounds_mean_gap(self, make_law):
        """Should dominate the gap between means."""
        for _ in range(20):
            F, G = make_law(), make_law()
            assert abs(mean(F) - mean(G)) <= w1(F, G) + 1e-12


class TestComonotoneVersion:
    """Quantile-grid coupling of two laws."""

    def test_grid_distance_close_to_w1(self, make_law):
        """Should stay within the discretization bound of w1."""
        for _ in range(10):
            F, G = make_law(scale=False), make_law(scale=False)
            report = comonotone_version(F, G, m=500)
            assert abs(report.grid_distance - report.w1) <= report.discretization_bound + 1e-12

    def test_pairs_are_monotone(self, a1_law):
        """Should pair quantiles in the same order on both sides."""
        report = comonotone_version(a1_law, normal_quadrature(20), m=24, include_pairs=True)
        left = [a for a, _ in report.paired]
        right = [b for _, b in report.paired]
        assert left == sorted(left)
        assert right == sorted(right)

    def test_grid_levels(self):
        """Should use midpoints of m equal cells and reject m = 0."""
        assert grid_levels(4).tolist() == [0.125, 0.375, 0.625, 0.875]
        with pytest.raises(ParameterRangeError):
            grid_levels(0)


class TestGenerators:
    """IID generators and the normal quadrature law."""

    def test_parse(self):
        """Should keep the generator name, parameter included."""
        assert parse_generator("coin").name == "coin"
        assert parse_generator("pareto:1.5").name == "pareto:1.5"

    def test_pareto_needs_mean(self):
        """Should reject a Pareto index without a finite mean."""
        with pytest.raises(ParameterRangeError):
            parse_generator("pareto:0.8")

    def test_unknown(self):
        """Should reject unknown generators."""
        with pytest.raises(ParameterRangeError):
            parse_generator("cauchy")

    def test_normal_quadrature_symmetric(self):
        """Should give a centred law on m atoms."""
        X = normal_quadrature(200)
        assert mean(X) == pytest.approx(0.0, abs=1e-12)
        assert X.size == 200


class TestLLN:
    """Weak law of large numbers under bounded risk envelopes."""

    def test_schedule(self):
        """Should double up to the horizon and end on it."""
        assert dyadic_schedule(10) == [1, 2, 4, 8, 10]

    def test_coin_concentrates(self):
        """Should bring P(|Y_n| > 0.05) below 0.01 for a fair coin at n = 10^4."""
        report = lln_experiment(parse_generator("coin"), 10_000, replications=200, seed=7)
        assert report.rows[-1].n == 10_000
        assert report.rows[-1].exceedance["0.05"] < 0.01
        assert not report.hypothesis_violated

    def test_zero_generator(self):
        """Should see no exceedances and a zero envelope."""
        report = lln_experiment(parse_generator("zero"), 64, replications=10, seed=1)
        assert all(v == 0.0 for row in report.rows for v in row.exceedance.values())
        assert report.rows[-1].rho_env == 0.0

    def test_deterministic(self):
        """Should repeat exactly under a fixed seed."""
        first = lln_experiment(parse_generator("normal"), 256, replications=20, seed=3)
        second = lln_experiment(parse_generator("normal"), 256, replications=20, seed=3)
        assert first.model_dump() == second.model_dump()

    def test_requires_infinite_slope(self):
        """Should refuse a distortion with finite slope."""
        with pytest.raises(ExpectationDominatedError):
            lln_experiment(parse_generator("coin"), 16, replications=2, h=ESClip(0.5))

    def test_monotone_within_noise(self):
        """Should allow rises up to 3 / sqrt(R) only."""
        assert monotone_within_noise([0.5, 0.55, 0.3, 0.0], 400)
        assert not monotone_within_noise([0.2, 0.6], 400)

    @given(st.integers(0, 2**16))
    @hyp_settings(max_examples=5, deadline=None)
    def test_pareto_trajectory(self, seed):
        """Should shrink exceedances within noise for finite-variance signed Pareto draws."""
        replications = 50
        report = lln_experiment(parse_generator("pareto:2.5"), 1024, replications=replications, seed=seed)
        assert [row.n for row in report.rows] == dyadic_schedule(1024)
        # |X| >= 1 for every draw
        assert all(v == 1.0 for v in report.rows[0].exceedance.values())
        for key in report.rows[0].exceedance:
            assert monotone_within_noise([row.exceedance[key] for row in report.rows], replications)
        for field in ("rho_env", "rhoprime_env"):
            values = [getattr(row, field) for row in report.rows]
            assert values == sorted(values)
        assert not report.hypothesis_violated


class TestESConvergence:
    """ES_p(F_n) -> ES_p(F) along builtin sequences."""

    def test_shift_errors(self):
        """Should give error exactly 1/n with log-log slope -1."""
        family, limit = builtin_sequence("shift", 16)
        report = es_convergence_experiment(family, limit, [0.5, 0.9])
        for row in report.rows:
            assert row.error == pytest.approx(1.0 / row.n, abs=1e-12)
        for trend in report.trend:
            assert trend.monotone_fraction == 1.0
            assert trend.loglog_slope == pytest.approx(-1.0, abs=1e-6)
        assert report.hypothesis_ok

    def test_constant_errors_vanish(self):
        """Should report zero errors and no slope."""
        family, limit = builtin_sequence("constant", 8)
        report = es_convergence_experiment(family, limit, [0.5])
        assert all(row.error == 0.0 for row in report.rows)
        assert report.trend[0].loglog_slope is None

    def test_empirical_is_seeded(self):
        """Should rebuild the same empirical sequence from the same seed."""
        first, _ = builtin_sequence("empirical", 32, seed=5)
        second, _ = builtin_sequence("empirical", 32, seed=5)
        assert first.member(32) == second.member(32)

    def test_unknown_sequence(self):
        """Should reject unknown sequence names."""
        with pytest.raises(ParameterRangeError):
            builtin_sequence("spiral", 8)


class TestW1Consistency:
    """Mean convergence and UI verdict along w1-convergent sequences."""

    def test_shift_sequence(self):
        """Should converge in w1 and means without a not-UI verdict."""
        family, limit = builtin_sequence("shift", 1024)
        report = w1_consistency_check(family, limit)
        assert report.w1[-1] == pytest.approx(1.0 / 1024.0, abs=1e-12)
        assert all(g <= d + 1e-12 for g, d in zip(report.mean_gaps, report.w1))
        assert report.ui_verdict != "not-UI"
        assert report.holds


class TestSubsequence:
    """Greedy w1-convergent subsequence extraction."""

    def test_alternating_point_masses(self):
        """Should pick the even members of an alternating sequence."""
        family = DistributionFamily(
            "alternating", generator=lambda n: DiscreteDistribution.point((-1.0) ** n), horizon=10
        )
        report = subsequence_extract(family)
        assert report.indices == [2, 4, 6, 8, 10]
        assert report.limit_index == 10
        assert report.limit.atoms == [1.0]
        assert report.hypothesis_ok

    def test_gaps_within_tolerances(self):
        """Should keep successive gaps within half the level tolerance."""
        family, _ = builtin_sequence("shift", 64)
        report = subsequence_extract(family)
        assert all(g <= t / 2.0 + 1e-12 for g, t in zip(report.gaps, report.tolerances))
        assert report.indices == sorted(report.indices)

    def test_too_short(self):
        """Should give up on a family shorter than the requested length."""
        family = DistributionFamily.of("one", DiscreteDistribution.point(0.0))
        with pytest.raises(InconclusiveAtHorizonError):
            subsequence_extract(family, min_length=3)
