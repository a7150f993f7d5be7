"""
Tests for the quantile-vector investment problem, its solver and the
stability experiment.
"""

import json

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from uirisk.config import settings
from uirisk.convergence.generators import normal_quadrature
from uirisk.core.distribution import DiscreteDistribution, negate
from uirisk.exceptions import (
    InfeasibleProblemError,
    InvalidProblemError,
    NonMonotoneDecisionError,
    ParameterRangeError,
    SpecParseError,
)
from uirisk.invest import (
    InvestProblem,
    Utility,
    best_known_value,
    constraints,
    default_problem,
    objective,
    order_statistic_weights,
    problem_from_spec,
    prop61_experiment,
    sample_schedule,
    solve_eps,
)
from uirisk.measures.choquet import choquet
from uirisk.measures.distortion import IES, ESClip, Power


def _problem(n, utility, r0=1.0, x0=0.5, points=40):
    return InvestProblem(n=n, u=utility, rho=IES(), price=Power(0.5), r0=r0, x0=x0, Y=normal_quadrature(points))


class TestUtility:
    """Utility families u(x, y) = v(a x + b y)."""

    def test_families(self):
        """Should apply identity, tanh and the kinked linear shape."""
        z = np.array([-1.0, 0.0, 2.0])
        assert np.allclose(Utility(family="identity", a=1.0, b=0.0).v(z), z)
        assert np.allclose(Utility(family="tanh").v(z), np.tanh(z))
        assert np.allclose(Utility(family="piecewise_linear", slope=0.5).v(z), [-1.0, 0.0, 1.0])

    def test_call_combines_arguments(self):
        """Should evaluate v at a x + b y."""
        u = Utility(family="identity", a=2.0, b=0.5)
        assert u(np.array([1.0]), np.array([4.0]))[0] == pytest.approx(4.0)

    def test_lipschitz_and_concavity(self):
        """Should report max(|a|, |b|) and concavity per family."""
        assert Utility(a=1.0, b=-3.0).lipschitz == 3.0
        assert not Utility(family="tanh").is_concave
        assert Utility(family="piecewise_linear").is_concave

    def test_slope_out_of_range(self):
        """Should reject a kink slope above 1."""
        with pytest.raises(PydanticValidationError):
            Utility(family="piecewise_linear", slope=2.0)


class TestProblem:
    """Constraint functionals and problem validation."""

    def test_order_statistic_weights_es(self):
        """Should weight order statistics so that they sum to ES."""
        weights = order_statistic_weights(ESClip(0.75), 12)
        assert weights.sum() == pytest.approx(1.0)
        x = np.array([-1.0] * 11 + [6.0])
        assert weights @ x[::-1] == pytest.approx(4.0 / 3.0)

    def test_constraints_match_choquet_on_uniform_law(self):
        """Should equal the Choquet values of the uniform decision law."""
        prob = _problem(8, Utility())
        x = np.linspace(-1.0, 2.0, 8)
        risk, price = constraints(prob, x)
        law = DiscreteDistribution.uniform(x)
        assert risk == pytest.approx(choquet(IES(), law))
        assert price == pytest.approx(choquet(Power(0.5), negate(law)))

    def test_objective_identity_is_negative_mean(self):
        """Should give minus the mean for the identity utility."""
        prob = _problem(4, Utility(family="identity", a=1.0, b=0.0))
        assert objective(prob, [0.0, 1.0, 2.0, 3.0]) == pytest.approx(-1.5)

    def test_non_monotone_decision(self):
        """Should reject decreasing quantiles."""
        prob = _problem(3, Utility())
        with pytest.raises(NonMonotoneDecisionError):
            objective(prob, [1.0, 0.0, 2.0])

    def test_wrong_length(self):
        """Should reject a decision of the wrong length."""
        prob = _problem(3, Utility())
        with pytest.raises(InvalidProblemError):
            constraints(prob, [0.0, 1.0])

    def test_risk_without_infinite_slope_rejected(self):
        """Should demand infinite slope of the risk distortion."""
        with pytest.raises(InvalidProblemError):
            InvestProblem(n=4, u=Utility(), rho=ESClip(0.75), price=Power(0.5), r0=1.0, x0=0.5)

    def test_non_positive_grid(self):
        """Should reject an empty grid."""
        with pytest.raises(ParameterRangeError):
            _problem(0, Utility())

    def test_jensen_constant(self):
        """Should give the optimal constant for concave v and none for tanh."""
        assert _problem(4, Utility(family="piecewise_linear")).jensen_constant() == -0.5
        assert _problem(4, Utility(family="piecewise_linear", a=-1.0)).jensen_constant() == 1.0
        assert _problem(4, Utility(family="tanh")).jensen_constant() is None

    def test_default_problem(self):
        """Should build the tanh and IES instance."""
        prob = default_problem(10)
        assert prob.n == 10
        assert prob.u.family == "tanh"
        assert prob.rho.kind == "ies"


class TestProblemSpec:
    """JSON problem specs."""

    def test_from_json(self):
        """Should fill unspecified fields with the defaults."""
        spec = json.dumps({"n": 4, "utility": {"family": "identity", "a": 1.0, "b": 0.0}, "r0": 2.0})
        prob = problem_from_spec(spec)
        assert prob.n == 4
        assert prob.u.family == "identity"
        assert prob.r0 == 2.0
        assert prob.price.kind == "power"

    def test_explicit_background(self):
        """Should take the background law from the spec."""
        prob = problem_from_spec({"n": 2, "background": {"atoms": [-1.0, 1.0]}})
        assert list(prob.Y.atoms) == [-1.0, 1.0]

    def test_invalid_json_field(self):
        """Should reject an empty grid in JSON."""
        with pytest.raises(SpecParseError):
            problem_from_spec('{"n": 0}')

    def test_invalid_dict_field(self):
        """Should reject an unknown utility family."""
        with pytest.raises(SpecParseError):
            problem_from_spec({"utility": {"family": "exp"}})

    def test_risk_spec_without_infinite_slope(self):
        """Should reject a finite-slope risk distortion."""
        with pytest.raises(InvalidProblemError):
            problem_from_spec({"n": 3, "risk": {"kind": "es_clip", "p": 0.75}})

    def test_to_spec_round_trip(self):
        """Should rebuild the same problem from its spec."""
        prob = _problem(5, Utility(family="piecewise_linear"), points=7)
        again = problem_from_spec(prob.to_spec())
        assert again.n == 5
        assert again.u == prob.u
        assert np.allclose(again.Y.atoms, prob.Y.atoms)


class TestSolver:
    """Projected ascent against problems with known optima."""

    def test_single_cell_is_exact(self):
        """Should solve the one-cell problem exactly and certify it."""
        prob = _problem(1, Utility(family="identity", a=1.0, b=0.0))
        decision = solve_eps(prob, eps=1e-3, starts=4)
        assert decision.x[0] == pytest.approx(-0.5, abs=1e-9)
        assert decision.objective == pytest.approx(0.5, abs=1e-9)
        assert decision.feasible_risk and decision.feasible_price
        assert decision.certified

    def test_identity_utility_reaches_price_bound(self):
        """Should drive the identity objective to the price bound."""
        prob = _problem(10, Utility(family="identity", a=1.0, b=0.0))
        decision = solve_eps(prob, eps=1e-3, starts=3)
        assert decision.objective == pytest.approx(0.5, abs=1e-6)
        assert decision.feasible_risk and decision.feasible_price
        assert np.all(np.diff(decision.x) >= -1e-12)

    def test_concave_utility_matches_jensen_constant(self):
        """Should match the optimal constant for a concave utility."""
        prob = _problem(6, Utility(family="piecewise_linear", slope=0.5), points=20)
        jensen = objective(prob, np.full(6, prob.jensen_constant()))
        decision = solve_eps(prob, eps=1e-3, starts=3)
        assert decision.objective >= jensen - 1e-8
        assert decision.objective <= jensen + 1e-7

    def test_infeasible(self):
        """Should refuse a negative risk bound."""
        prob = _problem(3, Utility(), r0=-1.0, x0=0.5)
        with pytest.raises(InfeasibleProblemError):
            solve_eps(prob)

    def test_negative_eps(self):
        """Should reject a negative tolerance."""
        with pytest.raises(ParameterRangeError):
            solve_eps(_problem(2, Utility()), eps=-1.0)

    def test_deterministic(self):
        """Should repeat exactly under a fixed seed."""
        prob = _problem(5, Utility(), points=15)
        first = solve_eps(prob, seed=3, starts=2)
        second = solve_eps(prob, seed=3, starts=2)
        assert first.x == second.x
        assert first.start_objectives == second.start_objectives

    def test_table(self):
        """Should tabulate quantiles at the cell midpoints."""
        decision = solve_eps(_problem(4, Utility(), points=10), starts=2)
        table = decision.table()
        assert list(table.columns) == ["level", "quantile"]
        assert list(table["level"]) == [0.125, 0.375, 0.625, 0.875]


class TestStabilityExperiment:
    """Clustering of eps-optimizers under sampled backgrounds."""

    @pytest.fixture
    def quick_solver(self, monkeypatch):
        monkeypatch.setattr(settings.invest, "starts", 2)
        monkeypatch.setattr(settings.invest, "max_iter", 30)

    def test_sample_schedule(self):
        """Should draw reproducible samples from the atoms of Y."""
        Y = normal_quadrature(30)
        laws = sample_schedule(Y, steps=3, seed=1)
        again = sample_schedule(Y, steps=3, seed=1)
        assert len(laws) == 3
        for law, other in zip(laws, again):
            assert np.array_equal(law.atoms, other.atoms)
            assert np.all(np.isin(law.atoms, Y.atoms))

    def test_best_known_covers_jensen(self, quick_solver):
        """Should never fall below the optimal constant."""
        prob = _problem(4, Utility(family="piecewise_linear"), points=15)
        jensen = objective(prob, np.full(4, prob.jensen_constant()))
        assert best_known_value(prob, prob.Y, seed=1) >= jensen - 1e-12

    @pytest.mark.slow
    def test_lipschitz_chain_holds(self, quick_solver):
        """Should hold the Lipschitz chain at every step."""
        prob = _problem(6, Utility(), points=30)
        report = prop61_experiment(prob, seed=1, steps=3)
        assert len(report.steps) == 3
        assert len(report.gaps) == 2
        assert all(step.holds for step in report.steps)
        assert report.max_violation == 0.0
        assert report.all_feasible
        assert 1 <= report.candidate <= 3
        assert [step.eps for step in report.steps] == pytest.approx([1.0, 0.5, 1.0 / 3.0])
        assert all(step.support_size <= 30 for step in report.steps)

    @pytest.mark.slow
    def test_default_instance_at_full_scale(self):
        """Should settle the default 50-cell, 8-start instance within the stability slack."""
        prob = default_problem()
        assert (prob.n, settings.invest.starts) == (50, 8)
        report = prop61_experiment(prob, seed=settings.runtime.seed)
        assert len(report.steps) == 5
        assert report.all_feasible
        assert min(report.gaps) < 1e-2
        assert report.optimal_within_tolerance
        slack = report.steps[-1].eps + 3.0 * report.lipschitz * report.steps[-1].delta + report.tolerance
        assert report.candidate_objective >= report.best_known - slack

    def test_mismatched_eps_schedule(self, quick_solver):
        """Should reject a tolerance schedule of the wrong length."""
        prob = _problem(3, Utility(), points=10)
        with pytest.raises(ParameterRangeError):
            prop61_experiment(prob, Y_schedule=[prob.Y, prob.Y], eps_schedule=[0.1])
