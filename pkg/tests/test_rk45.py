"""Embedded 5(4) integrator: accuracy, dense output, events, failure modes."""

import math

import numpy as np
import pytest

from plap.rk45 import EventSpec, IntegrationResult, integrate


class TestAccuracy:
    def test_exponential(self):
        res = integrate(lambda t, y: y, 0.0, 2.0, [1.0], rtol=1e-10, atol=1e-12)
        assert res.status == "finished"
        assert res.ys[-1, 0] == pytest.approx(math.e**2, rel=1e-9)

    def test_oscillator_energy(self):
        # y'' = -y as a system; energy drift bounds the global error.
        def f(t, y):
            return np.array([y[1], -y[0]])

        res = integrate(f, 0.0, 20 * math.pi, [1.0, 0.0], rtol=1e-11, atol=1e-13)
        energy = res.ys[:, 0] ** 2 + res.ys[:, 1] ** 2
        assert np.max(np.abs(energy - 1.0)) < 1e-8
        assert res.ys[-1, 0] == pytest.approx(1.0, abs=1e-8)

    def test_tolerance_scaling(self):
        # Loosening rtol by 10^4 must not tighten the error; tightening shrinks it.
        def f(t, y):
            return np.array([math.cos(t) * y[0]])

        exact = math.exp(math.sin(3.0))
        errs = []
        for rtol in (1e-6, 1e-10):
            res = integrate(f, 0.0, 3.0, [1.0], rtol=rtol, atol=rtol * 1e-2)
            errs.append(abs(res.ys[-1, 0] - exact))
        assert errs[1] < errs[0]
        assert errs[1] < 1e-9

    def test_rejects_backward_span(self):
        with pytest.raises(ValueError):
            integrate(lambda t, y: y, 1.0, 0.0, [1.0])


class TestDenseOutput:
    def test_hermite_matches_exact_solution(self):
        # Dense output is cubic between nodes, so its error is O(h^4) and
        # shrinks with max_step even when the stepper is already exact.
        res = integrate(lambda t, y: y, 0.0, 1.0, [1.0], rtol=1e-10, atol=1e-12)
        ts = np.linspace(0.0, 1.0, 257)
        assert np.max(np.abs(res.sol(ts)[:, 0] - np.exp(ts))) < 1e-6
        fine = integrate(
            lambda t, y: y, 0.0, 1.0, [1.0], rtol=1e-10, atol=1e-12, max_step=0.02
        )
        assert np.max(np.abs(fine.sol(ts)[:, 0] - np.exp(ts))) < 2e-9

    def test_scalar_query_shape(self):
        res = integrate(lambda t, y: y, 0.0, 1.0, [1.0])
        out = res.sol(0.5)
        assert out.shape == (1,)
        assert out[0] == pytest.approx(math.sqrt(math.e), rel=1e-8)

    def test_outside_span_raises(self):
        res = integrate(lambda t, y: y, 0.0, 1.0, [1.0])
        with pytest.raises(ValueError):
            res.sol(1.5)


class TestEvents:
    def test_terminal_root_location(self):
        # y = e^t crosses 5 at t = log 5.
        ev = EventSpec(fn=lambda t, y: y[0] - 5.0)
        res = integrate(lambda t, y: y, 0.0, 3.0, [1.0], events=[ev])
        assert res.status == "event"
        assert res.event_index == 0
        # Root accuracy is set by the dense interpolant, not the step tolerance.
        assert res.event_t == pytest.approx(math.log(5.0), rel=1e-7)
        assert res.ts[-1] == res.event_t
        fine = integrate(
            lambda t, y: y, 0.0, 3.0, [1.0], events=[ev], max_step=0.02
        )
        assert fine.event_t == pytest.approx(math.log(5.0), rel=1e-10)

    def test_direction_filter(self):
        # sin t crosses zero at pi (decreasing) and 2 pi (increasing).
        def f(t, y):
            return np.array([math.cos(t)])

        up_only = EventSpec(fn=lambda t, y: y[0], direction=1)
        res = integrate(f, 0.1, 8.0, [math.sin(0.1)], events=[up_only])
        assert res.status == "event"
        assert res.event_t == pytest.approx(2 * math.pi, rel=1e-8)

    def test_non_terminal_events_recorded(self):
        def f(t, y):
            return np.array([math.cos(t)])

        marker = EventSpec(fn=lambda t, y: y[0], terminal=False)
        res = integrate(f, 0.1, 8.0, [math.sin(0.1)], events=[marker])
        assert res.status == "finished"
        roots = [t for (_, t, _) in res.events_hit]
        assert len(roots) == 2
        assert roots[0] == pytest.approx(math.pi, rel=1e-8)
        assert roots[1] == pytest.approx(2 * math.pi, rel=1e-8)

    def test_two_events_earliest_terminal_wins(self):
        late = EventSpec(fn=lambda t, y: t - 2.5)
        early = EventSpec(fn=lambda t, y: t - 1.25)
        res = integrate(lambda t, y: y, 0.0, 3.0, [1.0], events=[late, early])
        assert res.status == "event"
        assert res.event_index == 1
        assert res.event_t == pytest.approx(1.25, rel=1e-9)


class TestFailureModes:
    def test_step_collapse_at_singularity(self):
        # y' = y^2 from y(0) = 1 blows up at t = 1; steps collapse approaching it.
        def f(t, y):
            return y * y

        res = integrate(f, 0.0, 2.0, [1.0], rtol=1e-10, atol=1e-12)
        assert res.status == "step_collapse"
        assert res.ts[-1] == pytest.approx(1.0, abs=1e-3)

    def test_max_steps(self):
        res = integrate(lambda t, y: y, 0.0, 1.0, [1.0], max_step=1e-5, max_steps=100)
        assert res.status == "max_steps"
        assert res.n_steps == 100

    def test_max_step_respected(self):
        res = integrate(lambda t, y: y, 0.0, 1.0, [1.0], max_step=0.01)
        assert np.max(np.diff(res.ts)) <= 0.01 + 1e-12

    def test_first_step_honored(self):
        res = integrate(lambda t, y: y, 0.0, 1.0, [1.0], first_step=1e-3)
        assert res.ts[1] - res.ts[0] == pytest.approx(1e-3, rel=1e-12)


class TestBookkeeping:
    def test_fsal_evaluation_count(self):
        res = integrate(lambda t, y: y, 0.0, 1.0, [1.0], rtol=1e-8, atol=1e-10)
        # One seed evaluation plus six per attempted step.
        assert res.n_fev == 1 + 6 * (res.n_steps + res.n_rejected)

    def test_nodes_and_states_align(self):
        res = integrate(lambda t, y: y, 0.0, 1.0, [1.0])
        assert res.ts.shape[0] == res.ys.shape[0] == res.fs.shape[0]
        assert res.ts[0] == 0.0 and res.ts[-1] == pytest.approx(1.0)
        assert np.all(np.diff(res.ts) > 0)
