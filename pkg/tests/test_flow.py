import math

import numpy as np
import pytest

from pinchlab import (
    ConstantWeyl,
    FlowState,
    StepTooLarge,
    WorstStarStarWeyl,
    WorstStarWeyl,
    ZeroWeyl,
    build_curvature,
    constants,
    envelope_unnormalized,
    integrate,
    pair_derivatives,
    serialize_trace,
    spectrum_params,
    trace_diagnostics,
    vector_field,
)
from pinchlab.curvature import RicciSpectrum
from pinchlab.flow import _field, _weyl_matrix

SQRT3 = math.sqrt(3.0)
GAMMA_STAR = 1.0 + SQRT3


def embed_ansatz(lam, w):
    """Realize the restricted Weyl ansatz as a full curvature tensor."""
    wm = _weyl_matrix(w)
    scalar = float(np.sum(lam))
    entries = {}
    for i in range(4):
        for j in range(i + 1, 4):
            entries[(i + 1, j + 1, i + 1, j + 1)] = wm[i, j] + (lam[i] + lam[j]) / 2.0 - scalar / 6.0
    return build_curvature(entries)


class TestVectorField:
    def test_s3xr_zero_policy(self):
        d = vector_field(FlowState(0.0, (0.0, 2.0, 2.0, 2.0)), ZeroWeyl())
        assert d == pytest.approx((0.0, 8.0, 8.0, 8.0), abs=1e-14)
        assert sum(d) == pytest.approx(2.0 * (4.0 + 4.0 + 4.0), abs=1e-12)  # dR = 2|Ric|^2

    def test_flat_any_policy(self):
        s = FlowState(0.0, (0.0, 0.0, 0.0, 0.0))
        for policy in (ZeroWeyl(), ConstantWeyl(0.3), WorstStarWeyl(2.0), WorstStarStarWeyl(1.5)):
            assert vector_field(s, policy) == (0.0, 0.0, 0.0, 0.0)

    def test_s2xr2_matched_weyl_keeps_flat_directions_flat(self):
        d = vector_field(FlowState(0.0, (0.0, 0.0, 1.0, 1.0)), ConstantWeyl(w=1.0 / 3.0))
        assert d[0] == pytest.approx(0.0, abs=1e-12)
        assert d[1] == pytest.approx(0.0, abs=1e-12)
        assert d[2] == pytest.approx(2.0, abs=1e-12)
        assert d[3] == pytest.approx(2.0, abs=1e-12)

    def test_worst_star_reproduces_cylinder_weyl(self):
        lam = np.array([0.0, 0.0, 1.0, 1.0])
        w = WorstStarWeyl(gamma=GAMMA_STAR).weyl_value(lam)
        assert w == pytest.approx(1.0 / 3.0, abs=1e-14)

    def test_scalar_derivative_identity(self, rng):
        for _ in range(300):
            lam = np.sort(rng.uniform(-1.0, 1.0, 4))
            w = rng.uniform(-0.5, 0.5)
            d = _field(lam, ConstantWeyl(w=w))
            assert float(d.sum()) == pytest.approx(
                2.0 * float(np.sum(lam**2)), rel=1e-12, abs=1e-13
            )

    def test_pair_sum_closed_form(self, rng):
        for _ in range(300):
            lam = np.sort(rng.uniform(-1.0, 1.0, 4))
            w = rng.uniform(-0.5, 0.5)
            d = _field(lam, ConstantWeyl(w=w))
            scalar = float(lam.sum())
            b = (lam[2] + lam[3]) - (lam[0] + lam[1])
            db = (d[2] + d[3]) - (d[0] + d[1])
            closed = 2.0 * (
                2.0 * b * (scalar / 3.0 + w)
                + (lam[0] ** 2 + lam[1] ** 2)
                - (lam[2] ** 2 + lam[3] ** 2)
            )
            assert db == pytest.approx(closed, rel=1e-12, abs=1e-12)

    def test_consistency_with_full_tensor_derivatives(self, rng):
        for _ in range(100):
            lam = np.sort(rng.uniform(0.1, 1.0, 4))
            if float(np.min(np.diff(lam))) < 1e-3:
                continue
            w = rng.uniform(-0.3, 0.3)
            rm = embed_ansatz(lam, w)
            d12, d34, db = pair_derivatives(rm)
            f = _field(lam, ConstantWeyl(w=w))
            assert d12 == pytest.approx(float(f[0] + f[1]), rel=1e-10, abs=1e-12)
            assert d34 == pytest.approx(float(f[2] + f[3]), rel=1e-10, abs=1e-12)
            assert db == pytest.approx(float(f[2] + f[3] - f[0] - f[1]), rel=1e-10, abs=1e-12)


class TestIntegrate:
    def test_s3xr_fixed_ratio(self):
        trace = integrate(
            FlowState(0.0, (0.0, 2.0, 2.0, 2.0)), ZeroWeyl(), dt=1e-5, t_end=0.05, r_cap=1e6
        )
        assert trace.reason == "t_end"
        assert np.max(np.abs(trace.etas() - 1.0 / 3.0)) < 1e-9

    def test_s2xr2_fixed_ratio(self):
        trace = integrate(
            FlowState(0.0, (0.0, 0.0, 1.0, 1.0)),
            WorstStarWeyl(gamma=GAMMA_STAR),
            dt=1e-4,
            t_end=0.2,
            r_cap=1e6,
        )
        assert trace.reason == "t_end"
        assert np.max(np.abs(trace.etas() - 1.0)) < 1e-9

    def test_worst_star_eta_decreasing(self):
        trace = integrate(
            FlowState(0.0, (0.05, 0.15, 0.35, 0.45)),
            WorstStarWeyl(gamma=2.0),
            dt=1e-4,
            t_end=1.0,
            r_cap=1e6,
        )
        etas = trace.etas()
        threshold = constants().c_tilde + 0.01
        diffs = np.diff(etas)
        above = etas[:-1] > threshold
        assert above.any()
        assert np.all(diffs[above] < 0.0)

    def test_scalar_monotone_along_traces(self):
        trace = integrate(
            FlowState(0.0, (0.05, 0.15, 0.35, 0.45)),
            WorstStarWeyl(gamma=2.0),
            dt=1e-3,
            t_end=1.0,
            r_cap=1e6,
        )
        scalars = trace.scalars()
        assert np.all(np.diff(scalars) >= 0.0)

    def test_blowup_cap(self):
        trace = integrate(
            FlowState(0.0, (0.0, 2.0, 2.0, 2.0)), ZeroWeyl(), dt=1e-4, t_end=1.0, r_cap=50.0
        )
        assert trace.reason == "blowup"
        assert trace.final().scalar > 50.0

    def test_step_too_large(self):
        with pytest.raises(StepTooLarge):
            integrate(
                FlowState(0.0, (0.0, 2.0, 2.0, 2.0)), ZeroWeyl(), dt=1e9, t_end=2e9, r_cap=1e30
            )

    def test_collision_terminates(self):
        # a strongly negative Weyl value drives the middle eigenvalues
        # across the pair boundary
        trace = integrate(
            FlowState(0.0, (0.0, 1.0, 1.05, 1.1)),
            ConstantWeyl(w=-1.0),
            dt=1e-3,
            t_end=1.0,
            r_cap=1e9,
        )
        assert trace.reason == "collision"

    def test_argument_validation(self):
        s = FlowState(0.0, (0.0, 2.0, 2.0, 2.0))
        with pytest.raises(ValueError):
            integrate(s, ZeroWeyl(), dt=0.0, t_end=1.0, r_cap=1e6)
        with pytest.raises(ValueError):
            integrate(s, ZeroWeyl(), dt=1e-4, t_end=0.0, r_cap=1e6)
        with pytest.raises(ValueError):
            integrate(s, ZeroWeyl(), dt=1e-4, t_end=1.0, r_cap=1.0)

    def test_per_step_scalar_identity(self):
        trace = integrate(
            FlowState(0.0, (0.05, 0.15, 0.35, 0.45)),
            WorstStarWeyl(gamma=2.0),
            dt=1e-3,
            t_end=0.5,
            r_cap=1e6,
        )
        for s in trace.states[::50]:
            lam = np.array(s.lam)
            d = _field(lam, WorstStarWeyl(gamma=2.0))
            assert float(d.sum()) == pytest.approx(2.0 * float(np.sum(lam**2)), rel=1e-12)

    def test_eta_derivative_sign_law(self, rng):
        # sign(d eta/dt) = -sign(envelope) when the policy saturates the
        # pinching bound
        gamma = 2.0
        policy = WorstStarWeyl(gamma=gamma)
        checked = 0
        while checked < 200:
            lam = np.sort(rng.uniform(0.0, 1.0, 4))
            scalar = float(lam.sum())
            if scalar < 0.2:
                continue
            p = spectrum_params(RicciSpectrum(tuple(float(v) for v in lam)))
            d = _field(lam, policy)
            db = (d[2] + d[3]) - (d[0] + d[1])
            deta = (db - p.eta * float(d.sum())) / scalar
            env = envelope_unnormalized(p.eta, p.x, p.y, scalar, gamma)
            if abs(env) < 1e-10:
                continue
            assert deta == pytest.approx(-2.0 * env / scalar, rel=1e-9, abs=1e-12)
            checked += 1

    def test_step_halving_order_on_smooth_traces(self):
        s0 = FlowState(0.0, (0.05, 0.15, 0.35, 0.45))

        def final_eta(policy, dt, t_end):
            return integrate(s0, policy, dt=dt, t_end=t_end, r_cap=1e9).final().eta

        for policy, t_end in ((ConstantWeyl(w=0.05), 0.4), (WorstStarWeyl(gamma=2.0), 0.1)):
            e1 = final_eta(policy, 0.02, t_end)
            e2 = final_eta(policy, 0.01, t_end)
            e3 = final_eta(policy, 0.005, t_end)
            d1, d2 = abs(e1 - e2), abs(e2 - e3)
            assert d2 > 0.0
            assert math.log2(d1 / d2) >= 3.5


class TestDiagnostics:
    def test_s3xr_equality_case(self):
        trace = integrate(
            FlowState(0.0, (0.0, 2.0, 2.0, 2.0)), ZeroWeyl(), dt=1e-5, t_end=0.05, r_cap=1e6
        )
        diag = trace_diagnostics(trace, 1.0 / 3.0, 0.0)
        assert abs(diag.max_barrier_slack) <= 1e-9
        assert not diag.barrier_violated
        assert diag.scalar_decreases == 0

    def test_generic_worst_star_no_violation(self):
        from pinchlab import delta_of

        trace = integrate(
            FlowState(0.0, (0.05, 0.15, 0.35, 0.45)),
            WorstStarWeyl(gamma=2.0),
            dt=1e-3,
            t_end=1.0,
            r_cap=1e6,
        )
        delta = delta_of(2.0, 0.6, trace.states[0].scalar, mode="star")
        diag = trace_diagnostics(trace, 0.6, delta)
        assert not diag.barrier_violated
        assert diag.scalar_decreases == 0

    def test_trivial_barrier_never_violated(self):
        # with delta = 0 and eta0 = 1 the barrier is b <= R, which holds
        # for any nonnegative spectrum
        trace = integrate(
            FlowState(0.0, (0.05, 0.15, 0.35, 0.45)),
            WorstStarWeyl(gamma=2.0),
            dt=1e-3,
            t_end=1.0,
            r_cap=1e6,
        )
        diag = trace_diagnostics(trace, 1.0, 0.0)
        assert not diag.barrier_violated
        assert diag.max_barrier_slack <= 0.0

    def test_eta_segments(self):
        trace = integrate(
            FlowState(0.0, (0.05, 0.15, 0.35, 0.45)),
            WorstStarWeyl(gamma=2.0),
            dt=1e-3,
            t_end=0.5,
            r_cap=1e6,
        )
        diag = trace_diagnostics(trace, 0.6, 0.0)
        assert diag.eta_segments
        assert diag.eta_segments[0][2] == "decreasing"

    def test_empty_trace_rejected(self):
        from pinchlab.flow import FlowTrace

        with pytest.raises(ValueError):
            trace_diagnostics(FlowTrace(states=(), weyl_values=(), dt=0.1, reason="t_end"), 1.0, 0.0)


class TestSerialization:
    def test_columns_and_rows(self):
        trace = integrate(
            FlowState(0.0, (0.0, 2.0, 2.0, 2.0)), ZeroWeyl(), dt=1e-4, t_end=0.01, r_cap=1e6
        )
        text = serialize_trace(trace)
        lines = text.strip().split("\n")
        assert lines[0].split("\t") == [
            "t", "lambda1", "lambda2", "lambda3", "lambda4", "R", "b", "eta", "w",
        ]
        assert len(lines) == len(trace.states) + 1
        first = lines[1].split("\t")
        assert float(first[0]) == 0.0
        assert float(first[5]) == 6.0
        assert float(first[7]) == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_full_precision_round_trip(self):
        trace = integrate(
            FlowState(0.0, (0.05, 0.15, 0.35, 0.45)),
            WorstStarWeyl(gamma=2.0),
            dt=1e-3,
            t_end=0.05,
            r_cap=1e6,
        )
        lines = serialize_trace(trace).strip().split("\n")[1:]
        parsed = [tuple(float(v) for v in line.split("\t")) for line in lines]
        for row, state in zip(parsed, trace.states):
            assert row[1:5] == state.lam
