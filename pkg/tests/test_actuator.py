import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfit.actuator import (
    TABLE3_ROWS,
    ComparisonRow,
    PressureSweep,
    TipPose,
    bending_angle,
    comparison_csv,
    comparison_report,
    headline,
    interpolate,
)
from hyperfit.errors import DomainError, ExtrapolationError


def sweep_strategy(monotone=False):
    @st.composite
    def build(draw):
        n = draw(st.integers(2, 12))
        steps = draw(st.lists(st.floats(0.1, 5.0), min_size=n, max_size=n))
        p = np.cumsum(steps) - steps[0]
        if monotone:
            inc = draw(st.lists(st.floats(0.0, 50.0), min_size=n, max_size=n))
            v = np.cumsum(inc)
        else:
            v = np.array(draw(st.lists(st.floats(-100, 100), min_size=n, max_size=n)))
        return PressureSweep("bending_angle", p, v)
    return build()


class TestBendingAngle:
    def test_headline_value(self):
        assert bending_angle(TipPose(10.0, 180.3)) == pytest.approx(170.3, abs=1e-12)

    def test_no_motion(self):
        assert bending_angle(TipPose(42.0, 42.0)) == 0.0

    def test_plain_difference_does_not_wrap(self):
        assert bending_angle(TipPose(350.0, 10.0)) == -340.0

    def test_wrap(self):
        assert bending_angle(TipPose(350.0, 10.0), wrap=True) == 20.0
        assert bending_angle(TipPose(0.0, 180.0), wrap=True) == 180.0
        assert bending_angle(TipPose(0.0, -180.0), wrap=True) == 180.0
        assert bending_angle(TipPose(0.0, 200.0), wrap=True, turns=1) == 200.0

    @given(st.floats(-359, 359), st.floats(-359, 359))
    def test_antisymmetric(self, a, b):
        assert bending_angle(TipPose(a, b)) == -bending_angle(TipPose(b, a))

    def test_pose_range(self):
        with pytest.raises(DomainError):
            TipPose(0.0, 360.0)


class TestInterpolate:
    def test_endpoint_exact(self):
        s = PressureSweep("bending_angle", [0, 5, 10, 15, 20, 25], [0, 12, 40, 80, 125, 170.3])
        assert interpolate(s, 25.0) == 170.3

    def test_node_exact(self):
        s = PressureSweep("bending_angle", [0, 10, 25], [0, 50, 170.3])
        assert interpolate(s, 10.0) == 50.0

    def test_two_points_linear(self):
        s = PressureSweep("blocked_force", [0, 25], [0, 0.34])
        assert interpolate(s, 12.5) == pytest.approx(0.17, rel=1e-14)
        q = np.linspace(0, 25, 51)
        np.testing.assert_allclose(interpolate(s, q), 0.34 * q / 25, rtol=1e-13, atol=1e-15)

    def test_out_of_range(self):
        s = PressureSweep("blocked_force", [0, 25], [0, 0.34])
        with pytest.raises(ExtrapolationError):
            interpolate(s, 30.0)
        assert interpolate(s, 30.0, extrapolate=True) == pytest.approx(0.408)
        assert interpolate(s, -5.0, extrapolate=True) == pytest.approx(-0.068)

    def test_envelope_flag(self):
        s = PressureSweep("bending_angle", [0, 25, 30], [0, 170, 180])
        np.testing.assert_array_equal(s.in_envelope, [True, True, False])

    def test_invalid_sweeps(self):
        with pytest.raises(DomainError):
            PressureSweep("bending_angle", [0], [0])
        with pytest.raises(DomainError):
            PressureSweep("bending_angle", [0, 0], [0, 1])
        with pytest.raises(DomainError):
            PressureSweep("torque", [0, 1], [0, 1])

    def test_cubic_reproduces_smooth_monotone_data(self):
        p = np.linspace(0, 25, 11)
        s = PressureSweep("bending_angle", p, 0.27 * p ** 2)
        q = np.linspace(0, 25, 101)
        np.testing.assert_allclose(interpolate(s, q), 0.27 * q ** 2, atol=2.0)

    @settings(max_examples=200, deadline=None)
    @given(sweep_strategy())
    def test_node_exactness_property(self, s):
        np.testing.assert_array_equal(interpolate(s, s.pressure_kpa), s.values)

    @settings(max_examples=200, deadline=None)
    @given(sweep_strategy(monotone=True))
    def test_monotone_preservation(self, s):
        q = np.linspace(s.pressure_kpa[0], s.pressure_kpa[-1], 1000)
        v = interpolate(s, q)
        scale = max(1.0, float(np.max(np.abs(s.values))))
        assert np.all(np.diff(v) >= -1e-12 * scale)

    @settings(max_examples=200, deadline=None)
    @given(sweep_strategy())
    def test_boundedness(self, s):
        x, y = s.pressure_kpa, s.values
        for k in range(len(x) - 1):
            q = np.linspace(x[k], x[k + 1], 50)
            v = interpolate(s, q)
            lo, hi = min(y[k], y[k + 1]), max(y[k], y[k + 1])
            tol = 1e-12 * max(1.0, abs(lo), abs(hi))
            assert np.all(v >= lo - tol) and np.all(v <= hi + tol)


class TestReport:
    def test_headlines(self):
        a = PressureSweep("bending_angle", [0, 10, 25], [0, 50, 170.3])
        f = PressureSweep("blocked_force", [0, 10, 25], [0, 0.1, 0.34])
        assert headline(a) == "170.3° at 25 kPa"
        assert headline(f) == "0.34 N at 25 kPa"

    def test_table3(self):
        text = comparison_report(TABLE3_ROWS)
        lines = text.splitlines()
        assert len(lines) == 2 + 5
        for line, entry in zip(lines[2:], ["0.3 at 25 kPa", "0.2 at 25 kPa", "0.4 at 25 kPa",
                                           "0.5 at 40 kPa", "0.5 at 50 kPa"]):
            assert line.endswith(entry)
        # columns align
        assert len({line.index("0.") for line in lines[2:]}) == 1

    def test_single_row(self):
        text = comparison_report([ComparisonRow("only", 1.25, 30)])
        assert text.splitlines()[-1] == "only                1.25 at 30 kPa"

    def test_empty(self):
        with pytest.raises(DomainError):
            comparison_report([])
        with pytest.raises(DomainError):
            comparison_csv([])

    def test_csv(self):
        assert comparison_csv(TABLE3_ROWS[:1]) == "label,force_N,pressure_kPa\nEdible gelatin actuator,0.3,25\n"

    def test_row_validation(self):
        with pytest.raises(DomainError):
            ComparisonRow("x", -1, 25)
        with pytest.raises(DomainError):
            ComparisonRow("x", 1, 0)
