import pytest
from hypothesis import given, strategies as st

from greeneval.core import (
    CarbonIntensity,
    DomainError,
    EnergyEstimate,
    EstimateMethod,
    HardwareSpec,
)
from greeneval.energy import carbon_g, estimate_vs_measured, worst_case_kwh

V100 = HardwareSpec(name="V100", max_power_watts=300.0, count=1)
P100x4 = HardwareSpec(name="P100", max_power_watts=250.0, count=4)
P100 = HardwareSpec(name="P100", max_power_watts=250.0, count=1)
TITAN_X = HardwareSpec(name="TITAN X", max_power_watts=250.0, count=1)


class TestWorstCase:
    # The five bundled survey rows are exact decimal products and must
    # reproduce bit-for-bit.
    @pytest.mark.parametrize("hw,hours,expected", [
        (V100, 272.0, 81.6),
        (V100, 108.0, 32.4),
        (TITAN_X, 168.0, 42.0),
        (P100x4, 52.0, 52.0),
        (P100, 96.0, 24.0),
    ])
    def test_survey_rows_bit_for_bit(self, hw, hours, expected):
        estimate = worst_case_kwh(hw, hours)
        assert estimate.kwh == expected
        assert estimate.method is EstimateMethod.WORST_CASE_SPEC

    def test_zero_hours(self):
        assert worst_case_kwh(V100, 0.0).kwh == 0.0

    def test_negative_hours_rejected(self):
        with pytest.raises(DomainError):
            worst_case_kwh(V100, -1.0)

    def test_unresolved_power_rejected(self):
        with pytest.raises(DomainError):
            worst_case_kwh(HardwareSpec(name="X", max_power_watts=0.0), 1.0)

    @given(st.floats(min_value=0, max_value=1e4, allow_subnormal=False),
           st.floats(min_value=0, max_value=1e4, allow_subnormal=False))
    def test_linearity_in_hours(self, a, b):
        whole = worst_case_kwh(V100, a + b).kwh
        split = worst_case_kwh(V100, a).kwh + worst_case_kwh(V100, b).kwh
        assert abs(whole - split) <= 1e-9 * max(1.0, abs(whole))

    @given(st.integers(min_value=1, max_value=64),
           st.floats(min_value=0, max_value=1e4, allow_subnormal=False))
    def test_device_count_linearity(self, count, hours):
        base = HardwareSpec(name="G", max_power_watts=250.0, count=count)
        doubled = HardwareSpec(name="G", max_power_watts=250.0, count=2 * count)
        assert worst_case_kwh(doubled, hours).kwh == \
            2.0 * worst_case_kwh(base, hours).kwh


class TestCarbon:
    def test_zero_intensity(self):
        est = worst_case_kwh(V100, 272.0)
        assert carbon_g(est, CarbonIntensity(region="nowhere",
                                             g_co2_per_kwh=0.0)) == 0.0

    def test_unit_scaling(self):
        est = EnergyEstimate(kwh=1.0, method=EstimateMethod.WORST_CASE_SPEC)
        assert carbon_g(est, CarbonIntensity("r", 500.0)) == 500.0

    def test_hand_multiplied_value(self):
        # 42 kWh x 300 g/kWh = 12600 g; the intensity is a test fixture.
        est = EnergyEstimate(kwh=42.0, method=EstimateMethod.WORST_CASE_SPEC)
        assert carbon_g(est, CarbonIntensity("r", 300.0)) == 12600.0

    def test_negative_intensity_rejected(self):
        with pytest.raises(DomainError):
            CarbonIntensity("r", -1.0)


class TestEstimateVsMeasured:
    def test_sing_style_gap(self):
        estimated = EnergyEstimate(kwh=52.0, method=EstimateMethod.WORST_CASE_SPEC)
        measured = EnergyEstimate(kwh=64.8,
                                  method=EstimateMethod.MEASURED_EXTRAPOLATED)
        cmp = estimate_vs_measured(estimated, measured)
        assert cmp.delta_kwh == pytest.approx(12.8, abs=1e-9)
        assert cmp.relative == pytest.approx(0.2462, abs=1e-4)
        assert cmp.estimate_method is EstimateMethod.WORST_CASE_SPEC
        assert cmp.measured_method is EstimateMethod.MEASURED_EXTRAPOLATED

    def test_equal_values_give_zero_deltas(self):
        est = EnergyEstimate(kwh=7.5, method=EstimateMethod.WORST_CASE_SPEC)
        meas = EnergyEstimate(kwh=7.5, method=EstimateMethod.MEASURED_INTEGRATED)
        cmp = estimate_vs_measured(est, meas)
        assert cmp.delta_kwh == 0.0
        assert cmp.relative == 0.0

    def test_zero_estimate_leaves_relative_undefined(self):
        est = EnergyEstimate(kwh=0.0, method=EstimateMethod.WORST_CASE_SPEC)
        meas = EnergyEstimate(kwh=5.0, method=EstimateMethod.MEASURED_INTEGRATED)
        cmp = estimate_vs_measured(est, meas)
        assert cmp.delta_kwh == 5.0
        assert cmp.relative is None
