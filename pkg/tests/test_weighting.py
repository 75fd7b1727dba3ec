import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from glovekit.weighting import (
    Constant,
    ExpSaturating,
    PowerClip,
    check_properties,
    kernel_params,
    spec_name,
    weight,
)

# Reference values computed independently with 60-digit arithmetic and
# rounded to the nearest float64.
POWER_CLIP_TABLE = {
    0.0: 0.0,
    0.5: 0.10573712634405641,
    1.0: 0.1778279410038923,
    2.5: 0.3535533905932738,
    5.0: 0.5946035575013605,
    9.5: 0.9622606002309622,
    10.0: 1.0,
    11.0: 1.0,
    1e9: 1.0,
}
EXP_TABLE = {
    0.0: 0.0,
    1.0: 0.15210629591208416,
    5.0: 0.5617650075350508,
    10.0: 0.8079500913792459,
    42.0: 0.9990219991316046,
}

GRID = [0.0, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0, 7.5, 9.999, 10.0, 10.001, 25.0, 100.0, 1e6]

specs_st = st.one_of(
    st.builds(PowerClip,
              x_max=st.floats(0.5, 1000.0),
              alpha=st.floats(0.05, 1.0)),
    st.builds(ExpSaturating, lam=st.floats(1e-3, 10.0)),
    st.just(Constant()),
)


class TestPowerClip:
    @pytest.mark.parametrize("x,expected", sorted(POWER_CLIP_TABLE.items()))
    def test_reference_values(self, x, expected):
        assert weight(PowerClip(), x) == pytest.approx(expected, rel=1e-14, abs=0.0)

    def test_clips_exactly_to_one_at_and_above_x_max(self):
        spec = PowerClip(x_max=7.0, alpha=0.6)
        assert weight(spec, 7.0) == 1.0
        assert weight(spec, 7.0000001) == 1.0

    def test_alpha_one_is_linear_ramp(self):
        spec = PowerClip(x_max=4.0, alpha=1.0)
        assert weight(spec, 1.0) == 0.25
        assert weight(spec, 3.0) == 0.75

    @pytest.mark.parametrize("bad", [{"x_max": 0.0}, {"x_max": -1.0},
                                     {"alpha": 0.0}, {"alpha": 1.5}, {"alpha": -0.5}])
    def test_invalid_params_rejected(self, bad):
        with pytest.raises(ValueError):
            PowerClip(**bad)


class TestExpSaturating:
    @pytest.mark.parametrize("x,expected", sorted(EXP_TABLE.items()))
    def test_reference_values(self, x, expected):
        assert weight(ExpSaturating(), x) == pytest.approx(expected, rel=1e-14, abs=0.0)

    def test_other_rate(self):
        assert weight(ExpSaturating(lam=0.5), 3.0) == pytest.approx(
            0.7768698398515702, rel=1e-14
        )

    def test_saturates_toward_one_from_below(self):
        spec = ExpSaturating()
        assert weight(spec, 100.0) < 1.0  # 1 - e^-16.5 still distinguishable
        assert weight(spec, 100.0) == pytest.approx(1.0, abs=1e-7)
        # beyond float64 resolution the limit is hit exactly, never exceeded
        assert weight(spec, 1e6) == 1.0

    def test_small_x_stays_accurate(self):
        # expm1 keeps relative accuracy where 1 - exp(-t) would cancel
        assert weight(ExpSaturating(), 1e-12) == pytest.approx(0.165e-12, rel=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -0.165])
    def test_invalid_rate_rejected(self, bad):
        with pytest.raises(ValueError):
            ExpSaturating(lam=bad)


class TestConstant:
    def test_values(self):
        spec = Constant()
        assert weight(spec, 0.0) == 0.0
        assert weight(spec, 1e-300) == 1.0
        assert weight(spec, 50.0) == 1.0


class TestWeightDomain:
    @pytest.mark.parametrize("spec", [PowerClip(), ExpSaturating(), Constant()])
    def test_negative_x_rejected(self, spec):
        with pytest.raises(ValueError):
            weight(spec, -0.5)


class TestSharedProperties:
    @pytest.mark.parametrize("spec", [PowerClip(), ExpSaturating(), Constant(),
                                      PowerClip(x_max=3.0, alpha=0.3),
                                      ExpSaturating(lam=2.0)])
    def test_grid_report_passes(self, spec):
        report = check_properties(spec, GRID)
        assert report.passed
        assert report.value_at_zero == 0.0
        assert report.first_decrease_at is None
        assert report.first_out_of_range_at is None

    @given(specs_st, st.floats(0.0, 1e9))
    def test_range_always_unit_interval(self, spec, x):
        assert 0.0 <= weight(spec, x) <= 1.0

    @given(specs_st, st.floats(0.0, 1e6), st.floats(0.0, 1e6))
    def test_monotone_non_decreasing(self, spec, x1, x2):
        lo, hi = sorted((x1, x2))
        assert weight(spec, lo) <= weight(spec, hi)

    def test_misbehaving_params_are_caught_by_the_report(self):
        # Bypass validation to simulate a corrupted spec: a negative rate
        # turns the exp family into a decreasing, out-of-range curve.
        spec = ExpSaturating()
        object.__setattr__(spec, "lam", -0.165)
        report = check_properties(spec, [0.0, 1.0, 2.0, 5.0, 10.0])
        assert not report.passed
        assert not report.non_decreasing
        assert not report.in_unit_range
        assert report.first_decrease_at == 1.0
        assert report.first_out_of_range_at == 1.0

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            check_properties(PowerClip(), [1.0, 2.0])  # missing origin
        with pytest.raises(ValueError):
            check_properties(PowerClip(), [0.0, 2.0, 1.0])  # not sorted
        with pytest.raises(ValueError):
            check_properties(PowerClip(), [])


class TestKernelParams:
    def test_codes_round_trip_the_parameters(self):
        assert kernel_params(PowerClip(x_max=8.0, alpha=0.5)) == (0, 8.0, 0.5)
        assert kernel_params(ExpSaturating(lam=0.2)) == (1, 0.2, 0.0)
        assert kernel_params(Constant()) == (2, 0.0, 0.0)

    def test_names(self):
        assert spec_name(PowerClip()) == "power-clip"
        assert spec_name(ExpSaturating()) == "exp"
        assert spec_name(Constant()) == "constant"
