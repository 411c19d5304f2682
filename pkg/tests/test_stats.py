import pytest

from patternbuilder.stats import (
    DegenerateVarianceError,
    StatsError,
    pearson,
    regress_loglinear,
)

# Length-14 fixture; expected values computed independently with numpy
# (corrcoef/polyfit) and frozen.
FIX_X = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0, 8.0, 9.0, 7.0]
FIX_Y = [2.0, 7.0, 1.0, 8.0, 2.0, 8.0, 1.0, 8.0, 2.0, 8.0, 4.0, 5.0, 9.0, 0.0]
FIX_R = 0.1410835984806872

REG_PRED = [29.0, 280.0, 834.0, 556.0, 1780.0, 33737.0, 120000.0, 350.0, 473.0, 219.0, 624.0, 433.0, 832.0, 542.0]
REG_RESP = [12.5, 31.0, 47.25, 40.0, 55.5, 90.25, 140.0, 33.75, 38.5, 26.0, 44.0, 36.5, 52.25, 41.0]
REG_SLOPE = 34.18025179394308
REG_INTERCEPT = -51.11281327206755
REG_R = 0.9708429384493024


def test_pearson_perfect_positive():
    assert pearson([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 1.0


def test_pearson_perfect_negative():
    assert pearson([1.0, 2.0, 3.0], [3.0, 2.0, 1.0]) == -1.0


def test_pearson_fixture():
    assert abs(pearson(FIX_X, FIX_Y) - FIX_R) < 1e-9


def test_pearson_symmetry_and_affine_invariance():
    r = pearson(FIX_X, FIX_Y)
    assert pearson(FIX_Y, FIX_X) == pytest.approx(r, abs=1e-12)
    scaled = [2.5 * v + 7.0 for v in FIX_X]
    assert pearson(scaled, FIX_Y) == pytest.approx(r, abs=1e-9)
    flipped = [-1.0 * v + 3.0 for v in FIX_X]
    assert pearson(flipped, FIX_Y) == pytest.approx(-r, abs=1e-9)


def test_pearson_degenerate_variance():
    with pytest.raises(DegenerateVarianceError):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(DegenerateVarianceError):
        pearson([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])


def test_pearson_length_checks():
    with pytest.raises(StatsError):
        pearson([1.0], [1.0])
    with pytest.raises(StatsError):
        pearson([1.0, 2.0], [1.0, 2.0, 3.0])


def test_regress_exact_loglinear():
    slope, intercept, r = regress_loglinear([10.0, 100.0, 1000.0], [1.0, 2.0, 3.0])
    assert slope == pytest.approx(1.0, abs=1e-12)
    assert intercept == pytest.approx(0.0, abs=1e-12)
    assert r == pytest.approx(1.0, abs=1e-12)


def test_regress_constant_response_degenerate():
    with pytest.raises(DegenerateVarianceError):
        regress_loglinear([10.0, 100.0, 1000.0], [4.0, 4.0, 4.0])


def test_regress_nonpositive_predictor():
    with pytest.raises(StatsError):
        regress_loglinear([10.0, 0.0, 1000.0], [1.0, 2.0, 3.0])
    with pytest.raises(StatsError):
        regress_loglinear([10.0, -5.0, 1000.0], [1.0, 2.0, 3.0])


def test_regress_fixture():
    slope, intercept, r = regress_loglinear(REG_PRED, REG_RESP)
    assert abs(slope - REG_SLOPE) < 1e-9
    assert abs(intercept - REG_INTERCEPT) < 1e-9
    assert abs(r - REG_R) < 1e-9
