"""Correlation and log-linear regression utilities for the analysis pipeline."""

from __future__ import annotations

import math


class DegenerateVarianceError(ValueError):
    """A variable has (near-)zero variance; the statistic is undefined."""


class StatsError(ValueError):
    pass


def _check_lengths(x, y):
    if len(x) != len(y):
        raise StatsError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise StatsError("need at least two observations")


def pearson(x: list[float], y: list[float]) -> float:
    """Product-moment correlation in [-1, 1]."""
    _check_lengths(x, y)
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((xi - mx) ** 2 for xi in x)
    syy = sum((yi - my) ** 2 for yi in y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVarianceError("pearson is undefined for constant input")
    sxy = sum((xi - mx) * (yi - my) for xi, yi in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def regress_loglinear(predictor: list[float], response: list[float]) -> tuple[float, float, float]:
    """OLS of response on log10(predictor): returns (slope, intercept, r).

    Predictors must be strictly positive.
    """
    _check_lengths(predictor, response)
    for v in predictor:
        if v <= 0:
            raise StatsError(f"predictor values must be positive, got {v}")
    lx = [math.log10(v) for v in predictor]
    n = len(lx)
    mx = sum(lx) / n
    my = sum(response) / n
    sxx = sum((v - mx) ** 2 for v in lx)
    if sxx == 0.0:
        raise DegenerateVarianceError("log-predictor is constant")
    sxy = sum((v - mx) * (w - my) for v, w in zip(lx, response))
    slope = sxy / sxx
    intercept = my - slope * mx
    r = pearson(lx, list(response))
    return slope, intercept, r
