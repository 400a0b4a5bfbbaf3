"""Sweep analyses: power-law slope fits, tipping points, window-cost model."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSeries:
    label: str
    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        ns = [n for n, _ in self.points]
        if ns != sorted(set(ns)):
            raise AnalysisError("n values must be strictly increasing")
        if any(v <= 0 for _, v in self.points):
            raise AnalysisError("series values must be positive")

    @property
    def grid(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.points)


@dataclass(frozen=True)
class WindowSample:
    n: int
    w: int
    cost: float

    def __post_init__(self):
        if not 1 <= self.w <= self.n:
            raise AnalysisError("need 1 <= w <= n")
        if self.cost <= 0:
            raise AnalysisError("cost must be positive")


def log_grid(n_min: int, n_max: int) -> list[int]:
    """Rounded n_min * 2^(k/4) values, deduplicated and capped at n_max."""
    if not 3 <= n_min <= n_max:
        raise AnalysisError("need 3 <= n_min <= n_max")
    out: list[int] = []
    k = 0
    while True:
        v = math.floor(n_min * 2 ** (k / 4) + 0.5)
        if v > n_max:
            break
        if not out or v != out[-1]:
            out.append(v)
        k += 1
    return out


def fit_power_law(series: SweepSeries) -> tuple[float, float]:
    """OLS fit of log2(value) against log2(n); returns (slope, intercept)."""
    if len(series.points) < 3:
        raise AnalysisError("need at least 3 points for a slope fit")
    xs = np.log2([n for n, _ in series.points])
    ys = np.log2([v for _, v in series.points])
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)


def find_tipping_point(a: SweepSeries, b: SweepSeries) -> int | None:
    """Smallest n where b stays strictly below a through the end of the grid."""
    if a.grid != b.grid:
        raise AnalysisError("series grids do not match")
    below = [vb < va for (_, va), (_, vb) in zip(a.points, b.points)]
    for i, n in enumerate(a.grid):
        if all(below[i:]) and below[i]:
            return n
    return None


def fit_window_model(samples) -> tuple[float, float]:
    """Least-squares (c1, c2) for cost ~ (c1*2^w + c2*n^2) * n / w."""
    samples = list(samples)
    if len(samples) < 4:
        raise AnalysisError("need at least 4 window samples")
    if len({s.w for s in samples}) < 2:
        raise AnalysisError("window samples must span at least 2 distinct w")
    design = np.array(
        [[(2.0 ** s.w) * s.n / s.w, float(s.n) ** 3 / s.w] for s in samples]
    )
    target = np.array([s.cost for s in samples])
    if np.linalg.matrix_rank(design) < 2:
        raise AnalysisError("degenerate design matrix")
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    return float(coef[0]), float(coef[1])


def window_model_cost(c1: float, c2: float, n: int, w: int) -> float:
    return (c1 * 2.0 ** w + c2 * float(n) ** 2) * n / w


def window_model_argmin(c1: float, c2: float, n: int, w_max: int | None = None) -> int:
    """Integer w minimising the fitted window-cost model."""
    w_max = min(n, w_max or n)
    return min(range(1, w_max + 1), key=lambda w: window_model_cost(c1, c2, n, w))
