"""Degree histograms and discrete power-law fitting.

The fit follows the usual recipe for heavy-tailed count data: for each
candidate lower cutoff the exponent is the discrete maximum-likelihood
estimate, and the cutoff kept is the one whose tail has the smallest
Kolmogorov-Smirnov distance to its fitted model.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

MIN_CONFIDENT_SAMPLES = 50
GAMMA_BOUNDS = (1.0 + 1e-6, 20.0)


class DegenerateInputError(ValueError):
    pass


@dataclass(frozen=True)
class PowerLawFit:
    gamma: float
    x_min: int
    ks_statistic: float
    n_tail: int
    low_confidence: bool = False


def degree_distribution(view: nx.Graph) -> dict[int, int]:
    """Histogram of unweighted degree, sorted by degree."""
    counts = Counter(d for _, d in view.degree())
    return dict(sorted(counts.items()))


def _mle_gamma(tail: np.ndarray, x_min: int) -> float:
    n = tail.size
    log_sum = float(np.log(tail).sum())

    def nll(g: float) -> float:
        return n * np.log(zeta(g, x_min)) + g * log_sum

    res = minimize_scalar(nll, bounds=GAMMA_BOUNDS, method="bounded", options={"xatol": 1e-7})
    return float(res.x)


def _ks_distance(tail: np.ndarray, x_min: int, gamma: float) -> float:
    values, counts = np.unique(tail, return_counts=True)
    emp = np.cumsum(counts) / tail.size
    norm = zeta(gamma, x_min)
    # model CDF at each observed value and just before the next one, where the
    # empirical step function is flat and the gap is widest
    model_at = 1.0 - zeta(gamma, values + 1.0) / norm
    before_next = values[1:] - 1
    model_before = 1.0 - zeta(gamma, before_next + 1.0) / norm
    d = np.abs(emp - model_at).max()
    if before_next.size:
        d = max(d, np.abs(emp[:-1] - model_before).max())
    return float(d)


def fit_power_law(
    degrees: Sequence[int],
    x_min: int | None = None,
    min_tail: int = 10,
) -> PowerLawFit:
    """Fit P(k) ~ k^-gamma to positive integer samples.

    ``x_min`` fixes the cutoff; otherwise every observed value leaving at
    least ``min_tail`` samples in the tail is tried. Fewer than 50 samples
    still produce a fit, flagged ``low_confidence``.
    """
    x = np.asarray(degrees, dtype=float)
    if x.size == 0:
        raise DegenerateInputError("no samples")
    if np.any(x < 1) or np.any(x != np.round(x)):
        raise ValueError("power-law samples must be positive integers")
    if np.all(x == x[0]):
        raise DegenerateInputError("all samples are equal; exponent is undefined")
    low_conf = x.size < MIN_CONFIDENT_SAMPLES

    if x_min is not None:
        candidates = [int(x_min)]
    else:
        uniq = np.unique(x)
        tail_sizes = x.size - np.searchsorted(np.sort(x), uniq, side="left")
        need = min(min_tail, x.size)
        candidates = [int(u) for u, t in zip(uniq, tail_sizes) if t >= max(need, 2)]

    best: PowerLawFit | None = None
    for xm in candidates:
        tail = x[x >= xm]
        if tail.size < 2 or np.all(tail == xm):
            continue
        g = _mle_gamma(tail, xm)
        ks = _ks_distance(tail, xm, g)
        if best is None or ks < best.ks_statistic:
            best = PowerLawFit(g, xm, ks, int(tail.size), low_conf)
    if best is None:
        raise DegenerateInputError("no cutoff leaves a tail with two distinct values")
    return best
