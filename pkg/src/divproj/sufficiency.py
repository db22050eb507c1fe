"""Sufficient statistics of the generalized likelihoods.

Each (family, likelihood) pair admits a sample statistic T such that the
likelihood splits as g(theta, T) + h(sample); the estimator then depends on
the sample only through T.  The statistics:

* exponential / log-likelihood:               T = fbar
* non-normalized power-law / Basu likelihood: T = fbar
* power-law / Jones likelihood:               T = fbar / mean_sample[Q^(a-1)]
* alpha-exponential / Hellinger likelihood:   T = escort-mean[f] / escort-mean[Q^(1-a)]

where the escort means are taken under the scaled empirical measure
Ph^alpha / sum Ph^alpha.  ``likelihood_split`` returns the (g, h) pieces so
the decomposition itself is checkable, and ``factorization_check`` verifies
the testable consequence: equal-T samples shift the likelihood by a
constant and share the same maximizer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptySampleError
from .estimators import EstimatorKind, likelihood
from .families import FamilyKind, FamilySpec, member_with_normalizer
from .measures import Distribution, SampleData, check_alpha

MATCHED_LIKELIHOOD = {
    FamilyKind.EXPONENTIAL: EstimatorKind.MLE,
    FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW: EstimatorKind.BASU,
    FamilyKind.ALPHA_POWER_LAW: EstimatorKind.JONES,
    FamilyKind.ALPHA_EXPONENTIAL: EstimatorKind.HELLINGER,
}


@dataclass(frozen=True)
class SufficientStatistic:
    model_kind: FamilyKind
    value: np.ndarray
    components_doc: str


def sufficient_statistic(
    model_kind: FamilyKind,
    sample: SampleData,
    q: Distribution,
    f: np.ndarray,
    alpha: float = 1.0,
) -> SufficientStatistic:
    """The statistic through which the matched likelihood sees the sample."""
    model_kind = FamilyKind(model_kind)
    if sample.n == 0:
        raise EmptySampleError("sufficient statistic of an empty sample")
    if not q.is_strictly_positive():
        raise DomainError("reference measure must have full support")
    alpha = check_alpha(alpha, allow_one=True)
    f = np.atleast_2d(np.asarray(f, dtype=float))
    ph = sample.empirical.probs
    fbar = f @ ph
    if model_kind in (FamilyKind.EXPONENTIAL, FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW):
        return SufficientStatistic(model_kind, fbar, "sample mean of f")
    if model_kind is FamilyKind.ALPHA_POWER_LAW:
        denom = float(ph @ q.probs ** (alpha - 1.0))
        return SufficientStatistic(
            model_kind, fbar / denom, "sample mean of f over sample mean of Q^(alpha-1)"
        )
    # alpha-exponential: escort averages under the scaled empirical measure
    w = ph**alpha
    w = w / w.sum()
    denom = float(w @ q.probs ** (1.0 - alpha))
    return SufficientStatistic(
        model_kind,
        (f @ w) / denom,
        "escort mean of f over escort mean of Q^(1-alpha)",
    )


def likelihood_split(spec: FamilySpec, theta, sample: SampleData) -> tuple[float, float]:
    """(g, h) with matched_likelihood(theta) = g(theta, T) + h(sample).

    g depends on the sample only through the sufficient statistic; h not on
    theta.  Valid for members of the spec's own family kind.
    """
    a = spec.alpha
    ph = sample.empirical.probs
    f = spec.f
    fbar = f @ ph
    p, z = member_with_normalizer(spec, theta)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if spec.kind is FamilyKind.EXPONENTIAL:
        h = float(ph @ np.log(spec.q.probs))
        g = -np.log(z) + float(theta @ fbar)
        return g, h
    if spec.kind is FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW:
        qbar = float(ph @ spec.q.probs ** (a - 1.0))
        h = a / (a - 1.0) * qbar
        g = -(a * z + 1.0 / (a - 1.0) + a * float(theta @ fbar) + float(np.sum(p.probs**a)))
        return g, h
    if spec.kind is FamilyKind.ALPHA_POWER_LAW:
        qbar = float(ph @ spec.q.probs ** (a - 1.0))
        h = a / (a - 1.0) * np.log(qbar)
        g = (
            -a * np.log(z)
            + a / (a - 1.0) * np.log1p((1.0 - a) * float(theta @ fbar) / qbar)
            - np.log(float(np.sum(p.probs**a)))
        )
        return float(g), float(h)
    # alpha-exponential
    w = ph**a
    w_sum = float(w.sum())
    w = w / w_sum
    t4_num = f @ w
    t4_den = float(w @ spec.q.probs ** (1.0 - a))
    with np.errstate(divide="ignore"):
        cross = float(np.sum(np.where(ph > 0.0, ph**a * spec.q.probs ** (1.0 - a), 0.0)))
    h = np.log(cross) / (1.0 - a)
    g = -np.log(z) + np.log1p((1.0 - a) * float(theta @ t4_num) / t4_den) / (1.0 - a)
    return float(g), float(h)


@dataclass(frozen=True)
class FactorizationReport:
    t_a: np.ndarray
    t_b: np.ndarray
    t_equal: bool
    max_deviation_from_constant: float
    argmax_a: float | np.ndarray
    argmax_b: float | np.ndarray
    argmax_equal: bool


def factorization_check(
    spec: FamilySpec,
    sample_a: SampleData,
    sample_b: SampleData,
    theta_grid: np.ndarray,
    t_tol: float = 1e-10,
    const_tol: float = 1e-9,
) -> FactorizationReport:
    """Verify the equal-T consequence over a parameter grid.

    When T(sample_a) = T(sample_b) (within ``t_tol``), the matched
    likelihoods must differ by a theta-independent constant and share the
    grid argmax; reports the maximum deviation of the difference from its
    mean.
    """
    from .families import is_admissible

    kind = MATCHED_LIKELIHOOD[spec.kind]
    t_a = sufficient_statistic(spec.kind, sample_a, spec.q, spec.f, spec.alpha).value
    t_b = sufficient_statistic(spec.kind, sample_b, spec.q, spec.f, spec.alpha).value
    t_equal = bool(np.max(np.abs(t_a - t_b)) <= t_tol)
    grid = np.asarray(theta_grid, dtype=float)
    if grid.ndim == 1:
        grid = grid[:, None]
    grid = np.asarray([th for th in grid if is_admissible(spec, th)])
    if len(grid) == 0:
        raise DomainError("no admissible grid point")
    vals_a = np.array([likelihood(kind, spec, th, sample_a) for th in grid])
    vals_b = np.array([likelihood(kind, spec, th, sample_b) for th in grid])
    diff = vals_a - vals_b
    deviation = float(np.max(np.abs(diff - diff.mean())))
    ia, ib = int(np.argmax(vals_a)), int(np.argmax(vals_b))
    report = FactorizationReport(
        t_a=t_a,
        t_b=t_b,
        t_equal=t_equal,
        max_deviation_from_constant=deviation,
        argmax_a=grid[ia],
        argmax_b=grid[ib],
        argmax_equal=bool(ia == ib),
    )
    if t_equal and deviation > const_tol:
        raise AssertionError(
            f"equal-T samples produced a non-constant likelihood difference ({deviation:.3e})"
        )
    return report


def equal_statistic_pairs(
    model_kind: FamilyKind,
    q: Distribution,
    f: np.ndarray,
    alpha: float,
    n: int,
    tol: float = 1e-10,
    require_distinct_counts: bool = True,
    max_pairs: int = 20,
):
    """Exhaustively search count vectors of total n for equal-T sample pairs.

    Returns a list of ``(sample_a, sample_b)`` whose sufficient statistics
    agree within ``tol``; with ``require_distinct_counts`` only pairs with
    different count vectors (not mere permutations) are kept.  Intended for
    n <= 12 at desk scale.
    """
    if n > 60:
        raise DomainError("exhaustive search is meant for small n")
    m = q.m
    found = []
    combos = list(itertools.combinations(range(n + m - 1), m - 1))
    counts_list = []
    for cuts in combos:
        prev = -1
        counts = []
        for c in cuts:
            counts.append(c - prev - 1)
            prev = c
        counts.append(n + m - 2 - prev)
        counts_list.append(tuple(counts))
    stats = []
    samples = []
    for counts in counts_list:
        if all(c == 0 for c in counts):
            continue
        sample = SampleData.from_counts(counts, q.alphabet)
        t = sufficient_statistic(model_kind, sample, q, f, alpha).value
        stats.append(t)
        samples.append((counts, sample))
    for i in range(len(samples)):
        for j in range(i + 1, len(samples)):
            if require_distinct_counts and samples[i][0] == samples[j][0]:
                continue
            if np.max(np.abs(stats[i] - stats[j])) <= tol:
                found.append((samples[i][1], samples[j][1]))
                if len(found) >= max_pairs:
                    return found
    return found
