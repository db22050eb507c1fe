"""Brute-force certification grids.

Simplex grids are generated as integer compositions of a resolution d
(exact rational membership, reproducible lexicographic order) and converted
to floats once.  Reverse grids sweep a box of parameters.  Both oracles are
exhaustive argmins with a deterministic first-lowest tie-break, so a
parallel evaluation would have to reduce in grid order to match.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .divergences import DivergenceKind, divergence_fixed_p, divergence_rows
from .errors import EmptyFeasibleGrid, NoAdmissibleTheta
from .estimators import EstimatorKind
from .families import FamilySpec, LinearFamilySpec, eval_members_batch
from .measures import Distribution, SampleData


@dataclass(frozen=True)
class SimplexGrid:
    """All compositions of ``resolution`` into m parts, divided by it."""

    m: int
    resolution: int
    interior_only: bool = False

    def __post_init__(self):
        if self.m < 2 or self.resolution < 1:
            raise EmptyFeasibleGrid("grid needs m >= 2 and resolution >= 1")

    def point_count(self) -> int:
        from math import comb

        return comb(self.resolution + self.m - 1, self.m - 1)

    def points(self) -> np.ndarray:
        d, m = self.resolution, self.m
        combos = itertools.combinations(range(d + m - 1), m - 1)
        counts = np.empty((self.point_count(), m), dtype=np.int64)
        for row, cuts in enumerate(combos):
            prev = -1
            for col, c in enumerate(cuts):
                counts[row, col] = c - prev - 1
                prev = c
            counts[row, m - 1] = d + m - 2 - prev
        points = counts / float(d)
        if self.interior_only:
            points = points[np.all(counts > 0, axis=1)]
        return points


def grid_forward_min(
    kind: DivergenceKind,
    alpha: float,
    q: Distribution,
    constraint: LinearFamilySpec | None,
    grid: SimplexGrid,
):
    """Exhaustive forward-projection argmin over a (filtered) simplex grid."""
    kind = DivergenceKind(kind)
    points = grid.points()
    if constraint is not None:
        tol = 0.5 / grid.resolution
        gap = np.max(np.abs(points @ constraint.f.T - constraint.a[None, :]), axis=1)
        points = points[gap <= tol]
    if len(points) == 0:
        raise EmptyFeasibleGrid("no grid point satisfies the constraints")
    values = divergence_rows(kind, points, q.probs, alpha)
    values = np.where(np.isnan(values), np.inf, values)
    best = int(np.argmin(values))  # argmin returns the first minimum
    p_best = Distribution(q.alphabet, points[best], strict=False)
    return p_best, float(values[best])


@dataclass(frozen=True)
class ThetaGrid:
    """Cartesian box lo..hi with the given number of steps per dimension."""

    lo: np.ndarray
    hi: np.ndarray
    steps: np.ndarray

    @classmethod
    def of(cls, lo, hi, steps, k: int = 1) -> "ThetaGrid":
        lo = np.broadcast_to(np.asarray(lo, dtype=float), (k,)).copy()
        hi = np.broadcast_to(np.asarray(hi, dtype=float), (k,)).copy()
        steps = np.broadcast_to(np.asarray(steps, dtype=int), (k,)).copy()
        return cls(lo, hi, steps)

    def points(self) -> np.ndarray:
        axes = [
            np.linspace(self.lo[i], self.hi[i], int(self.steps[i]))
            for i in range(len(self.lo))
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def cell_width(self) -> np.ndarray:
        return (self.hi - self.lo) / np.maximum(1, self.steps - 1)


MATCHED_DIVERGENCE = {
    EstimatorKind.MLE: DivergenceKind.KL,
    EstimatorKind.HELLINGER: DivergenceKind.RENYI,
    EstimatorKind.BASU: DivergenceKind.DENSITY_POWER,
    EstimatorKind.JONES: DivergenceKind.REL_ALPHA_ENTROPY,
}

_LIKELIHOOD_OF_DIVERGENCE = {v: k for k, v in MATCHED_DIVERGENCE.items()}


def _likelihood_rows(kind: EstimatorKind, probs: np.ndarray, ph: np.ndarray, alpha: float) -> np.ndarray:
    """The matched likelihood over many member rows (admissible rows only)."""
    if kind is EstimatorKind.MLE or alpha == 1.0:
        return np.sum(ph[None, :] * np.log(probs), axis=1)
    if kind is EstimatorKind.HELLINGER:
        with np.errstate(divide="ignore"):
            s = np.sum(
                np.where(ph[None, :] > 0.0, ph[None, :] ** alpha * probs ** (1.0 - alpha), 0.0),
                axis=1,
            )
        return np.log(s) / (1.0 - alpha)
    if kind is EstimatorKind.BASU:
        mean_pow = np.sum(ph[None, :] * probs ** (alpha - 1.0), axis=1)
        return (
            alpha / (alpha - 1.0) * mean_pow
            - 1.0 / (alpha - 1.0)
            - np.sum(probs**alpha, axis=1)
        )
    mean_pow = np.sum(ph[None, :] * probs ** (alpha - 1.0), axis=1)
    return alpha / (alpha - 1.0) * np.log(mean_pow) - np.log(np.sum(probs**alpha, axis=1))


def grid_reverse_min(
    kind: DivergenceKind,
    alpha: float,
    sample: SampleData,
    spec: FamilySpec,
    theta_grid: ThetaGrid,
):
    """Exhaustive reverse-projection argmin over an admissible parameter grid.

    Cross-asserts that the matched likelihood attains its grid maximum at
    the same point before returning ``(theta_best, value)``.
    """
    kind = DivergenceKind(kind)
    thetas = theta_grid.points()
    probs, ok = eval_members_batch(spec, thetas)
    if not np.any(ok):
        raise NoAdmissibleTheta("no admissible parameter in the grid box")
    thetas, probs = thetas[ok], probs[ok]
    ph = sample.empirical.probs
    values = divergence_fixed_p(kind, ph, probs, alpha)
    best = int(np.argmin(values))
    lik = _likelihood_rows(_LIKELIHOOD_OF_DIVERGENCE[kind], probs, ph, alpha)
    best_lik = int(np.argmax(lik))
    if best_lik != best:
        raise AssertionError(
            "matched likelihood argmax and divergence argmin disagree on the grid"
        )
    return thetas[best], float(values[best])
