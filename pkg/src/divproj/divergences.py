"""The four divergences on finite alphabets and their alpha -> 1 limits.

All four vanish exactly at P = Q and are nonnegative.  ``alpha = 1`` is
handled by explicit dispatch to the KL divergence rather than by evaluating
the alpha != 1 formulas near 1 (catastrophic cancellation in the
1/(alpha-1) log terms).  Log-sum terms go through a max-shifted
log-sum-exp so that alpha >= 3 on skewed distributions cannot underflow.

Boundary (non-strict) distributions are accepted only where the mathematics
stays meaningful: KL uses the standard 0*log(0) = 0 convention, the density
power divergence accepts boundary arguments everywhere and returns ``inf``
for alpha < 1 when P is not absolutely continuous w.r.t. Q, and the Renyi /
relative alpha-entropy formulas accept zeros only for alpha in (0, 1).
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .measures import Distribution, check_alpha, same_alphabet


class DivergenceKind(enum.Enum):
    KL = "kl"
    RENYI = "renyi"
    DENSITY_POWER = "dpd"
    REL_ALPHA_ENTROPY = "rae"


def kl(p: Distribution, q: Distribution) -> float:
    """Kullback-Leibler divergence sum_x p(x) log(p(x)/q(x))."""
    same_alphabet(p, q)
    pv, qv = p.probs, q.probs
    mask = pv > 0.0
    if np.any(qv[mask] == 0.0):
        raise DomainError("KL undefined: Q vanishes where P does not")
    return float(np.sum(pv[mask] * (np.log(pv[mask]) - np.log(qv[mask]))))


def _require_positivity(p: Distribution, q: Distribution, alpha: float) -> None:
    # zeros are tolerable only in the alpha < 1 regime of the log formulas
    if alpha > 1.0 and not (p.is_strictly_positive() and q.is_strictly_positive()):
        raise DomainError("zero entries require alpha in (0, 1) for this divergence")


def _log_power_sum(pv: np.ndarray, a: float, qv: np.ndarray, b: float) -> float:
    """log sum_x p(x)^a q(x)^b, max-shifted, with 0^positive = 0 terms dropped."""
    with np.errstate(divide="ignore"):
        terms = a * np.log(pv)
        if b != 0.0:
            terms = terms + b * np.log(qv)
    finite = terms > -np.inf
    if not np.any(finite):
        return -np.inf
    if np.any(terms == np.inf):
        return np.inf
    return float(logsumexp(terms[finite]))


def renyi_d(p: Distribution, q: Distribution, alpha: float) -> float:
    """Renyi (power) divergence of order alpha."""
    alpha = check_alpha(alpha, allow_one=True)
    if alpha == 1.0:
        return kl(p, q)
    same_alphabet(p, q)
    _require_positivity(p, q, alpha)
    log_s = _log_power_sum(p.probs, alpha, q.probs, 1.0 - alpha)
    return float(log_s / (alpha - 1.0))


def density_power(p: Distribution, q: Distribution, alpha: float) -> float:
    """Density power divergence of order alpha.

    Accepts boundary distributions; returns ``inf`` when alpha < 1 and P
    puts mass where Q does not (the usual convention).
    """
    alpha = check_alpha(alpha, allow_one=True)
    if alpha == 1.0:
        return kl(p, q)
    same_alphabet(p, q)
    pv, qv = p.probs, q.probs
    if alpha < 1.0 and np.any(pv[qv == 0.0] > 0.0):
        return np.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = np.where(pv > 0.0, pv * qv ** (alpha - 1.0), 0.0)
    s_cross = float(np.sum(cross))
    s_p = float(np.sum(pv**alpha))
    s_q = float(np.sum(qv**alpha))
    return alpha / (1.0 - alpha) * s_cross - s_p / (1.0 - alpha) + s_q


def rel_alpha_entropy(p: Distribution, q: Distribution, alpha: float) -> float:
    """Relative alpha-entropy (logarithmic density power divergence)."""
    alpha = check_alpha(alpha, allow_one=True)
    if alpha == 1.0:
        return kl(p, q)
    same_alphabet(p, q)
    _require_positivity(p, q, alpha)
    log_cross = _log_power_sum(p.probs, 1.0, q.probs, alpha - 1.0)
    log_p = _log_power_sum(p.probs, alpha, q.probs, 0.0)
    log_q = _log_power_sum(q.probs, alpha, p.probs, 0.0)
    return float(
        alpha / (1.0 - alpha) * log_cross - log_p / (1.0 - alpha) + log_q
    )


_DISPATCH = {
    DivergenceKind.KL: lambda p, q, a: kl(p, q),
    DivergenceKind.RENYI: renyi_d,
    DivergenceKind.DENSITY_POWER: density_power,
    DivergenceKind.REL_ALPHA_ENTROPY: rel_alpha_entropy,
}


def divergence(kind: DivergenceKind, p: Distribution, q: Distribution, alpha: float = 1.0) -> float:
    """Unified dispatch; alpha = 1 routes every kind to KL."""
    kind = DivergenceKind(kind)
    alpha = check_alpha(alpha, allow_one=True)
    if alpha == 1.0:
        return kl(p, q)
    return _DISPATCH[kind](p, q, alpha)


# --- vectorized forms used by the grid oracle -------------------------------
#
# First argument fixed or varying over the rows of a (n, m) matrix; these
# accept boundary rows (the simplex grid contains them) against a strictly
# positive fixed argument.


def kl_rows(p_rows: np.ndarray, q: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(p_rows > 0.0, p_rows * (np.log(p_rows) - np.log(q)), 0.0)
    return t.sum(axis=1)


def kl_fixed_p(p: np.ndarray, q_rows: np.ndarray) -> np.ndarray:
    mask = p > 0.0
    with np.errstate(divide="ignore"):
        out = np.sum(p[mask] * (np.log(p[mask]) - np.log(q_rows[:, mask])), axis=1)
    return out


def divergence_rows(kind: DivergenceKind, p_rows: np.ndarray, q: np.ndarray, alpha: float) -> np.ndarray:
    """divergence(kind, P_i, q, alpha) for every row P_i; q strictly positive."""
    kind = DivergenceKind(kind)
    if alpha == 1.0 or kind is DivergenceKind.KL:
        return kl_rows(p_rows, q)
    if kind is DivergenceKind.RENYI:
        s = np.sum(p_rows**alpha * q ** (1.0 - alpha), axis=1)
        return np.log(s) / (alpha - 1.0)
    if kind is DivergenceKind.DENSITY_POWER:
        s_cross = np.sum(p_rows * q ** (alpha - 1.0), axis=1)
        s_p = np.sum(p_rows**alpha, axis=1)
        s_q = float(np.sum(q**alpha))
        return alpha / (1.0 - alpha) * s_cross - s_p / (1.0 - alpha) + s_q
    s_cross = np.sum(p_rows * q ** (alpha - 1.0), axis=1)
    s_p = np.sum(p_rows**alpha, axis=1)
    s_q = float(np.sum(q**alpha))
    with np.errstate(divide="ignore"):
        return (
            alpha / (1.0 - alpha) * np.log(s_cross)
            - np.log(s_p) / (1.0 - alpha)
            + np.log(s_q)
        )


def divergence_fixed_p(kind: DivergenceKind, p: np.ndarray, q_rows: np.ndarray, alpha: float) -> np.ndarray:
    """divergence(kind, p, Q_i, alpha) over rows Q_i; rows strictly positive."""
    kind = DivergenceKind(kind)
    if alpha == 1.0 or kind is DivergenceKind.KL:
        return kl_fixed_p(p, q_rows)
    if kind is DivergenceKind.RENYI:
        s = np.sum(p**alpha * q_rows ** (1.0 - alpha), axis=1)
        return np.log(s) / (alpha - 1.0)
    if kind is DivergenceKind.DENSITY_POWER:
        s_cross = np.sum(p * q_rows ** (alpha - 1.0), axis=1)
        s_p = float(np.sum(p**alpha))
        s_q = np.sum(q_rows**alpha, axis=1)
        return alpha / (1.0 - alpha) * s_cross - s_p / (1.0 - alpha) + s_q
    s_cross = np.sum(p * q_rows ** (alpha - 1.0), axis=1)
    s_p = float(np.sum(p**alpha))
    s_q = np.sum(q_rows**alpha, axis=1)
    return (
        alpha / (1.0 - alpha) * np.log(s_cross)
        - np.log(s_p) / (1.0 - alpha)
        + np.log(s_q)
    )
