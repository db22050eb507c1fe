"""The four parametric families and the linear family.

Family shapes (reference measure Q with full support, statistics f_1..f_k,
parameter theta in an open subset of R^k):

* exponential:            P(x) = Z^-1 exp[log Q(x) + theta.f(x)]
* alpha power-law:        P(x) = Z^-1 [Q(x)^(a-1) + (1-a) theta.f(x)]^(1/(a-1))
* non-normalized variant: P(x) = [Q(x)^(a-1) + (1-a){Z(theta) + theta.f(x)}]^(1/(a-1))
* alpha exponential:      P(x) = Z^-1 [Q(x)^(1-a) + (1-a) theta.f(x)]^(1/(1-a))

For the power-law kinds the parameter domain is implicit: theta is admissible
iff its defining bracket stays positive on the whole alphabet.  The
non-normalized kind carries its normalizer *inside* the bracket, so Z(theta)
is the root of a one-dimensional monotone mass equation rather than an
explicit sum.  Evaluation works in the bracket domain and raises the final
power once, which keeps domain checks exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import (
    DomainError,
    DomainViolation,
    InfeasibleError,
    InvalidDistribution,
    NormalizerNotFound,
)
from .measures import Alphabet, Distribution, alpha_norm, check_alpha, escort

RANK_RTOL = 1e-10  # linear-independence tolerance, relative to sigma_max


class FamilyKind(enum.Enum):
    EXPONENTIAL = "exponential"
    ALPHA_POWER_LAW = "alpha_power_law"
    NON_NORMALIZED_ALPHA_POWER_LAW = "non_normalized_alpha_power_law"
    ALPHA_EXPONENTIAL = "alpha_exponential"


_POWER_KINDS = (
    FamilyKind.ALPHA_POWER_LAW,
    FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW,
    FamilyKind.ALPHA_EXPONENTIAL,
)


def _rank(matrix: np.ndarray) -> int:
    s = np.linalg.svd(matrix, compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.sum(s > RANK_RTOL * s[0]))


@dataclass(frozen=True)
class FamilySpec:
    """Immutable description of one parametric family."""

    kind: FamilyKind
    q: Distribution
    f: np.ndarray  # (k, m): row i is the statistic f_i over the alphabet
    alpha: float = 1.0

    def __post_init__(self):
        kind = FamilyKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not self.q.is_strictly_positive():
            raise InvalidDistribution("reference measure must have full support")
        f = np.asarray(self.f, dtype=float)
        if f.ndim == 1:
            f = f[None, :]
        if f.shape[1] != self.q.m or f.shape[0] < 1:
            raise InvalidDistribution("statistic matrix must be (k, m) with k >= 1")
        if not np.all(np.isfinite(f)):
            raise InvalidDistribution("statistic matrix has non-finite entries")
        if _rank(f) < f.shape[0]:
            raise InvalidDistribution("statistic rows must be linearly independent")
        alpha = float(self.alpha)
        if kind is FamilyKind.EXPONENTIAL:
            alpha = 1.0
        else:
            alpha = check_alpha(alpha)
        if kind is FamilyKind.ALPHA_POWER_LAW:
            # needed for the moment map to be one-one
            qa = self.q.probs ** (alpha - 1.0)
            if _rank(np.vstack([f, qa])) < f.shape[0] + 1:
                raise InvalidDistribution(
                    "Q^(alpha-1) must be linearly independent of the statistic rows"
                )
        f = f.copy()
        f.setflags(write=False)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "alpha", alpha)

    @property
    def theta_dim(self) -> int:
        return int(self.f.shape[0])

    @property
    def alphabet(self) -> Alphabet:
        return self.q.alphabet


def _check_theta(spec: FamilySpec, theta) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (spec.theta_dim,):
        raise DomainError(
            f"theta has shape {theta.shape}, expected ({spec.theta_dim},)"
        )
    return theta


def bracket_values(spec: FamilySpec, theta, z: float = 0.0) -> np.ndarray:
    """The defining bracket u(x) of a power-law kind, per symbol."""
    theta = _check_theta(spec, theta)
    a = spec.alpha
    tilt = theta @ spec.f
    if spec.kind is FamilyKind.ALPHA_POWER_LAW:
        return spec.q.probs ** (a - 1.0) + (1.0 - a) * tilt
    if spec.kind is FamilyKind.ALPHA_EXPONENTIAL:
        return spec.q.probs ** (1.0 - a) + (1.0 - a) * tilt
    if spec.kind is FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW:
        return spec.q.probs ** (a - 1.0) + (1.0 - a) * (z + tilt)
    raise DomainError("exponential family has no bracket")


def is_admissible(spec: FamilySpec, theta) -> bool:
    """True iff eval_member(spec, theta) is defined."""
    try:
        eval_member(spec, theta)
        return True
    except (DomainViolation, NormalizerNotFound):
        return False


def _violating_symbols(spec: FamilySpec, bracket: np.ndarray) -> tuple[str, ...]:
    return tuple(
        s for s, b in zip(spec.alphabet.symbols, bracket) if b <= 0.0
    )


def member_with_normalizer(spec: FamilySpec, theta) -> tuple[Distribution, float]:
    """Evaluate P_theta together with its normalizing constant Z(theta)."""
    theta = _check_theta(spec, theta)
    a = spec.alpha
    if spec.kind is FamilyKind.EXPONENTIAL:
        logits = np.log(spec.q.probs) + theta @ spec.f
        shift = logits.max()
        w = np.exp(logits - shift)
        z = float(w.sum() * np.exp(shift))
        return Distribution(spec.alphabet, w / w.sum(), strict=True), z
    if spec.kind is FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW:
        z = normalizer_root(spec, theta)
        bracket = bracket_values(spec, theta, z)
        probs = bracket ** (1.0 / (a - 1.0))
        return Distribution(spec.alphabet, probs, strict=True), z
    bracket = bracket_values(spec, theta)
    if np.any(bracket <= 0.0):
        raise DomainViolation(
            "bracket non-positive on some symbols",
            symbols=_violating_symbols(spec, bracket),
        )
    expo = 1.0 / (a - 1.0) if spec.kind is FamilyKind.ALPHA_POWER_LAW else 1.0 / (1.0 - a)
    w = bracket**expo
    z = float(w.sum())
    return Distribution(spec.alphabet, w / z, strict=True), z


def eval_member(spec: FamilySpec, theta) -> Distribution:
    """Evaluate the family member P_theta."""
    return member_with_normalizer(spec, theta)[0]


# --- implicit normalizer of the non-normalized kind -------------------------


def _mass_and_slope(spec: FamilySpec, theta: np.ndarray, z: float):
    a = spec.alpha
    bracket = bracket_values(spec, theta, z)
    if np.any(bracket <= 0.0):
        return None, None
    mass = float(np.sum(bracket ** (1.0 / (a - 1.0))))
    slope = float(-np.sum(bracket ** ((2.0 - a) / (a - 1.0))))
    return mass, slope


def normalizer_root(spec: FamilySpec, theta, tol: float = 1e-12) -> float:
    """Z(theta) with sum_x [Q^(a-1) + (1-a)(Z + theta.f)]^(1/(a-1)) = 1.

    The total mass is strictly decreasing in Z on the admissible interval,
    so the root is unique when it exists.  The bracket is grown
    geometrically from Z = 0 (clamped into the admissible interval), then
    refined by bisection and polished by Newton.
    """
    if spec.kind is not FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW:
        raise DomainError("normalizer_root applies to the non-normalized kind only")
    theta = _check_theta(spec, theta)
    a = spec.alpha
    tilt = theta @ spec.f
    qa = spec.q.probs ** (a - 1.0)
    # bracket(x) > 0  <=>  (a-1)(Z + tilt(x)) < qa(x)
    if a > 1.0:
        z_edge = float(np.min(qa / (a - 1.0) - tilt))  # admissible: Z < z_edge
        direction = -1.0
    else:
        z_edge = float(np.max(-qa / (1.0 - a) - tilt))  # admissible: Z > z_edge
        direction = +1.0
    span = max(1.0, abs(z_edge))
    z0 = 0.0
    if direction < 0 and z0 >= z_edge:
        z0 = z_edge - span
    if direction > 0 and z0 <= z_edge:
        z0 = z_edge + span

    def mass(z):
        m, _ = _mass_and_slope(spec, theta, z)
        return m

    m0 = mass(z0)
    if m0 is None:
        raise NormalizerNotFound("no admissible starting normalizer", interval=(z0, z0))
    if abs(m0 - 1.0) <= tol:
        return float(z0)
    # walk toward the edge until the edge-side endpoint has mass on the
    # correct side of 1 (mass decreases in Z); away from the edge mass always
    # crosses 1 eventually, toward the edge it may not.
    lo = hi = z0
    m_lo = m_hi = m0
    step = span
    if m0 > 1.0:
        # need larger Z; for a > 1 that runs toward the edge
        for _ in range(200):
            hi_try = hi + step if a < 1.0 else z_edge - (z_edge - hi) / 4.0
            m_try = mass(hi_try)
            if m_try is None:
                break
            hi, m_hi = hi_try, m_try
            if m_hi <= 1.0:
                break
            step *= 2.0
        if m_hi > 1.0:
            raise NormalizerNotFound(
                "total mass stays above 1 on the admissible interval",
                interval=(lo, hi),
            )
    else:
        # need smaller Z; for a < 1 that runs toward the edge
        for _ in range(200):
            lo_try = lo - step if a > 1.0 else z_edge + (lo - z_edge) / 4.0
            m_try = mass(lo_try)
            if m_try is None:
                break
            lo, m_lo = lo_try, m_try
            if m_lo >= 1.0:
                break
            step *= 2.0
        if m_lo < 1.0:
            raise NormalizerNotFound(
                "total mass stays below 1 on the admissible interval",
                interval=(lo, hi),
            )
    if lo > hi:
        lo, hi = hi, lo
    m_lo, m_hi = mass(lo), mass(hi)
    if m_lo is None or m_hi is None or m_lo < 1.0 or m_hi > 1.0:
        raise NormalizerNotFound("failed to bracket the normalizer", interval=(lo, hi))
    # monotonicity sanity on the final bracket
    if m_lo < m_hi:
        raise NormalizerNotFound("mass is not decreasing on the bracket", interval=(lo, hi))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        m_mid = mass(mid)
        if m_mid is None or m_mid >= 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13 * max(1.0, abs(lo)):
            break
    z = 0.5 * (lo + hi)
    for _ in range(40):
        m, slope = _mass_and_slope(spec, theta, z)
        if m is None:
            z = 0.5 * (lo + hi)
            break
        if abs(m - 1.0) <= tol:
            break
        z_new = z - (m - 1.0) / slope
        if not (lo - 1e-9 <= z_new <= hi + 1e-9):
            z_new = 0.5 * (lo + hi)
        z = z_new
    m_final, _ = _mass_and_slope(spec, theta, z)
    if m_final is None or abs(m_final - 1.0) > 1e-10:
        raise NormalizerNotFound("normalizer refinement failed", interval=(lo, hi))
    return float(z)


# --- batch evaluation (used by the grid oracle) ------------------------------


def eval_members_batch(spec: FamilySpec, thetas: np.ndarray):
    """Evaluate many parameters at once.

    Returns ``(probs, admissible)`` where ``probs`` is (n, m) with NaN rows
    for inadmissible parameters and ``admissible`` is the boolean mask.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim == 1:
        thetas = thetas[:, None]
    n = thetas.shape[0]
    a = spec.alpha
    if spec.kind is FamilyKind.EXPONENTIAL:
        logits = np.log(spec.q.probs)[None, :] + thetas @ spec.f
        logits -= logits.max(axis=1, keepdims=True)
        w = np.exp(logits)
        return w / w.sum(axis=1, keepdims=True), np.ones(n, dtype=bool)
    if spec.kind in (FamilyKind.ALPHA_POWER_LAW, FamilyKind.ALPHA_EXPONENTIAL):
        if spec.kind is FamilyKind.ALPHA_POWER_LAW:
            base = spec.q.probs ** (a - 1.0)
            expo = 1.0 / (a - 1.0)
        else:
            base = spec.q.probs ** (1.0 - a)
            expo = 1.0 / (1.0 - a)
        bracket = base[None, :] + (1.0 - a) * (thetas @ spec.f)
        ok = np.all(bracket > 0.0, axis=1)
        probs = np.full(bracket.shape, np.nan)
        if np.any(ok):
            w = bracket[ok] ** expo
            probs[ok] = w / w.sum(axis=1, keepdims=True)
        return probs, ok
    return _eval_nn_batch(spec, thetas)


def _eval_nn_batch(spec: FamilySpec, thetas: np.ndarray):
    """Vectorized Newton on Z across many thetas for the non-normalized kind."""
    a = spec.alpha
    qa = spec.q.probs ** (a - 1.0)
    tilt = thetas @ spec.f  # (n, m)
    n = tilt.shape[0]
    if a > 1.0:
        z_edge = np.min(qa[None, :] / (a - 1.0) - tilt, axis=1)
        z = z_edge - np.maximum(1.0, np.abs(z_edge))
    else:
        z_edge = np.max(-qa[None, :] / (1.0 - a) - tilt, axis=1)
        z = z_edge + np.maximum(1.0, np.abs(z_edge))
    ok = np.ones(n, dtype=bool)

    def mass_of(zv):
        bracket = qa[None, :] + (1.0 - a) * (zv[:, None] + tilt)
        bad = np.any(bracket <= 0.0, axis=1)
        bracket = np.where(bracket > 0.0, bracket, 1.0)
        m = np.sum(bracket ** (1.0 / (a - 1.0)), axis=1)
        slope = -np.sum(bracket ** ((2.0 - a) / (a - 1.0)), axis=1)
        return np.where(bad, np.nan, m), slope

    # march the away-from-edge side until every point brackets mass = 1,
    # or mark it inadmissible (a > 1 only)
    m, _ = mass_of(z)
    if a > 1.0:
        # mass(z) is large near -inf; make sure we start above 1
        for _ in range(60):
            need = ok & (m < 1.0)
            if not np.any(need):
                break
            z[need] -= np.maximum(1.0, np.abs(z[need]))
            m, _ = mass_of(z)
        lo = z
        hi = z_edge - 1e-13 * np.maximum(1.0, np.abs(z_edge))
        m_hi, _ = mass_of(hi)
        ok &= m_hi <= 1.0  # no root if even the edge mass exceeds 1
    else:
        for _ in range(60):
            need = ok & (m > 1.0)
            if not np.any(need):
                break
            z[need] += np.maximum(1.0, np.abs(z[need]))
            m, _ = mass_of(z)
        hi = z
        lo = z_edge + 1e-13 * np.maximum(1.0, np.abs(z_edge))
        # mass blows up at the lower edge for a < 1, so a root always exists
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        m_mid, _ = mass_of(mid)
        go_lo = np.isnan(m_mid) | (m_mid >= 1.0)
        lo = np.where(go_lo, mid, lo)
        hi = np.where(go_lo, hi, mid)
        if np.all((hi - lo) < 1e-12 * np.maximum(1.0, np.abs(lo))):
            break
    z = 0.5 * (lo + hi)
    bracket = qa[None, :] + (1.0 - a) * (z[:, None] + tilt)
    ok &= np.all(bracket > 0.0, axis=1)
    probs = np.full(bracket.shape, np.nan)
    if np.any(ok):
        w = bracket[ok] ** (1.0 / (a - 1.0))
        total = w.sum(axis=1, keepdims=True)
        ok_idx = np.where(ok)[0]
        good = np.abs(total[:, 0] - 1.0) <= 1e-8
        probs[ok_idx[good]] = (w / total)[good]
        ok[ok_idx[~good]] = False
    return probs, ok


# --- escort correspondence ----------------------------------------------------


def escort_parameter_map(theta, q: Distribution, alpha: float) -> np.ndarray:
    """theta' = -alpha * theta / ||Q||^(1-alpha) with ||Q|| the alpha-norm."""
    alpha = check_alpha(alpha)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    norm = alpha_norm(q, alpha)
    return (-alpha) * theta / norm ** (1.0 - alpha)


def escort_family_spec(spec: FamilySpec) -> FamilySpec:
    """The power-law family the escort map carries an alpha-exponential one onto."""
    if spec.kind is not FamilyKind.ALPHA_EXPONENTIAL:
        raise DomainError("escort correspondence starts from the alpha-exponential kind")
    return FamilySpec(
        FamilyKind.ALPHA_POWER_LAW,
        escort(spec.q, spec.alpha),
        spec.f,
        alpha=1.0 / spec.alpha,
    )


def escort_family_map(spec: FamilySpec, theta) -> tuple[Distribution, np.ndarray]:
    """Map a member of an alpha-exponential family to its escort image.

    Returns ``(escort(P_theta, alpha), theta')``; the escort image is the
    mapped power-law family's member at ``theta'``.
    """
    p = eval_member(spec, theta)
    theta_prime = escort_parameter_map(theta, spec.q, spec.alpha)
    return escort(p, spec.alpha), theta_prime


# --- family membership -------------------------------------------------------


def membership_residual(spec: FamilySpec, p: Distribution) -> float:
    """Relative residual of the best linear fit of P to the family's form.

    Zero (to numerical rank) iff P is a member.  Returns ``inf`` when P has
    zero entries, since every member is strictly positive.
    """
    if not p.is_strictly_positive():
        return np.inf
    fit = fit_family_form(spec, p.probs)
    return fit[-1]


def fit_family_form(spec: FamilySpec, probs: np.ndarray, support=None):
    """Least-squares fit of (theta, Z-like constant) to the defining form.

    Returns ``(theta, const, residual)`` where ``residual`` is the RMS
    misfit of the linear relation divided by the RMS of its target.  The
    optional boolean ``support`` restricts the fit to a sub-alphabet (used
    by clamped forward projections).
    """
    a = spec.alpha
    q = spec.q.probs
    f = spec.f
    if support is not None:
        probs = probs[support]
        q = q[support]
        f = f[:, support]
    m = len(probs)
    ones = np.ones(m)
    if spec.kind is FamilyKind.EXPONENTIAL:
        design = np.column_stack([ones, f.T])
        target = np.log(probs) - np.log(q)
    elif spec.kind is FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW:
        design = np.column_stack([ones, f.T])
        target = (probs ** (a - 1.0) - q ** (a - 1.0)) / (1.0 - a)
    elif spec.kind is FamilyKind.ALPHA_POWER_LAW:
        design = np.column_stack([probs ** (a - 1.0), -(1.0 - a) * f.T])
        target = q ** (a - 1.0)
    else:  # ALPHA_EXPONENTIAL
        design = np.column_stack([probs ** (1.0 - a), -(1.0 - a) * f.T])
        target = q ** (1.0 - a)
    coef, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    resid = design @ coef - target
    scale = float(np.sqrt(np.mean(target**2))) or 1.0
    residual = float(np.sqrt(np.mean(resid**2))) / scale
    # in every kind the fit solves const*column0 + theta-part = target, with
    # const = -log Z, Z, Z^(a-1) or Z^(1-a) and the theta coefficients equal
    # to theta itself
    const, theta = float(coef[0]), np.asarray(coef[1:], dtype=float)
    return theta, const, residual


def theta_of_member(spec: FamilySpec, p: Distribution, tol: float = 1e-8) -> np.ndarray:
    """Recover theta for a distribution known to lie on the family."""
    theta, _, residual = fit_family_form(spec, p.probs)
    if residual > tol:
        raise DomainError(f"distribution is not a family member (residual {residual:.3e})")
    return theta


# --- linear families ----------------------------------------------------------


@dataclass(frozen=True)
class LinearFamilySpec:
    """Distributions satisfying the moment constraints f P = a."""

    f: np.ndarray  # (k, m)
    a: np.ndarray  # (k,)
    alphabet: Alphabet | None = None

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.ndim == 1:
            f = f[None, :]
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        if f.shape[0] != a.shape[0]:
            raise InvalidDistribution("constraint matrix and target sizes differ")
        alphabet = self.alphabet or Alphabet.of_size(f.shape[1])
        if alphabet.size != f.shape[1]:
            raise InvalidDistribution("constraint matrix does not match alphabet")
        f = f.copy()
        f.setflags(write=False)
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "alphabet", alphabet)
        if not self._feasible():
            raise InfeasibleError("linear family is empty on the simplex")

    @property
    def k(self) -> int:
        return int(self.f.shape[0])

    @property
    def m(self) -> int:
        return int(self.f.shape[1])

    def _feasible(self) -> bool:
        res = linprog(
            c=np.zeros(self.m),
            A_eq=np.vstack([self.f, np.ones((1, self.m))]),
            b_eq=np.concatenate([self.a, [1.0]]),
            bounds=[(0.0, None)] * self.m,
            method="highs",
        )
        return bool(res.status == 0)

    def support_mask(self) -> np.ndarray:
        """Symbols that carry positive mass for at least one member."""
        mask = np.zeros(self.m, dtype=bool)
        A_eq = np.vstack([self.f, np.ones((1, self.m))])
        b_eq = np.concatenate([self.a, [1.0]])
        for i in range(self.m):
            c = np.zeros(self.m)
            c[i] = -1.0  # maximize P(x_i)
            res = linprog(c=c, A_eq=A_eq, b_eq=b_eq, bounds=[(0.0, None)] * self.m, method="highs")
            mask[i] = bool(res.status == 0 and -res.fun > 1e-12)
        return mask

    def contains(self, p: Distribution, tol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(self.f @ p.probs - self.a)) <= tol)

    def affine_project(self, vector: np.ndarray) -> np.ndarray:
        """Euclidean projection of a vector onto {f x = a, sum x = 1}."""
        B = np.vstack([self.f, np.ones((1, self.m))])
        b = np.concatenate([self.a, [1.0]])
        resid = B @ vector - b
        correction = B.T @ np.linalg.lstsq(B @ B.T, resid, rcond=None)[0]
        return vector - correction

    def interior_member(self) -> tuple[np.ndarray, float]:
        """The max-min-coordinate member and its margin (0 on boundary slices)."""
        m = self.m
        c = np.zeros(m + 1)
        c[m] = -1.0
        A_eq = np.hstack([np.vstack([self.f, np.ones((1, m))]), np.zeros((self.k + 1, 1))])
        b_eq = np.concatenate([self.a, [1.0]])
        A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
        res = linprog(
            c,
            A_eq=A_eq,
            b_eq=b_eq,
            A_ub=A_ub,
            b_ub=np.zeros(m),
            bounds=[(0.0, 1.0)] * m + [(0.0, 1.0)],
            method="highs",
        )
        if res.status != 0:
            raise InfeasibleError("linear family became infeasible")
        return res.x[:m], float(res.x[m])

    def sample_member(self, rng: np.random.Generator, max_tries: int = 50) -> Distribution:
        """A random member, strictly positive whenever the slice has one;
        random directions are blended toward the deepest interior point."""
        center, margin = self.interior_member()
        floor = min(1e-9, 0.05 * margin) if margin > 0 else 0.0
        for _ in range(max_tries):
            raw = rng.dirichlet(np.ones(self.m))
            proj = self.affine_project(raw)
            lam = 1.0
            for _ in range(40):
                point = lam * proj + (1.0 - lam) * center
                if np.all(point > floor):
                    return Distribution(self.alphabet, point, strict=bool(np.all(point > 0)))
                lam *= 0.7
        raise InfeasibleError("could not sample an interior member")
