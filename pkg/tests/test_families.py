import numpy as np
import pytest

from divproj.errors import (
    DomainViolation,
    InfeasibleError,
    InvalidDistribution,
    NormalizerNotFound,
)
from divproj.families import (
    FamilyKind,
    FamilySpec,
    LinearFamilySpec,
    escort_family_map,
    escort_family_spec,
    escort_parameter_map,
    eval_member,
    eval_members_batch,
    fit_family_form,
    is_admissible,
    member_with_normalizer,
    membership_residual,
    normalizer_root,
    theta_of_member,
)
from divproj.measures import Alphabet, Distribution, escort

from conftest import random_admissible_theta, random_distribution, random_family, rng_of

AB = Alphabet(("a", "b"))
Q_UNIFORM2 = Distribution(AB, [0.5, 0.5])
F_COUNT = np.array([[0.0, 1.0]])

ALL_KINDS = list(FamilyKind)


def spec_of(kind, alpha=2.0, m=3, seed=1, k=1, f_scale=1.0):
    return random_family(rng_of(seed), kind, m=m, k=k, alpha=alpha, f_scale=f_scale)


class TestEvalMember:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_theta_zero_returns_reference(self, kind):
        spec = spec_of(kind)
        p = eval_member(spec, np.zeros(spec.theta_dim))
        assert np.max(np.abs(p.probs - spec.q.probs)) <= 1e-14

    def test_bernoulli_logit(self):
        spec = FamilySpec(FamilyKind.EXPONENTIAL, Q_UNIFORM2, F_COUNT)
        p = eval_member(spec, [np.log(3.0)])
        assert np.allclose(p.probs, [0.25, 0.75], atol=1e-15)

    def test_power_law_alpha2_at_zero_is_reference(self):
        q = Distribution(Alphabet.of_size(3), [0.2, 0.3, 0.5])
        spec = FamilySpec(FamilyKind.ALPHA_POWER_LAW, q, np.array([[0.0, 1.0, 2.0]]), alpha=2.0)
        p, z = member_with_normalizer(spec, [0.0])
        assert np.allclose(p.probs, q.probs, atol=1e-15)
        assert z == pytest.approx(1.0, abs=1e-15)

    def test_domain_violation_names_symbols(self):
        q = Distribution(Alphabet.of_size(3), [0.2, 0.3, 0.5])
        spec = FamilySpec(FamilyKind.ALPHA_POWER_LAW, q, np.array([[0.0, 1.0, 2.0]]), alpha=2.0)
        with pytest.raises(DomainViolation) as err:
            eval_member(spec, [1.0])  # bracket at x2: 0.5 - 2 < 0
        assert "x2" in err.value.symbols

    def test_members_sum_to_one(self, rng):
        for kind in ALL_KINDS:
            for alpha in (0.5, 2.0, 3.0):
                spec = random_family(rng, kind, m=4, k=2, alpha=alpha)
                theta = random_admissible_theta(rng, spec)
                p = eval_member(spec, theta)
                assert abs(p.probs.sum() - 1.0) <= 1e-12


class TestNormalizerRoot:
    def nn_spec(self, alpha=2.0):
        return FamilySpec(
            FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW, Q_UNIFORM2, F_COUNT, alpha=alpha
        )

    def test_zero_theta_zero_normalizer(self):
        assert normalizer_root(self.nn_spec(), [0.0]) == pytest.approx(0.0, abs=1e-12)

    def test_alpha2_closed_form(self):
        # at alpha=2 the bracket is linear: P(x) = Q(x) - Z - 0.1 f(x), so
        # sum = 1 forces Z = -0.05 and P = (0.55, 0.45)
        spec = self.nn_spec()
        p, z = member_with_normalizer(spec, [0.1])
        assert z == pytest.approx(-0.05, abs=1e-12)
        assert np.allclose(p.probs, [0.55, 0.45], atol=1e-12)

    def test_no_normalizer_for_large_tilt(self):
        with pytest.raises((NormalizerNotFound, DomainViolation)):
            member_with_normalizer(self.nn_spec(), [2.0])

    @pytest.mark.parametrize("alpha", [0.5, 2.0, 3.0])
    def test_mass_is_one(self, alpha, rng):
        for _ in range(10):
            spec = random_family(rng, FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW, m=4, alpha=alpha, f_scale=0.5)
            theta = random_admissible_theta(rng, spec, scale=0.2)
            z = normalizer_root(spec, theta)
            from divproj.families import bracket_values

            mass = np.sum(bracket_values(spec, theta, z) ** (1.0 / (alpha - 1.0)))
            assert abs(mass - 1.0) <= 1e-12


class TestEscortCorrespondence:
    def test_parameter_map_zero(self):
        assert escort_parameter_map([0.0], Q_UNIFORM2, 2.0) == pytest.approx([0.0])

    def test_parameter_map_uniform(self):
        got = escort_parameter_map([1.0], Q_UNIFORM2, 2.0)
        assert got[0] == pytest.approx(-1.4142135623730951, abs=1e-14)

    def test_parameter_map_skew(self):
        q = Distribution(AB, [0.25, 0.75])
        got = escort_parameter_map([0.3], q, 2.0)
        assert got[0] == pytest.approx(-0.4743416490252569, abs=1e-14)

    def test_zero_maps_to_escort_of_reference(self):
        spec = spec_of(FamilyKind.ALPHA_EXPONENTIAL, alpha=2.0)
        image, theta_prime = escort_family_map(spec, np.zeros(spec.theta_dim))
        assert np.allclose(image.probs, escort(spec.q, 2.0).probs)
        assert np.allclose(theta_prime, 0.0)

    @pytest.mark.parametrize("alpha", [0.5, 2.0, 3.0])
    def test_bijection_on_random_instances(self, alpha, rng):
        for _ in range(17):
            spec = random_family(rng, FamilyKind.ALPHA_EXPONENTIAL, m=3, k=1, alpha=alpha)
            theta = random_admissible_theta(rng, spec, scale=0.25)
            image, theta_prime = escort_family_map(spec, theta)
            mapped = escort_family_spec(spec)
            direct = eval_member(mapped, theta_prime)
            assert np.max(np.abs(image.probs - direct.probs)) <= 1e-9
            # round trip recovers the original member
            back = escort(image, 1.0 / alpha)
            original = eval_member(spec, theta)
            assert np.max(np.abs(back.probs - original.probs)) <= 1e-10

    def test_injectivity_spot_check(self, rng):
        spec = spec_of(FamilyKind.ALPHA_EXPONENTIAL, alpha=2.0)
        img1, _ = escort_family_map(spec, [0.1])
        img2, _ = escort_family_map(spec, [0.2])
        assert np.max(np.abs(img1.probs - img2.probs)) > 1e-6


class TestMembership:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_members_fit_exactly(self, kind, rng):
        spec = random_family(rng, kind, m=4, k=2, alpha=2.0)
        theta = random_admissible_theta(rng, spec)
        p = eval_member(spec, theta)
        assert membership_residual(spec, p) <= 1e-10
        assert membership_residual(spec, spec.q) <= 1e-10

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_perturbed_member_fails(self, kind, rng):
        spec = random_family(rng, kind, m=4, k=1, alpha=2.0)
        theta = random_admissible_theta(rng, spec)
        p = eval_member(spec, theta)
        shifted = p.probs.copy()
        shifted[0] += 0.05
        shifted[-1] -= 0.05
        if np.any(shifted <= 0):
            shifted = np.abs(shifted)
            shifted /= shifted.sum()
        perturbed = Distribution(spec.alphabet, shifted / shifted.sum(), strict=True)
        assert membership_residual(spec, perturbed) > 1e-4

    def test_theta_recovery(self, rng):
        for kind in ALL_KINDS:
            spec = random_family(rng, kind, m=4, k=2, alpha=0.5)
            theta = random_admissible_theta(rng, spec, scale=0.2)
            p = eval_member(spec, theta)
            assert np.max(np.abs(theta_of_member(spec, p) - theta)) <= 1e-8


class TestRebasing:
    """Any member can act as the reference: re-basing the family at P_theta0
    reproduces the same set of distributions under an affine parameter map."""

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_rebased_family_is_same_set(self, kind, rng):
        alpha = 2.0
        spec = random_family(rng, kind, m=3, k=1, alpha=alpha, f_scale=0.5)
        theta0 = random_admissible_theta(rng, spec, scale=0.15)
        p0, z0 = member_with_normalizer(spec, theta0)
        rebased = FamilySpec(kind, p0, spec.f, alpha=spec.alpha)
        for t in np.linspace(-0.1, 0.1, 7):
            theta = theta0 + t
            if not is_admissible(spec, theta):
                continue
            if kind in (FamilyKind.EXPONENTIAL, FamilyKind.NON_NORMALIZED_ALPHA_POWER_LAW):
                eta = np.atleast_1d(t)
            elif kind is FamilyKind.ALPHA_POWER_LAW:
                eta = np.atleast_1d(t) * z0 ** (1.0 - alpha)
            else:
                eta = np.atleast_1d(t) * z0 ** (alpha - 1.0)
            if not is_admissible(rebased, eta):
                continue
            lhs = eval_member(spec, theta)
            rhs = eval_member(rebased, eta)
            assert np.max(np.abs(lhs.probs - rhs.probs)) <= 1e-9


class TestSpecValidation:
    def test_dependent_rows_rejected(self):
        q = Distribution(Alphabet.of_size(3), [0.2, 0.3, 0.5])
        f = np.array([[0.0, 1.0, 2.0], [0.0, 2.0, 4.0]])
        with pytest.raises(InvalidDistribution):
            FamilySpec(FamilyKind.EXPONENTIAL, q, f)

    def test_power_law_reference_dependence_rejected(self):
        q = Distribution(Alphabet.of_size(3), [0.2, 0.3, 0.5])
        f = q.probs[None, :].copy()  # f spans Q^(alpha-1) at alpha=2
        with pytest.raises(InvalidDistribution):
            FamilySpec(FamilyKind.ALPHA_POWER_LAW, q, f, alpha=2.0)

    def test_non_strict_reference_rejected(self):
        q = Distribution(AB, [0.0, 1.0], strict=False)
        with pytest.raises(InvalidDistribution):
            FamilySpec(FamilyKind.EXPONENTIAL, q, F_COUNT)


class TestBatchEval:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_batch_matches_scalar(self, kind, rng):
        spec = random_family(rng, kind, m=3, k=1, alpha=2.0, f_scale=0.5)
        thetas = np.linspace(-0.6, 0.6, 41)[:, None]
        probs, ok = eval_members_batch(spec, thetas)
        for i, theta in enumerate(thetas):
            if is_admissible(spec, theta):
                assert ok[i]
                expected = eval_member(spec, theta)
                assert np.max(np.abs(probs[i] - expected.probs)) <= 1e-9
            else:
                assert not ok[i]


class TestLinearFamily:
    def test_infeasible_rejected(self):
        with pytest.raises(InfeasibleError):
            LinearFamilySpec(np.array([[0.0, 1.0, 2.0]]), np.array([5.0]))

    def test_support_full_for_interior_target(self):
        lin = LinearFamilySpec(np.array([[0.0, 1.0, 2.0]]), np.array([1.2]))
        assert np.all(lin.support_mask())

    def test_support_detects_forced_zero(self):
        # P(x0) = 0 is forced by the constraint indicator(x0) . P = 0
        lin = LinearFamilySpec(np.array([[1.0, 0.0, 0.0]]), np.array([0.0]))
        assert not lin.support_mask()[0]
        assert np.all(lin.support_mask()[1:])

    def test_sample_member_lies_on_family(self, rng):
        for _ in range(10):
            p0 = random_distribution(rng, 4)
            f = rng.uniform(-1, 1, size=(2, 4))
            lin = LinearFamilySpec(f, f @ p0.probs, alphabet=p0.alphabet)
            member = lin.sample_member(rng)
            assert lin.contains(member, tol=1e-10)
