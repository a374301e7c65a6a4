import cmath
import math

import numpy as np
import pytest

from boxsums.characters import MultChar
from boxsums.errors import (
    DimensionTooSmallError,
    LambdaDivisibleError,
    PrincipalCharacterError,
)
from boxsums.modular import ExponentVector, build_context, monomial_eval
from boxsums.sampling import draw_spec, substream
from boxsums.sums import (
    Box,
    PhaseWeights,
    SumSpec,
    TableWeights,
    UnitWeights,
    agreement_tolerance,
    cauchy_majorant,
    character_sum_naive,
    character_sum_split,
    holder_majorant,
    kloosterman_sum,
    monomial_sum_bilinear,
    monomial_sum_naive,
    monomial_value_distribution,
)


@pytest.fixture(scope="module")
def ctx5():
    return build_context(5)


@pytest.fixture(scope="module")
def ctx7():
    return build_context(7)


def _spec(ctx, k, h, e, weights=None, lam=1):
    return SumSpec(
        ctx=ctx,
        box=Box(tuple(k), h),
        e=ExponentVector(tuple(e)),
        weights=weights or UnitWeights(),
        lam=lam,
    )


class TestSpecValidation:
    def test_dimension_mismatch(self, ctx5):
        with pytest.raises(ValueError):
            _spec(ctx5, (0, 0), 2, (1,))

    def test_h_not_below_p(self, ctx5):
        with pytest.raises(ValueError):
            _spec(ctx5, (0,), 5, (1,))

    def test_weight_dimension_mismatch(self, ctx5):
        with pytest.raises(ValueError):
            _spec(ctx5, (0, 0), 2, (1, 1), weights=PhaseWeights((1,)))

    def test_table_weight_modulus_cap(self):
        with pytest.raises(ValueError):
            TableWeights([[1.5, 0.0]])


class TestValueDistribution:
    def test_identity_monomial(self, ctx7):
        spec = _spec(ctx7, (0,), 3, (1,))
        d = monomial_value_distribution(spec).values
        assert np.allclose(d, [0, 1, 1, 1, 0, 0, 0])

    def test_inverse_monomial(self, ctx5):
        spec = _spec(ctx5, (0,), 2, (-1,))
        d = monomial_value_distribution(spec).values
        # inv(1)=1, inv(2)=3
        assert np.allclose(d, [0, 1, 0, 1, 0])

    def test_two_coordinate_products(self, ctx5):
        spec = _spec(ctx5, (0, 0), 2, (1, 1))
        d = monomial_value_distribution(spec).values
        # products over {1,2}^2: 1 once, 2 twice, 4 once
        assert np.allclose(d, [0, 1, 2, 0, 1])

    def test_zero_mass_at_zero(self, ctx7):
        spec = _spec(ctx7, (5, 5), 3, (1, 1))  # intervals contain 7 = 0 mod 7
        d = monomial_value_distribution(spec).values
        assert d[0] == 0


class TestMonomialSumNaive:
    def test_lambda_zero_counts_terms(self, ctx7):
        spec = _spec(ctx7, (0, 0), 3, (1, 1), lam=0)
        res = monomial_sum_naive(spec)
        assert res.terms == 9
        assert cmath.isclose(res.value, 9, abs_tol=1e-12)

    def test_pinned_two_dim_value(self, ctx5):
        # e_5(1) + 2*e_5(2) + e_5(4) over the {1,2}^2 box.
        spec = _spec(ctx5, (0, 0), 2, (1, 1), lam=1)
        res = monomial_sum_naive(spec)
        assert cmath.isclose(res.value, -1.0 + 1.1755705045849463j, abs_tol=1e-9)
        assert res.terms == 4

    def test_empty_box(self, ctx5):
        spec = _spec(ctx5, (4,), 1, (1,))  # single point 5 = 0 mod 5
        res = monomial_sum_naive(spec)
        assert res.value == 0
        assert res.terms == 0

    def test_matches_scalar_enumeration(self, ctx7):
        import itertools

        spec = _spec(ctx7, (1, 3), 3, (2, -1), weights=PhaseWeights((1, 2)), lam=3)
        want = 0j
        for x1, x2 in itertools.product(range(2, 5), range(4, 7)):
            if x1 % 7 == 0 or x2 % 7 == 0:
                continue
            m = monomial_eval(ctx7, (x1, x2), spec.e)
            w = cmath.exp(2j * cmath.pi * (x1 + 2 * x2) / 7)
            want += w * cmath.exp(2j * cmath.pi * (3 * m % 7) / 7)
        got = monomial_sum_naive(spec).value
        assert abs(got - want) < 1e-12


class TestMonomialSumBilinear:
    def test_needs_two_dims(self, ctx5):
        with pytest.raises(DimensionTooSmallError):
            monomial_sum_bilinear(_spec(ctx5, (0,), 2, (1,)))

    def test_agrees_with_naive_pinned(self, ctx5):
        spec = _spec(ctx5, (0, 0), 2, (1, 1), lam=1)
        naive = monomial_sum_naive(spec)
        fast = monomial_sum_bilinear(spec)
        assert abs(naive.value - fast.value) < agreement_tolerance(naive.terms)
        assert naive.terms == fast.terms

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_agrees_with_naive_random(self, p, n):
        ctx = build_context(p)
        for trial in range(10):
            rng = substream(123, p, n, trial)
            kind = ("unit", "phase", "table")[trial % 3]
            spec = draw_spec(rng, ctx, n, 3, [-2, -1, 1, 2], kind)
            naive = monomial_sum_naive(spec)
            fast = monomial_sum_bilinear(spec)
            assert abs(naive.value - fast.value) < agreement_tolerance(naive.terms)
            assert naive.terms == fast.terms

    def test_lambda_zero_factorizes(self, ctx7):
        spec = _spec(ctx7, (0, 1), 3, (1, -1), lam=0)
        d1 = monomial_value_distribution(spec, 0, 1).values.sum()
        d2 = monomial_value_distribution(spec, 1, 2).values.sum()
        got = monomial_sum_bilinear(spec).value
        assert abs(got - d1 * d2) < 1e-9


class TestKloosterman:
    def test_complete_one_dim(self, ctx5):
        # Over all nonzero x, sum of e_5(inv(x)) = sum over nonzero y = -1.
        res = kloosterman_sum(ctx5, Box((0,), 4), lam=1, lam_vec=(0,))
        assert cmath.isclose(res.value, -1.0, abs_tol=1e-10)

    def test_equals_monomial_specialization(self, ctx7):
        box = Box((0, 0), 3)
        viaK = kloosterman_sum(ctx7, box, 1, (1, 2))
        spec = SumSpec(ctx7, box, ExponentVector((-1, -1)), PhaseWeights((1, 2)), 1)
        viaS = monomial_sum_naive(spec)
        assert viaK.value == viaS.value
        assert viaK.terms == viaS.terms

    def test_phase_vector_dimension_checked(self, ctx7):
        with pytest.raises(ValueError):
            kloosterman_sum(ctx7, Box((0, 0), 2), 1, (1,))


class TestCharacterSums:
    def test_principal_counts_admissible_tuples(self, ctx7):
        spec = _spec(ctx7, (0, 0), 3, (1, 1), lam=1)
        chi = MultChar(ctx7, 0)
        res = character_sum_naive(spec, chi)
        import itertools

        want = sum(
            1
            for x in itertools.product(range(1, 4), repeat=2)
            if (x[0] * x[1] + 1) % 7 != 0
        )
        assert cmath.isclose(res.value, want, abs_tol=1e-12)

    def test_complete_nonprincipal_vanishes(self, ctx7):
        spec = _spec(ctx7, (0,), 6, (1,), lam=0)
        chi = MultChar(ctx7, 3)
        assert abs(character_sum_naive(spec, chi).value) < 1e-10

    def test_frozen_two_dim_value(self, ctx7):
        # Frozen oracle: direct enumeration over the 4 tuples gives 0.
        spec = _spec(ctx7, (0, 0), 2, (1, -1), lam=1)
        chi = MultChar(ctx7, 3)
        assert abs(character_sum_naive(spec, chi).value) < 1e-12

    def test_split_needs_two_dims(self, ctx7):
        with pytest.raises(DimensionTooSmallError):
            character_sum_split(_spec(ctx7, (0,), 2, (1,)), MultChar(ctx7, 1))

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_split_agrees_with_naive(self, p, n):
        ctx = build_context(p)
        for trial in range(10):
            rng = substream(321, p, n, trial)
            kind = ("unit", "phase", "table")[trial % 3]
            spec = draw_spec(rng, ctx, n, 3, [-2, -1, 1, 2], kind)
            chi = MultChar(ctx, int(rng.integers(0, p - 1)))
            naive = character_sum_naive(spec, chi)
            fast = character_sum_split(spec, chi)
            assert abs(naive.value - fast.value) < agreement_tolerance(naive.terms)


class TestCauchyMajorant:
    def test_single_tuple(self, ctx5):
        spec = _spec(ctx5, (0, 0), 1, (1, 1))
        assert abs(cauchy_majorant(spec) - math.sqrt(5)) < 1e-12

    def test_pinned_value(self, ctx5):
        spec = _spec(ctx5, (0, 0), 2, (1, 1), lam=1)
        assert abs(cauchy_majorant(spec) - math.sqrt(5 * 2 * 2)) < 1e-12
        assert cauchy_majorant(spec) >= abs(monomial_sum_naive(spec).value)

    def test_lambda_divisible_rejected(self, ctx5):
        with pytest.raises(LambdaDivisibleError):
            cauchy_majorant(_spec(ctx5, (0, 0), 2, (1, 1), lam=5))

    def test_dominates_randomly(self):
        for p in (7, 11, 13):
            ctx = build_context(p)
            for trial in range(40):
                rng = substream(99, p, trial)
                n = int(rng.integers(2, 5))
                spec = draw_spec(rng, ctx, n, 3, [-2, -1, 1, 2], "table")
                naive = monomial_sum_naive(spec)
                assert abs(naive.value) <= cauchy_majorant(spec) + agreement_tolerance(
                    naive.terms
                )


class TestHolderMajorant:
    def test_principal_rejected(self, ctx7):
        with pytest.raises(PrincipalCharacterError):
            holder_majorant(_spec(ctx7, (0, 0), 2, (1, 1)), MultChar(ctx7, 0), 1)

    def test_lambda_divisible_rejected(self, ctx7):
        with pytest.raises(LambdaDivisibleError):
            holder_majorant(_spec(ctx7, (0, 0), 2, (1, 1), lam=0), MultChar(ctx7, 1), 1)

    def test_bad_r(self, ctx7):
        with pytest.raises(ValueError):
            holder_majorant(_spec(ctx7, (0, 0), 2, (1, 1)), MultChar(ctx7, 1), 0)

    def test_dominates_randomly(self):
        for p in (7, 11, 13):
            ctx = build_context(p)
            for trial in range(25):
                rng = substream(77, p, trial)
                n = int(rng.integers(2, 5))
                spec = draw_spec(rng, ctx, n, 3, [-2, -1, 1, 2], "table")
                chi = MultChar(ctx, int(rng.integers(1, p - 1)))
                naive = character_sum_naive(spec, chi)
                tol = agreement_tolerance(naive.terms)
                for r in (1, 2, 3):
                    assert abs(naive.value) <= holder_majorant(spec, chi, r) + tol


class TestConjugation:
    @pytest.mark.parametrize("p", [5, 7, 11])
    def test_negating_lambda_conjugates(self, p):
        ctx = build_context(p)
        for trial in range(10):
            rng = substream(55, p, trial)
            spec = draw_spec(rng, ctx, 2, 3, [-2, -1, 1, 2], "unit")
            mirrored = SumSpec(ctx, spec.box, spec.e, UnitWeights(), p - spec.lam)
            a = monomial_sum_naive(spec)
            b = monomial_sum_naive(mirrored)
            assert abs(b.value - a.value.conjugate()) < agreement_tolerance(a.terms)
