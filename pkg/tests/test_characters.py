import cmath

import numpy as np
import pytest

from boxsums.characters import (
    MultChar,
    ResidueDistribution,
    additive_char,
    additive_spectrum,
    char_interval_sum,
    char_moment,
    char_power,
)
from boxsums.errors import LambdaDivisibleError, PrincipalCharacterError
from boxsums.modular import build_context

PRIMES = [5, 7, 11, 13, 31]


@pytest.fixture(scope="module")
def ctx7():
    return build_context(7)


@pytest.fixture(scope="module")
def ctx11():
    return build_context(11)


class TestAdditiveChar:
    def test_zero(self, ctx7):
        assert additive_char(ctx7, 0) == 1

    def test_periodicity(self, ctx7):
        for z in range(-14, 15):
            assert cmath.isclose(
                additive_char(ctx7, z), additive_char(ctx7, z + 7), abs_tol=1e-14
            )

    def test_explicit_value(self, ctx7):
        want = cmath.exp(2j * cmath.pi * 3 / 7)
        assert cmath.isclose(additive_char(ctx7, 3), want, abs_tol=1e-14)

    @pytest.mark.parametrize("p", PRIMES)
    def test_complete_sum_vanishes(self, p):
        ctx = build_context(p)
        total = sum(additive_char(ctx, z) for z in range(p))
        assert abs(total) < 1e-10

    @pytest.mark.parametrize("p", PRIMES)
    def test_homomorphism(self, p):
        ctx = build_context(p)
        for z1 in range(p):
            for z2 in range(p):
                lhs = additive_char(ctx, z1 + z2)
                rhs = additive_char(ctx, z1) * additive_char(ctx, z2)
                assert abs(lhs - rhs) < 1e-12


class TestMultChar:
    def test_principal(self, ctx7):
        chi = MultChar(ctx7, 0)
        assert chi.is_principal
        for x in range(1, 7):
            assert chi(x) == 1
        assert chi(0) == 0

    def test_index_reduced_mod_order(self, ctx7):
        assert MultChar(ctx7, 6).a == 0
        assert MultChar(ctx7, 8).a == 2

    def test_legendre_at_half_order(self, ctx7):
        # Index (p-1)/2 gives the quadratic-residue character.
        chi = MultChar(ctx7, 3)
        squares = {x * x % 7 for x in range(1, 7)}
        for x in range(1, 7):
            want = 1 if x in squares else -1
            assert abs(chi(x) - want) < 1e-12

    @pytest.mark.parametrize("p", PRIMES)
    def test_multiplicative(self, p):
        ctx = build_context(p)
        for a in (1, 2, p - 2):
            chi = MultChar(ctx, a)
            for x in range(1, p):
                for y in range(1, p):
                    assert abs(chi(x * y) - chi(x) * chi(y)) < 1e-10

    @pytest.mark.parametrize("p", PRIMES)
    def test_nonprincipal_complete_sum_vanishes(self, p):
        ctx = build_context(p)
        for a in range(1, p - 1):
            total = sum(MultChar(ctx, a)(x) for x in range(p))
            assert abs(total) < 1e-9

    def test_char_power(self, ctx11):
        chi = MultChar(ctx11, 3)
        sq = char_power(chi, 2)
        for x in range(1, 11):
            assert abs(sq(x) - chi(x) ** 2) < 1e-12
        conj = char_power(chi, -1)
        for x in range(1, 11):
            assert abs(conj(x) - chi(x).conjugate()) < 1e-12


class TestSpectrum:
    def test_point_mass_at_zero(self, ctx7):
        vals = np.zeros(7, dtype=complex)
        vals[0] = 1.0
        hat = additive_spectrum(ResidueDistribution(ctx7, vals)).values
        assert np.allclose(hat, np.ones(7))

    def test_point_mass_at_one(self, ctx7):
        vals = np.zeros(7, dtype=complex)
        vals[1] = 1.0
        hat = additive_spectrum(ResidueDistribution(ctx7, vals)).values
        want = np.exp(2j * np.pi * np.arange(7) / 7)
        assert np.allclose(hat, want)

    @pytest.mark.parametrize("p", PRIMES)
    def test_parseval(self, p):
        ctx = build_context(p)
        rng = np.random.default_rng(0)
        vals = rng.normal(size=p) + 1j * rng.normal(size=p)
        hat = additive_spectrum(ResidueDistribution(ctx, vals)).values
        lhs = (np.abs(hat) ** 2).sum()
        rhs = p * (np.abs(vals) ** 2).sum()
        assert abs(lhs - rhs) / rhs < 1e-12

    @pytest.mark.parametrize("p", PRIMES + [101])
    def test_direct_fast_agree(self, p):
        ctx = build_context(p)
        rng = np.random.default_rng(1)
        vals = rng.normal(size=p) + 1j * rng.normal(size=p)
        dist = ResidueDistribution(ctx, vals)
        direct = additive_spectrum(dist, "direct").values
        fast = additive_spectrum(dist, "fast").values
        scale = 1.0 + np.abs(direct).max()
        assert np.abs(direct - fast).max() / scale < 1e-8

    def test_wrong_length_rejected(self, ctx7):
        with pytest.raises(ValueError):
            ResidueDistribution(ctx7, np.zeros(6, dtype=complex))

    def test_unknown_method(self, ctx7):
        dist = ResidueDistribution(ctx7, np.zeros(7, dtype=complex))
        with pytest.raises(ValueError):
            additive_spectrum(dist, "bogus")


class TestCharIntervalSum:
    def test_full_interval_nonprincipal(self, ctx11):
        # Over a full period the dilated sum is a complete character sum
        # minus the chi(0) term, hence has modulus <= 1... actually 0 + the
        # missing term; check against a scalar recount instead.
        chi = MultChar(ctx11, 2)
        got = char_interval_sum(chi, k=3, h=5, u=4, lam=2)
        want = sum(chi((4 * x + 2) % 11) for x in range(4, 9))
        assert abs(got - want) < 1e-12

    def test_weights_applied(self, ctx11):
        chi = MultChar(ctx11, 2)
        rho = [0.5, 0.25j, -0.1, 0.0, 1.0]
        got = char_interval_sum(chi, k=0, h=5, u=1, lam=1, rho=rho)
        want = sum(r * chi((x + 1) % 11) for r, x in zip(rho, range(1, 6)))
        assert abs(got - want) < 1e-12

    def test_weight_modulus_cap(self, ctx11):
        chi = MultChar(ctx11, 2)
        with pytest.raises(ValueError):
            char_interval_sum(chi, 0, 2, 1, 1, rho=[2.0, 0.0])


class TestCharMoment:
    def test_frozen_value(self):
        # Frozen oracle: scalar double loop, computed once and pinned.
        ctx = build_context(11)
        chi = MultChar(ctx, 5)
        got = char_moment(chi, k=0, h=3, lam=1, r=1)
        assert abs(got - 23.0) < 1e-9

    def test_matches_scalar_recount(self):
        ctx = build_context(13)
        chi = MultChar(ctx, 4)
        for r in (1, 2):
            got = char_moment(chi, k=2, h=5, lam=3, r=r)
            want = 0.0
            for u in range(1, 13):
                inner = sum(chi((u * x + 3) % 13) for x in range(3, 8))
                want += abs(inner) ** (2 * r)
            assert abs(got - want) / (1 + want) < 1e-10

    def test_principal_rejected(self, ctx11):
        with pytest.raises(PrincipalCharacterError):
            char_moment(MultChar(ctx11, 0), 0, 3, 1)

    def test_lambda_divisible_rejected(self, ctx11):
        with pytest.raises(LambdaDivisibleError):
            char_moment(MultChar(ctx11, 2), 0, 3, 11)

    def test_bad_r_rejected(self, ctx11):
        with pytest.raises(ValueError):
            char_moment(MultChar(ctx11, 2), 0, 3, 1, r=0)
