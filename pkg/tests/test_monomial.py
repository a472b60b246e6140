"""Exact monomial semigroup: scales, composition, splitting, classification."""

import math
from itertools import product

import pytest

from germkit.errors import BaseMismatchError, InfiniteOrderError, PreconditionError
from germkit.monomial import (
    DeckAutSplit,
    ExactRelation,
    FreeAbelianWitness,
    FreeUpTo,
    LevinPair,
    Monomial,
    UnitScale,
    classify_pair,
    deck_aut_split,
    evaluate_mono_word,
    levin_check,
    mono_compose,
    shared_mono_iteration,
)
from germkit.series import compose

from conftest import assert_series_equal


def mono(e, q, d):
    return Monomial(UnitScale(e, q), d)


class TestUnitScale:
    def test_exponent_reduced_mod_order(self):
        assert UnitScale(7, 3).exponent == 1
        assert UnitScale(-1, 4).exponent == 3
        assert UnitScale(5, None).exponent == 5

    def test_multiplication_and_power(self):
        w = UnitScale(1, 6)
        assert (w * w).exponent == 2
        assert (w ** 7).exponent == 1
        assert (w ** 0).is_one()

    def test_infinite_negative_power_rejected(self):
        with pytest.raises(InfiniteOrderError):
            UnitScale(1, None) ** -1

    def test_base_mismatch(self):
        with pytest.raises(BaseMismatchError):
            UnitScale(1, 3) * UnitScale(1, 5)
        with pytest.raises(BaseMismatchError):
            UnitScale(1, 3) * UnitScale(1, None)

    def test_values(self):
        import cmath

        assert UnitScale(1, 4).value() == pytest.approx(1j)
        assert UnitScale(2, 4).value() == pytest.approx(-1)
        assert UnitScale(1, 3).value() == pytest.approx(cmath.exp(2j * cmath.pi / 3))

    def test_exact_values_gaussian_bases(self):
        assert UnitScale(0, 1).exact_value() is not None
        assert complex(UnitScale(1, 2).exact_value()) == -1
        assert complex(UnitScale(3, 4).exact_value()) == pytest.approx(-1j)
        assert UnitScale(1, 3).exact_value() is None
        assert UnitScale(1, None).exact_value() is None

    def test_invalid_order(self):
        with pytest.raises(PreconditionError):
            UnitScale(0, 0)


class TestMonomialAlgebra:
    def test_composition_law(self):
        # (z^2) o (w z^2) = w^2 z^4 and (w z^2) o (z^2) = w z^4
        f = mono(0, 12, 2)
        g = mono(1, 12, 2)
        assert (f * g).key() == (2, 4)
        assert (g * f).key() == (1, 4)

    def test_pure_powers(self):
        assert (mono(0, 1, 3) * mono(0, 1, 5)).key() == (0, 15)

    def test_iterate_geometric_exponent(self):
        g = mono(1, 100, 3)
        by_hand = g
        for n in range(2, 6):
            by_hand = g * by_hand
            assert g ** n == by_hand
        # e * (d^n - 1)/(d - 1) mod q
        assert (g ** 4).scale.exponent == (3 ** 4 - 1) // 2 % 100

    def test_degree_one_iterate(self):
        rot = mono(1, 7, 1)
        assert (rot ** 5).scale.exponent == 5 % 7

    def test_power_zero_is_identity(self):
        assert (mono(3, 7, 2) ** 0).key() == (0, 1)

    def test_negative_power_rejected(self):
        with pytest.raises(PreconditionError):
            mono(0, 1, 2) ** -1

    def test_degree_zero_rejected(self):
        with pytest.raises(PreconditionError):
            mono(0, 1, 0)

    def test_mono_compose_alias(self):
        f, g = mono(1, 5, 2), mono(2, 5, 3)
        assert mono_compose(f, g) == f * g

    def test_associativity_exhaustive_small(self):
        scales = [mono(e, 6, d) for e in range(3) for d in (2, 3)]
        for a, b, c in product(scales, repeat=3):
            assert (a * b) * c == a * (b * c)


class TestSeriesEmbedding:
    def test_exact_embedding_is_homomorphism(self):
        # bases 1, 2, 4 embed exactly; composition commutes with embedding
        for qbase in (1, 2, 4):
            f = mono(1, qbase, 2)
            g = mono(qbase - 1, qbase, 3)
            lhs = (f * g).to_series(8)
            rhs = compose(f.to_series(8), g.to_series(8))
            assert_series_equal(lhs, rhs)

    def test_float_embedding_tracks_exact_law(self):
        f = mono(1, 3, 2)
        g = mono(2, 3, 2)
        lhs = (f * g).to_series(8, exact=False)
        rhs = compose(f.to_series(8, exact=False), g.to_series(8, exact=False))
        for j in range(1, 9):
            assert abs(lhs.coefficient(j) - rhs.coefficient(j)) < 1e-12

    def test_exact_embedding_refused_off_gaussian(self):
        with pytest.raises(InfiniteOrderError):
            mono(1, 3, 2).to_series(8, exact=True)


class TestDeckAutSplit:
    def test_coprime_case(self):
        assert deck_aut_split(3, 2) == DeckAutSplit(3, 2, 1, 3, 0, 2, 0, 2)

    def test_mixed_case(self):
        assert deck_aut_split(6, 2) == DeckAutSplit(6, 2, 2, 3, 1, 2, 2, 2)

    def test_trivial_group(self):
        assert deck_aut_split(1, 7) == DeckAutSplit(1, 7, 1, 1, 0, 1, 0, 1)

    def test_prime_power_base(self):
        s = deck_aut_split(12, 2)
        assert (s.q_d, s.q_a, s.r, s.s) == (4, 3, 2, 2)
        assert (s.alpha, s.beta) == (4, 2)

    def test_infinite_rejected(self):
        with pytest.raises(InfiniteOrderError):
            deck_aut_split(None, 2)
        with pytest.raises(PreconditionError):
            deck_aut_split(4, 1)

    def test_split_invariants_exhaustive(self):
        for q in range(1, 1501):
            for m in range(2, 101):
                s = deck_aut_split(q, m)
                assert s.q_d * s.q_a == q
                assert math.gcd(s.q_d, s.q_a) == 1
                assert math.gcd(q, m ** s.r) == s.q_d
                assert math.gcd(q, m ** s.s - 1) == s.q_a
                assert (s.alpha, s.beta) == (s.r * s.s, s.s)

    def test_split_invariants_sampled_full_range(self, rng):
        import sympy

        for _ in range(400):
            q = rng.randint(1, 10 ** 4)
            m = rng.randint(2, 100)
            s = deck_aut_split(q, m)
            assert s.q_d * s.q_a == q and math.gcd(s.q_d, s.q_a) == 1
            # r minimal with q_d | m^r, s the multiplicative order of m mod q_a
            if s.r > 0:
                assert m ** (s.r - 1) % s.q_d != 0
            assert m ** s.r % s.q_d == 0
            if s.q_a > 1:
                assert s.s == sympy.n_order(m, s.q_a)

    def test_commutation_guarantee(self, rng):
        # f^alpha o g commutes with f^beta over the same base
        for _ in range(200):
            q = rng.randint(1, 500)
            m = rng.randint(2, 30)
            k = rng.randint(2, 30)
            e = rng.randint(0, q - 1)
            sp = deck_aut_split(q, m)
            f = mono(0, q, m)
            g = mono(e, q, k)
            left = (f ** sp.alpha) * g
            assert left * (f ** sp.beta) == (f ** sp.beta) * left

    def test_coprime_example_commutes_directly(self):
        sp = deck_aut_split(3, 2)
        f = mono(0, 3, 2)
        for e in range(3):
            g = mono(e, 3, 5)
            assert g * f ** sp.beta == f ** sp.beta * g


class TestLevinCheck:
    def test_quadratic_negation(self):
        f = mono(0, 2, 2)
        g = mono(1, 2, 2)
        assert levin_check(f, g, 1, 1)

    def test_degree_mismatch(self):
        assert not levin_check(mono(0, 1, 2), mono(0, 1, 3), 1, 1)

    def test_equal_maps(self):
        f = mono(0, 1, 3)
        assert levin_check(f, f, 1, 1)

    def test_quartic_negation(self):
        assert levin_check(mono(0, 2, 4), mono(1, 2, 4), 1, 1)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            levin_check(mono(0, 1, 1), mono(0, 1, 2), 1, 1)
        with pytest.raises(PreconditionError):
            levin_check(mono(0, 1, 2), mono(0, 1, 2), 0, 1)
        with pytest.raises(BaseMismatchError):
            levin_check(mono(0, 2, 2), mono(1, 4, 2), 1, 1)

    def test_identities_re_verify(self, rng):
        # whenever the check passes, both displayed identities hold verbatim
        for _ in range(100):
            q = rng.randint(1, 8)
            f = mono(rng.randint(0, q - 1), q, rng.choice([2, 3, 4]))
            g = mono(rng.randint(0, q - 1), q, rng.choice([2, 3, 4]))
            k, l = rng.randint(1, 3), rng.randint(1, 3)
            if levin_check(f, g, k, l):
                assert f ** k * g ** l == f ** (2 * k)
                assert g ** l * f ** k == g ** (2 * l)


class TestSharedMonoIteration:
    def test_power_tower(self):
        assert shared_mono_iteration(mono(0, 1, 2), mono(0, 1, 8), 10) == (3, 1)

    def test_square_vs_fourth(self):
        assert shared_mono_iteration(mono(0, 1, 2), mono(0, 1, 4), 10) == (2, 1)

    def test_independent_degrees(self):
        assert shared_mono_iteration(mono(0, 1, 2), mono(0, 1, 3), 10) is None

    def test_scale_obstruction(self):
        # degrees match at (3,1) but the scales disagree there
        f = mono(0, 5, 2)
        g = mono(1, 5, 8)
        assert f ** 3 != g
        assert shared_mono_iteration(f, g, 10) is None


class TestClassifyPair:
    def test_levin_pair(self):
        out = classify_pair(mono(0, 2, 2), mono(1, 2, 2))
        assert out == LevinPair(1, 1, mono(0, 2, 4), mono(1, 2, 4))

    def test_cube_root_exact_relation(self):
        out = classify_pair(mono(0, 3, 2), mono(1, 3, 2))
        assert isinstance(out, ExactRelation)
        assert (out.w1, out.w2) == ("GG", "FF")
        assert out.value == mono(0, 3, 4)

    def test_infinite_order_free(self):
        out = classify_pair(mono(0, None, 2), mono(1, None, 2), 10)
        assert out == FreeUpTo(10)

    def test_infinite_order_mixed_degrees_free(self):
        out = classify_pair(mono(0, None, 2), mono(1, None, 3), 8)
        assert out == FreeUpTo(8)

    def test_shared_iteration_found_via_commutation(self):
        out = classify_pair(mono(0, 1, 2), mono(0, 1, 8))
        assert isinstance(out, ExactRelation)
        assert (out.w1, out.w2) == ("FFF", "G")

    def test_free_abelian_witness(self):
        # w z^2 and w^2 z^3 over q=7 commute but share no iteration
        out = classify_pair(mono(1, 7, 2), mono(2, 7, 3))
        assert isinstance(out, FreeAbelianWitness)
        assert out.search_bound == 10

    def test_trivial_scales_independent_degrees(self):
        out = classify_pair(mono(0, 1, 2), mono(0, 1, 3))
        assert isinstance(out, FreeAbelianWitness)

    def test_base_mismatch(self):
        with pytest.raises(BaseMismatchError):
            classify_pair(mono(0, 2, 2), mono(1, 3, 2))

    def test_every_relation_re_verifies(self, rng):
        for _ in range(60):
            q = rng.choice([2, 3, 4, 5, 6, None])
            emax = 11 if q is None else q - 1
            f = Monomial(UnitScale(rng.randint(0, max(emax, 0)), q), rng.choice([2, 3, 4]))
            g = Monomial(UnitScale(rng.randint(0, max(emax, 0)), q), rng.choice([2, 3, 4]))
            out = classify_pair(f, g, 6)
            if isinstance(out, ExactRelation):
                assert evaluate_mono_word(out.w1, f, g) == evaluate_mono_word(out.w2, f, g)
                assert out.w1 != out.w2
            elif isinstance(out, LevinPair):
                assert levin_check(f, g, out.k, out.l)
            elif isinstance(out, FreeUpTo):
                # conclusive freeness: all words up to the bound are distinct
                values = {}
                for length in range(1, 7):
                    for letters in product("FG", repeat=length):
                        w = "".join(letters)
                        key = evaluate_mono_word(w, f, g).key()
                        assert values.setdefault(key, w) == w
            else:
                assert isinstance(out, FreeAbelianWitness)
                assert f * g == g * f

    def test_word_evaluation_outermost_first(self):
        f, g = mono(0, 12, 2), mono(1, 12, 2)
        assert evaluate_mono_word("FG", f, g) == f * g
        assert evaluate_mono_word("GFF", f, g) == g * (f * f)
