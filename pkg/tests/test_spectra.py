"""Limit-law analytics: densities vs combinatorial moments and entropies."""

import math
from fractions import Fraction

import numpy as np
import pytest

from graphstate.catalog import exotic_poset
from graphstate.combinatorics import ConstraintPoset, catalan
from graphstate.spectra import (
    fc2_density,
    fc_density,
    fc_entropy,
    fc_moment,
    fc_support,
    hankel_matrix,
    mp_density,
    mp_entropy,
    mp_moment,
    poset_law_moments,
    product_moments,
)


class TestMPDensity:
    def test_c1_support_and_atom(self):
        d = mp_density(1)
        assert (d.lo, d.hi) == (0.0, 4.0)
        assert d.atom == 0.0

    def test_subcritical_atom(self):
        assert mp_density(0.25).atom == pytest.approx(0.75)

    @pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(1), Fraction(2)])
    def test_total_mass(self, c):
        assert mp_density(c).total_mass() == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(1), Fraction(2)])
    def test_moments_match_lattice_sum(self, c):
        d = mp_density(c)
        for p in range(1, 5):
            assert d.moment(p) == pytest.approx(float(mp_moment(c, p)), abs=1e-6)

    def test_nonnegative_on_support(self):
        d = mp_density(1)
        xs = np.linspace(0.0, 4.0, 200)
        assert np.all(d(xs) >= 0.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            mp_density(0)


class TestMPMoments:
    def test_catalan_at_c1(self):
        assert [mp_moment(1, p) for p in (1, 2, 3)] == [1, 2, 5]

    def test_purity_formula(self):
        for c in (Fraction(1, 3), Fraction(2), Fraction(7, 5)):
            assert mp_moment(c, 2) == c * c + c

    def test_mean_is_c(self):
        assert mp_moment(Fraction(3, 7), 1) == Fraction(3, 7)


class TestMPEntropy:
    def test_unit_parameter(self):
        assert mp_entropy(1) == -0.5

    def test_subcritical_branch(self):
        assert mp_entropy(Fraction(1, 2)) == pytest.approx(-0.125)

    @pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(1), Fraction(2)])
    def test_quadrature_matches_closed_form(self, c):
        assert mp_density(c).entropy() == pytest.approx(mp_entropy(c), abs=1e-6)


class TestFussCatalan:
    def test_moments_are_fc_numbers(self):
        assert [fc_moment(2, p) for p in (1, 2, 3, 4)] == [1, 3, 12, 55]

    def test_support_edges(self):
        assert fc_support(1) == 4
        assert fc_support(2) == Fraction(27, 4)

    def test_entropies(self):
        assert fc_entropy(1) == Fraction(-1, 2)
        assert fc_entropy(2) == Fraction(-5, 6)
        assert fc_entropy(3) == Fraction(-13, 12)

    def test_entropy_decreasing_and_matches_mp(self):
        values = [fc_entropy(s) for s in range(1, 6)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert float(fc_entropy(1)) == mp_entropy(1)

    def test_s1_density_is_mp(self):
        assert fc_density(1).hi == 4.0

    def test_no_closed_form_above_two(self):
        with pytest.raises(ValueError):
            fc_density(3)


class TestFC2Density:
    def test_total_mass(self):
        assert fc2_density().total_mass() == pytest.approx(1.0, abs=1e-8)

    def test_low_moments(self):
        d = fc2_density()
        assert d.moment(1) == pytest.approx(1.0, abs=1e-6)
        assert d.moment(2) == pytest.approx(3.0, abs=1e-6)
        assert d.moment(3) == pytest.approx(12.0, abs=1e-4)

    def test_entropy_matches_harmonic_sum(self):
        assert fc2_density().entropy() == pytest.approx(float(fc_entropy(2)), abs=1e-5)

    def test_divergence_exponent_at_origin(self):
        d = fc2_density()
        slope = (math.log(d(1e-6)) - math.log(d(1e-8))) / (math.log(1e-6) - math.log(1e-8))
        assert slope == pytest.approx(-2.0 / 3.0, abs=0.01)

    def test_support(self):
        d = fc2_density()
        assert d.hi == pytest.approx(27.0 / 4.0)
        assert d(7.0) == 0.0


class TestProducts:
    def test_pointwise_product(self):
        assert product_moments([[1, 3, 12], [1, 2, 5]]) == [1, 6, 60]

    def test_identity_factor(self):
        seq = [Fraction(1), Fraction(2), Fraction(5)]
        assert product_moments([seq, [1, 1, 1]]) == seq

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            product_moments([[1, 2], [1, 2, 3]])


class TestPosetLaws:
    def test_chain_reduces_to_fc(self):
        chain = ConstraintPoset.make_chain(2)
        assert poset_law_moments(chain, 4) == [1, 3, 12, 55]

    def test_disjoint_union_factorizes(self):
        two_chains = ConstraintPoset(
            k=5, relations=[(0, 1), (1, 2), (3, 4)])  # lengths 3 and 2
        left = ConstraintPoset.make_chain(3)
        right = ConstraintPoset.make_chain(2)
        combined = poset_law_moments(two_chains, 3)
        assert combined == product_moments(
            [poset_law_moments(left, 3), poset_law_moments(right, 3)])

    def test_exotic_values(self):
        assert poset_law_moments(exotic_poset(), 3) == [1, 5, 38]


class TestMomentSequenceSanity:
    @pytest.mark.parametrize("moments", [
        [1, 2, 5, 14],                 # MP(1)
        [1, 3, 12, 55],                # order-2
        [1, 5, 38, 353],               # exotic law
    ])
    def test_hankel_positive(self, moments):
        for size in (2, 3):
            h = hankel_matrix(moments, size)
            assert np.linalg.eigvalsh(h).min() > 0

    def test_positive_moments(self):
        assert all(m > 0 for m in poset_law_moments(exotic_poset(), 4))

    def test_window_guard(self):
        with pytest.raises(ValueError):
            hankel_matrix([1, 2], 3)
