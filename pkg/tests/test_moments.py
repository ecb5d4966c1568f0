"""Moment engines: minimizers, asymptotics, exact sums, classification."""

from fractions import Fraction

import pytest

from graphstate.catalog import (
    cycle_graph,
    exotic_graph,
    exotic_poset,
    fc_template,
    figure_example,
    one_loop,
    star_graph,
)
from graphstate.combinatorics import Perm, catalan, count_poset_tuples, fuss_catalan
from graphstate.flow import marginal_max_flow
from graphstate.graphs import GraphSpec
from graphstate.moments import (
    BudgetExceededError,
    asymptotic_moment,
    classify,
    cycle_marginal,
    exact_moment,
    exact_moment_gaussian,
    f_beta,
    law_moments,
    minimizer_set,
    moment_table,
    one_unitary_marginal,
    star_marginal,
)
from graphstate.spectra import fc_entropy, mp_moment
from graphstate.weingarten import SingularWeingartenError


class TestFBeta:
    def test_all_identity(self, corpus):
        for m in corpus[:10]:
            for p in (2, 3):
                betas = [Perm.identity(p)] * m.k
                assert f_beta(m, betas, p) == (p - 1) * len(m.kept)

    def test_all_gamma(self, corpus):
        for m in corpus[:10]:
            for p in (2, 3):
                betas = [Perm.full_cycle(p)] * m.k
                assert f_beta(m, betas, p) == (p - 1) * len(m.traced)

    def test_one_loop_both_minimize(self):
        m = one_loop()
        assert f_beta(m, [Perm.identity(2)], 2) == 1
        assert f_beta(m, [Perm.full_cycle(2)], 2) == 1

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            f_beta(one_loop(), [], 2)


class TestMinimizerSet:
    @pytest.mark.parametrize("p", range(1, 7))
    def test_one_loop_counts(self, p):
        assert len(minimizer_set(one_loop(), p)) == catalan(p)

    @pytest.mark.parametrize("p", range(1, 6))
    def test_fc2_counts(self, p):
        assert len(minimizer_set(fc_template(2), p)) == fuss_catalan(2, p)

    @pytest.mark.parametrize("p,expected", [(1, 1), (2, 5), (3, 38), (4, 353)])
    def test_exotic_counts_match_poset_brute_force(self, p, expected):
        assert len(minimizer_set(exotic_graph(), p)) == expected
        assert count_poset_tuples(exotic_poset(), p) == expected

    @pytest.mark.parametrize("p", range(1, 6))
    def test_star_pins_leave_one_free_chain(self, p):
        ms = minimizer_set(star_graph(2, 1, 1), p)
        assert len(ms) == catalan(p)
        # satellite blocks are pinned: fully kept -> one, fully traced -> zero
        assert ms.pinned.get(0) == "one" or ms.pinned.get(1) == "one"
        assert "zero" in ms.pinned.values()

    def test_minimum_matches_flow_bound(self, corpus):
        # the enumerated minimum must equal X(p-1); minimizer_set raises otherwise
        for m in corpus:
            for p in (2, 3):
                ms = minimizer_set(m, p)
                x = marginal_max_flow(m)
                assert ms.x == x
                betas = [ms.partitions[i] for i in ms.tuples[0]]
                assert len(betas) == m.k

    @pytest.mark.parametrize("p", range(2, 6))
    def test_minimum_matches_flow_bound_curated(self, p):
        for m in (one_loop(), fc_template(2), star_graph(2, 1, 1), figure_example()):
            minimizer_set(m, p)  # raises MinimizerConsistencyError on mismatch

    def test_budget_error_carries_estimate(self):
        with pytest.raises(BudgetExceededError) as err:
            minimizer_set(exotic_graph(), 8, budget=10)
        assert err.value.estimated > 10


class TestAsymptoticMoment:
    def test_normalization_on_corpus(self, corpus):
        for m in corpus:
            report = asymptotic_moment(m, 1)
            assert (report.exponent, report.coefficient) == (0, Fraction(1))

    def test_coefficient_equals_count_when_unweighted(self, corpus):
        for m in corpus[:15]:
            if any(d != 1 for d in m.graph.dim_of.values()):
                continue
            for p in (2, 3):
                r = asymptotic_moment(m, p)
                assert r.coefficient == r.minimizer_count

    def test_fc2_template_values(self):
        r = asymptotic_moment(fc_template(2), 3)
        assert (r.exponent, r.coefficient) == (-6, Fraction(12))

    def test_exotic_sequence(self):
        rows = moment_table(exotic_graph(), 3)
        assert [(r.exponent, r.coefficient) for r in rows] == [
            (0, Fraction(1)), (-5, Fraction(5)), (-10, Fraction(38))]

    def test_one_loop_weighted(self):
        # with dimension factor d the coefficients pick up d^(1-p)
        for p in (1, 2, 3, 4):
            r = asymptotic_moment(one_loop(d=3), p)
            assert r.coefficient == Fraction(3) ** (1 - p) * catalan(p)

    def test_swap_invariance(self, corpus):
        for m in corpus:
            a = [(r.exponent, r.coefficient) for r in moment_table(m, 3)]
            b = [(r.exponent, r.coefficient) for r in moment_table(m.swap(), 3)]
            assert a == b


class TestExactMoment:
    def test_first_moment_is_one(self, small_corpus):
        for m in small_corpus:
            assert exact_moment(m, 1, 3) == 1

    @pytest.mark.parametrize("N", [2, 4, 8, 16])
    def test_one_loop_closed_form(self, N):
        assert exact_moment(one_loop(), 2, N) == Fraction(2 * N, N * N + 1)

    def test_one_loop_gap_halves(self):
        gaps = [abs(N * exact_moment(one_loop(), 2, N) - 2) for N in (2, 4, 8, 16)]
        for a, b in zip(gaps, gaps[1:]):
            assert b <= a / 2

    def test_swap_invariance_exact(self, small_corpus):
        # spectra of the two reductions differ only by zeros
        for m in small_corpus[:8]:
            assert exact_moment(m, 2, 3) == exact_moment(m.swap(), 2, 3)

    def test_converges_to_asymptotic(self, small_corpus):
        for m in small_corpus[:6]:
            for p in (2, 3):
                r = asymptotic_moment(m, p)
                x = -r.exponent // (p - 1)
                gaps = []
                for N in (4, 8, 16):
                    val = exact_moment(m, p, N) * N ** (x * (p - 1))
                    gaps.append(abs(float(val - r.coefficient)) / float(r.coefficient))
                assert gaps[1] <= gaps[0] * 0.75 + 1e-12
                assert gaps[2] <= gaps[1] * 0.75 + 1e-12
                assert gaps[2] <= 16.0 / 16 / 4  # loose C/N envelope

    @pytest.mark.parametrize("d,N", [(1, 4), (2, 3), (3, 2)])
    def test_bell_pair_marginal_is_exactly_flat(self, d, N):
        # two blocks joined by one weighted bond: unitary blocks leave the
        # reduced state exactly I/(dN), so the full Weingarten sum must
        # collapse to (dN)^(1-p) at every finite N
        from graphstate.catalog import bell_pair
        m = bell_pair(d=d)
        for p in (1, 2, 3):
            assert exact_moment(m, p, N) == Fraction(1, (d * N) ** (p - 1))

    def test_bell_pair_gaussian_flattens_only_asymptotically(self):
        # Gaussian blocks do not preserve the flat spectrum at finite N,
        # but the rescaled second moment must drift to 1 as N grows
        from graphstate.catalog import bell_pair
        m = bell_pair()
        vals = [float(N * exact_moment_gaussian(m, 2, N)) for N in (4, 8, 16, 32)]
        gaps = [abs(v - 1.0) for v in vals]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))

    def test_weighted_one_loop_closed_form(self):
        # dimension factor folds into the closed form via N -> dN
        for d, N in ((2, 3), (3, 4)):
            dn = d * N
            assert exact_moment(one_loop(d=d), 2, N) == Fraction(2 * dn, dn * dn + 1)

    def test_budget_error(self):
        with pytest.raises(BudgetExceededError):
            exact_moment(cycle_graph("TSRR"), 4, 4, budget=1000)

    def test_singular_dimension_error(self):
        with pytest.raises(SingularWeingartenError):
            exact_moment(one_loop(), 3, 1)   # block dimension 1 < p

    def test_gaussian_one_loop_closed_form(self):
        for N in (2, 4, 8):
            assert exact_moment_gaussian(one_loop(), 2, N) == Fraction(2, N)

    def test_gaussian_first_moment_is_one(self, small_corpus):
        for m in small_corpus[:8]:
            assert exact_moment_gaussian(m, 1, 3) == 1

    def test_gaussian_approaches_haar(self):
        # inter-model relative gap shrinks as N grows
        m = cycle_graph("TSRR")
        rel = []
        for N in (3, 5, 8):
            haar = exact_moment(m, 2, N)
            wick = exact_moment_gaussian(m, 2, N)
            rel.append(abs(float(wick / haar - 1)))
        assert rel[1] < rel[0]
        assert rel[2] < rel[1]


def _coefficients(marginal, p_max):
    return [r.coefficient for r in moment_table(marginal, p_max)]


class TestStarFamily:
    @pytest.mark.parametrize("m,s,t", [(2, s, t) for s in range(3) for t in range(3)]
                             + [(3, 1, 2), (3, 2, 1), (3, 0, 3), (3, 3, 3)])
    def test_against_engine(self, m, s, t):
        report = star_marginal(m, s, t)
        marginal = star_graph(m, s, t)
        if s == 0 and t == 0:
            return  # fully traced: scalar state, nothing to compare
        assert report.flow == marginal_max_flow(marginal)
        rows = moment_table(marginal, 3)
        assert rows[1].exponent == report.purity_exponent
        assert rows[1].coefficient == report.purity_coeff

    def test_balanced_case_is_free_poisson(self):
        report = star_marginal(2, 1, 1)
        assert report.law.kind == "free_poisson" and report.law.c == 1
        assert report.entropy_constant == -0.5
        assert (report.purity_coeff, report.purity_exponent) == (2, -2)

    def test_empty_side_is_exact(self):
        report = star_marginal(2, 0, 2)
        assert report.exact_at_finite_n
        assert report.law.kind == "maximally_mixed"
        assert report.entropy(10.0) == pytest.approx(2 * __import__("math").log(10))

    def test_oversized_kept_side(self):
        report = star_marginal(2, 1, 2)
        assert report.flow == 1
        assert report.law.rank_exponent == 1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            star_marginal(2, 3, 0)


class TestCycleFamily:
    CASES = ["TS", "TSRR", "TRS", "TRRS", "TTSS", "TRSRT", "SRRT", "TRRT",
             "SRS", "TRSRS"]

    @pytest.mark.parametrize("types", CASES)
    def test_flow_matches_engine(self, types):
        assert cycle_marginal(types).flow == marginal_max_flow(cycle_graph(types))

    @pytest.mark.parametrize("types", CASES)
    def test_coefficients_match_minimizer_counts(self, types):
        report = cycle_marginal(types)
        for p in (1, 2, 3):
            predicted = 1
            for factor in _law_orders(report.law):
                predicted *= fuss_catalan(factor, p)
            assert len(minimizer_set(cycle_graph(types), p)) == predicted

    def test_all_r_cycle_is_square_case(self):
        # no pins anywhere: labels equal but free, Catalan counts
        report = cycle_marginal("RRRR")
        assert report.law.kind == "free_poisson"
        assert report.flow == 4
        for p in (2, 3):
            assert len(minimizer_set(cycle_graph("RRRR"), p)) == catalan(p)

    def test_four_cycle_order_two(self):
        report = cycle_marginal("TSRR")
        assert report.flow == 4
        assert report.law.kind == "fuss_catalan" and report.law.s == 2
        assert report.entropy_constant == pytest.approx(float(fc_entropy(2)))

    def test_three_cycle_single_unit_arc(self):
        report = cycle_marginal("TRS")
        assert report.flow == 3
        assert report.law.kind == "free_poisson"

    def test_entropy_sums_over_arcs(self):
        report = cycle_marginal("TRSRT")  # two length-1 arcs
        assert report.entropy_constant == pytest.approx(-1.0)
        assert report.law.kind == "classical_product"

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            cycle_marginal("T")
        with pytest.raises(ValueError):
            cycle_marginal("TXS")


def _law_orders(law):
    if law.kind == "dirac" or law.kind == "maximally_mixed":
        return []
    if law.kind == "free_poisson":
        return [1]
    if law.kind == "fuss_catalan":
        return [law.s]
    if law.kind == "classical_product":
        out = []
        for f in law.factors:
            out.extend(_law_orders(f))
        return out
    raise AssertionError(law)


def _one_unitary_graph(loops, external, loop_dims=None, external_dims=None):
    """Central vertex with given loop bonds and bonds to traced satellites."""
    loop_dims = loop_dims or [1] * loops
    external_dims = external_dims or [1] * external
    blocks, bonds, dims = [], [], {}
    nxt = 1
    central = []
    for d in loop_dims:
        a, b = nxt, nxt + 1
        nxt += 2
        central.extend([a, b])
        bonds.append((a, b))
        dims[a] = dims[b] = d
    ext_ends = []
    for d in external_dims:
        e = nxt
        nxt += 1
        central.append(e)
        ext_ends.append(e)
        dims[e] = d
    blocks.append(central)
    satellites = []
    for e, d in zip(ext_ends, external_dims):
        s = nxt
        nxt += 1
        blocks.append([s])
        bonds.append((e, s))
        dims[s] = d
        satellites.append(s)
    return GraphSpec(vertex_blocks=blocks, bonds=bonds, dims=dims), satellites


class TestOneUnitaryFamily:
    def test_square_case_is_one_loop(self):
        report = one_unitary_marginal(1, 1, 0)
        assert report.law.kind == "free_poisson" and report.law.c == 1

    def test_case_three_rank(self):
        report = one_unitary_marginal(2, 1, 0)
        assert report.law.kind == "maximally_mixed"
        assert report.law.rank_exponent == 1

    def test_case_one_flat_on_kept(self):
        g, sat = _one_unitary_graph(loops=1, external=1)
        marginal = g.marginal({1, 2} | set(sat))   # only the external end survives
        report = one_unitary_marginal(kept=1, traced_in_block=2, external=1)
        assert report.law.kind == "maximally_mixed"
        assert report.law.rank_exponent == 1
        # flat limit: geometric coefficients d_S^(1-p), here all ones
        assert _coefficients(marginal, 3) == [1, 1, 1]

    def test_critical_case_with_weights(self):
        # two loops (d=1) plus one weighted external bond (d=2), traced ends
        # chosen so kept = traced-in-block + external with parameter c = 4
        g, sat = _one_unitary_graph(loops=2, external=1,
                                    loop_dims=[1, 1], external_dims=[2])
        marginal = g.marginal({1, 5} | set(sat))   # trace one loop end + ext end
        report = one_unitary_marginal(kept=3, traced_in_block=2, external=1,
                                      d_kept=1, d_traced=2, d_external=2)
        assert report.law.kind == "free_poisson"
        assert report.law.c == Fraction(4)
        coeffs = _coefficients(marginal, 4)
        for p in (1, 2, 3, 4):
            predicted = Fraction(4) ** -p * mp_moment(Fraction(4), p)
            assert coeffs[p - 1] == predicted
        assert classify(marginal, 4).c == Fraction(4)

    def test_projector_case(self):
        report = one_unitary_marginal(2, 0, 1, d_external=3)
        assert report.exact_at_finite_n
        assert report.law.rank_coeff == 3

    def test_rejects_empty_kept(self):
        with pytest.raises(ValueError):
            one_unitary_marginal(0, 1, 0)


class TestClassify:
    def test_one_loop(self):
        dist = classify(one_loop(), 6)
        assert dist.kind == "free_poisson" and dist.c == 1

    def test_weighted_one_loop(self):
        dist = classify(one_loop(d=3), 5)
        assert dist.kind == "free_poisson" and dist.c == 1

    @pytest.mark.parametrize("s", [2, 3])
    def test_fc_templates(self, s):
        dist = classify(fc_template(s), 4)
        assert dist.kind == "fuss_catalan" and dist.s == s

    def test_exotic_is_poset_law(self):
        dist = classify(exotic_graph(), 4)
        assert dist.kind == "poset_law"
        assert set(dist.poset.relations) == {(0, 1), (0, 2)}

    def test_cycle_product(self):
        dist = classify(cycle_graph("TRSRT"), 4)
        assert dist.kind == "classical_product"
        assert all(f.kind == "free_poisson" for f in dist.factors)

    def test_flat_star(self):
        dist = classify(star_graph(2, 0, 2), 4)
        assert dist.kind in ("dirac", "maximally_mixed")

    def test_never_mislabels(self, corpus):
        # whatever tag comes back must reproduce the engine sequence exactly
        for m in corpus:
            coeffs = _coefficients(m, 3)
            dist = classify(m, 3)
            if dist.kind == "unknown":
                assert list(dist.moments) == coeffs
            else:
                assert law_moments(dist, 3) == coeffs

    def test_law_moments_round_trip_families(self):
        cases = [one_loop(), one_loop(d=3), fc_template(2), exotic_graph(),
                 cycle_graph("TRSRT"), star_graph(2, 0, 2)]
        for m in cases:
            dist = classify(m, 4)
            assert dist.kind != "unknown"
            assert law_moments(dist, 4) == _coefficients(m, 4)

    def test_custom_poset_candidates(self):
        # without the built-in candidate the exotic sequence is unclassified
        dist = classify(exotic_graph(), 3, posets=[])
        assert dist.kind == "unknown"
        assert list(dist.moments) == [1, 5, 38]

    def test_minimizers_are_pinned_geodesics(self):
        from graphstate.combinatorics import is_geodesic, nc_to_geodesic, NCPartition
        m = cycle_graph("TSRR")
        ms = minimizer_set(m, 3)
        zero, one = NCPartition.zero(3), NCPartition.one(3)
        for t in ms.tuples:
            parts = ms.as_partitions(t)
            assert all(is_geodesic(nc_to_geodesic(q)) for q in parts)
            for block, pin in ms.pinned.items():
                assert parts[block] == (zero if pin == "zero" else one)
