import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from polarga import diagnostics as dg
from polarga import ga

SIGMA2_1DB = ga.ebn0_to_noise_variance(1.0, 1 / 3)


def naive_leaf_errors(I, delta, d):
    """Arbitrary-precision recursion over both trajectories, leaf order by path bits."""
    a, b = [mpmath.mpf(I)], [mpmath.mpf(I) + mpmath.mpf(delta)]
    for _ in range(d):
        a = [y for x in a for y in (x * x, 2 * x - x * x)]
        b = [y for x in b for y in (x * x, 2 * x - x * x)]
    return [float(mpmath.log(y / x, 2)) for x, y in zip(a, b)]


capacity = st.floats(min_value=0.05, max_value=0.95)


@st.composite
def injection(draw, max_depth=12):
    I = draw(capacity)
    target = draw(st.floats(min_value=1e-3, max_value=0.999))
    d = draw(st.integers(min_value=0, max_value=max_depth))
    return I, target - I, d


class TestBoundaries:
    def test_chung(self):
        b = dg.solve_set_boundaries(ga.CHUNG)
        assert not b.empty
        assert b.a1 == pytest.approx(0.01476, rel=1e-3)
        assert b.a2 == pytest.approx(0.02939, rel=1e-3)
        assert ga.omega_eval(ga.CHUNG, b.a2) == pytest.approx(1.0, abs=1e-12)
        w1, w2 = ga.omega_eval(ga.CHUNG, b.a1), ga.omega_eval(ga.CHUNG, 2 * b.a1)
        assert 2 * w1 - w1 * w1 == pytest.approx(w2, rel=1e-12)

    @pytest.mark.parametrize("name", ["ega", "aga2", "aga3", "aga4"])
    def test_empty(self, name):
        assert dg.solve_set_boundaries(name).empty

    def test_non_monotone_rejected(self):
        bumpy = ga.GaScheme(
            "bumpy",
            ga.SchemeKind.AGA2,
            (ga.Segment(1.0, ga.ExpQuadratic(0.5, -0.1)), ga.Segment(math.inf, ga.ExpQuadratic(0.0, -0.3))),
        )
        with pytest.raises(ga.UnsupportedSchemeError):
            dg.solve_set_boundaries(bumpy)


class TestClassify:
    def test_examples(self):
        assert dg.classify_llr_mean(ga.CHUNG, 0.01) is dg.NodeClass.PRS
        assert dg.classify_llr_mean(ga.CHUNG, 0.02) is dg.NodeClass.PVS
        assert dg.classify_llr_mean(ga.CHUNG, 1.0) is dg.NodeClass.NORMAL

    def test_consistent_with_intervals(self):
        b = dg.solve_set_boundaries(ga.CHUNG)
        t = np.geomspace(1e-5, 1.0, 400)
        t = t[(np.abs(t - b.a1) > 1e-6) & (np.abs(t - b.a2) > 1e-6)]
        got = [dg.classify_llr_mean(ga.CHUNG, x) for x in t]
        assert got == list(b.classify(t))

    def test_chung_prs_region(self):
        b = dg.solve_set_boundaries(ga.CHUNG)
        t = np.geomspace(1e-6, b.a1 * (1 - 1e-9), 200)
        assert np.all(ga.check_update(ga.CHUNG, t, simplify=False) >= 2 * t)
        t = np.linspace(b.a1 * (1 + 1e-9), b.a2 * (1 - 1e-9), 200)
        c = ga.check_update(ga.CHUNG, t, simplify=False)
        assert np.all((c >= t) & (c < 2 * t))

    @pytest.mark.parametrize("name", ["ega", "aga2", "aga3", "aga4"])
    def test_rule1_schemes_always_normal(self, name):
        for t in np.geomspace(1e-6, 100, 60):
            assert dg.classify_llr_mean(name, t) is dg.NodeClass.NORMAL

    def test_positive_only(self):
        with pytest.raises(ga.DomainError):
            dg.classify_llr_mean(ga.CHUNG, 0.0)


class TestCensus:
    @pytest.mark.parametrize("name", ["aga4", "aga2"])
    def test_empty_schemes(self, name):
        for n in (1, 5, 10):
            c = dg.census(name, n, 0.7)
            assert (c.pvs, c.prs) == (0, 0)

    def test_ratio_denominator(self):
        c = dg.CensusResult(10, 40, 33)
        assert c.total == 1023
        assert 100 * c.pvs_ratio == pytest.approx(3.910, abs=1e-3)
        assert 100 * c.prs_ratio == pytest.approx(3.226, abs=1e-3)

    def test_interval_and_definition_agree(self):
        for n in (4, 8, 12):
            a = dg.census(ga.CHUNG, n, SIGMA2_1DB, mode="interval")
            b = dg.census(ga.CHUNG, n, SIGMA2_1DB, mode="definition")
            assert a == b

    def test_deterministic(self):
        assert dg.census(ga.CHUNG, 11, SIGMA2_1DB) == dg.census(ga.CHUNG, 11, SIGMA2_1DB)

    def test_pvs_nodes_present_for_chung(self):
        assert dg.census(ga.CHUNG, 12, SIGMA2_1DB).pvs > 0

    def test_bad_args(self):
        with pytest.raises(ValueError):
            dg.census(ga.CHUNG, 0, 1.0)
        with pytest.raises(ValueError):
            dg.census(ga.CHUNG, 3, 1.0, mode="other")


class TestBecPolarize:
    def test_values(self):
        assert dg.bec_polarize(0.5, 0) == 0.25
        assert dg.bec_polarize(0.5, 1) == 0.75
        assert dg.bec_polarize(1.0, 0) == dg.bec_polarize(1.0, 1) == 1.0
        assert dg.bec_polarize(0.8, 0) == pytest.approx(0.64)
        assert dg.bec_polarize(0.8, 1) == pytest.approx(0.96)

    @pytest.mark.parametrize("I", [-0.1, 1.1])
    def test_domain(self, I):
        with pytest.raises(ga.DomainError):
            dg.bec_polarize(I, 0)

    @given(capacity)
    def test_conservation(self, I):
        assert dg.bec_polarize(I, 0) + dg.bec_polarize(I, 1) == pytest.approx(2 * I)


class TestPcle:
    def test_examples(self):
        assert dg.pcle_exact(0.5, 0.0, 5) == 0.0
        assert dg.pcle_exact(0.5, 0.1, 1) == pytest.approx(
            abs(math.log2(0.36 / 0.25)) + abs(math.log2(0.84 / 0.75)), rel=1e-13
        )
        assert dg.pcle_exact(0.5, 0.1, 1) == pytest.approx(0.6896, abs=1e-4)
        assert dg.pcle_exact(0.5, 0.1, 0) == pytest.approx(math.log2(1.2), rel=1e-14)

    def test_bound_examples(self):
        l = math.log2(1.2)
        assert dg.pcle_bound(0.5, 0.1, 1) == pytest.approx(3 * l, rel=1e-14)
        assert dg.pcle_bound(0.5, 0.1, 2) == pytest.approx(9 * l, rel=1e-14)
        assert dg.pcle_exact(0.5, 0.1, 1) <= dg.pcle_bound(0.5, 0.1, 1)
        assert dg.pcle_bound(0.5, 0.0, 4) == 0.0
        assert dg.leaf_error_bound(0.5, 0.1, 3, 2) == pytest.approx(4 * math.log2(1.2))

    @given(injection(max_depth=8))
    def test_matches_naive_recursion(self, inst):
        I, delta, d = inst
        np.testing.assert_allclose(dg.leaf_log_errors(I, delta, d), naive_leaf_errors(I, delta, d), rtol=1e-9, atol=1e-12)

    def test_deep_tiny_capacity(self):
        e = dg.leaf_log_errors(0.25, 0.5, 11)
        assert np.all(np.isfinite(e))
        assert e[0] == pytest.approx(2**11 * math.log2(3.0), rel=1e-12)

    @given(injection())
    def test_leaf_and_total_bounds(self, inst):
        I, delta, d = inst
        e = np.abs(dg.leaf_log_errors(I, delta, d))
        alpha = dg.check_counts(d)
        bound = np.array([dg.leaf_error_bound(I, delta, d, int(a)) for a in alpha])
        assert np.all(e <= bound * (1 + 1e-12) + 1e-300)
        assert e.sum() <= dg.pcle_bound(I, delta, d) * (1 + 1e-12)

    @given(capacity, st.floats(min_value=0.0, max_value=0.5), st.integers(min_value=0, max_value=12))
    def test_all_check_path_equality(self, I, frac, d):
        delta = frac * (1 - I)
        assume(I + delta < 1)
        e0 = dg.leaf_log_errors(I, delta, d)[0]
        assert e0 == pytest.approx(2**d * math.log2(1 + delta / I), rel=1e-12)

    def test_check_counts(self):
        np.testing.assert_array_equal(dg.check_counts(2), [2, 1, 1, 0])

    @pytest.mark.parametrize("d", range(21))
    def test_binomial_identity(self, d):
        assert dg.binomial_weight_sum(d) == 3**d

    @pytest.mark.parametrize("I,delta", [(0.0, 0.1), (1.0, -0.1), (0.5, 0.6), (0.5, -0.5)])
    def test_domain(self, I, delta):
        with pytest.raises(ga.DomainError):
            dg.pcle_exact(I, delta, 2)

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            dg.leaf_error_bound(0.5, 0.1, 2, 3)


class TestCleProfile:
    def test_self_comparison_zero(self):
        p = dg.cle_profile(ga.EXACT, 5, [0.5, 2.0, 8.0])
        np.testing.assert_array_equal(p.cle, 0.0)
        np.testing.assert_array_equal(p.injection_bound, 0.0)

    def test_depth_zero(self):
        p = dg.cle_profile(ga.AGA2, 0, [0.5, 3.0])
        np.testing.assert_array_equal(p.cle, 0.0)

    def test_ordering_on_unit_to_ten(self):
        t = np.linspace(1, 10, 12)
        means = [dg.cle_profile(s, 8, t).mean_cle for s in ("chung", "aga2", "aga3", "aga4")]
        assert means[0] > means[1] > means[2] > means[3] > 0

    def test_positive_roots(self):
        with pytest.raises(ga.DomainError):
            dg.cle_profile(ga.AGA2, 3, [0.0, 1.0])
