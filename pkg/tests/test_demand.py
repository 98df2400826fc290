import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codedcache.demand import (
    DemandDistribution,
    DemandVector,
    harmonic_sum,
    prefix_mass,
    sample_demand_vector,
    zipf_distribution,
)


class TestDemandDistribution:
    def test_sorted_on_construction(self):
        d = DemandDistribution(q=(0.2, 0.5, 0.3))
        assert d.q == (0.5, 0.3, 0.2)
        assert d.order == (2, 3, 1)

    def test_already_sorted_keeps_identity_order(self):
        d = DemandDistribution(q=(0.7, 0.21, 0.09))
        assert d.q == (0.7, 0.21, 0.09)
        assert d.order == (1, 2, 3)

    def test_ties_keep_original_order(self):
        d = DemandDistribution(q=(0.25, 0.25, 0.5))
        assert d.q == (0.5, 0.25, 0.25)
        assert d.order == (3, 1, 2)

    def test_rejects_bad_mass(self):
        with pytest.raises(ValueError):
            DemandDistribution(q=(0.5, 0.4))
        with pytest.raises(ValueError):
            DemandDistribution(q=(-0.1, 1.1))
        with pytest.raises(ValueError):
            DemandDistribution(q=())

    @given(
        st.lists(st.floats(min_value=1e-6, max_value=1.0), min_size=1, max_size=20)
    )
    def test_any_positive_vector_normalizes_to_sorted_pmf(self, weights):
        total = math.fsum(weights)
        d = DemandDistribution(q=tuple(w / total for w in weights))
        assert abs(math.fsum(d.q) - 1.0) < 1e-9
        assert all(a >= b for a, b in zip(d.q, d.q[1:]))
        assert sorted(d.order) == list(range(1, len(weights) + 1))


class TestZipf:
    def test_uniform_at_alpha_zero(self):
        d = zipf_distribution(4, 0.0)
        assert d.q == (0.25, 0.25, 0.25, 0.25)

    def test_known_values(self):
        # alpha=1, m=3: weights 1, 1/2, 1/3 over 11/6
        d = zipf_distribution(3, 1.0)
        assert d.q[0] == pytest.approx(6 / 11, abs=1e-15)
        assert d.q[1] == pytest.approx(3 / 11, abs=1e-15)
        assert d.q[2] == pytest.approx(2 / 11, abs=1e-15)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            zipf_distribution(0, 1.0)
        with pytest.raises(ValueError):
            zipf_distribution(3, -0.5)

    def test_large_library_mass(self):
        d = zipf_distribution(50000, 0.9)
        assert abs(math.fsum(d.q) - 1.0) < 1e-12
        assert all(a >= b for a, b in zip(d.q, d.q[1:]))


class TestHarmonicSum:
    def test_exact_small(self):
        assert harmonic_sum(1.0, 1, 3) == pytest.approx(1 + 0.5 + 1 / 3, abs=1e-15)
        assert harmonic_sum(0.0, 2, 5) == 4.0

    def test_bracket_bounds(self):
        # integral bracket: the partial sum sits between the two integral
        # estimates for every alpha != 1 on a grid of ranges
        for alpha in (0.3, 0.5, 0.9, 1.3, 2.0):
            for x, y in ((1, 10), (2, 50), (5, 500), (1, 2000)):
                s = harmonic_sum(alpha, x, y)
                a = 1.0 - alpha

                def integral(lo, hi):
                    if alpha == 1.0:
                        return math.log(hi) - math.log(lo)
                    return (hi**a - lo**a) / a

                lower = integral(x, y + 1)
                upper = x ** (-alpha) + integral(x, y)
                assert lower <= s <= upper + 1e-12

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            harmonic_sum(1.0, 0, 3)
        with pytest.raises(ValueError):
            harmonic_sum(1.0, 4, 3)


class TestSampling:
    def test_deterministic_given_seed(self):
        d = zipf_distribution(10, 1.2)
        a = sample_demand_vector(d, 50, np.random.default_rng(42))
        b = sample_demand_vector(d, 50, np.random.default_rng(42))
        assert a == b

    def test_entries_in_range(self):
        d = zipf_distribution(7, 0.6)
        v = sample_demand_vector(d, 200, np.random.default_rng(0))
        assert v.n == 200
        assert all(1 <= f <= 7 for f in v.entries)

    def test_chi_square_goodness_of_fit(self):
        from scipy.stats import chisquare

        d = DemandDistribution(q=(0.5, 0.3, 0.2))
        rng = np.random.default_rng(2024)
        n = 30000
        v = sample_demand_vector(d, n, rng)
        counts = np.bincount(np.array(v.entries) - 1, minlength=3)
        _, pvalue = chisquare(counts, f_exp=np.array(d.q) * n)
        assert pvalue > 1e-4  # fixed seed: deterministic verdict

    def test_zero_mass_file_never_drawn(self):
        d = DemandDistribution(q=(0.6, 0.4, 0.0))
        v = sample_demand_vector(d, 5000, np.random.default_rng(1))
        assert 3 not in v.entries


class TestPrefixMass:
    def test_values(self):
        d = DemandDistribution(q=(0.7, 0.21, 0.09))
        assert prefix_mass(d, 0) == 0.0
        assert prefix_mass(d, 2) == pytest.approx(0.91, abs=1e-15)
        assert prefix_mass(d, 3) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_out_of_range(self):
        d = DemandDistribution(q=(1.0,))
        with pytest.raises(ValueError):
            prefix_mass(d, 2)


def test_demand_vector_needs_a_user():
    with pytest.raises(ValueError):
        DemandVector(entries=())
