import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from codedcache.errors import ConstraintViolation
from codedcache.placement import (
    CacheConfiguration,
    CachingDistribution,
    SystemParams,
    rlfu_distribution,
    sample_cache_configuration,
    validate_caching_distribution,
)


class TestSystemParams:
    def test_valid(self):
        p = SystemParams(n=3, m=3, M=1.0, B=3)
        assert p.packet_bits == 512

    @pytest.mark.parametrize(
        "kw",
        [
            dict(n=0, m=3, M=1.0, B=3),
            dict(n=3, m=0, M=1.0, B=3),
            dict(n=3, m=3, M=-0.5, B=3),
            dict(n=3, m=3, M=3.5, B=3),
            dict(n=3, m=3, M=1.0, B=0),
            dict(n=3, m=3, M=1.0, B=3, packet_bits=12),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SystemParams(**kw)


class TestRlfuDistribution:
    def test_uniform_cutoff(self):
        p = rlfu_distribution(3, 1.0, 3)
        assert p.p == (1 / 3, 1 / 3, 1 / 3)

    def test_truncated(self):
        p = rlfu_distribution(5, 1.0, 2)
        assert p.p == (0.5, 0.5, 0.0, 0.0, 0.0)

    def test_cutoff_below_capacity_rejected(self):
        with pytest.raises(ValueError):
            rlfu_distribution(5, 3.0, 2)  # p_f = 1/2 > 1/3

    def test_cutoff_above_library_rejected(self):
        with pytest.raises(ValueError):
            rlfu_distribution(3, 1.0, 4)


class TestValidation:
    def test_cap_enforced(self):
        p = CachingDistribution(p=(0.5, 0.5, 0.0))
        with pytest.raises(ConstraintViolation) as exc:
            validate_caching_distribution(p, 3.0)
        assert exc.value.index in (1, 2)

    def test_small_m_always_passes(self):
        validate_caching_distribution(CachingDistribution(p=(1.0,)), 1.0)

    @given(st.integers(min_value=1, max_value=8), st.floats(0.0, 4.0))
    def test_rlfu_family_always_feasible(self, m, M):
        M = min(M, m)
        import math

        lo = max(math.ceil(M), 1)
        for mt in range(lo, m + 1):
            validate_caching_distribution(rlfu_distribution(m, M, mt), M)


class TestSampling:
    def test_counts_match_rounded_fraction(self):
        params = SystemParams(n=4, m=3, M=1.0, B=12)
        p = CachingDistribution(p=(0.5, 0.3, 0.2))
        C = sample_cache_configuration(p, params, np.random.default_rng(0))
        for u in range(1, 5):
            assert len(C.cached(u, 1)) == 6
            assert len(C.cached(u, 2)) == 4  # round(0.3 * 12)
            assert len(C.cached(u, 3)) == 2

    def test_indices_sorted_distinct_in_range(self):
        params = SystemParams(n=3, m=2, M=1.0, B=20)
        p = CachingDistribution(p=(0.6, 0.4))
        C = sample_cache_configuration(p, params, np.random.default_rng(7))
        for u in range(1, 4):
            for f in range(1, 3):
                idx = C.cached(u, f)
                assert list(idx) == sorted(set(idx))
                assert all(1 <= i <= 20 for i in idx)

    def test_deterministic_given_seed(self):
        params = SystemParams(n=2, m=2, M=1.0, B=10)
        p = CachingDistribution(p=(0.5, 0.5))
        a = sample_cache_configuration(p, params, np.random.default_rng(3))
        b = sample_cache_configuration(p, params, np.random.default_rng(3))
        assert a == b

    def test_full_file_cached_when_pfM_is_one(self):
        params = SystemParams(n=2, m=2, M=1.0, B=5)
        p = CachingDistribution(p=(1.0, 0.0))
        C = sample_cache_configuration(p, params, np.random.default_rng(0))
        assert C.cached(1, 1) == (1, 2, 3, 4, 5)
        assert C.cached(1, 2) == ()

    def test_mismatched_library_rejected(self):
        params = SystemParams(n=2, m=3, M=1.0, B=5)
        with pytest.raises(ValueError):
            sample_cache_configuration(
                CachingDistribution(p=(0.5, 0.5)), params, np.random.default_rng(0)
            )


class TestTextFormat:
    def test_round_trip(self):
        params = SystemParams(n=3, m=3, M=1.0, B=6)
        p = CachingDistribution(p=(0.5, 0.5, 0.0))
        C = sample_cache_configuration(p, params, np.random.default_rng(11))
        again = CacheConfiguration.from_text(C.to_text(), B=6)
        assert again == C

    def test_golden_layout(self):
        C = CacheConfiguration(
            entries=(((1, 2), (1,), ()), ((1, 3), (2,), ())), B=3
        )
        assert C.to_text() == (
            "1 1 1,2\n1 2 1\n1 3\n2 1 1,3\n2 2 2\n2 3\n"
        )

    def test_empty_cache_line_parses(self):
        C = CacheConfiguration.from_text("1 1\n1 2 3\n", B=3)
        assert C.cached(1, 1) == ()
        assert C.cached(1, 2) == (3,)

    def test_bad_line_reports_line_number(self):
        with pytest.raises(ValueError, match="line 2"):
            CacheConfiguration.from_text("1 1 1\nnot a line\n", B=3)

    def test_cache_matrix(self):
        C = CacheConfiguration(entries=(((1, 3), ()),), B=3)
        mat = C.cache_matrix(1)
        assert mat.tolist() == [[True, False, True]]
        assert C.cache_matrix(2).any() == False  # noqa: E712
