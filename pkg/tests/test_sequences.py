"""Sequence generation and metric oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctqwalk.sequences import (
    BinarySequence,
    DegenerateSequenceError,
    SequenceKind,
    autocorrelation,
    binary_persistence,
    characterize,
    generate,
    generate_random,
    generate_substitution,
    relative_persistence,
)

DET_KINDS = [
    SequenceKind.PERIODIC,
    SequenceKind.FIBONACCI,
    SequenceKind.THUE_MORSE,
    SequenceKind.RUDIN_SHAPIRO,
]


def word(symbols) -> BinarySequence:
    """Ad-hoc word for metric tests (provenance irrelevant)."""
    return BinarySequence(np.asarray(symbols, dtype=np.int8), SequenceKind.RANDOM, seed=0)


binary_words = st.lists(st.sampled_from([0, 1]), min_size=1, max_size=200)


class TestGeneration:
    @pytest.mark.parametrize(
        "kind,length,expected",
        [
            (SequenceKind.FIBONACCI, 5, "01001"),
            (SequenceKind.THUE_MORSE, 8, "01101001"),
            (SequenceKind.RUDIN_SHAPIRO, 8, "00010010"),
            (SequenceKind.PERIODIC, 6, "101010"),
        ],
    )
    def test_substitution_prefixes(self, kind, length, expected):
        assert generate_substitution(kind, length).to_string() == expected

    def test_periodic_start_symbol_option(self):
        assert generate_substitution(SequenceKind.PERIODIC, 5, periodic_start=0).to_string() == "01010"

    def test_zero_length_rejected(self):
        with pytest.raises(ValueError):
            generate_substitution(SequenceKind.FIBONACCI, 0)
        with pytest.raises(ValueError):
            generate_random(seed=1, length=0)

    @pytest.mark.parametrize("kind", DET_KINDS)
    def test_prefix_stability(self, kind):
        """Generating a longer word never rewrites the shorter prefix."""
        short = generate_substitution(kind, 37).symbols
        long = generate_substitution(kind, 1000).symbols
        assert np.array_equal(long[:37], short)

    def test_random_determinism(self):
        a = generate_random(seed=7, length=10**5)
        b = generate_random(seed=7, length=10**5)
        assert np.array_equal(a.symbols, b.symbols)
        assert a.seed == 7

    def test_random_seeds_differ(self):
        a = generate_random(seed=7, length=10**5)
        b = generate_random(seed=8, length=10**5)
        assert not np.array_equal(a.symbols, b.symbols)

    def test_random_is_fair(self):
        a = generate_random(seed=7, length=10**5)
        assert abs(a.symbols.mean() - 0.5) < 0.01

    def test_generate_dispatch(self):
        assert generate(SequenceKind.FIBONACCI, 5).to_string() == "01001"
        assert generate(SequenceKind.RANDOM, 9, seed=3).seed == 3
        with pytest.raises(ValueError):
            generate(SequenceKind.RANDOM, 9)

    def test_seed_provenance_enforced(self):
        with pytest.raises(ValueError):
            BinarySequence(np.array([0, 1], dtype=np.int8), SequenceKind.RANDOM)
        with pytest.raises(ValueError):
            BinarySequence(np.array([0, 1], dtype=np.int8), SequenceKind.FIBONACCI, seed=4)

    def test_symbols_validated_and_frozen(self):
        with pytest.raises(ValueError):
            word([0, 2, 1])
        w = word([0, 1, 1])
        with pytest.raises(ValueError):
            w.symbols[0] = 1


class TestAutocorrelation:
    def test_alternating_is_anticorrelated(self):
        seq = generate_substitution(SequenceKind.PERIODIC, 100)
        assert autocorrelation(seq, 1) == pytest.approx(-1.0)

    def test_period_four_at_lag_four(self):
        seq = word(list("00110011" * 12))
        assert autocorrelation(seq, 4) == pytest.approx(1.0)

    def test_random_lag3_decorrelates(self):
        vals = [autocorrelation(generate_random(seed=s, length=10**5), 3) for s in range(20)]
        assert abs(np.mean(vals)) < 0.01

    def test_constant_window_rejected(self):
        with pytest.raises(DegenerateSequenceError):
            autocorrelation(word([1, 1, 1, 1, 1]), 2)

    def test_lag_bounds(self):
        seq = word([0, 1, 0, 1])
        with pytest.raises(ValueError):
            autocorrelation(seq, 0)
        with pytest.raises(ValueError):
            autocorrelation(seq, 3)

    @given(binary_words.filter(lambda w: len(w) >= 4), st.integers(1, 5))
    @settings(max_examples=60)
    def test_range(self, symbols, k):
        if k > len(symbols) - 2:
            k = len(symbols) - 2
        try:
            r = autocorrelation(word(symbols), k)
        except DegenerateSequenceError:
            return
        assert -1.0 - 1e-12 <= r <= 1.0 + 1e-12


class TestPersistence:
    def test_periodic_closed_form(self):
        seq = word([0, 1, 0, 1, 0, 1, 0, 1])
        assert binary_persistence(seq, 1) == 1.0
        for m in range(2, 8):
            assert binary_persistence(seq, m) == 0.0

    def test_counted_blocks(self):
        # 00110: blocks of 2 are 00, 01, 11, 10
        assert binary_persistence(word([0, 0, 1, 1, 0]), 2) == pytest.approx(0.5)

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            binary_persistence(word([0, 1]), 3)
        with pytest.raises(ValueError):
            binary_persistence(word([0, 1]), 0)

    def test_relative_persistence_examples(self):
        assert relative_persistence(word([0, 1] * 4), 2) == pytest.approx(-0.5)
        for kind in DET_KINDS:
            assert relative_persistence(generate_substitution(kind, 64), 1) == 0.0

    def test_random_matches_coin_expectation(self):
        seq = generate_random(seed=11, length=10**6)
        assert abs(relative_persistence(seq, 3)) < 0.005
        for m in range(1, 7):
            assert abs(binary_persistence(seq, m) - 0.5 ** (m - 1)) < 0.005

    @given(binary_words)
    @settings(max_examples=80)
    def test_bp_bounds_and_monotone(self, symbols):
        """BP(1) = 1, BP in [0, 1], and BP never increases with the order."""
        seq = word(symbols)
        prev = binary_persistence(seq, 1)
        assert prev == 1.0
        for m in range(2, min(len(symbols), 8) + 1):
            cur = binary_persistence(seq, m)
            assert 0.0 <= cur <= 1.0
            assert cur <= prev + 1e-12
            prev = cur

    @given(binary_words, st.integers(1, 6))
    @settings(max_examples=60)
    def test_rp_identity(self, symbols, m):
        seq = word(symbols)
        if m > len(symbols):
            m = len(symbols)
        assert relative_persistence(seq, m) == pytest.approx(
            binary_persistence(seq, m) - 2.0 ** (1 - m), abs=1e-15
        )


class TestHierarchy:
    """Orderings that separate the switching protocols, at length 1e4."""

    L = 10**4

    def test_autocorrelation_hierarchy(self):
        ac = {
            kind: abs(autocorrelation(generate_substitution(kind, self.L), 1))
            for kind in DET_KINDS
        }
        assert ac[SequenceKind.PERIODIC] > ac[SequenceKind.FIBONACCI]
        assert ac[SequenceKind.FIBONACCI] > ac[SequenceKind.THUE_MORSE]
        rd_mean = np.mean(
            [abs(autocorrelation(generate_random(seed=s, length=self.L), 1)) for s in range(50)]
        )
        assert abs(ac[SequenceKind.RUDIN_SHAPIRO] - rd_mean) < 0.02

    def test_relative_persistence_hierarchy_deterministic_links(self):
        rp = {
            kind: abs(relative_persistence(generate_substitution(kind, self.L), 2))
            for kind in DET_KINDS
        }
        assert (
            rp[SequenceKind.PERIODIC]
            > rp[SequenceKind.FIBONACCI]
            > rp[SequenceKind.THUE_MORSE]
            > rp[SequenceKind.RUDIN_SHAPIRO]
            > 0.0
        )

    def test_rudin_shapiro_separates_from_random_at_order_four(self):
        """RS pair counts are balanced to O(1), so its persistence structure
        first shows at m = 4 (RP = -1/16), far outside random noise."""
        rs = abs(relative_persistence(generate_substitution(SequenceKind.RUDIN_SHAPIRO, self.L), 4))
        rd = abs(
            np.mean(
                [relative_persistence(generate_random(seed=s, length=self.L), 4) for s in range(50)]
            )
        )
        assert rs == pytest.approx(1 / 16, abs=1e-3)
        assert rs > 10 * rd


def test_characterize_bundles_metrics():
    seq = generate_substitution(SequenceKind.THUE_MORSE, 512)
    m = characterize(seq, max_lag=3, max_order=4)
    assert set(m.ac) == {1, 2, 3}
    assert set(m.bp) == set(m.rp) == {1, 2, 3, 4}
    for order, bp in m.bp.items():
        assert m.rp[order] == pytest.approx(bp - 2.0 ** (1 - order))
