"""Propagator correctness: closed forms, oracle agreement, schedules."""

import numpy as np
import pytest

from ctqwalk.hamiltonian import LatticeModel, TridiagonalOperator, build_h, build_h0
from ctqwalk.observables import probabilities
from ctqwalk.propagation import (
    LatticeTooSmallError,
    SeriesTable,
    StaticProtocol,
    SwitchingProtocol,
    WaveState,
    eigen_oracle,
    evolve_interval,
    initial_state,
    run_protocol,
)
from ctqwalk.sequences import BinarySequence, SequenceKind, generate_substitution


def two_site_hamiltonian():
    return TridiagonalOperator(np.zeros(2), np.array([-1.0]), 2.0)


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=n) + 1j * rng.normal(size=n)
    return WaveState(amp / np.linalg.norm(amp))


def word(symbols):
    return BinarySequence(np.asarray(symbols, dtype=np.int8), SequenceKind.PERIODIC)


class TestInitialState:
    def test_localized_at_defect(self):
        m = LatticeModel(n_sites=5)
        st = initial_state(m)
        assert np.array_equal(st.amplitudes, [0, 0, 1, 0, 0])
        assert st.time == 0.0

    def test_custom_site(self):
        m = LatticeModel(n_sites=5)
        st = initial_state(m, site=-2)
        assert st.amplitudes[0] == 1.0

    def test_site_outside_lattice(self):
        with pytest.raises(ValueError):
            initial_state(LatticeModel(n_sites=5), site=3)

    def test_normalization_enforced(self):
        with pytest.raises(ValueError):
            WaveState(np.array([1.0, 1.0]))


class TestEvolveInterval:
    def test_single_site_is_identity(self):
        h = TridiagonalOperator(np.zeros(1), np.zeros(0), 0.0)
        st = WaveState(np.array([1.0 + 0j]))
        out = evolve_interval(st, h, 2.7)
        assert np.array_equal(out.amplitudes, st.amplitudes)
        assert out.time == pytest.approx(2.7)

    def test_two_site_closed_form(self):
        # exp(-iHt) = cos(t) I + i sin(t) X for H with off-diagonal -1
        h = two_site_hamiltonian()
        st = WaveState(np.array([1.0 + 0j, 0.0]))
        for t in (0.3, np.pi / 2, 2.0):
            out = evolve_interval(st, h, t)
            expected = np.array([np.cos(t), 1j * np.sin(t)])
            assert np.allclose(out.amplitudes, expected, atol=1e-10)

    def test_matches_eigen_oracle_large_dt(self):
        m = LatticeModel(n_sites=65)
        h = build_h(m, -2.5)
        st = random_state(65, 3)
        a = evolve_interval(st, h, 3.7)
        b = eigen_oracle(h, 3.7, st)
        assert np.linalg.norm(a.amplitudes - b.amplitudes) < 1e-8

    def test_backend_equivalence_random_draws(self):
        rng = np.random.default_rng(17)
        m = LatticeModel(n_sites=255)
        for _ in range(20):
            beta = rng.uniform(-4, 1)
            dt = rng.uniform(0.1, 8.0)
            h = build_h(m, beta)
            st = random_state(255, rng.integers(1 << 31))
            a = evolve_interval(st, h, dt)
            b = eigen_oracle(h, dt, st)
            assert np.linalg.norm(a.amplitudes - b.amplitudes) < 1e-8

    def test_composition(self):
        m = LatticeModel(n_sites=101)
        h = build_h(m, -3.0)
        st = initial_state(m)
        once = evolve_interval(st, h, 5.5)
        twice = evolve_interval(evolve_interval(st, h, 2.0), h, 3.5)
        assert np.linalg.norm(once.amplitudes - twice.amplitudes) < 1e-10

    def test_norm_preserved(self):
        m = LatticeModel(n_sites=201)
        h = build_h(m, -2.5)
        out = evolve_interval(initial_state(m), h, 40.0)
        assert out.norm_error() < 1e-12

    def test_rejects_nonpositive_dt(self):
        h = two_site_hamiltonian()
        with pytest.raises(ValueError):
            evolve_interval(WaveState(np.array([1.0 + 0j, 0])), h, 0.0)

    def test_global_phase_invariance_of_probabilities(self):
        m0 = LatticeModel(n_sites=65, epsilon=0.0)
        m2 = LatticeModel(n_sites=65, epsilon=2.0)
        st = initial_state(m0)
        a = evolve_interval(st, build_h(m0, -2.5), 4.0)
        b = evolve_interval(st, build_h(m2, -2.5), 4.0)
        assert np.max(np.abs(probabilities(a.amplitudes) - probabilities(b.amplitudes))) < 1e-10


class TestEigenOracle:
    def test_identity_limit(self):
        m = LatticeModel(n_sites=33)
        st = random_state(33, 1)
        out = eigen_oracle(build_h(m, -2.5), 1e-12, st)
        assert np.linalg.norm(out.amplitudes - st.amplitudes) < 1e-9

    def test_unitarity(self):
        m = LatticeModel(n_sites=129)
        out = eigen_oracle(build_h(m, -3.0), 17.3, random_state(129, 2))
        assert out.norm_error() < 1e-12

    def test_two_site_closed_form(self):
        h = two_site_hamiltonian()
        out = eigen_oracle(h, np.pi / 2, WaveState(np.array([1.0 + 0j, 0])))
        assert np.allclose(out.amplitudes, [0, 1j], atol=1e-12)

    def test_size_limit(self):
        m = LatticeModel(n_sites=1025)
        with pytest.raises(ValueError):
            eigen_oracle(build_h0(m), 1.0, initial_state(m))


class TestRunProtocol:
    def test_ballistic_baseline(self):
        """Defect-free spreading is sigma = sqrt(2) * t."""
        m = LatticeModel.sized_for(100.0)
        table = run_protocol(m, StaticProtocol(0.0), 100.0, 10.0)
        for rec in table.records:
            if rec.t >= 20.0:
                assert rec.sigma / rec.t == pytest.approx(np.sqrt(2), rel=5e-3)
        assert table.max_norm_drift < 1e-10

    def test_ballistic_cross_checked_by_eigen_backend(self):
        """Same number out of the independent dense backend at t = 20."""
        m = LatticeModel(n_sites=257)
        st = eigen_oracle(build_h0(m), 20.0, initial_state(m))
        p = probabilities(st.amplitudes)
        s = float(np.sqrt((m.labels() ** 2 * p).sum() - ((m.labels() * p).sum()) ** 2))
        assert s / 20.0 == pytest.approx(np.sqrt(2), rel=5e-3)

    def test_switching_schedule(self):
        """tau=5, t_max=12, word 101: beta1 on [0,5), beta2 on [5,10), beta1 on [10,12]."""
        m = LatticeModel.sized_for(12.0)
        proto = SwitchingProtocol(word([1, 0, 1]), tau=5.0)
        table = run_protocol(m, proto, 12.0, sample_every=12.0)
        st = initial_state(m)
        st = eigen_oracle(build_h(m, proto.beta1), 5.0, st)
        st = eigen_oracle(build_h(m, proto.beta2), 5.0, st)
        st = eigen_oracle(build_h(m, proto.beta1), 2.0, st)
        p = probabilities(st.amplitudes)
        labels = m.labels()
        sig = float(np.sqrt((labels**2 * p).sum() - ((labels * p).sum()) ** 2))
        assert table.final().t == pytest.approx(12.0)
        assert table.final().sigma == pytest.approx(sig, abs=1e-9)

    def test_equal_intensities_match_static_run(self):
        m = LatticeModel.sized_for(50.0)
        seq = generate_substitution(SequenceKind.THUE_MORSE, 100)
        proto = SwitchingProtocol(seq, tau=0.5, beta1=-2.5, beta2=-2.5)
        switched = run_protocol(m, proto, 50.0, 5.0)
        static = run_protocol(m, StaticProtocol(-2.5), 50.0, 5.0)
        for a, b in zip(switched.records, static.records):
            assert a.sigma == pytest.approx(b.sigma, abs=1e-10)
            assert a.entropy == pytest.approx(b.entropy, abs=1e-10)
            assert a.ipr == pytest.approx(b.ipr, abs=1e-10)

    def test_sequence_too_short(self):
        m = LatticeModel.sized_for(12.0)
        proto = SwitchingProtocol(word([1, 0]), tau=5.0)
        with pytest.raises(ValueError, match="too short"):
            run_protocol(m, proto, 12.0, 6.0)

    def test_sample_grid_includes_origin_and_end(self):
        m = LatticeModel.sized_for(10.0)
        table = run_protocol(m, StaticProtocol(0.0), 10.0, 3.0)
        assert [r.t for r in table.records] == pytest.approx([0.0, 3.0, 6.0, 9.0, 10.0])
        table = run_protocol(m, StaticProtocol(0.0), 10.0, 50.0)
        assert [r.t for r in table.records] == pytest.approx([0.0, 10.0])

    def test_t_zero_record_is_localized(self):
        m = LatticeModel.sized_for(5.0)
        rec = run_protocol(m, StaticProtocol(-2.5), 5.0, 5.0).records[0]
        assert rec.sigma == 0.0
        assert rec.entropy == 0.0
        assert rec.ipr == pytest.approx(1.0)

    def test_reflection_symmetry_about_defect(self):
        """Centered defect keeps the distribution even: mean stays at 0."""
        m = LatticeModel.sized_for(40.0)
        seq = generate_substitution(SequenceKind.FIBONACCI, 50)
        table = run_protocol(m, SwitchingProtocol(seq, tau=1.0), 40.0, 8.0)
        assert table.final().sigma > 0

    def test_lattice_too_small_names_required_size(self):
        m = LatticeModel(n_sites=41)
        with pytest.raises(LatticeTooSmallError) as err:
            run_protocol(m, StaticProtocol(0.0), 50.0, 5.0)
        assert err.value.required > 41

    def test_tau_grid_alignment_with_finer_sampling(self):
        """Samples inside an interval split it exactly, not approximately."""
        m = LatticeModel.sized_for(9.0)
        proto = SwitchingProtocol(word([1, 0, 1]), tau=3.0)
        fine = run_protocol(m, proto, 9.0, sample_every=1.0)
        coarse = run_protocol(m, proto, 9.0, sample_every=9.0)
        assert fine.final().sigma == pytest.approx(coarse.final().sigma, abs=1e-10)

    def test_series_table_accessors(self):
        m = LatticeModel.sized_for(10.0)
        table = run_protocol(m, StaticProtocol(0.0), 10.0, 5.0, label="free")
        assert table.protocol == "free"
        assert table.tau is None and table.seed is None
        assert table.times().tolist() == pytest.approx([0.0, 5.0, 10.0])
        assert table.column("sigma").shape == (3,)
        assert isinstance(table, SeriesTable)


class TestParitySymmetry:
    def test_probabilities_mirror(self):
        m = LatticeModel.sized_for(30.0)
        seq = generate_substitution(SequenceKind.THUE_MORSE, 40)
        proto = SwitchingProtocol(seq, tau=1.5)
        st = initial_state(m)
        for beta, dt in [(proto.beta_of(s), proto.tau) for s in seq.symbols[:20]]:
            st = evolve_interval(st, build_h(m, beta), dt)
        p = probabilities(st.amplitudes)
        assert np.max(np.abs(p - p[::-1])) < 1e-10
        assert abs(float(m.labels() @ p)) < 1e-8
