import numpy as np
import pytest

from motc.bench import build_model_system, build_thermal_state, sample_random_field
from motc.dynamics import (
    ControlField,
    QuantumSystem,
    StateSpec,
    expectations,
    free_evolution_final,
    propagate,
    pure_state,
    zero_field,
)
from motc.landscape import ObservableSet


class TestTypes:
    def test_system_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimensions differ"):
            QuantumSystem(h0=np.eye(3), mu=np.eye(4))

    def test_system_grid(self):
        sys_ = build_model_system(11, t_final=10.0, q=101)
        assert np.isclose(sys_.dt, 0.1)
        assert sys_.times[0] == 0.0 and sys_.times[-1] == 10.0
        w = sys_.quadrature_weights
        assert np.isclose(w.sum(), 10.0)
        assert w[0] == w[-1] == sys_.dt / 2

    def test_field_validation(self):
        with pytest.raises(ValueError, match="finite"):
            ControlField(np.array([0.0, np.inf]))

    def test_state_metadata(self):
        rho = np.diag([0.5, 0.3, 0.2, 0.0])
        st = StateSpec.from_density(rho)
        assert (st.rank, st.distinct_count, st.degeneracies) == (3, 3, (1, 1, 1))

    def test_state_degenerate_metadata(self):
        rho = np.diag([0.25, 0.25, 0.5, 0.0])
        st = StateSpec.from_density(rho)
        assert st.rank == 3
        assert sorted(st.degeneracies) == [1, 2]

    def test_state_trace_enforced(self):
        with pytest.raises(ValueError, match="trace"):
            StateSpec.from_density(np.diag([0.5, 0.4]))

    def test_state_psd_enforced(self):
        with pytest.raises(ValueError, match="semidefinite"):
            StateSpec.from_density(np.diag([1.5, -0.5]))

    def test_declared_metadata_checked(self):
        with pytest.raises(ValueError, match="rank"):
            StateSpec(rho0=np.diag([0.5, 0.5]), rank=1, distinct_count=1, degeneracies=(1,))


class TestPropagate:
    def test_free_evolution_diagonal(self):
        sys_ = build_model_system(11, t_final=10.0, q=64)
        prop = propagate(sys_, zero_field(sys_))
        expected = np.diag(np.exp(-1j * 10.0 * np.diag(sys_.h0).real))
        assert np.linalg.norm(prop.final - expected) < 1e-10
        assert np.linalg.norm(prop.final - free_evolution_final(sys_)) < 1e-10

    def test_unitarity_all_steps(self, small_system, small_field):
        prop = propagate(small_system, small_field)
        n = small_system.dim
        for u in prop.cumulative[:: max(1, small_system.q // 16)]:
            assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 1e-9
        assert np.allclose(prop.cumulative[0], np.eye(n))

    def test_evolved_dipole_hermitian(self, small_system, small_field):
        prop = propagate(small_system, small_field)
        dev = np.abs(prop.evolved_dipole - prop.evolved_dipole.conj().transpose(0, 2, 1)).max()
        assert dev <= 1e-10
        dev = np.abs(
            prop.evolved_dipole_step - prop.evolved_dipole_step.conj().transpose(0, 2, 1)
        ).max()
        assert dev <= 1e-10

    def test_length_mismatch(self, small_system):
        with pytest.raises(ValueError, match="samples"):
            propagate(small_system, ControlField(np.zeros(small_system.q + 1)))

    def test_composition_of_half_intervals(self):
        # Propagating [0, T] equals [0, T/2] then [T/2, T] on the same grid.
        sys_full = build_model_system(5, t_final=8.0, q=17)
        field = sample_random_field(sys_full, np.random.default_rng(0))
        full = propagate(sys_full, field).final
        sys_half = build_model_system(5, t_final=4.0, q=9)
        u1 = propagate(sys_half, ControlField(field.samples[:9])).final
        u2 = propagate(sys_half, ControlField(field.samples[8:])).final
        assert np.linalg.norm(u2 @ u1 - full) < 1e-12

    def test_first_order_grid_convergence(self):
        # Error against a much finer reference halves when q-1 doubles.
        t_final = 20.0
        ref_sys = build_model_system(11, t_final=t_final, q=16 * 1024 + 1)
        rng_field = lambda sys_: sample_random_field(sys_, np.random.default_rng(9))
        u_ref = propagate(ref_sys, rng_field(ref_sys)).final
        errs = []
        for q in (257, 513, 1025):
            sys_ = build_model_system(11, t_final=t_final, q=q)
            errs.append(np.linalg.norm(propagate(sys_, rng_field(sys_)).final - u_ref))
        ratios = [errs[i] / errs[i + 1] for i in range(2)]
        for r in ratios:
            assert 1.7 < r < 2.4, f"first-order convergence violated: ratios {ratios}"

    def test_last_sample_never_enters(self, small_system, small_field):
        bumped = small_field.samples.copy()
        bumped[-1] += 123.0
        p1 = propagate(small_system, small_field)
        p2 = propagate(small_system, ControlField(bumped))
        assert np.allclose(p1.final, p2.final)


class TestExpectations:
    def test_projector_on_own_state(self):
        sys_ = build_model_system(4, t_final=1.0, q=8)
        prop = propagate(sys_, zero_field(sys_))
        st = pure_state(4, 0)
        proj = np.zeros((4, 4), dtype=complex)
        proj[0, 0] = 1.0
        # Free evolution only adds a phase to the eigenstate.
        val = expectations(prop, st, ObservableSet(proj))
        assert np.isclose(val[0], 1.0)

    def test_identity_observable(self, small_system, small_field, thermal_state):
        prop = propagate(small_system, small_field)
        val = expectations(prop, thermal_state, ObservableSet(np.eye(11)))
        assert np.isclose(val[0], 1.0, atol=1e-10)

    def test_commuting_free_evolution(self, small_system, thermal_state, observable_set):
        # eps = 0 and diagonal Theta_1: expectation is sum_k lambda_k Theta_kk.
        prop = propagate(small_system, zero_field(small_system))
        val = expectations(prop, thermal_state, observable_set.subset(1))
        lam = np.diag(thermal_state.rho0).real
        th = np.diag(observable_set.operators[0]).real
        assert np.isclose(val[0], lam @ th, atol=1e-12)

    def test_trace_preserved(self, small_system, small_field, thermal_state):
        prop = propagate(small_system, small_field)
        rho_t = prop.final @ thermal_state.rho0 @ prop.final.conj().T
        assert abs(np.trace(rho_t).real - 1.0) <= 1e-10

    def test_spectrum_preserved(self, small_system, small_field, rank7_state):
        prop = propagate(small_system, small_field)
        rho_t = prop.final @ rank7_state.rho0 @ prop.final.conj().T
        before = np.sort(np.linalg.eigvalsh(rank7_state.rho0))
        after = np.sort(np.linalg.eigvalsh(rho_t))
        assert np.abs(before - after).max() <= 1e-8


class TestBuilders:
    def test_model_system_matrix_entries(self):
        sys_ = build_model_system(11)
        h0 = sys_.h0
        mu = sys_.mu
        assert np.isclose(h0[0, 0].real, 0.1)
        assert np.isclose(h0[10, 10].real, 1.1)
        assert np.isclose(mu[0, 1].real, 0.15)
        assert np.isclose(mu[0, 2].real, 0.08)
        assert mu[0, 3] == 0.0
        assert np.allclose(np.diag(mu), 1.0)
        assert np.allclose(mu, mu.conj().T)

    def test_model_system_minimum_dimension(self):
        with pytest.raises(ValueError, match="dimension 3"):
            build_model_system(2)

    def test_random_field_mode_count_and_t0(self):
        sys_ = build_model_system(11, t_final=10.0, q=64)
        rng = np.random.default_rng(3)
        field = sample_random_field(sys_, rng)
        # Reproduce eps(0) = sum A_ij sin(phi_ij) from the same stream.
        rng2 = np.random.default_rng(3)
        energies = np.diag(sys_.h0).real
        iu, ju = np.triu_indices(11, 1)
        assert iu.size == 55  # C(11, 2) modes
        amps = 1.0 - rng2.uniform(0, 1, 55)
        phases = 2 * np.pi * (1.0 - rng2.uniform(0, 1, 55))
        assert np.isclose(field.samples[0], (amps * np.sin(phases)).sum())

    def test_random_field_deterministic(self, small_system):
        f1 = sample_random_field(small_system, np.random.default_rng(11))
        f2 = sample_random_field(small_system, np.random.default_rng(11))
        assert np.array_equal(f1.samples, f2.samples)

    def test_thermal_state(self, small_system):
        st = build_thermal_state(small_system, 1.0)
        lam = np.diag(st.rho0).real
        assert np.isclose(np.trace(st.rho0).real, 1.0, atol=1e-12)
        assert np.isclose(lam[0] / lam[1], np.exp(0.1))
        assert st.rank == 11 and st.degeneracies == (1,) * 11

    def test_thermal_infinite_temperature_limit(self, small_system):
        st = build_thermal_state(small_system, 1e9)
        assert np.abs(st.rho0 - np.eye(11) / 11).max() < 1e-9

    def test_thermal_rejects_nonpositive_temperature(self, small_system):
        with pytest.raises(ValueError, match="positive"):
            build_thermal_state(small_system, 0.0)
