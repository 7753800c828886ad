import numpy as np
import pytest

from bosefold import (
    GateSequence,
    ModeSet,
    NonOrthonormalModesError,
    PhaseGate,
    RotationGate,
    apply_mode_polynomial,
    enumerate_basis,
    fold,
    gates_from_json,
    gates_to_json,
    overlap,
    random_mode_set,
    to_dense,
    unfold_gate_order,
    unfold_to_mps,
)


def replay_fold(modeset, sequence):
    """Re-apply the recorded gates to the coefficient matrix, independently of
    the production loop, collecting diagnostics after every elementary step."""
    work = np.array(modeset.coefficients, dtype=complex)
    gram0 = work.conj().T @ work
    gram_drift = 0.0
    zeroed = []
    tangent_residuals = []
    for gate in sequence.gates:
        if isinstance(gate, PhaseGate):
            work[gate.site - 1, :] *= np.exp(-1j * gate.angle)
        else:
            j0 = gate.bond - 1
            lower = abs(work[j0, gate.mode - 1])
            upper = abs(work[j0 + 1, gate.mode - 1])
            if lower > 0.0:
                tangent_residuals.append(
                    abs(np.tan(gate.angle / 2.0) * lower - upper)
                )
            c, s = np.cos(gate.angle / 2.0), np.sin(gate.angle / 2.0)
            top = work[j0 + 1, :].copy()
            work[j0 + 1, :] = c * top - s * work[j0, :]
            work[j0, :] = s * top + c * work[j0, :]
            zeroed.append(abs(work[j0 + 1, gate.mode - 1]))
        gram = work.conj().T @ work
        gram_drift = max(gram_drift, float(np.abs(gram - gram0).max()))
    return work, gram_drift, zeroed, tangent_residuals


class TestFold:
    def test_equal_superposition_two_sites(self):
        root = 1.0 / np.sqrt(2.0)
        seq = fold(ModeSet(2, (2,), [[root], [root]]))
        phases = seq.phases()
        rotations = seq.rotations()
        assert [p.angle for p in phases] == [0.0, 0.0]
        assert len(rotations) == 1
        assert rotations[0].bond == 1
        assert rotations[0].angle == pytest.approx(np.pi / 2, abs=1e-15)
        assert seq.residual_occupations == (2,)

    def test_already_localized_mode(self):
        seq = fold(ModeSet(3, (1,), [[1.0], [0.0], [0.0]]))
        assert all(g.angle == 0.0 for g in seq.gates)

    def test_boson_pulled_from_far_site(self):
        seq = fold(ModeSet(2, (1,), [[0.0], [1.0]]))
        assert seq.rotations()[0].angle == pytest.approx(np.pi, abs=1e-15)

    def test_replay_reaches_identity_embedding(self):
        rng = np.random.default_rng(101)
        modeset = random_mode_set(rng, 5, 3, 4)
        seq = fold(modeset)
        work, gram_drift, zeroed, tangent = replay_fold(modeset, seq)
        embedded = np.zeros((5, 3), dtype=complex)
        embedded[:3, :3] = np.eye(3)
        assert np.abs(work - embedded).max() <= 1e-10
        assert gram_drift <= 1e-10
        assert max(zeroed) <= 1e-12
        assert max(tangent) <= 1e-10

    def test_gate_counts(self):
        rng = np.random.default_rng(103)
        n, n_modes = 5, 3
        seq = fold(random_mode_set(rng, n, n_modes, 3))
        assert len(seq.rotations()) == sum(n - k for k in range(1, n_modes + 1))
        assert len(seq.phases()) == sum(n - k + 1 for k in range(1, n_modes + 1))

    def test_block_structure(self):
        rng = np.random.default_rng(107)
        n, n_modes = 4, 2
        seq = fold(random_mode_set(rng, n, n_modes, 2))
        for k in range(1, n_modes + 1):
            block_rot = [g.bond for g in seq.rotations() if g.mode == k]
            assert sorted(block_rot) == list(range(k, n))
            block_phase = [g.site for g in seq.phases() if g.mode == k]
            assert sorted(block_phase) == list(range(k, n + 1))

    def test_angle_ranges(self):
        rng = np.random.default_rng(109)
        seq = fold(random_mode_set(rng, 6, 4, 4))
        for g in seq.rotations():
            assert 0.0 <= g.angle <= np.pi
        for g in seq.phases():
            assert -np.pi < g.angle <= np.pi

    def test_rejects_nonorthonormal_modes(self):
        skewed = ModeSet(2, (1, 1), [[1.0, 0.6], [0.0, 0.8]], tol=10.0)
        with pytest.raises(NonOrthonormalModesError):
            fold(skewed)

    def test_input_not_mutated(self):
        rng = np.random.default_rng(113)
        modeset = random_mode_set(rng, 4, 2, 3)
        before = modeset.coefficients.copy()
        fold(modeset)
        assert np.array_equal(modeset.coefficients, before)


class TestUnfoldOrder:
    def test_single_mode_single_rotation(self):
        seq = GateSequence(
            2,
            2,
            (
                PhaseGate(site=1, angle=0.0, mode=1),
                PhaseGate(site=2, angle=0.0, mode=1),
                RotationGate(bond=1, angle=np.pi / 2, mode=1),
            ),
            (2,),
        )
        ordered = unfold_gate_order(seq)
        assert isinstance(ordered[0], RotationGate)
        assert ordered[0].bond == 1
        assert ordered[0].angle == pytest.approx(np.pi / 2)

    def test_two_modes_three_sites_block_order(self):
        gates = (
            # folding order: mode 1 phases 1..3, rotations 2, 1; mode 2
            # phases 2..3, rotation 2
            PhaseGate(site=1, angle=0.1, mode=1),
            PhaseGate(site=2, angle=0.2, mode=1),
            PhaseGate(site=3, angle=0.3, mode=1),
            RotationGate(bond=2, angle=0.4, mode=1),
            RotationGate(bond=1, angle=0.5, mode=1),
            PhaseGate(site=2, angle=0.6, mode=2),
            PhaseGate(site=3, angle=0.7, mode=2),
            RotationGate(bond=2, angle=0.8, mode=2),
        )
        seq = GateSequence(3, 2, gates, (1, 1))
        ordered = unfold_gate_order(seq)
        kinds = [
            (type(g).__name__, g.mode, g.bond if isinstance(g, RotationGate) else g.site)
            for g in ordered
        ]
        assert kinds == [
            ("RotationGate", 2, 2),
            ("PhaseGate", 2, 2),
            ("PhaseGate", 2, 3),
            ("RotationGate", 1, 1),
            ("RotationGate", 1, 2),
            ("PhaseGate", 1, 1),
            ("PhaseGate", 1, 2),
            ("PhaseGate", 1, 3),
        ]

    def test_empty_sequence(self):
        seq = GateSequence(1, 3, (), (3,))
        assert unfold_gate_order(seq) == []


class TestUnfoldToMps:
    def test_binomial_state(self):
        root = 1.0 / np.sqrt(2.0)
        modeset = ModeSet(2, (2,), [[root], [root]])
        state = unfold_to_mps(fold(modeset))
        dense = to_dense(state)
        # basis order (0,2), (1,1), (2,0)
        assert np.allclose(dense.amplitudes, [0.5, root, 0.5], atol=1e-12)

    def test_trivial_single_site_chain(self):
        seq = GateSequence(1, 3, (), (3,))
        state = unfold_to_mps(seq)
        dense = to_dense(state)
        assert np.allclose(dense.amplitudes, [1.0], atol=0)
        assert state.bond_dimensions() == []

    def test_matches_oracle_construction(self):
        rng = np.random.default_rng(127)
        modeset = random_mode_set(rng, 4, 2, 2)
        state = unfold_to_mps(fold(modeset))
        basis = enumerate_basis(4, 2)
        reference = apply_mode_polynomial(modeset, basis)
        assert 1.0 - abs(overlap(state, reference)) ** 2 <= 1e-10

    @pytest.mark.parametrize("seed", range(30))
    def test_roundtrip_random_sweep(self, seed):
        rng = np.random.default_rng(1000 + seed)
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, 5))
        n_modes = int(rng.integers(1, min(n, m) + 1))
        modeset = random_mode_set(rng, n, n_modes, m)
        state = unfold_to_mps(fold(modeset))
        reference = apply_mode_polynomial(modeset, enumerate_basis(n, m))
        assert 1.0 - abs(overlap(state, reference)) ** 2 <= 1e-10

    def test_chi_cap_respected(self):
        rng = np.random.default_rng(131)
        modeset = random_mode_set(rng, 5, 3, 4)
        state = unfold_to_mps(fold(modeset), chi_cap=3)
        assert state.max_bond_dimension() <= 3


class TestSerialization:
    def test_json_roundtrip(self):
        rng = np.random.default_rng(137)
        seq = fold(random_mode_set(rng, 4, 2, 3))
        text = gates_to_json(seq)
        loaded = gates_from_json(text)
        assert loaded.n_sites == seq.n_sites
        assert loaded.n_bosons == seq.n_bosons
        assert loaded.residual_occupations == seq.residual_occupations
        assert loaded.gates == seq.gates

    def test_angles_written_with_17_digits(self):
        seq = GateSequence(
            2, 1, (RotationGate(bond=1, angle=np.pi / 2, mode=1),), (1,)
        )
        text = gates_to_json(seq)
        assert format(np.pi / 2, ".17g") in text

    def test_schema_fields(self):
        import json

        seq = GateSequence(
            2,
            1,
            (PhaseGate(site=2, angle=-0.25, mode=1),),
            (1,),
        )
        doc = json.loads(gates_to_json(seq))
        assert set(doc) == {"n_sites", "n_bosons", "residual_occupations", "gates"}
        assert doc["gates"][0] == {
            "kind": "phase",
            "site": 2,
            "angle": -0.25,
            "mode": 1,
        }


class TestGateSequenceValidation:
    def test_residual_sum_must_match(self):
        with pytest.raises(ValueError):
            GateSequence(2, 3, (), (1, 1))

    def test_rotation_angle_range_enforced(self):
        with pytest.raises(ValueError):
            GateSequence(2, 1, (RotationGate(bond=1, angle=4.0, mode=1),), (1,))

    def test_bond_range_enforced(self):
        with pytest.raises(ValueError):
            GateSequence(2, 1, (RotationGate(bond=2, angle=0.1, mode=1),), (1,))
