import numpy as np
import pytest

from twomode.errors import DimensionMismatch
from twomode.evolve import (
    SINGLE_EXCITATION_BASIS,
    atomic_reduced,
    djc_propagator_blocks,
    evolve,
    rabi_frequencies,
    resolvent_propagator,
    single_excitation_embedding,
    single_excitation_propagator_numeric,
    tc_propagator_blocks,
)
from twomode.fields import assemble_initial, fock_state, two_mode_space
from twomode.hilbert import StateVector, mkron
from twomode.measures import concurrence
from twomode.model import (
    ModelParams,
    beam_splitter_unitary,
    build_djc_hamiltonian,
    build_hamiltonian,
    build_tc_hamiltonian,
    excitation_number,
    full_space,
    tc_space,
)


def make_initial(atomic, n, m, n_max):
    space = full_space(n_max)
    return assemble_initial(atomic, fock_state(n, m, two_mode_space(n_max)), space), space


# ------------------------------------------------------------------ evolve

def test_evolve_t0_identity():
    psi0, space = make_initial("eg", 0, 0, 2)
    h = build_hamiltonian(ModelParams(phi=0.4, n_max=2), space)
    out = evolve(psi0, h, 0.0)
    assert np.abs(out.amplitudes - psi0.amplitudes).max() < 1e-14


def test_evolve_gg00_stationary():
    psi0, space = make_initial("gg", 0, 0, 2)
    h = build_hamiltonian(ModelParams(phi=1.1, n_max=2), space)
    for t in (0.5, 3.0, 12.0):
        out = evolve(psi0, h, t)
        assert abs(abs(out.overlap(psi0)) - 1.0) < 1e-12


def test_evolve_gg10_concurrence_value():
    # at phi = 0 the closed form is sin^2(2 g t)/2, so K2 t = pi/2 gives 1/2
    psi0, space = make_initial("gg", 1, 0, 3)
    h = build_hamiltonian(ModelParams(phi=0.0, n_max=3), space)
    _, k2 = rabi_frequencies(0.0)
    t = (np.pi / 2) / k2
    rho = atomic_reduced(evolve(psi0, h, t))
    assert abs(concurrence(rho) - 0.5) < 1e-10


def test_evolve_norm_and_trace():
    psi0, space = make_initial("psi", 1, 1, 3)
    h = build_hamiltonian(ModelParams(phi=2.0, n_max=3), space)
    out = evolve(psi0, h, 7.3)
    assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-9
    rho = evolve(psi0.density(), h, 7.3)
    assert abs(rho.trace() - 1.0) < 1e-9


def test_evolve_dimension_mismatch():
    psi0, _ = make_initial("gg", 0, 0, 2)
    h = build_hamiltonian(ModelParams(n_max=3))
    with pytest.raises(DimensionMismatch):
        evolve(psi0, h, 1.0)


def test_excitation_conservation():
    psi0, space = make_initial("phi", 1, 0, 3)
    h = build_hamiltonian(ModelParams(phi=1.7, n_max=3), space)
    n_op = excitation_number(space).matrix
    n_diag = np.real(np.diag(n_op))
    # distribution over excitation-number eigenspaces is constant in t
    def distribution(state):
        probs = {}
        for val in sorted(set(n_diag)):
            probs[val] = float(np.sum(np.abs(state.amplitudes[n_diag == val]) ** 2))
        return probs
    ref = distribution(psi0)
    for t in (0.5, 4.0, 11.0):
        out = distribution(evolve(psi0, h, t))
        for key in ref:
            assert abs(out[key] - ref[key]) < 1e-9


def test_truncation_exactness_for_fock_seeds():
    # n_max = n + m + 2 captures the reachable ladder exactly: doubling the
    # cutoff changes nothing
    n, m = 1, 1
    small = n + m + 2
    big = 2 * small
    psi_s, space_s = make_initial("ee", n, m, small)
    psi_b, space_b = make_initial("ee", n, m, big)
    h_s = build_hamiltonian(ModelParams(phi=1.3, n_max=small), space_s)
    h_b = build_hamiltonian(ModelParams(phi=1.3, n_max=big), space_b)
    for t in (0.7, 5.0):
        rho_s = atomic_reduced(evolve(psi_s, h_s, t)).matrix
        rho_b = atomic_reduced(evolve(psi_b, h_b, t)).matrix
        assert np.abs(rho_s - rho_b).max() < 1e-12


# ---------------------------------------------------------------- tc blocks

def test_tc_blocks_identity_at_t0():
    p = ModelParams(n_max=4)
    u = tc_propagator_blocks(p, 0.0)
    assert np.abs(u.matrix - np.eye(u.matrix.shape[0])).max() < 1e-12


@pytest.mark.parametrize("gt", [0.3, 1.7, 9.2])
def test_tc_blocks_match_numeric(gt):
    p = ModelParams(n_max=6)
    h = build_tc_hamiltonian(p)
    u_num = h.unitary(gt)
    u_blk = tc_propagator_blocks(p, gt)
    assert np.abs(u_blk.matrix - u_num).max() < 1e-8
    assert np.abs(u_blk.matrix @ u_blk.matrix.conj().T - np.eye(u_num.shape[0])).max() < 1e-9


def test_tc_one_photon_oscillation_frequency():
    # |gg>|1> oscillates at the frequency 2 g set by the one-photon sector
    p = ModelParams(n_max=3)
    space = tc_space(3)
    idx = space.flat_index((1, 1, 1))
    t = 0.9
    u = tc_propagator_blocks(p, t)
    assert abs(u.matrix[idx, idx] - np.cos(2 * t)) < 1e-10


# --------------------------------------------------------------- djc blocks

def test_djc_blocks_identity_at_t0():
    p = ModelParams(n_max=3)
    u = djc_propagator_blocks(p, 0.0)
    assert np.abs(u.matrix - np.eye(u.matrix.shape[0])).max() < 1e-12


@pytest.mark.parametrize("gt", [0.3, 1.7, 9.2])
def test_djc_blocks_match_numeric(gt):
    p = ModelParams(n_max=6)
    h = build_djc_hamiltonian(p)
    u_num = h.unitary(gt)
    u_blk = djc_propagator_blocks(p, gt)
    assert np.abs(u_blk.matrix - u_num).max() < 1e-8


def test_djc_pair_cut_entanglement_constant():
    # a product propagator cannot change entanglement across the pair cut
    n_max = 4
    space = full_space(n_max)
    p = ModelParams(n_max=n_max)
    from twomode.fields import two_mode_squeezed

    field, _ = two_mode_squeezed(0.3, two_mode_space(n_max), eps_trunc=1e-4)
    psi0 = assemble_initial("ee", field, space)
    d = n_max + 1

    def pair_cut_trace_norm(vec):
        m = vec.reshape(2, 2, d, d).transpose(0, 2, 1, 3).reshape(2 * d, 2 * d)
        s = np.linalg.svd(m, compute_uv=False)
        return (s.sum() ** 2 - 1.0) / 2.0

    ref = pair_cut_trace_norm(psi0.amplitudes)
    for gt in (0.8, 2.5, 7.0):
        u = djc_propagator_blocks(p, gt)
        evolved = u.matrix @ psi0.amplitudes
        assert abs(pair_cut_trace_norm(evolved) - ref) < 1e-9


# ---------------------------------------------------------------- resolvent

def test_resolvent_t0_identity():
    assert np.abs(resolvent_propagator(1.0, 0.0) - np.eye(4)).max() < 1e-14


def test_resolvent_column_norms():
    u = resolvent_propagator(1.0, 2.0)
    norms = (np.abs(u) ** 2).sum(axis=0)
    assert np.abs(norms - 1.0).max() < 1e-12


def test_resolvent_unitarity_random():
    rng = np.random.default_rng(37)
    for _ in range(64):
        phi = rng.uniform(0, 2 * np.pi)
        t = rng.uniform(0, 20)
        u = resolvent_propagator(phi, t)
        assert np.abs(u @ u.conj().T - np.eye(4)).max() < 1e-9


def test_resolvent_coherence_magnitude_phi0():
    # 2 |U11 U21| = |1 - cos(4 g t)|/4; at g t = pi/4 this equals 1/2
    t = np.pi / 4
    u = resolvent_propagator(0.0, t)
    val = 2 * abs(u[0, 0] * np.conj(u[1, 0]))
    assert abs(val - 0.25 * abs(1 - np.cos(4 * t))) < 1e-12
    assert abs(val - 0.5) < 1e-12


def test_resolvent_matches_numeric_block():
    rng = np.random.default_rng(41)
    for _ in range(40):
        phi = rng.uniform(0, 2 * np.pi)
        t = rng.uniform(0, 15)
        u = resolvent_propagator(phi, t)
        u_num = single_excitation_propagator_numeric(phi, t)
        assert np.abs(u - u_num).max() < 1e-12


def test_resolvent_matches_full_space_block():
    # the 4x4 numeric oracle itself agrees with the full-space propagator
    n_max = 2
    space = full_space(n_max)
    emb = single_excitation_embedding(space)
    for phi in (0.0, 1.0, 2.5):
        h = build_hamiltonian(ModelParams(phi=phi, n_max=n_max), space)
        for t in (0.5, 3.0):
            block = emb.conj().T @ h.unitary(t) @ emb
            assert np.abs(block - resolvent_propagator(phi, t)).max() < 1e-10


def test_resolvent_omega0_prefactor():
    # with the omega0 term enabled the block gains a global phase
    phi, t, w0 = 1.2, 2.1, 0.8
    n_max = 2
    space = full_space(n_max)
    h = build_hamiltonian(ModelParams(phi=phi, omega0=w0, n_max=n_max), space)
    emb = single_excitation_embedding(space)
    block = emb.conj().T @ h.unitary(t) @ emb
    assert np.abs(block - resolvent_propagator(phi, t, omega0=w0)).max() < 1e-10


# ---------------------------------------------------- propagator agreement

def test_propagator_sources_agree_on_single_excitation():
    """Numeric, resolvent, and the mapped analytic blocks agree pairwise on
    the single-excitation subspace where each applies."""
    n_max = 2
    space = full_space(n_max)
    emb = single_excitation_embedding(space)
    w = mkron(np.eye(4, dtype=complex), beam_splitter_unitary(space))
    for phi, uses_tc, uses_djc in ((0.0, True, False), (np.pi / 2, False, False),
                                   (float(np.pi), False, True)):
        p = ModelParams(phi=phi, n_max=n_max)
        h = build_hamiltonian(p, space)
        for gt in (0.5, 3.0, 12.0):
            blocks = {
                "numeric": emb.conj().T @ h.unitary(gt) @ emb,
                "resolvent": resolvent_propagator(phi, gt),
            }
            if uses_tc:
                u_tc = tc_propagator_blocks(p, gt).matrix
                d = n_max + 1
                full = np.kron(u_tc.reshape(4 * d, 4 * d), np.eye(d))
                blocks["tc"] = emb.conj().T @ w.conj().T @ full @ w @ emb
            if uses_djc:
                u_djc = djc_propagator_blocks(p, gt).matrix
                blocks["djc"] = emb.conj().T @ w.conj().T @ u_djc @ w @ emb
            names = list(blocks)
            for i in range(len(names)):
                for j in range(i + 1, len(names)):
                    dev = np.abs(blocks[names[i]] - blocks[names[j]]).max()
                    assert dev < 1e-8, (phi, gt, names[i], names[j], dev)


# ------------------------------------------------------------ reduced state

def test_atomic_reduced_product_state():
    psi0, space = make_initial("eg", 2, 1, 4)
    rho = atomic_reduced(psi0, space)
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    assert np.abs(rho.matrix - expected).max() < 1e-14


def test_atomic_reduced_eg00_no_double_excitation():
    psi0, space = make_initial("eg", 0, 0, 2)
    h = build_hamiltonian(ModelParams(phi=0.9, n_max=2), space)
    for t in (0.3, 2.0, 8.0):
        rho = atomic_reduced(evolve(psi0, h, t))
        assert abs(rho.matrix[0, 0]) < 1e-12  # ee population stays zero


def test_atomic_reduced_x_form_and_symmetry():
    # Psi |00> at phi = 0: equal populations and real eg-ge coherence
    psi0, space = make_initial("psi", 0, 0, 2)
    h = build_hamiltonian(ModelParams(phi=0.0, n_max=2), space)
    for t in (0.4, 1.9, 6.3):
        m = atomic_reduced(evolve(psi0, h, t)).matrix
        assert abs(m[1, 1] - m[2, 2]) < 1e-12
        assert abs(m[1, 2].imag) < 1e-12
        # X form: no coherence outside the eg-ge block, no ee population
        assert abs(m[0, 0]) < 1e-12
        assert abs(m[0, 3]) < 1e-12
        assert abs(m[1, 3]) < 1e-12


def test_single_excitation_basis_order():
    assert SINGLE_EXCITATION_BASIS == ("eg00", "ge00", "gg10", "gg01")
