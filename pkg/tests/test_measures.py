import numpy as np
import pytest

from twomode.errors import NotAState, OutOfValidity
from twomode.evolve import atomic_reduced, evolve, rabi_frequencies, resolvent_propagator
from twomode.fields import assemble_initial, fock_state, two_mode_space, two_mode_squeezed
from twomode.hilbert import CompositeSpace, DensityMatrix
from twomode.measures import (
    concurrence,
    concurrence_bell00,
    concurrence_eg00,
    concurrence_gg10,
    eg00_death_times,
    entanglement_of_formation,
    negativity,
    negativity_lowsqueeze_approx,
    x_form_concurrence,
)
from twomode.model import ModelParams, build_hamiltonian, full_space

PHI_STATE = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PSI_STATE = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
TWO_QUBITS = CompositeSpace((2, 2))


def brute_concurrence(rho):
    """Independent oracle: eigenvalues of rho rho~ via a plain eigensolve."""
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    ev = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    lam = np.sqrt(np.abs(np.sort(ev.real))[::-1])
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def random_two_qubit_density(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# -------------------------------------------------------------- concurrence

def test_concurrence_maximally_entangled():
    assert abs(concurrence(np.outer(PHI_STATE, PHI_STATE.conj())) - 1.0) < 1e-12


def test_concurrence_product_state():
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = 1.0
    assert concurrence(rho) == 0.0


def test_concurrence_werner_half():
    # Werner state p |Psi><Psi| + (1-p) I/4 at p = 1/2: concurrence 1/4
    rho = 0.5 * np.outer(PSI_STATE, PSI_STATE.conj()) + 0.5 * np.eye(4) / 4
    assert abs(concurrence(rho) - 0.25) < 1e-12
    assert abs(brute_concurrence(rho) - 0.25) < 1e-10


def test_concurrence_matches_brute_force():
    rng = np.random.default_rng(43)
    for _ in range(50):
        rho = random_two_qubit_density(rng)
        assert abs(concurrence(rho) - brute_concurrence(rho)) < 1e-9


def test_concurrence_rejects_bad_states():
    with pytest.raises(NotAState):
        concurrence(np.eye(4))  # trace 4
    bad = np.diag([1.2, -0.2, 0.0, 0.0]).astype(complex)
    with pytest.raises(NotAState):
        concurrence(bad)


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(47)
    for _ in range(100):
        rho = random_two_qubit_density(rng)
        c0 = concurrence(rho)
        u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
        c1 = concurrence(u @ rho @ u.conj().T)
        assert abs(c0 - c1) < 1e-9


def test_x_form_identity_on_single_excitation_states():
    # C = 2 |rho_12| exactly for evolved single-excitation states
    rng = np.random.default_rng(53)
    n_max = 1
    space = full_space(n_max)
    for _ in range(100):
        phi = rng.uniform(0, 2 * np.pi)
        t = rng.uniform(0, 12)
        # random single-excitation pure initial state
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps /= np.linalg.norm(amps)
        vec = np.zeros(space.total_dim, dtype=complex)
        for a, label in zip(amps, [(0, 1, 0, 0), (1, 0, 0, 0), (1, 1, 1, 0), (1, 1, 0, 1)]):
            vec[space.flat_index(label)] = a
        from twomode.hilbert import StateVector

        psi0 = StateVector(space, vec)
        h = build_hamiltonian(ModelParams(phi=phi, n_max=n_max), space)
        rho = atomic_reduced(evolve(psi0, h, t))
        assert abs(concurrence(rho) - x_form_concurrence(rho)) < 1e-9


# --------------------------------------------------------------------- eof

def test_eof_endpoints():
    assert entanglement_of_formation(0.0) == 0.0
    assert abs(entanglement_of_formation(1.0) - 1.0) < 1e-12


def test_eof_value():
    # h(0.9) with h the binary entropy
    assert abs(entanglement_of_formation(0.6) - 0.46899559358928122) < 1e-12


def test_eof_monotone():
    cs = np.linspace(0, 1, 50)
    vals = [entanglement_of_formation(c) for c in cs]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        entanglement_of_formation(1.5)


# -------------------------------------------------------------- negativity

def test_negativity_product_zero():
    rng = np.random.default_rng(59)
    for dims in ((2, 2), (2, 3)):
        space = CompositeSpace(dims)
        a = rng.normal(size=(dims[0], dims[0])) + 1j * rng.normal(size=(dims[0], dims[0]))
        b = rng.normal(size=(dims[1], dims[1])) + 1j * rng.normal(size=(dims[1], dims[1]))
        ra = a @ a.conj().T
        rb = b @ b.conj().T
        rho = DensityMatrix(space, np.kron(ra / np.trace(ra), rb / np.trace(rb)))
        assert negativity(rho, 1) == 0.0


def test_negativity_bell_half():
    rho = DensityMatrix(TWO_QUBITS, np.outer(PHI_STATE, PHI_STATE.conj()))
    assert abs(negativity(rho, 1) - 0.5) < 1e-12


def test_negativity_tmss_increasing():
    prev = 0.0
    for xi in (0.1, 0.2, 0.3):
        st, _ = two_mode_squeezed(xi, two_mode_space(12), eps_trunc=1e-6)
        val = negativity(st.density(), 1)
        assert val > prev
        prev = val


def test_negativity_concurrence_agree_on_x_states():
    # negativity > 0 iff concurrence > 0 for random two-qubit X states
    rng = np.random.default_rng(61)
    for _ in range(60):
        pops = rng.dirichlet(np.ones(4))
        coh = min(np.sqrt(pops[1] * pops[2]), 1.0) * rng.uniform(0, 1.3)
        m = np.diag(pops).astype(complex)
        m[1, 2] = coh
        m[2, 1] = coh
        if np.linalg.eigvalsh(m).min() < 0:
            continue
        rho = DensityMatrix(TWO_QUBITS, m)
        c = concurrence(m)
        n = negativity(rho, 1)
        assert (c > 1e-12) == (n > 1e-12)


# ------------------------------------------------------------- closed forms

def test_eg00_closed_form_values():
    assert concurrence_eg00(np.pi, 3.7) < 1e-14  # K1 = K2
    assert abs(concurrence_eg00(0.0, np.pi / 4) - 0.5) < 1e-14
    assert concurrence_eg00(1.0, 0.0) == 0.0


def test_eg00_death_times():
    phi = 1.0
    k1, k2 = rabi_frequencies(phi)
    td = eg00_death_times(phi, np.arange(1, 6))
    assert np.abs(td - np.arange(1, 6) * np.pi / abs(k1 - k2)).max() < 1e-12
    for t in td:
        assert concurrence_eg00(phi, t) < 1e-10
    with pytest.raises(ZeroDivisionError):
        eg00_death_times(np.pi, 1)


def test_gg10_closed_form_values():
    assert concurrence_gg10(0.7, 0.0) == 0.0
    assert abs(concurrence_gg10(np.pi, np.pi / (2 * np.sqrt(2))) - 1.0) < 1e-12
    assert abs(concurrence_gg10(0.0, np.pi / 4) - 0.5) < 1e-12
    ts = np.linspace(0, 20, 200)
    assert np.abs(concurrence_gg10(0.0, ts) - 0.5 * np.sin(2 * ts) ** 2).max() < 1e-12
    assert np.abs(concurrence_gg10(np.pi, ts) - np.sin(np.sqrt(2) * ts) ** 2).max() < 1e-12


def test_bell00_closed_form_values():
    assert abs(concurrence_bell00(1.3, 0.0) - 1.0) < 1e-14
    # at phi = pi both weights are 1/2 and K1 = K2, so C = cos^2(K t)
    k = 2 * np.sin(np.pi / 4)
    t = (np.pi / 3) / k
    assert abs(concurrence_bell00(np.pi, t) - 0.25) < 1e-12


def test_closed_forms_match_numerics_on_grid():
    # simultaneously the transcription audit for the production propagator
    n_max = 2
    space = full_space(n_max)
    ts = np.linspace(0.0, 25.0, 50)
    for phi in np.linspace(0, 2 * np.pi, 8, endpoint=False):
        h = build_hamiltonian(ModelParams(phi=float(phi), n_max=n_max), space)
        psi_eg = assemble_initial("eg", fock_state(0, 0, two_mode_space(n_max)), space)
        psi_gg = assemble_initial("gg", fock_state(1, 0, two_mode_space(n_max)), space)
        for t in ts:
            r1 = atomic_reduced(evolve(psi_eg, h, float(t)))
            r2 = atomic_reduced(evolve(psi_gg, h, float(t)))
            assert abs(concurrence(r1) - concurrence_eg00(float(phi), float(t))) < 1e-8
            assert abs(concurrence(r2) - concurrence_gg10(float(phi), float(t))) < 1e-8


def test_eg00_concurrence_equals_resolvent_elements():
    # 2 |U11 U21*| reproduces the closed form
    for phi in (0.3, 1.7):
        for t in (0.9, 4.2):
            u = resolvent_propagator(phi, t)
            assert abs(2 * abs(u[0, 0] * u[1, 0]) - concurrence_eg00(phi, t)) < 1e-12


# ----------------------------------------------------------- low squeezing

def test_lowsqueeze_approx_values():
    assert negativity_lowsqueeze_approx(0.0, 1.3, "atoms") == 0.0
    t = 1.1
    xi = 0.05
    s1, c1, c2 = np.sin(np.sqrt(2) * t), np.cos(np.sqrt(2) * t), np.cos(2 * t)
    expected = abs(min(s1**2 * c1**2 - xi * s1**2 * c2**2, 0.0))
    assert abs(negativity_lowsqueeze_approx(xi, t, "atoms") - expected) < 1e-14
    expected_f = abs(min(s1**2 * c1**2 - xi * c1**2 * c2**2, 0.0))
    assert abs(negativity_lowsqueeze_approx(xi, t, "fields") - expected_f) < 1e-14


def test_lowsqueeze_validity_guard():
    with pytest.raises(OutOfValidity):
        negativity_lowsqueeze_approx(0.3, 1.0, "atoms")
    with pytest.raises(ValueError):
        negativity_lowsqueeze_approx(0.1, 1.0, "nonsense")


def test_lowsqueeze_atoms_matches_numerics():
    # the atom-atom approximation is second-order accurate
    from twomode.hilbert import partial_trace
    from twomode.model import build_djc_hamiltonian

    xi = 0.05
    params = ModelParams(n_max=6, eps_trunc=1e-9)
    space = full_space(6)
    h = build_djc_hamiltonian(params, space)
    field, _ = two_mode_squeezed(xi, two_mode_space(6), 1e-9)
    psi0 = assemble_initial("ee", field, space)
    for t in np.linspace(0, 6, 40):
        rho_a = atomic_reduced(evolve(psi0, h, float(t)))
        approx = negativity_lowsqueeze_approx(xi, float(t), "atoms")
        exact = negativity(DensityMatrix(TWO_QUBITS, rho_a.matrix), 1)
        assert abs(exact - approx) <= 5 * xi**2
