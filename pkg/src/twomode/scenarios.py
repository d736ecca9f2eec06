"""Scenario configuration, evaluation engines, and deterministic CSV output.

A scenario names a picture, an atomic state, a field state, a time grid and
a set of measures.  Pictures:

* ``general`` — full four-factor model at an arbitrary separation phase.
* ``sc`` / ``ac`` — the two symmetric special cases (phi = 0 / phi = pi).
  Their atomic dynamics are evaluated through the equivalent one-mode and
  isolated-pair pictures obtained from the mode transform; the equivalence
  is exact for states supported below the truncation edge and is covered by
  the acceptance suite.
* ``tc`` / ``djc`` — the equivalent pictures addressed directly, with the
  field given in the transformed modes.

Mixed field states are decomposed into pure components (spectral
decomposition) and the reduced atomic state is reassembled from the
component evolutions; everything runs off one cached eigendecomposition
per Hamiltonian.
"""

from __future__ import annotations

import configparser
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .classify import DynamicsVerdict, EPS_ZERO_DEFAULT, classify
from .errors import ConfigError
from .fields import (
    EPS_TRUNC_DEFAULT,
    atomic_state,
    coherent_state,
    eta_state,
    fock_state,
    mode_space,
    rho_nm_state,
    squeezed_vacuum,
    thermal_state,
    two_mode_space,
    two_mode_squeezed,
)
from .hilbert import HermitianOperator
from .measures import concurrence, entanglement_of_formation
from .model import (
    ModelParams,
    beam_splitter_unitary,
    build_hamiltonian,
    build_tc_hamiltonian,
    destroy,
    full_space,
    tc_space,
)

PICTURES = ("general", "sc", "ac", "tc", "djc")
MEASURES = ("concurrence", "eof", "negativity:atoms", "negativity:fields",
            "negativity:pairs")

_TWO_MODE_KINDS = {
    "fock": 2, "coherent": 2, "squeezed_pair": 1, "tmss": 1, "thermal": 1,
    "eta": 2,
}
_SINGLE_MODE_KINDS = {
    "fock": 1, "coherent": 1, "squeezed": 1, "thermal": 1, "rho_nm": 2,
}

_COMPONENT_WEIGHT_FLOOR = 1e-14


def _fmt(x) -> str:
    """Format a number with 17 significant digits (lossless double round trip)."""
    if isinstance(x, complex):
        if x.imag == 0.0:
            return format(x.real, ".17g")
        return f"{format(x.real, '.17g')}{'+' if x.imag >= 0 else '-'}{format(abs(x.imag), '.17g')}j"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _parse_number(token: str) -> complex | float:
    try:
        val = complex(token)
    except ValueError as exc:
        raise ConfigError(f"cannot parse number {token!r}") from exc
    return val.real if val.imag == 0.0 else val


@dataclass(frozen=True)
class FieldSpec:
    """A named initial field state with its parameters."""

    kind: str
    params: tuple

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        tokens = text.replace(",", " ").split()
        if not tokens:
            raise ConfigError("empty field specification")
        kind = tokens[0].lower()
        known = set(_TWO_MODE_KINDS) | set(_SINGLE_MODE_KINDS)
        if kind not in known:
            raise ConfigError(f"unknown field kind {tokens[0]!r}; choose from {sorted(known)}")
        params = tuple(_parse_number(tok) for tok in tokens[1:])
        if kind in ("fock", "eta", "rho_nm"):
            if any(p != int(np.real(p)) or np.imag(p) != 0 for p in params):
                raise ConfigError(f"{kind} occupations must be integers, got {params}")
            params = tuple(int(np.real(p)) for p in params)
        return cls(kind, params)

    def format(self) -> str:
        return " ".join([self.kind] + [_fmt(p) for p in self.params])

    def _nargs(self, table, picture: str) -> int:
        if self.kind not in table:
            raise ConfigError(
                f"field kind {self.kind!r} is not valid in the {picture} picture"
            )
        want = table[self.kind]
        if len(self.params) != want:
            raise ConfigError(
                f"field {self.kind!r} needs {want} parameter(s) in the "
                f"{picture} picture, got {len(self.params)}"
            )
        return want


@dataclass(frozen=True)
class Scenario:
    """One runnable configuration."""

    name: str
    picture: str
    atomic: str
    field: FieldSpec
    params: ModelParams
    t_max: float = 25.0
    samples: int = 500
    measures: tuple[str, ...] = ("concurrence",)
    eps_zero: float = EPS_ZERO_DEFAULT
    delta_dead: float | None = None

    def __post_init__(self):
        if self.picture not in PICTURES:
            raise ConfigError(f"unknown picture {self.picture!r}")
        if self.samples < 2:
            raise ConfigError("samples must be at least 2")
        if self.t_max <= 0:
            raise ConfigError("t_max must be positive")
        for m in self.measures:
            if m not in MEASURES:
                raise ConfigError(f"unknown measure {m!r}; choose from {MEASURES}")
        atomic_state(self.atomic)  # label validation
        valid_cuts = {
            "general": MEASURES,
            "ac": MEASURES,
            "djc": MEASURES,
            "sc": ("concurrence", "eof", "negativity:atoms"),
            "tc": ("concurrence", "eof", "negativity:atoms"),
        }[self.picture]
        for m in self.measures:
            if m not in valid_cuts:
                raise ConfigError(
                    f"measure {m!r} is not available in the {self.picture} picture"
                )

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.samples)

    @property
    def resolved_delta_dead(self) -> float:
        return self.delta_dead if self.delta_dead is not None else 1e-3 * self.t_max

    @property
    def phi(self) -> float:
        return {"sc": 0.0, "ac": float(np.pi), "tc": 0.0, "djc": float(np.pi)}.get(
            self.picture, self.params.phi
        )


# ---------------------------------------------------------------------------
# configuration files


_SCENARIO_KEYS = {
    "picture", "atomic", "field", "phi", "g", "omega0", "n_max", "eps_trunc",
    "t_max", "samples", "measures", "eps_zero", "delta_dead", "seed",
}


def parse_config(text: str) -> list[Scenario]:
    """Parse the INI-style scenario file; see the README for the grammar."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    scenarios = []
    for section in parser.sections():
        opts = dict(parser[section])
        unknown = set(opts) - _SCENARIO_KEYS
        if unknown:
            raise ConfigError(f"[{section}]: unknown keys {sorted(unknown)}")
        try:
            scenarios.append(_scenario_from_options(section, opts))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"[{section}]: {exc}") from exc
    if not scenarios:
        raise ConfigError("config defines no scenarios")
    return scenarios


def _scenario_from_options(name: str, opts: dict) -> Scenario:
    def get(key, default=None):
        return opts.get(key, default)

    picture = (get("picture", "general") or "general").lower()
    if "atomic" not in opts:
        raise ConfigError(f"[{name}]: missing required key 'atomic'")
    if "field" not in opts:
        raise ConfigError(f"[{name}]: missing required key 'field'")
    params = ModelParams(
        g=float(get("g", 1.0)),
        phi=float(get("phi", 0.0)),
        omega0=float(get("omega0", 0.0)),
        n_max=int(get("n_max", 12)),
        eps_trunc=float(get("eps_trunc", EPS_TRUNC_DEFAULT)),
    )
    measures = tuple(
        tok.strip() for tok in (get("measures", "concurrence")).split(",") if tok.strip()
    )
    delta_dead = get("delta_dead")
    return Scenario(
        name=name,
        picture=picture,
        atomic=get("atomic").strip().lower(),
        field=FieldSpec.parse(get("field")),
        params=params,
        t_max=float(get("t_max", 25.0)),
        samples=int(get("samples", 500)),
        measures=measures,
        eps_zero=float(get("eps_zero", EPS_ZERO_DEFAULT)),
        delta_dead=None if delta_dead is None else float(delta_dead),
    )


def scenario_header(scenario: Scenario) -> list[str]:
    """Resolved-parameter header block; reparses to an equivalent scenario."""
    lines = [
        f"# twomode {__version__}",
        f"# scenario = {scenario.name}",
        f"# picture = {scenario.picture}",
        f"# atomic = {scenario.atomic}",
        f"# field = {scenario.field.format()}",
        f"# phi = {_fmt(scenario.phi)}",
        f"# g = {_fmt(scenario.params.g)}",
        f"# omega0 = {_fmt(scenario.params.omega0)}",
        f"# n_max = {scenario.params.n_max}",
        f"# eps_trunc = {_fmt(scenario.params.eps_trunc)}",
        f"# t_max = {_fmt(scenario.t_max)}",
        f"# samples = {scenario.samples}",
        f"# measures = {','.join(scenario.measures)}",
        f"# eps_zero = {_fmt(scenario.eps_zero)}",
        f"# delta_dead = {_fmt(scenario.resolved_delta_dead)}",
    ]
    return lines


def parse_result_header(text: str) -> Scenario:
    """Rebuild a Scenario from the '#'-header block of an output file."""
    opts = {}
    name = "reparsed"
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        body = line.lstrip("#").strip()
        if "=" not in body:
            continue
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if key == "scenario":
            name = value
        elif key in _SCENARIO_KEYS:
            opts[key] = value
    return _scenario_from_options(name, opts)


# ---------------------------------------------------------------------------
# field preparation


def _single_mode_components(spec: FieldSpec, n_max: int, eps: float):
    """Weighted pure components of a single-mode field state."""
    spec._nargs(_SINGLE_MODE_KINDS, "tc")
    space = mode_space(n_max)
    d = n_max + 1
    if spec.kind == "fock":
        (n,) = spec.params
        return [(1.0, fock_vector(n, d))]
    if spec.kind == "coherent":
        state, _ = coherent_state(spec.params[0], space, eps)
        return [(1.0, state.amplitudes)]
    if spec.kind == "squeezed":
        state, _ = squeezed_vacuum(spec.params[0], space, eps)
        return [(1.0, state.amplitudes)]
    if spec.kind == "thermal":
        rho, _ = thermal_state(float(np.real(spec.params[0])), space, eps)
        pops = np.real(np.diag(rho.matrix))
        return [(float(p), fock_vector(i, d))
                for i, p in enumerate(pops) if p > _COMPONENT_WEIGHT_FLOOR]
    if spec.kind == "rho_nm":
        n, m = spec.params
        rho = rho_nm_state(n, m, space)
        pops = np.real(np.diag(rho.matrix))
        return [(float(p), fock_vector(i, d))
                for i, p in enumerate(pops) if p > _COMPONENT_WEIGHT_FLOOR]
    raise ConfigError(f"field kind {spec.kind!r} is not a single-mode state")


def fock_vector(n: int, dim: int) -> np.ndarray:
    if not 0 <= n < dim:
        raise ConfigError(f"occupation {n} exceeds cutoff {dim - 1}")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def _two_mode_field(spec: FieldSpec, n_max: int, eps: float):
    """Two-mode field in the original modes: ('pure', vec) or ('mixed', comps)."""
    spec._nargs(_TWO_MODE_KINDS, "general")
    space = two_mode_space(n_max)
    single = mode_space(n_max)
    if spec.kind == "fock":
        n, m = spec.params
        return "pure", fock_state(n, m, space).amplitudes
    if spec.kind == "eta":
        n, m = spec.params
        return "pure", eta_state(n, m, space).amplitudes
    if spec.kind == "coherent":
        a, b = spec.params
        va, _ = coherent_state(a, single, eps)
        vb, _ = coherent_state(b, single, eps)
        return "pure", np.kron(va.amplitudes, vb.amplitudes)
    if spec.kind == "squeezed_pair":
        (xi,) = spec.params
        va, _ = squeezed_vacuum(xi, single, eps)
        vb, _ = squeezed_vacuum(-xi, single, eps)
        return "pure", np.kron(va.amplitudes, vb.amplitudes)
    if spec.kind == "tmss":
        (xi,) = spec.params
        state, _ = two_mode_squeezed(xi, space, eps)
        return "pure", state.amplitudes
    if spec.kind == "thermal":
        nbar = float(np.real(spec.params[0]))
        rho, _ = thermal_state(nbar, single, eps)
        pops = np.real(np.diag(rho.matrix))
        d = n_max + 1
        comps = []
        for i, pi in enumerate(pops):
            for j, pj in enumerate(pops):
                w = float(pi * pj)
                if w > _COMPONENT_WEIGHT_FLOOR:
                    v = np.zeros(d * d, dtype=complex)
                    v[i * d + j] = 1.0
                    comps.append((w, v))
        return "mixed", comps
    raise ConfigError(f"field kind {spec.kind!r} is not a two-mode state")


def _mixed_components_from_density(rho: np.ndarray):
    w, v = np.linalg.eigh(rho)
    comps = []
    for i in range(w.size - 1, -1, -1):
        if w[i] > _COMPONENT_WEIGHT_FLOOR:
            comps.append((float(w[i]), np.ascontiguousarray(v[:, i])))
    return comps


# ---------------------------------------------------------------------------
# engines

_EIGEN_CACHE: dict[tuple, HermitianOperator] = {}


def _cached_operator(key, builder) -> HermitianOperator:
    op = _EIGEN_CACHE.get(key)
    if op is None:
        op = builder()
        _EIGEN_CACHE[key] = op
    return op


class _EngineBase:
    scenario: Scenario

    def series(self, times: np.ndarray) -> dict[str, np.ndarray]:
        out = {}
        rho_atoms = self.atomic_series(times)
        if "concurrence" in self.scenario.measures or "eof" in self.scenario.measures:
            conc = np.array([concurrence(r) for r in rho_atoms])
            if "concurrence" in self.scenario.measures:
                out["concurrence"] = conc
            if "eof" in self.scenario.measures:
                out["eof"] = np.array([entanglement_of_formation(c) for c in conc])
        if "negativity:atoms" in self.scenario.measures:
            out["negativity:atoms"] = np.array(
                [_neg_two_qubit(r) for r in rho_atoms]
            )
        if "negativity:fields" in self.scenario.measures:
            out["negativity:fields"] = self.field_negativity_series(times)
        if "negativity:pairs" in self.scenario.measures:
            out["negativity:pairs"] = self.pair_negativity_series(times)
        return out

    def concurrence_at(self, t: float) -> float:
        return concurrence(self.atomic_at(t))

    def verdict(self, times: np.ndarray, concurrence_series: np.ndarray) -> DynamicsVerdict:
        sc = self.scenario
        return classify(
            times,
            concurrence_series,
            eps_zero=sc.eps_zero,
            delta_dead=sc.resolved_delta_dead,
            callback=self.concurrence_at,
            check_horizon=False,
        )

    # implemented by subclasses
    def atomic_series(self, times):  # pragma: no cover - interface
        raise NotImplementedError

    def atomic_at(self, t):  # pragma: no cover - interface
        raise NotImplementedError

    def field_negativity_series(self, times):
        raise ConfigError(
            f"negativity:fields is not available in the {self.scenario.picture} picture"
        )

    def pair_negativity_series(self, times):
        raise ConfigError(
            f"negativity:pairs is not available in the {self.scenario.picture} picture"
        )


def _neg_two_qubit(rho4: np.ndarray) -> float:
    pt = rho4.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    val = (np.abs(np.linalg.eigvalsh(pt)).sum() - 1.0) / 2.0
    return 0.0 if abs(val) < 1e-12 else max(0.0, val)


class GeneralEngine(_EngineBase):
    """Full four-factor evolution by exact diagonalization."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        p = scenario.params
        if scenario.picture == "general":
            phi = p.phi
        else:
            phi = scenario.phi
            p = replace(p, phi=phi)
        self.space = full_space(p.n_max)
        self.h = _cached_operator(
            ("general", p.g, phi, p.omega0, p.n_max),
            lambda: build_hamiltonian(p, self.space),
        )
        atom = atomic_state(scenario.atomic).vector
        kind, payload = _two_mode_field(scenario.field, p.n_max, p.eps_trunc)
        if kind == "pure":
            comps = [(1.0, payload)]
        else:
            comps = payload
        w, v = self.h.eigensystem()
        self._eigvals = w
        self._eigvecs = v
        self._pure = kind == "pure"
        self._components = [
            (weight, v.conj().T @ np.kron(atom, field)) for weight, field in comps
        ]
        self._dims = self.space.factor_dims

    def _component_states(self, times: np.ndarray):
        """Yield (weight, psi array of shape (D, T)) per component."""
        phases = np.exp(-1j * np.outer(self._eigvals, times))
        for weight, c0 in self._components:
            yield weight, self._eigvecs @ (phases * c0[:, None])

    def atomic_series(self, times: np.ndarray):
        n_field = self.space.total_dim // 4
        rho = np.zeros((times.size, 4, 4), dtype=complex)
        for weight, psi in self._component_states(times):
            block = psi.reshape(4, n_field, times.size)
            rho += weight * np.einsum("aft,bft->tab", block, block.conj())
        return rho

    def atomic_at(self, t: float):
        return self.atomic_series(np.array([t]))[0]

    def field_negativity_series(self, times: np.ndarray):
        d = self._dims[2]
        out = np.zeros(times.size)
        for k, t in enumerate(times):
            rho_f = np.zeros((d * d, d * d), dtype=complex)
            for weight, psi in self._component_states(np.array([t])):
                block = psi[:, 0].reshape(4, d * d)
                rho_f += weight * (block.T @ block.conj())
            out[k] = _mode_negativity(rho_f, d)
        return out

    def pair_negativity_series(self, times: np.ndarray):
        if not self._pure:
            raise ConfigError("negativity:pairs needs a pure field state")
        d = self._dims[2]
        out = np.zeros(times.size)
        weight, psis = next(iter(self._component_states(times)))
        for k in range(times.size):
            m = psis[:, k].reshape(2, 2, d, d).transpose(0, 2, 1, 3).reshape(2 * d, 2 * d)
            out[k] = _pure_cut_negativity(m)
        return out


def _mode_negativity(rho_f: np.ndarray, d: int) -> float:
    pt = rho_f.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)
    val = (np.abs(np.linalg.eigvalsh(pt)).sum() - 1.0) / 2.0
    return 0.0 if abs(val) < 1e-12 else max(0.0, val)


def _pure_cut_negativity(m: np.ndarray) -> float:
    s = np.linalg.svd(m, compute_uv=False)
    val = (s.sum() ** 2 - 1.0) / 2.0
    return 0.0 if abs(val) < 1e-12 else max(0.0, val)


class TCEngine(_EngineBase):
    """Two atoms and one mode; also serves phi = 0 via the state mapping."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        p = replace(scenario.params, phi=0.0)
        self.space = tc_space(p.n_max)
        self.h = _cached_operator(
            ("tc", p.g, p.omega0, p.n_max),
            lambda: build_tc_hamiltonian(p, self.space),
        )
        atom = atomic_state(scenario.atomic).vector
        if scenario.picture == "tc":
            comps = _single_mode_components(scenario.field, p.n_max, p.eps_trunc)
        else:  # sc: map the two-mode field through the transform and trace
            comps = _sc_field_to_tc(scenario.field, p.n_max, p.eps_trunc)
        w, v = self.h.eigensystem()
        self._eigvals = w
        self._eigvecs = v
        self._components = [
            (weight, v.conj().T @ np.kron(atom, field)) for weight, field in comps
        ]
        self._d = p.n_max + 1

    def atomic_series(self, times: np.ndarray):
        phases = np.exp(-1j * np.outer(self._eigvals, times))
        rho = np.zeros((times.size, 4, 4), dtype=complex)
        for weight, c0 in self._components:
            psi = self._eigvecs @ (phases * c0[:, None])
            block = psi.reshape(4, self._d, times.size)
            rho += weight * np.einsum("aft,bft->tab", block, block.conj())
        return rho

    def atomic_at(self, t: float):
        return self.atomic_series(np.array([t]))[0]


def _sc_field_to_tc(spec: FieldSpec, n_max: int, eps: float):
    """Mode-transform a two-mode field and trace out the decoupled mode."""
    d = n_max + 1
    w = beam_splitter_unitary(two_mode_space(n_max))
    kind, payload = _two_mode_field(spec, n_max, eps)
    if kind == "pure":
        psi = (w @ payload).reshape(d, d)
        # Schmidt decomposition across (TF1 | TF2): left vectors are the
        # marginal's eigenvectors.
        u, s, _ = np.linalg.svd(psi, full_matrices=False)
        return [
            (float(s[i] ** 2), np.ascontiguousarray(u[:, i]))
            for i in range(s.size)
            if s[i] ** 2 > _COMPONENT_WEIGHT_FLOOR
        ]
    rho = np.zeros((d * d, d * d), dtype=complex)
    for weight, vec in payload:
        wv = w @ vec
        rho += weight * np.outer(wv, wv.conj())
    marginal = np.einsum("ikjk->ij", rho.reshape(d, d, d, d))
    return _mixed_components_from_density(marginal)


class DJCEngine(_EngineBase):
    """Two isolated atom-mode pairs; also serves phi = pi via the mapping."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        p = scenario.params
        self._d = p.n_max + 1
        d = self._d
        self._pair = _cached_operator(
            ("jc_pair", p.g, p.omega0, p.n_max),
            lambda: _jc_pair_operator(p),
        )
        atom = atomic_state(scenario.atomic).vector.reshape(2, 2)
        kind, payload = _two_mode_field(scenario.field, p.n_max, p.eps_trunc)
        if scenario.picture == "ac":
            w = beam_splitter_unitary(two_mode_space(p.n_max))
            if kind == "pure":
                payload = w @ payload
            else:
                payload = [(weight, w @ vec) for weight, vec in payload]
        self._pure = kind == "pure"
        comps = [(1.0, payload)] if kind == "pure" else payload
        # component layout: Psi[(a1, n1), (a2, n2)]
        self._components = [
            (
                weight,
                np.einsum("ab,nm->anbm", atom, vec.reshape(d, d)).reshape(2 * d, 2 * d),
            )
            for weight, vec in comps
        ]

    def _pair_unitary(self, t: float) -> np.ndarray:
        return self._pair.unitary(t)

    def atomic_series(self, times: np.ndarray):
        d = self._d
        rho = np.zeros((times.size, 4, 4), dtype=complex)
        for k, t in enumerate(times):
            u = self._pair_unitary(float(t))
            for weight, psi in self._components:
                evolved = (u @ psi @ u.T).reshape(2, d, 2, d)
                rho[k] += weight * np.einsum(
                    "ambn,cmdn->abcd", evolved, evolved.conj()
                ).reshape(4, 4)
        return rho

    def atomic_at(self, t: float):
        return self.atomic_series(np.array([t]))[0]

    def field_negativity_series(self, times: np.ndarray):
        d = self._d
        out = np.zeros(times.size)
        for k, t in enumerate(times):
            u = self._pair_unitary(float(t))
            rho_f = np.zeros((d * d, d * d), dtype=complex)
            for weight, psi in self._components:
                evolved = (u @ psi @ u.T).reshape(2, d, 2, d)
                rho_f += weight * np.einsum(
                    "ambn,apbq->mnpq", evolved, evolved.conj()
                ).reshape(d * d, d * d)
            out[k] = _mode_negativity(rho_f, d)
        return out

    def pair_negativity_series(self, times: np.ndarray):
        if not self._pure:
            raise ConfigError("negativity:pairs needs a pure field state")
        out = np.zeros(times.size)
        weight, psi = self._components[0]
        for k, t in enumerate(times):
            u = self._pair_unitary(float(t))
            out[k] = _pure_cut_negativity(u @ psi @ u.T)
        return out


def _jc_pair_operator(p: ModelParams) -> HermitianOperator:
    d = p.n_max + 1
    a = destroy(d)
    h = np.sqrt(2) * p.g * np.kron(np.array([[0, 1], [0, 0]], dtype=complex), a)
    h = h + h.conj().T
    if p.omega0 != 0.0:
        n_pair = np.kron(np.diag([1.0, 0.0]), np.eye(d)) + np.kron(np.eye(2), np.diag(np.arange(d)))
        h = h + p.omega0 * n_pair.astype(complex)
    return HermitianOperator(h)


def build_engine(scenario: Scenario) -> _EngineBase:
    if scenario.picture == "general":
        return GeneralEngine(scenario)
    if scenario.picture in ("sc", "tc"):
        return TCEngine(scenario)
    return DJCEngine(scenario)


# ---------------------------------------------------------------------------
# runners and CSV output


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    times: np.ndarray
    series: dict[str, np.ndarray]
    verdict: DynamicsVerdict


def run_scenario(scenario: Scenario) -> ScenarioResult:
    engine = build_engine(scenario)
    times = scenario.times
    series = engine.series(times)
    conc = series.get("concurrence")
    if conc is None:
        conc = np.array([engine.concurrence_at(t) for t in times])
    verdict = engine.verdict(times, conc)
    return ScenarioResult(scenario, times, series, verdict)


def result_to_csv(result: ScenarioResult) -> str:
    sc = result.scenario
    buf = io.StringIO()
    for line in scenario_header(sc):
        buf.write(line + "\n")
    v = result.verdict
    buf.write(f"# verdict = {v.label}\n")
    gen = "" if v.first_generation_time is None else _fmt(v.first_generation_time)
    buf.write(f"# first_generation_time = {gen}\n")
    intervals = ";".join(f"{_fmt(a)}:{_fmt(b)}" for a, b in v.dead_intervals)
    buf.write(f"# dead_intervals = {intervals}\n")
    cols = ["t"] + [m.replace(":", "_") for m in sc.measures]
    buf.write("# columns = " + ",".join(cols) + "\n")
    buf.write(",".join(cols) + "\n")
    for k, t in enumerate(result.times):
        row = [_fmt(t)] + [_fmt(result.series[m][k]) for m in sc.measures]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


@dataclass(frozen=True)
class SweepResult:
    scenario: Scenario
    phi_grid: np.ndarray
    results: tuple[ScenarioResult, ...]


def run_phi_sweep(scenario: Scenario, phi_grid, jobs: int = 1) -> SweepResult:
    """Evaluate the scenario at every phi on the grid (general picture)."""
    phi_grid = np.asarray(sorted(float(p) for p in phi_grid))
    if phi_grid.size == 0:
        raise ConfigError("empty phi grid")
    if phi_grid.min() < 0 or phi_grid.max() >= 2 * np.pi:
        raise ConfigError("phi grid must lie within [0, 2*pi)")

    def one(phi: float) -> ScenarioResult:
        sub = replace(
            scenario,
            name=scenario.name,
            picture="general",
            params=replace(scenario.params, phi=phi),
        )
        return run_scenario(sub)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = tuple(pool.map(one, phi_grid))
    else:
        results = tuple(one(p) for p in phi_grid)
    return SweepResult(scenario, phi_grid, results)


def sweep_to_csv(sweep: SweepResult) -> str:
    sc = sweep.scenario
    buf = io.StringIO()
    for line in scenario_header(sc):
        buf.write(line + "\n")
    buf.write(f"# phi_grid = {','.join(_fmt(p) for p in sweep.phi_grid)}\n")
    cols = ["phi", "t"] + [m.replace(":", "_") for m in sc.measures]
    buf.write("# columns = " + ",".join(cols) + "\n")
    buf.write(",".join(cols) + "\n")
    for phi, result in zip(sweep.phi_grid, sweep.results):
        for k, t in enumerate(result.times):
            row = [_fmt(phi), _fmt(t)] + [_fmt(result.series[m][k]) for m in sc.measures]
            buf.write(",".join(row) + "\n")
    return buf.getvalue()


def sweep_verdicts_to_csv(sweep: SweepResult) -> str:
    buf = io.StringIO()
    for line in scenario_header(sweep.scenario):
        buf.write(line + "\n")
    buf.write("phi,label,first_generation_time,n_dead_intervals,max_dead_interval,min_after_generation\n")
    for phi, result in zip(sweep.phi_grid, sweep.results):
        v = result.verdict
        gen = "" if v.first_generation_time is None else _fmt(v.first_generation_time)
        widths = [hi - lo for lo, hi in v.dead_intervals]
        buf.write(
            ",".join(
                [
                    _fmt(phi),
                    v.label,
                    gen,
                    str(len(v.dead_intervals)),
                    _fmt(max(widths) if widths else 0.0),
                    "" if v.min_after_generation is None else _fmt(v.min_after_generation),
                ]
            )
            + "\n"
        )
    return buf.getvalue()
