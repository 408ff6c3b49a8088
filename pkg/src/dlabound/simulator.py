"""Dense state-vector simulator for the encoding/ansatz/target circuits.

Conventions: qubit 0 is the most significant bit of the state index;
R_Y(t) = exp(-i t Y / 2) and R_Z(t) = exp(-i t Z / 2); Hamiltonian factors
evolve as exp(+i t H) via a one-time eigendecomposition of H.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dla import tfim_hamiltonian
from .pauli import PauliSum, from_text, to_dense, to_text

GATE_KINDS = ("ry", "rz", "cnot", "ham")
BIND_KINDS = ("fixed", "theta", "x")

# Eigendecomposition must reconstruct the Hamiltonian to this accuracy.
EIG_RECONSTRUCTION_TOL = 1e-9


@dataclass(frozen=True)
class Binding:
    """Where a gate angle comes from: a constant, a trainable slot, or a feature."""

    kind: str
    value: float = 0.0
    index: int = -1

    def __post_init__(self) -> None:
        if self.kind not in BIND_KINDS:
            raise ValueError(f"binding kind must be one of {BIND_KINDS}, got {self.kind!r}")
        if self.kind != "fixed" and self.index < 0:
            raise ValueError(f"{self.kind} binding needs a nonnegative index")


def fixed(value: float) -> Binding:
    return Binding("fixed", value=float(value))


def trainable(index: int) -> Binding:
    return Binding("theta", index=index)


def feature(index: int) -> Binding:
    return Binding("x", index=index)


@dataclass(frozen=True)
class GateSpec:
    """One gate: a rotation, a CNOT, or a shared-Hamiltonian evolution factor."""

    kind: str
    qubits: tuple[int, ...]
    binding: Binding | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"gate kind must be one of {GATE_KINDS}, got {self.kind!r}")
        if self.kind == "cnot":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("cnot needs two distinct qubits")
            if self.binding is not None:
                raise ValueError("cnot takes no angle")
        else:
            if self.binding is None:
                raise ValueError(f"{self.kind} gate needs a binding")
            if self.kind in ("ry", "rz") and len(self.qubits) != 1:
                raise ValueError(f"{self.kind} acts on exactly one qubit")


@dataclass(frozen=True)
class ParamCircuit:
    """A gate list over n qubits; ham gates share one Hamiltonian."""

    n_qubits: int
    gates: tuple[GateSpec, ...]
    hamiltonian: PauliSum | None = None
    layers: int = 1
    reps: int = 1

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        theta_idx: list[int] = []
        for g in self.gates:
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise ValueError(f"gate {g} addresses a qubit outside 0..{self.n_qubits - 1}")
            if g.kind == "ham" and self.hamiltonian is None:
                raise ValueError("ham gate present but no Hamiltonian attached")
            if g.binding is not None and g.binding.kind == "theta":
                theta_idx.append(g.binding.index)
        if sorted(theta_idx) != list(range(len(theta_idx))):
            raise ValueError("trainable indices must be 0..N_t-1, each used once")
        if self.hamiltonian is not None and self.hamiltonian.n_qubits != self.n_qubits:
            raise ValueError("Hamiltonian qubit count differs from the circuit's")

    @property
    def n_trainable(self) -> int:
        return sum(1 for g in self.gates if g.binding is not None and g.binding.kind == "theta")

    @property
    def n_fixed(self) -> int:
        return len(self.gates) - self.n_trainable


@dataclass(frozen=True)
class HamEigen:
    """Cached eigendecomposition of a Hamiltonian for exact exp(+i t H)."""

    values: np.ndarray
    vectors: np.ndarray

    @classmethod
    def from_pauli_sum(cls, h: PauliSum) -> "HamEigen":
        m = to_dense(h)
        vals, vecs = np.linalg.eigh(m)
        err = np.max(np.abs((vecs * vals) @ vecs.conj().T - m))
        if err > EIG_RECONSTRUCTION_TOL:
            raise RuntimeError(f"eigendecomposition reconstruction error {err:.3e}")
        return cls(vals, vecs)


_EIG_CACHE: dict[PauliSum, HamEigen] = {}


def ham_eigen(h: PauliSum) -> HamEigen:
    eig = _EIG_CACHE.get(h)
    if eig is None:
        eig = HamEigen.from_pauli_sum(h)
        _EIG_CACHE[h] = eig
    return eig


def zero_state(n_qubits: int) -> np.ndarray:
    state = np.zeros(2 ** n_qubits, dtype=complex)
    state[0] = 1.0
    return state


def _n_qubits_of(state: np.ndarray) -> int:
    n = int(state.size).bit_length() - 1
    if 2 ** n != state.size:
        raise ValueError(f"state length {state.size} is not a power of two")
    return n


def _apply_single(state: np.ndarray, m2: np.ndarray, qubit: int) -> np.ndarray:
    n = _n_qubits_of(state)
    t = state.reshape([2] * n)
    t = np.moveaxis(t, qubit, 0)
    t = np.tensordot(m2, t, axes=(1, 0))
    t = np.moveaxis(t, 0, qubit)
    return np.ascontiguousarray(t).reshape(-1)


def apply_ry(state: np.ndarray, qubit: int, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    m = np.array([[c, -s], [s, c]], dtype=complex)
    return _apply_single(state, m, qubit)


def apply_rz(state: np.ndarray, qubit: int, angle: float) -> np.ndarray:
    m = np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)
    return _apply_single(state, m, qubit)


def apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    n = _n_qubits_of(state)
    idx = np.arange(state.size)
    cbit = (idx >> (n - 1 - control)) & 1
    src = np.where(cbit == 1, idx ^ (1 << (n - 1 - target)), idx)
    return state[src]


def apply_ham_evolution(state: np.ndarray, eig: HamEigen, theta: float) -> np.ndarray:
    """exp(+i theta H) applied through the eigenbasis (exact, unitary)."""
    phases = np.exp(1j * theta * eig.values)
    return eig.vectors @ (phases * (eig.vectors.conj().T @ state))


def run_circuit(
    circ: ParamCircuit,
    theta: Sequence[float] | np.ndarray | None = None,
    x: Sequence[float] | np.ndarray | None = None,
    state: np.ndarray | None = None,
) -> np.ndarray:
    """Apply a circuit's gates in order, resolving angle bindings."""
    if state is None:
        state = zero_state(circ.n_qubits)
    eig = ham_eigen(circ.hamiltonian) if circ.hamiltonian is not None else None

    def resolve(b: Binding) -> float:
        if b.kind == "fixed":
            return b.value
        if b.kind == "theta":
            if theta is None:
                raise ValueError("circuit has trainable gates but no theta was given")
            return float(theta[b.index])
        if x is None:
            raise ValueError("circuit has feature gates but no x was given")
        return float(x[b.index])

    for g in circ.gates:
        if g.kind == "ry":
            state = apply_ry(state, g.qubits[0], resolve(g.binding))
        elif g.kind == "rz":
            state = apply_rz(state, g.qubits[0], resolve(g.binding))
        elif g.kind == "cnot":
            state = apply_cnot(state, g.qubits[0], g.qubits[1])
        else:
            state = apply_ham_evolution(state, eig, resolve(g.binding))
    return state


def expectation_z0(state: np.ndarray) -> float:
    """Expectation of Z on qubit 0 (the most significant bit)."""
    probs = np.abs(state.reshape(2, -1)) ** 2
    return float(probs[0].sum() - probs[1].sum())


def encoding_circuit(n_qubits: int) -> ParamCircuit:
    """Feature map: two repetitions of an R_Y(x_j) layer plus a CNOT ladder.

    The ladder is control j, target j+1 for j = 0..n-2 (empty for n = 1);
    every feature x_j feeds both R_Y layers.
    """
    gates: list[GateSpec] = []
    for _ in range(2):
        for q in range(n_qubits):
            gates.append(GateSpec("ry", (q,), feature(q)))
        for j in range(n_qubits - 1):
            gates.append(GateSpec("cnot", (j, j + 1)))
    return ParamCircuit(n_qubits, tuple(gates), layers=2)


def target_unitary(
    n_qubits: int,
    betas: Sequence[float],
    gammas: Sequence[float],
    nus: Sequence[float],
) -> ParamCircuit:
    """Label-generating unitary: two layers of per-qubit R_Z R_Y R_Z.

    Each printed factor R_Z(beta) R_Y(gamma) R_Z(nu) is applied rightmost
    first; the layer written leftmost acts last.
    """
    if not (len(betas) == len(gammas) == len(nus) == 2):
        raise ValueError("need exactly two angles per family")
    gates: list[GateSpec] = []
    for layer in (1, 0):
        for q in range(n_qubits):
            gates.append(GateSpec("rz", (q,), fixed(nus[layer])))
            gates.append(GateSpec("ry", (q,), fixed(gammas[layer])))
            gates.append(GateSpec("rz", (q,), fixed(betas[layer])))
    return ParamCircuit(n_qubits, tuple(gates), layers=2)


def ansatz(n_qubits: int, boundary: str, layers: int = 2, reps: int = 10) -> ParamCircuit:
    """Trainable circuit: layers*reps factors exp(+i theta_t H), shared H.

    H is the unit-coefficient sum of the TFIM generator pair; theta index
    t = layer*reps + rep.  All factors commute (same H), so gate order
    within and across layers cannot change the unitary.
    """
    if layers < 1 or reps < 1:
        raise ValueError("layers and reps must be >= 1")
    h = tfim_hamiltonian(n_qubits, boundary)
    gates = tuple(
        GateSpec("ham", tuple(range(n_qubits)), trainable(l * reps + k))
        for l in range(layers)
        for k in range(reps)
    )
    return ParamCircuit(n_qubits, gates, hamiltonian=h, layers=layers, reps=reps)


@dataclass(frozen=True)
class CircuitBundle:
    """Encoder plus ansatz; the model the training loop optimizes."""

    n_qubits: int
    encoder: ParamCircuit
    ansatz: ParamCircuit

    def __post_init__(self) -> None:
        if self.encoder.n_qubits != self.n_qubits or self.ansatz.n_qubits != self.n_qubits:
            raise ValueError("bundle parts disagree on qubit count")

    @property
    def n_trainable(self) -> int:
        return self.ansatz.n_trainable


def make_model(n_qubits: int, boundary: str, layers: int = 2, reps: int = 10) -> CircuitBundle:
    return CircuitBundle(n_qubits, encoding_circuit(n_qubits), ansatz(n_qubits, boundary, layers, reps))


def model_output(x: Sequence[float], theta: Sequence[float], model: CircuitBundle) -> float:
    """<0|U_E(x)^dag U(theta)^dag Z_0 U(theta) U_E(x)|0>, clamped to [-1, 1]."""
    state = run_circuit(model.encoder, x=x)
    state = run_circuit(model.ansatz, theta=theta, state=state)
    return float(np.clip(expectation_z0(state), -1.0, 1.0))


def target_label(x: Sequence[float], v: ParamCircuit, encoder: ParamCircuit | None = None) -> float:
    """Label from the target unitary applied after the same encoder."""
    if encoder is None:
        encoder = encoding_circuit(v.n_qubits)
    state = run_circuit(encoder, x=x)
    state = run_circuit(v, state=state)
    return float(np.clip(expectation_z0(state), -1.0, 1.0))


def _binding_to_dict(b: Binding | None) -> dict | None:
    if b is None:
        return None
    if b.kind == "fixed":
        return {"kind": "fixed", "value": b.value}
    return {"kind": b.kind, "index": b.index}


def _binding_from_dict(d: dict | None) -> Binding | None:
    if d is None:
        return None
    if d["kind"] == "fixed":
        return fixed(d["value"])
    return Binding(d["kind"], index=int(d["index"]))


def circuit_to_dict(circ: ParamCircuit) -> dict:
    return {
        "n_qubits": circ.n_qubits,
        "layers": circ.layers,
        "reps": circ.reps,
        "hamiltonian": None if circ.hamiltonian is None else to_text(circ.hamiltonian),
        "gates": [
            {"kind": g.kind, "qubits": list(g.qubits), "binding": _binding_to_dict(g.binding)}
            for g in circ.gates
        ],
    }


def circuit_from_dict(d: dict) -> ParamCircuit:
    ham = d.get("hamiltonian")
    return ParamCircuit(
        n_qubits=int(d["n_qubits"]),
        gates=tuple(
            GateSpec(g["kind"], tuple(int(q) for q in g["qubits"]), _binding_from_dict(g.get("binding")))
            for g in d["gates"]
        ),
        hamiltonian=None if ham is None else from_text(ham, n_qubits=int(d["n_qubits"])),
        layers=int(d.get("layers", 1)),
        reps=int(d.get("reps", 1)),
    )


def circuit_to_json(circ: ParamCircuit) -> str:
    return json.dumps(circuit_to_dict(circ), indent=2, sort_keys=True)


def circuit_from_json(text: str) -> ParamCircuit:
    return circuit_from_dict(json.loads(text))
