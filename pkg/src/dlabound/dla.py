"""Dynamical Lie algebra closure of Pauli-sum generator sets.

The closure is the fixed point of nested stored commutators, tracked on an
orthonormal basis under the Hilbert-Schmidt inner product.  A dense-matrix
rank oracle provides an independent second route for small qubit counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import PauliSum, commutator_terms, to_dense

# Residual norm above which an orthogonalized candidate enters the basis.
CLOSURE_ADMIT_TOL = 1e-10

# The dense rank oracle is intended as a cross-check, not a production path.
ORACLE_QUBIT_CAP = 4

BOUNDARIES = ("open", "closed")


@dataclass(frozen=True)
class GeneratorSet:
    """A named set of Hermitian Pauli-sum generators on a fixed qubit count."""

    n_qubits: int
    generators: tuple[PauliSum, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("generator set is empty")
        for g in self.generators:
            if g.n_qubits != self.n_qubits:
                raise ValueError(
                    f"generator on {g.n_qubits} qubits in a {self.n_qubits}-qubit set"
                )


@dataclass(frozen=True)
class DlaBasis:
    """Orthonormal closure basis with bookkeeping from the sweep loop."""

    n_qubits: int
    basis: tuple[PauliSum, ...]
    dim: int
    depth_reached: int
    truncated: bool


def _inner(u: dict[str, float], v: dict[str, float]) -> float:
    if len(u) > len(v):
        u, v = v, u
    return sum(c * v.get(w, 0.0) for w, c in u.items())


def _orthogonalize(vec: dict[str, float], basis: list[dict[str, float]], tol: float) -> dict[str, float] | None:
    """Two-pass Gram-Schmidt; returns the normalized residual or None."""
    v = dict(vec)
    for _ in range(2):
        for b in basis:
            ov = _inner(v, b)
            if ov == 0.0:
                continue
            for w, c in b.items():
                v[w] = v.get(w, 0.0) - ov * c
    nrm = math.sqrt(sum(c * c for c in v.values()))
    if nrm <= tol:
        return None
    return {w: c / nrm for w, c in v.items() if abs(c) > 0.0}


def lie_closure(gens: GeneratorSet, max_dim: int | None = None, tol: float = CLOSURE_ADMIT_TOL) -> DlaBasis:
    """Breadth-first Lie closure of a generator set.

    Each sweep commutes the previous sweep's admissions against the basis as
    it stood when the sweep began; candidates join the basis when their
    Gram-Schmidt residual norm exceeds tol.  Stops at the fixed point, or with
    truncated=True if an admissible candidate appears once dim == max_dim.
    """
    n = gens.n_qubits
    hard_cap = 4 ** n - 1
    if max_dim is None:
        max_dim = hard_cap
    if max_dim < 1:
        raise ValueError("max_dim must be positive")
    max_dim = min(max_dim, hard_cap)

    basis: list[dict[str, float]] = []
    truncated = False

    def admit(candidate: dict[str, float]) -> dict[str, float] | None:
        nonlocal truncated
        res = _orthogonalize(candidate, basis, tol)
        if res is None:
            return None
        if len(basis) >= max_dim:
            truncated = True
            return None
        basis.append(res)
        return res

    frontier: list[dict[str, float]] = []
    for g in gens.generators:
        res = admit(dict(g.terms))
        if res is not None:
            frontier.append(res)
        if truncated:
            break

    depth = 0
    while frontier and not truncated:
        snapshot = list(basis)
        new: list[dict[str, float]] = []
        for f in frontier:
            for b in snapshot:
                cand = commutator_terms(f, b)
                if not cand:
                    continue
                res = admit(cand)
                if res is not None:
                    new.append(res)
                if truncated:
                    break
            if truncated:
                break
        if new:
            depth += 1
        frontier = new

    elements = tuple(PauliSum.from_dict(n, b) for b in basis)
    return DlaBasis(n, elements, len(elements), depth, truncated)


def dla_dimension(gens: GeneratorSet, max_dim: int | None = None) -> int:
    """Dimension of the Lie closure (length of the orthonormal basis)."""
    return lie_closure(gens, max_dim=max_dim).dim


def closure_oracle_dense(gens: GeneratorSet, max_dim: int | None = None, svd_tol: float = 1e-8) -> int:
    """Closure dimension by dense matrices and numeric rank.

    Independent route: materializes every element, tracks real-linear
    independence by a singular-value threshold on stacked vectorizations
    (rows normalized to unit Frobenius norm).  Capped at ORACLE_QUBIT_CAP.
    """
    n = gens.n_qubits
    if n > ORACLE_QUBIT_CAP:
        raise ValueError(f"dense closure oracle capped at {ORACLE_QUBIT_CAP} qubits")
    hard_cap = 4 ** n - 1
    max_dim = hard_cap if max_dim is None else min(max_dim, hard_cap)

    def vec(m: np.ndarray) -> np.ndarray:
        flat = m.reshape(-1)
        return np.concatenate([flat.real, flat.imag])

    rows: list[np.ndarray] = []

    def rank_with(extra: np.ndarray) -> int:
        stack = np.vstack(rows + [extra]) if rows else extra[None, :]
        s = np.linalg.svd(stack, compute_uv=False)
        return int(np.sum(s > svd_tol))

    accepted: list[np.ndarray] = []

    def admit(m: np.ndarray) -> bool:
        nrm = np.linalg.norm(m)
        if nrm < 1e-12:
            return False
        m = m / nrm
        v = vec(m)
        if rank_with(v) > len(rows):
            rows.append(v)
            accepted.append(m)
            return True
        return False

    frontier: list[np.ndarray] = []
    for g in gens.generators:
        m = to_dense(g)
        if admit(m):
            frontier.append(accepted[-1])
        if len(accepted) >= max_dim:
            return len(accepted)

    while frontier:
        snapshot = list(accepted)
        new: list[np.ndarray] = []
        for f in frontier:
            for b in snapshot:
                c = -1j * (f @ b - b @ f)
                if admit(c):
                    new.append(accepted[-1])
                if len(accepted) >= max_dim:
                    return len(accepted)
        frontier = new
    return len(accepted)


def tfim_generators(n: int, boundary: str) -> GeneratorSet:
    """Transverse-field Ising generator pair on a chain of n qubits.

    Generator 1 is the sum of nearest-neighbour ZZ couplings (n-1 bonds open,
    n bonds closed; the closed n=2 wraparound bond duplicates the single bond
    and is kept as a coefficient-2 term).  Generator 2 is the transverse sum
    of single-qubit X.
    """
    if n < 2:
        raise ValueError("chain needs at least 2 qubits")
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    n_bonds = n - 1 if boundary == "open" else n
    zz: dict[str, float] = {}
    for i in range(n_bonds):
        j = (i + 1) % n
        letters = ["I"] * n
        letters[i] = "Z"
        letters[j] = "Z"
        word = "".join(letters)
        zz[word] = zz.get(word, 0.0) + 1.0
    xs: dict[str, float] = {}
    for i in range(n):
        letters = ["I"] * n
        letters[i] = "X"
        xs["".join(letters)] = 1.0
    return GeneratorSet(
        n,
        (PauliSum.from_dict(n, zz), PauliSum.from_dict(n, xs)),
        label=f"tfim-{boundary}-{n}",
    )


def tfim_hamiltonian(n: int, boundary: str) -> PauliSum:
    """Sum of the TFIM generator pair with unit coefficients.

    Defined for n >= 1: at n = 1 there are no coupling bonds (the closed
    wraparound bond collapses to Z*Z = identity, a dropped constant), so
    the Hamiltonian is the lone transverse X.
    """
    if n < 1:
        raise ValueError("chain needs at least 1 qubit")
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    terms: dict[str, float] = {}
    n_bonds = n - 1 if boundary == "open" else n
    for i in range(n_bonds):
        j = (i + 1) % n
        if i == j:
            continue
        letters = ["I"] * n
        letters[i] = "Z"
        letters[j] = "Z"
        word = "".join(letters)
        terms[word] = terms.get(word, 0.0) + 1.0
    for i in range(n):
        letters = ["I"] * n
        letters[i] = "X"
        word = "".join(letters)
        terms[word] = terms.get(word, 0.0) + 1.0
    return PauliSum.from_dict(n, terms)


def tfim_reference_dimension(n: int, boundary: str) -> int:
    """Commonly quoted closed-form dimensions for these generator sets.

    n**2 for the open chain, n for the closed chain.  Reported side by side
    with the computed closure; the computed value is authoritative here.
    """
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    return n * n if boundary == "open" else n


def generator_set_to_text(gens: GeneratorSet) -> str:
    """Serialize a generator set: Pauli-sum blocks separated by blank lines."""
    from .pauli import to_text

    return "\n\n".join(to_text(g) for g in gens.generators) + "\n"


def generator_set_from_text(text: str, label: str = "") -> GeneratorSet:
    """Parse blank-line separated Pauli-sum blocks into a generator set."""
    from .pauli import from_text

    blocks: list[str] = []
    current: list[str] = []
    for raw in text.splitlines():
        if raw.strip():
            current.append(raw)
        elif current:
            blocks.append("\n".join(current))
            current = []
    if current:
        blocks.append("\n".join(current))
    if not blocks:
        raise ValueError("no generators found in text")
    sums = [from_text(b) for b in blocks]
    n = sums[0].n_qubits
    return GeneratorSet(n, tuple(sums), label=label)
