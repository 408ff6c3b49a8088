"""Exact algebra of n-qubit Pauli strings and real-weighted Pauli sums.

Hermitian convention: a stored sum H represents the Lie-algebra element iH,
so nested commutators of stored elements keep real coefficients.  Qubit 0 is
the leftmost letter of a word and the most significant bit of a dense index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

LETTERS = "IXYZ"
IDENTITY_PHASES = (1 + 0j, -1 + 0j, 1j, -1j)

# Coefficients with magnitude at or below this are dropped on construction.
PRUNE_TOL = 1e-12

# Dense materialization refuses above this qubit count unless the caller
# raises the cap explicitly.
DENSE_QUBIT_CAP = 10

# Single-letter products a*b -> (phase, letter).
_MUL1 = {
    ("I", "I"): (1 + 0j, "I"),
    ("I", "X"): (1 + 0j, "X"),
    ("I", "Y"): (1 + 0j, "Y"),
    ("I", "Z"): (1 + 0j, "Z"),
    ("X", "I"): (1 + 0j, "X"),
    ("Y", "I"): (1 + 0j, "Y"),
    ("Z", "I"): (1 + 0j, "Z"),
    ("X", "X"): (1 + 0j, "I"),
    ("Y", "Y"): (1 + 0j, "I"),
    ("Z", "Z"): (1 + 0j, "I"),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

_DENSE1 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class QubitCountMismatch(ValueError):
    """Operands act on different qubit counts."""


class DenseCapExceeded(ValueError):
    """Dense materialization requested above the qubit cap."""


def _check_word(word: str, n_qubits: int) -> None:
    if len(word) != n_qubits:
        raise ValueError(f"word {word!r} has length {len(word)}, expected {n_qubits}")
    bad = set(word) - set(LETTERS)
    if bad:
        raise ValueError(f"word {word!r} contains letters outside IXYZ: {sorted(bad)}")


@dataclass(frozen=True)
class PauliString:
    """A single Pauli word with a phase in {+1, -1, +i, -i}."""

    n_qubits: int
    word: str
    phase: complex = 1 + 0j

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        _check_word(self.word, self.n_qubits)
        if self.phase not in IDENTITY_PHASES:
            raise ValueError(f"phase must be a fourth root of unity, got {self.phase!r}")

    def to_dense(self) -> np.ndarray:
        """Dense matrix including the phase, qubit 0 as the leftmost kron factor."""
        out = np.array([[self.phase]], dtype=complex)
        for letter in self.word:
            out = np.kron(out, _DENSE1[letter])
        return out


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Product of two Pauli strings with the accumulated phase.

    Examples
    --------
    >>> pauli_mul(PauliString(2, "XZ"), PauliString(2, "YZ"))
    PauliString(n_qubits=2, word='ZI', phase=1j)
    """
    if a.n_qubits != b.n_qubits:
        raise QubitCountMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")
    phase = a.phase * b.phase
    out = []
    for la, lb in zip(a.word, b.word):
        ph, lc = _MUL1[la, lb]
        phase *= ph
        out.append(lc)
    return PauliString(a.n_qubits, "".join(out), phase)


def _word_product(wa: str, wb: str) -> tuple[bool, complex, str]:
    """(anticommute?, phase, word) for the product of two bare words."""
    phase = 1 + 0j
    diff = 0
    out = []
    for la, lb in zip(wa, wb):
        ph, lc = _MUL1[la, lb]
        phase *= ph
        out.append(lc)
        if la != "I" and lb != "I" and la != lb:
            diff += 1
    return diff % 2 == 1, phase, "".join(out)


def words_commute(wa: str, wb: str) -> bool:
    """Two Pauli words commute iff they differ at an even number of non-identity sites."""
    diff = 0
    for la, lb in zip(wa, wb):
        if la != "I" and lb != "I" and la != lb:
            diff += 1
    return diff % 2 == 0


@dataclass(frozen=True)
class PauliSum:
    """Real linear combination of non-identity Pauli words (a Hermitian operator).

    Terms are canonicalized on construction: duplicates merged, identity word
    and coefficients below PRUNE_TOL dropped, words sorted lexicographically.
    """

    n_qubits: int
    terms: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        identity = "I" * self.n_qubits
        acc: dict[str, float] = {}
        for word, coeff in self.terms:
            _check_word(word, self.n_qubits)
            if isinstance(coeff, complex):
                if abs(coeff.imag) > PRUNE_TOL:
                    raise TypeError(f"coefficient for {word!r} is not real: {coeff!r}")
                coeff = coeff.real
            acc[word] = acc.get(word, 0.0) + float(coeff)
        cleaned = tuple(
            (w, c)
            for w, c in sorted(acc.items())
            if w != identity and abs(c) > PRUNE_TOL
        )
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_dict(cls, n_qubits: int, terms: Mapping[str, float] | Iterable[tuple[str, float]]) -> "PauliSum":
        items = terms.items() if isinstance(terms, Mapping) else terms
        return cls(n_qubits, tuple(items))

    @classmethod
    def single(cls, n_qubits: int, word: str, coeff: float = 1.0) -> "PauliSum":
        return cls(n_qubits, ((word, coeff),))

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits, ())

    def coeff(self, word: str) -> float:
        for w, c in self.terms:
            if w == word:
                return c
        return 0.0

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise QubitCountMismatch(f"{self.n_qubits} vs {other.n_qubits} qubits")
        return PauliSum(self.n_qubits, self.terms + other.terms)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __neg__(self) -> "PauliSum":
        return (-1.0) * self

    def __rmul__(self, scalar: float) -> "PauliSum":
        s = float(scalar)
        return PauliSum(self.n_qubits, tuple((w, s * c) for w, c in self.terms))

    def hs_norm(self) -> float:
        return math.sqrt(hs_inner(self, self))


def hs_inner(a: PauliSum, b: PauliSum) -> float:
    """Hilbert-Schmidt inner product Tr[a b] / 2^n = coefficient dot product.

    Examples
    --------
    >>> hs_inner(PauliSum.from_dict(1, {"X": 2, "Z": 3}), PauliSum.from_dict(1, {"X": 1, "Z": -1}))
    -1.0
    """
    if a.n_qubits != b.n_qubits:
        raise QubitCountMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")
    if len(a.terms) > len(b.terms):
        a, b = b, a
    lookup = dict(b.terms)
    return sum(c * lookup.get(w, 0.0) for w, c in a.terms)


def commutator_terms(ta: Mapping[str, float], tb: Mapping[str, float]) -> dict[str, float]:
    """Coefficient-level kernel for the stored commutator -i[A, B].

    Contributions: anticommuting word pairs only; each gives a real
    coefficient 2*ca*cb*(-i*phase) where phase is the product phase (one
    of +i/-i for anticommuting words).
    """
    acc: dict[str, float] = {}
    for wa, ca in ta.items():
        for wb, cb in tb.items():
            anti, phase, word = _word_product(wa, wb)
            if not anti:
                continue
            coeff = 2.0 * ca * cb * (phase * -1j).real
            acc[word] = acc.get(word, 0.0) + coeff
    return acc


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """Stored commutator C = -i[A, B], Hermitian with real coefficients.

    dense(C) equals -i (dense(a) dense(b) - dense(b) dense(a)); e.g. the
    commutator of X and Y is stored as the coefficient-2 Z sum.
    """
    if a.n_qubits != b.n_qubits:
        raise QubitCountMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")
    return PauliSum.from_dict(a.n_qubits, commutator_terms(dict(a.terms), dict(b.terms)))


def to_dense(h: PauliSum, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Dense 2^n x 2^n complex matrix of a Pauli sum, qubit 0 most significant."""
    if h.n_qubits > cap:
        raise DenseCapExceeded(f"{h.n_qubits} qubits exceeds the dense cap of {cap}")
    dim = 2 ** h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for word, coeff in h.terms:
        m = np.array([[1.0]], dtype=complex)
        for letter in word:
            m = np.kron(m, _DENSE1[letter])
        out += coeff * m
    return out


def operator_norm(h: PauliSum, cap: int = DENSE_QUBIT_CAP) -> float:
    """Spectral norm (largest |eigenvalue|) via a dense eigensolve."""
    if h.is_zero():
        return 0.0
    vals = np.linalg.eigvalsh(to_dense(h, cap=cap))
    return float(np.max(np.abs(vals)))


def random_density_matrix(dim: int, seed: int | np.random.Generator) -> np.ndarray:
    """Random density matrix (Ginibre construction): PSD, unit trace."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def to_text(h: PauliSum) -> str:
    """Serialize one Pauli sum, one `<coefficient> <word>` line per term.

    Lines are ordered lexicographically by word; coefficients use repr so
    parsing round-trips bitwise.
    """
    return "\n".join(f"{c!r} {w}" for w, c in h.terms)


def from_text(text: str, n_qubits: int | None = None) -> PauliSum:
    """Parse the text format produced by to_text.

    The qubit count is inferred from the first word unless given. A blank
    body is only valid when n_qubits is supplied (yields the zero sum).
    """
    terms: list[tuple[str, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<coefficient> <word>', got {raw!r}")
        coeff_s, word = parts
        try:
            coeff = float(coeff_s)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad coefficient {coeff_s!r}") from exc
        if n_qubits is None:
            n_qubits = len(word)
        terms.append((word, coeff))
    if n_qubits is None:
        raise ValueError("empty Pauli text and no qubit count supplied")
    return PauliSum(n_qubits, tuple(terms))
