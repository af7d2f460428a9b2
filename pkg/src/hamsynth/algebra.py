"""Operator algebra for Hamiltonians written in the single-component basis.

A Hamiltonian is a sum of terms, each a complex coefficient times a tensor
product of single-qubit symbols drawn from ``{I, X, Y, Z, n, o, s, sd}``
(number, hole, lowering and raising operators alongside the Paulis).  A term
may carry the ``hermitized`` flag, in which case it denotes ``z*A + conj(z)*A``
adjoint, which is the natural way to write ladder-operator Hamiltonians.

Conventions used throughout the package:

* ``|0>`` is the first basis vector, so ``Lower = |0><1|`` and
  ``Raise = |1><0|`` (the raising operator maps ``|0>`` to ``|1>``).
* qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
  basis-state index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "Symbol",
    "Term",
    "HamiltonianExpr",
    "PauliString",
    "DimensionError",
    "FormalismError",
    "HermitizationRule",
    "dense_of_term",
    "dense_of_expr",
    "dense_of_pauli_string",
    "to_pauli_sum",
    "convert_formalism",
    "hermitize_nonhermitian",
    "merge_terms",
    "symbol_product",
]

#: coefficients with magnitude below this are treated as zero when merging
COEFF_TOLERANCE = 1e-15

#: dense constructions refuse to build operators on more qubits than this
MAX_DENSE_QUBITS = 12


class DimensionError(ValueError):
    """Raised when a dense construction would exceed the supported size."""


class FormalismError(ValueError):
    """Raised when an operator is not expressible in the requested formalism."""


class Symbol(Enum):
    """Single-qubit operator symbols."""

    Id = "I"
    X = "X"
    Y = "Y"
    Z = "Z"
    Num = "n"
    Hole = "o"
    Lower = "s"
    Raise = "sd"

    @property
    def matrix(self) -> np.ndarray:
        return _SYMBOL_MATRICES[self]

    @property
    def is_hermitian(self) -> bool:
        return self not in (Symbol.Lower, Symbol.Raise)

    @property
    def is_diagonal(self) -> bool:
        return self in (Symbol.Id, Symbol.Z, Symbol.Num, Symbol.Hole)

    @property
    def adjoint(self) -> "Symbol":
        if self is Symbol.Lower:
            return Symbol.Raise
        if self is Symbol.Raise:
            return Symbol.Lower
        return self


_SYMBOL_MATRICES: dict[Symbol, np.ndarray] = {
    Symbol.Id: np.eye(2, dtype=complex),
    Symbol.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Symbol.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    Symbol.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    Symbol.Num: np.array([[0, 0], [0, 1]], dtype=complex),
    Symbol.Hole: np.array([[1, 0], [0, 0]], dtype=complex),
    Symbol.Lower: np.array([[0, 1], [0, 0]], dtype=complex),
    Symbol.Raise: np.array([[0, 0], [1, 0]], dtype=complex),
}

# Single-qubit products `a @ b -> (scalar, symbol)`; scalar 0 means the
# product vanishes.  Only the closure actually reachable from ladder/Z algebra
# is tabulated; X/Y products fall outside and are rejected.
_PRODUCT_TABLE: dict[tuple[Symbol, Symbol], tuple[complex, Symbol]] = {}


def _init_product_table() -> None:
    closed = [Symbol.Id, Symbol.Z, Symbol.Num, Symbol.Hole, Symbol.Lower, Symbol.Raise]
    for a in closed:
        for b in closed:
            prod = a.matrix @ b.matrix
            if np.allclose(prod, 0):
                _PRODUCT_TABLE[(a, b)] = (0.0, Symbol.Id)
                continue
            for cand in closed:
                ref = cand.matrix
                mask = ref != 0
                if not np.array_equal(prod != 0, mask):
                    continue
                scale = prod[mask][0] / ref[mask][0]
                if np.allclose(prod, scale * ref):
                    _PRODUCT_TABLE[(a, b)] = (complex(scale), cand)
                    break
            else:  # pragma: no cover - the algebra above is closed
                raise AssertionError(f"product {a} @ {b} not in closure")


_init_product_table()


def symbol_product(a: Symbol, b: Symbol) -> tuple[complex, Symbol]:
    """Product ``a @ b`` as ``(scalar, symbol)``; scalar 0 if it vanishes."""
    try:
        return _PRODUCT_TABLE[(a, b)]
    except KeyError:
        raise FormalismError(f"product {a.value} @ {b.value} leaves the ladder/Z algebra")


@dataclass(frozen=True)
class Term:
    """One summand: ``coefficient * (tensor of factors)``, optionally + h.c.

    ``factors`` maps qubit index to symbol; absent indices act as identity.
    A non-hermitized term must already be Hermitian (no ladder factors, real
    coefficient).  Pass ``check=False`` only for raw algebra intermediates
    such as single Jordan-Wigner ladder operators.
    """

    coefficient: complex
    factors: Mapping[int, Symbol]
    hermitized: bool = False
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        clean = {int(q): s for q, s in self.factors.items() if s is not Symbol.Id}
        object.__setattr__(self, "factors", clean)
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        if any(q < 0 for q in clean):
            raise ValueError("qubit indices must be non-negative")
        if self.check and not self.hermitized:
            if any(not s.is_hermitian for s in clean.values()):
                raise ValueError(
                    "plain term contains ladder operators; mark it hermitized"
                )
            if abs(self.coefficient.imag) > COEFF_TOLERANCE:
                raise ValueError("plain term requires a real coefficient")

    @property
    def max_index(self) -> int:
        return max(self.factors, default=-1)

    @property
    def qubit_span(self) -> int:
        return self.max_index + 1

    def symbol_at(self, qubit: int) -> Symbol:
        return self.factors.get(qubit, Symbol.Id)

    def merge_key(self) -> tuple:
        return (tuple(sorted((q, s.value) for q, s in self.factors.items())), self.hermitized)

    def adjoint_factors(self) -> dict[int, Symbol]:
        return {q: s.adjoint for q, s in self.factors.items()}


@dataclass(frozen=True)
class HamiltonianExpr:
    """A sum of terms over a fixed qubit register."""

    num_qubits: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if t.max_index >= self.num_qubits:
                raise ValueError(
                    f"term touches qubit {t.max_index} but register has "
                    f"{self.num_qubits} qubits"
                )


@dataclass(frozen=True)
class PauliString:
    """``coefficient * tensor(letters)`` with letters in {X, Y, Z}."""

    coefficient: complex
    letters: Mapping[int, str]

    def __post_init__(self):
        object.__setattr__(self, "letters", dict(self.letters))
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        if any(l not in "XYZ" for l in self.letters.values()):
            raise ValueError("letters must be X, Y or Z")

    @property
    def weight(self) -> int:
        return len(self.letters)

    def letter_key(self) -> tuple:
        return tuple(sorted(self.letters.items()))


def merge_terms(terms: Iterable[Term]) -> list[Term]:
    """Sum coefficients of terms with identical factor maps, dropping zeros."""
    acc: dict[tuple, Term] = {}
    coef: dict[tuple, complex] = {}
    for t in terms:
        k = t.merge_key()
        coef[k] = coef.get(k, 0) + t.coefficient
        acc[k] = t
    out = []
    for k, t in acc.items():
        if abs(coef[k]) <= COEFF_TOLERANCE:
            continue
        out.append(Term(coef[k], t.factors, t.hermitized, check=t.check))
    out.sort(key=lambda t: t.merge_key())
    return out


def _check_dense_size(num_qubits: int) -> None:
    if num_qubits > MAX_DENSE_QUBITS:
        raise DimensionError(
            f"dense operator on {num_qubits} qubits exceeds the "
            f"{MAX_DENSE_QUBITS}-qubit limit"
        )


def dense_of_term(term: Term, num_qubits: int) -> np.ndarray:
    """Dense matrix of a term, including the +h.c. part when hermitized."""
    if term.max_index >= num_qubits:
        raise ValueError("term index out of range")
    _check_dense_size(num_qubits)
    mat = np.array([[term.coefficient]])
    for q in range(num_qubits):
        mat = np.kron(mat, term.symbol_at(q).matrix)
    if term.hermitized:
        mat = mat + mat.conj().T
    return mat


def dense_of_expr(expr: HamiltonianExpr) -> np.ndarray:
    _check_dense_size(expr.num_qubits)
    dim = 2**expr.num_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for t in expr.terms:
        out += dense_of_term(t, expr.num_qubits)
    return out


def dense_of_pauli_string(ps: PauliString, num_qubits: int) -> np.ndarray:
    _check_dense_size(num_qubits)
    mat = np.array([[ps.coefficient]])
    for q in range(num_qubits):
        letter = ps.letters.get(q)
        mat = np.kron(mat, Symbol(letter).matrix if letter else np.eye(2))
    return mat


# Pauli expansion of each symbol: list of (coefficient, letter-or-None).
_PAULI_EXPANSION: dict[Symbol, tuple[tuple[complex, str | None], ...]] = {
    Symbol.Id: ((1.0, None),),
    Symbol.X: ((1.0, "X"),),
    Symbol.Y: ((1.0, "Y"),),
    Symbol.Z: ((1.0, "Z"),),
    Symbol.Num: ((0.5, None), (-0.5, "Z")),
    Symbol.Hole: ((0.5, None), (0.5, "Z")),
    Symbol.Lower: ((0.5, "X"), (0.5j, "Y")),
    Symbol.Raise: ((0.5, "X"), (-0.5j, "Y")),
}


def to_pauli_sum(term: Term) -> list[PauliString]:
    """Expand a term into Pauli strings.

    The dense sum of the returned strings equals ``dense_of_term`` exactly;
    strings with distinct letter patterns are returned in a deterministic
    order and zero-coefficient strings are dropped.  The string count grows
    as ``2**k`` with ``k`` the number of non-Pauli factors.
    """
    acc: dict[tuple, complex] = {}
    items = sorted(term.factors.items())

    def walk(pos: int, coef: complex, letters: tuple):
        if pos == len(items):
            key = letters
            acc[key] = acc.get(key, 0) + coef
            return
        q, sym = items[pos]
        for c, letter in _PAULI_EXPANSION[sym]:
            nxt = letters + ((q, letter),) if letter else letters
            walk(pos + 1, coef * c, nxt)

    walk(0, 1.0, ())
    out = []
    for key, c in acc.items():
        if term.hermitized:
            # (z*A + conj(z*A)) expands on the same letter patterns with the
            # conjugate coefficients, so each string picks up 2*Re(z*c).
            total = 2 * (term.coefficient * c).real
        else:
            total = term.coefficient * c
        if abs(total) <= COEFF_TOLERANCE:
            continue
        out.append(PauliString(total, dict(key)))
    out.sort(key=lambda p: p.letter_key())
    return out


# Expansions used by the Z-form <-> n-form switch; values are
# (coefficient, replacement-symbol-or-None) with None meaning identity.
_TO_Z_FORM = {
    Symbol.Id: ((1.0, None),),
    Symbol.Z: ((1.0, Symbol.Z),),
    Symbol.Num: ((0.5, None), (-0.5, Symbol.Z)),
    Symbol.Hole: ((0.5, None), (0.5, Symbol.Z)),
}
_TO_N_FORM = {
    Symbol.Id: ((1.0, None),),
    Symbol.Num: ((1.0, Symbol.Num),),
    Symbol.Hole: ((1.0, None), (-1.0, Symbol.Num)),
    Symbol.Z: ((1.0, None), (-2.0, Symbol.Num)),
}


def convert_formalism(expr: HamiltonianExpr, target: str) -> HamiltonianExpr:
    """Rewrite a diagonal expression in the ``"Z"`` or ``"n"`` formalism.

    A single order-k term expands into ``2**k - 1`` non-constant terms plus
    an identity-proportional one; like terms are merged.  Raises
    :class:`FormalismError` on non-diagonal factors.
    """
    if target not in ("Z", "n"):
        raise ValueError("target formalism must be 'Z' or 'n'")
    table = _TO_Z_FORM if target == "Z" else _TO_N_FORM
    converted: list[Term] = []
    for term in expr.terms:
        if any(not s.is_diagonal for s in term.factors.values()):
            raise FormalismError("formalism conversion requires a diagonal term")
        coefficient = term.coefficient
        if term.hermitized:
            # a hermitized diagonal term is just twice the real part
            coefficient = 2 * coefficient.real
        expansions = [[(c, q, s) for c, s in table[sym]] for q, sym in sorted(term.factors.items())]
        partial: list[tuple[complex, dict[int, Symbol]]] = [(coefficient, {})]
        for options in expansions:
            nxt = []
            for coef, factors in partial:
                for c, q, s in options:
                    f = dict(factors)
                    if s is not None:
                        f[q] = s
                    nxt.append((coef * c, f))
            partial = nxt
        for coef, factors in partial:
            converted.append(Term(coef.real, factors, hermitized=False))
    return HamiltonianExpr(expr.num_qubits, tuple(merge_terms(converted)))


@dataclass(frozen=True)
class HermitizationRule:
    """How vectors embed into the doubled space of a hermitized operator.

    Inputs enter as ``|0> (x) a`` (the first block); the image ``A a`` is read
    from the ``|1>`` block of the output.
    """

    dim: int

    def embed(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=complex).reshape(-1)
        if a.shape[0] != self.dim:
            raise ValueError("vector dimension mismatch")
        return np.concatenate([a, np.zeros(self.dim, dtype=complex)])

    def extract(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape[0] != 2 * self.dim:
            raise ValueError("vector dimension mismatch")
        return v[self.dim :]


def hermitize_nonhermitian(a: np.ndarray) -> tuple[np.ndarray, HermitizationRule]:
    """Embed an arbitrary square matrix into a Hermitian one of double size.

    Returns ``H = Raise (x) A + h.c.`` together with the embedding rule; for
    every vector ``a``, ``H (|0> (x) a) = |1> (x) (A a)`` holds exactly.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("input must be a square matrix")
    if a.shape[0] > 2**MAX_DENSE_QUBITS // 2:
        raise DimensionError("matrix too large to hermitize densely")
    dim = a.shape[0]
    zero = np.zeros_like(a)
    h = np.block([[zero, a.conj().T], [a, zero]])
    return h, HermitizationRule(dim)
