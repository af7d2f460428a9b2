"""Linear-combination-of-unitaries form of single terms.

A hermitized term factors into its transition, number and Pauli parts.  The
number projector is half of identity minus a keyed flip (2 unitaries); the
transition coupler combines a keyed swap with identity and a double flip
(3 unitaries); the Pauli part is already unitary.  Tensor-combining the
families therefore expresses any term as at most six weighted unitaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import COEFF_TOLERANCE, Term, dense_of_term
from .circuits import (
    Circuit,
    Gate,
    GateKind,
    keyed_double_z,
    keyed_x_between,
    projector_flip,
)
from .direct import classify
from .simulate import circuit_unitary

__all__ = [
    "LcuDecomposition",
    "be_number_family",
    "be_transition_family",
    "be_term",
    "split_complex_term",
]


@dataclass(frozen=True)
class LcuDecomposition:
    """Real-weighted unitary circuits summing to a target Hermitian operator."""

    num_qubits: int
    pairs: tuple[tuple[float, Circuit], ...]
    term: Term | None = None

    def __post_init__(self):
        if not 1 <= len(self.pairs) <= 6:
            raise ValueError("a term decomposes into between one and six unitaries")

    def reconstruction(self) -> np.ndarray:
        dim = 2**self.num_qubits
        acc = np.zeros((dim, dim), dtype=complex)
        for c, circ in self.pairs:
            acc += c * circuit_unitary(circ)
        return acc

    def reconstruction_error(self) -> float:
        if self.term is None:
            raise ValueError("decomposition has no target term to verify against")
        target = dense_of_term(self.term, self.num_qubits)
        return float(np.abs(self.reconstruction() - target).max())


def _identity(num_qubits: int) -> Circuit:
    return Circuit(num_qubits, ())


def be_number_family(key: dict[int, int], num_qubits: int | None = None) -> LcuDecomposition:
    """Projector onto a key pattern as half identity minus half a keyed flip."""
    key = {int(q): int(b) for q, b in key.items()}
    if not key:
        raise ValueError("number family requires a non-empty key")
    n = num_qubits if num_qubits is not None else max(key) + 1
    flip = Circuit(n, projector_flip(key).gates)
    return LcuDecomposition(n, ((0.5, _identity(n)), (-0.5, flip)))


def be_transition_family(
    a: dict[int, int], b: dict[int, int], num_qubits: int | None = None
) -> LcuDecomposition:
    """Coupler ``|a><b| + |b><a|`` as keyed-swap plus identity and double flip.

    The swap already couples the pair but fixes the rest of the space; the
    ``-(I + double-flip)/2`` correction cancels that identity action on the
    two keyed states.
    """
    a = {int(q): int(v) for q, v in a.items()}
    b = {int(q): int(v) for q, v in b.items()}
    n = num_qubits if num_qubits is not None else max(a) + 1
    swap = Circuit(n, keyed_x_between(a, b).gates)
    if len(a) < 2:
        # single-qubit pair: the swap alone is the coupler (it is X)
        return LcuDecomposition(n, ((1.0, swap),))
    double = Circuit(n, keyed_double_z(a, b).gates)
    return LcuDecomposition(
        n, ((1.0, swap), (-0.5, _identity(n)), (-0.5, double))
    )


_PAULI_GATES = {
    "X": lambda q: [Gate(GateKind.X, (q,))],
    "Y": lambda q: [Gate(GateKind.Sdg, (q,)), Gate(GateKind.X, (q,)), Gate(GateKind.S, (q,))],
    "Z": lambda q: [Gate(GateKind.Phase, (q,), theta=math.pi)],
}


def _pauli_factor_gates(letters: dict[int, str]) -> list[Gate]:
    gates: list[Gate] = []
    for q in sorted(letters):
        gates.extend(_PAULI_GATES[letters[q]](q))
    return gates


def split_complex_term(term: Term) -> list[Term]:
    """Split a complex-coefficient hermitized term into two block-encodable ones.

    ``z A + conj(z) A^dag`` equals the real-part term plus ``Im(z)`` times
    ``i A - i A^dag``; the latter is returned as a term with a purely
    imaginary coefficient, which :func:`be_term` handles by a phase twist on
    one transition qubit.
    """
    if not term.hermitized:
        raise ValueError("only hermitized terms carry complex coefficients")
    z = term.coefficient
    out = []
    if abs(z.real) > COEFF_TOLERANCE:
        out.append(Term(z.real, term.factors, hermitized=True))
    if abs(z.imag) > COEFF_TOLERANCE:
        out.append(Term(1j * z.imag, term.factors, hermitized=True, check=False))
    return out


def be_term(term: Term, num_qubits: int | None = None) -> LcuDecomposition:
    """Block-encode one term as at most six (coefficient, unitary) pairs.

    The coefficient must be real or purely imaginary; split general complex
    coefficients with :func:`split_complex_term` first.
    """
    part = classify(term)
    n = num_qubits if num_qubits is not None else max(term.qubit_span, 1)
    z = term.coefficient
    imaginary = abs(z.imag) > COEFF_TOLERANCE
    if imaginary and abs(z.real) > COEFF_TOLERANCE:
        raise ValueError(
            "coefficient must be real or purely imaginary; "
            "use split_complex_term first"
        )
    if imaginary and not part.transition_sides:
        raise ValueError("imaginary coefficient on a transition-free term")

    if part.transition_sides:
        scale = z.imag if imaginary else z.real
    else:
        scale = 2 * z.real if term.hermitized else z.real

    pauli_gates = tuple(_pauli_factor_gates(part.pauli_letters))

    if part.transition_sides:
        trans = be_transition_family(part.transition_state, part.complement_state, n)
        trans_pairs = trans.pairs
        if imaginary:
            trans_pairs = tuple(
                (c, _twist(circ, part)) for c, circ in trans_pairs
            )
    else:
        trans_pairs = ((1.0, _identity(n)),)

    if part.number_key:
        num_pairs = be_number_family(part.number_key, n).pairs
    else:
        num_pairs = ((1.0, _identity(n)),)

    pairs = []
    for ct, circ_t in trans_pairs:
        for cn, circ_n in num_pairs:
            gates = pauli_gates + circ_t.gates + circ_n.gates
            pairs.append((scale * ct * cn, Circuit(n, gates)))
    return LcuDecomposition(n, tuple(pairs), term=term)


def _twist(circuit: Circuit, part) -> Circuit:
    """Conjugate a transition unitary by a quarter phase on one transition qubit.

    Turns ``|a><b| + |b><a|`` into ``i |a><b| - i |b><a|`` while leaving the
    identity and the diagonal double flip unchanged (they commute with the
    phase), which is how purely imaginary coefficients are encoded.
    """
    sides = part.transition_sides
    q = min(sides)
    angle = math.pi / 2 if sides[q] == 1 else -math.pi / 2
    # first gate acts first, so the conjugating phase enters inverted
    pre = Gate(GateKind.Phase, (q,), theta=-angle)
    post = Gate(GateKind.Phase, (q,), theta=angle)
    return Circuit(circuit.num_qubits, (pre,) + circuit.gates + (post,))
