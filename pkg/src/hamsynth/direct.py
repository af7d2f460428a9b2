"""Exact evolution circuits for single hermitized terms.

Each term's factors split into four families: identity, Pauli letters,
number/hole projectors, and raising/lowering transitions.  The synthesized
circuit conjugates the term into a frame where it acts as a single keyed
rotation:

* Pauli letters are rotated to Z and their joint parity is accumulated onto
  one qubit with a CX network; that qubit's value controls the rotation sign
  through a CZ pair (``R(t) = Z R(-t) Z``).
* The transition qubits hold a complementary state pair; a CX basis change
  maps the pair to two states that differ only on a root qubit, and the fixed
  pattern on the remaining transition qubits joins the control key instead of
  being uncomputed.
* Number/hole factors contribute their key bits directly.

The result is exact for every term (one keyed rotation per term); complex
coefficients are exact in ``exact_axis`` mode (an RZ axis twist around the
central rotation) and first-order approximate in ``paper_split`` mode (an
RX/RY product), which carries a Trotter-like error of order theta**2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .algebra import COEFF_TOLERANCE, Term, dense_of_term
from .circuits import (
    Circuit,
    Gate,
    GateKind,
    parity_network,
    transition_network,
    transition_pattern,
)
from .simulate import expm_hermitian, circuit_unitary, phase_distance

__all__ = [
    "FamilyPartition",
    "DirectSynthesisOptions",
    "classify",
    "synthesize_direct",
    "term_basis_evolution",
    "trotter_error_of_split",
]


@dataclass(frozen=True)
class FamilyPartition:
    """Term factors split into the four synthesis families.

    ``number_key`` maps a qubit to 1 for a number factor and 0 for a hole;
    ``transition_sides`` maps to 1 for raising and 0 for lowering.  Qubits in
    no family act as identity.
    """

    identity_qubits: tuple[int, ...]
    pauli_letters: dict[int, str]
    number_key: dict[int, int]
    transition_sides: dict[int, int]

    @property
    def transition_state(self) -> dict[int, int]:
        return dict(self.transition_sides)

    @property
    def complement_state(self) -> dict[int, int]:
        return {q: 1 - b for q, b in self.transition_sides.items()}


@dataclass(frozen=True)
class DirectSynthesisOptions:
    theta: float = 1.0
    parity_topology: str = "chain"
    complex_mode: str = "exact_axis"

    def __post_init__(self):
        if self.parity_topology not in ("chain", "tree"):
            raise ValueError("parity_topology must be 'chain' or 'tree'")
        if self.complex_mode not in ("exact_axis", "paper_split"):
            raise ValueError("complex_mode must be 'exact_axis' or 'paper_split'")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")


def classify(term: Term, num_qubits: int | None = None) -> FamilyPartition:
    """Partition the term's factor indices into the four families."""
    from .algebra import Symbol

    pauli: dict[int, str] = {}
    number: dict[int, int] = {}
    trans: dict[int, int] = {}
    for q, s in term.factors.items():
        if s in (Symbol.X, Symbol.Y, Symbol.Z):
            pauli[q] = s.value
        elif s is Symbol.Num:
            number[q] = 1
        elif s is Symbol.Hole:
            number[q] = 0
        elif s is Symbol.Raise:
            trans[q] = 1
        elif s is Symbol.Lower:
            trans[q] = 0
    if num_qubits is None:
        identity: tuple[int, ...] = ()
    else:
        identity = tuple(q for q in range(num_qubits) if q not in term.factors)
    return FamilyPartition(identity, pauli, number, trans)


_PAULI_PRE = {"X": (GateKind.H,), "Y": (GateKind.Sdg, GateKind.H), "Z": ()}


def _pauli_basis_gates(letters: dict[int, str]) -> list[Gate]:
    gates = []
    for q in sorted(letters):
        for kind in _PAULI_PRE[letters[q]]:
            gates.append(Gate(kind, (q,)))
    return gates


def _effective_scalar(term: Term) -> float:
    """Coefficient of the diagonal/Pauli operator a transition-free term denotes."""
    z = term.coefficient
    if abs(z.imag) > COEFF_TOLERANCE:
        raise ValueError(
            "a complex coefficient on a transition-free term denotes a "
            "non-Hermitian operator; hermitize it first"
        )
    return 2 * z.real if term.hermitized else z.real


def _keyed_rotation(kind: GateKind, angle: float, target: int, key: dict[int, int]) -> Gate:
    if key:
        return Gate(kind, (target,), tuple(key.items()), angle)
    plain = {GateKind.KeyedRX: GateKind.RX, GateKind.KeyedRY: GateKind.RY}[kind]
    return Gate(plain, (target,), theta=angle)


def synthesize_direct(
    term: Term,
    opts: DirectSynthesisOptions | None = None,
    num_qubits: int | None = None,
    sign_control: int | None = None,
) -> Circuit:
    """Exact circuit for ``exp(-i * theta * H)`` with ``H`` the term's operator.

    With ``sign_control`` set, the evolution direction is conditioned on that
    qubit: ``exp(-i t H)`` on control 0 and ``exp(+i t H)`` on control 1.
    """
    opts = opts or DirectSynthesisOptions()
    theta = opts.theta
    part = classify(term)
    if not term.hermitized:
        if part.transition_sides:
            raise ValueError("plain term with ladder factors is not Hermitian")
        if abs(term.coefficient.imag) > COEFF_TOLERANCE:
            raise ValueError("plain term requires a real coefficient")
    n = num_qubits if num_qubits is not None else max(term.qubit_span, 1)
    if term.max_index >= n:
        raise ValueError("term index out of range for the register")
    if sign_control is not None and (
        sign_control in term.factors or sign_control >= n or sign_control < 0
    ):
        raise ValueError("sign control must be a free qubit inside the register")

    pre: list[Gate] = []
    post_src: list[Gate] = []  # inverted and reversed at the end
    central: list[Gate] = []

    pauli_qubits = sorted(part.pauli_letters)
    trans_qubits = sorted(part.transition_sides)

    pre += _pauli_basis_gates(part.pauli_letters)
    p_root = None
    if pauli_qubits:
        net, p_root = parity_network(pauli_qubits, opts.parity_topology)
        pre += list(net.gates)
    t_root = None
    key = dict(part.number_key)
    if trans_qubits:
        net, t_root = transition_network(trans_qubits, opts.parity_topology)
        pre += list(net.gates)
        pattern = transition_pattern(net, part.transition_sides)
        key.update({q: pattern[q] for q in trans_qubits if q != t_root})

    z = term.coefficient
    if trans_qubits:
        v_root = part.transition_sides[t_root]
        axis_sign = 1.0 if v_root == 0 else -1.0
        rotations: list[Gate] = []
        wrap: tuple[Gate, Gate] | None = None
        if abs(z.imag) <= COEFF_TOLERANCE:
            rotations = [_keyed_rotation(GateKind.KeyedRX, 2 * theta * z.real, t_root, key)]
        elif opts.complex_mode == "exact_axis":
            alpha = axis_sign * cmath.phase(z)
            wrap = (
                Gate(GateKind.RZ, (t_root,), theta=alpha),
                Gate(GateKind.RZ, (t_root,), theta=-alpha),
            )
            rotations = [_keyed_rotation(GateKind.KeyedRX, 2 * theta * abs(z), t_root, key)]
        else:
            rotations = [
                _keyed_rotation(
                    GateKind.KeyedRY, -axis_sign * 2 * theta * z.imag, t_root, key
                ),
                _keyed_rotation(GateKind.KeyedRX, 2 * theta * z.real, t_root, key),
            ]
        sandwich: list[Gate] = []
        if p_root is not None:
            sandwich.append(Gate(GateKind.CZ, (p_root, t_root)))
        if sign_control is not None:
            sandwich.append(Gate(GateKind.CZ, (sign_control, t_root)))
        central = list(sandwich) + rotations + list(reversed(sandwich))
        if wrap is not None:
            central = [wrap[0]] + central + [wrap[1]]
    elif pauli_qubits:
        c = _effective_scalar(term)
        if key or sign_control is not None:
            inner: list[Gate] = [_keyed_rotation(GateKind.KeyedRX, 2 * theta * c, p_root, key)]
            if sign_control is not None:
                inner = (
                    [Gate(GateKind.CZ, (sign_control, p_root))]
                    + inner
                    + [Gate(GateKind.CZ, (sign_control, p_root))]
                )
            central = [Gate(GateKind.H, (p_root,))] + inner + [Gate(GateKind.H, (p_root,))]
        else:
            central = [Gate(GateKind.RZ, (p_root,), theta=2 * theta * c)]
    elif key:
        c = _effective_scalar(term)
        if sign_control is None:
            central = [Gate(GateKind.KeyedPhase, (), tuple(key.items()), -theta * c)]
        else:
            central = [
                Gate(
                    GateKind.KeyedPhase,
                    (),
                    tuple(key.items()) + ((sign_control, 0),),
                    -theta * c,
                ),
                Gate(
                    GateKind.KeyedPhase,
                    (),
                    tuple(key.items()) + ((sign_control, 1),),
                    theta * c,
                ),
            ]
    else:
        c = _effective_scalar(term)
        central = [Gate(GateKind.GlobalPhase, (), theta=-theta * c)]
        if sign_control is not None:
            central.append(Gate(GateKind.Phase, (sign_control,), theta=2 * theta * c))

    post = [g.inverse() for g in reversed(pre)]
    return Circuit(n, tuple(pre + central + post))


def term_basis_evolution(
    term: Term, theta: float, bits: dict[int, int]
) -> list[tuple[dict[int, int], complex]]:
    """Analytic action of ``exp(-i theta H)`` on one computational basis state.

    A single term leaves every basis state fixed or rotates it against one
    partner (transition complements plus X/Y flips), so the image has at most
    two amplitudes.  This closed form is independent of the circuit builder
    and of the dense exponential, which makes it the verification oracle for
    registers too large for dense matrices.
    """
    part = classify(term)
    z = term.coefficient
    if any(bits.get(q, 0) != b for q, b in part.number_key.items()):
        return [(dict(bits), 1.0 + 0j)]
    trans = {q: bits.get(q, 0) for q in part.transition_sides}
    on_v = trans == part.transition_sides
    if part.transition_sides and not (on_v or trans == part.complement_state):
        return [(dict(bits), 1.0 + 0j)]

    mu = 1.0 + 0j
    partner = dict(bits)
    for q in part.transition_sides:
        partner[q] = 1 - partner.get(q, 0)
    for q, letter in part.pauli_letters.items():
        b = bits.get(q, 0)
        if letter == "X":
            partner[q] = 1 - b
        elif letter == "Y":
            partner[q] = 1 - b
            mu *= 1j if b == 0 else -1j
        else:
            mu *= 1 if b == 0 else -1

    flips = {q for q, v in partner.items() if v != bits.get(q, 0)}
    if not flips:
        # diagonal action: a pure phase on this state
        scalar = 2 * z.real if term.hermitized else z.real
        return [(dict(bits), cmath.exp(-1j * theta * scalar * mu.real))]
    if part.transition_sides:
        h = (z.conjugate() if on_v else z) * mu
    else:
        h = (2 * z.real if term.hermitized else z.real) * mu
    mag = abs(h)
    if mag == 0:
        return [(dict(bits), 1.0 + 0j)]
    stay = complex(math.cos(theta * mag))
    hop = -1j * math.sin(theta * mag) * h / mag
    return [(dict(bits), stay), (partner, hop)]


def trotter_error_of_split(
    term: Term, theta: float, num_qubits: int | None = None
) -> float:
    """Phase distance between the split-mode circuit and the exact evolution.

    Zero when the coefficient is purely real or imaginary or theta is zero;
    otherwise positive with leading order theta**2.
    """
    n = num_qubits if num_qubits is not None else max(term.qubit_span, 1)
    split = synthesize_direct(
        term,
        DirectSynthesisOptions(theta=theta, complex_mode="paper_split"),
        num_qubits=n,
    )
    exact = expm_hermitian(dense_of_term(term, n), theta)
    return phase_distance(circuit_unitary(split), exact)
