"""Baseline strategy: Pauli-string rotations and Trotter product formulas.

A weight-k string rotation uses the textbook shape (single-qubit basis
changes, a CX parity ladder, one RZ on the parity qubit, uncompute) and costs
exactly ``2 (k - 1)`` CX gates.  ``trotter_product`` assembles first- or
second-order product formulas from either the native terms (direct strategy,
each fragment exact) or the Pauli expansion (usual strategy).
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import COEFF_TOLERANCE, HamiltonianExpr, PauliString, to_pauli_sum
from .circuits import Circuit, Gate, GateKind, parity_network
from .direct import DirectSynthesisOptions, synthesize_direct, _pauli_basis_gates

__all__ = ["TrotterPlan", "synthesize_pauli_rotation", "trotter_product", "pauli_fragments"]


@dataclass(frozen=True)
class TrotterPlan:
    order: int = 1
    steps: int = 1
    t: float = 1.0

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError("only first- and second-order products are supported")
        if self.steps < 1:
            raise ValueError("at least one Trotter step is required")


def synthesize_pauli_rotation(
    letters: dict[int, str], theta: float, num_qubits: int | None = None
) -> Circuit:
    """Circuit for ``exp(-i * theta * P)`` with ``P`` the given Pauli string."""
    letters = {int(q): l for q, l in letters.items()}
    if not letters:
        raise ValueError("pauli rotation requires at least one letter")
    if any(l not in "XYZ" for l in letters.values()):
        raise ValueError("letters must be X, Y or Z")
    n = num_qubits if num_qubits is not None else max(letters) + 1
    pre = _pauli_basis_gates(letters)
    net, root = parity_network(sorted(letters))
    pre += list(net.gates)
    central = Gate(GateKind.RZ, (root,), theta=2 * theta)
    post = [g.inverse() for g in reversed(pre)]
    return Circuit(n, tuple(pre + [central] + post))


def pauli_fragments(expr: HamiltonianExpr) -> list[PauliString]:
    """Merged Pauli expansion of an expression, constants included."""
    acc: dict[tuple, complex] = {}
    for term in expr.terms:
        for ps in to_pauli_sum(term):
            key = ps.letter_key()
            acc[key] = acc.get(key, 0) + ps.coefficient
    out = [
        PauliString(c, dict(k)) for k, c in acc.items() if abs(c) > COEFF_TOLERANCE
    ]
    out.sort(key=lambda p: p.letter_key())
    return out


def _fragment_circuits(
    expr: HamiltonianExpr, theta: float, strategy: str, topology: str
) -> list[Circuit]:
    n = expr.num_qubits
    if strategy == "direct":
        opts = DirectSynthesisOptions(theta=theta, parity_topology=topology)
        return [synthesize_direct(t, opts, num_qubits=n) for t in expr.terms]
    if strategy != "usual":
        raise ValueError("strategy must be 'direct' or 'usual'")
    circuits = []
    for ps in pauli_fragments(expr):
        angle = (ps.coefficient * theta).real
        if not ps.letters:
            circuits.append(
                Circuit(n, (Gate(GateKind.GlobalPhase, (), theta=-angle),))
            )
        else:
            circuits.append(synthesize_pauli_rotation(ps.letters, angle, n))
    return circuits


def trotter_product(
    expr: HamiltonianExpr,
    plan: TrotterPlan,
    strategy: str = "direct",
    topology: str = "chain",
) -> Circuit:
    """Product-formula circuit approximating ``exp(-i * t * H)``.

    Fragments follow the expression order.  Order 1 repeats the fragment
    product ``steps`` times at ``t / steps``; order 2 uses the palindromic
    half-angle product per step.  Exact whenever the fragments commute or the
    expression has a single term.
    """
    n = expr.num_qubits
    gates: list[Gate] = []
    if plan.order == 1:
        step = _fragment_circuits(expr, plan.t / plan.steps, strategy, topology)
        for _ in range(plan.steps):
            for c in step:
                gates.extend(c.gates)
    else:
        half = _fragment_circuits(expr, plan.t / (2 * plan.steps), strategy, topology)
        for _ in range(plan.steps):
            for c in half:
                gates.extend(c.gates)
            for c in reversed(half):
                gates.extend(c.gates)
    return Circuit(n, tuple(gates))
