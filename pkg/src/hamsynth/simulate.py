"""Exact numeric ground truth.

States are complex ndarrays of length ``2**n`` and operators are
``(2**n, 2**n)`` ndarrays, with qubit 0 as the most significant bit of the
basis index.  Circuits are executed gate-wise (no full-matrix build) so
statevector application scales to 20 qubits; dense unitaries stop at 12.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .algebra import DimensionError
from .circuits import Circuit, Gate, GateKind

__all__ = [
    "expm_hermitian",
    "circuit_unitary",
    "apply",
    "apply_to_basis_state",
    "phase_distance",
    "basis_state",
]

MAX_UNITARY_QUBITS = 12
MAX_STATE_QUBITS = 20

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _single_qubit_matrix(gate: Gate) -> np.ndarray:
    k, t = gate.kind, gate.theta
    if k is GateKind.X or k is GateKind.KeyedX:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if k is GateKind.H:
        return _HADAMARD
    if k is GateKind.S:
        return np.diag([1, 1j]).astype(complex)
    if k is GateKind.Sdg:
        return np.diag([1, -1j]).astype(complex)
    if k is GateKind.KeyedZ:
        return np.diag([1, -1]).astype(complex)
    if k in (GateKind.RX, GateKind.KeyedRX):
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if k in (GateKind.RY, GateKind.KeyedRY):
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if k is GateKind.RZ:
        return np.diag([cmath.exp(-1j * t / 2), cmath.exp(1j * t / 2)])
    if k is GateKind.Phase or k is GateKind.KeyedPhase:
        return np.diag([1, cmath.exp(1j * t)])
    raise ValueError(f"{k.value} has no single-qubit matrix")


def _key_slicer(num_axes: int, key: dict[int, int]) -> tuple:
    return tuple(key.get(ax, slice(None)) for ax in range(num_axes))


def _apply_on_axis(block: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    moved = np.tensordot(mat, block, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def _axis_after_slicing(axis: int, key: dict[int, int]) -> int:
    return axis - sum(1 for q in key if q < axis)


def _apply_gate(psi: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Apply one gate to ``psi`` shaped ``(2,)*n`` plus optional batch axes."""
    kind = gate.kind
    if kind is GateKind.GlobalPhase:
        return psi * cmath.exp(1j * gate.theta)
    if kind is GateKind.CX:
        c, t = gate.targets
        sl = _key_slicer(n, {c: 1})
        out = psi.copy()
        out[sl] = _apply_on_axis(psi[sl], np.array([[0, 1], [1, 0]], dtype=complex),
                                 _axis_after_slicing(t, {c: 1}))
        return out
    if kind is GateKind.CZ:
        a, b = gate.targets
        out = psi.copy()
        sl = _key_slicer(n, {a: 1, b: 1})
        out[sl] = -out[sl]
        return out
    if kind is GateKind.SWAP or kind is GateKind.FSWAP:
        a, b = gate.targets
        out = np.swapaxes(psi, a, b).copy()
        if kind is GateKind.FSWAP:
            sl = _key_slicer(n, {a: 1, b: 1})
            out[sl] = -out[sl]
        return out
    key = gate.key_dict
    if kind is GateKind.KeyedPhase and not gate.targets:
        out = psi.copy()
        sl = _key_slicer(n, key)
        out[sl] = out[sl] * cmath.exp(1j * gate.theta)
        return out
    (t,) = gate.targets
    mat = _single_qubit_matrix(gate)
    if not key:
        return _apply_on_axis(psi, mat, t)
    out = psi.copy()
    sl = _key_slicer(n, key)
    out[sl] = _apply_on_axis(psi[sl], mat, _axis_after_slicing(t, key))
    return out


def apply(circuit: Circuit, psi: np.ndarray) -> np.ndarray:
    """Run a circuit on a statevector, gate by gate."""
    n = circuit.num_qubits
    if n > MAX_STATE_QUBITS:
        raise DimensionError(f"statevector on {n} qubits exceeds the limit")
    psi = np.asarray(psi, dtype=complex)
    if psi.size != 2**n:
        raise ValueError("state dimension does not match the circuit register")
    shaped = psi.reshape((2,) * n) if n else psi
    for g in circuit.gates:
        shaped = _apply_gate(shaped, g, n)
    return shaped.reshape(-1)


def basis_state(num_qubits: int, bits: dict[int, int]) -> np.ndarray:
    """Computational basis state with the given bits (others zero)."""
    index = 0
    for q in range(num_qubits):
        index = (index << 1) | bits.get(q, 0)
    psi = np.zeros(2**num_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


def apply_to_basis_state(circuit: Circuit, bits: dict[int, int]) -> np.ndarray:
    return apply(circuit, basis_state(circuit.num_qubits, bits))


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit (ordered product, first gate first)."""
    n = circuit.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise DimensionError(f"dense unitary on {n} qubits exceeds the limit")
    dim = 2**n
    cols = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in circuit.gates:
        cols = _apply_gate(cols, g, n)
    return cols.reshape(dim, dim)


def expm_hermitian(h: np.ndarray, theta: float) -> np.ndarray:
    """``exp(-i * theta * H)`` for Hermitian ``H`` via eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("operator must be a square matrix")
    if h.shape[0] > 2**MAX_UNITARY_QUBITS:
        raise DimensionError("operator too large for dense exponentiation")
    if np.abs(h - h.conj().T).max(initial=0.0) > 1e-10:
        raise ValueError("operator is not Hermitian")
    evals, evecs = np.linalg.eigh(h)
    phases = np.exp(-1j * theta * evals)
    return (evecs * phases) @ evecs.conj().T


def _require_unitary(u: np.ndarray, tol: float = 1e-9) -> None:
    dev = np.abs(u @ u.conj().T - np.eye(u.shape[0])).max()
    if dev > tol:
        raise ValueError(f"matrix is not unitary (deviation {dev:.2e})")


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max-norm distance between unitaries minimized over a global phase.

    Returns ``max |U - exp(i*phi) V|`` at ``phi = arg tr(V^dag U)``, which is
    zero exactly when the two agree up to a global phase.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError("operators must share a dimension")
    _require_unitary(u)
    _require_unitary(v)
    phi = np.angle(np.trace(v.conj().T @ u))
    return float(np.abs(u - np.exp(1j * phi) * v).max())
