import math

import numpy as np
import pytest

from hamsynth.algebra import DimensionError, Symbol, Term, dense_of_term
from hamsynth.circuits import Circuit, Gate, GateKind
from hamsynth.simulate import (
    apply,
    basis_state,
    circuit_unitary,
    expm_hermitian,
    phase_distance,
)

RNG = np.random.default_rng(23)


def random_hermitian(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


class TestExpm:
    def test_pauli_z(self):
        u = expm_hermitian(np.diag([1, -1]).astype(complex), math.pi / 2)
        expected = np.diag([np.exp(-1j * math.pi / 2), np.exp(1j * math.pi / 2)])
        assert np.abs(u - expected).max() < 1e-12

    def test_zero_hamiltonian(self):
        assert np.abs(expm_hermitian(np.zeros((4, 4)), 0.7) - np.eye(4)).max() < 1e-13

    def test_hopping_block(self):
        # evolution of |01><10| + h.c. at angle -t: cos t diagonal, i sin t coupling
        t = 0.37
        a1 = np.zeros((4, 4), dtype=complex)
        a1[1, 2] = a1[2, 1] = 1
        u = expm_hermitian(a1, -t)
        assert np.isclose(u[0, 0], 1) and np.isclose(u[3, 3], 1)
        assert np.isclose(u[1, 1], math.cos(t))
        assert np.isclose(u[1, 2], 1j * math.sin(t))

    def test_group_property(self):
        h = random_hermitian(8, RNG)
        u = expm_hermitian(h, 0.3) @ expm_hermitian(h, 0.9)
        assert np.abs(u - expm_hermitian(h, 1.2)).max() < 1e-11

    def test_unitarity_and_eigen_residual(self):
        for dim in (2, 8, 32, 64):
            h = random_hermitian(dim, RNG)
            u = expm_hermitian(h, 0.81)
            assert np.abs(u @ u.conj().T - np.eye(dim)).max() < 1e-11
            evals, evecs = np.linalg.eigh(h)
            assert np.abs(h @ evecs - evecs * evals).max() < 1e-10

    def test_rejects_nonhermitian(self):
        with pytest.raises(ValueError):
            expm_hermitian(np.array([[0, 1], [0, 0]], dtype=complex), 0.1)


class TestCircuitUnitary:
    def test_empty_is_identity(self):
        assert np.array_equal(circuit_unitary(Circuit(2)), np.eye(4))

    def test_cx_permutation(self):
        u = circuit_unitary(Circuit(2, (Gate(GateKind.CX, (0, 1)),)))
        # control qubit 0 (MSB): |10> -> |11>, |11> -> |10>
        expected = np.zeros((4, 4))
        expected[0, 0] = expected[1, 1] = 1
        expected[3, 2] = expected[2, 3] = 1
        assert np.array_equal(u, expected)

    def test_rzz_matches_expm(self):
        t = 0.83
        circ = Circuit(
            2,
            (
                Gate(GateKind.CX, (0, 1)),
                Gate(GateKind.RZ, (1,), theta=2 * t),
                Gate(GateKind.CX, (0, 1)),
            ),
        )
        zz = dense_of_term(Term(1.0, {0: Symbol.Z, 1: Symbol.Z}), 2)
        assert phase_distance(circuit_unitary(circ), expm_hermitian(zz, t)) < 1e-12

    def test_size_limit(self):
        with pytest.raises(DimensionError):
            circuit_unitary(Circuit(13))

    def test_matrix_vs_statevector_agreement(self):
        for _ in range(10):
            n = int(RNG.integers(1, 5))
            gates = []
            for _ in range(12):
                q = int(RNG.integers(n))
                r = int(RNG.integers(n))
                choice = RNG.integers(4)
                if choice == 0:
                    gates.append(Gate(GateKind.H, (q,)))
                elif choice == 1:
                    gates.append(Gate(GateKind.RX, (q,), theta=float(RNG.normal())))
                elif choice == 2 and q != r:
                    gates.append(Gate(GateKind.CX, (q, r)))
                else:
                    key = ((r, int(RNG.integers(2))),) if r != q else ()
                    if key:
                        gates.append(Gate(GateKind.KeyedRY, (q,), key, float(RNG.normal())))
                    else:
                        gates.append(Gate(GateKind.RY, (q,), theta=float(RNG.normal())))
            circ = Circuit(n, tuple(gates))
            u = circuit_unitary(circ)
            psi = RNG.normal(size=2**n) + 1j * RNG.normal(size=2**n)
            psi /= np.linalg.norm(psi)
            assert np.abs(u @ psi - apply(circ, psi)).max() < 1e-11


class TestApply:
    def test_identity(self):
        psi = RNG.normal(size=8) + 1j * RNG.normal(size=8)
        out = apply(Circuit(3), psi)
        assert np.array_equal(out, psi)

    def test_x_on_qubit0(self):
        out = apply(Circuit(3, (Gate(GateKind.X, (0,)),)), basis_state(3, {}))
        assert np.isclose(out[int("100", 2)], 1.0)

    def test_norm_preserved(self):
        circ = Circuit(
            4,
            (
                Gate(GateKind.H, (0,)),
                Gate(GateKind.CX, (0, 3)),
                Gate(GateKind.KeyedRX, (1,), ((0, 1),), 0.7),
                Gate(GateKind.FSWAP, (1, 2)),
            ),
        )
        psi = RNG.normal(size=16) + 1j * RNG.normal(size=16)
        psi /= np.linalg.norm(psi)
        assert abs(np.linalg.norm(apply(circ, psi)) - 1) < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply(Circuit(2), np.ones(8))

    def test_fswap_phases_ones(self):
        out = apply(Circuit(2, (Gate(GateKind.FSWAP, (0, 1)),)), basis_state(2, {0: 1, 1: 1}))
        assert np.isclose(out[3], -1.0)


class TestPhaseDistance:
    def test_equal(self):
        u = circuit_unitary(Circuit(2, (Gate(GateKind.H, (0,)), Gate(GateKind.CX, (0, 1)))))
        assert phase_distance(u, u) == 0

    def test_global_phase_invariance(self):
        u = circuit_unitary(Circuit(1, (Gate(GateKind.H, (0,)),)))
        v = np.exp(1j * math.pi / 7) * u
        assert phase_distance(u, v) < 1e-13

    def test_x_vs_z(self):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        z = np.diag([1, -1]).astype(complex)
        assert phase_distance(x, z) >= 1

    def test_rejects_nonunitary(self):
        with pytest.raises(ValueError):
            phase_distance(np.ones((2, 2)), np.eye(2))
