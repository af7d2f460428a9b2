import numpy as np
import pytest

from hamsynth.algebra import HamiltonianExpr, Symbol, Term, dense_of_expr, dense_of_term
from hamsynth.circuits import GateKind, count
from hamsynth.pauli_synth import (
    TrotterPlan,
    pauli_fragments,
    synthesize_pauli_rotation,
    trotter_product,
)
from hamsynth.simulate import circuit_unitary, expm_hermitian, phase_distance

RNG = np.random.default_rng(97)
S = Symbol


def string_dense(letters, n):
    term = Term(1.0, {q: Symbol(l) for q, l in letters.items()})
    return dense_of_term(term, n)


class TestPauliRotation:
    def test_single_z(self):
        circ = synthesize_pauli_rotation({0: "Z"}, 0.45)
        assert [g.kind for g in circ.gates] == [GateKind.RZ]
        assert circ.gates[0].theta == pytest.approx(0.9)

    def test_zz_shape(self):
        circ = synthesize_pauli_rotation({0: "Z", 1: "Z"}, 0.45)
        kinds = [g.kind for g in circ.gates]
        assert kinds == [GateKind.CX, GateKind.RZ, GateKind.CX]
        assert count(circ).two_qubit_count == 2

    def test_xyzz_shape(self):
        circ = synthesize_pauli_rotation({0: "X", 1: "Y", 2: "Z", 3: "Z"}, 0.3)
        report = count(circ)
        assert report.per_kind.get("CX", 0) == 6
        assert report.per_kind.get("H", 0) == 4  # two for X, two for Y
        assert report.per_kind.get("Sdg", 0) == 1 and report.per_kind.get("S", 0) == 1

    @pytest.mark.parametrize("weight", [1, 2, 3, 4, 5])
    def test_cx_count_law(self, weight):
        letters = {q: "XYZ"[q % 3] for q in range(weight)}
        circ = synthesize_pauli_rotation(letters, 0.2)
        assert count(circ).per_kind.get("CX", 0) == 2 * (weight - 1)

    def test_matches_expm(self):
        for _ in range(25):
            n = int(RNG.integers(1, 6))
            k = int(RNG.integers(1, n + 1))
            qubits = RNG.choice(n, size=k, replace=False)
            letters = {int(q): "XYZ"[int(RNG.integers(3))] for q in qubits}
            theta = float(RNG.normal())
            u = circuit_unitary(synthesize_pauli_rotation(letters, theta, n))
            exact = expm_hermitian(string_dense(letters, n), theta)
            assert phase_distance(u, exact) < 1e-11

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            synthesize_pauli_rotation({}, 0.1)


class TestTrotter:
    def test_commuting_exact_at_one_step(self):
        expr = HamiltonianExpr(
            3,
            (
                Term(0.7, {0: S.Num, 1: S.Num}),
                Term(-0.4, {1: S.Num, 2: S.Num}),
                Term(0.2, {2: S.Z}),
            ),
        )
        t = 0.8
        for strategy in ("direct", "usual"):
            circ = trotter_product(expr, TrotterPlan(1, 1, t), strategy)
            exact = expm_hermitian(dense_of_expr(expr), t)
            assert phase_distance(circuit_unitary(circ), exact) < 1e-10

    def test_single_term_exact_any_steps(self):
        term = Term(0.6, {0: S.Raise, 1: S.Num, 2: S.Lower}, hermitized=True)
        expr = HamiltonianExpr(3, (term,))
        exact = expm_hermitian(dense_of_expr(expr), 0.9)
        for p in (1, 3):
            circ = trotter_product(expr, TrotterPlan(1, p, 0.9), "direct")
            assert phase_distance(circuit_unitary(circ), exact) < 1e-10

    def test_first_order_error_halves(self):
        expr = HamiltonianExpr(1, (Term(1.0, {0: S.X}), Term(1.0, {0: S.Z})))
        exact = expm_hermitian(dense_of_expr(expr), 0.5)
        errs = {}
        for p in (2, 4, 8):
            circ = trotter_product(expr, TrotterPlan(1, p, 0.5), "usual")
            errs[p] = phase_distance(circuit_unitary(circ), exact)
        assert errs[4] < errs[2] and errs[8] < errs[4]
        assert errs[4] / errs[2] == pytest.approx(0.5, abs=0.15)
        assert errs[8] / errs[4] == pytest.approx(0.5, abs=0.15)

    def test_second_order_beats_first(self):
        expr = HamiltonianExpr(
            2, (Term(0.8, {0: S.X}), Term(0.5, {0: S.Z, 1: S.Z}), Term(0.3, {1: S.Y}))
        )
        exact = expm_hermitian(dense_of_expr(expr), 0.6)
        first = trotter_product(expr, TrotterPlan(1, 4, 0.6), "usual")
        second = trotter_product(expr, TrotterPlan(2, 4, 0.6), "usual")
        e1 = phase_distance(circuit_unitary(first), exact)
        e2 = phase_distance(circuit_unitary(second), exact)
        assert e2 < e1 / 4

    def test_strategies_converge_together(self):
        for _ in range(5):
            terms = []
            pools = [S.X, S.Y, S.Z, S.Num, S.Hole, S.Lower, S.Raise]
            for _ in range(3):
                qs = RNG.choice(3, size=int(RNG.integers(1, 4)), replace=False)
                factors = {int(q): pools[int(RNG.integers(len(pools)))] for q in qs}
                terms.append(Term(float(RNG.normal()) * 0.4, factors, hermitized=True))
            expr = HamiltonianExpr(3, tuple(terms))
            h = dense_of_expr(expr)
            # scale by the fragment one-norm, the knob Trotter bounds see
            lam = sum(
                np.abs(np.linalg.eigvalsh(dense_of_term(t_, 3))).max()
                for t_ in terms
            )
            t = min(float(RNG.uniform(0.3, 1.0)) / max(lam, 1e-9), 1.0)
            exact = expm_hermitian(h, t)
            for strategy in ("direct", "usual"):
                circ = trotter_product(expr, TrotterPlan(1, 64, t), strategy)
                assert phase_distance(circuit_unitary(circ), exact) < 1e-3

    def test_zero_steps_rejected(self):
        with pytest.raises(ValueError):
            TrotterPlan(1, 0, 1.0)

    def test_fragments_merge_like_strings(self):
        expr = HamiltonianExpr(
            2, (Term(1.0, {0: S.Num}), Term(1.0, {0: S.Num, 1: S.Num}))
        )
        frags = pauli_fragments(expr)
        keys = [p.letter_key() for p in frags]
        assert len(keys) == len(set(keys))
