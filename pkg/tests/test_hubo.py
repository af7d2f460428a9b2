from collections import Counter

import numpy as np
import pytest

from hamsynth.algebra import Symbol, convert_formalism, dense_of_expr
from hamsynth.circuits import GateKind
from hamsynth.hubo import (
    CountModel,
    HuboProblem,
    build_expr,
    cost_of,
    crossover_threshold,
    format_problem,
    parse_problem,
    synthesize_hubo,
    two_qubit_totals,
)
from hamsynth.simulate import circuit_unitary, expm_hermitian, phase_distance

RNG = np.random.default_rng(53)


def inventory(circuit):
    """Gate classes with key sizes, ignoring bookkeeping global phases."""
    out = Counter()
    for g in circuit.gates:
        if g.kind is GateKind.GlobalPhase:
            continue
        label = g.kind.value
        if g.key:
            label += f"[{len(g.key)}]"
        out[label] += 1
    return dict(out)


def angles_of(circuit, kind, key_size=None):
    out = []
    for g in circuit.gates:
        if g.kind is kind and (key_size is None or len(g.key) == key_size):
            out.append(g.theta)
    return sorted(out)


def random_problem(rng, max_vars=8, max_order=4):
    n = int(rng.integers(2, max_vars + 1))
    form = "Z" if rng.integers(2) else "n"
    weights = {}
    for _ in range(int(rng.integers(1, 6))):
        order = int(rng.integers(1, min(max_order, n) + 1))
        subset = frozenset(int(q) for q in rng.choice(n, size=order, replace=False))
        weights[subset] = float(rng.normal())
    return HuboProblem(n, form, weights)


class TestBuildAndCost:
    def test_z_pair(self):
        p = HuboProblem(2, "Z", {frozenset({0, 1}): 1.0})
        expr = build_expr(p)
        assert expr.terms[0].factors == {0: Symbol.Z, 1: Symbol.Z}

    def test_n_triple(self):
        p = HuboProblem(3, "n", {frozenset({0, 1, 2}): 1.0})
        expr = build_expr(p)
        assert expr.terms[0].factors == {q: Symbol.Num for q in range(3)}

    def test_empty(self):
        p = HuboProblem(3, "n", {})
        assert build_expr(p).terms == ()

    def test_cost_values(self):
        assert cost_of(HuboProblem(1, "n", {frozenset({0}): 3.0}), "1") == 3.0
        assert cost_of(HuboProblem(2, "Z", {frozenset({0, 1}): 1.0}), "01") == -1.0
        assert cost_of(HuboProblem(3, "Z", {frozenset({0, 1, 2}): 2.0}), "111") == -2.0

    def test_cost_length_mismatch(self):
        with pytest.raises(ValueError):
            cost_of(HuboProblem(2, "n", {}), "1")


def single_term_problem(form, order):
    return HuboProblem(order, form, {frozenset(range(order)): 1.0})


def check_exact(problem, t, strategy):
    circ = synthesize_hubo(problem, t, strategy)
    exact = expm_hermitian(dense_of_expr(build_expr(problem)), t)
    assert phase_distance(circuit_unitary(circ), exact) < 1e-11
    return circ


class TestTableGoldens:
    """Gate inventories and angles of the twelve single-term rows."""

    T = 0.37

    def test_usual_z_rows(self):
        for order, cx in ((1, 0), (2, 2), (3, 4)):
            circ = check_exact(single_term_problem("Z", order), self.T, "usual")
            inv = inventory(circ)
            assert inv.get("RZ", 0) == 1
            assert inv.get("CX", 0) == cx
            assert angles_of(circ, GateKind.RZ) == [pytest.approx(2 * self.T)]

    def test_usual_n_row_order1(self):
        circ = check_exact(single_term_problem("n", 1), self.T, "usual")
        assert inventory(circ) == {"RZ": 1}
        # fragment angle -t/2, emitted as an RZ of twice that
        assert angles_of(circ, GateKind.RZ) == [pytest.approx(-self.T)]

    def test_usual_n_row_order2(self):
        circ = check_exact(single_term_problem("n", 2), self.T, "usual")
        inv = inventory(circ)
        assert inv.get("RZ", 0) == 3 and inv.get("CX", 0) == 2
        # fragment angles (t/4, -t/4, -t/4)
        assert angles_of(circ, GateKind.RZ) == [
            pytest.approx(-self.T / 2),
            pytest.approx(-self.T / 2),
            pytest.approx(self.T / 2),
        ]

    def test_usual_n_row_order3(self):
        circ = check_exact(single_term_problem("n", 3), self.T, "usual")
        inv = inventory(circ)
        # one weight-3 string, three weight-2, three weight-1 rotations
        assert inv.get("RZ", 0) == 7
        assert inv.get("CX", 0) == 3 * 2 + 4
        angles = angles_of(circ, GateKind.RZ)
        quarter = [a for a in angles if a > 0]
        assert len(quarter) == 3  # the three pair strings at +t/8
        assert all(a == pytest.approx(self.T / 4) for a in quarter)

    def test_direct_n_rows(self):
        rows = {
            1: ({"Phase": 1}, GateKind.Phase, None),
            2: ({"KeyedPhase[1]": 1}, GateKind.KeyedPhase, 1),
            3: ({"KeyedPhase[2]": 1}, GateKind.KeyedPhase, 2),
        }
        for order, (expected, kind, key_size) in rows.items():
            circ = check_exact(single_term_problem("n", order), self.T, "direct")
            assert inventory(circ) == expected
            assert angles_of(circ, kind, key_size) == [pytest.approx(-self.T)]

    def test_direct_z_row_order1(self):
        circ = check_exact(single_term_problem("Z", 1), self.T, "direct")
        assert inventory(circ) == {"Phase": 1}
        assert angles_of(circ, GateKind.Phase) == [pytest.approx(2 * self.T)]

    def test_direct_z_row_order2(self):
        circ = check_exact(single_term_problem("Z", 2), self.T, "direct")
        assert inventory(circ) == {"Phase": 2, "KeyedPhase[1]": 1}
        assert angles_of(circ, GateKind.Phase) == [pytest.approx(2 * self.T)] * 2
        assert angles_of(circ, GateKind.KeyedPhase, 1) == [pytest.approx(-4 * self.T)]

    def test_direct_z_row_order3(self):
        circ = check_exact(single_term_problem("Z", 3), self.T, "direct")
        assert inventory(circ) == {"Phase": 3, "KeyedPhase[1]": 3, "KeyedPhase[2]": 1}
        assert angles_of(circ, GateKind.Phase) == [pytest.approx(2 * self.T)] * 3
        assert angles_of(circ, GateKind.KeyedPhase, 1) == [pytest.approx(-4 * self.T)] * 3
        assert angles_of(circ, GateKind.KeyedPhase, 2) == [pytest.approx(8 * self.T)]


class TestDiagonalLaw:
    def test_random_problems(self):
        for _ in range(20):
            p = random_problem(RNG)
            t = float(RNG.uniform(0.1, 1.5))
            circuits = {}
            for strategy in ("direct", "usual"):
                circ = synthesize_hubo(p, t, strategy)
                u = circuit_unitary(circ)
                circuits[strategy] = u
                diag = np.diag(u)
                assert np.abs(u - np.diag(diag)).max() < 1e-12
                # one global phase aligns every entry with exp(-i t cost)
                expected = np.array(
                    [
                        np.exp(-1j * t * cost_of(p, format(x, f"0{p.num_vars}b")))
                        for x in range(2**p.num_vars)
                    ]
                )
                rel = diag / expected
                assert np.abs(rel - rel[0]).max() < 1e-10
            assert phase_distance(circuits["direct"], circuits["usual"]) < 1e-10

    def test_conversion_counting(self):
        for order in (2, 3, 4):
            expr = build_expr(single_term_problem("n", order))
            out = convert_formalism(expr, "Z")
            assert sum(1 for t in out.terms if t.factors) == 2**order - 1


class TestCountModel:
    def test_keyed_phase_linear_values(self):
        model = CountModel()
        assert model.keyed_phase(6) == 248
        assert model.keyed_phase(7) == 440

    def test_rz_dense_small(self):
        model = CountModel()
        assert model.rz_dense(3) == 10
        assert model.rz_dense(6) == 258

    def test_crossover_default(self):
        assert crossover_threshold() == 8

    def test_crossover_with_ancilla_formula(self):
        # the published linear-with-ancilla formula actually crosses earlier
        assert crossover_threshold(CountModel(ancilla_free=False)) == 6

    def test_totals(self):
        p = single_term_problem("n", 3)
        totals = two_qubit_totals(p)
        assert totals["usual"] == 10
        assert totals["direct"] == CountModel().keyed_phase_no_ancilla(3)


class TestProblemFiles:
    def test_round_trip(self):
        p = HuboProblem(
            4, "n", {frozenset({0}): 1.5, frozenset({1, 3}): -2.0, frozenset({0, 1, 2}): 0.25}
        )
        assert parse_problem(format_problem(p)) == p

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            parse_problem("no header\n")
        with pytest.raises(ValueError):
            parse_problem("vars 2 / form n\nbogus line\n")

    def test_comments_ignored(self):
        p = parse_problem("# comment\nvars 2 / form Z\n0,1 : 2.0\n")
        assert p.weights == {frozenset({0, 1}): 2.0}
