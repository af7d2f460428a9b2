import pytest
from fastapi.testclient import TestClient

from hamsynth.service import app

client = TestClient(app)

HUBO_TEXT = "vars 3 / form n\n0,1 : 1.0\n2 : -0.5\n"
FERMION_TEXT = "1B 0 1 0.5\n1B 0 3 -0.25\n"
GRID_TEXT = "dim 1\nq 2\nlaplacian\n"


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


class TestSynth:
    def test_single_keyed_phase_for_number_pair(self):
        r = client.post("/synth", json={"expr": "n0 n1", "theta": 0.3})
        assert r.status_code == 200
        body = r.json()
        kinds = [g["kind"] for g in body["circuit"]["gates"]]
        assert kinds == ["KeyedPhase"]
        assert body["counts"]["per_kind"] == {"KeyedPhase[2]": 1}

    def test_usual_strategy(self):
        r = client.post("/synth", json={"expr": "n0 n1", "theta": 0.3, "strategy": "usual"})
        assert r.status_code == 200
        kinds = {g["kind"] for g in r.json()["circuit"]["gates"]}
        assert "RZ" in kinds

    def test_parse_error_is_422(self):
        r = client.post("/synth", json={"expr": "Z0 Z0"})
        assert r.status_code == 422
        detail = r.json()["detail"]
        assert detail["kind"] == "parse"
        assert detail["line"] == 1

    def test_invalid_source_combination(self):
        r = client.post("/synth", json={"expr": "Z0", "hubo": HUBO_TEXT})
        assert r.status_code == 400

    def test_file_sources(self):
        for payload in (
            {"hubo": HUBO_TEXT},
            {"fermion": FERMION_TEXT},
            {"fd": GRID_TEXT},
        ):
            r = client.post("/synth", json=payload | {"theta": 0.2})
            assert r.status_code == 200, r.text
            assert r.json()["circuit"]["gates"]


class TestPauli:
    def test_number_pair(self):
        r = client.post("/pauli", json={"expr": "n0 n1"})
        assert r.status_code == 200
        strings = r.json()["strings"]
        as_dict = {tuple(sorted(s["letters"].items())): s["coefficient"] for s in strings}
        assert as_dict[()] == pytest.approx(0.25)
        assert as_dict[(("0", "Z"), ("1", "Z"))] == pytest.approx(0.25)


class TestLcu:
    def test_six_pairs(self):
        r = client.post(
            "/lcu", json={"expr": "1.0 * sd0 s1 n2 + h.c."}
        )
        assert r.status_code == 200
        body = r.json()
        assert len(body["pairs"]) == 6
        assert body["reconstruction_error"] < 1e-12

    def test_multi_term_rejected(self):
        r = client.post("/lcu", json={"expr": "Z0 + X1"})
        assert r.status_code == 400


class TestTrotterEndpoint:
    def test_steps(self):
        r = client.post(
            "/trotter",
            json={"expr": "X0 + Z0", "t": 0.5, "steps": 4, "strategy": "usual"},
        )
        assert r.status_code == 200
        gates = r.json()["circuit"]["gates"]
        # two string rotations per step, four steps
        assert len([g for g in gates if g["kind"] == "RZ"]) == 8


class TestCountEndpoint:
    def test_expression_counts(self):
        r = client.post("/count", json={"expr": "Z0 Z1", "theta": 0.3, "strategy": "usual"})
        assert r.status_code == 200
        body = r.json()
        assert body["two_qubit"] == 2
        assert body["depth"] == 3
        assert body["counts"]["CX"] == 2

    def test_hubo_compare(self):
        r = client.post("/count", json={"hubo": HUBO_TEXT, "compare": True})
        assert r.status_code == 200
        totals = r.json()["totals"]
        assert totals["crossover_order"] == 8
        assert totals["usual"] >= 0 and totals["direct"] >= 0


class TestVerifyEndpoint:
    def test_exact_single_term(self):
        r = client.post("/verify", json={"expr": "0.5 * sd0 s1 + h.c.", "theta": 0.4})
        assert r.status_code == 200
        v = r.json()["verification"]
        assert v["pass"] and v["distance"] < 1e-10

    def test_commuting_sum_passes(self):
        r = client.post("/verify", json={"hubo": HUBO_TEXT, "theta": 0.7})
        assert r.status_code == 200
        assert r.json()["verification"]["pass"]

    def test_noncommuting_single_step_fails(self):
        r = client.post("/verify", json={"expr": "X0 + Z0", "theta": 0.8})
        assert r.status_code == 200
        assert not r.json()["verification"]["pass"]

    def test_large_register_uses_basis_oracle(self):
        flagship = (
            "1.0 * n0 o1 o2 X3 Y4 sd5 n6 s7 s8 s9 sd10 Y11 Z12 sd13 s14 + h.c."
        )
        r = client.post("/verify", json={"expr": flagship, "theta": 0.2})
        assert r.status_code == 200
        v = r.json()["verification"]
        assert v["pass"] and v["distance"] < 1e-10

    def test_large_multi_term_rejected(self):
        r = client.post(
            "/verify", json={"expr": "X0 + Z14", "num_qubits": 15, "theta": 0.2}
        )
        assert r.status_code == 400

    def test_mutated_circuit_never_passes(self):
        # any single-gate mutation must break verification
        from hamsynth.circuits import Circuit, Gate
        from hamsynth.direct import DirectSynthesisOptions, synthesize_direct
        from hamsynth.parser import parse_expr
        from hamsynth.simulate import circuit_unitary, expm_hermitian, phase_distance
        from hamsynth.algebra import dense_of_expr

        expr = parse_expr("0.5 * n0 s1 sd2 + h.c.")
        circ = synthesize_direct(expr.terms[0], DirectSynthesisOptions(theta=0.4), 3)
        exact = expm_hermitian(dense_of_expr(expr), 0.4)
        assert phase_distance(circuit_unitary(circ), exact) < 1e-10
        for i, g in enumerate(circ.gates):
            gates = list(circ.gates)
            if g.theta is not None:
                gates[i] = Gate(g.kind, g.targets, g.key, g.theta + 1e-3)
            else:
                del gates[i]
            mutated = Circuit(circ.num_qubits, tuple(gates))
            assert phase_distance(circuit_unitary(mutated), exact) > 1e-10


class TestAppEndpoints:
    def test_hubo(self):
        r = client.post("/hubo", json={"problem": HUBO_TEXT, "t": 0.3})
        assert r.status_code == 200
        body = r.json()
        assert body["num_vars"] == 3
        assert body["formalism"] == "n"
        assert body["totals"]["crossover_order"] == 8

    def test_fermion(self):
        r = client.post("/fermion", json={"terms": FERMION_TEXT, "theta": 0.2})
        assert r.status_code == 200
        body = r.json()
        assert body["num_modes"] == 4
        assert body["circuit"]["gates"]

    def test_fd(self):
        r = client.post("/fd", json={"grid": GRID_TEXT})
        assert r.status_code == 200
        body = r.json()
        assert body["num_qubits"] == 2
        assert body["num_terms"] == 3  # diagonal + two shift terms
        assert body["oracle_distance"] == 0

    def test_fd_with_circuit(self):
        r = client.post("/fd", json={"grid": GRID_TEXT, "theta": 0.3, "steps": 2})
        assert r.status_code == 200
        assert r.json()["circuit"] is not None
