"""HTTP surface wrapping the synthesis core.

Every endpoint is a pure request/response call; the command-line client
drives this app in-process by default, or over the network against a
``uvicorn hamsynth.service:app`` instance.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from ..algebra import (
    HamiltonianExpr,
    dense_of_expr,
)
from ..block_encoding import be_term
from ..circuits import Circuit, Gate, count
from ..direct import DirectSynthesisOptions, synthesize_direct, term_basis_evolution
from ..fdm import assemble, parse_grid, stencil_oracle
from ..fermion import build_fermion_expr, parse_fermion_terms
from ..hubo import (
    CountModel,
    build_expr,
    crossover_threshold,
    parse_problem,
    synthesize_hubo,
    two_qubit_totals,
)
from ..parser import ParseError, format_expr, parse_expr
from ..pauli_synth import TrotterPlan, pauli_fragments, trotter_product
from ..simulate import apply, basis_state, circuit_unitary, expm_hermitian, phase_distance

#: dense verification limit; larger registers fall back to the basis-state oracle
_DENSE_VERIFY_QUBITS = 10
_ORACLE_SAMPLES = 48
from . import models as m

app = FastAPI(
    title="hamsynth",
    description="Exact Hamiltonian-simulation synthesis and block-encoding",
)

_COMPLEX_MODES = {"exact": "exact_axis", "split": "paper_split"}


def _error(status: int, detail: m.ErrorDetail) -> HTTPException:
    return HTTPException(status_code=status, detail=detail.model_dump())


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ParseError as exc:
        raise _error(
            422,
            m.ErrorDetail(kind="parse", message=exc.message, line=exc.line, column=exc.column),
        ) from None
    except ValueError as exc:
        raise _error(400, m.ErrorDetail(kind="invalid", message=str(exc))) from None


def _resolve_source(src: m.SourceOptions) -> HamiltonianExpr:
    picked = [s for s in (src.expr, src.hubo, src.fermion, src.fd) if s is not None]
    if len(picked) != 1:
        raise ValueError("provide exactly one of expr, hubo, fermion or fd")
    if src.expr is not None:
        return parse_expr(src.expr, num_qubits=src.num_qubits)
    if src.hubo is not None:
        expr = build_expr(parse_problem(src.hubo))
    elif src.fermion is not None:
        expr = build_fermion_expr(parse_fermion_terms(src.fermion), src.num_qubits)
    else:
        expr = assemble(parse_grid(src.fd))
    if src.num_qubits is not None and src.num_qubits > expr.num_qubits:
        expr = HamiltonianExpr(src.num_qubits, expr.terms)
    return expr


def _gate_model(g: Gate) -> m.GateModel:
    return m.GateModel(
        kind=g.kind.value, targets=list(g.targets), key=dict(g.key), theta=g.theta
    )


def _circuit_model(c: Circuit) -> m.CircuitModel:
    return m.CircuitModel(num_qubits=c.num_qubits, gates=[_gate_model(g) for g in c.gates])


def _counts_model(c: Circuit) -> m.CountsModel:
    r = count(c)
    return m.CountsModel(
        per_kind=dict(r.per_kind),
        two_qubit=r.two_qubit_count,
        depth=r.depth,
        rotations=r.rotation_count,
        ancillas=r.ancilla_count,
    )


def _synthesize(expr: HamiltonianExpr, theta, strategy, parity, complex_mode) -> Circuit:
    if strategy == "usual":
        return trotter_product(expr, TrotterPlan(1, 1, theta), "usual", parity)
    opts = DirectSynthesisOptions(
        theta=theta, parity_topology=parity, complex_mode=_COMPLEX_MODES[complex_mode]
    )
    gates = []
    for term in expr.terms:
        gates.extend(synthesize_direct(term, opts, expr.num_qubits).gates)
    return Circuit(expr.num_qubits, tuple(gates))


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/synth", response_model=m.SynthResponse)
def synth(req: m.SynthRequest) -> m.SynthResponse:
    def go():
        expr = _resolve_source(req)
        circ = _synthesize(expr, req.theta, req.strategy, req.parity, req.complex_mode)
        return m.SynthResponse(
            expr=format_expr(expr), circuit=_circuit_model(circ), counts=_counts_model(circ)
        )

    return _run(go)


@app.post("/pauli", response_model=m.PauliResponse)
def pauli(req: m.PauliRequest) -> m.PauliResponse:
    def go():
        expr = _resolve_source(req)
        strings = [
            m.PauliStringModel(coefficient=p.coefficient.real, letters=dict(p.letters))
            for p in pauli_fragments(expr)
        ]
        return m.PauliResponse(num_qubits=expr.num_qubits, strings=strings)

    return _run(go)


@app.post("/lcu", response_model=m.LcuResponse)
def lcu(req: m.LcuRequest) -> m.LcuResponse:
    def go():
        expr = _resolve_source(req)
        if len(expr.terms) != 1:
            raise ValueError("block-encoding acts on a single term")
        dec = be_term(expr.terms[0], expr.num_qubits)
        error = None
        if req.verify and expr.num_qubits <= 10:
            error = dec.reconstruction_error()
        return m.LcuResponse(
            expr=format_expr(expr),
            num_qubits=expr.num_qubits,
            pairs=[
                m.LcuPairModel(coefficient=c, circuit=_circuit_model(circ))
                for c, circ in dec.pairs
            ],
            reconstruction_error=error,
        )

    return _run(go)


@app.post("/trotter", response_model=m.SynthResponse)
def trotter(req: m.TrotterRequest) -> m.SynthResponse:
    def go():
        expr = _resolve_source(req)
        plan = TrotterPlan(order=req.order, steps=req.steps, t=req.t)
        circ = trotter_product(expr, plan, req.strategy, req.parity)
        return m.SynthResponse(
            expr=format_expr(expr), circuit=_circuit_model(circ), counts=_counts_model(circ)
        )

    return _run(go)


@app.post("/count", response_model=m.CountResponse)
def count_endpoint(req: m.CountRequest) -> m.CountResponse:
    def go():
        totals = None
        if req.hubo is not None:
            problem = parse_problem(req.hubo)
            circ = synthesize_hubo(problem, req.theta, req.strategy)
            if req.compare:
                model = CountModel()
                raw = two_qubit_totals(problem, model)
                totals = m.StrategyTotalsModel(
                    direct=raw["direct"],
                    usual=raw["usual"],
                    crossover_order=crossover_threshold(model),
                )
        else:
            expr = _resolve_source(req)
            circ = _synthesize(expr, req.theta, req.strategy, req.parity, req.complex_mode)
        r = count(circ)
        return m.CountResponse(
            counts=dict(r.per_kind),
            two_qubit=r.two_qubit_count,
            depth=r.depth,
            rotations=r.rotation_count,
            ancillas=r.ancilla_count,
            totals=totals,
        )

    return _run(go)


def _oracle_distance(expr, circ, theta) -> float:
    """Statevector check of a single-term circuit on sampled basis states.

    One term rotates each basis state against at most one partner, so its
    exact evolution has a closed form that never touches a dense matrix; the
    sample always includes the fully keyed state alongside random draws.
    """
    (term,) = expr.terms
    n = expr.num_qubits
    from ..direct import classify

    part = classify(term)
    keyed = dict(part.number_key)
    keyed.update(part.transition_sides)
    rng = np.random.default_rng(1789)
    samples = [keyed, {q: 1 - b for q, b in keyed.items()}]
    for _ in range(_ORACLE_SAMPLES):
        samples.append({q: int(rng.integers(2)) for q in range(n)})
    worst = 0.0
    for bits in samples:
        got = apply(circ, basis_state(n, bits))
        expected = np.zeros_like(got)
        for image_bits, amp in term_basis_evolution(term, theta, bits):
            idx = sum(image_bits.get(q, 0) << (n - 1 - q) for q in range(n))
            expected[idx] += amp
        worst = max(worst, float(np.abs(got - expected).max()))
    return worst


@app.post("/verify", response_model=m.VerifyResponse)
def verify(req: m.VerifyRequest) -> m.VerifyResponse:
    def go():
        expr = _resolve_source(req)
        if req.steps == 1 and req.order == 1:
            circ = _synthesize(expr, req.theta, req.strategy, req.parity, req.complex_mode)
        else:
            plan = TrotterPlan(order=req.order, steps=req.steps, t=req.theta)
            circ = trotter_product(expr, plan, req.strategy, req.parity)
        if expr.num_qubits <= _DENSE_VERIFY_QUBITS:
            exact = expm_hermitian(dense_of_expr(expr), req.theta)
            distance = phase_distance(circuit_unitary(circ), exact)
        elif len(expr.terms) == 1 and req.strategy == "direct" and req.steps == 1:
            distance = _oracle_distance(expr, circ, req.theta)
        else:
            raise ValueError(
                "dense verification stops at 10 qubits; larger registers "
                "support only single-term direct circuits"
            )
        r = count(circ)
        return m.VerifyResponse(
            expr=format_expr(expr),
            counts=dict(r.per_kind),
            two_qubit=r.two_qubit_count,
            depth=r.depth,
            rotations=r.rotation_count,
            verification=m.VerificationModel(
                distance=distance, tolerance=req.tolerance, passed=bool(distance < req.tolerance)
            ),
        )

    return _run(go)


@app.post("/hubo", response_model=m.HuboResponse)
def hubo(req: m.HuboRequest) -> m.HuboResponse:
    def go():
        problem = parse_problem(req.problem)
        circ = synthesize_hubo(problem, req.t, req.strategy)
        model = CountModel()
        raw = two_qubit_totals(problem, model)
        return m.HuboResponse(
            num_vars=problem.num_vars,
            formalism=problem.formalism,
            expr=format_expr(build_expr(problem)),
            circuit=_circuit_model(circ),
            counts=_counts_model(circ),
            totals=m.StrategyTotalsModel(
                direct=raw["direct"],
                usual=raw["usual"],
                crossover_order=crossover_threshold(model),
            ),
        )

    return _run(go)


@app.post("/fermion", response_model=m.FermionResponse)
def fermion(req: m.FermionRequest) -> m.FermionResponse:
    def go():
        expr = build_fermion_expr(parse_fermion_terms(req.terms))
        circ = _synthesize(expr, req.theta, "direct", req.parity, "exact")
        return m.FermionResponse(
            num_modes=expr.num_qubits,
            expr=format_expr(expr),
            circuit=_circuit_model(circ),
            counts=_counts_model(circ),
        )

    return _run(go)


@app.post("/fd", response_model=m.FdResponse)
def fd(req: m.FdRequest) -> m.FdResponse:
    def go():
        grid = parse_grid(req.grid)
        expr = assemble(grid)
        oracle_distance = None
        if expr.num_qubits <= 10:
            dense = dense_of_expr(expr)
            oracle_distance = float(np.abs(dense - stencil_oracle(grid)).max())
        circuit = counts = None
        if req.theta is not None:
            plan = TrotterPlan(order=req.order, steps=req.steps, t=req.theta)
            circ = trotter_product(expr, plan, "direct", req.parity)
            circuit = _circuit_model(circ)
            counts = _counts_model(circ)
        return m.FdResponse(
            num_qubits=expr.num_qubits,
            num_terms=len(expr.terms),
            expr=format_expr(expr),
            oracle_distance=oracle_distance,
            circuit=circuit,
            counts=counts,
        )

    return _run(go)
