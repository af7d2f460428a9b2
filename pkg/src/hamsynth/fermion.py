"""Second-quantized fermionic terms under the Jordan-Wigner encoding.

A mode's annihilator is a lowering operator dressed with Z on every lower
mode; products of such operators stay inside the ladder/Z single-qubit
algebra, so one- and two-body terms reduce symbolically to a single
hermitized term (ladder factors on the mode qubits, Z strings in between,
and a sign soaked into the coefficient).  All phase conventions are pinned
by the dense product oracle in the tests, not by any printed matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import HamiltonianExpr, Symbol, Term, dense_of_term, symbol_product
from .circuits import Circuit, Gate, GateKind
from .direct import DirectSynthesisOptions, synthesize_direct

__all__ = [
    "FermionTerm",
    "jordan_wigner",
    "jw_dense",
    "ladder_product",
    "one_body_term",
    "two_body_term",
    "pair_gate_B",
    "sign_controlled_evolution",
    "fswap",
    "parse_fermion_terms",
    "build_fermion_expr",
]


@dataclass(frozen=True)
class FermionTerm:
    """A line of a fermionic problem file: one- or two-body with a real weight."""

    kind: str  # "1B" or "2B"
    indices: tuple[int, ...]
    coefficient: float

    def to_term(self) -> Term:
        if self.kind == "1B":
            i, j = self.indices
            return one_body_term(i, j, self.coefficient)
        i, j, k, l = self.indices
        return two_body_term(i, j, k, l, self.coefficient)


def jordan_wigner(mode: int, num_modes: int) -> Term:
    """The annihilation operator of one mode: Z on every lower mode, then a
    lowering operator.  Not Hermitian; useful only as an algebra intermediate."""
    if not 0 <= mode < num_modes:
        raise ValueError("mode out of range")
    factors = {q: Symbol.Z for q in range(mode)}
    factors[mode] = Symbol.Lower
    return Term(1.0, factors, hermitized=False, check=False)


def jw_dense(mode: int, num_modes: int, dagger: bool = False) -> np.ndarray:
    """Dense matrix of a JW ladder operator (the independent oracle path)."""
    t = jordan_wigner(mode, num_modes)
    m = dense_of_term(t, num_modes)
    return m.conj().T if dagger else m


def ladder_product(ops: list[tuple[int, bool]], num_modes: int) -> Term:
    """Symbolic product of JW ladder operators ``(mode, dagger)``.

    Returns a single raw term (possibly with coefficient zero when the
    product annihilates); the matrix product of the corresponding dense
    operators equals its dense form exactly.
    """
    scale: complex = 1.0
    factors: dict[int, Symbol] = {}
    for mode, dagger in ops:
        if not 0 <= mode < num_modes:
            raise ValueError("mode out of range")
        op_factors = {q: Symbol.Z for q in range(mode)}
        op_factors[mode] = Symbol.Raise if dagger else Symbol.Lower
        for q, sym in op_factors.items():
            s, combined = symbol_product(factors.get(q, Symbol.Id), sym)
            scale *= s
            if scale == 0:
                return Term(0.0, {}, hermitized=False, check=False)
            factors[q] = combined
    return Term(scale, factors, hermitized=False, check=False)


def one_body_term(i: int, j: int, h: float) -> Term:
    """``(h/2) (a_i^dag a_j + h.c.)`` as one hermitized term (``i < j``)."""
    if i == j:
        raise ValueError("one-body term requires distinct modes")
    if i > j:
        raise ValueError("one-body term expects i < j")
    raw = ladder_product([(i, True), (j, False)], j + 1)
    return Term(h / 2 * raw.coefficient, raw.factors, hermitized=True)


def two_body_term(i: int, j: int, k: int, l: int, h: float) -> Term:
    """``(h/2) (a_i^dag a_j^dag a_k a_l + h.c.)`` as one hermitized term.

    Requires ``i < j``, ``k < l`` and disjoint index pairs; the JW signs for
    interleaved index orders come out of the symbolic product.
    """
    if not (i < j and k < l):
        raise ValueError("two-body term expects i < j and k < l")
    if {i, j} & {k, l}:
        raise ValueError("two-body term requires four distinct modes")
    top = max(i, j, k, l)
    raw = ladder_product([(i, True), (j, True), (k, False), (l, False)], top + 1)
    return Term(h / 2 * raw.coefficient, raw.factors, hermitized=True)


def pair_gate_B(alpha: float, beta: float, t: float, qubits: tuple[int, int] = (0, 1)) -> Circuit:
    """Evolution of the two-qubit pairing operator.

    The generator couples ``|01> <-> |10>`` with weight alpha and
    ``|00> <-> |11>`` with weight beta; both couplers share one CX basis
    change, after which they are keyed rotations on opposite key values.
    """
    i, j = qubits
    if i == j:
        raise ValueError("pair gate needs two distinct qubits")
    n = max(i, j) + 1
    gates = (
        Gate(GateKind.CX, (i, j)),
        Gate(GateKind.KeyedRX, (i,), ((j, 1),), 2 * t * alpha),
        Gate(GateKind.KeyedRX, (i,), ((j, 0),), 2 * t * beta),
        Gate(GateKind.CX, (i, j)),
    )
    return Circuit(n, gates)


def sign_controlled_evolution(
    term: Term,
    t: float,
    control: int,
    num_qubits: int | None = None,
    topology: str = "chain",
) -> Circuit:
    """``exp(-i t H)`` when the control qubit is 0, ``exp(+i t H)`` when 1."""
    opts = DirectSynthesisOptions(theta=t, parity_topology=topology)
    n = num_qubits
    if n is None:
        n = max(term.qubit_span, control + 1)
    return synthesize_direct(term, opts, num_qubits=n, sign_control=control)


def fswap(i: int, j: int) -> Circuit:
    """Fermionic swap: exchange two mode qubits with a -1 phase on ``|11>``."""
    if i == j:
        raise ValueError("fswap needs two distinct qubits")
    n = max(i, j) + 1
    gates = (
        Gate(GateKind.CX, (i, j)),
        Gate(GateKind.CX, (j, i)),
        Gate(GateKind.CX, (i, j)),
        Gate(GateKind.CZ, (i, j)),
    )
    return Circuit(n, gates)


def parse_fermion_terms(text: str) -> list[FermionTerm]:
    """Parse ``1B i j h`` / ``2B i j k l h`` lines (blank/# lines ignored)."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        try:
            if parts[0] == "1B" and len(parts) == 4:
                out.append(FermionTerm("1B", (int(parts[1]), int(parts[2])), float(parts[3])))
            elif parts[0] == "2B" and len(parts) == 6:
                out.append(
                    FermionTerm(
                        "2B",
                        tuple(int(p) for p in parts[1:5]),
                        float(parts[5]),
                    )
                )
            else:
                raise ValueError("unrecognized shape")
        except (ValueError, IndexError):
            raise ValueError(
                f"line {lineno}: expected '1B i j h' or '2B i j k l h'"
            ) from None
    return out


def build_fermion_expr(terms: list[FermionTerm], num_modes: int | None = None) -> HamiltonianExpr:
    built = [ft.to_term() for ft in terms]
    if num_modes is None:
        num_modes = max((t.max_index for t in built), default=0) + 1
    return HamiltonianExpr(num_modes, tuple(built))
