"""Gate-level intermediate representation.

Gates carry explicit multi-qubit control keys (arbitrary 0/1 patterns), which
the simulator executes natively; decomposition into a 2-qubit gate set is a
counting model, not an IR pass.  Angle conventions:

* ``RX(t) = exp(-i t X / 2)`` and likewise for RY/RZ,
* ``Phase(t) = diag(1, exp(i t))``,
* ``GlobalPhase(t)`` multiplies the state by ``exp(i t)``,
* ``Keyed*`` gates apply their base gate to the targets only when every key
  qubit matches its key bit.  A ``KeyedPhase`` with no target multiplies the
  key-matching subspace by ``exp(i t)``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

__all__ = [
    "GateKind",
    "Gate",
    "Circuit",
    "CountReport",
    "parity_network",
    "transition_network",
    "transition_pattern",
    "keyed_z",
    "keyed_double_z",
    "keyed_x_between",
    "projector_flip",
    "count",
]


class GateKind(Enum):
    X = "X"
    H = "H"
    S = "S"
    Sdg = "Sdg"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    Phase = "Phase"
    CX = "CX"
    CZ = "CZ"
    GlobalPhase = "GlobalPhase"
    KeyedX = "KeyedX"
    KeyedZ = "KeyedZ"
    KeyedPhase = "KeyedPhase"
    KeyedRX = "KeyedRX"
    KeyedRY = "KeyedRY"
    SWAP = "SWAP"
    FSWAP = "FSWAP"


_PARAMETRIC = {
    GateKind.RX,
    GateKind.RY,
    GateKind.RZ,
    GateKind.Phase,
    GateKind.GlobalPhase,
    GateKind.KeyedPhase,
    GateKind.KeyedRX,
    GateKind.KeyedRY,
}
_KEYED = {
    GateKind.KeyedX,
    GateKind.KeyedZ,
    GateKind.KeyedPhase,
    GateKind.KeyedRX,
    GateKind.KeyedRY,
}
_TWO_TARGET = {GateKind.CX, GateKind.CZ, GateKind.SWAP, GateKind.FSWAP}
#: rotation-class gates for the CountReport rotation counter
ROTATION_KINDS = _PARAMETRIC - {GateKind.GlobalPhase}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    targets: tuple[int, ...] = ()
    key: tuple[tuple[int, int], ...] = ()
    theta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(
            self, "key", tuple(sorted((int(q), int(b)) for q, b in dict(self.key).items()))
        )
        if self.kind in _KEYED and not self.key:
            raise ValueError(f"{self.kind.value} requires a non-empty key")
        if self.kind not in _KEYED and self.key:
            raise ValueError(f"{self.kind.value} does not take a key")
        if self.kind in _PARAMETRIC:
            if self.theta is None:
                raise ValueError(f"{self.kind.value} requires an angle")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise ValueError(f"{self.kind.value} takes no angle")
        key_qubits = {q for q, _ in self.key}
        if key_qubits & set(self.targets):
            raise ValueError("key qubits must be disjoint from targets")
        if any(b not in (0, 1) for _, b in self.key):
            raise ValueError("key bits must be 0 or 1")
        n_targets = len(self.targets)
        if self.kind in _TWO_TARGET and n_targets != 2:
            raise ValueError(f"{self.kind.value} needs exactly two targets")
        if self.kind is GateKind.GlobalPhase and n_targets:
            raise ValueError("GlobalPhase takes no targets")
        if self.kind in _TWO_TARGET and self.targets[0] == self.targets[1]:
            raise ValueError("two-qubit gate targets must differ")
        single = self.kind not in _TWO_TARGET and self.kind is not GateKind.GlobalPhase
        if single:
            if self.kind is GateKind.KeyedPhase:
                if n_targets > 1:
                    raise ValueError("KeyedPhase takes at most one target")
            elif n_targets != 1:
                raise ValueError(f"{self.kind.value} needs exactly one target")

    @property
    def key_dict(self) -> dict[int, int]:
        return dict(self.key)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + tuple(q for q, _ in self.key)

    def inverse(self) -> "Gate":
        if self.kind is GateKind.S:
            return Gate(GateKind.Sdg, self.targets)
        if self.kind is GateKind.Sdg:
            return Gate(GateKind.S, self.targets)
        if self.kind in _PARAMETRIC:
            return Gate(self.kind, self.targets, self.key, -self.theta)
        return self  # self-inverse: X, H, CX, CZ, SWAP, FSWAP, KeyedX, KeyedZ

    def shifted(self, offset: int) -> "Gate":
        return Gate(
            self.kind,
            tuple(q + offset for q in self.targets),
            tuple((q + offset, b) for q, b in self.key),
            self.theta,
        )


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list on a fixed register; the first gate acts first."""

    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q >= self.num_qubits or q < 0 for q in g.qubits):
                raise ValueError(f"gate {g.kind.value} touches a qubit outside the register")

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> "Circuit":
        return Circuit(self.num_qubits, tuple(g.inverse() for g in reversed(self.gates)))

    def then(self, other: "Circuit") -> "Circuit":
        n = max(self.num_qubits, other.num_qubits)
        return Circuit(n, self.gates + other.gates)


@dataclass(frozen=True)
class CountReport:
    per_kind: Mapping[str, int]
    two_qubit_count: int
    depth: int
    rotation_count: int
    ancilla_count: int = 0


def _kind_label(g: Gate) -> str:
    if g.kind in _KEYED:
        return f"{g.kind.value}[{len(g.key)}]"
    return g.kind.value


def count(circuit: Circuit) -> CountReport:
    """Gate counts, footprint-2 gate count, rotation count and greedy depth.

    Depth layers gates greedily: a gate joins the earliest layer after the
    last layer that used any of its qubits.  Keyed gates are labelled with
    their key size, e.g. ``KeyedPhase[2]``.
    """
    per_kind: Counter[str] = Counter()
    busy = [0] * circuit.num_qubits
    depth = 0
    two_qubit = 0
    rotations = 0
    for g in circuit.gates:
        per_kind[_kind_label(g)] += 1
        qs = g.qubits
        if len(qs) == 2:
            two_qubit += 1
        if g.kind in ROTATION_KINDS:
            rotations += 1
        if qs:
            layer = 1 + max(busy[q] for q in qs)
            for q in qs:
                busy[q] = layer
            depth = max(depth, layer)
    return CountReport(dict(per_kind), two_qubit, depth, rotations)


def parity_network(qubits: Sequence[int], topology: str = "chain") -> tuple[Circuit, int]:
    """CX network accumulating the XOR of all input bits onto a root qubit.

    The root is the lowest index.  Both topologies use exactly ``k - 1`` CX
    gates; the tree layers them pairwise so its depth is ``ceil(log2 k)``.
    """
    qs = sorted(int(q) for q in qubits)
    if not qs:
        raise ValueError("parity network needs at least one qubit")
    if len(set(qs)) != len(qs):
        raise ValueError("duplicate qubits")
    root = qs[0]
    n = max(qs) + 1
    gates: list[Gate] = []
    if topology == "chain":
        for src, dst in zip(qs[:0:-1], qs[-2::-1]):
            gates.append(Gate(GateKind.CX, (src, dst)))
    elif topology == "tree":
        active = qs
        while len(active) > 1:
            nxt = []
            for i in range(0, len(active) - 1, 2):
                gates.append(Gate(GateKind.CX, (active[i + 1], active[i])))
                nxt.append(active[i])
            if len(active) % 2 == 1:
                nxt.append(active[-1])
            active = nxt
    else:
        raise ValueError("topology must be 'chain' or 'tree'")
    return Circuit(n, tuple(gates)), root


def transition_network(qubits: Sequence[int], topology: str = "chain") -> tuple[Circuit, int]:
    """CX basis change splitting a complementary state pair on a root qubit.

    After the network, every non-root qubit holds the XOR of a block of the
    original bits of even size, so a state and its bitwise complement map to
    images that agree everywhere except on the root (the lowest index).
    Uses ``k - 1`` CX; depth is ``k - 1`` for the chain, ``ceil(log2 k)`` for
    the tree.
    """
    qs = sorted(int(q) for q in qubits)
    if not qs:
        raise ValueError("transition network needs at least one qubit")
    if len(set(qs)) != len(qs):
        raise ValueError("duplicate qubits")
    root = qs[0]
    n = max(qs) + 1
    gates: list[Gate] = []
    if topology == "chain":
        # far end first so every control still carries its original bit
        for i in range(len(qs) - 1, 0, -1):
            gates.append(Gate(GateKind.CX, (qs[i - 1], qs[i])))
    elif topology == "tree":
        active = qs
        while len(active) > 1:
            nxt = []
            for i in range(0, len(active) - 1, 2):
                gates.append(Gate(GateKind.CX, (active[i], active[i + 1])))
                nxt.append(active[i])
            if len(active) % 2 == 1:
                nxt.append(active[-1])
            active = nxt
    else:
        raise ValueError("topology must be 'chain' or 'tree'")
    return Circuit(n, tuple(gates)), root


def transition_pattern(
    circuit: Circuit, state: Mapping[int, int]
) -> dict[int, int]:
    """Classically track a basis state's bits through a CX-only circuit."""
    bits = dict(state)
    for g in circuit.gates:
        if g.kind is not GateKind.CX:
            raise ValueError("pattern tracking only supports CX circuits")
        c, t = g.targets
        bits[t] = bits[t] ^ bits[c]
    return bits


def projector_flip(state: Mapping[int, int]) -> Circuit:
    """Circuit for ``I - 2|s><s|``: a -1 phase on one basis pattern.

    Realized as X conjugation on the 0-bits around an all-ones controlled Z
    (a plain Z when the pattern has a single qubit, a CZ for two).
    """
    bits = {int(q): int(b) for q, b in state.items()}
    if not bits:
        raise ValueError("projector needs at least one qubit")
    n = max(bits) + 1
    zeros = [q for q, b in sorted(bits.items()) if b == 0]
    wrap = [Gate(GateKind.X, (q,)) for q in zeros]
    qs = sorted(bits)
    target = qs[-1]
    controls = qs[:-1]
    if not controls:
        core = [Gate(GateKind.Phase, (target,), theta=math.pi)]
    elif len(controls) == 1:
        core = [Gate(GateKind.CZ, (controls[0], target))]
    else:
        core = [Gate(GateKind.KeyedZ, (target,), tuple((q, 1) for q in controls))]
    return Circuit(n, tuple(wrap + core + wrap))


def keyed_z(key: Mapping[int, int], target: int) -> Circuit:
    """``I - 2 |key, target=1><key, target=1|`` on ``key`` plus one target.

    X gates conjugate the 0-keyed controls around an all-ones multi-controlled
    Z; a single 1-bit key collapses to a plain CZ.
    """
    bits = {int(q): int(b) for q, b in key.items()}
    if not bits:
        raise ValueError("keyed_z requires a non-empty key")
    if target in bits:
        raise ValueError("target overlaps the key")
    full = dict(bits)
    full[target] = 1
    return projector_flip(full)


def _complement_pair(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    sa = {int(q): int(v) for q, v in a.items()}
    sb = {int(q): int(v) for q, v in b.items()}
    if set(sa) != set(sb):
        raise ValueError("states must cover the same qubits")
    if any(sa[q] == sb[q] for q in sa):
        raise ValueError("states must be bitwise complements")
    return sa


def keyed_double_z(a: Mapping[int, int], b: Mapping[int, int]) -> Circuit:
    """``I - 2(|a><a| + |b><b|)`` for a complementary state pair.

    Built as a transition basis change, a single pattern flip on the non-root
    qubits, and the uncompute.  A single-qubit pair is rejected: the flip
    pattern would be empty (the operator degenerates to ``-I``).
    """
    sa = _complement_pair(a, b)
    if len(sa) < 2:
        raise ValueError("keyed_double_z needs at least two qubits")
    net, root = transition_network(sorted(sa))
    pattern = transition_pattern(net, sa)
    others = {q: v for q, v in pattern.items() if q != root}
    flip = projector_flip(others)
    body = Circuit(max(net.num_qubits, flip.num_qubits), flip.gates)
    return net.then(body).then(net.inverse())


def keyed_x_between(a: Mapping[int, int], b: Mapping[int, int]) -> Circuit:
    """Unitary swapping ``|a>`` and ``|b>`` (complements) and fixing the rest."""
    sa = _complement_pair(a, b)
    net, root = transition_network(sorted(sa))
    pattern = transition_pattern(net, sa)
    key = tuple((q, v) for q, v in sorted(pattern.items()) if q != root)
    if key:
        core = Gate(GateKind.KeyedX, (root,), key)
    else:
        core = Gate(GateKind.X, (root,))
    body = Circuit(net.num_qubits, (core,))
    return net.then(body).then(net.inverse())
