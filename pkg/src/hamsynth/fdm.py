"""First-neighbor finite-difference operators on 1/2/3-D cartesian grids.

The node index within a line lives on the low-significance qubits; a line
selector sits above it and a layer selector above that (2-D grids have two
lines, 3-D grids two layers of two lines).  Per-line blocks are diagonal plus
neighbor-shift contributions selected by hole/number prefixes; inter-line and
inter-layer couplings are X gates on the selector qubits, again keyed by the
other selector.  Boundary handling appends extra keyed terms: periodic wraps,
second-neighbor couplers for derivative constraints, or individually set
components.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import HamiltonianExpr, Symbol, Term

__all__ = [
    "CoefficientTable",
    "BoundaryOverride",
    "GridSpec",
    "laplacian_coefficients",
    "shift_operator",
    "second_neighbor_terms",
    "assemble",
    "boundary_matrix_B",
    "stencil_oracle",
    "parse_grid",
]

_LINES_PER_DIM = {1: 1, 2: 2, 3: 4}
_SELECTORS_PER_DIM = {1: 0, 2: 1, 3: 2}


@dataclass(frozen=True)
class CoefficientTable:
    """Stencil coefficients: one diagonal and neighbor value per line, plus
    inter-line and inter-layer couplings (upper/lower line pairs)."""

    line_diagonal: tuple[float, ...]
    line_neighbor: tuple[float, ...]
    inter_line: tuple[float, ...] = ()
    inter_layer: tuple[float, ...] = ()


@dataclass(frozen=True)
class BoundaryOverride:
    """Extra keyed term(s) appended to an assembled grid operator.

    ``selector`` carries hole/number bits on the selector qubits choosing the
    line the override applies to (empty in 1-D).  Kinds:

    * ``periodic_wrap``: couple the first and last node of the line,
    * ``neumann_second_neighbor``: add the shift-by-two coupler, optionally
      restricted by ``node_bits`` (projector bits on free node qubits),
    * ``component_set``: set the ``(row, col)`` component (plus its mirror)
      of the selected line block.
    """

    kind: str
    value: float
    selector: dict[int, int] = field(default_factory=dict)
    node_bits: dict[int, int] = field(default_factory=dict)
    row: int | None = None
    col: int | None = None

    def __post_init__(self):
        if self.kind not in ("periodic_wrap", "neumann_second_neighbor", "component_set"):
            raise ValueError(f"unknown override kind {self.kind!r}")


@dataclass(frozen=True)
class GridSpec:
    dimension: int
    nodes_per_line: int
    coefficients: CoefficientTable
    overrides: tuple[BoundaryOverride, ...] = ()

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2 or 3")
        n = self.nodes_per_line
        if n < 2 or n & (n - 1):
            raise ValueError("nodes per line must be a power of two, at least 2")
        lines = _LINES_PER_DIM[self.dimension]
        if len(self.coefficients.line_diagonal) != lines:
            raise ValueError(f"{lines} diagonal coefficients expected")
        if len(self.coefficients.line_neighbor) != lines:
            raise ValueError(f"{lines} neighbor coefficients expected")

    @property
    def node_qubits(self) -> int:
        return self.nodes_per_line.bit_length() - 1

    @property
    def selector_qubits(self) -> int:
        return _SELECTORS_PER_DIM[self.dimension]

    @property
    def num_qubits(self) -> int:
        return self.selector_qubits + self.node_qubits


def laplacian_coefficients(dimension: int) -> CoefficientTable:
    """Unit-step Laplacian stencil: neighbors 1, diagonal -2 per dimension."""
    if dimension not in (1, 2, 3):
        raise ValueError("dimension must be 1, 2 or 3")
    lines = _LINES_PER_DIM[dimension]
    diag = -2.0 * dimension
    return CoefficientTable(
        line_diagonal=(diag,) * lines,
        line_neighbor=(1.0,) * lines,
        inter_line=(1.0,) * (0 if dimension == 1 else (1 if dimension == 2 else 2)),
        inter_layer=(1.0, 1.0) if dimension == 3 else (),
    )


def shift_operator(q: int) -> list[Term]:
    """Terms summing to the N x N first-neighbor adjacency, N = 2**q.

    Term m couples across blocks of size ``2**(m-1)``: a raising operator on
    qubit ``q - m`` followed by lowering operators below it (plus h.c.); the
    first term is a plain X on the lowest-significance qubit.
    """
    if q < 1:
        raise ValueError("at least one qubit is required")
    terms = [Term(1.0, {q - 1: Symbol.X})]
    for m in range(2, q + 1):
        factors = {q - m: Symbol.Raise}
        for offset in range(1, m):
            factors[q - m + offset] = Symbol.Lower
        terms.append(Term(1.0, factors, hermitized=True))
    return terms


def second_neighbor_terms(q: int) -> list[Term]:
    """Terms summing to the shift-by-two adjacency on ``2**q`` nodes."""
    if q < 2:
        raise ValueError("shift-by-two needs at least two qubits")
    return shift_operator(q - 1)


def _shift_term(term: Term, offset: int) -> Term:
    return Term(
        term.coefficient,
        {q + offset: s for q, s in term.factors.items()},
        term.hermitized,
        check=term.check,
    )


def _with_prefix(term: Term, prefix: dict[int, Symbol]) -> Term:
    factors = dict(prefix)
    factors.update(term.factors)
    return Term(term.coefficient, factors, term.hermitized, check=term.check)


def _line_prefix(grid: GridSpec, line: int) -> dict[int, Symbol]:
    prefix: dict[int, Symbol] = {}
    for sel in range(grid.selector_qubits):
        bit = (line >> (grid.selector_qubits - 1 - sel)) & 1
        prefix[sel] = Symbol.Num if bit else Symbol.Hole
    return prefix


def assemble(grid: GridSpec) -> HamiltonianExpr:
    """Expression whose dense operator is the grid's stencil matrix."""
    coeffs = grid.coefficients
    q = grid.node_qubits
    sel = grid.selector_qubits
    lines = _LINES_PER_DIM[grid.dimension]
    shift = [_shift_term(t, sel) for t in shift_operator(q)]
    terms: list[Term] = []
    for line in range(lines):
        prefix = _line_prefix(grid, line)
        diag = coeffs.line_diagonal[line]
        if diag != 0.0:
            terms.append(Term(diag, prefix))
        neigh = coeffs.line_neighbor[line]
        if neigh != 0.0:
            for t in shift:
                terms.append(
                    _with_prefix(
                        Term(neigh * t.coefficient.real, t.factors, t.hermitized),
                        prefix,
                    )
                )
    if grid.dimension == 2:
        (j,) = coeffs.inter_line or (0.0,)
        if j != 0.0:
            terms.append(Term(j, {0: Symbol.X}))
    elif grid.dimension == 3:
        j12, j34 = coeffs.inter_line or (0.0, 0.0)
        k13, k24 = coeffs.inter_layer or (0.0, 0.0)
        if j12 != 0.0:
            terms.append(Term(j12, {0: Symbol.Hole, 1: Symbol.X}))
        if j34 != 0.0:
            terms.append(Term(j34, {0: Symbol.Num, 1: Symbol.X}))
        if k13 != 0.0:
            terms.append(Term(k13, {0: Symbol.X, 1: Symbol.Hole}))
        if k24 != 0.0:
            terms.append(Term(k24, {0: Symbol.X, 1: Symbol.Num}))
    for ov in grid.overrides:
        terms.extend(_override_terms(grid, ov))
    return HamiltonianExpr(grid.num_qubits, tuple(terms))


def _selector_prefix(grid: GridSpec, ov: BoundaryOverride) -> dict[int, Symbol]:
    prefix = {}
    for sel, bit in ov.selector.items():
        if not 0 <= sel < grid.selector_qubits:
            raise ValueError("override selector outside the selector qubits")
        prefix[sel] = Symbol.Num if bit else Symbol.Hole
    return prefix


def _projector_factors(bits: dict[int, int]) -> dict[int, Symbol]:
    return {q: (Symbol.Num if b else Symbol.Hole) for q, b in bits.items()}


def _override_terms(grid: GridSpec, ov: BoundaryOverride) -> list[Term]:
    q = grid.node_qubits
    sel = grid.selector_qubits
    prefix = _selector_prefix(grid, ov)
    if ov.kind == "periodic_wrap":
        factors = dict(prefix)
        factors.update({sel + k: Symbol.Lower for k in range(q)})
        return [Term(ov.value, factors, hermitized=True)]
    if ov.kind == "neumann_second_neighbor":
        shifted = [_shift_term(t, sel) for t in second_neighbor_terms(q)]
        node_proj = _projector_factors(
            {sel + k: b for k, b in ov.node_bits.items()}
        )
        out = []
        for t in shifted:
            if set(node_proj) & set(t.factors):
                raise ValueError("node_bits overlap the second-neighbor support")
            factors = dict(prefix)
            factors.update(node_proj)
            factors.update(t.factors)
            out.append(Term(ov.value * t.coefficient.real, factors, t.hermitized))
        return out
    # component_set
    if ov.row is None or ov.col is None:
        raise ValueError("component_set override needs row and col")
    if not (0 <= ov.row < grid.nodes_per_line and 0 <= ov.col < grid.nodes_per_line):
        raise ValueError("component indices outside the line")
    factors = dict(prefix)
    hermitized = ov.row != ov.col
    for k in range(q):
        rb = (ov.row >> (q - 1 - k)) & 1
        cb = (ov.col >> (q - 1 - k)) & 1
        if rb == cb:
            factors[sel + k] = Symbol.Num if rb else Symbol.Hole
        elif rb == 1:
            factors[sel + k] = Symbol.Raise
        else:
            factors[sel + k] = Symbol.Lower
    return [Term(ov.value, factors, hermitized=hermitized)]


_B_TERMS: tuple[tuple[str, dict[int, Symbol], bool], ...] = (
    ("b11", {0: Symbol.Hole, 1: Symbol.Hole, 2: Symbol.Hole}, False),
    ("b12", {0: Symbol.Hole, 1: Symbol.Num, 2: Symbol.Num}, False),
    ("b21", {0: Symbol.Num, 1: Symbol.Hole, 2: Symbol.Hole}, False),
    ("b22", {0: Symbol.Num, 1: Symbol.Num, 2: Symbol.Num}, False),
    ("bi1", {0: Symbol.Hole, 1: Symbol.Lower, 2: Symbol.Lower}, True),
    ("bi2", {0: Symbol.Num, 1: Symbol.Lower, 2: Symbol.Lower}, True),
    ("bj12", {0: Symbol.Lower, 1: Symbol.Lower, 2: Symbol.Lower}, True),
    ("b124", {0: Symbol.Hole, 1: Symbol.X, 2: Symbol.Num}, False),
    ("bii", {0: Symbol.Num, 1: Symbol.X}, False),
)


def boundary_matrix_B(coeffs: dict[str, float]) -> HamiltonianExpr:
    """The worked two-line boundary-condition example as an 8 x 8 operator.

    Coefficient names: per-line corner values ``b11 b12 b21 b22``, in-line
    second-neighbor couplers ``bi1 bi2``, the full wrap ``bj12``, the single
    restricted component ``b124`` and the whole-line shift ``bii``.
    """
    unknown = set(coeffs) - {name for name, _, _ in _B_TERMS}
    if unknown:
        raise ValueError(f"unknown coefficients: {sorted(unknown)}")
    terms = []
    for name, factors, hermitized in _B_TERMS:
        v = float(coeffs.get(name, 0.0))
        if v != 0.0:
            terms.append(Term(v, factors, hermitized=hermitized))
    return HamiltonianExpr(3, tuple(terms))


def stencil_oracle(grid: GridSpec) -> np.ndarray:
    """Brute-force assembly by nested loops over nodes (the independent path)."""
    n = grid.nodes_per_line
    lines = _LINES_PER_DIM[grid.dimension]
    dim = lines * n
    a = np.zeros((dim, dim))
    coeffs = grid.coefficients

    def idx(line: int, i: int) -> int:
        return line * n + i

    for line in range(lines):
        for i in range(n):
            a[idx(line, i), idx(line, i)] += coeffs.line_diagonal[line]
            for nb in (i - 1, i + 1):
                if 0 <= nb < n:
                    a[idx(line, i), idx(line, nb)] += coeffs.line_neighbor[line]
    if grid.dimension == 2:
        (j,) = coeffs.inter_line or (0.0,)
        for i in range(n):
            a[idx(0, i), idx(1, i)] += j
            a[idx(1, i), idx(0, i)] += j
    elif grid.dimension == 3:
        j12, j34 = coeffs.inter_line or (0.0, 0.0)
        k13, k24 = coeffs.inter_layer or (0.0, 0.0)
        for i in range(n):
            for (la, lb, v) in ((0, 1, j12), (2, 3, j34), (0, 2, k13), (1, 3, k24)):
                a[idx(la, i), idx(lb, i)] += v
                a[idx(lb, i), idx(la, i)] += v
    for ov in grid.overrides:
        _apply_override_oracle(grid, a, ov)
    return a


def _selected_lines(grid: GridSpec, ov: BoundaryOverride) -> list[int]:
    sel = grid.selector_qubits
    lines = []
    for line in range(_LINES_PER_DIM[grid.dimension]):
        ok = True
        for s, bit in ov.selector.items():
            if ((line >> (sel - 1 - s)) & 1) != bit:
                ok = False
        if ok:
            lines.append(line)
    return lines


def _apply_override_oracle(grid: GridSpec, a: np.ndarray, ov: BoundaryOverride) -> None:
    n = grid.nodes_per_line
    q = grid.node_qubits
    for line in _selected_lines(grid, ov):
        base = line * n
        if ov.kind == "periodic_wrap":
            a[base, base + n - 1] += ov.value
            a[base + n - 1, base] += ov.value
        elif ov.kind == "neumann_second_neighbor":
            for i in range(n - 2):
                node = i  # coupling i <-> i+2, restricted by node_bits on i's bits
                match = all(
                    ((node >> (q - 1 - k)) & 1) == b and ((node + 2) >> (q - 1 - k) & 1) == b
                    for k, b in ov.node_bits.items()
                )
                if match:
                    a[base + i, base + i + 2] += ov.value
                    a[base + i + 2, base + i] += ov.value
        else:
            a[base + ov.row, base + ov.col] += ov.value
            if ov.row != ov.col:
                a[base + ov.col, base + ov.row] += ov.value


def parse_grid(text: str) -> GridSpec:
    """Parse the grid file format: ``key value...`` lines.

    Keys: ``dim``, ``q``, ``a`` (diagonals), ``ai`` (neighbors), ``aj``
    (inter-line), ``ak`` (inter-layer), ``laplacian`` (ignore coefficients,
    use the unit-step stencil), and ``override kind value [sel=..] [row=..]``.
    """
    dim = None
    qq = None
    diag = neigh = inter_line = inter_layer = None
    use_laplacian = False
    overrides: list[BoundaryOverride] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        key = parts[0]
        try:
            if key == "dim":
                dim = int(parts[1])
            elif key == "q":
                qq = int(parts[1])
            elif key == "a":
                diag = tuple(float(p) for p in parts[1:])
            elif key == "ai":
                neigh = tuple(float(p) for p in parts[1:])
            elif key == "aj":
                inter_line = tuple(float(p) for p in parts[1:])
            elif key == "ak":
                inter_layer = tuple(float(p) for p in parts[1:])
            elif key == "laplacian":
                use_laplacian = True
            elif key == "override":
                overrides.append(_parse_override(parts[1:]))
            else:
                raise ValueError(f"unknown key {key!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if dim is None or qq is None:
        raise ValueError("grid file needs 'dim' and 'q' lines")
    if use_laplacian:
        table = laplacian_coefficients(dim)
    else:
        lines = _LINES_PER_DIM[dim]
        if diag is None or neigh is None:
            raise ValueError("grid file needs 'a' and 'ai' lines (or 'laplacian')")
        table = CoefficientTable(
            line_diagonal=diag,
            line_neighbor=neigh,
            inter_line=inter_line or ((0.0,) * (0 if dim == 1 else (1 if dim == 2 else 2))),
            inter_layer=inter_layer or ((0.0, 0.0) if dim == 3 else ()),
        )
    return GridSpec(dim, 2**qq, table, tuple(overrides))


def _parse_override(parts: list[str]) -> BoundaryOverride:
    if len(parts) < 2:
        raise ValueError("override needs a kind and a value")
    kind, value = parts[0], float(parts[1])
    selector: dict[int, int] = {}
    node_bits: dict[int, int] = {}
    row = col = None
    for p in parts[2:]:
        if "=" not in p:
            raise ValueError(f"expected key=value, got {p!r}")
        k, v = p.split("=", 1)
        if k == "sel":
            for j, ch in enumerate(v):
                selector[j] = int(ch)
        elif k == "node":
            for j, ch in enumerate(v):
                if ch in "01":
                    node_bits[j] = int(ch)
        elif k == "row":
            row = int(v)
        elif k == "col":
            col = int(v)
        else:
            raise ValueError(f"unknown override option {k!r}")
    return BoundaryOverride(kind, value, selector, node_bits, row, col)
