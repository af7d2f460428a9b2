"""Request/response schemas of the synthesis service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Strategy = Literal["direct", "usual"]
Parity = Literal["chain", "tree"]
ComplexMode = Literal["exact", "split"]


class GateModel(BaseModel):
    kind: str
    targets: list[int] = Field(default_factory=list)
    key: dict[int, int] = Field(default_factory=dict)
    theta: Optional[float] = None


class CircuitModel(BaseModel):
    num_qubits: int
    gates: list[GateModel]


class CountsModel(BaseModel):
    per_kind: dict[str, int]
    two_qubit: int
    depth: int
    rotations: int
    ancillas: int = 0


class VerificationModel(BaseModel):
    distance: float
    tolerance: float
    passed: bool = Field(serialization_alias="pass")


class SourceOptions(BaseModel):
    """Where the expression comes from: inline text or an app-module file."""

    expr: Optional[str] = None
    hubo: Optional[str] = None
    fermion: Optional[str] = None
    fd: Optional[str] = None
    num_qubits: Optional[int] = None


class SynthRequest(SourceOptions):
    theta: float = 1.0
    strategy: Strategy = "direct"
    parity: Parity = "chain"
    complex_mode: ComplexMode = "exact"


class SynthResponse(BaseModel):
    expr: str
    circuit: CircuitModel
    counts: CountsModel


class PauliRequest(SourceOptions):
    pass


class PauliStringModel(BaseModel):
    coefficient: float
    letters: dict[int, str]


class PauliResponse(BaseModel):
    num_qubits: int
    strings: list[PauliStringModel]


class LcuRequest(SourceOptions):
    verify: bool = True


class LcuPairModel(BaseModel):
    coefficient: float
    circuit: CircuitModel


class LcuResponse(BaseModel):
    expr: str
    num_qubits: int
    pairs: list[LcuPairModel]
    reconstruction_error: Optional[float] = None


class TrotterRequest(SourceOptions):
    t: float = 1.0
    steps: int = 1
    order: Literal[1, 2] = 1
    strategy: Strategy = "direct"
    parity: Parity = "chain"


class CountRequest(SourceOptions):
    theta: float = 1.0
    strategy: Strategy = "direct"
    parity: Parity = "chain"
    complex_mode: ComplexMode = "exact"
    compare: bool = False


class StrategyTotalsModel(BaseModel):
    direct: int
    usual: int
    crossover_order: int


class CountResponse(BaseModel):
    """Flat count report: per-kind map plus the aggregate metrics."""

    counts: dict[str, int]
    two_qubit: int
    depth: int
    rotations: int
    ancillas: int = 0
    totals: Optional[StrategyTotalsModel] = None


class VerifyRequest(SourceOptions):
    theta: float = 1.0
    strategy: Strategy = "direct"
    parity: Parity = "chain"
    complex_mode: ComplexMode = "exact"
    steps: int = 1
    order: Literal[1, 2] = 1
    tolerance: float = 1e-10


class VerifyResponse(BaseModel):
    expr: str
    counts: dict[str, int]
    two_qubit: int
    depth: int
    rotations: int
    verification: VerificationModel


class HuboRequest(BaseModel):
    problem: str
    t: float = 1.0
    strategy: Strategy = "direct"


class HuboResponse(BaseModel):
    num_vars: int
    formalism: str
    expr: str
    circuit: CircuitModel
    counts: CountsModel
    totals: StrategyTotalsModel


class FermionRequest(BaseModel):
    terms: str
    theta: float = 1.0
    parity: Parity = "chain"


class FermionResponse(BaseModel):
    num_modes: int
    expr: str
    circuit: CircuitModel
    counts: CountsModel


class FdRequest(BaseModel):
    grid: str
    theta: Optional[float] = None
    steps: int = 1
    order: Literal[1, 2] = 1
    parity: Parity = "chain"


class FdResponse(BaseModel):
    num_qubits: int
    num_terms: int
    expr: str
    oracle_distance: Optional[float] = None
    circuit: Optional[CircuitModel] = None
    counts: Optional[CountsModel] = None


class ErrorDetail(BaseModel):
    kind: Literal["parse", "invalid"]
    message: str
    line: Optional[int] = None
    column: Optional[int] = None
