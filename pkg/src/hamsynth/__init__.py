"""Circuit synthesis for Hamiltonians in the ladder/number-operator basis.

Core layers:

* :mod:`hamsynth.algebra` -- terms, expressions, Pauli expansion,
  formalism switches and Hermitization of arbitrary matrices,
* :mod:`hamsynth.circuits` -- the gate IR with arbitrary-pattern
  multi-controls, parity networks and keyed constructions,
* :mod:`hamsynth.simulate` -- exact statevector / unitary execution and the
  matrix-exponential oracle,
* :mod:`hamsynth.direct` -- exact per-term evolution circuits,
* :mod:`hamsynth.pauli_synth` -- the string-rotation baseline and Trotter
  products,
* :mod:`hamsynth.block_encoding` -- at most six weighted unitaries per term,
* :mod:`hamsynth.hubo`, :mod:`hamsynth.fermion`, :mod:`hamsynth.fdm` --
  application builders,
* :mod:`hamsynth.parser` -- the expression grammar,
* :mod:`hamsynth.service` / :mod:`hamsynth.cli` -- the HTTP surface and its
  thin command-line client.
"""

from .algebra import (
    HamiltonianExpr,
    PauliString,
    Symbol,
    Term,
    convert_formalism,
    dense_of_expr,
    dense_of_term,
    hermitize_nonhermitian,
    to_pauli_sum,
)
from .block_encoding import LcuDecomposition, be_number_family, be_term, be_transition_family
from .circuits import (
    Circuit,
    CountReport,
    Gate,
    GateKind,
    count,
    keyed_double_z,
    keyed_x_between,
    keyed_z,
    parity_network,
    transition_network,
)
from .direct import (
    DirectSynthesisOptions,
    FamilyPartition,
    classify,
    synthesize_direct,
    trotter_error_of_split,
)
from .hubo import CountModel, HuboProblem, build_expr, cost_of, crossover_threshold, synthesize_hubo
from .parser import ParseError, format_expr, parse_expr
from .pauli_synth import TrotterPlan, synthesize_pauli_rotation, trotter_product
from .simulate import apply, basis_state, circuit_unitary, expm_hermitian, phase_distance

__version__ = "0.1.0"
