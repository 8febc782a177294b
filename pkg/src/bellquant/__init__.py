"""Bell nonlocality of pure bipartite states quantified through entanglement.

Schmidt data, concurrence and negativity, two-qubit correlation-matrix
structure, the Horodecki CHSH maximum, Gisin-Peres CHSH values, analytic
lower/upper bounds on the maximal Bell violation, and a see-saw CHSH
optimizer that supplies numerical witnesses.
"""

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    BellQuantError,
    ContractViolation,
    DegenerateInputError,
    InvalidStateError,
    NumericalFailure,
)
from .states import (
    PureState,
    SchmidtData,
    make_state,
    random_haar_state,
    reduced_state,
    schmidt,
)
from .entanglement import (
    EntanglementReport,
    concurrence,
    concurrence_max,
    entanglement_report,
    negativity,
)
from .twoqubit import (
    ChshSetting,
    TwoQubitProfile,
    cofactor_identity_check,
    horodecki_settings,
    m_chsh,
    non_diagonalizability_witness,
    pauli_reconstruct,
    profile,
)
from .quditbounds import (
    BoundsReport,
    beta,
    big_k,
    bounds_report,
    gp_chsh_value,
    k_lower_bound_check,
    lb_thm4,
)
from .optimizer import SeeSawConfig, SeeSawResult, evaluate_chsh, see_saw

__version__ = "0.1.0"
