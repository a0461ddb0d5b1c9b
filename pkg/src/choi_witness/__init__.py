"""Non-Markovianity witnesses from the entropy of Choi states."""
from .choi import (
    ChoiMatrix,
    LindbladGenerator,
    Superoperator,
    choi_from_superop,
    intermediate_map,
    lindblad_action,
    max_entangled_state,
    random_cptp,
)
from .dephasing import (
    DephasingParams,
    PoleError,
    Regime,
    chi_t,
    choi_closed_form,
    gamma_t,
    linear_entropy_closed_form,
    pole_locations,
    q_closed_form,
)
from .linalg import HermitianEigenSystem, dagger, hermitian_eigen, kron, mat_mul, mat_trace, matrix_power_int
from .witnesses import (
    WitnessSample,
    linear_entropy,
    measure_ne,
    measure_ns,
    renyi_entropy,
    sur_product_gap,
    sur_q,
    witness_scan,
)

__version__ = "0.1.0"
