"""Stability of two-qubit entanglement under Pauli decoherence channels."""

from .channels import (
    IDENTITY,
    ChannelSchedule,
    PauliChannel,
    ShrinkCoefficients,
    apply_one_sided,
    apply_r_picture,
    apply_two_sided,
    depolarizing_at,
    depolarizing_schedule,
    make_dephasing,
    make_depolarizing,
)
from .dynamics import (
    critical_time,
    depolarizing_residual,
    evolve_trajectory,
    is_dps,
    local_unitary_search,
    mixed_upper_bound_check,
    optimal_family_unitary,
    residual_max,
    residual_one_sided,
    residual_schmidt,
)
from .entanglement import (
    concurrence_lorentz,
    concurrence_wootters,
    concurrence_x_form,
    eof,
    lorentz_singular_values,
)
from .qstate import (
    PureState,
    TwoQubitState,
    XFormState,
    from_pure,
    from_r_matrix,
    random_state,
    schmidt_decompose,
    spin_flip,
    to_r_matrix,
    x_form_state,
)
from .spinchain import XXZParams, evolve_reduced, ground_reduced, heisenberg_depolarizing_closed_form, xxz_hamiltonian

__version__ = "0.1.0"
