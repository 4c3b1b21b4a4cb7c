from .measure import (
    bell_measure,
    bell_measure_many,
    bell_probabilities,
    measure_single,
    measure_single_many,
    single_probabilities,
)
from .states import (
    ALL_OPS,
    BASES,
    BELL_LABELS,
    BELL_MATRIX,
    CANONICAL_MATRIX,
    CANONICAL_LABELS,
    LABEL_INDEX,
    OP_INDEX,
    OP_MATRICES,
    PAULI_OPS,
    ROTATION_LABELS,
    Basis,
    Bell,
    CanonicalState,
    Op,
    Rotation,
    Slot,
    apply_local,
    apply_ops,
    bell_state,
    norms,
    random_states,
    rotation_state,
)
from .symbolic import (
    CORRELATIONS,
    TRANSFORM_TABLE,
    classify,
    compose,
    compose_many,
    expected_parity,
    partner_basis,
    states_equal_up_to_phase,
    table_transform,
)
