"""Two-qubit amplitude vectors and the local operations acting on them.

A pair state is a complex array of shape ``(4,)`` holding the coefficients of
``|00>, |01>, |10>, |11>``; the first tensor slot is the X photon and the
second is the Y photon. Every function here also accepts a stack of states
with shape ``(..., 4)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

SQRT_HALF = 1.0 / np.sqrt(2.0)


class Bell(str, enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"

    def __str__(self) -> str:
        return self.value


class Rotation(str, enum.Enum):
    XI = "xi"
    ETA = "eta"
    CHI = "chi"
    ZETA = "zeta"

    def __str__(self) -> str:
        return self.value


class Op(str, enum.Enum):
    U1 = "U1"
    U2 = "U2"
    U3 = "U3"
    U4 = "U4"
    H = "H"

    def __str__(self) -> str:
        return self.value


class Basis(str, enum.Enum):
    DIAGONAL = "diagonal"          # {|0>, |1>}
    RECTILINEAR = "rectilinear"    # {|H>, |V>}

    def other(self) -> "Basis":
        return Basis.RECTILINEAR if self is Basis.DIAGONAL else Basis.DIAGONAL

    def __str__(self) -> str:
        return self.value


class Slot(str, enum.Enum):
    X = "X"
    Y = "Y"


Label = Union[Bell, Rotation]

BELL_LABELS: tuple[Bell, ...] = tuple(Bell)
ROTATION_LABELS: tuple[Rotation, ...] = tuple(Rotation)
# Integer codes 0-3 are the Bell set, 4-7 the rotation set.
CANONICAL_LABELS: tuple[Label, ...] = BELL_LABELS + ROTATION_LABELS
LABEL_INDEX: dict[Label, int] = {lab: i for i, lab in enumerate(CANONICAL_LABELS)}

ALL_OPS: tuple[Op, ...] = tuple(Op)
PAULI_OPS: tuple[Op, ...] = (Op.U1, Op.U2, Op.U3, Op.U4)
OP_INDEX: dict[Op, int] = {op: i for i, op in enumerate(ALL_OPS)}
BASES: tuple[Basis, ...] = (Basis.DIAGONAL, Basis.RECTILINEAR)

OP_MATRICES: dict[Op, np.ndarray] = {
    Op.U1: np.array([[1, 0], [0, 1]], dtype=complex),
    Op.U2: np.array([[1, 0], [0, -1]], dtype=complex),
    Op.U3: np.array([[0, 1], [1, 0]], dtype=complex),
    # |0><1| - |1><0|, i.e. i*sigma_y
    Op.U4: np.array([[0, 1], [-1, 0]], dtype=complex),
    Op.H: SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex),
}
OP_STACK = np.stack([OP_MATRICES[op] for op in ALL_OPS])
OP_STACK_ADJOINT = np.conj(np.swapaxes(OP_STACK, -1, -2))


def _bell_amplitudes(label: Bell) -> np.ndarray:
    s = SQRT_HALF
    table = {
        Bell.PHI_PLUS: (s, 0, 0, s),
        Bell.PHI_MINUS: (s, 0, 0, -s),
        # psi states lead with |10>, so |01> carries the relative sign
        Bell.PSI_PLUS: (0, s, s, 0),
        Bell.PSI_MINUS: (0, -s, s, 0),
    }
    return np.array(table[label], dtype=complex)


# rotation state -> (first Bell, second Bell, sign of second)
ROTATION_DEFINITIONS: dict[Rotation, tuple[Bell, Bell, int]] = {
    Rotation.XI: (Bell.PHI_MINUS, Bell.PSI_PLUS, +1),
    Rotation.ETA: (Bell.PHI_PLUS, Bell.PSI_MINUS, -1),
    Rotation.CHI: (Bell.PSI_MINUS, Bell.PHI_PLUS, +1),
    Rotation.ZETA: (Bell.PSI_PLUS, Bell.PHI_MINUS, -1),
}


def bell_state(label: Bell) -> np.ndarray:
    """Return the normalized amplitude vector of a Bell state."""
    return _bell_amplitudes(Bell(label))


def rotation_state(label: Rotation) -> np.ndarray:
    """Return a rotation state, built from its two-term Bell combination."""
    first, second, sign = ROTATION_DEFINITIONS[Rotation(label)]
    return SQRT_HALF * (bell_state(first) + sign * bell_state(second))


# Rows are the unsigned canonical states in CANONICAL_LABELS order.
CANONICAL_MATRIX = np.stack(
    [bell_state(b) for b in BELL_LABELS] + [rotation_state(r) for r in ROTATION_LABELS]
)
BELL_MATRIX = CANONICAL_MATRIX[:4]


def is_bell(label: Label) -> bool:
    return isinstance(label, Bell)


@dataclass(frozen=True)
class CanonicalState:
    """One of the eight canonical pair states carrying a global sign of +1 or -1."""

    label: Label
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if not isinstance(self.label, (Bell, Rotation)):
            raise TypeError(f"not a canonical label: {self.label!r}")

    @property
    def family(self) -> str:
        return "bell" if isinstance(self.label, Bell) else "rotation"

    @property
    def in_bell_set(self) -> bool:
        return isinstance(self.label, Bell)

    @property
    def index(self) -> int:
        return LABEL_INDEX[self.label]

    def to_state(self) -> np.ndarray:
        return self.sign * CANONICAL_MATRIX[self.index].copy()

    def __neg__(self) -> "CanonicalState":
        return CanonicalState(self.label, -self.sign)

    def __str__(self) -> str:
        return ("-" if self.sign < 0 else "") + self.label.value


def _as_pairs(states: np.ndarray) -> np.ndarray:
    states = np.asarray(states, dtype=complex)
    if states.shape[-1] != 4:
        raise ValueError(f"expected trailing dimension 4, got shape {states.shape}")
    return states.reshape(states.shape[:-1] + (2, 2))


def apply_matrices(matrices: np.ndarray, slot: Slot, states: np.ndarray) -> np.ndarray:
    """Apply 2x2 ``matrices`` (broadcast against the leading axes) to one slot."""
    t = _as_pairs(states)
    if Slot(slot) is Slot.Y:
        out = np.einsum("...ij,...xj->...xi", matrices, t)
    else:
        out = np.einsum("...ij,...jy->...iy", matrices, t)
    return out.reshape(t.shape[:-2] + (4,))


def apply_local(op: Op, slot: Slot, state: np.ndarray) -> np.ndarray:
    """Return ``(M x I)`` or ``(I x M)`` applied to ``state`` for the matrix of ``op``."""
    return apply_matrices(OP_MATRICES[Op(op)], slot, state)


def apply_ops(op_indices: np.ndarray, slot: Slot, states: np.ndarray, adjoint: bool = False) -> np.ndarray:
    """Apply a different operation to each row of a ``(M, 4)`` stack.

    ``op_indices`` are positions in ``ALL_OPS``.
    """
    stack = OP_STACK_ADJOINT if adjoint else OP_STACK
    return apply_matrices(stack[np.asarray(op_indices, dtype=int)], slot, states)


def norms(states: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(np.asarray(states)) ** 2, axis=-1))


def random_states(rng: np.random.Generator, size: int | tuple = ()) -> np.ndarray:
    """Haar-random pure two-qubit states."""
    shape = (size,) if isinstance(size, int) else tuple(size)
    z = rng.normal(size=shape + (4,)) + 1j * rng.normal(size=shape + (4,))
    return z / norms(z)[..., None]
