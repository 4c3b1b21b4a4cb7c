"""Table-driven transforms of the eight canonical states.

Everything here is pure label bookkeeping: no amplitudes are touched except in
:func:`classify` and :func:`states_equal_up_to_phase`, which bridge back to the
numeric engine.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .states import (
    ALL_OPS,
    BASES,
    CANONICAL_LABELS,
    CANONICAL_MATRIX,
    LABEL_INDEX,
    OP_INDEX,
    Basis,
    Bell,
    CanonicalState,
    Label,
    Op,
    Rotation,
)

CLASSIFY_TOL = 1e-9

P, M = Bell.PHI_PLUS, Bell.PHI_MINUS
SP, SM = Bell.PSI_PLUS, Bell.PSI_MINUS
XI, ETA, CHI, ZETA = Rotation.XI, Rotation.ETA, Rotation.CHI, Rotation.ZETA


def _row(*cells: tuple[Label, int]) -> list[tuple[Label, int]]:
    return list(cells)


# (op on Y, input) -> (output, sign). Columns follow phi+, phi-, psi+, psi-,
# then xi, eta, chi, zeta.
_COLUMNS: tuple[Label, ...] = (P, M, SP, SM, XI, ETA, CHI, ZETA)
_ROWS: dict[Op, list[tuple[Label, int]]] = {
    Op.U1: _row((P, 1), (M, 1), (SP, 1), (SM, 1), (XI, 1), (ETA, 1), (CHI, 1), (ZETA, 1)),
    Op.U2: _row((M, 1), (P, 1), (SM, 1), (SP, 1), (CHI, 1), (ZETA, -1), (XI, 1), (ETA, -1)),
    Op.U3: _row((SP, 1), (SM, -1), (P, 1), (M, -1), (ETA, 1), (XI, 1), (ZETA, 1), (CHI, 1)),
    Op.U4: _row((SM, 1), (SP, -1), (M, 1), (P, -1), (ZETA, -1), (CHI, 1), (ETA, -1), (XI, 1)),
    Op.H: _row((XI, 1), (ETA, 1), (CHI, 1), (ZETA, 1), (P, 1), (M, 1), (SP, 1), (SM, 1)),
}

TRANSFORM_TABLE: dict[tuple[Op, Label], CanonicalState] = {
    (op, col): CanonicalState(lab, sign)
    for op, cells in _ROWS.items()
    for col, (lab, sign) in zip(_COLUMNS, cells)
}


def _table_arrays(table: Mapping[tuple[Op, Label], CanonicalState]) -> tuple[np.ndarray, np.ndarray]:
    idx = np.empty((len(ALL_OPS), len(CANONICAL_LABELS)), dtype=np.int64)
    sign = np.empty_like(idx)
    for (op, col), out in table.items():
        idx[OP_INDEX[op], LABEL_INDEX[col]] = out.index
        sign[OP_INDEX[op], LABEL_INDEX[col]] = out.sign
    return idx, sign


TABLE_INDEX, TABLE_SIGN = _table_arrays(TRANSFORM_TABLE)


def table_transform(op: Op, state: CanonicalState,
                    table: Mapping[tuple[Op, Label], CanonicalState] = TRANSFORM_TABLE) -> CanonicalState:
    """Look up the effect of ``op`` on the Y photon of a canonical state."""
    out = table[(Op(op), state.label)]
    return CanonicalState(out.label, out.sign * state.sign)


def compose(state: CanonicalState, ops: Iterable[Op]) -> CanonicalState:
    """Push ``state`` through ``ops`` in application order."""
    for op in ops:
        state = table_transform(op, state)
    return state


def compose_many(label_idx: np.ndarray, op_chain: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`compose` over many pairs.

    ``label_idx`` holds canonical codes; ``op_chain`` is one op-index array per
    operation layer, in application order. Returns ``(codes, signs)``.
    """
    idx = np.asarray(label_idx, dtype=np.int64).copy()
    sign = np.ones_like(idx)
    for ops in op_chain:
        ops = np.asarray(ops, dtype=np.int64)
        sign = sign * TABLE_SIGN[ops, idx]
        idx = TABLE_INDEX[ops, idx]
    return idx, sign


def classify(state: np.ndarray) -> Optional[CanonicalState]:
    """Return the signed canonical state matching ``state`` exactly, or None."""
    state = np.asarray(state, dtype=complex)
    for i, row in enumerate(CANONICAL_MATRIX):
        for sign in (1, -1):
            if np.max(np.abs(state - sign * row)) < CLASSIFY_TOL:
                return CanonicalState(CANONICAL_LABELS[i], sign)
    return None


def states_equal_up_to_phase(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(abs(np.vdot(a, b)) > 1 - CLASSIFY_TOL)


# Deterministic outcome correlations: label -> {(X basis, Y basis): parity},
# parity 0 meaning the two outcome bits agree. Basis pairs absent from a row
# give uncorrelated outcomes.
D, R = Basis.DIAGONAL, Basis.RECTILINEAR
CORRELATIONS: dict[Label, dict[tuple[Basis, Basis], int]] = {
    P: {(D, D): 0, (R, R): 0},
    M: {(D, D): 0, (R, R): 1},
    SP: {(D, D): 1, (R, R): 0},
    SM: {(D, D): 1, (R, R): 1},
    XI: {(D, R): 0, (R, D): 0},
    ETA: {(D, R): 0, (R, D): 1},
    CHI: {(D, R): 1, (R, D): 0},
    ZETA: {(D, R): 1, (R, D): 1},
}


def partner_basis(label: Label, basis: Basis) -> Basis:
    """Basis for one photon that is deterministically tied to ``basis`` on the other."""
    return basis if isinstance(label, Bell) else Basis(basis).other()


def expected_parity(label: Label, x_basis: Basis, y_basis: Basis) -> Optional[int]:
    return CORRELATIONS[label].get((Basis(x_basis), Basis(y_basis)))


# PARITY[label code, x basis code, y basis code]; -1 marks no correlation.
PARITY = np.full((len(CANONICAL_LABELS), 2, 2), -1, dtype=np.int64)
for _lab, _rules in CORRELATIONS.items():
    for (_bx, _by), _par in _rules.items():
        PARITY[LABEL_INDEX[_lab], BASES.index(_bx), BASES.index(_by)] = _par
