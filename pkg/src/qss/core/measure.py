"""Projective measurements: full Bell-basis and single-photon in either basis.

Randomness always comes from an explicitly passed ``numpy.random.Generator``.
The ``*_many`` variants work on ``(M, 4)`` stacks and draw one uniform number
per row.
"""
from __future__ import annotations

import numpy as np

from .states import (
    BASES,
    BELL_LABELS,
    BELL_MATRIX,
    OP_MATRICES,
    Basis,
    Bell,
    Op,
    Slot,
    apply_matrices,
    norms,
)

_HADAMARD = OP_MATRICES[Op.H]


def bell_probabilities(states: np.ndarray) -> np.ndarray:
    """Born probabilities over ``BELL_LABELS`` for each state, shape ``(..., 4)``."""
    amps = np.asarray(states, dtype=complex) @ BELL_MATRIX.conj().T
    return np.abs(amps) ** 2


def _sample(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    cum = np.cumsum(probs, axis=-1)
    u = rng.random(probs.shape[:-1]) * cum[..., -1]
    out = np.sum(u[..., None] >= cum, axis=-1)
    return np.minimum(out, probs.shape[-1] - 1)


def bell_measure_many(states: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Return Bell outcome codes (indices into ``BELL_LABELS``) and collapsed states."""
    codes = _sample(bell_probabilities(states), rng)
    return codes, BELL_MATRIX[codes].copy()


def bell_measure(state: np.ndarray, rng: np.random.Generator) -> tuple[Bell, np.ndarray]:
    codes, collapsed = bell_measure_many(np.asarray(state)[None, :], rng)
    return BELL_LABELS[int(codes[0])], collapsed[0]


def _rotate(states: np.ndarray, slot: Slot, rect: np.ndarray) -> np.ndarray:
    # H maps {|H>,|V>} onto {|0>,|1>} and is its own inverse.
    rotated = apply_matrices(_HADAMARD, slot, states)
    return np.where(rect[..., None], rotated, states)


def single_probabilities(states: np.ndarray, slot: Slot, basis_codes) -> np.ndarray:
    """Probabilities of outcomes 0/1 on ``slot``, shape ``(..., 2)``."""
    states = np.asarray(states, dtype=complex)
    rect = np.broadcast_to(np.asarray(basis_codes) == 1, states.shape[:-1])
    t = _rotate(states, slot, rect).reshape(states.shape[:-1] + (2, 2))
    sq = np.abs(t) ** 2
    axis = -2 if Slot(slot) is Slot.Y else -1
    return sq.sum(axis=axis)


def measure_single_many(states: np.ndarray, slot: Slot, basis_codes, rng: np.random.Generator
                        ) -> tuple[np.ndarray, np.ndarray]:
    """Measure one photon of every row; ``basis_codes`` index into ``BASES``.

    Outcome 0 is the first state of the basis (|0> or |H>). Returns the outcome
    bits and the renormalized post-measurement states.
    """
    states = np.asarray(states, dtype=complex)
    lead = states.shape[:-1]
    rect = np.broadcast_to(np.asarray(basis_codes) == 1, lead)
    t = _rotate(states, slot, rect).reshape(lead + (2, 2))
    sq = np.abs(t) ** 2
    probs = sq.sum(axis=-2 if Slot(slot) is Slot.Y else -1)
    bits = _sample(probs, rng)

    keep = np.zeros(lead + (2,), dtype=bool)
    np.put_along_axis(keep, bits[..., None], True, axis=-1)
    if Slot(slot) is Slot.Y:
        t = t * keep[..., None, :]
    else:
        t = t * keep[..., :, None]
    flat = t.reshape(lead + (4,))
    flat = flat / norms(flat)[..., None]
    return bits.astype(np.uint8), _rotate(flat, slot, rect)


def measure_single(state: np.ndarray, slot: Slot, basis: Basis, rng: np.random.Generator
                   ) -> tuple[int, np.ndarray]:
    bits, collapsed = measure_single_many(np.asarray(state)[None, :], slot,
                                          np.array([BASES.index(Basis(basis))]), rng)
    return int(bits[0]), collapsed[0]
